//! Separating bipartite systems and the covering measure on `B`.
//!
//! A view `G[A, B]` is (s,t)-separating for `A` when every disjoint pair
//! `S, T ⊆ A` with `|S| <= s`, `|T| <= t` has some `v ∈ B` adjacent to all of
//! `S` and none of `T`. The covering measure `μ_{G,s,A}` draws an ordered
//! s-tuple uniformly from `A^s` (repetition allowed), then a uniform vertex
//! of `B` adjacent to every entry.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::extension::LogBase;
use crate::graph::{BipartiteView, GraphError};
use crate::query::{PairScan, Scan};

/// Largest `|A|^s` the exact routines will enumerate.
pub const MAX_TUPLES: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparatingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("tuple {0:?} has no covering vertex in B")]
    Uncovered(Vec<usize>),
    #[error("|A|^s = {a}^{s} exceeds the enumeration limit {MAX_TUPLES}")]
    TooManyTuples { a: usize, s: usize },
    #[error("A is empty; no {0}-tuples to sample")]
    EmptyA(usize),
    #[error("2^{0} does not fit in 64 bits")]
    Overflow(usize),
    #[error("at least one sample is required")]
    NoSamples,
}

/// Least failing `(S, T)` under the `(|S| + |T|, S, T)` order, if any.
pub fn find_unseparated(
    bip: &BipartiteView<'_>,
    s: usize,
    t: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let ground = bip.a().to_vec();
    let scan = PairScan {
        graph: bip.host(),
        ground: &ground,
        pool: bip.b(),
        max_x: s,
        max_y: t,
        max_total: s + t,
        independent_x: false,
        budget: None,
    };
    match scan.run() {
        Scan::Clean => None,
        Scan::Unsatisfied(x, y) => Some((x, y)),
        Scan::BudgetExhausted => unreachable!("unbudgeted scan"),
    }
}

pub fn is_separating(bip: &BipartiteView<'_>, s: usize, t: usize) -> bool {
    find_unseparated(bip, s, t).is_none()
}

/// `2^k`, the least `|B|` a (k,k)-separating view can have.
pub fn trivial_separating_bound(k: usize) -> Result<u64, SeparatingError> {
    if k >= 63 {
        return Err(SeparatingError::Overflow(k));
    }
    Ok(1u64 << k)
}

/// Ordered s-tuples of `A` grouped by the set of `B` vertices covering them.
#[derive(Debug, Clone)]
pub struct CoverTable {
    pub s: usize,
    pub a_size: usize,
    /// `|A|^s`.
    pub total: u64,
    /// `(covering set, number of ordered tuples)`, sorted by covering set.
    pub classes: Vec<(VertexSet, u64)>,
}

impl CoverTable {
    pub fn build(bip: &BipartiteView<'_>, s: usize) -> Result<Self, SeparatingError> {
        let a: Vec<usize> = bip.a().to_vec();
        if a.is_empty() && s > 0 {
            return Err(SeparatingError::EmptyA(s));
        }
        let total = (a.len() as u64)
            .checked_pow(s as u32)
            .filter(|&t| t <= MAX_TUPLES)
            .ok_or(SeparatingError::TooManyTuples { a: a.len(), s })?;
        let mut groups: HashMap<VertexSet, u64> = HashMap::new();
        let mut tuple = Vec::with_capacity(s);
        fill(bip, &a, s, &mut tuple, bip.b().clone(), &mut groups)?;
        let mut classes: Vec<(VertexSet, u64)> = groups.into_iter().collect();
        classes.sort_by_cached_key(|(set, _)| set.to_vec());
        Ok(Self {
            s,
            a_size: a.len(),
            total,
            classes,
        })
    }

    /// Ordered tuples covered by at least one vertex of `subset`.
    pub fn covered_by(&self, subset: &VertexSet) -> u64 {
        self.classes
            .iter()
            .filter(|(set, _)| !set.is_disjoint(subset))
            .map(|(_, c)| c)
            .sum()
    }
}

fn fill(
    bip: &BipartiteView<'_>,
    a: &[usize],
    s: usize,
    tuple: &mut Vec<usize>,
    cover: VertexSet,
    groups: &mut HashMap<VertexSet, u64>,
) -> Result<(), SeparatingError> {
    if cover.is_empty() {
        // extend with the least entries to name a concrete uncovered tuple
        let mut named = tuple.clone();
        named.resize(s, a.first().copied().unwrap_or(0));
        return Err(SeparatingError::Uncovered(named));
    }
    if tuple.len() == s {
        *groups.entry(cover).or_insert(0) += 1;
        return Ok(());
    }
    for &v in a {
        tuple.push(v);
        let result = fill(
            bip,
            a,
            s,
            tuple,
            cover.intersection(bip.host().neighbors(v)),
            groups,
        );
        tuple.pop();
        result?;
    }
    Ok(())
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact covering measure; every vertex of `B` has an entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringMeasure {
    pub s: usize,
    pub mass: BTreeMap<usize, BigRational>,
}

impl CoveringMeasure {
    pub fn mass_of(&self, v: usize) -> BigRational {
        self.mass.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn mass_of_set(&self, set: &VertexSet) -> BigRational {
        set.iter().map(|v| self.mass_of(v)).sum()
    }

    pub fn total(&self) -> BigRational {
        self.mass.values().sum()
    }

    /// One `vertex,numerator,denominator` line per vertex of `B`, ascending.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for (v, m) in &self.mass {
            out.push_str(&format!("{v},{},{}\n", m.numer(), m.denom()));
        }
        out
    }
}

pub fn covering_measure_exact(
    bip: &BipartiteView<'_>,
    s: usize,
) -> Result<CoveringMeasure, SeparatingError> {
    Ok(measure_from_table(bip, &CoverTable::build(bip, s)?))
}

pub fn measure_from_table(bip: &BipartiteView<'_>, table: &CoverTable) -> CoveringMeasure {
    let mut mass: BTreeMap<usize, BigRational> =
        bip.b().iter().map(|v| (v, BigRational::zero())).collect();
    for (set, count) in &table.classes {
        let share = ratio(*count, table.total * set.len() as u64);
        for v in set {
            *mass.get_mut(&v).expect("cover lies in B") += &share;
        }
    }
    CoveringMeasure { s: table.s, mass }
}

/// Empirical covering measure from the two-stage sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMeasure {
    pub s: usize,
    pub samples: u64,
    pub seed: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl SampledMeasure {
    pub fn mass_of(&self, v: usize) -> f64 {
        self.counts.get(&v).copied().unwrap_or(0) as f64 / self.samples as f64
    }

    pub fn total(&self) -> f64 {
        self.counts.keys().map(|&v| self.mass_of(v)).sum()
    }

    /// Same record layout as the exact measure: `vertex,count,samples`.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        for (v, c) in &self.counts {
            out.push_str(&format!("{v},{c},{}\n", self.samples));
        }
        out
    }
}

/// Name of the generator behind every seeded routine.
pub const PRNG_NAME: &str = "chacha8";

pub fn covering_measure_sample(
    bip: &BipartiteView<'_>,
    s: usize,
    samples: u64,
    seed: u64,
) -> Result<SampledMeasure, SeparatingError> {
    if samples == 0 {
        return Err(SeparatingError::NoSamples);
    }
    let a = bip.a().to_vec();
    if a.is_empty() && s > 0 {
        return Err(SeparatingError::EmptyA(s));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<usize, u64> = bip.b().iter().map(|v| (v, 0)).collect();
    let mut tuple = vec![0; s];
    for _ in 0..samples {
        let mut cover = bip.b().clone();
        for slot in tuple.iter_mut() {
            *slot = a[rng.random_range(0..a.len())];
            cover.intersect_with(bip.host().neighbors(*slot));
        }
        let size = cover.len();
        if size == 0 {
            return Err(SeparatingError::Uncovered(tuple));
        }
        let pick = cover
            .iter()
            .nth(rng.random_range(0..size))
            .expect("in range");
        *counts.get_mut(&pick).expect("cover lies in B") += 1;
    }
    Ok(SampledMeasure {
        s,
        samples,
        seed,
        counts,
    })
}

/// `μ(B') <= P(some x ∈ B' covers the tuple)`, both sides exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Domination {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub ok: bool,
}

pub fn measure_domination_check(
    bip: &BipartiteView<'_>,
    s: usize,
    bprime: &VertexSet,
) -> Result<Domination, SeparatingError> {
    let table = CoverTable::build(bip, s)?;
    let mu = measure_from_table(bip, &table);
    Ok(domination_from(&table, &mu, bprime))
}

pub fn domination_from(table: &CoverTable, mu: &CoveringMeasure, bprime: &VertexSet) -> Domination {
    let lhs = mu.mass_of_set(bprime);
    let rhs = ratio(table.covered_by(bprime), table.total);
    let ok = lhs <= rhs;
    Domination { lhs, rhs, ok }
}

/// Probability measure on `A` with exact rational masses.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureOnA {
    mass: BTreeMap<usize, BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("negative mass at vertex {0}")]
    Negative(usize),
    #[error("masses sum to {0}, not 1")]
    NotNormalized(String),
}

impl MeasureOnA {
    pub fn new(mass: BTreeMap<usize, BigRational>) -> Result<Self, MeasureError> {
        if let Some((&v, _)) = mass.iter().find(|(_, m)| m.is_negative()) {
            return Err(MeasureError::Negative(v));
        }
        let total: BigRational = mass.values().sum();
        if !total.is_one() {
            return Err(MeasureError::NotNormalized(total.to_string()));
        }
        Ok(Self { mass })
    }

    pub fn uniform(a: &VertexSet) -> Self {
        let size = a.len() as u64;
        Self {
            mass: a.iter().map(|v| (v, ratio(1, size))).collect(),
        }
    }

    pub fn of_set(&self, set: &VertexSet) -> BigRational {
        set.iter().filter_map(|v| self.mass.get(&v)).sum()
    }

    fn support_within(&self, a: &VertexSet) -> bool {
        self.mass.iter().all(|(&v, m)| m.is_zero() || a.contains(v))
    }
}

/// Which hypothesis of a lemma did not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Premise {
    Parameter(String),
    NotSeparating {
        s: Vec<usize>,
        t: Vec<usize>,
    },
    /// A vertex of `B` whose neighborhood has measure at least `eps`.
    HeavyNeighborhood(usize),
    /// `μ(B') <= eps`.
    MassNotAboveEps,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    PremiseFailed(Premise),
    ConclusionHolds,
    Counterexample(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ConclusionHolds => write!(f, "verdict=conclusion-holds"),
            Verdict::Counterexample(d) => write!(f, "verdict=COUNTEREXAMPLE detail={d}"),
            Verdict::PremiseFailed(p) => {
                write!(f, "verdict=premise-failed premise=")?;
                match p {
                    Premise::Parameter(why) => write!(f, "parameter detail={why}"),
                    Premise::NotSeparating { s, t } => write!(f, "separating S={s:?} T={t:?}"),
                    Premise::HeavyNeighborhood(v) => write!(f, "neighborhood-measure vertex={v}"),
                    Premise::MassNotAboveEps => write!(f, "mass"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Report {
    pub verdict: Verdict,
    /// Whether `|A| >= 2k`; reported, never enforced.
    pub size_hypothesis: bool,
}

/// If `G[A,B]` is (k,0)-separating and `μ(N(x)) < eps` on all of `B`, then
/// `|B| > eps^{-k}`. Compared exactly.
pub fn lemma1_check(
    bip: &BipartiteView<'_>,
    mu: &MeasureOnA,
    eps: &BigRational,
    k: usize,
) -> Lemma1Report {
    let size_hypothesis = bip.a().len() >= 2 * k;
    let verdict = (|| {
        if k == 0 {
            return Verdict::PremiseFailed(Premise::Parameter("k must be positive".into()));
        }
        if !eps.is_positive() {
            return Verdict::PremiseFailed(Premise::Parameter("eps must be positive".into()));
        }
        if !mu.support_within(bip.a()) {
            return Verdict::PremiseFailed(Premise::Parameter("mu is not supported on A".into()));
        }
        if let Some((s, t)) = find_unseparated(bip, k, 0) {
            return Verdict::PremiseFailed(Premise::NotSeparating { s, t });
        }
        if let Some(x) = bip
            .b()
            .iter()
            .find(|&x| mu.of_set(&bip.neighbors_in_a(x)) >= *eps)
        {
            return Verdict::PremiseFailed(Premise::HeavyNeighborhood(x));
        }
        let b = BigRational::from_integer(BigInt::from(bip.b().len()));
        if b * num::pow(eps.clone(), k) > BigRational::one() {
            Verdict::ConclusionHolds
        } else {
            Verdict::Counterexample(format!(
                "|B| = {} <= eps^-{k} with eps = {eps}",
                bip.b().len()
            ))
        }
    })();
    Lemma1Report {
        verdict,
        size_hypothesis,
    }
}

/// If `G[A,B]` is (s,0)-separating and `μ(B') > eps`, the neighborhoods of
/// `B'` cover at least `(1 - ln(1/eps)/s)|A|` vertices of `A`.
pub fn lemma2_check(
    bip: &BipartiteView<'_>,
    s: usize,
    bprime: &VertexSet,
    eps: &BigRational,
) -> Verdict {
    lemma2_check_with_base(bip, s, bprime, eps, LogBase::Natural)
}

pub fn lemma2_check_with_base(
    bip: &BipartiteView<'_>,
    s: usize,
    bprime: &VertexSet,
    eps: &BigRational,
    base: LogBase,
) -> Verdict {
    if s == 0 {
        return Verdict::PremiseFailed(Premise::Parameter("s must be positive".into()));
    }
    if !eps.is_positive() {
        return Verdict::PremiseFailed(Premise::Parameter("eps must be positive".into()));
    }
    if bprime.universe() != bip.host().n() || !bprime.is_subset(bip.b()) {
        return Verdict::PremiseFailed(Premise::Parameter("B' is not a subset of B".into()));
    }
    if let Some((s_set, t_set)) = find_unseparated(bip, s, 0) {
        return Verdict::PremiseFailed(Premise::NotSeparating { s: s_set, t: t_set });
    }
    let mu = match covering_measure_exact(bip, s) {
        Ok(mu) => mu,
        Err(e) => return Verdict::PremiseFailed(Premise::Parameter(e.to_string())),
    };
    if mu.mass_of_set(bprime) <= *eps {
        return Verdict::PremiseFailed(Premise::MassNotAboveEps);
    }
    let mut union = VertexSet::empty(bip.host().n());
    for x in bprime {
        union.union_with(&bip.neighbors_in_a(x));
    }
    let a = bip.a().len() as f64;
    let eps_f = eps.to_f64().expect("finite eps");
    let bound = (1.0 - base.log(1.0 / eps_f) / s as f64) * a;
    // slack for the floating-point logarithm only
    if union.len() as f64 >= bound - 1e-9 * a.max(1.0) {
        Verdict::ConclusionHolds
    } else {
        Verdict::Counterexample(format!("|union| = {} < {bound}", union.len()))
    }
}
