//! Vertex-discovery refutation of a claimed completeness level.
//!
//! Starting from an independent set `I` with pivot `x0` and `J = I \ {x0}`,
//! each step picks the least `m`-tuple `y` over `J` not yet covered by a
//! discovered vertex, forms
//!
//! * `B`: neighbors of `x0` with no neighbor in `y`,
//! * `A = I \ ({x0} ∪ y)`,
//! * joiners: common neighbors of `y`,
//!
//! and looks for a joiner `w` whose `B`-neighborhood is heavy under the
//! covering measure of `G[A, B]`. A heavy `w` is new (no earlier `w` covers
//! `y`) and the loop continues; every other branch is turned into an
//! extension query with no witness. Since there are only `n` vertices, a
//! correct run on a graph that really is complete at the claimed level is
//! impossible, so the loop must end in a certificate or an explicit
//! inconclusive reason.

use std::fmt;

use num::{BigInt, BigRational, FromPrimitive, One, Signed};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::extension::{
    find_violation, ExtensionError, ExtensionQuery, Mode, ViolationCertificate,
};
use crate::graph::{BipartiteView, Graph, GraphError};
use crate::query::{PairScan, Scan};
use crate::separating::{find_unseparated, measure_from_table, CoverTable, SeparatingError};

/// A set of ordered `m`-tuples over `J`, stored as `J^m` minus the union of
/// `F^m` over the forbidden sets `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicitTupleFamily {
    j: Vec<usize>,
    m: usize,
    forbidden: Vec<VertexSet>,
    distinct: bool,
}

impl ImplicitTupleFamily {
    pub fn new(j: &VertexSet, m: usize) -> Self {
        Self {
            j: j.to_vec(),
            m,
            forbidden: Vec::new(),
            distinct: false,
        }
    }

    /// Only tuples with pairwise distinct entries.
    pub fn with_distinct_entries(mut self, distinct: bool) -> Self {
        self.distinct = distinct;
        self
    }

    pub fn ground(&self) -> &[usize] {
        &self.j
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn forbidden(&self) -> &[VertexSet] {
        &self.forbidden
    }

    pub fn forbid(&mut self, set: VertexSet) {
        self.forbidden.push(set);
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        if tuple.len() != self.m || !tuple.iter().all(|v| self.j.contains(v)) {
            return false;
        }
        if self.distinct && (1..tuple.len()).any(|i| tuple[..i].contains(&tuple[i])) {
            return false;
        }
        !self
            .forbidden
            .iter()
            .any(|f| tuple.iter().all(|&v| f.contains(v)))
    }

    /// Lexicographically least member, if any.
    pub fn pick(&self) -> Option<Vec<usize>> {
        let alive: Vec<usize> = (0..self.forbidden.len()).collect();
        self.pick_from(&mut Vec::with_capacity(self.m), &alive)
    }

    fn pick_from(&self, prefix: &mut Vec<usize>, alive: &[usize]) -> Option<Vec<usize>> {
        if prefix.len() == self.m {
            return alive.is_empty().then(|| prefix.clone());
        }
        if alive.is_empty() {
            // no forbidden set can contain any completion
            let mut out = prefix.clone();
            let rest = self.m - prefix.len();
            if self.distinct {
                out.extend(self.j.iter().filter(|v| !prefix.contains(v)).take(rest));
            } else if let Some(&least) = self.j.first() {
                out.extend(std::iter::repeat_n(least, rest));
            }
            return (out.len() == self.m).then_some(out);
        }
        for &v in &self.j {
            if self.distinct && prefix.contains(&v) {
                continue;
            }
            let next: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&i| self.forbidden[i].contains(v))
                .collect();
            prefix.push(v);
            let found = self.pick_from(prefix, &next);
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// `(1 - t * alpha^m) * |J|^m`.
    pub fn lower_bound(&self, alpha: f64, t: usize) -> f64 {
        let m = self.m as i32;
        (1.0 - t as f64 * alpha.powi(m)) * (self.j.len() as f64).powi(m)
    }

    /// Exact size by enumeration; `None` when `|J|^m` exceeds `limit`.
    pub fn exact_len(&self, limit: u64) -> Option<u64> {
        let total = (self.j.len() as u64).checked_pow(self.m as u32)?;
        if total > limit {
            return None;
        }
        let mut count = 0u64;
        let mut tuple = vec![0usize; self.m];
        for mut code in 0..total {
            for slot in tuple.iter_mut() {
                *slot = self.j[(code % self.j.len() as u64) as usize];
                code /= self.j.len() as u64;
            }
            if self.contains(&tuple) {
                count += 1;
            }
        }
        Some(count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pivot {
    #[default]
    Lowest,
    Vertex(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamMode {
    /// `m`, `theta` and `alpha` chosen freely.
    Parametric,
    /// Constants derived from `n` and the level; refused unless the
    /// asymptotic inequalities hold.
    StrictPaper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefutationParams {
    /// Tuple length.
    pub m: usize,
    /// Heaviness root; informational unless `theta` is derived from it.
    pub eps: f64,
    /// Heaviness threshold for `μ(N_B(w))`.
    pub theta: BigRational,
    /// Per-step covered-fraction bound used for the family lower bound.
    pub alpha: f64,
    pub mode: ParamMode,
    pub pivot: Pivot,
    pub distinct_entries: bool,
    /// Leaf budget for the failing-pair search when no heavy vertex exists.
    pub search_budget: u64,
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

impl RefutationParams {
    /// Parametric run with `alpha = (3 / 2m) ln(1/theta)` and `eps = sqrt(theta)`.
    pub fn parametric(m: usize, theta: BigRational) -> Self {
        let t = num::ToPrimitive::to_f64(&theta).unwrap_or(f64::NAN);
        Self {
            m,
            eps: t.sqrt(),
            alpha: 3.0 / (2.0 * m as f64) * (1.0 / t).ln(),
            theta,
            mode: ParamMode::Parametric,
            pivot: Pivot::Lowest,
            distinct_entries: false,
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    /// Parametric run with `theta = eps^2`.
    pub fn from_eps(m: usize, eps: f64) -> Option<Self> {
        let theta = BigRational::from_f64(eps * eps)?;
        let mut p = Self::parametric(m, theta);
        p.eps = eps;
        Some(p)
    }

    /// Constants of the asymptotic argument for an `n`-vertex graph and a
    /// claimed level `2k`: `eps = 4 / ln ln n`, `m = k/2`,
    /// `alpha = (3/k) ln(eps^-2)`. Refused with a report when any of the
    /// required inequalities fails.
    pub fn strict(n: usize, level: usize) -> Result<Self, GateReport> {
        let report = strict_gate(n, level);
        if !report.failures.is_empty() {
            return Err(report);
        }
        let theta = BigRational::from_f64(report.eps * report.eps).ok_or_else(|| {
            let mut r = report.clone();
            r.failures.push(GateFailure::Domain);
            r
        })?;
        Ok(Self {
            m: level / 4,
            eps: report.eps,
            theta,
            alpha: report.alpha,
            mode: ParamMode::StrictPaper,
            pivot: Pivot::Lowest,
            distinct_entries: false,
            search_budget: DEFAULT_SEARCH_BUDGET,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateFailure {
    /// `ln ln n` is not positive.
    Domain,
    /// The level is not `2k` with `k` even and positive.
    LevelShape,
    /// `k < 4 ln n / ln ln n`.
    LevelBelowThreshold { k: usize, threshold: f64 },
    /// `alpha^(-k/2) > n` fails.
    AlphaPower { alpha: f64, value: f64 },
    /// `(2/k) ln(eps^-2) + k / (sqrt(n) - 2) <= alpha` fails.
    AlphaDominance { lhs: f64, alpha: f64 },
}

impl fmt::Display for GateFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateFailure::Domain => write!(f, "ln ln n <= 0 (n too small)"),
            GateFailure::LevelShape => write!(f, "level must be 2k with k even and positive"),
            GateFailure::LevelBelowThreshold { k, threshold } => {
                write!(
                    f,
                    "k >= 4 ln n / ln ln n fails (k = {k}, threshold {threshold:.4})"
                )
            }
            GateFailure::AlphaPower { alpha, value } => write!(
                f,
                "alpha^(-k/2) > n fails (alpha = {alpha:.6}, alpha^(-k/2) = {value:.6})"
            ),
            GateFailure::AlphaDominance { lhs, alpha } => write!(
                f,
                "(2/k) ln(eps^-2) + k/(sqrt(n) - 2) <= alpha fails ({lhs:.6} > {alpha:.6})"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub n: usize,
    pub level: usize,
    pub eps: f64,
    pub alpha: f64,
    pub failures: Vec<GateFailure>,
}

impl fmt::Display for GateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "strict gate n={} level={} eps={:.6} alpha={:.6}",
            self.n, self.level, self.eps, self.alpha
        )?;
        if self.failures.is_empty() {
            return write!(f, ": passed");
        }
        for failure in &self.failures {
            write!(f, "; {failure}")?;
        }
        Ok(())
    }
}

/// Evaluates every strict-mode condition for `n` vertices and `level = 2k`.
pub fn strict_gate(n: usize, level: usize) -> GateReport {
    let mut failures = Vec::new();
    let nf = n as f64;
    let lnln = nf.ln().ln();
    let k = level / 2;
    if !level.is_multiple_of(4) || level == 0 {
        failures.push(GateFailure::LevelShape);
    }
    if lnln.is_nan() || lnln <= 0.0 {
        failures.push(GateFailure::Domain);
        return GateReport {
            n,
            level,
            eps: f64::NAN,
            alpha: f64::NAN,
            failures,
        };
    }
    let eps = 4.0 / lnln;
    let kf = k.max(1) as f64;
    let alpha = 3.0 / kf * (eps.powi(-2)).ln();
    let threshold = 4.0 * nf.ln() / lnln;
    if (k as f64) < threshold {
        failures.push(GateFailure::LevelBelowThreshold { k, threshold });
    }
    let value = alpha.powf(-kf / 2.0);
    // a non-positive alpha leaves the power undefined; that counts as failing
    if !(alpha > 0.0 && value > nf) {
        failures.push(GateFailure::AlphaPower { alpha, value });
    }
    let lhs = 2.0 / kf * (eps.powi(-2)).ln() + kf / (nf.sqrt() - 2.0);
    if !(nf.sqrt() > 2.0 && lhs <= alpha) {
        failures.push(GateFailure::AlphaDominance { lhs, alpha });
    }
    GateReport {
        n,
        level,
        eps,
        alpha,
        failures,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `G[A, B]` is not `(m, m-1)`-separating.
    Unseparated,
    /// No neighbor of `x0` avoids the tuple.
    EmptyB,
    /// The tuple has no common neighbor.
    EmptyJoiners,
    /// No heavy joiner, and `theta^-m > n` forces `G[B, joiners]` to fail.
    NoHeavyVertex,
    /// The independent set was too small; the certificate came from the
    /// exhaustive search.
    Fallback,
}

impl Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Branch::Unseparated => "unseparated",
            Branch::EmptyB => "empty-b",
            Branch::EmptyJoiners => "empty-joiners",
            Branch::NoHeavyVertex => "no-heavy-vertex",
            Branch::Fallback => "fallback",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    GraphTooSmall,
    /// No heavy joiner and `theta^-m <= n`.
    ParameterRegime,
    /// The tuple family ran empty.
    AlphaRegime,
    SearchBudget,
    /// `|A|^m` is beyond the exact-measure limit.
    MeasureLimit,
}

impl InconclusiveReason {
    pub fn tag(self) -> &'static str {
        match self {
            InconclusiveReason::GraphTooSmall => "graph-too-small",
            InconclusiveReason::ParameterRegime => "parameter-regime",
            InconclusiveReason::AlphaRegime => "alpha-regime",
            InconclusiveReason::SearchBudget => "search-budget",
            InconclusiveReason::MeasureLimit => "measure-limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepEvent {
    Heavy {
        w: usize,
        weight: BigRational,
        /// `N(w) ∩ J`, added to the forbidden sets.
        covered: Vec<usize>,
    },
    Branch(Branch),
    Inconclusive(InconclusiveReason),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub t: usize,
    pub y: Vec<usize>,
    pub b_size: usize,
    pub joiners_size: usize,
    /// `(1 - (t-1) alpha^m) |J|^m`, the guaranteed size of the family the tuple came from.
    pub family_bound: f64,
    pub event: StepEvent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Certificate {
        certificate: ViolationCertificate,
        branch: Branch,
    },
    Inconclusive(InconclusiveReason),
    VertexOverflow(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefutationTrace {
    pub n: usize,
    pub level: usize,
    pub m: usize,
    pub theta: BigRational,
    pub independent_set: Vec<usize>,
    pub pivot: Option<usize>,
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

impl RefutationTrace {
    pub fn certificate(&self) -> Option<&ViolationCertificate> {
        match &self.outcome {
            Outcome::Certificate { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    /// Discovered vertices `w_1, w_2, ...` in order.
    pub fn discovered(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter_map(|s| match s.event {
                StepEvent::Heavy { w, .. } => Some(w),
                _ => None,
            })
            .collect()
    }

    fn header(&self) -> String {
        format!(
            "refute n={} level={} m={} theta={} I={:?} x0={}",
            self.n,
            self.level,
            self.m,
            self.theta,
            self.independent_set,
            self.pivot.map_or("-".to_string(), |p| p.to_string())
        )
    }

    pub fn outcome_line(&self) -> String {
        match &self.outcome {
            Outcome::Certificate {
                certificate,
                branch,
            } => format!(
                "outcome=certificate branch={} certificate={}",
                branch.tag(),
                certificate.to_json()
            ),
            Outcome::Inconclusive(r) => format!("outcome=inconclusive reason={}", r.tag()),
            Outcome::VertexOverflow(ws) => format!("outcome=vertex-overflow vertices={ws:?}"),
        }
    }

    /// Header, one line per step, then the outcome record.
    pub fn to_log(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for step in &self.steps {
            out.push_str(&step.to_string());
            out.push('\n');
        }
        out.push_str(&self.outcome_line());
        out.push('\n');
        out
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y: Vec<String> = self.y.iter().map(ToString::to_string).collect();
        write!(
            f,
            "step t={} y=[{}] b={} joiners={} bound={:.4} ",
            self.t,
            y.join(","),
            self.b_size,
            self.joiners_size,
            self.family_bound
        )?;
        match &self.event {
            StepEvent::Heavy { w, weight, .. } => write!(f, "w={w} weight={weight}"),
            StepEvent::Branch(b) => write!(f, "branch={}", b.tag()),
            StepEvent::Inconclusive(r) => write!(f, "inconclusive={}", r.tag()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefutationError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error("level {level} is below 3m = {needed}")]
    LevelTooSmall { level: usize, needed: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("pivot {0} is not in the independent set")]
    PivotNotInIndependentSet(usize),
    #[error("strict mode refused: {0}")]
    StrictRefused(GateReport),
    #[error("internal invariant violated: {0}")]
    Unsound(String),
}

fn finish(
    g: &Graph,
    level: usize,
    branch: Branch,
    x: Vec<usize>,
    y: Vec<usize>,
) -> Result<Outcome, RefutationError> {
    let certificate = ViolationCertificate::new(level, ExtensionQuery::new(x, y));
    certificate.verify(g, Mode::TriangleFree).map_err(|e| {
        RefutationError::Unsound(format!("{} certificate rejected: {e}", branch.tag()))
    })?;
    Ok(Outcome::Certificate {
        certificate,
        branch,
    })
}

/// Runs the discovery loop on `g` against the claimed `level`.
pub fn refute(
    g: &Graph,
    level: usize,
    params: &RefutationParams,
) -> Result<RefutationTrace, RefutationError> {
    g.require_triangle_free()?;
    let params = match params.mode {
        ParamMode::StrictPaper => {
            let mut strict =
                RefutationParams::strict(g.n(), level).map_err(RefutationError::StrictRefused)?;
            strict.pivot = params.pivot;
            strict.distinct_entries = params.distinct_entries;
            strict.search_budget = params.search_budget;
            strict
        }
        ParamMode::Parametric => params.clone(),
    };
    let m = params.m;
    if m == 0 {
        return Err(RefutationError::InvalidParams(
            "m must be at least 1".into(),
        ));
    }
    if !params.theta.is_positive() || params.theta > BigRational::one() {
        return Err(RefutationError::InvalidParams(
            "theta must lie in (0, 1]".into(),
        ));
    }
    if level < 3 * m {
        return Err(RefutationError::LevelTooSmall {
            level,
            needed: 3 * m,
        });
    }

    let n = g.n();
    let independent = g.greedy_large_independent_set()?;
    let mut trace = RefutationTrace {
        n,
        level,
        m,
        theta: params.theta.clone(),
        independent_set: independent.to_vec(),
        pivot: None,
        steps: Vec::new(),
        outcome: Outcome::Inconclusive(InconclusiveReason::GraphTooSmall),
    };
    let x0 = match params.pivot {
        Pivot::Vertex(v) if !independent.contains(v) => {
            return Err(RefutationError::PivotNotInIndependentSet(v))
        }
        Pivot::Vertex(v) => Some(v),
        Pivot::Lowest => independent.first(),
    };
    if independent.len() < m + 2 {
        if let Some(cert) = find_violation(g, level, Mode::TriangleFree)? {
            trace.outcome = finish(g, level, Branch::Fallback, cert.x, cert.y)?;
        }
        return Ok(trace);
    }
    let x0 = x0.expect("independent set is nonempty");
    trace.pivot = Some(x0);
    let mut j = independent.clone();
    j.remove(x0);
    let mut family = ImplicitTupleFamily::new(&j, m).with_distinct_entries(params.distinct_entries);
    let n_big = BigRational::from_integer(BigInt::from(n));
    let forces_failure = num::pow(params.theta.clone(), m) * &n_big < BigRational::one();
    let mut discovered = VertexSet::empty(n);

    for t in 1..=n + 1 {
        let family_bound = family.lower_bound(params.alpha, t - 1);
        let Some(y) = family.pick() else {
            trace.outcome = Outcome::Inconclusive(InconclusiveReason::AlphaRegime);
            return Ok(trace);
        };
        let y_set = g.set_of(y.iter().copied());
        let mut b = g.neighbors(x0).clone();
        for v in &y_set {
            b.difference_with(g.neighbors(v));
        }
        let joiners = g.common_neighbors(&y_set);
        let mut step = Step {
            t,
            y: y.clone(),
            b_size: b.len(),
            joiners_size: joiners.len(),
            family_bound,
            event: StepEvent::Branch(Branch::EmptyB),
        };
        let y_list = y_set.to_vec();

        if b.is_empty() {
            trace.steps.push(step);
            trace.outcome = finish(g, level, Branch::EmptyB, vec![x0], y_list)?;
            return Ok(trace);
        }

        let mut a = independent.difference(&y_set);
        a.remove(x0);
        let ab = BipartiteView::new(g, a, b.clone())?;
        if let Some((s, t_set)) = find_unseparated(&ab, m, m - 1) {
            step.event = StepEvent::Branch(Branch::Unseparated);
            trace.steps.push(step);
            let x: Vec<usize> = std::iter::once(x0).chain(s).collect();
            let y: Vec<usize> = y_list.into_iter().chain(t_set).collect();
            trace.outcome = finish(g, level, Branch::Unseparated, x, y)?;
            return Ok(trace);
        }

        if joiners.is_empty() {
            step.event = StepEvent::Branch(Branch::EmptyJoiners);
            trace.steps.push(step);
            trace.outcome = finish(g, level, Branch::EmptyJoiners, y_list, vec![])?;
            return Ok(trace);
        }

        let table = match CoverTable::build(&ab, m) {
            Ok(table) => table,
            Err(SeparatingError::TooManyTuples { .. }) => {
                step.event = StepEvent::Inconclusive(InconclusiveReason::MeasureLimit);
                trace.steps.push(step);
                trace.outcome = Outcome::Inconclusive(InconclusiveReason::MeasureLimit);
                return Ok(trace);
            }
            Err(e) => return Err(RefutationError::Unsound(e.to_string())),
        };
        let mu = measure_from_table(&ab, &table);
        let heavy = joiners.iter().find_map(|w| {
            let weight = mu.mass_of_set(&ab.neighbors_in_b(w));
            (weight >= params.theta).then_some((w, weight))
        });

        match heavy {
            Some((w, weight)) => {
                if discovered.contains(w) {
                    return Err(RefutationError::Unsound(format!(
                        "vertex {w} discovered twice"
                    )));
                }
                // w sees nothing that its B-neighbors see in A
                let mut shadow = VertexSet::empty(n);
                for x in ab.neighbors_in_b(w).iter() {
                    shadow.union_with(&ab.neighbors_in_a(x));
                }
                if !g.neighbors(w).is_disjoint(&shadow) {
                    return Err(RefutationError::Unsound(format!(
                        "heavy vertex {w} closes a triangle"
                    )));
                }
                discovered.insert(w);
                let covered = g.neighbors(w).intersection(&j);
                step.event = StepEvent::Heavy {
                    w,
                    weight,
                    covered: covered.to_vec(),
                };
                trace.steps.push(step);
                family.forbid(covered);
            }
            None if forces_failure => {
                let outcome = no_heavy_certificate(g, level, &params, &b, &joiners, &mu, &y_list)?;
                step.event = match &outcome {
                    Outcome::Inconclusive(r) => StepEvent::Inconclusive(*r),
                    _ => StepEvent::Branch(Branch::NoHeavyVertex),
                };
                trace.steps.push(step);
                trace.outcome = outcome;
                return Ok(trace);
            }
            None => {
                step.event = StepEvent::Inconclusive(InconclusiveReason::ParameterRegime);
                trace.steps.push(step);
                trace.outcome = Outcome::Inconclusive(InconclusiveReason::ParameterRegime);
                return Ok(trace);
            }
        }
    }

    trace.outcome = Outcome::VertexOverflow(discovered.to_vec());
    Ok(trace)
}

/// `G[B, joiners]` cannot be (m,0)-separating for `B` here; find a failing
/// `(S, T)` scanning `B` in decreasing measure order.
fn no_heavy_certificate(
    g: &Graph,
    level: usize,
    params: &RefutationParams,
    b: &VertexSet,
    joiners: &VertexSet,
    mu: &crate::separating::CoveringMeasure,
    y_list: &[usize],
) -> Result<Outcome, RefutationError> {
    let mut ground = b.to_vec();
    ground.sort_by(|&u, &v| mu.mass_of(v).cmp(&mu.mass_of(u)).then(u.cmp(&v)));
    let scan = PairScan {
        graph: g,
        ground: &ground,
        pool: joiners,
        max_x: params.m,
        max_y: params.m,
        max_total: 2 * params.m,
        independent_x: false,
        budget: Some(params.search_budget),
    };
    match scan.run() {
        Scan::Unsatisfied(s, t) => {
            let x: Vec<usize> = s.into_iter().chain(y_list.iter().copied()).collect();
            finish(g, level, Branch::NoHeavyVertex, x, t)
        }
        Scan::BudgetExhausted => Ok(Outcome::Inconclusive(InconclusiveReason::SearchBudget)),
        Scan::Clean => Err(RefutationError::Unsound(
            "no heavy joiner yet G[B, joiners] is (m,m)-separating".into(),
        )),
    }
}
