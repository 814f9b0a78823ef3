//! Extension queries, existential completeness and violation certificates.
//!
//! A query `(X, Y)` asks for a witness `z ∉ X ∪ Y` adjacent to every vertex
//! of `X` and to none of `Y`. A graph is k-existentially complete when every
//! disjoint query with `|X| + |Y| <= k` has a witness; it is k-ECTF when it is
//! triangle-free and every such query with `X` independent has a witness.
//! All query sizes up to `k` are checked, which keeps the levels monotone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{Graph, GraphError};
use crate::query::{PairScan, Scan};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("level must be at least 1")]
    ZeroLevel,
    #[error("invalid partial embedding: {0}")]
    InvalidEmbedding(String),
    #[error("bound undefined for n = {n} (requires n >= {min})")]
    BoundDomain { n: u64, min: u64 },
}

/// Which family of queries counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Triangle-free graphs, independent `X` only.
    TriangleFree,
    /// Any graph, any disjoint `(X, Y)`.
    General,
}

/// Witness must be adjacent to all of `x` and none of `y`. Both sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtensionQuery {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl ExtensionQuery {
    pub fn new(mut x: Vec<usize>, mut y: Vec<usize>) -> Self {
        x.sort_unstable();
        x.dedup();
        y.sort_unstable();
        y.dedup();
        Self { x, y }
    }

    pub fn size(&self) -> usize {
        self.x.len() + self.y.len()
    }

    /// Total order used for certificate selection: size, then `X`, then `Y`.
    pub fn order_key(&self) -> (usize, &[usize], &[usize]) {
        (self.size(), &self.x, &self.y)
    }
}

/// Lowest-index witness for `q`, if one exists.
pub fn extension_vertex(g: &Graph, q: &ExtensionQuery) -> Option<usize> {
    let mut cand = g.vertex_set();
    for &x in &q.x {
        cand.intersect_with(g.neighbors(x));
        cand.remove(x);
    }
    for &y in &q.y {
        cand.difference_with(g.neighbors(y));
        cand.remove(y);
    }
    cand.first()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
    #[error("X and Y share vertex {0}")]
    NotDisjoint(usize),
    #[error("query size {size} exceeds level {level}")]
    TooLarge { size: usize, level: usize },
    #[error("X is not independent")]
    DependentX,
    #[error("query has witness {0}")]
    HasWitness(usize),
}

/// A query with no witness: a checkable proof that a graph is not
/// `level`-complete in the relevant mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCertificate {
    pub level: usize,
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    #[serde(rename = "Y")]
    pub y: Vec<usize>,
}

impl ViolationCertificate {
    pub fn new(level: usize, query: ExtensionQuery) -> Self {
        Self {
            level,
            x: query.x,
            y: query.y,
        }
    }

    pub fn query(&self) -> ExtensionQuery {
        ExtensionQuery::new(self.x.clone(), self.y.clone())
    }

    /// Re-checks the certificate against `g` from scratch.
    pub fn verify(&self, g: &Graph, mode: Mode) -> Result<(), CertificateError> {
        let q = self.query();
        if let Some(&v) = q.x.iter().chain(&q.y).find(|&&v| v >= g.n()) {
            return Err(CertificateError::OutOfRange(v));
        }
        if let Some(&v) = q.x.iter().find(|v| q.y.contains(v)) {
            return Err(CertificateError::NotDisjoint(v));
        }
        if q.size() > self.level {
            return Err(CertificateError::TooLarge {
                size: q.size(),
                level: self.level,
            });
        }
        if mode == Mode::TriangleFree && !g.is_independent(&g.set_of(q.x.iter().copied())) {
            return Err(CertificateError::DependentX);
        }
        match extension_vertex(g, &q) {
            Some(z) => Err(CertificateError::HasWitness(z)),
            None => Ok(()),
        }
    }

    /// `{"level":k,"X":[..],"Y":[..]}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let mut cert: Self = serde_json::from_str(text)?;
        cert.x.sort_unstable();
        cert.y.sort_unstable();
        Ok(cert)
    }
}

fn check_inputs(g: &Graph, k: usize, mode: Mode) -> Result<(), ExtensionError> {
    if k == 0 {
        return Err(ExtensionError::ZeroLevel);
    }
    if mode == Mode::TriangleFree {
        g.require_triangle_free()?;
    }
    Ok(())
}

/// Least failing query of size at most `k`, in `(size, X, Y)` order.
pub(crate) fn least_failing_query(g: &Graph, k: usize, mode: Mode) -> Option<ExtensionQuery> {
    let ground: Vec<usize> = (0..g.n()).collect();
    let pool = g.vertex_set();
    let scan = PairScan {
        graph: g,
        ground: &ground,
        pool: &pool,
        max_x: k,
        max_y: k,
        max_total: k,
        independent_x: mode == Mode::TriangleFree,
        budget: None,
    };
    match scan.run() {
        Scan::Clean => None,
        Scan::Unsatisfied(x, y) => Some(ExtensionQuery::new(x, y)),
        Scan::BudgetExhausted => unreachable!("unbudgeted scan"),
    }
}

/// `None` iff the graph is `k`-complete in `mode`; otherwise the least
/// failing query, verified before it is returned.
pub fn find_violation(
    g: &Graph,
    k: usize,
    mode: Mode,
) -> Result<Option<ViolationCertificate>, ExtensionError> {
    check_inputs(g, k, mode)?;
    Ok(least_failing_query(g, k, mode).map(|q| {
        let cert = ViolationCertificate::new(k, q);
        debug_assert_eq!(cert.verify(g, mode), Ok(()));
        cert
    }))
}

pub fn is_k_ectf(g: &Graph, k: usize) -> Result<bool, ExtensionError> {
    Ok(find_violation(g, k, Mode::TriangleFree)?.is_none())
}

pub fn is_k_existentially_complete(g: &Graph, k: usize) -> Result<bool, ExtensionError> {
    Ok(find_violation(g, k, Mode::General)?.is_none())
}

/// Largest `k >= 1` for which `g` is complete in `mode`, or 0.
pub fn completeness_level(g: &Graph, mode: Mode) -> Result<usize, ExtensionError> {
    if mode == Mode::TriangleFree {
        g.require_triangle_free()?;
    }
    let mut level = 0;
    while level < g.n() && least_failing_query(g, level + 1, mode).is_none() {
        level += 1;
    }
    Ok(level)
}

/// Largest `k` for which `g` is k-ECTF (0 if not 1-ECTF).
pub fn ectf_level(g: &Graph) -> Result<usize, ExtensionError> {
    completeness_level(g, Mode::TriangleFree)
}

fn is_c5(g: &Graph) -> bool {
    g.n() == 5 && (0..5).all(|v| g.degree(v) == 2)
}

fn is_k2(g: &Graph) -> bool {
    g.n() == 2 && g.edge_count() == 1
}

/// Structural 2-ECTF test: maximal triangle-free, twin-free, neither `C5`
/// nor a single edge, and at least two vertices (below that no 2-tuple
/// exists and the all-sizes definition already fails on `Y = V`).
pub fn is_2ectf_by_characterization(g: &Graph) -> bool {
    g.n() >= 2 && g.is_maximal_triangle_free() && g.is_twin_free() && !is_c5(g) && !is_k2(g)
}

/// Injective partial map from pattern vertices into a host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialEmbedding {
    pub pattern: Graph,
    pub mapping: Vec<Option<usize>>,
}

impl PartialEmbedding {
    pub fn new(pattern: Graph, mapping: Vec<Option<usize>>) -> Self {
        Self { pattern, mapping }
    }

    pub fn empty(pattern: Graph) -> Self {
        let n = pattern.n();
        Self {
            pattern,
            mapping: vec![None; n],
        }
    }

    pub fn is_total(&self) -> bool {
        self.mapping.iter().all(Option::is_some)
    }

    /// Checks injectivity and preservation of adjacency and non-adjacency.
    pub fn validate(&self, g: &Graph) -> Result<(), ExtensionError> {
        let bad = |msg: String| Err(ExtensionError::InvalidEmbedding(msg));
        if self.mapping.len() != self.pattern.n() {
            return bad(format!(
                "mapping has {} entries for a pattern on {} vertices",
                self.mapping.len(),
                self.pattern.n()
            ));
        }
        let mut used = VertexSet::empty(g.n());
        for (u, img) in self.mapping.iter().enumerate() {
            let Some(a) = *img else { continue };
            if a >= g.n() {
                return bad(format!("image {a} of pattern vertex {u} out of range"));
            }
            if used.contains(a) {
                return bad(format!("vertex {a} is the image of two pattern vertices"));
            }
            used.insert(a);
            for (v, img2) in self.mapping.iter().enumerate().skip(u + 1) {
                let Some(b) = *img2 else { continue };
                if b < g.n() && self.pattern.has_edge(u, v) != g.has_edge(a, b) {
                    return bad(format!("pair ({u},{v}) -> ({a},{b}) changes adjacency"));
                }
            }
        }
        Ok(())
    }
}

/// Greedily completes `pe`, mapping unmapped pattern vertices in ascending
/// order to the lowest-index witness of the query they induce. Returns the
/// total image list, or `None` when some step has no witness.
pub fn extend_embedding(
    g: &Graph,
    pe: &PartialEmbedding,
) -> Result<Option<Vec<usize>>, ExtensionError> {
    pe.validate(g)?;
    let mut mapping = pe.mapping.clone();
    for u in 0..mapping.len() {
        if mapping[u].is_some() {
            continue;
        }
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (v, img) in mapping.iter().enumerate() {
            if let Some(b) = *img {
                if pe.pattern.has_edge(u, v) {
                    x.push(b);
                } else {
                    y.push(b);
                }
            }
        }
        match extension_vertex(g, &ExtensionQuery::new(x, y)) {
            Some(z) => mapping[u] = Some(z),
            None => return Ok(None),
        }
    }
    Ok(Some(
        mapping.into_iter().map(|m| m.expect("total")).collect(),
    ))
}

/// Logarithm base for the asymptotic bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// `floor(log2 n)`: an independent k-set forces `2^k` distinct adjacency
/// traces on it, so no k-ECTF graph has fewer than `2^k` vertices.
pub fn trivial_upper_bound(n: u64) -> Result<usize, ExtensionError> {
    if n < 2 {
        return Err(ExtensionError::BoundDomain { n, min: 2 });
    }
    Ok(n.ilog2() as usize)
}

/// `8 ln n / ln ln n`.
pub fn theorem_upper_bound(n: u64) -> Result<f64, ExtensionError> {
    theorem_upper_bound_with_base(n, LogBase::Natural)
}

pub fn theorem_upper_bound_with_base(n: u64, base: LogBase) -> Result<f64, ExtensionError> {
    if n < 16 {
        return Err(ExtensionError::BoundDomain { n, min: 16 });
    }
    let l = base.log(n as f64);
    Ok(8.0 * l / base.log(l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: &[usize], y: &[usize]) -> ExtensionQuery {
        ExtensionQuery::new(x.to_vec(), y.to_vec())
    }

    #[test]
    fn witness_examples() {
        let c5 = Graph::cycle(5);
        assert_eq!(extension_vertex(&c5, &q(&[0, 2], &[])), Some(1));
        assert_eq!(extension_vertex(&c5, &q(&[0, 2], &[1])), None);
        assert_eq!(extension_vertex(&c5, &q(&[], &[0, 1, 2, 3, 4])), None);
        assert_eq!(extension_vertex(&c5, &q(&[], &[])), Some(0));
    }

    #[test]
    fn witness_is_outside_the_query() {
        // a vertex of Y that has no neighbor in X ∪ Y must not be its own witness
        let g = Graph::empty(2);
        assert_eq!(extension_vertex(&g, &q(&[], &[0])), Some(1));
        assert_eq!(extension_vertex(&g, &q(&[], &[0, 1])), None);
    }

    #[test]
    fn fixture_levels() {
        let c5 = Graph::cycle(5);
        assert!(is_k_ectf(&c5, 1).unwrap());
        assert!(!is_k_ectf(&c5, 2).unwrap());
        let p = Graph::petersen();
        assert!(is_k_ectf(&p, 2).unwrap());
        assert!(!is_k_ectf(&p, 3).unwrap());
        assert_eq!(ectf_level(&c5).unwrap(), 1);
        assert_eq!(ectf_level(&Graph::complete(2)).unwrap(), 0);
        assert_eq!(ectf_level(&p).unwrap(), 2);
        assert_eq!(ectf_level(&Graph::empty(1)).unwrap(), 0);
    }

    #[test]
    fn general_mode_examples() {
        assert!(!is_k_existentially_complete(&Graph::complete(3), 1).unwrap());
        assert!(!is_k_existentially_complete(&Graph::empty(3), 1).unwrap());
        // C5 is general 1-complete: each vertex has a neighbor and a non-neighbor
        assert!(is_k_existentially_complete(&Graph::cycle(5), 1).unwrap());
    }

    #[test]
    fn certificates() {
        let c5 = Graph::cycle(5);
        let cert = find_violation(&c5, 2, Mode::TriangleFree).unwrap().unwrap();
        assert_eq!(
            cert,
            ViolationCertificate {
                level: 2,
                x: vec![],
                y: vec![0, 2]
            }
        );
        assert_eq!(cert.to_json(), r#"{"level":2,"X":[],"Y":[0,2]}"#);
        assert_eq!(
            ViolationCertificate::from_json(&cert.to_json()).unwrap(),
            cert
        );
        assert_eq!(cert.verify(&c5, Mode::TriangleFree), Ok(()));

        let k2 = Graph::complete(2);
        let cert = find_violation(&k2, 1, Mode::TriangleFree).unwrap().unwrap();
        assert_eq!((cert.x.as_slice(), cert.y.as_slice()), (&[][..], &[0][..]));

        assert_eq!(
            find_violation(&Graph::petersen(), 2, Mode::TriangleFree).unwrap(),
            None
        );
    }

    #[test]
    fn certificate_rejections() {
        let c5 = Graph::cycle(5);
        let cert = |x: Vec<usize>, y: Vec<usize>, level| ViolationCertificate { level, x, y };
        assert_eq!(
            cert(vec![0, 2], vec![1], 2).verify(&c5, Mode::TriangleFree),
            Err(CertificateError::TooLarge { size: 3, level: 2 })
        );
        assert_eq!(
            cert(vec![0, 2], vec![1], 3).verify(&c5, Mode::TriangleFree),
            Ok(())
        );
        assert_eq!(
            cert(vec![0], vec![], 1).verify(&c5, Mode::TriangleFree),
            Err(CertificateError::HasWitness(1))
        );
        assert_eq!(
            cert(vec![0, 1], vec![], 2).verify(&c5, Mode::TriangleFree),
            Err(CertificateError::DependentX)
        );
        assert_eq!(
            cert(vec![0], vec![0], 2).verify(&c5, Mode::General),
            Err(CertificateError::NotDisjoint(0))
        );
        assert_eq!(
            cert(vec![7], vec![], 2).verify(&c5, Mode::General),
            Err(CertificateError::OutOfRange(7))
        );
    }

    #[test]
    fn input_errors() {
        assert_eq!(
            find_violation(&Graph::cycle(5), 0, Mode::General),
            Err(ExtensionError::ZeroLevel)
        );
        assert!(matches!(
            is_k_ectf(&Graph::complete(3), 1),
            Err(ExtensionError::Graph(GraphError::NotTriangleFree(_)))
        ));
        assert!(ectf_level(&Graph::complete(4)).is_err());
    }

    #[test]
    fn characterization_examples() {
        assert!(!is_2ectf_by_characterization(&Graph::cycle(5)));
        assert!(!is_2ectf_by_characterization(&Graph::complete(2)));
        assert!(is_2ectf_by_characterization(&Graph::petersen()));
        assert!(!is_2ectf_by_characterization(&Graph::empty(1)));
    }

    #[test]
    fn embedding_examples() {
        let c5 = Graph::cycle(5);
        let single = PartialEmbedding::empty(Graph::empty(1));
        assert_eq!(extend_embedding(&c5, &single).unwrap(), Some(vec![0]));

        // pattern a-b-c with a=0, b=1, c=2
        let p3 = Graph::path(3);
        let pe = PartialEmbedding::new(p3.clone(), vec![Some(0), None, Some(2)]);
        assert_eq!(extend_embedding(&c5, &pe).unwrap(), Some(vec![0, 1, 2]));

        let k3 = PartialEmbedding::new(Graph::complete(3), vec![Some(0), Some(1), None]);
        assert_eq!(extend_embedding(&c5, &k3).unwrap(), None);

        let bad = PartialEmbedding::new(p3.clone(), vec![Some(0), None, Some(1)]);
        assert!(matches!(
            extend_embedding(&c5, &bad),
            Err(ExtensionError::InvalidEmbedding(_))
        ));
        let clash = PartialEmbedding::new(p3, vec![Some(0), Some(0), None]);
        assert!(clash.validate(&c5).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(trivial_upper_bound(1024).unwrap(), 10);
        assert_eq!(trivial_upper_bound(1023).unwrap(), 9);
        assert_eq!(trivial_upper_bound(2).unwrap(), 1);
        assert!(trivial_upper_bound(1).is_err());
        let v = theorem_upper_bound(1_000_000).unwrap();
        assert!((v - 42.09).abs() <= 0.01, "{v}");
        let edge = theorem_upper_bound(16).unwrap();
        assert!(edge.is_finite() && edge > 0.0);
        assert!(theorem_upper_bound(15).is_err());
        let b2 = theorem_upper_bound_with_base(1 << 16, LogBase::Two).unwrap();
        assert!((b2 - 32.0).abs() < 1e-12);
    }
}
