//! Ordered enumeration of `(X, Y)` constraint pairs.
//!
//! Shared by extension checking (ground = all vertices, pool = all vertices)
//! and the separating property (ground = A, pool = B). A pair is satisfied
//! when some pool vertex outside `X ∪ Y` is adjacent to all of `X` and none
//! of `Y`. Pairs are visited in order of `(|X| + |Y|, X, Y)`, comparing `X`
//! and `Y` as sequences of ground positions, so the first unsatisfied pair
//! found is the least one.

use crate::bitset::VertexSet;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Scan {
    /// Every pair is satisfied.
    Clean,
    /// Least unsatisfied pair, as vertex lists in ground order.
    Unsatisfied(Vec<usize>, Vec<usize>),
    /// The leaf budget ran out before a verdict.
    BudgetExhausted,
}

pub(crate) struct PairScan<'a> {
    pub graph: &'a Graph,
    pub ground: &'a [usize],
    pub pool: &'a VertexSet,
    pub max_x: usize,
    pub max_y: usize,
    pub max_total: usize,
    pub independent_x: bool,
    pub budget: Option<u64>,
}

struct Run<'a> {
    scan: &'a PairScan<'a>,
    remaining: Option<u64>,
    exhausted: bool,
}

impl PairScan<'_> {
    pub fn run(&self) -> Scan {
        let mut run = Run {
            scan: self,
            remaining: self.budget,
            exhausted: false,
        };
        let top = self.max_total.min(self.max_x + self.max_y);
        for size in 0..=top {
            let mut xs = Vec::new();
            let mut x_set = VertexSet::empty(self.graph.n());
            if let Some((x, y)) = run.visit_x(size, 0, &mut xs, &mut x_set, self.pool.clone()) {
                return Scan::Unsatisfied(x, y);
            }
            if run.exhausted {
                return Scan::BudgetExhausted;
            }
        }
        Scan::Clean
    }
}

impl Run<'_> {
    fn tick(&mut self) -> bool {
        match &mut self.remaining {
            Some(0) => {
                self.exhausted = true;
                false
            }
            Some(r) => {
                *r -= 1;
                true
            }
            None => true,
        }
    }

    fn to_vertices(&self, positions: &[usize]) -> Vec<usize> {
        positions.iter().map(|&p| self.scan.ground[p]).collect()
    }

    /// Preorder over X (as position sequences), trying every Y for each X.
    fn visit_x(
        &mut self,
        size: usize,
        start: usize,
        xs: &mut Vec<usize>,
        x_set: &mut VertexSet,
        cand: VertexSet,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        let s = self.scan;
        let y_len = size - xs.len();
        if y_len <= s.max_y {
            let mut ys = Vec::with_capacity(y_len);
            if let Some(ys) = self.visit_y(y_len, 0, xs, &mut ys, cand.clone()) {
                return Some((self.to_vertices(xs), self.to_vertices(&ys)));
            }
            if self.exhausted {
                return None;
            }
        }
        if xs.len() == size.min(s.max_x) {
            return None;
        }
        for p in start..s.ground.len() {
            let v = s.ground[p];
            if s.independent_x && !s.graph.neighbors(v).is_disjoint(x_set) {
                continue;
            }
            let next = cand.intersection(s.graph.neighbors(v));
            xs.push(p);
            x_set.insert(v);
            let found = self.visit_x(size, p + 1, xs, x_set, next);
            x_set.remove(v);
            xs.pop();
            if found.is_some() || self.exhausted {
                return found;
            }
        }
        None
    }

    /// Lexicographic `r`-combinations of positions not in `xs`, starting at `start`.
    fn visit_y(
        &mut self,
        r: usize,
        start: usize,
        xs: &[usize],
        ys: &mut Vec<usize>,
        cand: VertexSet,
    ) -> Option<Vec<usize>> {
        let s = self.scan;
        if r == 0 {
            if !self.tick() {
                return None;
            }
            return cand.is_empty().then(|| ys.clone());
        }
        if cand.is_empty() {
            // every completion fails; the least one takes the next free positions
            if !self.tick() {
                return None;
            }
            let mut out = ys.clone();
            out.extend((start..s.ground.len()).filter(|p| !xs.contains(p)).take(r));
            return (out.len() == ys.len() + r).then_some(out);
        }
        for p in start..s.ground.len() {
            if xs.contains(&p) {
                continue;
            }
            let v = s.ground[p];
            let mut next = cand.difference(s.graph.neighbors(v));
            next.remove(v);
            ys.push(p);
            let found = self.visit_y(r - 1, p + 1, xs, ys, next);
            ys.pop();
            if found.is_some() || self.exhausted {
                return found;
            }
        }
        None
    }
}
