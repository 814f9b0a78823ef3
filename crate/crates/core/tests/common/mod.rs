//! Brute-force oracles shared by the integration tests. They work on plain
//! adjacency matrices and subset masks and share no code with the library
//! algorithms they check.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ectf_core::Graph;
use num::{BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Matrix = Vec<Vec<bool>>;

pub fn matrix(g: &Graph) -> Matrix {
    let n = g.n();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

pub fn from_matrix(m: &Matrix) -> Graph {
    let n = m.len();
    let mut edges = Vec::new();
    for (u, row) in m.iter().enumerate() {
        edges.extend((u + 1..n).filter(|&v| row[v]).map(|v| (u, v)));
    }
    Graph::new(n, edges).unwrap()
}

pub fn triangle_free(m: &Matrix) -> bool {
    let n = m.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if m[a][b] && m[b][c] && m[a][c] {
                    return false;
                }
            }
        }
    }
    true
}

/// Every disjoint `(X, Y)` with `|X| + |Y| <= k` (and `X` independent when
/// `independent_x`) has a witness outside `X ∪ Y`. Labels each vertex
/// out / X / Y in base 3.
pub fn extension_complete(m: &Matrix, k: usize, independent_x: bool) -> bool {
    let n = m.len();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut c = code;
        for v in 0..n {
            match c % 3 {
                1 => x.push(v),
                2 => y.push(v),
                _ => {}
            }
            c /= 3;
        }
        if x.len() + y.len() > k {
            continue;
        }
        if independent_x && x.iter().any(|&a| x.iter().any(|&b| m[a][b])) {
            continue;
        }
        let witness = (0..n).any(|z| {
            !x.contains(&z)
                && !y.contains(&z)
                && x.iter().all(|&a| m[z][a])
                && y.iter().all(|&b| !m[z][b])
        });
        if !witness {
            return false;
        }
    }
    true
}

pub fn ectf(m: &Matrix, k: usize) -> bool {
    triangle_free(m) && extension_complete(m, k, true)
}

/// Largest `k` with `ectf(m, k)`; `0` when not even 1-ECTF.
pub fn ectf_level(m: &Matrix) -> usize {
    let mut k = 0;
    while k < m.len() && ectf(m, k + 1) {
        k += 1;
    }
    k
}

/// All labeled triangle-free graphs on `p` vertices as matrices.
pub fn triangle_free_patterns(p: usize) -> Vec<Matrix> {
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let mut h = vec![vec![false; p]; p];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                h[i][j] = true;
                h[j][i] = true;
            }
        }
        if triangle_free(&h) {
            out.push(h);
        }
    }
    out
}

/// Calls `visit` with every partial embedding of `h` into `g` (as a map
/// from pattern vertices to optional host vertices). Stops early when
/// `visit` returns false, and then returns false.
pub fn for_each_partial_embedding(
    h: &Matrix,
    g: &Matrix,
    visit: &mut dyn FnMut(&[Option<usize>]) -> bool,
) -> bool {
    let p = h.len();
    for domain in 0u32..1 << p {
        let mut map = vec![None; p];
        if !assign(h, g, domain, 0, &mut map, visit) {
            return false;
        }
    }
    true
}

fn consistent(h: &Matrix, g: &Matrix, map: &[Option<usize>], u: usize, img: usize) -> bool {
    map.iter().enumerate().all(|(v, &m)| match m {
        None => true,
        Some(b) => b != img && h[u][v] == g[img][b],
    })
}

fn assign(
    h: &Matrix,
    g: &Matrix,
    domain: u32,
    u: usize,
    map: &mut Vec<Option<usize>>,
    visit: &mut dyn FnMut(&[Option<usize>]) -> bool,
) -> bool {
    if u == h.len() {
        return visit(map);
    }
    if domain >> u & 1 == 0 {
        return assign(h, g, domain, u + 1, map, visit);
    }
    for img in 0..g.len() {
        if consistent(h, g, map, u, img) {
            map[u] = Some(img);
            let go_on = assign(h, g, domain, u + 1, map, visit);
            map[u] = None;
            if !go_on {
                return false;
            }
        }
    }
    true
}

/// Whether the partial embedding extends to a total one (backtracking).
pub fn extends(h: &Matrix, g: &Matrix, map: &mut Vec<Option<usize>>) -> bool {
    let Some(u) = map.iter().position(Option::is_none) else {
        return true;
    };
    for img in 0..g.len() {
        if consistent(h, g, map, u, img) {
            map[u] = Some(img);
            let ok = extends(h, g, map);
            map[u] = None;
            if ok {
                return true;
            }
        }
    }
    false
}

/// Every partial embedding of every triangle-free pattern on `k + 1`
/// vertices extends to a total embedding.
pub fn embedding_property(g: &Matrix, k: usize) -> bool {
    triangle_free_patterns(k + 1)
        .iter()
        .all(|h| for_each_partial_embedding(h, g, &mut |map| extends(h, g, &mut map.to_vec())))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `(i, j)` pairs, `i < j`, in graph6 column order.
pub fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect()
}

/// graph6 bit string as a number, first pair most significant.
pub fn mask_of(m: &Matrix) -> u64 {
    let mut mask = 0u64;
    for (i, j) in pair_list(m.len()) {
        mask = (mask << 1) | m[i][j] as u64;
    }
    mask
}

pub fn matrix_of_mask(n: usize, mask: u64) -> Matrix {
    let pairs = pair_list(n);
    let mut m = vec![vec![false; n]; n];
    for (b, &(i, j)) in pairs.iter().enumerate() {
        if mask >> (pairs.len() - 1 - b) & 1 == 1 {
            m[i][j] = true;
            m[j][i] = true;
        }
    }
    m
}

/// Least mask over every relabeling of every labeled graph on `n`
/// vertices; one entry per isomorphism class.
pub fn permutation_dedup(n: usize) -> BTreeSet<u64> {
    let perms = permutations(n);
    let pairs = pair_list(n);
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << pairs.len() {
        let m = matrix_of_mask(n, mask);
        let best = perms
            .iter()
            .map(|p| {
                let mut r = 0u64;
                for &(i, j) in &pairs {
                    r = (r << 1) | m[p[i]][p[j]] as u64;
                }
                r
            })
            .min()
            .unwrap();
        if best == mask {
            out.insert(mask);
        }
    }
    out
}

/// Isomorphism classes of (all graphs, triangle-free graphs) on `n`
/// vertices by Burnside's lemma over all permutations.
pub fn burnside_counts(n: usize) -> (u64, u64) {
    let mut all = BigRational::zero();
    let mut tf = BigRational::zero();
    let perms = permutations(n);
    for p in &perms {
        // orbits of p on unordered pairs
        let pairs = pair_list(n);
        let mut seen = vec![false; pairs.len()];
        let index = |i: usize, j: usize| {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            b * (b - 1) / 2 + a
        };
        let mut orbits: Vec<Vec<(usize, usize)>> = Vec::new();
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            if seen[idx] {
                continue;
            }
            let mut orbit = Vec::new();
            let (mut a, mut b) = (i, j);
            loop {
                let id = index(a, b);
                if seen[id] {
                    break;
                }
                seen[id] = true;
                orbit.push((a.min(b), a.max(b)));
                a = p[a];
                b = p[b];
            }
            orbits.push(orbit);
        }
        all += BigRational::from_integer((1u64 << orbits.len()).into());
        let mut fixed_tf = 0u64;
        for choice in 0u64..1 << orbits.len() {
            let mut m = vec![vec![false; n]; n];
            for (o, orbit) in orbits.iter().enumerate() {
                if choice >> o & 1 == 1 {
                    for &(a, b) in orbit {
                        m[a][b] = true;
                        m[b][a] = true;
                    }
                }
            }
            if triangle_free(&m) {
                fixed_tf += 1;
            }
        }
        tf += BigRational::from_integer(fixed_tf.into());
    }
    let order = BigRational::from_integer((perms.len() as u64).into());
    let to_u64 = |r: BigRational| -> u64 {
        assert!(r.is_integer());
        r.to_integer().try_into().unwrap()
    };
    (to_u64(all / &order), to_u64(tf / order))
}

/// Straightforward graph6 encoder for `n <= 62`.
pub fn graph6_oracle(m: &Matrix) -> String {
    let n = m.len();
    assert!(n <= 62);
    let mut out = vec![(n as u8) + 63];
    let bits: Vec<bool> = pair_list(n).into_iter().map(|(i, j)| m[i][j]).collect();
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << (5 - k);
            }
        }
        out.push(byte + 63);
    }
    String::from_utf8(out).unwrap()
}

/// Whether every pair of disjoint `S, T ⊆ A` with `|S| <= s`, `|T| <= t`
/// has some `b` with `S ⊆ N(b)` and `T ∩ N(b) = ∅`. Neighborhoods are
/// masks over `A = {0, .., a_size - 1}`.
pub fn separating(nb: &[u32], a_size: usize, s: usize, t: usize) -> bool {
    let full = 1u32 << a_size;
    for sm in 0..full {
        if sm.count_ones() as usize > s {
            continue;
        }
        for tm in 0..full {
            if tm & sm != 0 || tm.count_ones() as usize > t {
                continue;
            }
            if !nb.iter().any(|&n| n & sm == sm && n & tm == 0) {
                return false;
            }
        }
    }
    true
}

/// Covering measure straight from its definition: a uniform ordered
/// `s`-tuple from `A`, then a uniform vertex of `B` adjacent to every entry.
/// `None` when some tuple is uncovered.
pub fn covering_measure(nb: &[u32], a_size: usize, s: usize) -> Option<Vec<BigRational>> {
    let total = a_size.pow(s as u32);
    let mut mass = vec![BigRational::zero(); nb.len()];
    let weight = BigRational::new(1.into(), (total as u64).into());
    for code in 0..total {
        let mut set = 0u32;
        let mut c = code;
        for _ in 0..s {
            set |= 1 << (c % a_size);
            c /= a_size;
        }
        let covering: Vec<usize> = (0..nb.len()).filter(|&b| nb[b] & set == set).collect();
        if covering.is_empty() {
            return None;
        }
        let share = &weight / BigRational::from_integer((covering.len() as u64).into());
        for b in covering {
            mass[b] += &share;
        }
    }
    Some(mass)
}

pub fn sums_to_one(masses: &[BigRational]) -> bool {
    masses
        .iter()
        .fold(BigRational::zero(), |acc, m| acc + m)
        .is_one()
}

/// Random graph with a random edge density, made triangle-free by adding
/// edges in random order and skipping any that would close a triangle.
pub fn random_triangle_free(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let target = rng.random_range(0.0..1.0f64);
    let mut m = vec![vec![false; n]; n];
    let mut pairs = pair_list(n);
    rand::seq::SliceRandom::shuffle(pairs.as_mut_slice(), rng);
    for (i, j) in pairs {
        if !rng.random_bool(target) {
            continue;
        }
        if (0..n).any(|z| m[i][z] && m[j][z]) {
            continue;
        }
        m[i][j] = true;
        m[j][i] = true;
    }
    from_matrix(&m)
}

/// Random bipartite graph on a random split.
pub fn random_bipartite(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let p = rng.random_range(0.0..1.0f64);
    let edges: Vec<(usize, usize)> = pair_list(n)
        .into_iter()
        .filter(|&(i, j)| side[i] != side[j] && rng.random_bool(p))
        .collect();
    Graph::new(n, edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
