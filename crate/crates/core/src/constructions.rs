//! Graph generators and the dyadic-pair balance check.

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Digraph, UndirectedGraph, VertexOrdering};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no orientation passed the dyadic check in {tries} tries (failures per labeling: {failures:?})")]
    TriesExhausted { tries: usize, failures: Vec<usize> },
}

fn invalid(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::InvalidParameter(msg.into())
}

/// Each pair `i < j` oriented by a fair coin.
pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(if rng.gen::<bool>() { (i, j) } else { (j, i) });
        }
    }
    Digraph::from_edges(n, edges).expect("tournament")
}

/// `i -> j` for all `i < j`.
pub fn transitive_tournament(n: usize) -> Digraph {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    Digraph::from_edges(n, edges).expect("tournament")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BipartiteMode {
    /// Every edge from the left part `0..a` to the right part `a..a+b`.
    OneWay,
    /// Fair coin per edge.
    Random(u64),
}

pub fn oriented_complete_bipartite(a: usize, b: usize, mode: BipartiteMode) -> Result<Digraph, ConstructionError> {
    if a == 0 || b == 0 {
        return Err(invalid(format!("part sizes must be at least 1, got ({a}, {b})")));
    }
    let h = UndirectedGraph::complete_bipartite(a, b);
    Ok(match mode {
        BipartiteMode::OneWay => Digraph::from_edges(a + b, h.edges().iter().copied()).expect("simple"),
        BipartiteMode::Random(seed) => random_orientation(&h, seed),
    })
}

/// `r + 1` groups of `t` vertices, vertex `g t + j` in group `g`, with every edge
/// from group `g` to group `g + 1 mod r + 1`.
pub fn cycle_blowup(r: usize, t: usize) -> Result<Digraph, ConstructionError> {
    if r < 2 || t == 0 {
        return Err(invalid(format!("cycle blowup needs r >= 2 and t >= 1, got ({r}, {t})")));
    }
    let groups = r + 1;
    let mut edges = Vec::with_capacity(groups * t * t);
    for g in 0..groups {
        let h = (g + 1) % groups;
        for i in 0..t {
            for j in 0..t {
                edges.push((g * t + i, h * t + j));
            }
        }
    }
    Ok(Digraph::from_edges(groups * t, edges).expect("groups are disjoint"))
}

/// Vertices `u_i = 3i`, `v_i = 3i + 1`, `w_i = 3i + 2` for `i` mod `N`, with edges
/// `u_i -> w_i`, `v_i -> w_i`, `w_i -> u_{i+1}`, `w_i -> v_{i+1}`.
pub fn near_acyclic_gadget(big_n: usize) -> Result<Digraph, ConstructionError> {
    if big_n < 2 {
        return Err(invalid(format!("gadget needs N >= 2, got {big_n}")));
    }
    let mut edges = Vec::with_capacity(4 * big_n);
    for i in 0..big_n {
        let next = (i + 1) % big_n;
        let (u, v, w) = (3 * i, 3 * i + 1, 3 * i + 2);
        edges.extend([(u, w), (v, w), (w, 3 * next), (w, 3 * next + 1)]);
    }
    Ok(Digraph::from_edges(3 * big_n, edges).expect("gadget is oriented"))
}

/// Fair coin per edge of `h`, in `h`'s edge order.
pub fn random_orientation(h: &UndirectedGraph, seed: u64) -> Digraph {
    let mut rng = rng_from_seed(seed);
    let edges: Vec<(usize, usize)> = h
        .edges()
        .iter()
        .map(|&(a, b)| if rng.gen::<bool>() { (a, b) } else { (b, a) })
        .collect();
    Digraph::from_edges(h.n(), edges).expect("orientation of a simple graph")
}

/// `m` distinct vertex pairs chosen uniformly, each oriented by a fair coin.
pub fn random_digraph(n: usize, m: usize, seed: u64) -> Result<Digraph, ConstructionError> {
    let pairs = n * n.saturating_sub(1) / 2;
    if m > pairs {
        return Err(invalid(format!("{m} edges do not fit on {n} vertices")));
    }
    let all: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut rng = rng_from_seed(seed);
    let mut chosen = sample(&mut rng, pairs, m).into_vec();
    chosen.sort_unstable();
    let edges: Vec<(usize, usize)> = chosen
        .into_iter()
        .map(|k| {
            let (a, b) = all[k];
            if rng.gen::<bool>() {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    Ok(Digraph::from_edges(n, edges).expect("distinct pairs"))
}

pub const DYADIC_LIMITATION: &str =
    "only consecutive dyadic interval pairs of the supplied labelings are checked, not all equal-size disjoint pairs";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicViolation {
    pub level: u32,
    /// Index of the pair: `A = (k 2^i, (k+1) 2^i]`, `B = ((k+1) 2^i, (k+2) 2^i]`.
    pub k: usize,
    pub forward: usize,
    pub total: usize,
    pub deviation: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicCheck {
    pub passed: bool,
    /// Smallest power of two at least `n`; positions past `n` are isolated padding.
    pub padded_n: usize,
    pub pairs_checked: usize,
    pub first_violation: Option<DyadicViolation>,
    pub limitation: &'static str,
}

/// Checks `|e(A, B) - ē(A, B)/2| <= 3 sqrt(ē(A, B)) sqrt(s ln(e N / s))` for every
/// pair of consecutive dyadic intervals of size `s = 2^i` under `labeling`,
/// where `N` is the padded vertex count, `e` counts edges from `A` to `B` and
/// `ē` counts edges between them in either direction.
pub fn dyadic_pair_check(g: &Digraph, labeling: &VertexOrdering) -> DyadicCheck {
    assert_eq!(labeling.len(), g.n(), "labeling must cover every vertex");
    let padded_n = g.n().next_power_of_two().max(1);
    // Interval index at level i of the vertex at 1-based position p is (p - 1) >> i.
    let mut pairs_checked = 0;
    let mut level = 0u32;
    while (2usize << level) <= padded_n {
        let s = 1usize << level;
        let blocks = padded_n / s;
        let mut forward = vec![0usize; blocks / 2];
        let mut total = vec![0usize; blocks / 2];
        for &(u, v) in g.edges() {
            let (bu, bv) = (labeling.position(u) >> level, labeling.position(v) >> level);
            if bu / 2 == bv / 2 && bu != bv {
                total[bu / 2] += 1;
                if bu % 2 == 0 {
                    forward[bu / 2] += 1;
                }
            }
        }
        let log_term = (std::f64::consts::E * padded_n as f64 / s as f64).ln();
        for pair in 0..blocks / 2 {
            pairs_checked += 1;
            let deviation = (forward[pair] as f64 - total[pair] as f64 / 2.0).abs();
            let bound = 3.0 * (total[pair] as f64).sqrt() * (s as f64 * log_term).sqrt();
            if deviation > bound {
                return DyadicCheck {
                    passed: false,
                    padded_n,
                    pairs_checked,
                    first_violation: Some(DyadicViolation {
                        level,
                        k: 2 * pair,
                        forward: forward[pair],
                        total: total[pair],
                        deviation,
                        bound,
                    }),
                    limitation: DYADIC_LIMITATION,
                };
            }
        }
        level += 1;
    }
    DyadicCheck { passed: true, padded_n, pairs_checked, first_violation: None, limitation: DYADIC_LIMITATION }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DyadicOrientation {
    pub digraph: Digraph,
    /// 1-based try on which every labeling passed.
    pub tries: usize,
    pub limitation: &'static str,
}

/// Random orientations of `h`, try `i` seeded by `derive_seed(seed, i)`, until
/// one passes [`dyadic_pair_check`] under every labeling.
pub fn orient_until_dyadic(
    h: &UndirectedGraph,
    labelings: &[VertexOrdering],
    max_tries: usize,
    seed: u64,
) -> Result<DyadicOrientation, ConstructionError> {
    if max_tries == 0 {
        return Err(invalid("max_tries must be at least 1"));
    }
    if let Some(bad) = labelings.iter().find(|l| l.len() != h.n()) {
        return Err(invalid(format!("labeling of length {} for {} vertices", bad.len(), h.n())));
    }
    let mut failures = vec![0usize; labelings.len()];
    for attempt in 0..max_tries {
        let g = random_orientation(h, derive_seed(seed, attempt as u64));
        let mut ok = true;
        for (i, l) in labelings.iter().enumerate() {
            if !dyadic_pair_check(&g, l).passed {
                failures[i] += 1;
                ok = false;
            }
        }
        if ok {
            return Ok(DyadicOrientation { digraph: g, tries: attempt + 1, limitation: DYADIC_LIMITATION });
        }
    }
    Err(ConstructionError::TriesExhausted { tries: max_tries, failures })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurplusExponent {
    /// Extremal exponent `r = 2 / (4q + 1)`.
    pub r: Ratio<i64>,
    /// `2 - r`.
    pub epsilon: Ratio<i64>,
    /// `3/4 + q`.
    pub surplus_exponent: Ratio<i64>,
}

/// Solves `3/4 + (2 - r) / (4r) = 3/4 + q` for `r`, exactly.
pub fn surplus_exponent(q: Ratio<i64>) -> Result<SurplusExponent, ConstructionError> {
    let zero = Ratio::from_integer(0);
    let quarter = Ratio::new(1, 4);
    if q < zero || q > quarter {
        return Err(invalid(format!("q = {q} lies outside [0, 1/4]")));
    }
    let two = Ratio::from_integer(2);
    let r = two / (Ratio::from_integer(4) * q + 1);
    let epsilon = two - r;
    let surplus = Ratio::new(3, 4) + q;
    assert_eq!(Ratio::new(3, 4) + epsilon / (Ratio::from_integer(4) * r), surplus);
    Ok(SurplusExponent { r, epsilon, surplus_exponent: surplus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{beta_exact, ExactBudget};

    #[test]
    fn tournaments() {
        assert_eq!(random_tournament(1, 3).m(), 0);
        assert_eq!(random_tournament(30, 7).m(), 435);
        let t3 = random_tournament(3, 11);
        assert_eq!(t3.m(), 3);
        assert_eq!(random_tournament(30, 7), random_tournament(30, 7));
        let tt = transitive_tournament(5);
        assert_eq!(tt.m(), 10);
        assert!(tt.is_acyclic());
        assert_eq!(transitive_tournament(1).m(), 0);
    }

    #[test]
    fn bipartite() {
        let b = ExactBudget::default();
        let one = oriented_complete_bipartite(2, 2, BipartiteMode::OneWay).unwrap();
        assert_eq!(beta_exact(&one, &b).unwrap().size, 0);
        let r = oriented_complete_bipartite(4, 4, BipartiteMode::Random(5)).unwrap();
        assert_eq!(r.m(), 16);
        assert!(beta_exact(&r, &b).unwrap().size <= 8);
        assert_eq!(r.underlying_undirected(), UndirectedGraph::complete_bipartite(4, 4));
        assert!(oriented_complete_bipartite(0, 3, BipartiteMode::OneWay).is_err());
    }

    #[test]
    fn blowups() {
        let b = ExactBudget::default();
        let g = cycle_blowup(3, 2).unwrap();
        assert_eq!((g.n(), g.m()), (8, 16));
        assert_eq!(beta_exact(&g, &b).unwrap().size, 4);
        assert_eq!(g.directed_girth(), Some(4));
        let c4 = cycle_blowup(3, 1).unwrap();
        assert_eq!(beta_exact(&c4, &b).unwrap().size, 1);
        let g = cycle_blowup(4, 2).unwrap();
        assert_eq!((g.n(), g.m()), (10, 20));
        assert_eq!(beta_exact(&g, &b).unwrap().size, 4);
        assert!(cycle_blowup(1, 3).is_err());
        assert!(cycle_blowup(3, 0).is_err());
    }

    #[test]
    fn gadgets() {
        let b = ExactBudget::default();
        let g = near_acyclic_gadget(3).unwrap();
        assert_eq!((g.n(), g.m()), (9, 12));
        assert_eq!(beta_exact(&g, &b).unwrap().size, 2);
        assert_eq!(g.directed_girth(), Some(6));
        let g2 = near_acyclic_gadget(2).unwrap();
        assert_eq!((g2.n(), g2.m(), g2.directed_girth()), (6, 8, Some(4)));
        assert_eq!(beta_exact(&near_acyclic_gadget(4).unwrap(), &b).unwrap().size, 2);
        assert!(near_acyclic_gadget(1).is_err());
    }

    #[test]
    fn orientations() {
        let k3 = UndirectedGraph::complete(3);
        let g = random_orientation(&k3, 1);
        assert_eq!(g.underlying_undirected(), k3);
        assert_eq!(random_orientation(&UndirectedGraph::complete_bipartite(2, 2), 4).m(), 4);
        assert_eq!(random_orientation(&UndirectedGraph::empty(3), 4).m(), 0);
        let d = random_digraph(10, 20, 3).unwrap();
        assert_eq!((d.n(), d.m()), (10, 20));
        assert!(random_digraph(4, 7, 0).is_err());
    }

    #[test]
    fn dyadic_examples() {
        let empty = dyadic_pair_check(&Digraph::empty(5), &VertexOrdering::identity(5));
        assert!(empty.passed);
        assert_eq!(empty.padded_n, 8);
        assert_eq!(empty.pairs_checked, 4 + 2 + 1);

        let k22 = oriented_complete_bipartite(2, 2, BipartiteMode::OneWay).unwrap();
        let check = dyadic_pair_check(&k22, &VertexOrdering::identity(4));
        assert!(check.passed);
        let bound = 3.0 * 2.0 * (2.0 * (2.0 * std::f64::consts::E).ln()).sqrt();
        assert!((bound - 11.04).abs() < 0.01);

        // C3 padded to 4: level 0 pairs {1,2} (edge 0->1, deviation 1/2 against
        // 3 sqrt(ln 4e)) and {3,4} (empty); level 1 pair {1,2}|{3,4} holds
        // 1->2 and 2->0, deviation 0.
        let c3 = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let check = dyadic_pair_check(&c3, &VertexOrdering::identity(3));
        assert!(check.passed);
        assert_eq!((check.padded_n, check.pairs_checked), (4, 3));
    }

    #[test]
    fn dyadic_violation_is_reported() {
        // A one-way K_{64,64} with the parts as the two halves exceeds the bound
        // at the top level: deviation 2048 against 3 * 64 * sqrt(64 ln 2e).
        let g = oriented_complete_bipartite(64, 64, BipartiteMode::OneWay).unwrap();
        let check = dyadic_pair_check(&g, &VertexOrdering::identity(128));
        assert!(!check.passed);
        let v = check.first_violation.unwrap();
        assert_eq!((v.level, v.k, v.forward, v.total), (6, 0, 4096, 4096));
    }

    #[test]
    fn retry_construction() {
        let k44 = UndirectedGraph::complete_bipartite(4, 4);
        let out = orient_until_dyadic(&k44, &[VertexOrdering::identity(8)], 100, 1).unwrap();
        assert!(dyadic_pair_check(&out.digraph, &VertexOrdering::identity(8)).passed);
        let empty = orient_until_dyadic(&UndirectedGraph::empty(4), &[VertexOrdering::identity(4)], 1, 0).unwrap();
        assert_eq!(empty.tries, 1);
        assert!(orient_until_dyadic(&k44, &[], 0, 0).is_err());
    }

    #[test]
    fn exponents() {
        let e = surplus_exponent(Ratio::new(1, 4)).unwrap();
        assert_eq!((e.r, e.epsilon, e.surplus_exponent), (Ratio::from_integer(1), Ratio::from_integer(1), Ratio::from_integer(1)));
        let e = surplus_exponent(Ratio::from_integer(0)).unwrap();
        assert_eq!((e.r, e.epsilon, e.surplus_exponent), (Ratio::from_integer(2), Ratio::from_integer(0), Ratio::new(3, 4)));
        let e = surplus_exponent(Ratio::new(1, 8)).unwrap();
        assert_eq!((e.r, e.surplus_exponent), (Ratio::new(4, 3), Ratio::new(7, 8)));
        assert!(surplus_exponent(Ratio::new(1, 3)).is_err());
        assert!(surplus_exponent(Ratio::new(-1, 8)).is_err());
    }
}
