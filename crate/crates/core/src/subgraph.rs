//! Bipartite pattern machinery: width and exponent, the copy-count lower
//! bound for dense hosts, the discrepancy lower bound it forces on B-free
//! digraphs, and counts of every orientation of a pattern.

use thiserror::Error;

use crate::exact::{count_labeled, count_labeled_undirected, ExactBudget, ExactError};
use crate::graph::{Digraph, UndirectedGraph};

/// Most components tried when choosing part assignments for the width.
pub const MAX_COMPONENTS: usize = 10;
/// Most pattern edges whose `2^e` orientations are enumerated.
pub const MAX_ORIENTATION_EDGES: usize = 6;
/// Most pattern vertices for brute-force homomorphism counts.
pub const MAX_HOM_PATTERN_N: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubgraphError {
    #[error("pattern is not bipartite")]
    NotBipartite,
    #[error("pattern has no vertices")]
    EmptyPattern,
    #[error("pattern has {0} components; at most {MAX_COMPONENTS} are supported")]
    TooManyComponents(usize),
    #[error("pattern has {0} edges; at most {MAX_ORIENTATION_EDGES} can be enumerated")]
    TooManyEdges(usize),
    #[error("homomorphism counting supports patterns with at most {MAX_HOM_PATTERN_N} vertices, got {0}")]
    PatternTooLarge(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteProfile {
    pub parts: (Vec<usize>, Vec<usize>),
    pub edges: usize,
    /// Fewest edges to add so some vertex is complete to the other part.
    pub width: usize,
    /// `edges + width`.
    pub exponent: usize,
}

fn width_for(h: &UndirectedGraph, side: &[bool]) -> usize {
    let right = side.iter().filter(|&&s| s).count();
    let left = side.len() - right;
    (0..h.n())
        .map(|v| if side[v] { left } else { right } - h.degree(v))
        .min()
        .expect("non-empty pattern")
}

/// Width and exponent of a bipartite pattern.
///
/// The width is minimized over both parts and, for disconnected patterns, over
/// every way of assigning each component's 2-coloring to the two sides.
pub fn bipartite_profile(h: &UndirectedGraph) -> Result<BipartiteProfile, SubgraphError> {
    if h.n() == 0 {
        return Err(SubgraphError::EmptyPattern);
    }
    let coloring = h.two_coloring().ok_or(SubgraphError::NotBipartite)?;
    let components = h.components();
    if components.len() > MAX_COMPONENTS {
        return Err(SubgraphError::TooManyComponents(components.len()));
    }
    let mut best: Option<(usize, Vec<bool>)> = None;
    for flips in 0u32..(1 << components.len()) {
        let mut side = coloring.clone();
        for (i, comp) in components.iter().enumerate() {
            if flips >> i & 1 == 1 {
                for &v in comp {
                    side[v] = !side[v];
                }
            }
        }
        let w = width_for(h, &side);
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, side));
        }
    }
    let (width, side) = best.expect("at least one assignment");
    let parts = (
        (0..h.n()).filter(|&v| !side[v]).collect(),
        (0..h.n()).filter(|&v| side[v]).collect(),
    );
    Ok(BipartiteProfile { parts, edges: h.m(), width, exponent: h.m() + width })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinCopiesCheck {
    pub copies: u64,
    /// `n^k p^t / 2`.
    pub bound: f64,
    /// `p = 2m / n^2`.
    pub density: f64,
    /// `(k^2 / n)^{1/t}`.
    pub density_threshold: f64,
    pub condition_holds: bool,
}

impl MinCopiesCheck {
    /// `None` when the density condition fails and nothing is claimed.
    pub fn holds(&self) -> Option<bool> {
        self.condition_holds.then_some(self.copies as f64 >= self.bound)
    }
}

/// Labeled copies of `h` in `g` against `n^k p^t / 2`, which is claimed
/// only when `p >= (k^2/n)^{1/t}`.
pub fn min_copies_check(
    h: &UndirectedGraph,
    g: &UndirectedGraph,
    budget: &ExactBudget,
) -> Result<MinCopiesCheck, SubgraphError> {
    let profile = bipartite_profile(h)?;
    let (n, k, t) = (g.n() as f64, h.n() as f64, profile.exponent as f64);
    let density = if g.n() == 0 { 0.0 } else { 2.0 * g.m() as f64 / (n * n) };
    let density_threshold = if t == 0.0 { 0.0 } else { (k * k / n).powf(1.0 / t) };
    let bound = 0.5 * n.powf(k) * density.powf(t);
    let copies = count_labeled_undirected(h, g, budget)?;
    Ok(MinCopiesCheck {
        copies,
        bound,
        density,
        density_threshold,
        condition_holds: g.n() > 0 && density >= density_threshold,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TauLowerBound {
    /// `m^t / (2 e(B) n^{2t-2})`.
    pub value: f64,
    pub exponent: usize,
    /// `k^{2/t} n^{2-1/t} / 2`, the edge count from which the bound is claimed.
    pub required_m: f64,
    pub precondition_met: bool,
}

/// Discrepancy lower bound forced on `B`-free digraphs with `n` vertices and `m`
/// edges. Pure arithmetic; no host graph is needed. When `m` is below the
/// density threshold the value is still returned, tagged as unmet.
pub fn tau_lower_bound_bfree(pattern: &Digraph, n: usize, m: usize) -> Result<TauLowerBound, SubgraphError> {
    let profile = bipartite_profile(&pattern.underlying_undirected())?;
    let t = profile.exponent as f64;
    let (n_f, m_f, k) = (n as f64, m as f64, pattern.n() as f64);
    let e_b = pattern.m().max(1) as f64;
    let value = m_f.powf(t) / (2.0 * e_b * n_f.powf(2.0 * t - 2.0));
    let required_m = if t == 0.0 { 0.0 } else { 0.5 * k.powf(2.0 / t) * n_f.powf(2.0 - 1.0 / t) };
    Ok(TauLowerBound { value, exponent: profile.exponent, required_m, precondition_met: m_f >= required_m })
}

/// Orientation of `bbar` encoded by `reversed`: bit `i` set orients edge
/// `(a, b)` (stored with `a < b`) as `b -> a`, otherwise `a -> b`.
pub fn orientation(bbar: &UndirectedGraph, reversed: u32) -> Digraph {
    let edges = bbar
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| if reversed >> i & 1 == 1 { (b, a) } else { (a, b) });
    Digraph::from_edges(bbar.n(), edges).expect("orientation of a simple graph")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationCount {
    pub reversed: u32,
    pub pattern: Digraph,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationSpread {
    pub counts: Vec<OrientationCount>,
    /// Sum over all orientations; equals `N_L(bbar, underlying(G))`.
    pub total: u64,
    /// `max - min` over orientations.
    pub spread: u64,
}

pub fn orientation_spread(
    bbar: &UndirectedGraph,
    g: &Digraph,
    budget: &ExactBudget,
) -> Result<OrientationSpread, SubgraphError> {
    if bbar.m() > MAX_ORIENTATION_EDGES {
        return Err(SubgraphError::TooManyEdges(bbar.m()));
    }
    let mut counts = Vec::with_capacity(1 << bbar.m());
    for reversed in 0u32..(1 << bbar.m()) {
        let pattern = orientation(bbar, reversed);
        let count = count_labeled(&pattern, g, budget)?;
        counts.push(OrientationCount { reversed, pattern, count });
    }
    let total = counts.iter().map(|c| c.count).sum();
    let max = counts.iter().map(|c| c.count).max().unwrap_or(0);
    let min = counts.iter().map(|c| c.count).min().unwrap_or(0);
    Ok(OrientationSpread { counts, total, spread: max - min })
}

/// Homomorphisms `h -> g`, by brute force over all `n^k` maps.
pub fn hom_count(h: &UndirectedGraph, g: &UndirectedGraph) -> Result<u64, SubgraphError> {
    let k = h.n();
    if k > MAX_HOM_PATTERN_N {
        return Err(SubgraphError::PatternTooLarge(k));
    }
    let n = g.n();
    if n == 0 {
        return Ok((k == 0) as u64);
    }
    let mut map = vec![0usize; k];
    let mut total = 0u64;
    'outer: loop {
        if h.edges().iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
            total += 1;
        }
        for slot in map.iter_mut() {
            *slot += 1;
            if *slot < n {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    Ok(total)
}

/// `t_H(G) = hom(H, G) / n^k`.
pub fn hom_density(h: &UndirectedGraph, g: &UndirectedGraph) -> Result<f64, SubgraphError> {
    let hom = hom_count(h, g)?;
    Ok(hom as f64 / (g.n() as f64).powi(h.n() as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        let c4 = bipartite_profile(&UndirectedGraph::cycle(4)).unwrap();
        assert_eq!((c4.width, c4.exponent), (0, 4));
        let c6 = bipartite_profile(&UndirectedGraph::cycle(6)).unwrap();
        assert_eq!((c6.width, c6.exponent), (1, 7));
        let e = bipartite_profile(&UndirectedGraph::path(2)).unwrap();
        assert_eq!((e.width, e.exponent), (0, 1));
        let p3 = bipartite_profile(&UndirectedGraph::path(3)).unwrap();
        assert_eq!(p3.exponent, 2);
        assert_eq!(bipartite_profile(&UndirectedGraph::cycle(3)), Err(SubgraphError::NotBipartite));
        assert_eq!(bipartite_profile(&UndirectedGraph::empty(0)), Err(SubgraphError::EmptyPattern));
    }

    #[test]
    fn disconnected_width_uses_best_assignment() {
        // Two disjoint edges: putting one endpoint of each on the same side
        // makes a vertex miss one vertex of the other side.
        let two_k2 = UndirectedGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let p = bipartite_profile(&two_k2).unwrap();
        assert_eq!(p.width, 1);
        // Edge plus isolated vertex: the isolated vertex joins the side of the
        // complete vertex's neighbor's opposite, so width 0 is reachable.
        let with_isolated = UndirectedGraph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(bipartite_profile(&with_isolated).unwrap().width, 0);
    }

    #[test]
    fn min_copies_examples() {
        let b = ExactBudget::default();
        let p3 = UndirectedGraph::path(3);
        // K9: 504 copies; p = 8/9 stays below (9/9)^(1/2) so nothing is claimed.
        let k9 = min_copies_check(&p3, &UndirectedGraph::complete(9), &b).unwrap();
        assert_eq!(k9.copies, 504);
        assert!(!k9.condition_holds);
        assert_eq!(k9.holds(), None);
        let k4 = min_copies_check(&p3, &UndirectedGraph::complete(4), &b).unwrap();
        assert!(!k4.condition_holds);
        // K11 is the first complete graph where the P3 condition fires.
        let k11 = min_copies_check(&p3, &UndirectedGraph::complete(11), &b).unwrap();
        assert!(k11.condition_holds);
        assert_eq!(k11.copies, 990);
        assert_eq!(k11.holds(), Some(true));
        // Single edge: 2m copies against bound m.
        let g = UndirectedGraph::cycle(5);
        let e = min_copies_check(&UndirectedGraph::path(2), &g, &b).unwrap();
        assert_eq!(e.copies, 10);
        assert!((e.bound - 5.0).abs() < 1e-9);
    }

    #[test]
    fn tau_lower_bound_arithmetic() {
        let c4 = Digraph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let dense = tau_lower_bound_bfree(&c4, 100, 5000).unwrap();
        assert!((dense.value - 78.125).abs() < 1e-9);
        assert!(dense.precondition_met);
        let half = tau_lower_bound_bfree(&c4, 100, 2500).unwrap();
        assert!((half.value - 4.8828125).abs() < 1e-9);
        assert!(!half.precondition_met);
        assert!((half.required_m - 100f64.powf(1.75)).abs() < 1e-6);
    }

    #[test]
    fn orientation_counts() {
        let b = ExactBudget::default();
        let c3 = Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let edge = orientation_spread(&UndirectedGraph::path(2), &c3, &b).unwrap();
        assert_eq!(edge.counts.iter().map(|c| c.count).collect::<Vec<_>>(), vec![3, 3]);
        assert_eq!(edge.spread, 0);
        let p3 = orientation_spread(&UndirectedGraph::path(3), &c3, &b).unwrap();
        // reversed bits: 0 -> 0->1->2, 1 -> 1->0,1->2, 2 -> 0->1<-2, 3 -> 2->1->0
        assert_eq!(p3.counts.iter().map(|c| c.count).collect::<Vec<_>>(), vec![3, 0, 0, 3]);
        assert_eq!(p3.total, 6);
        let k22 = Digraph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let s = orientation_spread(&UndirectedGraph::path(2), &k22, &b).unwrap();
        assert_eq!(s.counts.iter().map(|c| c.count).collect::<Vec<_>>(), vec![4, 4]);
        let s = orientation_spread(&UndirectedGraph::path(3), &k22, &b).unwrap();
        assert_eq!(s.counts.iter().map(|c| c.count).collect::<Vec<_>>(), vec![0, 4, 4, 0]);
        assert_eq!((s.total, s.spread), (8, 4));
    }

    #[test]
    fn homomorphisms() {
        let k3 = UndirectedGraph::complete(3);
        assert_eq!(hom_count(&UndirectedGraph::path(2), &k3).unwrap(), 6);
        // Closed 4-walks in K3 = Tr(A^4) = 18.
        assert_eq!(hom_count(&UndirectedGraph::cycle(4), &k3).unwrap(), 18);
        assert!((hom_density(&UndirectedGraph::path(2), &k3).unwrap() - 6.0 / 9.0).abs() < 1e-12);
        assert!(hom_count(&UndirectedGraph::empty(6), &k3).is_err());
    }
}
