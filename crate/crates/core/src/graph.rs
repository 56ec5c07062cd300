//! Oriented digraphs, their underlying undirected graphs, vertex orderings
//! and the forward/backward edge accounting every other module builds on.
//!
//! Vertices are dense integers `0..n`. A [`Digraph`] is *oriented*: no loops
//! and at most one of `(u, v)`, `(v, u)` per pair. Violations are hard errors
//! at construction time.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::half::HalfInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge ({0}, {0})")]
    Loop(usize),
    #[error("antiparallel pair: ({0}, {1}) given but ({1}, {0}) is already present")]
    Antiparallel(usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    Duplicate(usize, usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("ordering is not a permutation of 0..{n}: {reason}")]
    InvalidOrdering { n: usize, reason: String },
}

/// Oriented simple digraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Digraph {
    /// The edgeless digraph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            edges: Vec::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    /// Builds a digraph from `(u, v)` pairs meaning `u -> v`. Edge order is kept.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut g = Digraph::empty(n);
        for (u, v) in pairs {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if seen.contains(&(u, v)) {
                return Err(GraphError::Duplicate(u, v));
            }
            if seen.contains(&(v, u)) {
                return Err(GraphError::Antiparallel(u, v));
            }
            seen.insert((u, v));
            g.edges.push((u, v));
            g.out_adj[u].push(v);
            g.in_adj[v].push(u);
        }
        for list in g.out_adj.iter_mut().chain(g.in_adj.iter_mut()) {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted out-neighbors of `v`.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// Sorted in-neighbors of `v`.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    /// `out_degree(v) - in_degree(v)`.
    pub fn imbalance(&self, v: usize) -> i64 {
        self.out_degree(v) as i64 - self.in_degree(v) as i64
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    /// `e(A, B)`: edges with tail in `A` and head in `B`, sets given as membership masks.
    pub fn edges_between(&self, a: &[bool], b: &[bool]) -> usize {
        self.edges.iter().filter(|&&(u, v)| a[u] && b[v]).count()
    }

    /// `e(A, B) - e(B, A)` for membership masks.
    pub fn edge_difference(&self, a: &[bool], b: &[bool]) -> i64 {
        self.edges
            .iter()
            .map(|&(u, v)| (a[u] && b[v]) as i64 - (b[u] && a[v]) as i64)
            .sum()
    }

    pub fn underlying_undirected(&self) -> UndirectedGraph {
        UndirectedGraph::from_edges(self.n, self.edges.iter().copied())
            .expect("an oriented digraph has a simple underlying graph")
    }

    /// The digraph with every edge reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph::from_edges(self.n, self.edges.iter().map(|&(u, v)| (v, u)))
            .expect("reversal preserves orientedness")
    }

    /// `G[U]`, relabeled so that the `i`-th smallest vertex of `U` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Digraph {
        let mut sorted: Vec<usize> = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut label = vec![usize::MAX; self.n];
        for (i, &v) in sorted.iter().enumerate() {
            label[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| label[u] != usize::MAX && label[v] != usize::MAX)
            .map(|&(u, v)| (label[u], label[v]));
        Digraph::from_edges(sorted.len(), edges).expect("subgraph of an oriented digraph")
    }

    /// Appends `extra` isolated vertices.
    pub fn with_isolated_vertices(&self, extra: usize) -> Digraph {
        Digraph::from_edges(self.n + extra, self.edges.iter().copied())
            .expect("padding preserves orientedness")
    }

    /// A topological ordering (zero backward edges) if one exists.
    ///
    /// Kahn's algorithm, releasing vertices in index order.
    pub fn topological_order(&self) -> Option<VertexOrdering> {
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.in_degree(v)).collect();
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut sequence = Vec::with_capacity(self.n);
        while let Some(u) = queue.pop_front() {
            sequence.push(u);
            for &w in &self.out_adj[u] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if sequence.len() == self.n {
            Some(VertexOrdering::from_sequence(sequence).expect("Kahn order is a permutation"))
        } else {
            None
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Length of the shortest directed cycle, `None` when acyclic.
    pub fn directed_girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.n];
        for s in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            'bfs: while let Some(u) = queue.pop_front() {
                if best.is_some_and(|b| dist[u] + 1 >= b) {
                    break;
                }
                for &w in &self.out_adj[u] {
                    if w == s {
                        let len = dist[u] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                        break 'bfs;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        best
    }
}

/// Simple undirected graph on `0..n`; edges are stored as sorted `(min, max)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Self {
        UndirectedGraph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Builds from unordered pairs; loops, duplicates and out-of-range endpoints are errors.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut g = UndirectedGraph::empty(n);
        for (u, v) in pairs {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::Duplicate(u, v));
            }
            g.edges.push(key);
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        g.edges.sort_unstable();
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        UndirectedGraph::from_edges(n, pairs).expect("complete graph is simple")
    }

    /// `K_{a,b}` with left part `0..a` and right part `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let pairs = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        UndirectedGraph::from_edges(a + b, pairs).expect("complete bipartite graph is simple")
    }

    /// Cycle `0 - 1 - ... - (k-1) - 0`, `k >= 3`.
    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3, "a simple cycle needs at least 3 vertices");
        UndirectedGraph::from_edges(k, (0..k).map(|i| (i, (i + 1) % k))).expect("cycle is simple")
    }

    /// Path `0 - 1 - ... - (k-1)`.
    pub fn path(k: usize) -> Self {
        UndirectedGraph::from_edges(k, (1..k).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// `e-bar(A, B)`: edges with one endpoint in each of the (disjoint) masks.
    pub fn edges_across(&self, a: &[bool], b: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| (a[u] && b[v]) || (b[u] && a[v]))
            .count()
    }

    /// Appends `extra` isolated vertices.
    pub fn with_isolated_vertices(&self, extra: usize) -> UndirectedGraph {
        UndirectedGraph::from_edges(self.n + extra, self.edges.iter().copied())
            .expect("padding preserves simplicity")
    }

    /// Proper 2-coloring per connected component, `None` if some component has an odd cycle.
    /// Each component's lowest vertex gets color `false`.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    /// Connected components, each sorted, ordered by their lowest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Membership mask of `vertices` in `0..n`.
pub fn membership(n: usize, vertices: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in vertices {
        mask[v] = true;
    }
    mask
}

/// A bijection vertex -> position. Stores both the sequence (position -> vertex)
/// and its inverse so forward/backward tests are O(1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexOrdering {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl VertexOrdering {
    pub fn identity(n: usize) -> Self {
        VertexOrdering { sequence: (0..n).collect(), position: (0..n).collect() }
    }

    /// `sequence[i]` is the vertex at position `i`.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self, GraphError> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in sequence.iter().enumerate() {
            if v >= n {
                return Err(GraphError::InvalidOrdering { n, reason: format!("vertex {v} out of range") });
            }
            if position[v] != usize::MAX {
                return Err(GraphError::InvalidOrdering { n, reason: format!("vertex {v} repeated") });
            }
            position[v] = i;
        }
        Ok(VertexOrdering { sequence, position })
    }

    /// `positions[v]` is the position of vertex `v`.
    pub fn from_positions(positions: Vec<usize>) -> Result<Self, GraphError> {
        let n = positions.len();
        let mut sequence = vec![usize::MAX; n];
        for (v, &p) in positions.iter().enumerate() {
            if p >= n || sequence[p] != usize::MAX {
                return Err(GraphError::InvalidOrdering { n, reason: format!("position {p} invalid or repeated") });
            }
            sequence[p] = v;
        }
        Ok(VertexOrdering { sequence, position: positions })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }

    pub fn reversed(&self) -> Self {
        let mut sequence = self.sequence.clone();
        sequence.reverse();
        VertexOrdering::from_sequence(sequence).expect("reversal of a permutation")
    }
}

/// Forward/backward split of a digraph's edges under an ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSplit {
    pub forward: usize,
    pub backward: usize,
    /// Exactly `{(u, v) in E : pos(u) > pos(v)}`, in edge-list order.
    pub backward_edges: Vec<(usize, usize)>,
}

impl EdgeSplit {
    /// `(forward - backward) / 2`.
    pub fn surplus(&self) -> HalfInt {
        HalfInt::from_twice(self.forward as i64 - self.backward as i64)
    }
}

pub fn backward_edges(g: &Digraph, ordering: &VertexOrdering) -> EdgeSplit {
    assert_eq!(g.n(), ordering.len(), "ordering must cover every vertex");
    let backward_edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| ordering.position(u) > ordering.position(v))
        .collect();
    EdgeSplit {
        forward: g.m() - backward_edges.len(),
        backward: backward_edges.len(),
        backward_edges,
    }
}

/// A feedback arc set certified by an ordering: `deleted` is exactly the set of
/// backward edges of `ordering`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FasResult {
    pub deleted: Vec<(usize, usize)>,
    pub ordering: VertexOrdering,
    pub size: usize,
    /// `(forward - backward) / 2` under `ordering`; equals `m/2 - size`.
    pub surplus: HalfInt,
}

impl FasResult {
    /// The backward edges of `ordering`, without trying its reverse.
    pub fn certified_by(g: &Digraph, ordering: VertexOrdering) -> Self {
        let split = backward_edges(g, &ordering);
        FasResult {
            size: split.backward,
            surplus: split.surplus(),
            deleted: split.backward_edges,
            ordering,
        }
    }

    /// `G` minus the deleted edges.
    pub fn residual(&self, g: &Digraph) -> Digraph {
        let deleted: HashSet<(usize, usize)> = self.deleted.iter().copied().collect();
        Digraph::from_edges(g.n(), g.edges().iter().copied().filter(|e| !deleted.contains(e)))
            .expect("subgraph of an oriented digraph")
    }

    /// Every deleted edge is backward, the size/surplus bookkeeping is consistent
    /// and the residual digraph is acyclic.
    pub fn verify(&self, g: &Digraph) -> bool {
        let split = backward_edges(g, &self.ordering);
        let consistent = split.backward == self.size
            && self.deleted.len() == self.size
            && split.surplus() == self.surplus
            && HalfInt::from_twice(g.m() as i64) - HalfInt::from_int(self.size as i64) == self.surplus;
        consistent && self.residual(g).is_acyclic()
    }
}

/// Deletes the smaller of the backward sets of `ordering` and its reverse.
pub fn fas_from_ordering(g: &Digraph, ordering: &VertexOrdering) -> FasResult {
    let split = backward_edges(g, ordering);
    if split.backward <= split.forward {
        FasResult::certified_by(g, ordering.clone())
    } else {
        FasResult::certified_by(g, ordering.reversed())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c3() -> Digraph {
        Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn t3() -> Digraph {
        Digraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn construction_errors_name_the_pair() {
        assert_eq!(Digraph::from_edges(2, [(0, 1), (1, 0)]), Err(GraphError::Antiparallel(1, 0)));
        assert_eq!(Digraph::from_edges(2, [(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(Digraph::from_edges(2, [(0, 1), (0, 1)]), Err(GraphError::Duplicate(0, 1)));
        assert_eq!(
            Digraph::from_edges(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { u: 0, v: 2, n: 2 })
        );
        let single = Digraph::from_edges(1, []).unwrap();
        assert_eq!((single.n(), single.m()), (1, 0));
    }

    #[test]
    fn degrees_sum_to_m() {
        let g = c3();
        let outs: usize = (0..3).map(|v| g.out_degree(v)).sum();
        let ins: usize = (0..3).map(|v| g.in_degree(v)).sum();
        assert_eq!((outs, ins), (3, 3));
    }

    #[test]
    fn underlying_graphs() {
        assert_eq!(c3().underlying_undirected(), UndirectedGraph::complete(3));
        let k22 = Digraph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let u = k22.underlying_undirected();
        assert_eq!(u.m(), 4);
        assert!(u.has_edge(2, 0) && !u.has_edge(0, 1));
    }

    #[test]
    fn acyclicity() {
        assert!(!c3().is_acyclic());
        assert_eq!(t3().topological_order().unwrap().sequence(), &[0, 1, 2]);
        assert!(Digraph::empty(4).is_acyclic());
        assert!(Digraph::empty(0).is_acyclic());
    }

    #[test]
    fn backward_edges_of_c3() {
        let split = backward_edges(&c3(), &VertexOrdering::identity(3));
        assert_eq!((split.forward, split.backward), (2, 1));
        assert_eq!(split.backward_edges, vec![(2, 0)]);
        let rev = backward_edges(&c3(), &VertexOrdering::from_sequence(vec![2, 1, 0]).unwrap());
        assert_eq!((rev.forward, rev.backward), (1, 2));
        assert_eq!(backward_edges(&t3(), &VertexOrdering::identity(3)).backward, 0);
    }

    #[test]
    fn fas_from_ordering_picks_the_smaller_side() {
        let g = c3();
        let a = fas_from_ordering(&g, &VertexOrdering::identity(3));
        assert_eq!((a.size, a.deleted.clone()), (1, vec![(2, 0)]));
        let b = fas_from_ordering(&g, &VertexOrdering::from_sequence(vec![2, 1, 0]).unwrap());
        assert_eq!(b.size, 1);
        assert!(a.verify(&g) && b.verify(&g));
    }

    #[test]
    fn t3_fas_never_exceeds_one() {
        // All 6 orderings of T3: the smaller side is at most 1.
        let g = t3();
        for seq in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let r = fas_from_ordering(&g, &VertexOrdering::from_sequence(seq.to_vec()).unwrap());
            assert!(r.size <= 1);
        }
    }

    #[test]
    fn induced_subgraphs() {
        let g = c3();
        let sub = g.induced_subgraph(&[0, 1]);
        assert_eq!(sub.edges(), &[(0, 1)]);
        assert_eq!(g.induced_subgraph(&[0, 1, 2]), g);
        assert_eq!(g.induced_subgraph(&[]).n(), 0);
        let sub = g.induced_subgraph(&[2, 0]);
        assert_eq!(sub.edges(), &[(1, 0)]);
    }

    #[test]
    fn girth() {
        assert_eq!(c3().directed_girth(), Some(3));
        assert_eq!(t3().directed_girth(), None);
    }

    #[test]
    fn ordering_validation() {
        assert!(VertexOrdering::from_sequence(vec![0, 0]).is_err());
        assert!(VertexOrdering::from_sequence(vec![0, 2]).is_err());
        let o = VertexOrdering::from_positions(vec![2, 0, 1]).unwrap();
        assert_eq!(o.sequence(), &[1, 2, 0]);
    }

    fn arb_digraph() -> impl Strategy<Value = Digraph> {
        (1usize..9).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (Just(n), proptest::collection::vec(0u8..3, pairs))
        })
        .prop_map(|(n, states)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    match states[k] {
                        1 => edges.push((u, v)),
                        2 => edges.push((v, u)),
                        _ => {}
                    }
                    k += 1;
                }
            }
            Digraph::from_edges(n, edges).unwrap()
        })
    }

    proptest! {
        #[test]
        fn split_and_reverse_are_complementary(g in arb_digraph(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut seq: Vec<usize> = (0..g.n()).collect();
            seq.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let rho = VertexOrdering::from_sequence(seq).unwrap();
            let split = backward_edges(&g, &rho);
            prop_assert_eq!(split.forward + split.backward, g.m());
            prop_assert_eq!(split.backward, backward_edges(&g, &rho.reversed()).forward);
            let fas = fas_from_ordering(&g, &rho);
            prop_assert!(2 * fas.size <= g.m());
            prop_assert!(fas.verify(&g));
        }
    }
}
