//! Discrepancy witnesses, orderings built from them, and the biased-pair
//! pipeline for digraphs avoiding a fixed bipartite pattern.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::is_labeled_copy;
use crate::graph::{backward_edges, membership, Digraph, FasResult, GraphError, VertexOrdering};
use crate::greedy::{randomized_fas, GreedyError};
use crate::half::HalfInt;
use crate::rng::{derive_seed, rng_from_seed};
use crate::subgraph::{bipartite_profile, tau_lower_bound_bfree, SubgraphError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscrepancyError {
    #[error("witness sets overlap in {0} vertices")]
    NotDisjoint(usize),
    #[error("witness difference {0} is negative")]
    NegativeDifference(i64),
    #[error("witness records difference {recorded} but the digraph gives {actual}")]
    StaleWitness { recorded: i64, actual: i64 },
    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error("confidence parameter must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("pattern is not an orientation of a bipartite graph")]
    PatternNotBipartite,
    #[error("flip edge ({0}, {1}) is not an edge of the pattern")]
    FlipEdgeMissing(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Subgraph(#[from] SubgraphError),
    #[error(transparent)]
    Greedy(#[from] GreedyError),
}

/// A pair of vertex sets with its realized edge difference `e(A, B) - e(B, A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub difference: i64,
    pub disjoint: bool,
}

fn normalize(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

impl DiscrepancyWitness {
    /// Sorts and deduplicates both sets and counts the difference on `g`.
    pub fn new(g: &Digraph, a: Vec<usize>, b: Vec<usize>) -> Self {
        let (a, b) = (normalize(a), normalize(b));
        let difference = edge_difference(g, &a, &b);
        let disjoint = !a.iter().any(|x| b.binary_search(x).is_ok());
        DiscrepancyWitness { a, b, difference, disjoint }
    }

    pub fn empty() -> Self {
        DiscrepancyWitness { a: Vec::new(), b: Vec::new(), difference: 0, disjoint: true }
    }

    pub fn recount(&self, g: &Digraph) -> i64 {
        edge_difference(g, &self.a, &self.b)
    }

    /// The recorded difference and disjoint flag agree with `g`.
    pub fn verify(&self, g: &Digraph) -> bool {
        let disjoint = !self.a.iter().any(|x| self.b.binary_search(x).is_ok());
        self.recount(g) == self.difference && disjoint == self.disjoint
    }

    /// The same sets with the roles of `A` and `B` exchanged.
    pub fn swapped(&self) -> Self {
        DiscrepancyWitness {
            a: self.b.clone(),
            b: self.a.clone(),
            difference: -self.difference,
            disjoint: self.disjoint,
        }
    }

    /// Best disjoint pair among `(A\C, B\C)`, `(C, B\C)` and `(A\C, C)` with
    /// `C = A ∩ B`. The three differences sum to the original one, so the
    /// result keeps at least a third of it.
    pub fn disjoint_part(&self, g: &Digraph) -> Self {
        if self.disjoint {
            return self.clone();
        }
        let common: Vec<usize> = self.a.iter().copied().filter(|x| self.b.binary_search(x).is_ok()).collect();
        let only_a: Vec<usize> = self.a.iter().copied().filter(|x| common.binary_search(x).is_err()).collect();
        let only_b: Vec<usize> = self.b.iter().copied().filter(|x| common.binary_search(x).is_err()).collect();
        [
            (only_a.clone(), only_b.clone()),
            (common.clone(), only_b),
            (only_a, common),
        ]
        .into_iter()
        .map(|(a, b)| DiscrepancyWitness::new(g, a, b))
        .reduce(|best, w| if w.difference > best.difference { w } else { best })
        .expect("three candidates")
    }
}

fn edge_difference(g: &Digraph, a: &[usize], b: &[usize]) -> i64 {
    g.edge_difference(&membership(g.n(), a), &membership(g.n(), b))
}

fn forward_within(g: &Digraph, seq: &[usize]) -> (usize, usize) {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in seq.iter().enumerate() {
        pos[v] = i;
    }
    let mut forward = 0;
    let mut backward = 0;
    for &(u, v) in g.edges() {
        if pos[u] != usize::MAX && pos[v] != usize::MAX {
            if pos[u] < pos[v] {
                forward += 1;
            } else {
                backward += 1;
            }
        }
    }
    (forward, backward)
}

/// Extends an ordering of `partial` to all of `V`. Remaining vertices are taken
/// in index order; each goes to the back if it has at least as many edges from
/// the placed vertices as to them, otherwise to the front. No placement lowers
/// the surplus.
pub fn extend_ordering(g: &Digraph, partial: &[usize]) -> Result<VertexOrdering, GraphError> {
    let n = g.n();
    let mut placed = vec![false; n];
    for &v in partial {
        if v >= n {
            return Err(GraphError::InvalidOrdering { n, reason: format!("vertex {v} out of range") });
        }
        if placed[v] {
            return Err(GraphError::InvalidOrdering { n, reason: format!("vertex {v} repeated") });
        }
        placed[v] = true;
    }
    let mut seq: VecDeque<usize> = partial.iter().copied().collect();
    for v in 0..n {
        if placed[v] {
            continue;
        }
        let from_placed = g.in_neighbors(v).iter().filter(|&&x| placed[x]).count();
        let to_placed = g.out_neighbors(v).iter().filter(|&&x| placed[x]).count();
        if from_placed >= to_placed {
            seq.push_back(v);
        } else {
            seq.push_front(v);
        }
        placed[v] = true;
    }
    VertexOrdering::from_sequence(seq.into())
}

/// Ordering of `V` with surplus at least `difference / 2`: `A` before `B`,
/// each internally in index order or its reverse (whichever is not mostly
/// backward), then [`extend_ordering`] for the rest.
pub fn ordering_from_biased_pair(g: &Digraph, w: &DiscrepancyWitness) -> Result<VertexOrdering, DiscrepancyError> {
    let a = normalize(w.a.clone());
    let b = normalize(w.b.clone());
    let overlap = a.iter().filter(|x| b.binary_search(x).is_ok()).count();
    if overlap > 0 {
        return Err(DiscrepancyError::NotDisjoint(overlap));
    }
    let actual = edge_difference(g, &a, &b);
    if actual != w.difference {
        return Err(DiscrepancyError::StaleWitness { recorded: w.difference, actual });
    }
    if actual < 0 {
        return Err(DiscrepancyError::NegativeDifference(actual));
    }
    let orient = |mut part: Vec<usize>| {
        let (forward, backward) = forward_within(g, &part);
        if forward < backward {
            part.reverse();
        }
        part
    };
    let mut seq = orient(a);
    seq.extend(orient(b));
    let ordering = extend_ordering(g, &seq)?;
    let surplus = backward_edges(g, &ordering).surplus();
    assert!(
        surplus >= HalfInt::from_twice(actual),
        "surplus {surplus} below half the witness difference {actual}"
    );
    Ok(ordering)
}

/// Best prefix/suffix split of `seq`: `A` a prefix, `B` the rest. The
/// difference for a prefix is the sum of its vertices' imbalances.
pub fn best_cut_witness(g: &Digraph, seq: &[usize]) -> DiscrepancyWitness {
    let mut diff = 0i64;
    let (mut best, mut cut) = (0i64, 0usize);
    for (i, &v) in seq.iter().enumerate() {
        diff += g.imbalance(v);
        if diff > best {
            (best, cut) = (diff, i + 1);
        }
    }
    if cut == 0 {
        return DiscrepancyWitness::empty();
    }
    DiscrepancyWitness::new(g, seq[..cut].to_vec(), seq[cut..].to_vec())
}

/// Disjoint lower-bound witness without exponential search: the better of
/// the degree-balance bipartition and the best cut of the greedy ordering.
pub fn polynomial_witness(g: &Digraph, trials: usize, seed: u64) -> Result<DiscrepancyWitness, DiscrepancyError> {
    let a: Vec<usize> = (0..g.n()).filter(|&v| g.imbalance(v) > 0).collect();
    let b: Vec<usize> = (0..g.n()).filter(|&v| g.imbalance(v) <= 0).collect();
    let balance = DiscrepancyWitness::new(g, a, b);
    let greedy = randomized_fas(g, trials.max(1), seed)?;
    let cut = best_cut_witness(g, greedy.best.result.ordering.sequence());
    Ok(if cut.difference > balance.difference { cut } else { balance })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeDifferenceEstimate {
    /// Estimate of `(e(Su, Sv) - e(Sv, Su)) / n^2`.
    pub estimate: f64,
    /// `3 sqrt(ln(1/delta) / s)`.
    pub half_width: f64,
    pub samples: usize,
}

pub const DEFAULT_DELTA: f64 = 0.01;

/// Monte-Carlo estimate from `samples` uniform ordered vertex pairs drawn with
/// replacement.
pub fn sample_edge_difference(
    g: &Digraph,
    su: &[usize],
    sv: &[usize],
    samples: usize,
    seed: u64,
    delta: f64,
) -> Result<EdgeDifferenceEstimate, DiscrepancyError> {
    if samples == 0 {
        return Err(DiscrepancyError::ZeroSamples);
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(DiscrepancyError::InvalidDelta(delta));
    }
    let half_width = 3.0 * ((1.0 / delta).ln() / samples as f64).sqrt();
    let n = g.n();
    if n == 0 || su.is_empty() || sv.is_empty() {
        return Ok(EdgeDifferenceEstimate { estimate: 0.0, half_width, samples });
    }
    let in_u = membership(n, su);
    let in_v = membership(n, sv);
    let mut rng = rng_from_seed(seed);
    let mut tally = 0i64;
    for _ in 0..samples {
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        if g.has_edge(x, y) {
            if in_u[x] && in_v[y] {
                tally += 1;
            }
            if in_v[x] && in_u[y] {
                tally -= 1;
            }
        }
    }
    Ok(EdgeDifferenceEstimate { estimate: tally as f64 / samples as f64, half_width, samples })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiasedPairParams {
    /// Minimum `|e(Su, Sv) - e(Sv, Su)|` accepted.
    pub threshold: f64,
    /// Number of sampled `(v(B) - 2)`-subsets.
    pub subset_samples: usize,
    /// Vertex pairs drawn per screening estimate.
    pub pair_samples: usize,
    pub delta: f64,
}

impl Default for BiasedPairParams {
    fn default() -> Self {
        BiasedPairParams { threshold: 1.0, subset_samples: 500, pair_samples: 2000, delta: DEFAULT_DELTA }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasedPair {
    /// `A = S_u`, `B = S_v`, swapped if needed so the difference is positive.
    pub witness: DiscrepancyWitness,
    pub iteration: usize,
    /// Image of each pattern vertex other than the flip edge's endpoints, in
    /// pattern-vertex order.
    pub core_image: Vec<usize>,
    pub estimate: EdgeDifferenceEstimate,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Host vertices outside `image` that can play pattern vertex `x`, given the
/// images of every pattern vertex except `x` and `skip`.
fn extension_set(g: &Digraph, pattern: &Digraph, x: usize, skip: usize, image: &[Option<usize>]) -> Vec<usize> {
    let used = membership(g.n(), &image.iter().flatten().copied().collect::<Vec<_>>());
    let outs: Vec<usize> = pattern.out_neighbors(x).iter().filter(|&&y| y != skip).map(|&y| image[y].expect("mapped")).collect();
    let ins: Vec<usize> = pattern.in_neighbors(x).iter().filter(|&&y| y != skip).map(|&y| image[y].expect("mapped")).collect();
    (0..g.n())
        .filter(|&c| !used[c])
        .filter(|&c| outs.iter().all(|&y| g.has_edge(c, y)) && ins.iter().all(|&y| g.has_edge(y, c)))
        .collect()
}

/// Searches for sets `S_u`, `S_v` with a large edge difference by sampling
/// copies of the pattern with the flip edge's endpoints removed.
///
/// Iteration `i` samples a subset with `derive_seed(seed, i)` and checks every
/// bijection onto it exactly. A copy yields `S_u` and `S_v`, which are screened
/// by sampled vertex pairs and then recounted exactly. The lowest successful
/// iteration wins, so the answer is independent of scheduling.
pub fn find_biased_pair(
    g: &Digraph,
    pattern: &Digraph,
    flip: (usize, usize),
    params: &BiasedPairParams,
    seed: u64,
) -> Result<Option<BiasedPair>, DiscrepancyError> {
    if pattern.underlying_undirected().two_coloring().is_none() {
        return Err(DiscrepancyError::PatternNotBipartite);
    }
    let (u, v) = flip;
    if u >= pattern.n() || v >= pattern.n() || !pattern.has_edge(u, v) {
        return Err(DiscrepancyError::FlipEdgeMissing(u, v));
    }
    if params.pair_samples == 0 || params.subset_samples == 0 {
        return Err(DiscrepancyError::ZeroSamples);
    }
    if !(params.delta > 0.0 && params.delta < 1.0) {
        return Err(DiscrepancyError::InvalidDelta(params.delta));
    }
    let core: Vec<usize> = (0..pattern.n()).filter(|&x| x != u && x != v).collect();
    let n = g.n();
    if n < core.len() + 2 {
        return Ok(None);
    }
    let n_sq = (n * n) as f64;
    let found = (0..params.subset_samples).into_par_iter().find_map_first(|i| {
        let iter_seed = derive_seed(seed, i as u64);
        let chosen = sample(&mut rng_from_seed(iter_seed), n, core.len()).into_vec();
        for perm in permutations(&chosen) {
            let mut image = vec![None; pattern.n()];
            for (&x, &c) in core.iter().zip(&perm) {
                image[x] = Some(c);
            }
            let core_ok = pattern.edges().iter().all(|&(a, b)| match (image[a], image[b]) {
                (Some(ia), Some(ib)) => g.has_edge(ia, ib),
                _ => true,
            });
            if !core_ok {
                continue;
            }
            let su = extension_set(g, pattern, u, v, &image);
            let sv = extension_set(g, pattern, v, u, &image);
            let estimate = sample_edge_difference(g, &su, &sv, params.pair_samples, derive_seed(iter_seed, 1), params.delta)
                .expect("parameters validated");
            if (estimate.estimate.abs() + estimate.half_width) * n_sq < params.threshold {
                continue;
            }
            let mut witness = DiscrepancyWitness::new(g, su, sv);
            if witness.difference < 0 {
                witness = witness.swapped();
            }
            if (witness.difference as f64) >= params.threshold {
                let core_image = perm.clone();
                debug_assert!(is_labeled_copy(&pattern.induced_subgraph(&core), g, &core_image));
                return Some(BiasedPair { witness, iteration: i, core_image, estimate });
            }
        }
        None
    });
    Ok(found)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `m > n^{2 - alpha}`: biased pair searched in all of `G`.
    DenseWhole,
    /// High-degree vertices span at least half the edges: biased pair searched
    /// in the subgraph they induce.
    DenseCore,
    Sparse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FasSource {
    BiasedPair,
    Greedy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BfreeParams {
    pub trials: usize,
    /// Overrides the default threshold `max(1, m_H^t / (2 e(B) n_H^{2t-2}))`
    /// computed on the searched subgraph `H`.
    pub threshold: Option<f64>,
    pub subset_samples: usize,
    pub pair_samples: usize,
    pub delta: f64,
}

impl Default for BfreeParams {
    fn default() -> Self {
        let b = BiasedPairParams::default();
        BfreeParams {
            trials: 20,
            threshold: None,
            subset_samples: b.subset_samples,
            pair_samples: b.pair_samples,
            delta: b.delta,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BfreeLedger {
    pub regime: Regime,
    pub t: usize,
    pub alpha: f64,
    pub epsilon: f64,
    /// `m^{1/2 - 2 epsilon}`.
    pub degree_cutoff: f64,
    /// High-degree vertices, sorted; empty in the dense-whole regime.
    pub core: Vec<usize>,
    pub core_edges: usize,
    pub threshold: Option<f64>,
    pub flip_edge: Option<(usize, usize)>,
    /// Witness in `G`'s labels after making it disjoint.
    pub witness: Option<DiscrepancyWitness>,
    pub biased_size: Option<usize>,
    pub greedy_size: usize,
    pub source: FasSource,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BfreeOutcome {
    pub result: FasResult,
    pub ledger: BfreeLedger,
}

/// Two-regime FAS for a digraph assumed to avoid `pattern`.
///
/// With `t` the exponent of the pattern's underlying graph, `alpha = 1/(2t-1)`
/// and `epsilon = 1/(16t-12)`. Dense inputs, or inputs whose vertices of degree at
/// least `m^{1/2 - 2 epsilon}` span half the edges, get a biased-pair search
/// trying each pattern edge as the flip edge; the rest use randomized greedy
/// only. Randomized greedy always runs as well and the smaller FAS is kept,
/// the biased-pair ordering winning ties.
pub fn bfree_fas(g: &Digraph, pattern: &Digraph, params: &BfreeParams, seed: u64) -> Result<BfreeOutcome, DiscrepancyError> {
    let profile = bipartite_profile(&pattern.underlying_undirected()).map_err(|e| match e {
        SubgraphError::NotBipartite => DiscrepancyError::PatternNotBipartite,
        other => DiscrepancyError::Subgraph(other),
    })?;
    let t = profile.exponent.max(1);
    let alpha = 1.0 / (2.0 * t as f64 - 1.0);
    let epsilon = 1.0 / (16.0 * t as f64 - 12.0);
    let (n, m) = (g.n(), g.m());
    let degree_cutoff = (m as f64).powf(0.5 - 2.0 * epsilon);

    let greedy = randomized_fas(g, params.trials.max(1), derive_seed(seed, 0))?;
    let greedy_result = greedy.best.result;

    let mut ledger = BfreeLedger {
        regime: Regime::Sparse,
        t,
        alpha,
        epsilon,
        degree_cutoff,
        core: Vec::new(),
        core_edges: 0,
        threshold: None,
        flip_edge: None,
        witness: None,
        biased_size: None,
        greedy_size: greedy_result.size,
        source: FasSource::Greedy,
    };

    let host_vertices: Option<Vec<usize>> = if m > 0 && (m as f64) > (n as f64).powf(2.0 - alpha) {
        ledger.regime = Regime::DenseWhole;
        Some((0..n).collect())
    } else {
        let core: Vec<usize> = (0..n).filter(|&v| g.degree(v) as f64 >= degree_cutoff).collect();
        let core_edges = g.induced_subgraph(&core).m();
        ledger.core = core.clone();
        ledger.core_edges = core_edges;
        if m > 0 && 2 * core_edges >= m {
            ledger.regime = Regime::DenseCore;
            Some(core)
        } else {
            None
        }
    };

    let mut best = greedy_result;
    if let Some(vertices) = host_vertices {
        let host = g.induced_subgraph(&vertices);
        let threshold = match params.threshold {
            Some(th) => th,
            None => tau_lower_bound_bfree(pattern, host.n(), host.m())?.value.max(1.0),
        };
        ledger.threshold = Some(threshold);
        let biased = BiasedPairParams {
            threshold,
            subset_samples: params.subset_samples,
            pair_samples: params.pair_samples,
            delta: params.delta,
        };
        for (i, &flip) in pattern.edges().iter().enumerate() {
            if let Some(found) = find_biased_pair(&host, pattern, flip, &biased, derive_seed(seed, 1 + i as u64))? {
                let lifted = DiscrepancyWitness::new(
                    g,
                    found.witness.a.iter().map(|&x| vertices[x]).collect(),
                    found.witness.b.iter().map(|&x| vertices[x]).collect(),
                )
                .disjoint_part(g);
                let ordering = ordering_from_biased_pair(g, &lifted)?;
                let result = FasResult::certified_by(g, ordering);
                ledger.flip_edge = Some(flip);
                ledger.witness = Some(lifted);
                ledger.biased_size = Some(result.size);
                if result.size <= best.size {
                    best = result;
                    ledger.source = FasSource::BiasedPair;
                }
                break;
            }
        }
    }
    debug_assert!(best.verify(g));
    Ok(BfreeOutcome { result: best, ledger })
}
