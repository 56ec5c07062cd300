//! Exponential-time exact oracles: minimum feedback arc set, directed surplus,
//! the three directional discrepancies, labeled subgraph counts and
//! even/odd-switch closed-walk counts.
//!
//! Everything here is ground truth for the heuristics elsewhere in the crate,
//! so inputs beyond the configured [`ExactBudget`] are refused instead of
//! running for hours.

use thiserror::Error;

use crate::discrepancy::DiscrepancyWitness;
use crate::graph::{Digraph, FasResult, UndirectedGraph, VertexOrdering};
use crate::half::HalfInt;

/// Environment variable that raises every size limit of [`ExactBudget::from_env`].
pub const BUDGET_OVERRIDE_VAR: &str = "FASLAB_BUDGET_OVERRIDE";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("{operation}: input size {size} exceeds the exact budget of {limit}")]
    BudgetExceeded { operation: &'static str, size: usize, limit: usize },
    #[error("walk length k = {0} must be even and at least 4")]
    InvalidWalkLength(usize),
    #[error("{0}: count overflowed 128-bit arithmetic")]
    Overflow(&'static str),
    #[error("invalid {var} value {value:?}: expected a non-negative integer")]
    InvalidOverride { var: &'static str, value: String },
}

/// Size limits for the exponential oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactBudget {
    /// Subset DP for beta / pi: `O(2^n n)` time, `2^n` words of memory.
    pub max_n_beta: usize,
    /// tau*, tau-partition and bias.
    pub max_n_tau: usize,
    /// tau (overlapping pairs).
    pub max_n_tau_full: usize,
    /// Vertices of a pattern in labeled-copy counting.
    pub max_pattern_n: usize,
    /// Largest `n^k` for which switch counts are enumerated tuple by tuple.
    pub max_switch_tuples: u64,
}

impl Default for ExactBudget {
    fn default() -> Self {
        ExactBudget {
            max_n_beta: 20,
            max_n_tau: 12,
            max_n_tau_full: 10,
            max_pattern_n: 6,
            max_switch_tuples: 15_625,
        }
    }
}

// Subset tables are indexed by u64 masks and hold 2^n entries.
const HARD_MASK_LIMIT: usize = 30;

impl ExactBudget {
    /// Defaults, with every vertex limit raised to `FASLAB_BUDGET_OVERRIDE` when it is set
    /// to a larger integer.
    pub fn from_env() -> Result<Self, ExactError> {
        match std::env::var(BUDGET_OVERRIDE_VAR) {
            Ok(value) => {
                let raised: usize = value.trim().parse().map_err(|_| ExactError::InvalidOverride {
                    var: BUDGET_OVERRIDE_VAR,
                    value: value.clone(),
                })?;
                Ok(ExactBudget::default().raised_to(raised))
            }
            Err(_) => Ok(ExactBudget::default()),
        }
    }

    pub fn raised_to(self, limit: usize) -> Self {
        let cap = limit.min(HARD_MASK_LIMIT);
        ExactBudget {
            max_n_beta: self.max_n_beta.max(cap),
            max_n_tau: self.max_n_tau.max(cap),
            max_n_tau_full: self.max_n_tau_full.max(cap),
            max_pattern_n: self.max_pattern_n.max(limit),
            max_switch_tuples: self.max_switch_tuples.max((limit as u64).saturating_pow(6)),
        }
    }

    fn check(size: usize, limit: usize, operation: &'static str) -> Result<(), ExactError> {
        if size > limit || size > HARD_MASK_LIMIT {
            Err(ExactError::BudgetExceeded { operation, size, limit: limit.min(HARD_MASK_LIMIT) })
        } else {
            Ok(())
        }
    }
}

fn out_masks(g: &Digraph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.out_neighbors(v).iter().fold(0u64, |acc, &w| acc | 1 << w))
        .collect()
}

fn in_masks(g: &Digraph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.in_neighbors(v).iter().fold(0u64, |acc, &w| acc | 1 << w))
        .collect()
}

fn mask_to_vec(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Minimum feedback arc set with an optimal ordering as witness.
///
/// `f(S) = min_{v in S} f(S \ v) + |N_out(v) ∩ (S \ v)|`, `f(∅) = 0`, where `v` is
/// the last vertex of an optimal ordering of `S`. The witness is rebuilt by
/// backtracking and re-certified by counting its backward edges.
pub fn beta_exact(g: &Digraph, budget: &ExactBudget) -> Result<FasResult, ExactError> {
    ExactBudget::check(g.n(), budget.max_n_beta, "beta_exact")?;
    let n = g.n();
    let out = out_masks(g);
    let size = 1usize << n;
    let mut f = vec![0u16; size];
    for s in 1..size {
        let s64 = s as u64;
        let mut best = u16::MAX;
        let mut rest = s64;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s64 & !(1 << v);
            let cost = f[without as usize] + (out[v] & without).count_ones() as u16;
            best = best.min(cost);
        }
        f[s] = best;
    }

    let mut reversed_seq = Vec::with_capacity(n);
    let mut s = (size - 1) as u64;
    while s != 0 {
        let mut rest = s;
        let last = loop {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            if f[without as usize] + (out[v] & without).count_ones() as u16 == f[s as usize] {
                break v;
            }
        };
        reversed_seq.push(last);
        s &= !(1 << last);
    }
    reversed_seq.reverse();
    let ordering = VertexOrdering::from_sequence(reversed_seq).expect("backtracking visits each vertex once");
    let result = FasResult::certified_by(g, ordering);
    assert_eq!(result.size, f[size - 1] as usize, "witness ordering must realize the optimum");
    Ok(result)
}

/// Directed surplus `m/2 - beta(G)`.
pub fn pi_exact(g: &Digraph, budget: &ExactBudget) -> Result<HalfInt, ExactError> {
    let beta = beta_exact(g, budget)?.size;
    Ok(HalfInt::from_twice(g.m() as i64) - HalfInt::from_int(beta as i64))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PairKind {
    Overlapping,
    Disjoint,
    Partition,
}

/// Maximizes `e(A, B) - e(B, A)` over the requested family of pairs.
///
/// For fixed `A` the objective is a sum of independent per-vertex terms
/// `w_A(b) = |N_in(b) ∩ A| - |N_out(b) ∩ A|` over `b in B`, so the best `B` is
/// read off directly and only the `2^n` choices of `A` are enumerated. Ties go
/// to the numerically smallest `A` mask, and `B` takes only strictly positive terms.
fn best_pair(g: &Digraph, kind: PairKind) -> DiscrepancyWitness {
    let n = g.n();
    let out = out_masks(g);
    let inm = in_masks(g);
    let mut best: Option<(i64, u64, u64)> = None;
    for a in 0u64..(1u64 << n) {
        let mut value = 0i64;
        let mut b = 0u64;
        for v in 0..n {
            let in_a = a >> v & 1 == 1;
            let w = (inm[v] & a).count_ones() as i64 - (out[v] & a).count_ones() as i64;
            match kind {
                PairKind::Overlapping if w > 0 => {
                    value += w;
                    b |= 1 << v;
                }
                PairKind::Disjoint if w > 0 && !in_a => {
                    value += w;
                    b |= 1 << v;
                }
                PairKind::Partition if !in_a => {
                    value += w;
                    b |= 1 << v;
                }
                _ => {}
            }
        }
        if best.is_none_or(|(bv, _, _)| value > bv) {
            best = Some((value, a, b));
        }
    }
    let (value, a, b) = best.expect("at least the empty pair");
    let witness = DiscrepancyWitness::new(g, mask_to_vec(a, n), mask_to_vec(b, n));
    debug_assert_eq!(witness.difference, value);
    witness
}

/// `tau(G)`: maximum of `e(A, B) - e(B, A)` over all pairs of vertex sets.
pub fn tau_exact(g: &Digraph, budget: &ExactBudget) -> Result<DiscrepancyWitness, ExactError> {
    ExactBudget::check(g.n(), budget.max_n_tau_full, "tau_exact")?;
    Ok(best_pair(g, PairKind::Overlapping))
}

/// `tau*(G)`: as [`tau_exact`] over disjoint pairs.
pub fn tau_star_exact(g: &Digraph, budget: &ExactBudget) -> Result<DiscrepancyWitness, ExactError> {
    ExactBudget::check(g.n(), budget.max_n_tau, "tau_star_exact")?;
    Ok(best_pair(g, PairKind::Disjoint))
}

/// `tau_⊔(G)`: as [`tau_exact`] over bipartitions `A ⊔ B = V`.
pub fn tau_partition_exact(g: &Digraph, budget: &ExactBudget) -> Result<DiscrepancyWitness, ExactError> {
    ExactBudget::check(g.n(), budget.max_n_tau, "tau_partition_exact")?;
    Ok(best_pair(g, PairKind::Partition))
}

/// Read access shared by directed and undirected hosts for copy counting.
pub(crate) trait Host {
    fn vertex_count(&self) -> usize;
    fn successors(&self, u: usize) -> &[usize];
    fn predecessors(&self, u: usize) -> &[usize];
    fn related(&self, u: usize, v: usize) -> bool;
}

impl Host for Digraph {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn successors(&self, u: usize) -> &[usize] {
        self.out_neighbors(u)
    }
    fn predecessors(&self, u: usize) -> &[usize] {
        self.in_neighbors(u)
    }
    fn related(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v)
    }
}

impl Host for UndirectedGraph {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn successors(&self, u: usize) -> &[usize] {
        self.neighbors(u)
    }
    fn predecessors(&self, u: usize) -> &[usize] {
        self.neighbors(u)
    }
    fn related(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v)
    }
}

struct PlacementStep {
    vertex: usize,
    /// Earlier-placed neighbor used to generate candidates, with `true` when the
    /// pattern edge points from that neighbor to `vertex`.
    anchor: Option<(usize, bool)>,
    /// All pattern constraints to earlier vertices: `(other, other_is_tail)`.
    constraints: Vec<(usize, bool)>,
}

fn placement_plan(k: usize, edges: &[(usize, usize)]) -> Vec<PlacementStep> {
    let mut placed = vec![false; k];
    let mut plan = Vec::with_capacity(k);
    let degree = |v: usize| edges.iter().filter(|&&(a, b)| a == v || b == v).count();
    for _ in 0..k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = edges
                    .iter()
                    .filter(|&&(a, b)| (a == v && placed[b]) || (b == v && placed[a]))
                    .count();
                (links, degree(v), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex remains");
        let constraints: Vec<(usize, bool)> = edges
            .iter()
            .filter_map(|&(a, b)| {
                if b == next && placed[a] {
                    Some((a, true))
                } else if a == next && placed[b] {
                    Some((b, false))
                } else {
                    None
                }
            })
            .collect();
        plan.push(PlacementStep { vertex: next, anchor: constraints.first().copied(), constraints });
        placed[next] = true;
    }
    plan
}

fn count_copies<H: Host>(k: usize, pattern_edges: &[(usize, usize)], host: &H) -> u64 {
    let n = host.vertex_count();
    if k > n {
        return 0;
    }
    let plan = placement_plan(k, pattern_edges);
    let mut image = vec![usize::MAX; k];
    let mut used = vec![false; n];
    fn recurse<H: Host>(
        depth: usize,
        plan: &[PlacementStep],
        host: &H,
        image: &mut [usize],
        used: &mut [bool],
    ) -> u64 {
        if depth == plan.len() {
            return 1;
        }
        let step = &plan[depth];
        let all: Vec<usize>;
        let candidates: &[usize] = match step.anchor {
            Some((other, true)) => host.successors(image[other]),
            Some((other, false)) => host.predecessors(image[other]),
            None => {
                all = (0..host.vertex_count()).collect();
                &all
            }
        };
        let mut total = 0;
        for &c in candidates {
            if used[c] {
                continue;
            }
            let ok = step.constraints.iter().all(|&(other, other_is_tail)| {
                if other_is_tail {
                    host.related(image[other], c)
                } else {
                    host.related(c, image[other])
                }
            });
            if !ok {
                continue;
            }
            used[c] = true;
            image[step.vertex] = c;
            total += recurse(depth + 1, plan, host, image, used);
            used[c] = false;
        }
        total
    }
    recurse(0, &plan, host, &mut image, &mut used)
}

/// `N_L(B, G)`: injective maps sending every edge of `B` onto an edge of `G`
/// with the same direction (non-edges of `B` are unconstrained).
pub fn count_labeled(pattern: &Digraph, host: &Digraph, budget: &ExactBudget) -> Result<u64, ExactError> {
    ExactBudget::check(pattern.n(), budget.max_pattern_n, "count_labeled")?;
    Ok(count_copies(pattern.n(), pattern.edges(), host))
}

/// Undirected `N_L(F, H)`.
pub fn count_labeled_undirected(
    pattern: &UndirectedGraph,
    host: &UndirectedGraph,
    budget: &ExactBudget,
) -> Result<u64, ExactError> {
    ExactBudget::check(pattern.n(), budget.max_pattern_n, "count_labeled_undirected")?;
    Ok(count_copies(pattern.n(), pattern.edges(), host))
}

/// Whether `image[i]` realizes pattern vertex `i` as a labeled copy in `host`
/// (injective, every pattern edge present with its direction).
pub fn is_labeled_copy(pattern: &Digraph, host: &Digraph, image: &[usize]) -> bool {
    if image.len() != pattern.n() {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    image.iter().all(|&v| v < host.n() && seen.insert(v))
        && pattern.edges().iter().all(|&(a, b)| host.has_edge(image[a], image[b]))
}

/// How switch counts were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwitchMethod {
    Enumeration,
    TransferMatrix,
}

/// `E_k` and `O_k`: closed `k`-walks of the underlying graph split by the parity
/// of steps taken against the edge direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwitchCounts {
    pub even: u128,
    pub odd: u128,
    pub method: SwitchMethod,
}

fn check_walk_length(k: usize) -> Result<(), ExactError> {
    if k < 4 || k % 2 == 1 {
        Err(ExactError::InvalidWalkLength(k))
    } else {
        Ok(())
    }
}

/// Enumerates all `n^k` tuples and classifies each one.
pub fn switch_counts_by_enumeration(g: &Digraph, k: usize, budget: &ExactBudget) -> Result<SwitchCounts, ExactError> {
    check_walk_length(k)?;
    let n = g.n();
    let tuples = (n as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if tuples > budget.max_switch_tuples {
        return Err(ExactError::BudgetExceeded {
            operation: "switch_counts_by_enumeration",
            size: tuples.min(usize::MAX as u64) as usize,
            limit: budget.max_switch_tuples as usize,
        });
    }
    let (mut even, mut odd) = (0u128, 0u128);
    if n == 0 {
        return Ok(SwitchCounts { even, odd, method: SwitchMethod::Enumeration });
    }
    let mut tuple = vec![0usize; k];
    'outer: loop {
        let mut reversed = 0usize;
        let mut valid = true;
        for i in 0..k {
            let (a, b) = (tuple[i], tuple[(i + 1) % k]);
            if g.has_edge(a, b) {
            } else if g.has_edge(b, a) {
                reversed += 1;
            } else {
                valid = false;
                break;
            }
        }
        if valid {
            if reversed.is_multiple_of(2) {
                even += 1;
            } else {
                odd += 1;
            }
        }
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < n {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    Ok(SwitchCounts { even, odd, method: SwitchMethod::Enumeration })
}

/// Walk-counting DP over (vertex, parity) states from every start vertex.
pub fn switch_counts_by_transfer(g: &Digraph, k: usize) -> Result<SwitchCounts, ExactError> {
    check_walk_length(k)?;
    let n = g.n();
    let overflow = || ExactError::Overflow("switch_counts_by_transfer");
    let (mut even, mut odd) = (0u128, 0u128);
    let mut cur = vec![[0u128; 2]; n];
    let mut next = vec![[0u128; 2]; n];
    for start in 0..n {
        cur.iter_mut().for_each(|c| *c = [0, 0]);
        cur[start][0] = 1;
        for _ in 0..k {
            next.iter_mut().for_each(|c| *c = [0, 0]);
            for &(u, v) in g.edges() {
                // u -> v along the edge keeps parity; v -> u against it flips.
                for p in 0..2 {
                    next[v][p] = next[v][p].checked_add(cur[u][p]).ok_or_else(overflow)?;
                    next[u][1 - p] = next[u][1 - p].checked_add(cur[v][p]).ok_or_else(overflow)?;
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        even = even.checked_add(cur[start][0]).ok_or_else(overflow)?;
        odd = odd.checked_add(cur[start][1]).ok_or_else(overflow)?;
    }
    Ok(SwitchCounts { even, odd, method: SwitchMethod::TransferMatrix })
}

/// Enumerates when `n^k` is within budget, otherwise uses the transfer DP.
pub fn even_odd_switch_counts(g: &Digraph, k: usize, budget: &ExactBudget) -> Result<SwitchCounts, ExactError> {
    check_walk_length(k)?;
    let tuples = (g.n() as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if tuples <= budget.max_switch_tuples {
        switch_counts_by_enumeration(g, k, budget)
    } else {
        switch_counts_by_transfer(g, k)
    }
}
