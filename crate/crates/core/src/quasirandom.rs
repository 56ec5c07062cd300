//! Diagnostics for quasirandom direction: signed adjacency traces and spectra,
//! alternating 4-cycles, biased subgraphs, degree balance, and a report that
//! gathers them as normalized scores.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::discrepancy::best_cut_witness;
use crate::exact::{
    count_labeled, count_labeled_undirected, even_odd_switch_counts, tau_exact, tau_partition_exact, tau_star_exact,
    ExactBudget, ExactError, SwitchMethod,
};
use crate::graph::{Digraph, UndirectedGraph};
use crate::greedy::{randomized_fas, GreedyError};
use crate::rng::splitmix64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuasiError {
    #[error("power k must be at least 1")]
    ZeroPower,
    #[error("bias parameter must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Greedy(#[from] GreedyError),
}

/// Dense square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, entries: vec![0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize, value: i64) {
        self.entries[i * self.n + j] = value;
    }

    pub fn abs(&self) -> Self {
        IntMatrix { n: self.n, entries: self.entries.iter().map(|x| x.abs()).collect() }
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }
}

/// `A[u][v] = 1` for `u -> v`, `-1` for `v -> u`, else 0.
pub fn signed_adjacency(g: &Digraph) -> IntMatrix {
    let mut a = IntMatrix::zeros(g.n());
    for &(u, v) in g.edges() {
        a.set(u, v, 1);
        a.set(v, u, -1);
    }
    assert!(a.is_skew_symmetric());
    a
}

fn trace_power_i128(m: &IntMatrix, k: usize) -> Option<i128> {
    let n = m.n;
    let mut p: Vec<i128> = m.entries.iter().map(|&x| x as i128).collect();
    for _ in 1..k {
        let mut next = vec![0i128; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = p[i * n + l];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = m.get(l, j) as i128;
                    if b != 0 {
                        next[i * n + j] = next[i * n + j].checked_add(a.checked_mul(b)?)?;
                    }
                }
            }
        }
        p = next;
    }
    (0..n).try_fold(0i128, |acc, i| acc.checked_add(p[i * n + i]))
}

fn trace_power_big(m: &IntMatrix, k: usize) -> BigInt {
    let n = m.n;
    let mut p: Vec<BigInt> = m.entries.iter().map(|&x| BigInt::from(x)).collect();
    for _ in 1..k {
        let mut next = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for l in 0..n {
                if p[i * n + l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = m.get(l, j);
                    if b != 0 {
                        next[i * n + j] += &p[i * n + l] * b;
                    }
                }
            }
        }
        p = next;
    }
    (0..n).map(|i| p[i * n + i].clone()).sum()
}

/// `Tr(M^k)`, exactly. Uses checked 128-bit arithmetic and repeats the
/// product in arbitrary precision if that overflows.
pub fn trace_power(m: &IntMatrix, k: usize) -> Result<BigInt, QuasiError> {
    if k == 0 {
        return Err(QuasiError::ZeroPower);
    }
    Ok(match trace_power_i128(m, k) {
        Some(t) => BigInt::from(t),
        None => trace_power_big(m, k),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSwitch {
    /// `Tr(A^k)`.
    pub trace: BigInt,
    /// `Tr(|A|^k)`.
    pub abs_trace: BigInt,
    pub even: u128,
    pub odd: u128,
    pub method: SwitchMethod,
}

/// `Tr(A^k) = E_k - O_k` and `Tr(|A|^k) = E_k + O_k`, both asserted.
pub fn trace_switch_identity(g: &Digraph, k: usize, budget: &ExactBudget) -> Result<TraceSwitch, QuasiError> {
    let counts = even_odd_switch_counts(g, k, budget)?;
    let a = signed_adjacency(g);
    let trace = trace_power(&a, k)?;
    let abs_trace = trace_power(&a.abs(), k)?;
    let (even, odd) = (BigInt::from(counts.even), BigInt::from(counts.odd));
    assert_eq!(trace, &even - &odd, "Tr(A^{k}) != E_k - O_k");
    assert_eq!(abs_trace, &even + &odd, "Tr(|A|^{k}) != E_k + O_k");
    Ok(TraceSwitch { trace, abs_trace, even: counts.even, odd: counts.odd, method: counts.method })
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
const MAX_POWER_ITERATIONS: usize = 200_000;

fn apply(m: &IntMatrix, x: &[f64]) -> Vec<f64> {
    (0..m.n).map(|i| (0..m.n).map(|j| m.get(i, j) as f64 * x[j]).sum()).collect()
}

fn apply_transpose(m: &IntMatrix, x: &[f64]) -> Vec<f64> {
    (0..m.n).map(|j| (0..m.n).map(|i| m.get(i, j) as f64 * x[i]).sum()).collect()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Largest singular value of `m`, the square root of the dominant eigenvalue
/// of `MᵀM` found by power iteration from the all-ones vector.
///
/// If the start vector is annihilated (all-ones lies in the kernel of a
/// regular tournament's signed adjacency, for example) it is replaced by a
/// fixed pseudo-random vector. Iteration stops once the Rayleigh quotient
/// changes by at most `tol` relative to itself.
pub fn largest_singular_value(m: &IntMatrix, tol: f64) -> Result<f64, QuasiError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(QuasiError::InvalidTolerance(tol));
    }
    if m.n == 0 || m.is_zero() {
        return Ok(0.0);
    }
    let gram = |x: &[f64]| apply_transpose(m, &apply(m, x));
    let mut x = vec![1.0; m.n];
    let mut y = gram(&x);
    let mut reseed = 0u64;
    while norm(&y) <= 1e-12 * norm(&x) {
        reseed += 1;
        x = (0..m.n as u64)
            .map(|i| (splitmix64(reseed.wrapping_mul(0x1000_0000_01B3) ^ i) >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
            .collect();
        y = gram(&x);
    }
    let mut rayleigh = 0.0;
    for _ in 0..MAX_POWER_ITERATIONS {
        let scale = norm(&y);
        x = y.iter().map(|v| v / scale).collect();
        y = gram(&x);
        let next: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        if (next - rayleigh).abs() <= tol * next.abs() {
            return Ok(next.max(0.0).sqrt());
        }
        rayleigh = next;
    }
    let residual = norm(&y.iter().zip(&x).map(|(b, a)| b - rayleigh * a).collect::<Vec<_>>());
    Err(QuasiError::NoConvergence { iterations: MAX_POWER_ITERATIONS, residual })
}

/// `|lambda_1|` of the signed adjacency. The matrix is skew-symmetric, hence
/// normal, so this equals its largest singular value.
pub fn spectral_radius_signed(a: &IntMatrix, tol: f64) -> Result<f64, QuasiError> {
    largest_singular_value(a, tol)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasResult {
    pub value: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Exhaustive over all pairs when true; otherwise a lower bound.
    pub exact: bool,
}

fn admissible(forward: usize, backward: usize, delta: f64) -> bool {
    backward as f64 <= delta * forward as f64
}

fn bits(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Largest `e(A, B)` over pairs with `e(B, A) <= delta e(A, B)`.
///
/// Exhaustive over all `4^n` pairs when `n <= budget.max_n_tau`, walking `B`
/// in Gray-code order for each `A`. Larger inputs get the best cut of a
/// greedy ordering, or the degree-balance bipartition, as a lower bound.
pub fn bias_subgraph(g: &Digraph, delta: f64, budget: &ExactBudget) -> Result<BiasResult, QuasiError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(QuasiError::InvalidDelta(delta));
    }
    let n = g.n();
    if n <= budget.max_n_tau && n < 64 {
        let out: Vec<u64> = (0..n).map(|v| g.out_neighbors(v).iter().fold(0, |acc, &w| acc | 1 << w)).collect();
        let inm: Vec<u64> = (0..n).map(|v| g.in_neighbors(v).iter().fold(0, |acc, &w| acc | 1 << w)).collect();
        let mut best = (0usize, 0u64, 0u64);
        let mut fwd = vec![0i64; n];
        let mut bwd = vec![0i64; n];
        for a in 0u64..(1u64 << n) {
            for v in 0..n {
                fwd[v] = (inm[v] & a).count_ones() as i64;
                bwd[v] = (out[v] & a).count_ones() as i64;
            }
            let (mut f, mut bk, mut b) = (0i64, 0i64, 0u64);
            for step in 1u64..(1u64 << n) {
                let v = step.trailing_zeros() as usize;
                b ^= 1 << v;
                let sign = if b >> v & 1 == 1 { 1 } else { -1 };
                f += sign * fwd[v];
                bk += sign * bwd[v];
                if f as usize > best.0 && admissible(f as usize, bk as usize, delta) {
                    best = (f as usize, a, b);
                }
            }
        }
        return Ok(BiasResult { value: best.0, a: bits(best.1, n), b: bits(best.2, n), exact: true });
    }
    let mut candidates: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let balanced: Vec<usize> = (0..n).filter(|&v| g.imbalance(v) > 0).collect();
    let rest: Vec<usize> = (0..n).filter(|&v| g.imbalance(v) <= 0).collect();
    candidates.push((balanced, rest));
    let greedy = randomized_fas(g, 8, 0)?;
    let seq = greedy.best.result.ordering.sequence().to_vec();
    for cut in 1..n {
        candidates.push((seq[..cut].to_vec(), seq[cut..].to_vec()));
    }
    let mut best = BiasResult { value: 0, a: Vec::new(), b: Vec::new(), exact: false };
    for (mut a, mut b) in candidates {
        let ma = crate::graph::membership(n, &a);
        let mb = crate::graph::membership(n, &b);
        let (f, bk) = (g.edges_between(&ma, &mb), g.edges_between(&mb, &ma));
        if f > best.value && admissible(f, bk, delta) {
            a.sort_unstable();
            b.sort_unstable();
            best = BiasResult { value: f, a, b, exact: false };
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct C4Ratio {
    /// Labeled 4-cycles of the underlying graph whose edges alternate in direction.
    pub alternating: u64,
    /// Labeled 4-cycles of the underlying graph.
    pub cycles: u64,
    /// `None` when there are no 4-cycles.
    pub ratio: Option<f64>,
}

/// Alternating labeled 4-cycles, i.e. those mapping homomorphically to an
/// oriented edge, against all labeled 4-cycles of the underlying graph.
pub fn c4_arrow_ratio(g: &Digraph, budget: &ExactBudget) -> Result<C4Ratio, QuasiError> {
    // Cycle v0 v1 v2 v3 with v0, v2 sources; the sink-first cycles are its rotations.
    let source_first = Digraph::from_edges(4, [(0, 1), (2, 1), (2, 3), (0, 3)]).expect("valid pattern");
    let alternating = 2 * count_labeled(&source_first, g, budget)?;
    let cycles = count_labeled_undirected(&UndirectedGraph::cycle(4), &g.underlying_undirected(), budget)?;
    let ratio = (cycles > 0).then(|| alternating as f64 / cycles as f64);
    Ok(C4Ratio { alternating, cycles, ratio })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceIdentity {
    /// `sum_v |d_out(v) - d_in(v)|`.
    pub defect: u64,
    /// `e(A, B) - e(B, A)` for `A = {v : d_out(v) > d_in(v)}`, `B = V \ A`.
    pub tau_part: i64,
    pub a: Vec<usize>,
    /// Exhaustive bipartition maximum, when `n <= budget.max_n_tau`.
    pub exhaustive: Option<i64>,
}

/// `sum_v |d_out(v) - d_in(v)| = 2 tau_⊔(G)`, asserted.
///
/// The bipartition `A = {d_out > d_in}` attains `tau_⊔`: moving a vertex across
/// changes the difference by its imbalance. Small inputs are also checked
/// against exhaustive enumeration.
pub fn balance_identity(g: &Digraph, budget: &ExactBudget) -> Result<BalanceIdentity, QuasiError> {
    let n = g.n();
    let defect: u64 = (0..n).map(|v| g.imbalance(v).unsigned_abs()).sum();
    let a: Vec<usize> = (0..n).filter(|&v| g.imbalance(v) > 0).collect();
    let ma = crate::graph::membership(n, &a);
    let mb: Vec<bool> = ma.iter().map(|x| !x).collect();
    let tau_part = g.edge_difference(&ma, &mb);
    assert_eq!(defect as i64, 2 * tau_part, "balance identity");
    let exhaustive = if n <= budget.max_n_tau {
        let w = tau_partition_exact(g, budget)?;
        assert_eq!(w.difference, tau_part, "balance bipartition is not optimal");
        Some(w.difference)
    } else {
        None
    };
    Ok(BalanceIdentity { defect, tau_part, a, exhaustive })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KValue {
    pub k: usize,
    pub value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaRatio {
    /// `|lambda_1|` of the signed adjacency.
    pub signed: f64,
    /// `lambda_1` of the underlying graph.
    pub unsigned: f64,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactFlags {
    pub tau: bool,
    pub tau_star: bool,
    pub tau_part: bool,
    pub bias: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasirandomReport {
    pub n: usize,
    pub m: usize,
    pub tau: i64,
    pub tau_star: i64,
    pub tau_part: i64,
    /// Best greedy surplus: a lower bound on `pi`.
    pub pi_proxy: f64,
    pub c4_ratio: Option<f64>,
    /// `E_k / (E_k + O_k)`.
    pub ek_ratio: Vec<KValue>,
    /// `Tr(A^k) / Tr(|A|^k)`.
    pub trace_ratio: Vec<KValue>,
    pub lambda_ratio: LambdaRatio,
    pub bias: usize,
    pub balance_defect: u64,
    pub exact_flags: ExactFlags,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportParams {
    pub delta: f64,
    pub ks: Vec<usize>,
    pub greedy_trials: usize,
    pub seed: u64,
    pub budget: ExactBudget,
}

impl Default for ReportParams {
    fn default() -> Self {
        ReportParams { delta: 0.5, ks: vec![4, 6], greedy_trials: 20, seed: 0, budget: ExactBudget::default() }
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den != 0.0).then(|| num / den)
}

/// All diagnostics for `g`. Discrepancies beyond the exact budget are lower
/// bounds from the balance bipartition and the cuts of the best greedy ordering.
pub fn quasirandom_report(g: &Digraph, params: &ReportParams) -> Result<QuasirandomReport, QuasiError> {
    let (n, m) = (g.n(), g.m());
    let budget = &params.budget;
    let balance = balance_identity(g, budget)?;
    let greedy = randomized_fas(g, params.greedy_trials.max(1), params.seed)?;
    let pi_proxy = greedy.best.result.surplus.to_f64();
    let cut = best_cut_witness(g, greedy.best.result.ordering.sequence()).difference.max(balance.tau_part);

    let (tau_star, tau_star_exact_flag) = match tau_star_exact(g, budget) {
        Ok(w) => (w.difference, true),
        Err(ExactError::BudgetExceeded { .. }) => (cut, false),
        Err(e) => return Err(e.into()),
    };
    let (tau, tau_exact_flag) = match tau_exact(g, budget) {
        Ok(w) => (w.difference, true),
        Err(ExactError::BudgetExceeded { .. }) => (tau_star, false),
        Err(e) => return Err(e.into()),
    };

    let c4 = c4_arrow_ratio(g, budget)?;
    let mut ek_ratio = Vec::new();
    let mut trace_ratio = Vec::new();
    for &k in &params.ks {
        let ts = trace_switch_identity(g, k, budget)?;
        let total = ts.abs_trace.to_f64().unwrap_or(f64::INFINITY);
        ek_ratio.push(KValue { k, value: ratio(ts.even as f64, (ts.even + ts.odd) as f64) });
        trace_ratio.push(KValue { k, value: ratio(ts.trace.to_f64().unwrap_or(f64::INFINITY), total) });
    }

    let a = signed_adjacency(g);
    let signed = spectral_radius_signed(&a, DEFAULT_TOLERANCE)?;
    let unsigned = largest_singular_value(&a.abs(), DEFAULT_TOLERANCE)?;
    let bias = bias_subgraph(g, params.delta, budget)?;

    Ok(QuasirandomReport {
        n,
        m,
        tau,
        tau_star,
        tau_part: balance.tau_part,
        pi_proxy,
        c4_ratio: c4.ratio,
        ek_ratio,
        trace_ratio,
        lambda_ratio: LambdaRatio { signed, unsigned, ratio: ratio(signed, unsigned) },
        bias: bias.value,
        balance_defect: balance.defect,
        exact_flags: ExactFlags { tau: tau_exact_flag, tau_star: tau_star_exact_flag, tau_part: true, bias: bias.exact },
    })
}

pub fn report_to_json(report: &QuasirandomReport) -> String {
    serde_json::to_string_pretty(report).expect("report is always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Digraph {
        Digraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn edge() -> Digraph {
        Digraph::from_edges(2, [(0, 1)]).unwrap()
    }

    fn t3() -> Digraph {
        Digraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    fn one_way(a: usize) -> Digraph {
        let edges = (0..a).flat_map(|l| (a..2 * a).map(move |r| (l, r)));
        Digraph::from_edges(2 * a, edges).unwrap()
    }

    #[test]
    fn signed_matrices() {
        let a = signed_adjacency(&edge());
        assert_eq!((a.get(0, 1), a.get(1, 0), a.get(0, 0)), (1, -1, 0));
        let c = signed_adjacency(&c3());
        assert_eq!((c.get(0, 1), c.get(1, 2), c.get(2, 0)), (1, 1, 1));
        assert_eq!((c.get(1, 0), c.get(2, 1), c.get(0, 2)), (-1, -1, -1));
        assert!(signed_adjacency(&Digraph::empty(3)).is_zero());
    }

    #[test]
    fn traces() {
        let t = |g: &Digraph, k| trace_power(&signed_adjacency(g), k).unwrap();
        assert_eq!(t(&edge(), 4), BigInt::from(2));
        assert_eq!(t(&c3(), 4), BigInt::from(18));
        assert_eq!(trace_power(&signed_adjacency(&c3()).abs(), 4).unwrap(), BigInt::from(18));
        assert_eq!(t(&c3(), 2), BigInt::from(-6));
        assert_eq!(trace_power(&signed_adjacency(&c3()), 0), Err(QuasiError::ZeroPower));
    }

    #[test]
    fn big_integer_fallback_agrees() {
        let k = UndirectedGraph::complete(12);
        let g = crate::constructions::random_orientation(&k, 3);
        let a = signed_adjacency(&g).abs();
        // 11^40 overflows 128 bits.
        let big = trace_power(&a, 40).unwrap();
        assert!(trace_power_i128(&a, 40).is_none());
        assert_eq!(big, trace_power_big(&a, 40));
        let expected = BigInt::from(11).pow(40) + BigInt::from(11) * BigInt::from(-1).pow(40);
        assert_eq!(big, expected);
    }

    #[test]
    fn trace_switch_examples() {
        let b = ExactBudget::default();
        let e = trace_switch_identity(&edge(), 4, &b).unwrap();
        assert_eq!((e.trace.clone(), e.even, e.odd), (BigInt::from(2), 2, 0));
        let c = trace_switch_identity(&c3(), 4, &b).unwrap();
        assert_eq!((c.trace.clone(), c.even, c.odd), (BigInt::from(18), 18, 0));
        let z = trace_switch_identity(&Digraph::empty(3), 4, &b).unwrap();
        assert_eq!((z.trace.clone(), z.even, z.odd), (BigInt::zero(), 0, 0));
        assert!(trace_switch_identity(&c3(), 5, &b).is_err());
    }

    #[test]
    fn spectra() {
        let s = |g: &Digraph| spectral_radius_signed(&signed_adjacency(g), DEFAULT_TOLERANCE).unwrap();
        assert!((s(&edge()) - 1.0).abs() < 1e-6);
        assert!((s(&c3()) - 3f64.sqrt()).abs() < 1e-6);
        assert_eq!(s(&Digraph::empty(4)), 0.0);
        let k3 = largest_singular_value(&signed_adjacency(&c3()).abs(), DEFAULT_TOLERANCE).unwrap();
        assert!((k3 - 2.0).abs() < 1e-6);
        assert!(largest_singular_value(&signed_adjacency(&c3()), 0.0).is_err());
    }

    #[test]
    fn bias_examples() {
        let b = ExactBudget::default();
        let k22 = bias_subgraph(&one_way(2), 0.5, &b).unwrap();
        assert_eq!((k22.value, k22.a.clone(), k22.b.clone(), k22.exact), (4, vec![0, 1], vec![2, 3], true));
        // A = {0, 1}, B = {1, 2}: e(A, B) = 2 and e(B, A) = 1 = 0.5 * 2.
        let c = bias_subgraph(&c3(), 0.5, &b).unwrap();
        assert_eq!((c.value, c.a.clone(), c.b.clone()), (2, vec![0, 1], vec![1, 2]));
        assert_eq!(bias_subgraph(&c3(), 0.49, &b).unwrap().value, 1);
        assert_eq!(bias_subgraph(&Digraph::empty(3), 0.5, &b).unwrap().value, 0);
        assert!(bias_subgraph(&c3(), 1.0, &b).is_err());
        let big = bias_subgraph(&one_way(8), 0.5, &b).unwrap();
        assert!(!big.exact);
        assert_eq!(big.value, 64);
    }

    #[test]
    fn bias_matches_brute_force() {
        let b = ExactBudget::default();
        for seed in 0..10 {
            let g = crate::constructions::random_digraph(5, 6, seed).unwrap();
            let fast = bias_subgraph(&g, 0.3, &b).unwrap();
            let mut best = 0;
            for code in 0..4usize.pow(5) {
                let (mut a, mut bb) = (vec![false; 5], vec![false; 5]);
                for v in 0..5 {
                    let s = code / 4usize.pow(v as u32) % 4;
                    a[v] = s & 1 == 1;
                    bb[v] = s & 2 == 2;
                }
                let (f, bk) = (g.edges_between(&a, &bb), g.edges_between(&bb, &a));
                if (bk as f64) <= 0.3 * f as f64 {
                    best = best.max(f);
                }
            }
            assert_eq!(fast.value, best);
        }
    }

    #[test]
    fn c4_examples() {
        let b = ExactBudget::default();
        let k22 = c4_arrow_ratio(&one_way(2), &b).unwrap();
        assert_eq!((k22.alternating, k22.cycles, k22.ratio), (8, 8, Some(1.0)));
        let c = c4_arrow_ratio(&c3(), &b).unwrap();
        assert_eq!((c.alternating, c.cycles, c.ratio), (0, 0, None));
        let directed_c4 = Digraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4_arrow_ratio(&directed_c4, &b).unwrap().ratio, Some(0.0));
    }

    #[test]
    fn balance_examples() {
        let b = ExactBudget::default();
        let c = balance_identity(&c3(), &b).unwrap();
        assert_eq!((c.defect, c.tau_part), (0, 0));
        let e = balance_identity(&edge(), &b).unwrap();
        assert_eq!((e.defect, e.tau_part, e.a.clone()), (2, 1, vec![0]));
        let t = balance_identity(&t3(), &b).unwrap();
        assert_eq!((t.defect, t.tau_part, t.exhaustive), (4, 2, Some(2)));
    }

    #[test]
    fn report_examples() {
        let params = ReportParams::default();
        let k44 = quasirandom_report(&one_way(4), &params).unwrap();
        assert_eq!((k44.tau, k44.m, k44.bias), (16, 16, 16));
        assert_eq!(k44.c4_ratio, Some(1.0));
        assert!(k44.exact_flags.tau);

        let empty = quasirandom_report(&Digraph::empty(4), &params).unwrap();
        assert_eq!((empty.tau, empty.tau_star, empty.tau_part, empty.bias, empty.balance_defect), (0, 0, 0, 0, 0));
        assert_eq!(empty.c4_ratio, None);
        assert!(empty.ek_ratio.iter().all(|x| x.value.is_none()));
        assert_eq!(empty.lambda_ratio.ratio, None);

        let tournament = crate::constructions::random_tournament(12, 9);
        let params12 = ReportParams { budget: ExactBudget::default().raised_to(12), ..ReportParams::default() };
        let r = quasirandom_report(&tournament, &params12).unwrap();
        assert!(r.tau < r.m as i64);
        assert!(r.tau_star <= r.tau && r.tau <= 3 * r.tau_star);

        let json = report_to_json(&k44);
        let back: QuasirandomReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, k44);
    }

    #[test]
    fn report_key_order() {
        let r = quasirandom_report(&Digraph::empty(2), &ReportParams::default()).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report_to_json(&r)).unwrap();
        let json = report_to_json(&r);
        let keys = [
            "n", "m", "tau", "tau_star", "tau_part", "pi_proxy", "c4_ratio", "ek_ratio", "trace_ratio",
            "lambda_ratio", "bias", "balance_defect", "exact_flags",
        ];
        assert_eq!(value.as_object().unwrap().len(), keys.len());
        let positions: Vec<usize> = keys.iter().map(|k| json.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }
}
