//! Counting inscribed-disk curvatures below a threshold.
//!
//! The counter walks the word tree keeping only the 4-vector state; children
//! cost a handful of additions and the walk is cut wherever the inscribed
//! curvature exceeds the threshold, which is valid because the curvature is
//! strictly increasing from parent to child. Count-only queries use
//! depth-first search (memory proportional to depth, parallel over
//! subtrees); sorted streams use a best-first heap.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::CurvatureVector;
use crate::error::{Error, Result};
use crate::matrix::Quad;
use crate::scalar::{Backend, Scalar};
use crate::word::{enumerate_index_set, IndexWord, Letter, Word};

/// Default ceiling on visited nodes before a query aborts.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000_000;

/// Grid resolution for counting curves.
pub const POINTS_PER_DECADE: u32 = 16;

/// A counting query: how many words have inscribed curvature at most
/// `lambda` when the recursion starts from `g`.
#[derive(Clone, Debug)]
pub struct CountQuery {
    pub g: CurvatureVector,
    pub lambda: f64,
    pub backend: Backend,
    pub node_cap: u64,
}

impl CountQuery {
    /// Backend is chosen automatically: wide integers for integral seeds,
    /// floats otherwise.
    pub fn new(g: CurvatureVector, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        let backend = Backend::auto_for(&g);
        Ok(Self {
            g,
            lambda,
            backend,
            node_cap: DEFAULT_NODE_CAP,
        })
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_node_cap(mut self, cap: u64) -> Self {
        self.node_cap = cap;
        self
    }
}

/// One emitted word and its inscribed curvature.
#[derive(Clone, Debug, Serialize)]
pub struct CountRecord {
    pub word: Word,
    pub curvature: f64,
}

/// Counts at a geometric grid of thresholds, with the normalized curve
/// `lambda^{-d} * count` for a supplied exponent.
#[derive(Clone, Debug, Serialize)]
pub struct CountCurve {
    pub lambdas: Vec<f64>,
    pub counts: Vec<u64>,
    pub normalized: Vec<f64>,
    pub d_used: f64,
}

impl CountCurve {
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "lambda,count,normalized")?;
        for i in 0..self.lambdas.len() {
            writeln!(
                w,
                "{},{},{}",
                self.lambdas[i], self.counts[i], self.normalized[i]
            )?;
        }
        Ok(())
    }
}

struct Node<N> {
    quad: Quad<N>,
    value: N,
}

impl<N: Scalar> Node<N> {
    fn root(quad: Quad<N>) -> Result<Self> {
        let value = quad.inscribed_value()?;
        Ok(Node { quad, value })
    }

    fn child(&self, j: Letter) -> Result<Self> {
        let quad = self.quad.child_with_value(j, &self.value)?;
        let value = quad.inscribed_value()?;
        Ok(Node { quad, value })
    }
}

/// Shared visit budget; workers flush in batches.
struct Budget<'a> {
    visited: &'a AtomicU64,
    cap: u64,
}

impl Budget<'_> {
    fn charge(&self, n: u64) -> Result<()> {
        let before = self.visited.fetch_add(n, AtomicOrdering::Relaxed);
        if before + n > self.cap {
            Err(Error::CountAborted {
                cap: self.cap,
                partial: before + n,
            })
        } else {
            Ok(())
        }
    }
}

const FLUSH_EVERY: u64 = 4096;

/// Depth-first count of the subtree rooted at `node`, all of whose values
/// are already known to be at most `lambda`.
fn dfs_count<N: Scalar>(node: Node<N>, lambda: f64, budget: &Budget<'_>) -> Result<u64> {
    let mut stack = vec![node];
    let mut local: u64 = 0;
    let mut unflushed: u64 = 0;
    while let Some(n) = stack.pop() {
        local += 1;
        unflushed += 1;
        if unflushed >= FLUSH_EVERY {
            budget.charge(unflushed)?;
            unflushed = 0;
        }
        for j in Letter::ALL {
            let c = n.child(j)?;
            if c.value.le_bound(lambda) {
                stack.push(c);
            }
        }
    }
    budget.charge(unflushed)?;
    Ok(local)
}

/// Expands a breadth-first frontier until it is wide enough to parallelize.
/// Returns the number of consumed (counted) nodes and the frontier.
fn split_frontier<N: Scalar>(
    root: Node<N>,
    lambda: f64,
    target: usize,
) -> Result<(u64, Vec<Node<N>>)> {
    let mut queue = VecDeque::new();
    queue.push_back(root);
    let mut consumed: u64 = 0;
    while queue.len() < target {
        let Some(n) = queue.pop_front() else { break };
        consumed += 1;
        for j in Letter::ALL {
            let c = n.child(j)?;
            if c.value.le_bound(lambda) {
                queue.push_back(c);
            }
        }
    }
    Ok((consumed, queue.into_iter().collect()))
}

fn count_generic<N: Scalar>(quad: Quad<N>, lambda: f64, cap: u64) -> Result<u64> {
    let root = Node::root(quad)?;
    if !root.value.le_bound(lambda) {
        return Ok(0);
    }
    let target = 8 * rayon::current_num_threads().max(1);
    let (consumed, frontier) = split_frontier(root, lambda, target)?;
    let visited = AtomicU64::new(consumed);
    let budget = Budget {
        visited: &visited,
        cap,
    };
    let subtotal: u64 = frontier
        .into_par_iter()
        .map(|n| dfs_count(n, lambda, &budget))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(consumed + subtotal)
}

/// Exact number of words whose inscribed curvature is at most `lambda`.
pub fn count(q: &CountQuery) -> Result<u64> {
    match q.backend {
        Backend::WideInt => count_generic::<u128>(q.g.to_quad()?, q.lambda, q.node_cap),
        Backend::ExactInt => count_generic::<BigUint>(q.g.to_quad()?, q.lambda, q.node_cap),
        Backend::Float64 => {
            count_generic::<f64>(q.g.to_float().to_quad()?, q.lambda, q.node_cap)
        }
    }
}

fn curve_hist<N: Scalar>(
    quad: Quad<N>,
    grid: &[f64],
    cap: u64,
) -> Result<Vec<u64>> {
    let lambda_max = *grid.last().expect("nonempty grid");
    let bin_of = |value: &N| grid.partition_point(|&g| !value.le_bound(g));
    let root = Node::root(quad)?;
    let mut hist = vec![0u64; grid.len()];
    if !root.value.le_bound(lambda_max) {
        return Ok(hist);
    }
    let target = 8 * rayon::current_num_threads().max(1);
    let mut consumed = 0u64;
    let frontier = {
        let mut queue = VecDeque::new();
        queue.push_back(root);
        while queue.len() < target {
            let Some(n) = queue.pop_front() else { break };
            consumed += 1;
            hist[bin_of(&n.value)] += 1;
            for j in Letter::ALL {
                let c = n.child(j)?;
                if c.value.le_bound(lambda_max) {
                    queue.push_back(c);
                }
            }
        }
        queue.into_iter().collect::<Vec<_>>()
    };
    let visited = AtomicU64::new(consumed);
    let budget = Budget {
        visited: &visited,
        cap,
    };
    let sub = frontier
        .into_par_iter()
        .map(|start| -> Result<Vec<u64>> {
            let mut h = vec![0u64; grid.len()];
            let mut stack = vec![start];
            let mut unflushed = 0u64;
            while let Some(n) = stack.pop() {
                h[bin_of(&n.value)] += 1;
                unflushed += 1;
                if unflushed >= FLUSH_EVERY {
                    budget.charge(unflushed)?;
                    unflushed = 0;
                }
                for j in Letter::ALL {
                    let c = n.child(j)?;
                    if c.value.le_bound(lambda_max) {
                        stack.push(c);
                    }
                }
            }
            budget.charge(unflushed)?;
            Ok(h)
        })
        .try_reduce(
            || vec![0u64; grid.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;
    for (x, y) in hist.iter_mut().zip(sub) {
        *x += y;
    }
    Ok(hist)
}

/// Geometric grid from the root curvature to `lambda_max`.
pub fn geometric_grid(lambda_min: f64, lambda_max: f64, per_decade: u32) -> Vec<f64> {
    let mut grid = Vec::new();
    let mut i = 0u32;
    loop {
        let lam = lambda_min * 10f64.powf(i as f64 / per_decade as f64);
        if lam >= lambda_max {
            grid.push(lambda_max);
            break;
        }
        grid.push(lam);
        i += 1;
    }
    grid
}

/// Counts at every point of a geometric grid spanning
/// `[lambda_1(g), lambda_max]` in a single pass over the tree.
pub fn count_curve(q: &CountQuery, d: f64, per_decade: u32) -> Result<CountCurve> {
    let lambda1 = q.g.inscribed_curvature();
    let grid = geometric_grid(lambda1, q.lambda, per_decade);
    let hist = match q.backend {
        Backend::WideInt => curve_hist::<u128>(q.g.to_quad()?, &grid, q.node_cap)?,
        Backend::ExactInt => curve_hist::<BigUint>(q.g.to_quad()?, &grid, q.node_cap)?,
        Backend::Float64 => curve_hist::<f64>(q.g.to_float().to_quad()?, &grid, q.node_cap)?,
    };
    let mut counts = Vec::with_capacity(grid.len());
    let mut acc = 0u64;
    for h in hist {
        acc += h;
        counts.push(acc);
    }
    let normalized = grid
        .iter()
        .zip(&counts)
        .map(|(&lam, &c)| lam.powf(-d) * c as f64)
        .collect();
    Ok(CountCurve {
        lambdas: grid,
        counts,
        normalized,
        d_used: d,
    })
}

struct StreamNode<N> {
    value: N,
    word: Word,
    quad: Quad<N>,
}

impl<N: Scalar> PartialEq for StreamNode<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<N: Scalar> Eq for StreamNode<N> {}

impl<N: Scalar> PartialOrd for StreamNode<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<N: Scalar> Ord for StreamNode<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        // ties broken by word, so equal curvatures emit lexicographically
        self.value
            .total_cmp(&other.value)
            .then_with(|| self.word.cmp(&other.word))
    }
}

fn stream_generic<N: Scalar>(
    quad: Quad<N>,
    lambda: f64,
    cap: u64,
    mut sink: impl FnMut(CountRecord),
) -> Result<u64> {
    let value = quad.inscribed_value()?;
    if !value.le_bound(lambda) {
        return Ok(0);
    }
    let mut heap = BinaryHeap::new();
    heap.push(std::cmp::Reverse(StreamNode {
        value,
        word: Word::empty(),
        quad,
    }));
    let mut emitted: u64 = 0;
    while let Some(std::cmp::Reverse(n)) = heap.pop() {
        emitted += 1;
        if emitted > cap {
            return Err(Error::CountAborted {
                cap,
                partial: emitted - 1,
            });
        }
        sink(CountRecord {
            word: n.word.clone(),
            curvature: n.value.to_f64(),
        });
        for j in Letter::ALL {
            let quad = n.quad.child_with_value(j, &n.value)?;
            let value = quad.inscribed_value()?;
            if value.le_bound(lambda) {
                let mut word = n.word.clone();
                word.push(j);
                heap.push(std::cmp::Reverse(StreamNode { value, word, quad }));
            }
        }
    }
    Ok(emitted)
}

/// Emits `(word, curvature)` records in nondecreasing curvature order,
/// ties broken lexicographically by word.
pub fn stream(q: &CountQuery) -> Result<Vec<CountRecord>> {
    let mut out = Vec::new();
    let sink = |r: CountRecord| out.push(r);
    match q.backend {
        Backend::WideInt => stream_generic::<u128>(q.g.to_quad()?, q.lambda, q.node_cap, sink)?,
        Backend::ExactInt => {
            stream_generic::<BigUint>(q.g.to_quad()?, q.lambda, q.node_cap, sink)?
        }
        Backend::Float64 => {
            stream_generic::<f64>(q.g.to_float().to_quad()?, q.lambda, q.node_cap, sink)?
        }
    };
    Ok(out)
}

pub fn write_stream_csv<W: std::io::Write>(
    records: &[CountRecord],
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "word,curvature")?;
    for r in records {
        writeln!(w, "{},{}", r.word, r.curvature)?;
    }
    Ok(())
}

/// One summand of the decomposition identity.
#[derive(Clone, Debug, Serialize)]
pub struct TauCount {
    pub tau: IndexWord,
    pub count: u64,
}

/// Verification record for the exact decomposition
/// `N(g, lambda) = sum_tau N(g M_tau, lambda) + #{power words j^n <= lambda}`.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub lambda: f64,
    pub total: u64,
    pub tau_sum: u64,
    /// Nonzero summands, in `(n, j, k)` order.
    pub tau_counts: Vec<TauCount>,
    /// Power-word remainder, the empty word included once.
    pub power_word_count: u64,
    pub rhs: u64,
    pub exact_match: bool,
    /// Largest exponent scanned per letter before the curvature passed
    /// `lambda`.
    pub n_scanned: [u32; 3],
    /// `3 * min_pairwise_sum^{-1/2} * lambda^{1/2}`.
    pub remainder_bound: f64,
    pub remainder_within_bound: bool,
}

fn decomposition_generic<N: Scalar>(
    g: &CurvatureVector,
    quad: Quad<N>,
    lambda: f64,
    cap: u64,
) -> Result<DecompositionReport> {
    let total = count_generic::<N>(quad.clone(), lambda, cap)?;

    let root_value = quad.inscribed_value()?;
    let mut power_word_count: u64 = u64::from(root_value.le_bound(lambda));
    let mut tau_counts = Vec::new();
    let mut tau_sum: u64 = 0;
    let mut n_scanned = [0u32; 3];

    for j in Letter::ALL {
        let mut power = quad.clone();
        let mut n: u32 = 0;
        loop {
            power = power.child(j)?; // g M_{j^n} after the increment below
            n += 1;
            let power_value = power.inscribed_value()?;
            if !power_value.le_bound(lambda) {
                // child curvatures only grow, so j^n and every deeper
                // tau = j^m k are all past the threshold
                break;
            }
            power_word_count += 1;
            for k in j.others() {
                let child = power.child(k)?; // g M_{j^n k}
                let c = count_generic::<N>(child, lambda, cap)?;
                if c > 0 {
                    tau_counts.push(TauCount {
                        tau: IndexWord::new(j, n, k).expect("distinct letters"),
                        count: c,
                    });
                }
                tau_sum += c;
            }
        }
        n_scanned[j.index()] = n;
    }
    tau_counts.sort_by_key(|t| (t.tau.n(), t.tau.j().value(), t.tau.k().value()));

    let rhs = tau_sum + power_word_count;
    let remainder_bound = 3.0 * g.min_pairwise_sum().powf(-0.5) * lambda.sqrt();
    Ok(DecompositionReport {
        lambda,
        total,
        tau_sum,
        tau_counts,
        power_word_count,
        rhs,
        exact_match: total == rhs,
        n_scanned,
        remainder_bound,
        remainder_within_bound: (power_word_count as f64) <= remainder_bound,
    })
}

/// Checks the decomposition identity exactly, truncating the scans at the
/// provably safe point where minimal subtree curvature passes `lambda`.
pub fn decomposition_check(q: &CountQuery) -> Result<DecompositionReport> {
    match q.backend {
        Backend::WideInt => {
            decomposition_generic::<u128>(&q.g, q.g.to_quad()?, q.lambda, q.node_cap)
        }
        Backend::ExactInt => {
            decomposition_generic::<BigUint>(&q.g, q.g.to_quad()?, q.lambda, q.node_cap)
        }
        Backend::Float64 => decomposition_generic::<f64>(
            &q.g,
            q.g.to_float().to_quad()?,
            q.lambda,
            q.node_cap,
        ),
    }
}

/// Scaling and permutation covariance of counts.
#[derive(Clone, Debug, Serialize)]
pub struct CovarianceReport {
    pub lambda: f64,
    pub scale: f64,
    pub count_scaled: u64,
    pub count_rescaled_lambda: u64,
    pub scale_pass: bool,
    /// Counts for all six permutations of the seed.
    pub permutation_counts: Vec<u64>,
    pub permutation_pass: bool,
    pub pass: bool,
}

/// Asserts `N(s*g, lambda) = N(g, lambda/s)` and invariance of counts under
/// permutations of the seed curvatures.
pub fn scaling_covariance_check(
    g: &CurvatureVector,
    s: f64,
    lambda: f64,
    node_cap: u64,
) -> Result<CovarianceReport> {
    let scaled = g.scale(s)?;
    let count_scaled = count(&CountQuery::new(scaled, lambda)?.with_node_cap(node_cap))?;
    let count_rescaled_lambda =
        count(&CountQuery::new(g.clone(), lambda / s)?.with_node_cap(node_cap))?;
    let mut permutation_counts = Vec::with_capacity(6);
    for pi in crate::curvature::Permutation::all() {
        let c = count(&CountQuery::new(g.permute(pi), lambda)?.with_node_cap(node_cap))?;
        permutation_counts.push(c);
    }
    let scale_pass = count_scaled == count_rescaled_lambda;
    let permutation_pass = permutation_counts.iter().all(|&c| c == permutation_counts[0]);
    Ok(CovarianceReport {
        lambda,
        scale: s,
        count_scaled,
        count_rescaled_lambda,
        scale_pass,
        permutation_counts,
        permutation_pass,
        pass: scale_pass && permutation_pass,
    })
}

/// Value of the Laplace transform `sum_n exp(-lambda_n t)` with a tail
/// certificate.
#[derive(Clone, Debug, Serialize)]
pub struct LaplaceEstimate {
    pub t: f64,
    pub sum: f64,
    /// Threshold up to which terms were enumerated.
    pub lambda_cut: f64,
    pub terms: u64,
    /// Certified bound on the omitted tail, assuming counts grow no faster
    /// than `tail_exponent` beyond the cut.
    pub tail_bound: f64,
    pub tail_exponent: f64,
    pub truncation_tol: f64,
}

/// Conservative upper bound on the count growth exponent used for tail
/// certificates (the true exponent is below 1.32).
const TAIL_EXPONENT: f64 = 1.5;

struct ValueNode<N>(N, Quad<N>);

impl<N: Scalar> PartialEq for ValueNode<N> {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}
impl<N: Scalar> Eq for ValueNode<N> {}
impl<N: Scalar> PartialOrd for ValueNode<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<N: Scalar> Ord for ValueNode<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn laplace_generic<N: Scalar>(
    quad: Quad<N>,
    t: f64,
    tol: f64,
    cap: u64,
) -> Result<LaplaceEstimate> {
    let mut heap = BinaryHeap::new();
    let v0 = quad.inscribed_value()?;
    heap.push(std::cmp::Reverse(ValueNode(v0, quad)));
    let mut sum = 0.0f64;
    let mut terms: u64 = 0;
    let p = TAIL_EXPONENT;
    loop {
        let Some(std::cmp::Reverse(ValueNode(v, q))) = heap.pop() else {
            // finite trees cannot happen here; the word tree is infinite
            break;
        };
        let lambda_cut = v.to_f64();
        sum += (-lambda_cut * t).exp();
        terms += 1;
        if terms > cap {
            return Err(Error::CountAborted {
                cap,
                partial: terms - 1,
            });
        }
        for j in Letter::ALL {
            let cq = q.child_with_value(j, &v)?;
            let cv = cq.inscribed_value()?;
            heap.push(std::cmp::Reverse(ValueNode(cv, cq)));
        }
        // tail <= N(cut) e^{-cut t} / (1 - p/(cut t)), valid for cut t > p;
        // from N(v) <= N(cut) (v/cut)^p and (1+x)^p <= e^{px}
        let x = lambda_cut * t;
        if x > 2.0 * p && terms % 64 == 0 {
            let tail = terms as f64 * (-x).exp() / (1.0 - p / x);
            if tail < tol * sum.max(f64::MIN_POSITIVE) {
                return Ok(LaplaceEstimate {
                    t,
                    sum,
                    lambda_cut,
                    terms,
                    tail_bound: tail,
                    tail_exponent: p,
                    truncation_tol: tol,
                });
            }
        }
    }
    unreachable!("the replacement-word tree is infinite")
}

/// Sums `exp(-lambda_n t)` in nondecreasing `lambda_n` order until the tail
/// certificate drops below `truncation_tol` relative to the partial sum.
pub fn laplace_transform(
    g: &CurvatureVector,
    t: f64,
    truncation_tol: f64,
    backend: Backend,
    node_cap: u64,
) -> Result<LaplaceEstimate> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "laplace transform requires t > 0, got {t}"
        )));
    }
    if !(truncation_tol > 0.0 && truncation_tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "truncation tolerance must lie in (0, 1), got {truncation_tol}"
        )));
    }
    match backend {
        Backend::WideInt => laplace_generic::<u128>(g.to_quad()?, t, truncation_tol, node_cap),
        Backend::ExactInt => {
            laplace_generic::<BigUint>(g.to_quad()?, t, truncation_tol, node_cap)
        }
        Backend::Float64 => {
            laplace_generic::<f64>(g.to_float().to_quad()?, t, truncation_tol, node_cap)
        }
    }
}

/// One matched-scale comparison between the Laplace transform and the
/// counting function.
#[derive(Clone, Debug, Serialize)]
pub struct KaramataPoint {
    pub lambda: f64,
    pub t: f64,
    pub laplace_side: f64,
    pub counting_side: f64,
    pub ratio: f64,
}

/// Compares `t^d Z(g,t) / Gamma(d+1)` with `lambda^{-d} N(g,lambda)` at
/// matched scales `t = 1/lambda`. The two sides share a limit, so their
/// ratio tending to 1 is the Tauberian consistency statement.
pub fn karamata_consistency(
    g: &CurvatureVector,
    lambdas: &[f64],
    d: f64,
    backend: Backend,
    node_cap: u64,
) -> Result<Vec<KaramataPoint>> {
    let gamma_d1 = libm::tgamma(d + 1.0);
    lambdas
        .iter()
        .map(|&lambda| {
            let t = 1.0 / lambda;
            let z = laplace_transform(g, t, 1e-6, backend, node_cap)?;
            let laplace_side = t.powf(d) * z.sum / gamma_d1;
            let n = count(
                &CountQuery::new(g.clone(), lambda)?
                    .with_backend(backend)
                    .with_node_cap(node_cap),
            )?;
            let counting_side = lambda.powf(-d) * n as f64;
            Ok(KaramataPoint {
                lambda,
                t,
                laplace_side,
                counting_side,
                ratio: laplace_side / counting_side,
            })
        })
        .collect()
}

/// The index words with subtree minimum curvature at most `lambda`,
/// in `(n, j, k)` order. Useful for kernel truncation diagnostics.
pub fn live_index_words(g: &CurvatureVector, lambda: f64, n_max: u32) -> Vec<IndexWord> {
    enumerate_index_set(n_max)
        .into_iter()
        .filter(|tau| {
            crate::matrix::apply_word(g, &tau.to_word())
                .map(|v| v.inscribed_curvature() <= lambda)
                .unwrap_or(false)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g0() -> CurvatureVector {
        CurvatureVector::new(2.0, 3.0, 6.0).unwrap()
    }

    #[test]
    fn hand_fixtures() {
        // derived by hand: children of (2,3,6,6) have inscribed curvatures
        // 62, 59, 50; the root's is 23; the smallest depth-2 value is 87
        for (lambda, expected) in [(23.0, 1), (62.0, 4), (22.999, 0), (86.999, 4), (87.0, 5)] {
            let q = CountQuery::new(g0(), lambda).unwrap();
            assert_eq!(count(&q).unwrap(), expected, "lambda = {lambda}");
        }
    }

    #[test]
    fn backends_agree() {
        for lambda in [62.0, 500.0, 4000.0] {
            let wide = count(&CountQuery::new(g0(), lambda).unwrap()).unwrap();
            let exact = count(
                &CountQuery::new(g0(), lambda)
                    .unwrap()
                    .with_backend(Backend::ExactInt),
            )
            .unwrap();
            let float = count(
                &CountQuery::new(g0(), lambda)
                    .unwrap()
                    .with_backend(Backend::Float64),
            )
            .unwrap();
            assert_eq!(wide, exact);
            assert_eq!(wide, float);
        }
    }

    #[test]
    fn stream_is_sorted_and_consistent_with_count() {
        let q = CountQuery::new(g0(), 600.0).unwrap();
        let records = stream(&q).unwrap();
        assert_eq!(records.len() as u64, count(&q).unwrap());
        for w in records.windows(2) {
            assert!(w[0].curvature <= w[1].curvature);
        }
        assert_eq!(records[0].word, Word::empty());
        assert_eq!(records[0].curvature, 23.0);
        // the count at lambda equals the position of the last record <= lambda
        let lam = 200.0;
        let below = records.iter().filter(|r| r.curvature <= lam).count() as u64;
        assert_eq!(below, count(&CountQuery::new(g0(), lam).unwrap()).unwrap());
    }

    #[test]
    fn stream_breaks_ties_by_word() {
        // symmetric seed: children share curvatures, order must be lexicographic
        let g = CurvatureVector::new(1.0, 1.0, 1.0).unwrap();
        let lam = g.inscribed_curvature() * 4.0;
        let records = stream(&CountQuery::new(g, lam).unwrap()).unwrap();
        for w in records.windows(2) {
            if w[0].curvature == w[1].curvature {
                assert!(w[0].word < w[1].word);
            }
        }
    }

    #[test]
    fn node_cap_aborts_cleanly() {
        let q = CountQuery::new(g0(), 1e5).unwrap().with_node_cap(100);
        match count(&q) {
            Err(Error::CountAborted { cap, partial }) => {
                assert_eq!(cap, 100);
                assert!(partial > 0);
            }
            other => panic!("expected abort, got {other:?}"),
        }
    }

    #[test]
    fn decomposition_small() {
        let q = CountQuery::new(g0(), 62.0).unwrap();
        let rep = decomposition_check(&q).unwrap();
        assert_eq!(rep.total, 4);
        assert_eq!(rep.tau_sum, 0);
        assert_eq!(rep.power_word_count, 4);
        assert!(rep.exact_match);
        assert!(rep.remainder_within_bound);

        // below the first curvature everything is empty
        let q = CountQuery::new(g0(), 10.0).unwrap();
        let rep = decomposition_check(&q).unwrap();
        assert_eq!(rep.total, 0);
        assert_eq!(rep.rhs, 0);
        assert!(rep.exact_match);
    }

    #[test]
    fn decomposition_regression_at_1e4() {
        // frozen from an independent prototype of the recursion
        let q = CountQuery::new(g0(), 1e4).unwrap();
        let rep = decomposition_check(&q).unwrap();
        assert_eq!(rep.total, 2433);
        assert_eq!(rep.tau_sum, 2326);
        assert_eq!(rep.power_word_count, 107);
        assert!(rep.exact_match);
        assert!(rep.remainder_within_bound);
    }

    #[test]
    fn covariance_exact() {
        let rep = scaling_covariance_check(&g0(), 2.0, 124.0, DEFAULT_NODE_CAP).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.count_scaled, 4); // N(g, 62) relabeled
        let rep = scaling_covariance_check(&g0(), 1.0, 62.0, DEFAULT_NODE_CAP).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.permutation_counts, vec![4, 4, 4, 4, 4, 4]);
    }

    #[test]
    fn laplace_basics() {
        // large t: the smallest curvature dominates
        let t = 2.0;
        let z = laplace_transform(&g0(), t, 1e-12, Backend::WideInt, DEFAULT_NODE_CAP).unwrap();
        let lead = (-23.0 * t).exp();
        assert!((z.sum - lead).abs() <= 1e-6 * lead, "{z:?}");
        assert!(z.tail_bound < 1e-12 * z.sum);

        assert!(laplace_transform(&g0(), 0.0, 1e-6, Backend::WideInt, 1000).is_err());
        assert!(laplace_transform(&g0(), -1.0, 1e-6, Backend::WideInt, 1000).is_err());
    }

    #[test]
    fn laplace_crude_count_bound() {
        // Z(g,t) < N(g,L) + tail for any enumeration cut L
        let t = 0.05;
        let z = laplace_transform(&g0(), t, 1e-9, Backend::WideInt, DEFAULT_NODE_CAP).unwrap();
        let n = count(&CountQuery::new(g0(), z.lambda_cut).unwrap()).unwrap();
        assert!(z.sum < n as f64 + z.tail_bound.max(1.0));
    }

    #[test]
    fn geometric_grid_shape() {
        let grid = geometric_grid(23.0, 1e4, 16);
        assert_eq!(grid[0], 23.0);
        assert_eq!(*grid.last().unwrap(), 1e4);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn curve_is_monotone_and_matches_point_counts() {
        let q = CountQuery::new(g0(), 5000.0).unwrap();
        let curve = count_curve(&q, 1.3058, 16).unwrap();
        assert!(curve.counts.windows(2).all(|w| w[0] <= w[1]));
        for (i, &lam) in curve.lambdas.iter().enumerate().step_by(7) {
            let c = count(&CountQuery::new(g0(), lam).unwrap()).unwrap();
            assert_eq!(curve.counts[i], c, "grid point {lam}");
        }
    }

    #[test]
    fn live_index_words_small() {
        let live = live_index_words(&g0(), 200.0, 10);
        // every live word's subtree minimum really is below the threshold
        for tau in &live {
            let v = crate::matrix::apply_word(&g0(), &tau.to_word()).unwrap();
            assert!(v.inscribed_curvature() <= 200.0);
        }
        assert!(!live.is_empty());
    }
}
