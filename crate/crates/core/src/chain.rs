//! The renewal Markov chain on unit-measure curvature states.
//!
//! From a normalized state `g`, one step picks an index word `tau = j^n k`
//! with probability proportional to the relative measure of the
//! corresponding sub-gasket, moves to the renormalized child state and
//! accumulates the log-measure increment `u = -log(h(g M_tau)) / d`. The
//! empirical drift of the accumulated increments and the stationarity of
//! the visited states are the testable content of the renewal limit.

use std::sync::Arc;

use dashmap::DashMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::{count, CountQuery, DEFAULT_NODE_CAP};
use crate::curvature::CurvatureVector;
use crate::dimension::MeasureSession;
use crate::error::{Error, Result};
use crate::matrix::apply_word;
use crate::word::{enumerate_index_set, IndexWord};

/// Tuning for kernel estimation and simulation.
#[derive(Clone, Debug, Serialize)]
pub struct ChainConfig {
    /// Exponent used for normalization and increments.
    pub d: f64,
    /// Scale at which kernel probabilities are estimated by counting.
    pub lambda_kernel: f64,
    /// Index words are truncated at `j^{n_max} k`.
    pub n_max: u32,
    /// Kernels whose raw mass falls outside `[mass_lo, mass_hi]` are
    /// rejected (scale or truncation too small).
    pub mass_lo: f64,
    pub mass_hi: f64,
    /// Memoize kernels on a quantization grid of the state coordinates.
    pub cache: bool,
    /// Quantization cell width for the cache key.
    pub cache_grid: f64,
    pub node_cap: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            d: crate::dimension::DEFAULT_DIMENSION,
            lambda_kernel: 1e5,
            n_max: 40,
            mass_lo: 0.9,
            mass_hi: 1.001,
            cache: true,
            cache_grid: 1e-3,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

/// One transition candidate.
#[derive(Clone, Debug, Serialize)]
pub struct KernelEntry {
    pub tau: IndexWord,
    /// Count-ratio estimate of the child measure (pre-renormalization).
    pub p_raw: f64,
    /// Renormalized probability.
    pub p: f64,
}

/// Estimated transition law at one state.
#[derive(Clone, Debug, Serialize)]
pub struct TransitionKernel {
    pub entries: Vec<KernelEntry>,
    /// Pre-renormalization mass; the truncation tail is `1 - raw_mass`
    /// minus the power-word remainder share.
    pub raw_mass: f64,
    pub lambda_kernel: f64,
    pub n_max: u32,
}

impl TransitionKernel {
    pub fn sample(&self, r: f64) -> &KernelEntry {
        debug_assert!((0.0..1.0).contains(&r));
        let mut acc = 0.0;
        for e in &self.entries {
            acc += e.p;
            if r < acc {
                return e;
            }
        }
        self.entries.last().expect("kernel entries are nonempty")
    }
}

/// Estimates the transition kernel at `g` by counting each child sub-gasket
/// at the kernel scale and renormalizing the truncated mass.
pub fn build_kernel(g: &CurvatureVector, cfg: &ChainConfig) -> Result<TransitionKernel> {
    let total = count(
        &CountQuery::new(g.clone(), cfg.lambda_kernel)?.with_node_cap(cfg.node_cap),
    )?;
    if total == 0 {
        return Err(Error::InvalidArgument(format!(
            "state has no counts below the kernel scale {}",
            cfg.lambda_kernel
        )));
    }
    let taus = enumerate_index_set(cfg.n_max);
    let raw: Vec<(IndexWord, f64)> = taus
        .par_iter()
        .map(|tau| -> Result<(IndexWord, f64)> {
            let child = apply_word(g, &tau.to_word())?;
            let c = count(
                &CountQuery::new(child, cfg.lambda_kernel)?.with_node_cap(cfg.node_cap),
            )?;
            Ok((*tau, c as f64 / total as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let raw_mass: f64 = raw.iter().map(|(_, p)| p).sum();
    if !(cfg.mass_lo..=cfg.mass_hi).contains(&raw_mass) {
        return Err(Error::KernelMass {
            mass: raw_mass,
            lo: cfg.mass_lo,
            hi: cfg.mass_hi,
        });
    }
    let entries: Vec<KernelEntry> = raw
        .into_iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|(tau, p_raw)| KernelEntry {
            tau,
            p_raw,
            p: p_raw / raw_mass,
        })
        .collect();
    Ok(TransitionKernel {
        entries,
        raw_mass,
        lambda_kernel: cfg.lambda_kernel,
        n_max: cfg.n_max,
    })
}

/// A state on the session's unit-measure slice.
#[derive(Clone, Debug, Serialize)]
pub struct ChainState {
    vector: CurvatureVector,
}

/// Tolerance on the re-estimated measure of a prepared start state.
pub const STATE_MEASURE_TOL: f64 = 0.02;

impl ChainState {
    /// Normalizes `g` with the session estimator and verifies the result
    /// re-estimates to unit measure within [`STATE_MEASURE_TOL`].
    pub fn prepare(session: &MeasureSession, g: &CurvatureVector) -> Result<Self> {
        let vector = session.normalize(g)?;
        let h = session.h_rel(&vector)?;
        if (h - 1.0).abs() > STATE_MEASURE_TOL {
            return Err(Error::InvalidArgument(format!(
                "normalization did not reach the unit-measure slice (h = {h}); \
                 raise the session scale"
            )));
        }
        Ok(ChainState { vector })
    }

    /// Wraps an already-normalized state without re-checking.
    pub fn from_normalized(vector: CurvatureVector) -> Self {
        ChainState { vector }
    }

    pub fn vector(&self) -> &CurvatureVector {
        &self.vector
    }
}

/// One simulated step.
#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub n: u32,
    pub tau: IndexWord,
    /// Increment from the raw (pre-renormalization) child measure.
    pub u: f64,
    /// Correction from the kernel's truncated tail:
    /// `u + renorm_correction = -log(p)/d` for the renormalized `p`.
    pub renorm_correction: f64,
    /// Running sum of `u` after this step.
    pub v: f64,
    pub state: [f64; 4],
}

/// A full trajectory with its reproducibility data.
#[derive(Clone, Debug, Serialize)]
pub struct ChainPath {
    pub path_index: u64,
    pub seed: u64,
    pub start: [f64; 4],
    pub records: Vec<StepRecord>,
}

impl ChainPath {
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,tau,u,renorm_correction,v,alpha,beta,gamma,kappa")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                r.n,
                r.tau,
                r.u,
                r.renorm_correction,
                r.v,
                r.state[0],
                r.state[1],
                r.state[2],
                r.state[3]
            )?;
        }
        Ok(())
    }
}

/// Samples one transition. Returns the next state and the step record.
pub fn step(
    state: &ChainState,
    kernel: &TransitionKernel,
    cfg: &ChainConfig,
    rng: &mut impl Rng,
) -> Result<(ChainState, IndexWord, f64, f64)> {
    let entry = kernel.sample(rng.gen::<f64>());
    let unnormalized = apply_word(state.vector(), &entry.tau.to_word())?;
    // the kernel's raw ratio is the session-consistent measure estimate of
    // the child, so it provides both the increment and the renormalization
    let u = -entry.p_raw.ln() / cfg.d;
    let renorm_correction = -kernel.raw_mass.ln() / cfg.d;
    let next = unnormalized.scale(entry.p_raw.powf(1.0 / cfg.d))?;
    Ok((
        ChainState::from_normalized(next),
        entry.tau,
        u,
        renorm_correction,
    ))
}

type KernelCache = DashMap<[i64; 3], Arc<TransitionKernel>>;

fn cache_key(v: &CurvatureVector, grid: f64) -> [i64; 3] {
    let q = v.quadruple();
    [
        (q[0] / grid).round() as i64,
        (q[1] / grid).round() as i64,
        (q[2] / grid).round() as i64,
    ]
}

/// Simulation output with cache metadata.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationOutput {
    pub paths: Vec<ChainPath>,
    pub config: ChainConfig,
    pub base_seed: u64,
    pub cache_enabled: bool,
    pub distinct_kernels: u64,
}

/// Runs independent paths from one start state. Paths are reproducible from
/// `(base_seed, path_index)` regardless of thread count.
pub fn simulate(
    start: &ChainState,
    n_steps: u32,
    n_paths: u32,
    base_seed: u64,
    cfg: &ChainConfig,
) -> Result<SimulationOutput> {
    let cache: KernelCache = DashMap::new();
    let kernel_for = |v: &CurvatureVector| -> Result<Arc<TransitionKernel>> {
        if !cfg.cache {
            return Ok(Arc::new(build_kernel(v, cfg)?));
        }
        let key = cache_key(v, cfg.cache_grid);
        if let Some(k) = cache.get(&key) {
            return Ok(Arc::clone(&k));
        }
        let built = Arc::new(build_kernel(v, cfg)?);
        // first write wins so every reader sees one kernel per cell
        Ok(Arc::clone(
            cache.entry(key).or_insert(built).value(),
        ))
    };

    let paths: Vec<ChainPath> = (0..n_paths as u64)
        .into_par_iter()
        .map(|path_index| -> Result<ChainPath> {
            let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
            rng.set_stream(path_index);
            let mut state = start.clone();
            let mut v_acc = 0.0f64;
            let mut records = Vec::with_capacity(n_steps as usize);
            for n in 1..=n_steps {
                let kernel = kernel_for(state.vector())?;
                let (next, tau, u, corr) = step(&state, &kernel, cfg, &mut rng)?;
                v_acc += u;
                records.push(StepRecord {
                    n,
                    tau,
                    u,
                    renorm_correction: corr,
                    v: v_acc,
                    state: next.vector().quadruple(),
                });
                state = next;
            }
            Ok(ChainPath {
                path_index,
                seed: base_seed,
                start: start.vector().quadruple(),
                records,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimulationOutput {
        paths,
        config: cfg.clone(),
        base_seed,
        cache_enabled: cfg.cache,
        distinct_kernels: cache.len() as u64,
    })
}

/// Summary statistics over a set of paths.
#[derive(Clone, Debug, Serialize)]
pub struct SimulationSummary {
    /// Mean increment after burn-in, the drift estimate.
    pub drift: f64,
    pub drift_stderr: f64,
    pub burn_in: u32,
    /// Gelman-Rubin statistic across paths for the first state coordinate.
    pub gelman_rubin: f64,
    /// Largest epsilon such that every visited state lies in
    /// `Gamma_epsilon`.
    pub empirical_eps0: f64,
    pub n_paths: usize,
    pub n_steps: u32,
}

impl SimulationSummary {
    pub fn from_paths(paths: &[ChainPath], burn_in: u32) -> Result<Self> {
        if paths.is_empty() || paths[0].records.len() <= burn_in as usize {
            return Err(Error::InvalidArgument(
                "need nonempty paths longer than the burn-in".into(),
            ));
        }
        let n_steps = paths[0].records.len() as u32;
        let mut us = Vec::new();
        let mut eps0 = f64::INFINITY;
        // per-path means of the first coordinate after burn-in, for R-hat
        let mut path_means = Vec::with_capacity(paths.len());
        let mut path_vars = Vec::with_capacity(paths.len());
        for p in paths {
            let tail: Vec<&StepRecord> = p
                .records
                .iter()
                .filter(|r| r.n > burn_in)
                .collect();
            let xs: Vec<f64> = tail.iter().map(|r| r.state[0]).collect();
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>()
                / (xs.len() as f64 - 1.0);
            path_means.push(m);
            path_vars.push(var);
            for r in &tail {
                us.push(r.u);
            }
            for r in &p.records {
                let v = CurvatureVector::from_quadruple(r.state)?;
                eps0 = eps0.min(v.gamma_eps_capacity());
            }
        }
        let drift = us.iter().sum::<f64>() / us.len() as f64;
        let var_u =
            us.iter().map(|u| (u - drift).powi(2)).sum::<f64>() / (us.len() as f64 - 1.0);
        let drift_stderr = (var_u / us.len() as f64).sqrt();

        let m = path_means.len() as f64;
        let n = (n_steps - burn_in) as f64;
        let grand = path_means.iter().sum::<f64>() / m;
        let b = n / (m - 1.0)
            * path_means.iter().map(|x| (x - grand).powi(2)).sum::<f64>();
        let w = path_vars.iter().sum::<f64>() / m;
        let gelman_rubin = (((n - 1.0) / n * w + b / n) / w).sqrt();

        Ok(SimulationSummary {
            drift,
            drift_stderr,
            burn_in,
            gelman_rubin,
            empirical_eps0: eps0,
            n_paths: paths.len(),
            n_steps,
        })
    }
}

/// Distributional comparison of two simulations from different starts.
#[derive(Clone, Debug, Serialize)]
pub struct StartComparison {
    /// Binned total-variation-style distance between the empirical laws of
    /// the first state coordinate over the final window of each run.
    pub binned_distance: f64,
    pub bins: usize,
    /// Steps from the end of each path contributing samples.
    pub window: u32,
    pub drift_first: f64,
    pub drift_second: f64,
    pub drift_relative_difference: f64,
}

/// Compares the late-time state distribution and drift of two runs.
/// Samples pool the final `window` steps of every path, which keeps the
/// sampling noise of the distance well below the acceptance threshold.
pub fn compare_starts(
    a: &SimulationOutput,
    b: &SimulationOutput,
    window: u32,
    bins: usize,
    burn_in: u32,
) -> Result<StartComparison> {
    let collect = |out: &SimulationOutput| -> Vec<f64> {
        let mut xs = Vec::new();
        for p in &out.paths {
            let last_n = p.records.last().map(|r| r.n).unwrap_or(0);
            for r in &p.records {
                if r.n + window > last_n {
                    xs.push(r.state[0]);
                }
            }
        }
        xs
    };
    let xa = collect(a);
    let xb = collect(b);
    if xa.is_empty() || xb.is_empty() {
        return Err(Error::InvalidArgument("empty simulation output".into()));
    }
    let lo = xa
        .iter()
        .chain(&xb)
        .fold(f64::INFINITY, |m, &x| m.min(x));
    let hi = xa
        .iter()
        .chain(&xb)
        .fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    let width = ((hi - lo) / bins as f64).max(f64::MIN_POSITIVE);
    let histogram = |xs: &[f64]| -> Vec<f64> {
        let mut h = vec![0.0f64; bins];
        for &x in xs {
            let i = (((x - lo) / width) as usize).min(bins - 1);
            h[i] += 1.0 / xs.len() as f64;
        }
        h
    };
    let ha = histogram(&xa);
    let hb = histogram(&xb);
    let binned_distance = 0.5
        * ha.iter()
            .zip(&hb)
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>();

    let sa = SimulationSummary::from_paths(&a.paths, burn_in)?;
    let sb = SimulationSummary::from_paths(&b.paths, burn_in)?;
    let mean = 0.5 * (sa.drift + sb.drift);
    Ok(StartComparison {
        binned_distance,
        bins,
        window,
        drift_first: sa.drift,
        drift_second: sb.drift,
        drift_relative_difference: (sa.drift - sb.drift).abs() / mean,
    })
}

/// One threshold of the constancy check.
#[derive(Clone, Debug, Serialize)]
pub struct ConstancyPoint {
    pub lambda: f64,
    /// `lambda^{-d} N(g, lambda) / h_rel(g)` per sample state.
    pub values: Vec<f64>,
    /// max/min over the sample at this threshold.
    pub spread: f64,
    /// max/min pooled over the sample and all thresholds so far.
    pub pooled_spread: f64,
}

/// Constancy of the normalized counting limit across states.
#[derive(Clone, Debug, Serialize)]
pub struct ConstancyReport {
    pub d_used: f64,
    pub points: Vec<ConstancyPoint>,
}

impl ConstancyReport {
    pub fn spread_at(&self, lambda: f64) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.lambda == lambda)
            .map(|p| p.spread)
    }
}

/// Computes `lambda^{-d} N(g, lambda) / h_rel(g)` across a sample of
/// normalized states and increasing thresholds. With the correct exponent
/// the per-threshold spread stays near 1 and shrinks as the threshold
/// grows; a wrong exponent leaves a per-decade drift that inflates the
/// pooled spread decade after decade.
pub fn renewal_constancy_check(
    session: &MeasureSession,
    sample: &[CurvatureVector],
    lambdas: &[f64],
    d: f64,
    node_cap: u64,
) -> Result<ConstancyReport> {
    if sample.is_empty() || lambdas.is_empty() {
        return Err(Error::InvalidArgument(
            "constancy check needs states and thresholds".into(),
        ));
    }
    let hs: Vec<f64> = sample
        .iter()
        .map(|g| session.h_rel(g))
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::with_capacity(lambdas.len());
    let mut pooled_min = f64::INFINITY;
    let mut pooled_max = 0.0f64;
    for &lambda in lambdas {
        let values: Vec<f64> = sample
            .par_iter()
            .zip(&hs)
            .map(|(g, h)| -> Result<f64> {
                let c = count(
                    &CountQuery::new(g.clone(), lambda)?.with_node_cap(node_cap),
                )?;
                Ok(lambda.powf(-d) * c as f64 / h)
            })
            .collect::<Result<Vec<_>>>()?;
        let min = values.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        let max = values.iter().fold(0.0f64, |m: f64, &x| m.max(x));
        pooled_min = pooled_min.min(min);
        pooled_max = pooled_max.max(max);
        points.push(ConstancyPoint {
            lambda,
            values,
            spread: max / min,
            pooled_spread: pooled_max / pooled_min,
        });
    }
    Ok(ConstancyReport { d_used: d, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::DEFAULT_DIMENSION;
    use crate::word::Letter;

    fn quick_cfg() -> ChainConfig {
        // small scales keep unit tests fast; acceptance runs the defaults
        ChainConfig {
            lambda_kernel: 2e4,
            n_max: 30,
            ..ChainConfig::default()
        }
    }

    fn quick_session() -> MeasureSession {
        MeasureSession::with_default_reference(DEFAULT_DIMENSION, 3e4, DEFAULT_NODE_CAP).unwrap()
    }

    fn start_state(session: &MeasureSession) -> ChainState {
        let g = CurvatureVector::new(2.0, 3.0, 6.0).unwrap();
        ChainState::prepare(session, &g).unwrap()
    }

    #[test]
    fn kernel_mass_and_probabilities() {
        let session = quick_session();
        let state = start_state(&session);
        let k = build_kernel(state.vector(), &quick_cfg()).unwrap();
        assert!(k.raw_mass > 0.9 && k.raw_mass < 1.0, "mass {}", k.raw_mass);
        let total: f64 = k.entries.iter().map(|e| e.p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(k.entries.iter().all(|e| e.p > 0.0));
    }

    #[test]
    fn kernel_symmetric_state_probabilities_match() {
        // all coordinates equal: the six entries at each n coincide exactly
        let session = quick_session();
        let g = CurvatureVector::new(1.0, 1.0, 1.0).unwrap();
        let state = ChainState::prepare(&session, &g).unwrap();
        let k = build_kernel(state.vector(), &quick_cfg()).unwrap();
        for n in 1..=3u32 {
            let ps: Vec<f64> = k
                .entries
                .iter()
                .filter(|e| e.tau.n() == n)
                .map(|e| e.p_raw)
                .collect();
            assert_eq!(ps.len(), 6);
            assert!(ps.iter().all(|&p| p == ps[0]), "n = {n}: {ps:?}");
        }
    }

    #[test]
    fn kernel_decays_in_n_at_symmetric_state() {
        let session = quick_session();
        let g = CurvatureVector::new(1.0, 1.0, 1.0).unwrap();
        let state = ChainState::prepare(&session, &g).unwrap();
        let k = build_kernel(state.vector(), &quick_cfg()).unwrap();
        let p_at = |n: u32| {
            k.entries
                .iter()
                .find(|e| e.tau.n() == n && e.tau.j() == Letter::L1 && e.tau.k() == Letter::L2)
                .map(|e| e.p_raw)
                .unwrap_or(0.0)
        };
        for n in 1..8u32 {
            assert!(p_at(n) > p_at(n + 1), "p not decreasing at n = {n}");
        }
    }

    #[test]
    fn kernel_rejects_tiny_scale() {
        let session = quick_session();
        let state = start_state(&session);
        let cfg = ChainConfig {
            lambda_kernel: 100.0,
            ..quick_cfg()
        };
        assert!(matches!(
            build_kernel(state.vector(), &cfg),
            Err(Error::KernelMass { .. })
        ));
    }

    #[test]
    fn steps_have_positive_increments_and_reproduce() {
        let session = quick_session();
        let state = start_state(&session);
        let cfg = quick_cfg();
        let out1 = simulate(&state, 20, 3, 7, &cfg).unwrap();
        let out2 = simulate(&state, 20, 3, 7, &cfg).unwrap();
        for (p1, p2) in out1.paths.iter().zip(&out2.paths) {
            assert_eq!(p1.records.len(), p2.records.len());
            for (r1, r2) in p1.records.iter().zip(&p2.records) {
                assert_eq!(r1.tau, r2.tau);
                assert_eq!(r1.state, r2.state);
                assert!(r1.u > 0.0);
            }
        }
        // v is the running sum of u
        for p in &out1.paths {
            let mut acc = 0.0;
            for r in &p.records {
                acc += r.u;
                assert!((r.v - acc).abs() < 1e-12);
                assert!(r.renorm_correction >= 0.0);
            }
            // strictly increasing
            for w in p.records.windows(2) {
                assert!(w[1].v > w[0].v);
            }
        }
    }

    #[test]
    fn semigroup_property_on_unnormalized_states() {
        // stepping by tau1 then tau2 equals the single word tau1 tau2,
        // exactly on the integer-backed quadruples
        let g = CurvatureVector::new(2.0, 3.0, 6.0).unwrap();
        let t1: IndexWord = IndexWord::new(Letter::L1, 2, Letter::L3).unwrap();
        let t2: IndexWord = IndexWord::new(Letter::L2, 1, Letter::L1).unwrap();
        let one = apply_word(
            &apply_word(&g, &t1.to_word()).unwrap(),
            &t2.to_word(),
        )
        .unwrap();
        let both = apply_word(&g, &t1.to_word().concat(&t2.to_word())).unwrap();
        assert_eq!(one.exact().unwrap(), both.exact().unwrap());
    }

    #[test]
    fn cache_does_not_change_sampled_paths() {
        let session = quick_session();
        let state = start_state(&session);
        let with_cache = simulate(&state, 12, 2, 11, &quick_cfg()).unwrap();
        let cfg_nocache = ChainConfig {
            cache: false,
            ..quick_cfg()
        };
        let without = simulate(&state, 12, 2, 11, &cfg_nocache).unwrap();
        // the quantized cache may substitute a nearby kernel, so compare
        // statistics rather than bitwise paths
        let sa = SimulationSummary::from_paths(&with_cache.paths, 2).unwrap();
        let sb = SimulationSummary::from_paths(&without.paths, 2).unwrap();
        assert!((sa.drift - sb.drift).abs() / sb.drift < 0.2);
    }

    #[test]
    fn summary_and_comparison_shapes() {
        let session = quick_session();
        let state = start_state(&session);
        let out = simulate(&state, 30, 4, 3, &quick_cfg()).unwrap();
        let s = SimulationSummary::from_paths(&out.paths, 5).unwrap();
        assert!(s.drift > 0.0);
        assert!(s.empirical_eps0 > 0.0);
        assert!(s.gelman_rubin.is_finite());

        let g2 = CurvatureVector::new(1.0, 1.0, 1.0).unwrap();
        let state2 = ChainState::prepare(&session, &g2).unwrap();
        let out2 = simulate(&state2, 30, 4, 5, &quick_cfg()).unwrap();
        let cmp = compare_starts(&out, &out2, 10, 4, 5).unwrap();
        assert!(cmp.binned_distance >= 0.0 && cmp.binned_distance <= 1.0);
        assert!(cmp.drift_first > 0.0 && cmp.drift_second > 0.0);
    }
}
