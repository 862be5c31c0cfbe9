//! Link-level outage simulation with chunked, worker-independent random streams.
//!
//! Each chunk of `plan.chunk` trials draws from its own stream
//! `(seed, base + chunk_index)`, so the outage count depends on the seed and
//! chunk size only, never on how chunks are spread over threads.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{Method, OutageEstimate, Scheme};
use crate::channel::{derive_params, RngStream, SystemConfig};
use crate::codebook::{best_codeword, fill_rvq, projection_gain, Codebook, CodebookKind};
use crate::error::{Error, Result};

pub const DEFAULT_CHUNK: u64 = 65_536;

/// Trial count, seed and scheduling of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub chunk: u64,
}

impl TrialPlan {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            workers: 1,
            chunk: DEFAULT_CHUNK,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_chunk(mut self, chunk: u64) -> Self {
        self.chunk = chunk;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.workers == 0 || self.chunk == 0 {
            return Err(Error::domain("trials, workers and chunk must all be at least 1"));
        }
        Ok(())
    }
}

/// Empirical outage frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub outage_count: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub std_err: f64,
}

impl McResult {
    pub fn from_counts(outage_count: u64, trials: u64) -> Self {
        let p_hat = outage_count as f64 / trials as f64;
        Self {
            outage_count,
            trials,
            p_hat,
            std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        }
    }

    /// Half-width of the 3-sigma interval, or the rule-of-three bound `3/n`
    /// when no outage was seen.
    pub fn ci_halfwidth(&self) -> f64 {
        if self.outage_count == 0 {
            3.0 / self.trials as f64
        } else {
            3.0 * self.std_err
        }
    }

    /// True when `p_hat` lies within three standard errors of `reference`,
    /// the standard error being taken at the reference value.
    pub fn consistent_with(&self, reference: f64) -> bool {
        let se = (reference * (1.0 - reference) / self.trials as f64).sqrt();
        (self.p_hat - reference).abs() <= 3.0 * se
    }

    /// Distance from `reference` in standard errors at the reference value.
    pub fn z_score(&self, reference: f64) -> f64 {
        let se = (reference * (1.0 - reference) / self.trials as f64).sqrt();
        let diff = (self.p_hat - reference).abs();
        if se > 0.0 {
            diff / se
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn to_estimate(&self) -> OutageEstimate {
        OutageEstimate {
            value: self.p_hat,
            method: Method::MonteCarlo,
            ci_halfwidth: self.ci_halfwidth(),
            flags: Vec::new(),
        }
    }
}

/// Estimates the outage probability of `scheme` by simulation.
///
/// Per trial the channel is drawn fresh, the scheme selects on that stale
/// channel, and the outage test is applied to the aged channel. RVQ schemes
/// draw a new codebook every trial unless `codebook` fixes one.
pub fn simulate_outage(
    scheme: Scheme,
    config: &SystemConfig,
    codebook: Option<&Codebook>,
    plan: &TrialPlan,
) -> Result<McResult> {
    simulate_from_stream(scheme, config, codebook, plan, 0)
}

/// [`simulate_outage`] with chunk streams numbered from `stream_base`.
pub fn simulate_from_stream(
    scheme: Scheme,
    config: &SystemConfig,
    codebook: Option<&Codebook>,
    plan: &TrialPlan,
    stream_base: u64,
) -> Result<McResult> {
    plan.validate()?;
    let link = Link::new(scheme, config, codebook)?;
    let chunks = plan.trials.div_ceil(plan.chunk);
    let run = |c: u64| {
        let len = plan.chunk.min(plan.trials - c * plan.chunk);
        let mut rng = RngStream::new(plan.seed, stream_base + c);
        link.count_outages(&mut rng, len)
    };
    let count: u64 = if plan.workers == 1 {
        (0..chunks).map(run).sum()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.workers)
            .build()
            .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
        pool.install(|| (0..chunks).into_par_iter().map(run).sum())
    };
    Ok(McResult::from_counts(count, plan.trials))
}

/// Parameter varied by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    SnrDb,
    Rho,
    CodebookSize,
    Users,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::Rho => "rho",
            SweepAxis::CodebookSize => "codebook_size",
            SweepAxis::Users => "users",
        }
    }

    /// Applies one axis value to a scheme and configuration template.
    pub fn apply(&self, scheme: Scheme, config: &SystemConfig, value: f64) -> Result<(Scheme, SystemConfig)> {
        let count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(Error::domain(format!(
                    "{} values must be positive integers, got {v}",
                    self.name()
                )))
            }
        };
        Ok(match self {
            SweepAxis::SnrDb => (scheme, config.with_snr_db(value)),
            SweepAxis::Rho => (scheme, config.with_rho(value)),
            SweepAxis::CodebookSize => {
                if scheme.codebook_size().is_none() {
                    return Err(Error::domain(format!(
                        "{} has no codebook size to sweep",
                        scheme.name()
                    )));
                }
                (scheme.with_codebook_size(count(value)?), *config)
            }
            SweepAxis::Users => (
                scheme,
                SystemConfig {
                    n_u: count(value)? as u32,
                    ..*config
                },
            ),
        })
    }
}

/// One simulation per axis value; value `i` uses streams starting at `i << 32`.
pub fn sweep(
    scheme: Scheme,
    template: &SystemConfig,
    axis: SweepAxis,
    values: &[f64],
    plan: &TrialPlan,
) -> Result<Vec<(f64, McResult)>> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let (s, c) = axis.apply(scheme, template, v)?;
            Ok((v, simulate_from_stream(s, &c, None, plan, (i as u64) << 32)?))
        })
        .collect()
}

/// Everything a trial needs, resolved once per simulation.
struct Link<'a> {
    scheme: Scheme,
    n_t: usize,
    n_r: usize,
    n_u: usize,
    rho: f64,
    sigma: f64,
    gamma0: f64,
    fixed: Option<&'a Codebook>,
}

impl<'a> Link<'a> {
    fn new(scheme: Scheme, config: &SystemConfig, codebook: Option<&'a Codebook>) -> Result<Self> {
        scheme.check(config)?;
        let params = derive_params(config)?;
        let fixed = match (scheme.codebook_size(), codebook) {
            (Some(n), Some(cb)) => {
                if cb.kind() != CodebookKind::Rvq || cb.n_t() != config.n_t as usize || cb.cardinality() != n {
                    return Err(Error::domain(format!(
                        "fixed codebook must be RVQ with n_t = {} and {n} vectors",
                        config.n_t
                    )));
                }
                Some(cb)
            }
            _ => None,
        };
        Ok(Self {
            scheme,
            n_t: config.n_t as usize,
            n_r: config.n_r as usize,
            n_u: config.n_u as usize,
            rho: params.rho,
            sigma: (1.0 - params.rho * params.rho).sqrt(),
            gamma0: params.gamma0,
            fixed,
        })
    }

    fn count_outages(&self, rng: &mut RngStream, trials: u64) -> u64 {
        let mut buf = Buffers::new(self);
        (0..trials).filter(|_| self.trial(rng, &mut buf)).count() as u64
    }

    fn aged(&self, h: Complex64, rng: &mut RngStream) -> Complex64 {
        h * self.rho + rng.complex_normal() * self.sigma
    }

    fn codebook<'b>(&'b self, rng: &mut RngStream, scratch: &'b mut [Complex64]) -> &'b [Complex64] {
        match self.fixed {
            Some(cb) => cb.flat(),
            None => {
                fill_rvq(rng, self.n_t, scratch);
                scratch
            }
        }
    }

    /// Runs one trial and reports whether it was in outage.
    fn trial(&self, rng: &mut RngStream, buf: &mut Buffers) -> bool {
        let n_t = self.n_t;
        match self.scheme {
            Scheme::MisoPbf => {
                rng.fill_complex_normal(&mut buf.h);
                for (a, &h) in buf.aged.iter_mut().zip(&buf.h) {
                    *a = self.aged(h, rng);
                }
                let norm: f64 = buf.h.iter().map(|z| z.norm_sqr()).sum();
                projection_gain(&buf.aged, &buf.h) / norm < self.gamma0
            }
            Scheme::MisoRvq { .. } => {
                rng.fill_complex_normal(&mut buf.h);
                let cb = self.codebook(rng, &mut buf.codebook);
                let (i, _) = best_codeword(&buf.h, cb);
                let p = &cb[i * n_t..(i + 1) * n_t];
                for (a, &h) in buf.aged.iter_mut().zip(&buf.h) {
                    *a = self.aged(h, rng);
                }
                projection_gain(&buf.aged, p) < self.gamma0
            }
            Scheme::MisoTas => {
                rng.fill_complex_normal(&mut buf.h);
                let i = argmax(buf.h.iter().map(|z| z.norm_sqr()));
                self.aged(buf.h[i], rng).norm_sqr() < self.gamma0
            }
            Scheme::MuTas => {
                // n_u matrices of n_t rows by n_r columns, back to back
                rng.fill_complex_normal(&mut buf.h);
                let row = argmax(buf.h.chunks(self.n_r).map(|r| r.iter().map(|z| z.norm_sqr()).sum()));
                let sel = &buf.h[row * self.n_r..(row + 1) * self.n_r];
                let gain: f64 = sel.iter().map(|&h| self.aged(h, rng).norm_sqr()).sum();
                gain < self.gamma0
            }
            Scheme::MuPbf => {
                rng.fill_complex_normal(&mut buf.h);
                let k = argmax(buf.h.chunks(n_t).map(|u| u.iter().map(|z| z.norm_sqr()).sum()));
                let sel = &buf.h[k * n_t..(k + 1) * n_t];
                let gain: f64 = sel.iter().map(|&h| self.aged(h, rng).norm_sqr()).sum();
                gain < self.gamma0
            }
            Scheme::MuRvq { .. } => {
                rng.fill_complex_normal(&mut buf.h);
                let k = argmax(buf.h.chunks(n_t).map(|u| u.iter().map(|z| z.norm_sqr()).sum()));
                let sel = &buf.h[k * n_t..(k + 1) * n_t];
                let norm: f64 = sel.iter().map(|z| z.norm_sqr()).sum();
                let cb = self.codebook(rng, &mut buf.codebook);
                let (_, g) = best_codeword(sel, cb);
                // the stale component keeps the captured fraction ν of the channel
                let scale = self.rho * (g / norm).sqrt();
                let gain: f64 = sel
                    .iter()
                    .map(|&h| (h * scale + rng.complex_normal() * self.sigma).norm_sqr())
                    .sum();
                gain < self.gamma0
            }
        }
    }
}

struct Buffers {
    h: Vec<Complex64>,
    aged: Vec<Complex64>,
    codebook: Vec<Complex64>,
}

impl Buffers {
    fn new(link: &Link<'_>) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            h: vec![zero; link.n_u * link.n_t * link.n_r],
            aged: vec![zero; link.n_t],
            codebook: vec![zero; link.scheme.codebook_size().unwrap_or(0) * link.n_t],
        }
    }
}

/// Index of the first maximum.
fn argmax<I: Iterator<Item = f64>>(values: I) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::regularized_lower_gamma;

    #[test]
    fn mc_result_statistics() {
        let r = McResult::from_counts(25, 100);
        assert_eq!(r.p_hat, 0.25);
        assert!((r.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert!((r.ci_halfwidth() - 3.0 * r.std_err).abs() < 1e-15);
        let zero = McResult::from_counts(0, 1000);
        assert_eq!(zero.ci_halfwidth(), 0.003);
        assert!(zero.consistent_with(0.0));
        assert!(!zero.consistent_with(0.01));
    }

    #[test]
    fn near_zero_threshold_never_outages() {
        // γ₀ = 1e-12
        let c = SystemConfig {
            rate_bits: (1.0f64 + 1e-12 * 10.0 / 4.0).log2(),
            ..SystemConfig::miso(4, 1.0, 10.0, 0.9)
        };
        for s in [Scheme::MisoPbf, Scheme::MisoTas, Scheme::MisoRvq { codebook_size: 8 }] {
            let r = simulate_outage(s, &c, None, &TrialPlan::new(10_000, 1)).unwrap();
            assert_eq!(r.outage_count, 0);
        }
    }

    #[test]
    fn delay_free_pbf_matches_gamma_cdf() {
        let c = SystemConfig::miso(4, 2.0, 10.0, 1.0);
        let r = simulate_outage(Scheme::MisoPbf, &c, None, &TrialPlan::new(200_000, 3)).unwrap();
        let want = regularized_lower_gamma(4, 1.2).unwrap();
        assert!(r.consistent_with(want), "{} vs {want}", r.p_hat);
    }

    #[test]
    fn workers_do_not_change_counts() {
        let c = SystemConfig::miso(4, 2.0, 10.0, 0.9);
        let s = Scheme::MisoRvq { codebook_size: 4 };
        let plan = TrialPlan::new(50_000, 9).with_chunk(4096);
        let a = simulate_outage(s, &c, None, &plan).unwrap();
        let b = simulate_outage(s, &c, None, &plan.with_workers(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_codebook_is_checked() {
        let c = SystemConfig::miso(4, 2.0, 10.0, 0.9);
        let s = Scheme::MisoRvq { codebook_size: 4 };
        let tas = Codebook::tas(4).unwrap();
        assert!(simulate_outage(s, &c, Some(&tas), &TrialPlan::new(10, 1)).is_err());
        let mut rng = RngStream::new(1, 0);
        let cb = crate::codebook::rvq_generate(&mut rng, 4, 4).unwrap();
        assert!(simulate_outage(s, &c, Some(&cb), &TrialPlan::new(10, 1)).is_ok());
    }

    #[test]
    fn single_value_sweep_equals_direct_call() {
        let c = SystemConfig::miso(4, 2.0, 0.0, 0.9);
        let plan = TrialPlan::new(20_000, 5);
        let swept = sweep(Scheme::MisoTas, &c, SweepAxis::SnrDb, &[10.0], &plan).unwrap();
        let direct = simulate_outage(Scheme::MisoTas, &c.with_snr_db(10.0), None, &plan).unwrap();
        assert_eq!(swept, vec![(10.0, direct)]);
    }

    #[test]
    fn sweep_axis_validation() {
        let c = SystemConfig::miso(4, 2.0, 10.0, 0.9);
        assert!(SweepAxis::CodebookSize.apply(Scheme::MisoTas, &c, 8.0).is_err());
        assert!(SweepAxis::Users.apply(Scheme::MuTas, &c, 1.5).is_err());
        let (s, _) = SweepAxis::CodebookSize
            .apply(Scheme::MisoRvq { codebook_size: 1 }, &c, 16.0)
            .unwrap();
        assert_eq!(s.codebook_size(), Some(16));
    }
}
