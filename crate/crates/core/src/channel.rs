//! Rayleigh channel generation, Jakes persistence and one-step Gauss–Markov aging.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::bessel_j0;

/// How strongly the stale channel estimate correlates with the channel in use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PersistenceSpec {
    Rho(f64),
    Jakes { doppler_hz: f64, delay_s: f64 },
}

impl PersistenceSpec {
    /// Resolves to a correlation in `[0, 1]`.
    pub fn resolve(&self) -> Result<f64> {
        match *self {
            PersistenceSpec::Rho(rho) => {
                if !(0.0..=1.0).contains(&rho) {
                    return Err(Error::domain(format!("rho must lie in [0, 1], got {rho}")));
                }
                Ok(rho)
            }
            PersistenceSpec::Jakes { doppler_hz, delay_s } => jakes_persistence(doppler_hz, delay_s),
        }
    }
}

/// `J0(2π f_d δt)`; values past the first zero of `J0` are rejected.
pub fn jakes_persistence(doppler_hz: f64, delay_s: f64) -> Result<f64> {
    if !(doppler_hz >= 0.0) || !(delay_s >= 0.0) {
        return Err(Error::domain(format!(
            "Doppler and delay must be >= 0, got {doppler_hz} Hz and {delay_s} s"
        )));
    }
    let rho = bessel_j0(2.0 * std::f64::consts::PI * doppler_hz * delay_s)?;
    if rho < 0.0 {
        return Err(Error::BeyondFirstZero { rho });
    }
    Ok(rho)
}

/// Converts an SNR in dB to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Antenna counts, rate, SNR and channel persistence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub n_t: u32,
    pub n_r: u32,
    pub n_u: u32,
    /// Transmission rate in bits/s/Hz.
    pub rate_bits: f64,
    /// Linear SNR.
    pub snr_linear: f64,
    pub persistence: PersistenceSpec,
}

impl SystemConfig {
    /// Single-user, single-receive-antenna configuration.
    pub fn miso(n_t: u32, rate_bits: f64, snr_db: f64, rho: f64) -> Self {
        Self {
            n_t,
            n_r: 1,
            n_u: 1,
            rate_bits,
            snr_linear: db_to_linear(snr_db),
            persistence: PersistenceSpec::Rho(rho),
        }
    }

    pub fn multiuser(n_u: u32, n_t: u32, n_r: u32, rate_bits: f64, snr_db: f64, rho: f64) -> Self {
        Self {
            n_t,
            n_r,
            n_u,
            rate_bits,
            snr_linear: db_to_linear(snr_db),
            persistence: PersistenceSpec::Rho(rho),
        }
    }

    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.snr_linear = db_to_linear(snr_db);
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.persistence = PersistenceSpec::Rho(rho);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 || self.n_r == 0 || self.n_u == 0 {
            return Err(Error::domain("antenna and user counts must be positive"));
        }
        if !(self.rate_bits > 0.0) || !self.rate_bits.is_finite() {
            return Err(Error::domain(format!("rate must be positive, got {}", self.rate_bits)));
        }
        if !(self.snr_linear > 0.0) || !self.snr_linear.is_finite() {
            return Err(Error::domain(format!(
                "SNR must be positive and finite, got {}",
                self.snr_linear
            )));
        }
        self.persistence.resolve()?;
        Ok(())
    }
}

/// Aging state of the feedback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delay {
    /// `ρ = 1`: the transmitter acts on the current channel.
    None,
    /// `μ = ρ²/(1-ρ²)` and `β = γ₀/(1-ρ²)`.
    Stale { mu: f64, beta: f64 },
}

/// Scalars shared by every outage expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub rho: f64,
    /// Outage threshold on the effective gain, `(2^R - 1)/(ε/N_t)`.
    pub gamma0: f64,
    pub delay: Delay,
}

impl DerivedParams {
    pub fn is_delay_free(&self) -> bool {
        matches!(self.delay, Delay::None)
    }

    pub fn mu(&self) -> Option<f64> {
        match self.delay {
            Delay::Stale { mu, .. } => Some(mu),
            Delay::None => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match self.delay {
            Delay::Stale { beta, .. } => Some(beta),
            Delay::None => None,
        }
    }
}

pub fn derive_params(config: &SystemConfig) -> Result<DerivedParams> {
    config.validate()?;
    let rho = config.persistence.resolve()?;
    let gamma0 = (2f64.powf(config.rate_bits) - 1.0) / (config.snr_linear / config.n_t as f64);
    let delay = if rho == 1.0 {
        Delay::None
    } else {
        let var = 1.0 - rho * rho;
        Delay::Stale {
            mu: rho * rho / var,
            beta: gamma0 / var,
        }
    };
    Ok(DerivedParams { rho, gamma0, delay })
}

/// Deterministic random stream keyed by `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// One `CN(0, 1)` sample: independent `N(0, 1/2)` real and imaginary parts.
    pub fn complex_normal(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn fill_complex_normal(&mut self, out: &mut [Complex64]) {
        for z in out {
            *z = self.complex_normal();
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }
}

/// `n_t × n_r` complex gains, stored row-major by transmit antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    n_t: usize,
    n_r: usize,
    entries: Vec<Complex64>,
}

impl ChannelMatrix {
    pub fn new(n_t: usize, n_r: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n_t == 0 || n_r == 0 || entries.len() != n_t * n_r {
            return Err(Error::domain(format!(
                "{} entries do not form a {n_t} x {n_r} channel",
                entries.len()
            )));
        }
        Ok(Self { n_t, n_r, entries })
    }

    /// MISO channel from its per-antenna gains.
    pub fn vector(entries: Vec<Complex64>) -> Result<Self> {
        let n_t = entries.len();
        Self::new(n_t, 1, entries)
    }

    pub fn zeros(n_t: usize, n_r: usize) -> Self {
        Self {
            n_t,
            n_r,
            entries: vec![Complex64::new(0.0, 0.0); n_t * n_r],
        }
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn get(&self, tx: usize, rx: usize) -> Complex64 {
        self.entries[tx * self.n_r + rx]
    }

    /// Gains from transmit antenna `tx` to every receive antenna.
    pub fn row(&self, tx: usize) -> &[Complex64] {
        &self.entries[tx * self.n_r..(tx + 1) * self.n_r]
    }

    pub fn row_norm_sqr(&self, tx: usize) -> f64 {
        self.row(tx).iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_miso(&self) -> bool {
        self.n_r == 1
    }

    /// Redraws every entry i.i.d. `CN(0, 1)`.
    pub fn redraw(&mut self, rng: &mut RngStream) {
        rng.fill_complex_normal(&mut self.entries);
    }

    /// In-place version of [`age_channel`]; `rho` is assumed validated.
    pub fn age_in_place(&mut self, rho: f64, rng: &mut RngStream) {
        let s = (1.0 - rho * rho).sqrt();
        for h in &mut self.entries {
            let e = rng.complex_normal();
            *h = *h * rho + e * s;
        }
    }
}

pub fn draw_channel(rng: &mut RngStream, n_t: usize, n_r: usize) -> Result<ChannelMatrix> {
    if n_t == 0 || n_r == 0 {
        return Err(Error::domain("channel dimensions must be positive"));
    }
    let mut h = ChannelMatrix::zeros(n_t, n_r);
    h.redraw(rng);
    Ok(h)
}

/// `ρ h + √(1-ρ²) e` with a fresh `CN(0, I)` innovation `e`.
pub fn age_channel(h: &ChannelMatrix, rho: f64, rng: &mut RngStream) -> Result<ChannelMatrix> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain(format!("rho must lie in [0, 1], got {rho}")));
    }
    let mut out = h.clone();
    out.age_in_place(rho, rng);
    Ok(out)
}
