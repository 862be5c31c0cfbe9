//! Finite-sum outage expressions.
//!
//! Every expression is written in terms of `ρ²` and `σ² = 1 - ρ²` rather than
//! `μ = ρ²/σ²`, so the delay-free limit `ρ = 1` is the same code path.

use crate::channel::{derive_params, SystemConfig};
use crate::codebook::NuDistribution;
use crate::error::{Error, Result};
use crate::specfun::{binomial, expansion_coeffs, factorial, regularized_lower_gamma};

use super::{Correction, Method, OutageEstimate, Scheme};

const NU_TOL: f64 = 1e-12;

/// Candidate readings of the PBF series coefficient that multiplies `C(N_t-1, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PbfCoefficient {
    /// `μ^k/(k-1)`, literally.
    Verbatim,
    /// `μ^k/k!`.
    Factorial,
    /// `μ^k`.
    Binomial,
}

impl PbfCoefficient {
    pub const ALL: [PbfCoefficient; 3] = [Self::Verbatim, Self::Factorial, Self::Binomial];

    /// Factor applied on top of `μ^k`.
    fn extra(self, k: u32) -> f64 {
        match self {
            Self::Verbatim => 1.0 / (k as f64 - 1.0),
            Self::Factorial => 1.0 / factorial(k as u64),
            Self::Binomial => 1.0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Verbatim => "mu^k/(k-1)",
            Self::Factorial => "mu^k/k!",
            Self::Binomial => "mu^k",
        }
    }
}

/// Argument of `Γ_{k+1}` inside the RVQ ν-average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RvqArgument {
    /// `γ₀` for every `ν`.
    Printed,
    /// `γ₀/(1 - ρ² + ρ²ν)`.
    NuScaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RvqVariant {
    pub coefficient: PbfCoefficient,
    pub argument: RvqArgument,
}

impl RvqVariant {
    pub fn all() -> Vec<RvqVariant> {
        let mut out = Vec::new();
        for coefficient in PbfCoefficient::ALL {
            for argument in [RvqArgument::Printed, RvqArgument::NuScaled] {
                out.push(RvqVariant { coefficient, argument });
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let arg = match self.argument {
            RvqArgument::Printed => "g0",
            RvqArgument::NuScaled => "g0/(1-rho^2+rho^2 nu)",
        };
        format!("coefficient {}, argument {arg}", self.coefficient.label())
    }
}

/// Exponent threshold in the TAS sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TasExponent {
    /// `2γ₀/(1-ρ²)`.
    TwoBeta,
    /// `γ₀/(1-ρ²)`.
    Beta,
}

/// First index of the TAS sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TasStart {
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TasVariant {
    pub exponent: TasExponent,
    pub start: TasStart,
}

impl TasVariant {
    pub fn all() -> Vec<TasVariant> {
        let mut out = Vec::new();
        for exponent in [TasExponent::TwoBeta, TasExponent::Beta] {
            for start in [TasStart::Zero, TasStart::One] {
                out.push(TasVariant { exponent, start });
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let x = match self.exponent {
            TasExponent::TwoBeta => "2*beta",
            TasExponent::Beta => "beta",
        };
        let k = match self.start {
            TasStart::Zero => 0,
            TasStart::One => 1,
        };
        format!("threshold {x}, sum from k={k}")
    }
}

pub const SHIPPED_PBF: PbfCoefficient = PbfCoefficient::Binomial;
pub const SHIPPED_RVQ: RvqVariant = RvqVariant {
    coefficient: PbfCoefficient::Binomial,
    argument: RvqArgument::NuScaled,
};
pub const SHIPPED_TAS: TasVariant = TasVariant {
    exponent: TasExponent::Beta,
    start: TasStart::Zero,
};

fn miso_params(config: &SystemConfig, scheme: Scheme) -> Result<(u32, f64, f64)> {
    scheme.check(config)?;
    let p = derive_params(config)?;
    Ok((config.n_t, p.rho * p.rho, p.gamma0))
}

fn evaluable(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() && (-1e-12..=1.0 + 1e-12).contains(&v) {
        Ok(v.clamp(0.0, 1.0))
    } else {
        Err(Error::NotEvaluable(format!("{what} evaluates to {v}")))
    }
}

/// `Σ_k C(N_t-1, k) μ'^k/(1+μ')^{N_t-1} c_k Γ_{k+1}(x)` with `μ'/(1+μ') = p`.
fn pbf_series(n_t: u32, p: f64, coefficient: PbfCoefficient, x: f64) -> Result<f64> {
    let q = 1.0 - p;
    let top = n_t - 1;
    let mut acc = 0.0;
    for k in 0..n_t {
        let w = binomial(top as u64, k as u64) * p.powi(k as i32) * q.powi((top - k) as i32);
        acc += w * coefficient.extra(k) * regularized_lower_gamma(k + 1, x)?;
    }
    Ok(acc)
}

/// Single-user matched-filter outage under a chosen coefficient reading.
pub fn pbf_variant(config: &SystemConfig, coefficient: PbfCoefficient) -> Result<f64> {
    let (n_t, rho2, gamma0) = miso_params(config, Scheme::MisoPbf)?;
    let v = pbf_series(n_t, rho2, coefficient, gamma0)?;
    evaluable(v, &format!("PBF series with coefficient {}", coefficient.label()))
}

/// Single-user RVQ outage under a chosen reading of the ν-averaged series.
pub fn rvq_variant(config: &SystemConfig, n: usize, variant: RvqVariant) -> Result<f64> {
    let scheme = Scheme::MisoRvq { codebook_size: n };
    let (n_t, rho2, gamma0) = miso_params(config, scheme)?;
    let s2 = 1.0 - rho2;
    let law = NuDistribution::for_codebook(n, n_t as usize)?;
    let v = law.expect(NU_TOL, |nu| {
        let denom = s2 + rho2 * nu;
        let p = rho2 * nu / denom;
        let x = match variant.argument {
            RvqArgument::Printed => gamma0,
            RvqArgument::NuScaled => gamma0 / denom,
        };
        pbf_series(n_t, p, variant.coefficient, x)
    });
    let v = match v {
        Ok(v) => v,
        Err(e) if e.is_numeric() => f64::NAN,
        Err(e) => return Err(e),
    };
    evaluable(v, &format!("RVQ series with {}", variant.label()))
}

/// Single-user antenna-selection outage under a chosen reading.
pub fn tas_variant(config: &SystemConfig, variant: TasVariant) -> Result<f64> {
    let (n_t, rho2, gamma0) = miso_params(config, Scheme::MisoTas)?;
    let s2 = 1.0 - rho2;
    let scale = match variant.exponent {
        TasExponent::TwoBeta => 2.0,
        TasExponent::Beta => 1.0,
    };
    let first = match variant.start {
        TasStart::Zero => 0,
        TasStart::One => 1,
    };
    let mut acc = 0.0;
    for k in first..n_t {
        let j = (k + 1) as f64;
        // (k+1)β/(k+1+μ) in terms of ρ² and σ²
        let x = scale * j * gamma0 / (j * s2 + rho2);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += binomial((n_t - 1) as u64, k as u64) * sign / j * -(-x).exp_m1();
    }
    evaluable(n_t as f64 * acc, &format!("TAS sum with {}", variant.label()))
}

pub fn outage_pbf_closed(config: &SystemConfig) -> Result<OutageEstimate> {
    let v = pbf_variant(config, SHIPPED_PBF)?;
    Ok(OutageEstimate::deterministic(
        v,
        Method::ClosedForm,
        vec![Correction::PbfCoefficient],
    ))
}

pub fn outage_rvq_closed(config: &SystemConfig, n: usize) -> Result<OutageEstimate> {
    let v = rvq_variant(config, n, SHIPPED_RVQ)?;
    Ok(OutageEstimate::deterministic(
        v,
        Method::ClosedForm,
        vec![
            Correction::PbfCoefficient,
            Correction::RvqArgument,
            Correction::RateBase,
        ],
    ))
}

pub fn outage_tas_closed(config: &SystemConfig) -> Result<OutageEstimate> {
    let v = tas_variant(config, SHIPPED_TAS)?;
    Ok(OutageEstimate::deterministic(
        v,
        Method::ClosedForm,
        vec![Correction::TasExponent],
    ))
}

/// Outage of the best of `z` stale links whose gains are `Gamma(d)`, each
/// combined over `d` branches, with the stale part of the link scaled by `ν`:
///
/// `z/(d-1)! Σ_k C(z-1,k)(-1)^k Σ_m m! a_m(d,k)/(1+k+μν)^m
///  Σ_n (μν)^n (d+n-1)!/(n!(1+k)^{d+n}) C(d+m-1,d+n-1) Γ_{d+n}((1+k)β/(1+k+μν))`.
pub fn mu_sum(z: u32, d: u32, rho: f64, gamma0: f64, nu: f64) -> Result<f64> {
    if z == 0 || d == 0 {
        return Err(Error::domain("user and antenna counts must be positive"));
    }
    let rho2 = rho * rho;
    let s2 = 1.0 - rho2;
    let mut total = 0.0;
    for k in 0..z {
        let a = expansion_coeffs(d, k)?;
        let j = (1 + k) as f64;
        let denom = j * s2 + rho2 * nu;
        // μν/(1+k+μν), 1/(1+k+μν) and (1+k)β/(1+k+μν)
        let ratio = rho2 * nu / denom;
        let inv = s2 / denom;
        let x = j * gamma0 / denom;
        let mut inner = 0.0;
        for (m, &am) in a.iter().enumerate() {
            if am == 0.0 {
                continue;
            }
            let m = m as u32;
            let mut over_n = 0.0;
            for n in 0..=m {
                let c = factorial((d + n - 1) as u64) / factorial(n as u64) / j.powi((d + n) as i32)
                    * binomial((d + m - 1) as u64, (d + n - 1) as u64);
                let w = ratio.powi(n as i32) * inv.powi((m - n) as i32);
                if w == 0.0 {
                    continue;
                }
                over_n += c * w * regularized_lower_gamma(d + n, x)?;
            }
            inner += factorial(m as u64) * am * over_n;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binomial((z - 1) as u64, k as u64) * inner;
    }
    Ok(z as f64 / factorial((d - 1) as u64) * total)
}

/// Multiuser antenna selection with receive combining.
pub fn outage_mutas_closed(config: &SystemConfig) -> Result<OutageEstimate> {
    Scheme::MuTas.check(config)?;
    let p = derive_params(config)?;
    let v = mu_sum(config.n_u * config.n_t, config.n_r, p.rho, p.gamma0, 1.0)?;
    Ok(OutageEstimate::deterministic(v, Method::ClosedForm, Vec::new()))
}

/// Multiuser matched filtering with max-norm user selection.
pub fn outage_mupbf_closed(config: &SystemConfig) -> Result<OutageEstimate> {
    Scheme::MuPbf.check(config)?;
    let p = derive_params(config)?;
    let v = mu_sum(config.n_u, config.n_t, p.rho, p.gamma0, 1.0)?;
    Ok(OutageEstimate::deterministic(v, Method::ClosedForm, Vec::new()))
}

/// Multiuser RVQ: the multiuser matched-filter sum with `μ → μν`, averaged over ν.
pub fn outage_murvq_closed(config: &SystemConfig, n: usize) -> Result<OutageEstimate> {
    Scheme::MuRvq { codebook_size: n }.check(config)?;
    let p = derive_params(config)?;
    let law = NuDistribution::for_codebook(n, config.n_t as usize)?;
    let v = law.expect(NU_TOL, |nu| mu_sum(config.n_u, config.n_t, p.rho, p.gamma0, nu))?;
    Ok(OutageEstimate::deterministic(v, Method::ClosedForm, Vec::new()))
}

/// Closed-form evaluator for any scheme.
pub fn outage_closed(scheme: Scheme, config: &SystemConfig) -> Result<OutageEstimate> {
    match scheme {
        Scheme::MisoPbf => outage_pbf_closed(config),
        Scheme::MisoRvq { codebook_size } => outage_rvq_closed(config, codebook_size),
        Scheme::MisoTas => outage_tas_closed(config),
        Scheme::MuTas => outage_mutas_closed(config),
        Scheme::MuPbf => outage_mupbf_closed(config),
        Scheme::MuRvq { codebook_size } => outage_murvq_closed(config, codebook_size),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{outage_semianalytic, QuadratureSpec};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    fn quad(scheme: Scheme, c: &SystemConfig) -> f64 {
        outage_semianalytic(scheme, c, &QuadratureSpec::default())
            .unwrap()
            .value
    }

    #[test]
    fn pbf_limits_and_quadrature() {
        let c = SystemConfig::miso(4, 2.0, 10.0, 1.0);
        let g0 = 3.0 / 2.5;
        close(
            outage_pbf_closed(&c).unwrap().value,
            regularized_lower_gamma(4, g0).unwrap(),
            1e-15,
        );
        for rho in [0.3, 0.8, 0.95] {
            let c = SystemConfig::miso(4, 2.0, 15.0, rho);
            close(outage_pbf_closed(&c).unwrap().value, quad(Scheme::MisoPbf, &c), 1e-8);
        }
        let c = SystemConfig::miso(1, 2.0, 10.0, 0.6);
        close(outage_pbf_closed(&c).unwrap().value, quad(Scheme::MisoPbf, &c), 1e-10);
    }

    #[test]
    fn verbatim_pbf_is_not_evaluable() {
        for n_t in [1, 2, 4] {
            let c = SystemConfig::miso(n_t, 2.0, 10.0, 0.8);
            assert!(matches!(
                pbf_variant(&c, PbfCoefficient::Verbatim),
                Err(Error::NotEvaluable(_))
            ));
        }
        let c = SystemConfig::miso(4, 2.0, 10.0, 0.8);
        assert!(pbf_variant(&c, PbfCoefficient::Factorial).is_ok());
    }

    #[test]
    fn rvq_limits() {
        // a single antenna captures all of the channel
        for rho in [0.5, 1.0] {
            let c = SystemConfig::miso(1, 2.0, 10.0, rho);
            close(
                outage_rvq_closed(&c, 8).unwrap().value,
                outage_pbf_closed(&c).unwrap().value,
                1e-14,
            );
        }
        let c = SystemConfig::miso(4, 2.0, 10.0, 1.0);
        let floor = outage_pbf_closed(&c).unwrap().value;
        let mut last = 1.0;
        for e in 0..=8 {
            let v = outage_rvq_closed(&c, 1 << e).unwrap().value;
            assert!(v > floor && v < last, "N = {}: {v}", 1 << e);
            last = v;
        }
    }

    #[test]
    fn rvq_matches_quadrature() {
        for (rho, snr) in [(0.9, 10.0), (0.8, 20.0), (1.0, 5.0)] {
            let c = SystemConfig::miso(4, 2.0, snr, rho);
            let s = Scheme::MisoRvq { codebook_size: 8 };
            close(outage_rvq_closed(&c, 8).unwrap().value, quad(s, &c), 1e-8);
        }
    }

    #[test]
    fn tas_limits_and_quadrature() {
        let c = SystemConfig::miso(4, 2.0, 10.0, 1.0);
        let g0: f64 = 1.2;
        close(outage_tas_closed(&c).unwrap().value, (1.0 - (-g0).exp()).powi(4), 1e-14);
        for rho in [0.2, 0.8, 0.9] {
            let c = SystemConfig::miso(1, 2.0, 10.0, rho);
            close(outage_tas_closed(&c).unwrap().value, 1.0 - (-0.3f64).exp(), 1e-14);
            let c = SystemConfig::miso(4, 2.0, 10.0, rho);
            close(outage_tas_closed(&c).unwrap().value, quad(Scheme::MisoTas, &c), 1e-8);
        }
    }

    #[test]
    fn mutas_reduces_to_tas_and_matches_quadrature() {
        for rho in [0.7, 0.9, 1.0] {
            let c = SystemConfig::miso(4, 2.0, 10.0, rho);
            let m = SystemConfig::multiuser(1, 4, 1, 2.0, 10.0, rho);
            close(
                outage_mutas_closed(&m).unwrap().value,
                outage_tas_closed(&c).unwrap().value,
                1e-12,
            );
        }
        for rho in [0.8, 0.9, 1.0] {
            let m = SystemConfig::multiuser(2, 4, 2, 2.0, 5.0, rho);
            close(outage_mutas_closed(&m).unwrap().value, quad(Scheme::MuTas, &m), 1e-8);
        }
    }

    #[test]
    fn mupbf_swap_identity_and_quadrature() {
        for rho in [0.8, 0.95, 1.0] {
            let a = SystemConfig::multiuser(2, 3, 1, 2.0, 10.0, rho);
            let b = SystemConfig {
                n_u: 2,
                n_t: 1,
                n_r: 3,
                snr_linear: a.snr_linear / 3.0,
                ..a
            };
            close(
                outage_mupbf_closed(&a).unwrap().value,
                outage_mutas_closed(&b).unwrap().value,
                1e-12,
            );
            let m = SystemConfig::multiuser(2, 4, 1, 2.0, 5.0, rho);
            close(outage_mupbf_closed(&m).unwrap().value, quad(Scheme::MuPbf, &m), 1e-8);
        }
    }

    #[test]
    fn murvq_limits_and_quadrature() {
        for rho in [0.8, 1.0] {
            let m = SystemConfig::multiuser(2, 1, 1, 2.0, 10.0, rho);
            close(
                outage_murvq_closed(&m, 8).unwrap().value,
                outage_mupbf_closed(&m).unwrap().value,
                1e-13,
            );
            let m = SystemConfig::multiuser(2, 4, 1, 2.0, 5.0, rho);
            let s = Scheme::MuRvq { codebook_size: 8 };
            close(outage_murvq_closed(&m, 8).unwrap().value, quad(s, &m), 1e-8);
        }
        let m = SystemConfig::multiuser(2, 4, 1, 2.0, 10.0, 0.9);
        let floor = outage_mupbf_closed(&m).unwrap().value;
        let mut last = 1.0;
        for e in 0..=8 {
            let v = outage_murvq_closed(&m, 1 << e).unwrap().value;
            assert!(v > floor && v < last);
            last = v;
        }
    }

    #[test]
    fn mu_sum_rejects_degree_overflow() {
        assert!(matches!(mu_sum(40, 3, 0.9, 1.0, 1.0), Err(Error::Capability(_))));
    }
}
