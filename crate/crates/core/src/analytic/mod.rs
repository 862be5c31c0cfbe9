//! Outage evaluators: closed forms, an independent quadrature engine,
//! diversity-order fits and the minimum RVQ codebook-size search.

mod closed;
mod codebook_size;
mod diversity;
mod gain;
mod semianalytic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{DerivedParams, SystemConfig};
use crate::error::{Error, Result};
use crate::specfun::{NcChi2Kernel, SeriesTolerance};

pub use closed::{
    mu_sum, outage_closed, outage_mupbf_closed, outage_murvq_closed, outage_mutas_closed, outage_pbf_closed,
    outage_rvq_closed, outage_tas_closed, pbf_variant, rvq_variant, tas_variant, PbfCoefficient, RvqArgument,
    RvqVariant, TasExponent, TasStart, TasVariant, SHIPPED_PBF, SHIPPED_RVQ, SHIPPED_TAS,
};
pub use codebook_size::{min_codebook_size, CodebookSizeResult};
pub use diversity::{diversity_order, DEFAULT_DIVERSITY_GRID_DB};
pub use gain::{GainDistribution, QuadratureSpec};
pub use semianalytic::outage_semianalytic;

/// Transmission scheme under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    MisoPbf,
    MisoRvq { codebook_size: usize },
    MisoTas,
    MuTas,
    MuPbf,
    MuRvq { codebook_size: usize },
}

impl Scheme {
    /// Command-line name, e.g. `miso-rvq`.
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::MisoPbf => "miso-pbf",
            Scheme::MisoRvq { .. } => "miso-rvq",
            Scheme::MisoTas => "miso-tas",
            Scheme::MuTas => "mu-tas",
            Scheme::MuPbf => "mu-pbf",
            Scheme::MuRvq { .. } => "mu-rvq",
        }
    }

    pub fn codebook_size(&self) -> Option<usize> {
        match *self {
            Scheme::MisoRvq { codebook_size } | Scheme::MuRvq { codebook_size } => Some(codebook_size),
            _ => None,
        }
    }

    /// Same scheme with a different RVQ codebook size; other schemes are returned unchanged.
    pub fn with_codebook_size(self, n: usize) -> Self {
        match self {
            Scheme::MisoRvq { .. } => Scheme::MisoRvq { codebook_size: n },
            Scheme::MuRvq { .. } => Scheme::MuRvq { codebook_size: n },
            other => other,
        }
    }

    pub fn is_multiuser(&self) -> bool {
        matches!(self, Scheme::MuTas | Scheme::MuPbf | Scheme::MuRvq { .. })
    }

    /// Parses a command-line name; RVQ schemes take `codebook_size`.
    pub fn parse(name: &str, codebook_size: Option<usize>) -> Result<Self> {
        let need = |n: Option<usize>| n.ok_or_else(|| Error::domain(format!("{name} needs a codebook size")));
        Ok(match name {
            "miso-pbf" => Scheme::MisoPbf,
            "miso-rvq" => Scheme::MisoRvq {
                codebook_size: need(codebook_size)?,
            },
            "miso-tas" => Scheme::MisoTas,
            "mu-tas" => Scheme::MuTas,
            "mu-pbf" => Scheme::MuPbf,
            "mu-rvq" => Scheme::MuRvq {
                codebook_size: need(codebook_size)?,
            },
            other => return Err(Error::domain(format!("unknown scheme {other:?}"))),
        })
    }

    /// Checks that `config` has the shape this scheme expects.
    pub fn check(&self, config: &SystemConfig) -> Result<()> {
        config.validate()?;
        if let Some(0) = self.codebook_size() {
            return Err(Error::domain("codebook size must be at least 1"));
        }
        match self {
            Scheme::MisoPbf | Scheme::MisoRvq { .. } | Scheme::MisoTas => {
                if config.n_r != 1 || config.n_u != 1 {
                    return Err(Error::domain(format!(
                        "{} needs n_r = 1 and n_u = 1, got n_r = {} and n_u = {}",
                        self.name(),
                        config.n_r,
                        config.n_u
                    )));
                }
            }
            Scheme::MuPbf | Scheme::MuRvq { .. } => {
                if config.n_r != 1 {
                    return Err(Error::domain(format!(
                        "{} needs n_r = 1, got {}",
                        self.name(),
                        config.n_r
                    )));
                }
            }
            Scheme::MuTas => {}
        }
        Ok(())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.codebook_size() {
            Some(n) => write!(f, "{}(N={n})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// How an [`OutageEstimate`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "mc",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Method::ClosedForm),
            "quadrature" => Ok(Method::Quadrature),
            "mc" => Ok(Method::MonteCarlo),
            other => Err(Error::domain(format!("unknown evaluator {other:?}"))),
        }
    }
}

/// A departure from the literal published expression that an evaluator applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    /// Series coefficient `μ^k/(k-1)` replaced by `μ^k`.
    PbfCoefficient,
    /// Gamma argument `γ₀` replaced by `γ₀/(1 - ρ² + ρ²ν)` inside the ν-average.
    RvqArgument,
    /// Threshold `2γ₀/(1-ρ²)` replaced by `γ₀/(1-ρ²)`.
    TasExponent,
    /// `e^R - 1` replaced by `2^R - 1`.
    RateBase,
}

impl Correction {
    pub fn tag(&self) -> &'static str {
        match self {
            Correction::PbfCoefficient => "pbf-coefficient",
            Correction::RvqArgument => "rvq-argument",
            Correction::TasExponent => "tas-exponent",
            Correction::RateBase => "rate-base",
        }
    }
}

/// An outage probability with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub value: f64,
    pub method: Method,
    /// Half-width of the 3-sigma interval; zero for deterministic methods.
    pub ci_halfwidth: f64,
    pub flags: Vec<Correction>,
}

impl OutageEstimate {
    pub(crate) fn deterministic(value: f64, method: Method, flags: Vec<Correction>) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            method,
            ci_halfwidth: 0.0,
            flags,
        }
    }

    /// Flags joined with `;` for tabular output.
    pub fn flag_list(&self) -> String {
        self.flags.iter().map(Correction::tag).collect::<Vec<_>>().join(";")
    }
}

/// `Pr[outage | selected gain]` for a stale link: the CDF of a non-central
/// chi-square law with `2d` degrees of freedom and noncentrality `2μ·gain`,
/// evaluated at `2β`.
pub fn conditional_outage(gain: f64, params: &DerivedParams, d: u32) -> Result<f64> {
    let (mu, beta) = match (params.mu(), params.beta()) {
        (Some(mu), Some(beta)) => (mu, beta),
        _ => return Err(Error::domain("conditional outage needs a stale link (rho < 1)")),
    };
    if !(gain >= 0.0) || !gain.is_finite() {
        return Err(Error::domain(format!("gain must be finite and >= 0, got {gain}")));
    }
    NcChi2Kernel::new(d, beta, SeriesTolerance::default())?.cdf(mu * gain)
}
