use crate::codebook::NuDistribution;
use crate::error::{Error, Result};
use crate::quadrature::{GradedRule, Grading, PANEL_NODES};
use crate::specfun::{ln_factorial, regularized_lower_gamma, regularized_upper_gamma};

use super::Scheme;
use crate::channel::SystemConfig;

/// Node counts and truncation for the quadrature engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub node_count: usize,
    /// Gain-axis truncation; `None` picks the point where the tail mass drops below `tail_mass`.
    pub upper_cut: Option<f64>,
    pub tail_mass: f64,
    pub nu_node_count: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            node_count: 256,
            upper_cut: None,
            tail_mass: 1e-12,
            nu_node_count: 128,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < PANEL_NODES || self.nu_node_count < PANEL_NODES {
            return Err(Error::domain(format!("node counts must be at least {PANEL_NODES}")));
        }
        if !(self.tail_mass > 0.0 && self.tail_mass < 1e-10) {
            return Err(Error::domain("tail mass must lie in (0, 1e-10)"));
        }
        if let Some(cut) = self.upper_cut {
            if !(cut > 0.0) || !cut.is_finite() {
                return Err(Error::domain(format!("upper cut must be positive, got {cut}")));
            }
        }
        Ok(())
    }
}

/// Law of the selected stale gain: the largest of `members` i.i.d.
/// `Gamma(shape, 1)` variables, optionally scaled by an independent
/// tradeoff factor `ν`. `half_dof` is the `d` of the conditional
/// non-central chi-square outage law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainDistribution {
    pub shape: u32,
    pub members: u32,
    pub half_dof: u32,
    pub mixing: Option<NuDistribution>,
}

impl GainDistribution {
    pub fn for_scheme(scheme: Scheme, config: &SystemConfig) -> Result<Self> {
        scheme.check(config)?;
        let (n_t, n_r, n_u) = (config.n_t, config.n_r, config.n_u);
        let nu = |n: usize| NuDistribution::for_codebook(n, n_t as usize).map(Some);
        Ok(match scheme {
            Scheme::MisoPbf => Self::plain(n_t, 1, 1),
            Scheme::MisoRvq { codebook_size } => Self {
                mixing: nu(codebook_size)?,
                ..Self::plain(n_t, 1, 1)
            },
            Scheme::MisoTas => Self::plain(1, n_t, 1),
            Scheme::MuTas => Self::plain(n_r, n_u * n_t, n_r),
            Scheme::MuPbf => Self::plain(n_t, n_u, n_t),
            Scheme::MuRvq { codebook_size } => Self {
                mixing: nu(codebook_size)?,
                ..Self::plain(n_t, n_u, n_t)
            },
        })
    }

    fn plain(shape: u32, members: u32, half_dof: u32) -> Self {
        Self {
            shape,
            members,
            half_dof,
            mixing: None,
        }
    }

    /// CDF of the unscaled gain.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        Ok(regularized_lower_gamma(self.shape, x)?.powi(self.members as i32))
    }

    /// Density of the unscaled gain.
    pub fn density(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Ok(0.0);
        }
        let s = self.shape as f64;
        let single = if x == 0.0 {
            if self.shape == 1 {
                1.0
            } else {
                0.0
            }
        } else {
            ((s - 1.0) * x.ln() - x - ln_factorial(self.shape as u64 - 1)).exp()
        };
        if self.members == 1 {
            return Ok(single);
        }
        let f = regularized_lower_gamma(self.shape, x)?;
        Ok(self.members as f64 * f.powi(self.members as i32 - 1) * single)
    }

    /// Upper tail `1 - F(x)`, accurate when tiny.
    pub fn tail(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(1.0);
        }
        let q = regularized_upper_gamma(self.shape, x)?;
        // 1 - (1 - q)^Z without cancellation
        Ok(-(self.members as f64 * (-q).ln_1p()).exp_m1())
    }

    /// Smallest power-of-two multiple of the mean beyond which the tail is below `mass`.
    pub fn upper_cut(&self, mass: f64) -> Result<f64> {
        let mut x = (self.shape as f64).max(1.0);
        for _ in 0..60 {
            if self.tail(x)? < mass {
                return Ok(x);
            }
            x *= 2.0;
        }
        Err(Error::Accuracy(format!(
            "no truncation point found for tail mass {mass:e}"
        )))
    }

    /// Composite rule for the unscaled-gain axis, checked against the tail budget.
    pub(crate) fn gain_rule(&self, quad: &QuadratureSpec) -> Result<GradedRule> {
        let cut = match quad.upper_cut {
            Some(c) => c,
            None => self.upper_cut(quad.tail_mass)?,
        };
        let rule = GradedRule::new(0.0, cut, quad.node_count, Grading::TowardStart)?;
        let mass = rule.try_integrate(|x| self.density(x))?;
        let expected = 1.0 - self.tail(cut)?;
        if (mass - expected).abs() > 1e-8 || self.tail(cut)? > 1e-10 {
            return Err(Error::Accuracy(format!(
                "gain density integrates to {mass} on [0, {cut}], expected {expected}"
            )));
        }
        Ok(rule)
    }
}
