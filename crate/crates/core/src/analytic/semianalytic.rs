use crate::channel::{derive_params, Delay, SystemConfig};
use crate::error::Result;
use crate::specfun::{NcChi2Kernel, SeriesTolerance};

use super::gain::{GainDistribution, QuadratureSpec};
use super::{Method, OutageEstimate, Scheme};

/// Averages the conditional outage over the selected-gain law with fixed
/// composite rules, independently of the closed forms.
///
/// Delay-free links reduce to the gain CDF at `γ₀`, averaged over `ν` for RVQ.
pub fn outage_semianalytic(scheme: Scheme, config: &SystemConfig, quad: &QuadratureSpec) -> Result<OutageEstimate> {
    quad.validate()?;
    let law = GainDistribution::for_scheme(scheme, config)?;
    let params = derive_params(config)?;
    let gamma0 = params.gamma0;

    let value = match params.delay {
        Delay::None => match law.mixing {
            None => law.cdf(gamma0)?,
            Some(nu) => nu.expect_fixed(quad.nu_node_count, |v| law.cdf(gamma0 / v))?,
        },
        Delay::Stale { mu, beta } => {
            let rule = law.gain_rule(quad)?;
            let mut kernel = NcChi2Kernel::new(law.half_dof, beta, SeriesTolerance::default())?;
            let weights: Vec<(f64, f64)> = rule
                .pairs()
                .map(|(x, w)| Ok((x, w * law.density(x)?)))
                .collect::<Result<_>>()?;
            let mut average = |scale: f64| -> Result<f64> {
                let mut acc = 0.0;
                for &(x, w) in &weights {
                    acc += w * kernel.cdf(mu * scale * x)?;
                }
                Ok(acc)
            };
            match law.mixing {
                None => average(1.0)?,
                Some(nu) => nu.expect_fixed(quad.nu_node_count, &mut average)?,
            }
        }
    };
    Ok(OutageEstimate::deterministic(value, Method::Quadrature, Vec::new()))
}
