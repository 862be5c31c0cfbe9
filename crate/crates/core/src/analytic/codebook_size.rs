use serde::{Deserialize, Serialize};

use crate::channel::SystemConfig;
use crate::error::{Error, Result};

use super::closed::{outage_pbf_closed, outage_rvq_closed};

/// Outcome of [`min_codebook_size`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CodebookSizeResult {
    Attained(usize),
    /// Even perfect beamforming, the infinite-codebook limit, misses the target.
    Unattainable {
        pbf_floor: f64,
    },
    /// Reachable in principle but not within `n_max` vectors.
    BeyondLimit {
        n_max: usize,
    },
}

/// Smallest RVQ codebook size `N ≤ n_max` whose closed-form outage meets
/// `target`, by doubling then bisection.
pub fn min_codebook_size(target: f64, config: &SystemConfig, n_max: usize) -> Result<CodebookSizeResult> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::domain(format!("target must lie in (0, 1), got {target}")));
    }
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    let meets = |n: usize| -> Result<bool> { Ok(outage_rvq_closed(config, n)?.value <= target) };

    let floor = outage_pbf_closed(config)?.value;
    if floor > target {
        return Ok(CodebookSizeResult::Unattainable { pbf_floor: floor });
    }
    if meets(1)? {
        return Ok(CodebookSizeResult::Attained(1));
    }
    // invariant: lo fails, hi meets
    let mut lo = 1;
    let mut hi = loop {
        let next = (lo * 2).min(n_max);
        if meets(next)? {
            break next;
        }
        if next == n_max {
            return Ok(CodebookSizeResult::BeyondLimit { n_max });
        }
        lo = next;
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CodebookSizeResult::Attained(hi))
}
