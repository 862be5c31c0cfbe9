use crate::channel::SystemConfig;
use crate::error::{Error, Result};

use super::gain::QuadratureSpec;
use super::semianalytic::outage_semianalytic;
use super::Scheme;

/// Default two-point high-SNR grid in dB.
pub const DEFAULT_DIVERSITY_GRID_DB: [f64; 2] = [40.0, 50.0];

/// Least-squares slope of `-log P_out` against `log ε` over `snr_grid_db`,
/// using the quadrature engine.
pub fn diversity_order(scheme: Scheme, config: &SystemConfig, snr_grid_db: &[f64]) -> Result<f64> {
    if snr_grid_db.len() < 2 {
        return Err(Error::domain("diversity fit needs at least two SNR points"));
    }
    let quad = QuadratureSpec::default();
    let mut pts = Vec::with_capacity(snr_grid_db.len());
    for &db in snr_grid_db {
        let p = outage_semianalytic(scheme, &config.with_snr_db(db), &quad)?.value;
        if !(p > f64::MIN_POSITIVE) {
            return Err(Error::Range(format!("outage underflows at {db} dB")));
        }
        pts.push((db / 10.0 * std::f64::consts::LN_10, -p.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("SNR grid points must differ"));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rvq_diversity_examples() {
        let rvq = Scheme::MisoRvq { codebook_size: 8 };
        let d = diversity_order(rvq, &SystemConfig::miso(4, 2.0, 0.0, 1.0), &DEFAULT_DIVERSITY_GRID_DB).unwrap();
        assert!((3.6..=4.4).contains(&d), "{d}");
        let d = diversity_order(rvq, &SystemConfig::miso(4, 2.0, 0.0, 0.9), &DEFAULT_DIVERSITY_GRID_DB).unwrap();
        assert!((0.85..=1.15).contains(&d), "{d}");
    }

    #[test]
    fn mutas_diversity_example() {
        let c = SystemConfig::multiuser(2, 4, 2, 2.0, 0.0, 0.9);
        let d = diversity_order(Scheme::MuTas, &c, &DEFAULT_DIVERSITY_GRID_DB).unwrap();
        assert!((1.7..=2.3).contains(&d), "{d}");
    }

    #[test]
    fn rejects_short_grid() {
        let c = SystemConfig::miso(4, 2.0, 0.0, 0.9);
        assert!(diversity_order(Scheme::MisoPbf, &c, &[40.0]).is_err());
    }
}
