//! Acceptance suite: cross-evaluator agreement, arbitration between candidate
//! readings of the published sums, diversity orders, reduction identities,
//! figure-shape properties, special-function checks and determinism.

use std::fmt;

use crate::analytic::{
    diversity_order, min_codebook_size, outage_closed, outage_mupbf_closed, outage_murvq_closed, outage_mutas_closed,
    outage_pbf_closed, outage_rvq_closed, outage_semianalytic, outage_tas_closed, pbf_variant, rvq_variant,
    tas_variant, CodebookSizeResult, PbfCoefficient, QuadratureSpec, RvqArgument, RvqVariant, Scheme, TasExponent,
    TasStart, TasVariant, DEFAULT_DIVERSITY_GRID_DB, SHIPPED_PBF, SHIPPED_RVQ, SHIPPED_TAS,
};
use crate::channel::{RngStream, SystemConfig};
use crate::error::{Error, Result};
use crate::montecarlo::{simulate_from_stream, McResult, TrialPlan, DEFAULT_CHUNK};
use crate::specfun::{expansion_coeffs, lemma1_identity, noncentral_chi2_cdf, SeriesTolerance};
use crate::table::{to_csv_string, ResultRow};

pub const GRID_SNR_DB: [f64; 4] = [5.0, 10.0, 15.0, 20.0];
pub const GRID_RHO: [f64; 3] = [0.8, 0.9, 1.0];
pub const GRID_RATE: f64 = 2.0;
const CLOSED_VS_QUAD: f64 = 1e-6;
const REDUCTION_TOL: f64 = 1e-9;

/// Monte Carlo settings for the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub chunk: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 1,
            workers: 1,
            chunk: DEFAULT_CHUNK,
        }
    }
}

impl VerifyOptions {
    fn plan(&self) -> TrialPlan {
        TrialPlan {
            trials: self.trials,
            seed: self.seed,
            workers: self.workers,
            chunk: self.chunk,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported for context; does not affect the verdict.
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub label: String,
    pub status: Status,
    pub detail: String,
}

impl CheckLine {
    fn check(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    fn info(label: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            status: Status::Info,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub number: u32,
    pub title: String,
    pub lines: Vec<CheckLine>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.status != Status::Fail)
    }

    pub fn line(&self, label: &str) -> Option<&CheckLine> {
        self.lines.iter().find(|l| l.label == label)
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "criterion {} [{verdict}] {}", self.number, self.title)?;
        for l in &self.lines {
            let tag = match l.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Info => "info",
            };
            writeln!(f, "    [{tag}] {}: {}", l.label, l.detail)?;
        }
        Ok(())
    }
}

/// The six scheme/configuration pairs of the agreement grid, with ρ and SNR left open.
pub fn grid_schemes() -> Vec<(Scheme, SystemConfig)> {
    let miso = SystemConfig::miso(4, GRID_RATE, 0.0, 1.0);
    vec![
        (Scheme::MisoPbf, miso),
        (Scheme::MisoRvq { codebook_size: 8 }, miso),
        (Scheme::MisoTas, miso),
        (Scheme::MuTas, SystemConfig::multiuser(2, 4, 2, GRID_RATE, 0.0, 1.0)),
        (Scheme::MuPbf, SystemConfig::multiuser(2, 4, 1, GRID_RATE, 0.0, 1.0)),
        (
            Scheme::MuRvq { codebook_size: 8 },
            SystemConfig::multiuser(2, 4, 1, GRID_RATE, 0.0, 1.0),
        ),
    ]
}

/// One scheme at one (SNR, ρ) point, evaluated three ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub scheme: Scheme,
    pub config: SystemConfig,
    pub snr_db: f64,
    pub rho: f64,
    pub closed: f64,
    pub quadrature: f64,
    pub mc: McResult,
}

/// Evaluates every scheme of [`grid_schemes`] over [`GRID_SNR_DB`] × [`GRID_RHO`].
pub fn agreement_grid(opts: &VerifyOptions) -> Result<Vec<GridPoint>> {
    let quad = QuadratureSpec::default();
    let mut out = Vec::new();
    let mut stream = 0u64;
    for (scheme, template) in grid_schemes() {
        for &rho in &GRID_RHO {
            for &snr_db in &GRID_SNR_DB {
                let config = template.with_rho(rho).with_snr_db(snr_db);
                let closed = outage_closed(scheme, &config)?.value;
                let quadrature = outage_semianalytic(scheme, &config, &quad)?.value;
                let mc = simulate_from_stream(scheme, &config, None, &opts.plan(), stream << 32)?;
                stream += 1;
                out.push(GridPoint {
                    scheme,
                    config,
                    snr_db,
                    rho,
                    closed,
                    quadrature,
                    mc,
                });
            }
        }
    }
    Ok(out)
}

fn schemes_in(grid: &[GridPoint]) -> Vec<Scheme> {
    let mut seen = Vec::new();
    for p in grid {
        if !seen.contains(&p.scheme) {
            seen.push(p.scheme);
        }
    }
    seen
}

/// Criterion 1: closed form, quadrature and simulation agree at every grid point.
pub fn criterion_agreement(grid: &[GridPoint]) -> CriterionReport {
    let mut lines = Vec::new();
    for scheme in schemes_in(grid) {
        let pts: Vec<&GridPoint> = grid.iter().filter(|p| p.scheme == scheme).collect();
        let worst_cq = pts.iter().map(|p| (p.closed - p.quadrature).abs()).fold(0.0, f64::max);
        let cq_ok = pts
            .iter()
            .filter(|p| (p.closed - p.quadrature).abs() <= CLOSED_VS_QUAD)
            .count();
        let z_closed = pts.iter().map(|p| p.mc.z_score(p.closed)).fold(0.0, f64::max);
        let z_quad = pts.iter().map(|p| p.mc.z_score(p.quadrature)).fold(0.0, f64::max);
        let mc_ok = pts
            .iter()
            .filter(|p| p.mc.consistent_with(p.closed) && p.mc.consistent_with(p.quadrature))
            .count();
        let n = pts.len();
        lines.push(CheckLine::check(
            format!("{scheme} closed vs quadrature"),
            cq_ok == n,
            format!("{cq_ok}/{n} points within {CLOSED_VS_QUAD:e}, worst {worst_cq:.2e}"),
        ));
        lines.push(CheckLine::check(
            format!("{scheme} vs Monte Carlo"),
            mc_ok == n,
            format!("{mc_ok}/{n} points within 3 sigma, worst z {z_closed:.2} (closed) {z_quad:.2} (quadrature)"),
        ));
        for p in pts
            .iter()
            .filter(|p| !(p.mc.consistent_with(p.closed) && p.mc.consistent_with(p.quadrature)))
        {
            lines.push(CheckLine::info(
                format!("{scheme} outlier"),
                format!(
                    "snr {} dB rho {}: closed {:.6e} quadrature {:.6e} mc {:.6e} (n = {})",
                    p.snr_db, p.rho, p.closed, p.quadrature, p.mc.p_hat, p.mc.trials
                ),
            ));
        }
    }
    CriterionReport {
        number: 1,
        title: "three-way agreement grid".into(),
        lines,
    }
}

/// Consistency tally of one candidate reading against the simulated grid.
struct Tally {
    consistent: usize,
    not_evaluable: usize,
    total: usize,
    worst_z: f64,
}

impl Tally {
    fn all_consistent(&self) -> bool {
        self.consistent == self.total
    }

    fn describe(&self) -> String {
        let mut s = format!("consistent at {}/{} points", self.consistent, self.total);
        if self.not_evaluable > 0 {
            s += &format!(", not evaluable at {}", self.not_evaluable);
        }
        if self.worst_z.is_finite() {
            s += &format!(", worst z {:.2}", self.worst_z);
        }
        s
    }
}

fn tally<F: Fn(&SystemConfig) -> Result<f64>>(pts: &[&GridPoint], eval: F) -> Result<Tally> {
    let mut t = Tally {
        consistent: 0,
        not_evaluable: 0,
        total: pts.len(),
        worst_z: 0.0,
    };
    for p in pts {
        match eval(&p.config) {
            Ok(v) => {
                if p.mc.consistent_with(v) {
                    t.consistent += 1;
                }
                t.worst_z = t.worst_z.max(p.mc.z_score(v));
            }
            Err(Error::NotEvaluable(_)) => t.not_evaluable += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(t)
}

fn arbitrate<V: Copy + PartialEq>(
    lines: &mut Vec<CheckLine>,
    family: &str,
    pts: &[&GridPoint],
    variants: &[(V, String)],
    printed: V,
    shipped: V,
    eval: impl Fn(&SystemConfig, V) -> Result<f64>,
) -> Result<()> {
    let mut winners = Vec::new();
    for (v, label) in variants {
        let t = tally(pts, |c| eval(c, *v))?;
        if t.all_consistent() {
            winners.push(*v);
        }
        let line = if *v == printed {
            CheckLine::check(
                format!("{family} printed ({label})"),
                !t.all_consistent(),
                format!("{}; must be inconsistent somewhere", t.describe()),
            )
        } else if *v == shipped {
            CheckLine::check(
                format!("{family} shipped ({label})"),
                t.all_consistent(),
                format!("{}; must be consistent everywhere", t.describe()),
            )
        } else {
            CheckLine::info(format!("{family} alternative ({label})"), t.describe())
        };
        lines.push(line);
    }
    lines.push(CheckLine::check(
        format!("{family} arbitration"),
        winners == vec![shipped],
        format!(
            "{} reading(s) consistent at every point; shipped reading among them: {}",
            winners.len(),
            winners.contains(&shipped)
        ),
    ));
    Ok(())
}

/// Criterion 2: the literal published sums against simulation, next to the
/// corrected readings that are shipped.
pub fn criterion_arbitration(grid: &[GridPoint]) -> Result<CriterionReport> {
    let pick = |s: Scheme| grid.iter().filter(move |p| p.scheme == s).collect::<Vec<_>>();
    let mut lines = Vec::new();

    let pbf: Vec<_> = PbfCoefficient::ALL
        .iter()
        .map(|c| (*c, format!("coefficient {}", c.label())))
        .collect();
    arbitrate(
        &mut lines,
        "PBF",
        &pick(Scheme::MisoPbf),
        &pbf,
        PbfCoefficient::Verbatim,
        SHIPPED_PBF,
        pbf_variant,
    )?;

    let rvq: Vec<_> = RvqVariant::all().into_iter().map(|v| (v, v.label())).collect();
    arbitrate(
        &mut lines,
        "RVQ(N=8)",
        &pick(Scheme::MisoRvq { codebook_size: 8 }),
        &rvq,
        RvqVariant {
            coefficient: PbfCoefficient::Verbatim,
            argument: RvqArgument::Printed,
        },
        SHIPPED_RVQ,
        |c, v| rvq_variant(c, 8, v),
    )?;

    let tas: Vec<_> = TasVariant::all().into_iter().map(|v| (v, v.label())).collect();
    arbitrate(
        &mut lines,
        "TAS",
        &pick(Scheme::MisoTas),
        &tas,
        TasVariant {
            exponent: TasExponent::TwoBeta,
            start: TasStart::Zero,
        },
        SHIPPED_TAS,
        tas_variant,
    )?;

    Ok(CriterionReport {
        number: 2,
        title: "arbitration of the published sums against Monte Carlo".into(),
        lines,
    })
}

/// Criterion 3: two-point high-SNR diversity slopes.
pub fn criterion_diversity() -> Result<CriterionReport> {
    let miso = SystemConfig::miso(4, GRID_RATE, 0.0, 1.0);
    let mu = SystemConfig::multiuser(2, 4, 1, GRID_RATE, 0.0, 1.0);
    let mutas = SystemConfig::multiuser(2, 4, 2, GRID_RATE, 0.0, 0.9);
    let rvq = Scheme::MisoRvq { codebook_size: 8 };
    let murvq = Scheme::MuRvq { codebook_size: 8 };
    let cases: Vec<(Scheme, SystemConfig, f64, f64)> = vec![
        (Scheme::MisoPbf, miso.with_rho(0.9), 1.0, 0.15),
        (rvq, miso.with_rho(0.9), 1.0, 0.15),
        (Scheme::MisoTas, miso.with_rho(0.9), 1.0, 0.15),
        (Scheme::MisoPbf, miso, 4.0, 0.10),
        (rvq, miso, 4.0, 0.10),
        (Scheme::MisoTas, miso, 4.0, 0.10),
        (Scheme::MuTas, mutas, 2.0, 0.15),
        (Scheme::MuPbf, mu.with_rho(0.9), 4.0, 0.15),
        (murvq, mu.with_rho(0.9), 4.0, 0.15),
    ];
    let mut lines = Vec::new();
    for (scheme, config, target, tol) in cases {
        let rho = config.persistence.resolve()?;
        let d = diversity_order(scheme, &config, &DEFAULT_DIVERSITY_GRID_DB)?;
        lines.push(CheckLine::check(
            format!("{scheme} rho {rho}"),
            (d - target).abs() <= tol * target,
            format!("slope {d:.4}, expected {target} within {:.0}%", tol * 100.0),
        ));
    }
    Ok(CriterionReport {
        number: 3,
        title: "diversity orders from 40-50 dB slopes".into(),
        lines,
    })
}

fn identity_line(label: &str, pairs: impl Iterator<Item = Result<(f64, f64, f64)>>) -> Result<CheckLine> {
    let mut worst = 0.0f64;
    let mut ok = 0;
    let mut n = 0;
    let mut failing_rho = Vec::new();
    for r in pairs {
        let (rho, a, b) = r?;
        let dev = (a - b).abs();
        worst = worst.max(dev);
        n += 1;
        if dev <= REDUCTION_TOL {
            ok += 1;
        } else if !failing_rho.contains(&rho) {
            failing_rho.push(rho);
        }
    }
    let mut detail = format!("{ok}/{n} points within {REDUCTION_TOL:e}, worst deviation {worst:.3e}");
    if !failing_rho.is_empty() {
        detail += &format!(", fails at rho in {failing_rho:?}");
    }
    Ok(CheckLine::check(label, ok == n, detail))
}

fn reduction_grid() -> impl Iterator<Item = (f64, f64)> + Clone {
    GRID_RHO
        .into_iter()
        .flat_map(|rho| GRID_SNR_DB.into_iter().map(move |snr| (rho, snr)))
}

/// Criterion 4: single-user reductions of the multiuser sums and the
/// transmit/receive duality.
pub fn criterion_reductions() -> Result<CriterionReport> {
    let miso = |rho, snr| SystemConfig::miso(4, GRID_RATE, snr, rho);
    let mu = |n_u, n_r, rho, snr| SystemConfig::multiuser(n_u, 4, n_r, GRID_RATE, snr, rho);
    let lines = vec![
        identity_line(
            "MU-TAS(N_u=1, N_r=1) = MISO-TAS",
            reduction_grid().map(|(rho, snr)| {
                Ok((
                    rho,
                    outage_mutas_closed(&mu(1, 1, rho, snr))?.value,
                    outage_tas_closed(&miso(rho, snr))?.value,
                ))
            }),
        )?,
        identity_line(
            "MU-PBF(N_u=1) = MISO-PBF",
            reduction_grid().map(|(rho, snr)| {
                Ok((
                    rho,
                    outage_mupbf_closed(&mu(1, 1, rho, snr))?.value,
                    outage_pbf_closed(&miso(rho, snr))?.value,
                ))
            }),
        )?,
        identity_line(
            "MU-RVQ(N_u=1, N=8) = MISO-RVQ(N=8)",
            reduction_grid().map(|(rho, snr)| {
                Ok((
                    rho,
                    outage_murvq_closed(&mu(1, 1, rho, snr), 8)?.value,
                    outage_rvq_closed(&miso(rho, snr), 8)?.value,
                ))
            }),
        )?,
        identity_line(
            "MU-PBF(N_u=2, N_t=4) = MU-TAS(N_u=2, N_t=1, N_r=4)",
            reduction_grid().map(|(rho, snr)| {
                let a = mu(2, 1, rho, snr);
                // one transmit antenna: the SNR per antenna must match
                let b = SystemConfig {
                    n_t: 1,
                    n_r: 4,
                    snr_linear: a.snr_linear / 4.0,
                    ..a
                };
                Ok((rho, outage_mupbf_closed(&a)?.value, outage_mutas_closed(&b)?.value))
            }),
        )?,
    ];
    Ok(CriterionReport {
        number: 4,
        title: "reduction identities on a 12-point grid".into(),
        lines,
    })
}

/// Figure-2 operating point used by the codebook-size shape check.
pub const CODEBOOK_SIZE_SNR_DB: f64 = 15.0;
pub const CODEBOOK_SIZE_N_MAX: usize = 1 << 16;
pub const CODEBOOK_SIZE_RHO: [f64; 11] = [1.0, 0.98, 0.96, 0.94, 0.92, 0.9, 0.88, 0.86, 0.84, 0.82, 0.8];

fn size_rank(r: &CodebookSizeResult) -> f64 {
    match r {
        CodebookSizeResult::Attained(n) => *n as f64,
        _ => f64::INFINITY,
    }
}

fn size_label(r: &CodebookSizeResult) -> String {
    match r {
        CodebookSizeResult::Attained(n) => n.to_string(),
        CodebookSizeResult::Unattainable { .. } => "unattainable".into(),
        CodebookSizeResult::BeyondLimit { n_max } => format!(">{n_max}"),
    }
}

/// Criterion 5: qualitative figure shapes.
pub fn criterion_shapes() -> Result<CriterionReport> {
    let mut lines = Vec::new();

    // (a) RVQ approaches PBF from above as N doubles
    let mut ok = true;
    let mut detail = String::new();
    for snr in [0.0, 5.0, 10.0, 15.0, 20.0] {
        let c = SystemConfig::miso(4, GRID_RATE, snr, 0.9);
        let pbf = outage_pbf_closed(&c)?.value;
        let gaps: Vec<f64> = (0..=8)
            .map(|e| Ok(outage_rvq_closed(&c, 1 << e)?.value - pbf))
            .collect::<Result<_>>()?;
        ok &= gaps.iter().all(|&g| g > 0.0) && gaps.windows(2).all(|w| w[1] < w[0]);
        if snr == 10.0 {
            detail = format!(
                "10 dB gaps to PBF for N = 1..256: {:.4e} down to {:.4e}",
                gaps[0], gaps[8]
            );
        }
    }
    lines.push(CheckLine::check("(a) RVQ decreases toward PBF, rho 0.9", ok, detail));

    // (b) PBF is the best single-user scheme
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for i in 0..=10 {
        let c = SystemConfig::miso(4, GRID_RATE, 2.0 * i as f64, 0.8);
        let pbf = outage_pbf_closed(&c)?.value;
        let rvq = outage_rvq_closed(&c, 8)?.value;
        let tas = outage_tas_closed(&c)?.value;
        ok &= pbf <= rvq && pbf <= tas;
        worst = worst.min((rvq - pbf).min(tas - pbf));
    }
    lines.push(CheckLine::check(
        "(b) PBF <= RVQ(8) and PBF <= TAS, rho 0.8, 0-20 dB",
        ok,
        format!("smallest margin {worst:.4e}"),
    ));

    // (c) more users never hurt antenna selection
    let mut ok = true;
    let mut detail = Vec::new();
    for rho in GRID_RHO {
        let vals: Vec<f64> = [1, 2, 4]
            .iter()
            .map(|&n_u| Ok(outage_mutas_closed(&SystemConfig::multiuser(n_u, 4, 2, GRID_RATE, 10.0, rho))?.value))
            .collect::<Result<_>>()?;
        ok &= vals.windows(2).all(|w| w[1] <= w[0]);
        detail.push(format!("rho {rho}: {:.3e} {:.3e} {:.3e}", vals[0], vals[1], vals[2]));
    }
    lines.push(CheckLine::check(
        "(c) MU-TAS nonincreasing in N_u, 10 dB",
        ok,
        detail.join("; "),
    ));

    // (d) required codebook size grows as persistence drops
    for target in [0.01, 0.1] {
        let sizes: Vec<CodebookSizeResult> = CODEBOOK_SIZE_RHO
            .iter()
            .map(|&rho| {
                min_codebook_size(
                    target,
                    &SystemConfig::miso(4, GRID_RATE, CODEBOOK_SIZE_SNR_DB, rho),
                    CODEBOOK_SIZE_N_MAX,
                )
            })
            .collect::<Result<_>>()?;
        let ok = sizes.windows(2).all(|w| size_rank(&w[1]) >= size_rank(&w[0]));
        let shown: Vec<String> = sizes.iter().map(size_label).collect();
        lines.push(CheckLine::check(
            format!("(d) min codebook size nondecreasing as rho drops, target {target}"),
            ok,
            format!("rho 1.0..0.8: {}", shown.join(" ")),
        ));
    }

    Ok(CriterionReport {
        number: 5,
        title: "figure-shape properties".into(),
        lines,
    })
}

/// Coefficients of `(Σ_{l<n_r} x^l/l!)^k` by enumerating every choice of one
/// term per factor.
fn brute_force_power(n_r: u32, k: u32) -> Vec<f64> {
    // every term times ((n_r-1)!)^k is an integer, so the sums are exact
    let top = (1..n_r as u128).product::<u128>();
    let mut out = vec![0u128; (k * (n_r - 1)) as usize + 1];
    let total = (n_r as u64).pow(k);
    for code in 0..total {
        let (mut c, mut deg, mut coef) = (code, 0usize, 1u128);
        for _ in 0..k {
            let l = c % n_r as u64;
            c /= n_r as u64;
            deg += l as usize;
            coef *= top / (1..=l as u128).product::<u128>();
        }
        out[deg] += coef;
    }
    let scale = (top as f64).powi(k as i32);
    out.into_iter().map(|v| v as f64 / scale).collect()
}

pub const NCCHI2_TRIPLES: [(u32, f64, f64); 9] = [
    (1, 0.5, 1.0),
    (1, 2.0, 3.0),
    (1, 20.0, 18.0),
    (2, 1.0, 2.0),
    (2, 5.0, 4.0),
    (3, 0.0, 2.0),
    (4, 3.0, 6.0),
    (4, 10.0, 12.0),
    (8, 4.0, 10.0),
];

/// Criterion 6: combinatorial identities and the non-central chi-square CDF.
pub fn criterion_special_functions(opts: &VerifyOptions) -> Result<CriterionReport> {
    let mut lines = Vec::new();

    let mut checked = 0;
    let mut bad = Vec::new();
    for m in 1..=12u64 {
        for n in 1..=m {
            for k in 1..=12u64 {
                let (lhs, rhs) = lemma1_identity(m, n, k)?;
                checked += 1;
                if lhs != rhs {
                    bad.push((m, n, k));
                }
            }
        }
    }
    lines.push(CheckLine::check(
        "Vandermonde-type binomial identity, 1 <= n <= m <= 12, 1 <= k <= 12",
        bad.is_empty(),
        format!("{checked} cases, {} mismatches", bad.len()),
    ));

    let mut worst = 0.0f64;
    for n_r in 1..=5 {
        for k in 0..=8 {
            let want = brute_force_power(n_r, k);
            let got = expansion_coeffs(n_r, k)?;
            if got.len() != want.len() {
                worst = f64::INFINITY;
                continue;
            }
            for (a, b) in got.iter().zip(&want) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    lines.push(CheckLine::check(
        "expansion coefficients vs brute-force powers, n_r <= 5, k <= 8",
        worst <= 1e-12,
        format!("worst deviation {worst:.2e}"),
    ));

    let samples = opts.trials;
    for (i, &(d, delta, beta)) in NCCHI2_TRIPLES.iter().enumerate() {
        let want = noncentral_chi2_cdf(d, delta, beta, SeriesTolerance::default())?;
        let mut rng = RngStream::new(opts.seed, 0xC41 << 32 | i as u64);
        let shift = delta.sqrt();
        let mut hits = 0u64;
        for _ in 0..samples {
            let mut s = (shift + rng.complex_normal()).norm_sqr();
            for _ in 1..d {
                s += rng.complex_normal().norm_sqr();
            }
            if s < beta {
                hits += 1;
            }
        }
        let mc = McResult::from_counts(hits, samples);
        lines.push(CheckLine::check(
            format!("noncentral chi-square d={d} delta={delta} beta={beta}"),
            mc.consistent_with(want),
            format!("series {want:.6} empirical {:.6} (z {:.2})", mc.p_hat, mc.z_score(want)),
        ));
    }

    Ok(CriterionReport {
        number: 6,
        title: "combinatorial and special-function suites".into(),
        lines,
    })
}

/// Criterion 7: worker-count independence and byte-stable tables.
pub fn criterion_determinism(opts: &VerifyOptions) -> Result<CriterionReport> {
    let trials = opts.trials.min(200_000);
    let mut lines = Vec::new();
    for (scheme, template) in grid_schemes() {
        let config = template.with_rho(0.9).with_snr_db(10.0);
        let counts: Vec<u64> = [1usize, 4, 16]
            .iter()
            .map(|&w| {
                let plan = TrialPlan {
                    trials,
                    seed: opts.seed,
                    workers: w,
                    chunk: 8192,
                };
                Ok(simulate_from_stream(scheme, &config, None, &plan, 0)?.outage_count)
            })
            .collect::<Result<_>>()?;
        lines.push(CheckLine::check(
            format!("{scheme} workers 1/4/16"),
            counts.windows(2).all(|w| w[0] == w[1]),
            format!("outage counts {counts:?} over {trials} trials"),
        ));
    }

    let render = || -> Result<String> {
        let mut rows = Vec::new();
        let scheme = Scheme::MisoRvq { codebook_size: 8 };
        for snr in GRID_SNR_DB {
            let c = SystemConfig::miso(4, GRID_RATE, snr, 0.9);
            rows.push(ResultRow::from_estimate(
                "snr_db",
                snr,
                scheme,
                &outage_closed(scheme, &c)?,
            ));
            let plan = TrialPlan {
                trials: 20_000,
                seed: opts.seed,
                workers: 4,
                chunk: 4096,
            };
            rows.push(ResultRow::from_mc(
                "snr_db",
                snr,
                scheme,
                &simulate_from_stream(scheme, &c, None, &plan, 0)?,
            ));
        }
        Ok(to_csv_string(&rows))
    };
    let (a, b) = (render()?, render()?);
    lines.push(CheckLine::check(
        "CSV rerun byte-identical",
        a == b,
        format!("{} bytes", a.len()),
    ));

    Ok(CriterionReport {
        number: 7,
        title: "determinism".into(),
        lines,
    })
}

/// Runs every criterion.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<CriterionReport>> {
    let grid = agreement_grid(opts)?;
    Ok(vec![
        criterion_agreement(&grid),
        criterion_arbitration(&grid)?,
        criterion_diversity()?,
        criterion_reductions()?,
        criterion_shapes()?,
        criterion_special_functions(opts)?,
        criterion_determinism(opts)?,
    ])
}
