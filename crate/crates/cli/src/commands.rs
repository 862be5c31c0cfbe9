use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use csi_outage::analytic::{
    diversity_order, min_codebook_size, outage_closed, outage_semianalytic, CodebookSizeResult, QuadratureSpec, Scheme,
};
use csi_outage::channel::{PersistenceSpec, RngStream, SystemConfig};
use csi_outage::codebook::{rvq_generate, Codebook};
use csi_outage::montecarlo::{simulate_outage, sweep, SweepAxis, TrialPlan};
use csi_outage::table::{to_csv_string, to_json_string, ResultRow};
use csi_outage::verify::{run_all, VerifyOptions};

use crate::args::{
    AnalyticArgs, Axis, CodebookKindArg, CodebookSizeArgs, Command, DiversityArgs, Evaluator, Format, GenCodebookArgs,
    McArgs, OutputArgs, SimulateArgs, SweepArgs, SystemArgs, VerifyArgs,
};
use crate::{EXIT_NUMERIC, EXIT_USAGE, EXIT_VERIFY};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(csi_outage::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() => EXIT_NUMERIC,
            CliError::Io(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<csi_outage::Error> for CliError {
    fn from(e: csi_outage::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Analytic(a) => analytic(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => run_sweep(a),
        Command::CodebookSize(a) => codebook_size(a),
        Command::Diversity(a) => diversity(a),
        Command::Verify(a) => verify(a),
        Command::GenCodebook(a) => gen_codebook(a),
    }
}

/// Builds the scheme and configuration; `free` names the parameter a sweep
/// supplies later, which may then be absent here.
fn system(args: &SystemArgs, free: Option<Axis>) -> Result<(Scheme, SystemConfig)> {
    let size = match (args.codebook_size, free) {
        (None, Some(Axis::CodebookSize)) => Some(1),
        (n, _) => n,
    };
    let scheme = Scheme::parse(args.scheme.as_str(), size).map_err(|e| CliError::Usage(e.to_string()))?;
    let snr_db = match (args.snr_db, free) {
        (Some(v), _) => v,
        (None, Some(Axis::SnrDb)) => 0.0,
        (None, _) => return Err(CliError::Usage("--snr-db is required".into())),
    };
    let persistence = match (args.rho, args.doppler_hz, args.delay_s, free) {
        (Some(rho), _, _, _) => PersistenceSpec::Rho(rho),
        (None, Some(doppler_hz), Some(delay_s), _) => PersistenceSpec::Jakes { doppler_hz, delay_s },
        (None, _, _, Some(Axis::Rho)) => PersistenceSpec::Rho(1.0),
        _ => return Err(CliError::Usage("give --rho, or --doppler-hz with --delay-s".into())),
    };
    let config = SystemConfig {
        n_t: args.nt,
        n_r: args.nr,
        n_u: args.nu,
        rate_bits: args.rate,
        snr_linear: 1.0,
        persistence,
    }
    .with_snr_db(snr_db);
    if free != Some(Axis::CodebookSize) && free != Some(Axis::Users) {
        scheme.check(&config).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok((scheme, config))
}

fn plan(mc: &McArgs, seed: u64) -> TrialPlan {
    TrialPlan {
        trials: mc.trials,
        seed,
        workers: mc.workers,
        chunk: mc.chunk,
    }
}

fn deterministic(
    scheme: Scheme,
    config: &SystemConfig,
    eval: Evaluator,
) -> Result<csi_outage::analytic::OutageEstimate> {
    Ok(match eval {
        Evaluator::Closed => outage_closed(scheme, config)?,
        Evaluator::Quadrature => outage_semianalytic(scheme, config, &QuadratureSpec::default())?,
        Evaluator::Mc => unreachable!("Monte Carlo rows are produced separately"),
    })
}

fn analytic(a: AnalyticArgs) -> Result<u8> {
    let (scheme, config) = system(&a.system, None)?;
    let snr_db = a.system.snr_db.unwrap_or_default();
    let mut rows = Vec::new();
    for &eval in &a.eval {
        match eval {
            Evaluator::Mc => {
                let seed = a
                    .seed
                    .ok_or_else(|| CliError::Usage("--seed is required with --eval mc".into()))?;
                let mc = simulate_outage(scheme, &config, None, &plan(&a.mc, seed))?;
                rows.push(ResultRow::from_mc("snr_db", snr_db, scheme, &mc));
            }
            _ => {
                let est = deterministic(scheme, &config, eval)?;
                rows.push(ResultRow::from_estimate("snr_db", snr_db, scheme, &est));
            }
        }
    }
    emit_rows(&rows, &a.output)
}

fn simulate(a: SimulateArgs) -> Result<u8> {
    let (scheme, config) = system(&a.system, None)?;
    let fixed = match &a.codebook_file {
        Some(path) => Some(Codebook::from_text(&fs::read_to_string(path)?)?),
        None => None,
    };
    let mc = simulate_outage(scheme, &config, fixed.as_ref(), &plan(&a.mc, a.seed))?;
    let rows = [ResultRow::from_mc(
        "snr_db",
        a.system.snr_db.unwrap_or_default(),
        scheme,
        &mc,
    )];
    emit_rows(&rows, &a.output)
}

fn sweep_axis(axis: Axis) -> SweepAxis {
    match axis {
        Axis::SnrDb => SweepAxis::SnrDb,
        Axis::Rho => SweepAxis::Rho,
        Axis::CodebookSize => SweepAxis::CodebookSize,
        Axis::Users => SweepAxis::Users,
    }
}

fn run_sweep(a: SweepArgs) -> Result<u8> {
    let (scheme, template) = system(&a.system, Some(a.axis))?;
    let axis = sweep_axis(a.axis);
    let mc = if a.eval.contains(&Evaluator::Mc) {
        Some(sweep(scheme, &template, axis, &a.values, &plan(&a.mc, a.seed))?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for (i, &v) in a.values.iter().enumerate() {
        let (s, c) = axis.apply(scheme, &template, v)?;
        for &eval in &a.eval {
            match (eval, &mc) {
                (Evaluator::Mc, Some(results)) => rows.push(ResultRow::from_mc(axis.name(), v, s, &results[i].1)),
                _ => rows.push(ResultRow::from_estimate(
                    axis.name(),
                    v,
                    s,
                    &deterministic(s, &c, eval)?,
                )),
            }
        }
    }
    emit_rows(&rows, &a.output)
}

#[derive(Serialize)]
struct SizeRow {
    target: f64,
    rho: f64,
    snr_db: f64,
    n_t: u32,
    status: &'static str,
    min_codebook_size: Option<usize>,
    pbf_floor: Option<f64>,
}

fn codebook_size(a: CodebookSizeArgs) -> Result<u8> {
    let mut rows = Vec::new();
    for &target in &a.targets {
        for &rho in &a.rho_values {
            let config = SystemConfig::miso(a.nt, a.rate, a.snr_db, rho);
            let (status, n, floor) = match min_codebook_size(target, &config, a.n_max)? {
                CodebookSizeResult::Attained(n) => ("attained", Some(n), None),
                CodebookSizeResult::Unattainable { pbf_floor } => ("unattainable", None, Some(pbf_floor)),
                CodebookSizeResult::BeyondLimit { .. } => ("beyond-limit", None, None),
            };
            rows.push(SizeRow {
                target,
                rho,
                snr_db: a.snr_db,
                n_t: a.nt,
                status,
                min_codebook_size: n,
                pbf_floor: floor,
            });
        }
    }
    emit(&rows, &a.output)
}

#[derive(Serialize)]
struct DiversityRow {
    scheme: String,
    rho: f64,
    grid_db: String,
    slope: f64,
}

fn diversity(a: DiversityArgs) -> Result<u8> {
    let mut system_args = a.system.clone();
    system_args.snr_db.get_or_insert(0.0);
    let (scheme, config) = system(&system_args, None)?;
    let slope = diversity_order(scheme, &config, &a.grid_db)?;
    let grid: Vec<String> = a.grid_db.iter().map(f64::to_string).collect();
    let rows = [DiversityRow {
        scheme: scheme.to_string(),
        rho: config.persistence.resolve()?,
        grid_db: grid.join(";"),
        slope,
    }];
    emit(&rows, &a.output)
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let opts = VerifyOptions {
        trials: a.trials,
        seed: a.seed,
        workers: a.workers,
        ..VerifyOptions::default()
    };
    let reports = run_all(&opts)?;
    let mut out = io::stdout().lock();
    for r in &reports {
        write!(out, "{r}")?;
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.number.to_string())
        .collect();
    if failed.is_empty() {
        writeln!(out, "verify: all {} criteria passed", reports.len())?;
        Ok(0)
    } else {
        writeln!(out, "verify: failed criteria {}", failed.join(", "))?;
        Ok(EXIT_VERIFY)
    }
}

fn gen_codebook(a: GenCodebookArgs) -> Result<u8> {
    let cb = match a.kind {
        CodebookKindArg::Tas => Codebook::tas(a.nt as usize)?,
        CodebookKindArg::Rvq => {
            let size = a
                .size
                .ok_or_else(|| CliError::Usage("--size is required for RVQ".into()))?;
            let seed = a
                .seed
                .ok_or_else(|| CliError::Usage("--seed is required for RVQ".into()))?;
            rvq_generate(&mut RngStream::new(seed, 0), size, a.nt as usize)?
        }
    };
    write_text(&cb.to_text()?, a.output.as_deref())?;
    Ok(0)
}

fn emit_rows(rows: &[ResultRow], out: &OutputArgs) -> Result<u8> {
    let text = match out.format {
        Format::Csv => to_csv_string(rows),
        Format::Json => to_json_string(rows),
    };
    write_text(&text, out.output.as_deref())?;
    Ok(0)
}

fn emit<T: Serialize>(rows: &[T], out: &OutputArgs) -> Result<u8> {
    let text = match out.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| io::Error::other(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| io::Error::other(e.to_string()))?)
                .expect("CSV output is UTF-8")
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| io::Error::other(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    write_text(&text, out.output.as_deref())?;
    Ok(0)
}

fn write_text(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
