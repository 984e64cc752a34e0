//! `aklt-hqmm` command-line surface.
//!
//! Every command writes one JSON document (or CSV table) to stdout or
//! `--out`. Exit status: 0 when every reported check is within `--tol`,
//! 1 when a check fails, 2 on usage or input errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::channels::{aklt_channel, KrausChannel, SpectrumReport};
use crate::hqmm::{GenerativeTriplet, ObservableWord};
use crate::io::{self, complex_value, float_value, format_float};
use crate::operators::{partial_trace, von_neumann_entropy, ComplexMatrix};
use crate::random;
use crate::transitions::{
    e_h, e_h_dual, hidden_expectation, projection_p, symmetric_projector, v_isometry, w_isometry,
};
use crate::{oracle_mps, spt, Complex64, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "aklt-hqmm", version, about = "Hidden quantum Markov model of the AKLT spin-1 chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run the full invariant suite.
    Invariants,
    /// Transfer spectrum of Φ_AKLT or of a channel file (`--in`).
    Spectrum,
    /// Evaluate the HQMM state on a word file (`--in`), or the identity word of length `--n`.
    Evaluate,
    /// Sample `--count` observation strings of length `--n`.
    Sample,
    /// Brute-force periodic MPS checks at `--n` sites.
    Oracle,
    /// D₂ index and symmetry sweeps (`--count` random trials, default 100).
    Spt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunConfig {
    /// Horizon or site count.
    #[arg(long, global = true, default_value_t = 3)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "tol", global = true, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[arg(long = "in", global = true)]
    pub input_path: Option<PathBuf>,
    #[arg(long = "out", global = true)]
    pub output_path: Option<PathBuf>,
    /// Output format; `sample` defaults to csv, every other command to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Trajectories for `sample` (default 1000), trials for `spt` (default 100).
    #[arg(long, global = true)]
    pub count: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 3,
            seed: 0,
            tolerance: 1e-10,
            input_path: None,
            output_path: None,
            format: None,
            count: None,
        }
    }
}

impl RunConfig {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn read_input(&self) -> Result<Option<String>> {
        self.input_path.as_ref().map(std::fs::read_to_string).transpose().map_err(Error::from)
    }
}

/// Rendered command output plus whether every check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
}

impl Check {
    fn new(name: &'static str, residual: f64) -> Self {
        Self { name, residual }
    }

    fn passes(&self, tol: f64) -> bool {
        self.residual.is_finite() && self.residual <= tol
    }
}

fn checks_json(checks: &[Check], tol: f64) -> (Value, bool, Option<&'static str>) {
    let first_failure = checks.iter().find(|c| !c.passes(tol)).map(|c| c.name);
    let list = checks
        .iter()
        .map(|c| json!({"name": c.name, "residual": float_value(c.residual), "pass": c.passes(tol)}))
        .collect();
    (Value::Array(list), first_failure.is_none(), first_failure)
}

pub fn run(command: Command, config: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Invariants => cmd_invariants(config),
        Command::Spectrum => cmd_spectrum(config),
        Command::Evaluate => cmd_evaluate(config),
        Command::Sample => cmd_sample(config),
        Command::Oracle => cmd_oracle(config),
        Command::Spt => cmd_spt(config),
    }
}

/// Parses arguments, runs, writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command, &cli.config).and_then(|out| emit(&cli.config, &out).map(|_| out.ok)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(config: &RunConfig, out: &Outcome) -> Result<()> {
    match &config.output_path {
        Some(path) => std::fs::write(path, &out.text)?,
        None => print!("{}", out.text),
    }
    Ok(())
}

fn json_outcome(v: &Value, ok: bool) -> Result<Outcome> {
    let mut text = io::to_json_string(v)?;
    text.push('\n');
    Ok(Outcome { text, ok })
}

pub fn invariant_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = random::rng(seed);
    let mut checks = Vec::new();
    let i2 = ComplexMatrix::identity(2);

    let v = v_isometry();
    let w = w_isometry();
    checks.push(Check::new("v_isometry", (&v.matrix().dagger() * v.matrix()).max_abs_diff(&i2)));
    checks.push(Check::new("w_isometry", (&w.matrix().dagger() * w.matrix()).max_abs_diff(&i2)));
    let p = projection_p();
    checks.push(Check::new("p_coisometry", (&p * &p.dagger()).max_abs_diff(&ComplexMatrix::identity(3))));
    checks.push(Check::new("p_symmetric_projector", (&p.dagger() * &p).max_abs_diff(&symmetric_projector())));

    let phi = aklt_channel();
    checks.push(Check::new("aklt_trace_preservation", phi.completeness().max_abs_diff(&i2)));
    checks.push(Check::new("aklt_unitality", phi.unitality_residual()));
    checks.push(Check::new("aklt_choi_positivity", (-phi.is_cptp().min_choi_eigenvalue).max(0.0)));
    let spectrum = phi.transfer_spectrum()?;
    let expected = [1.0, -1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0];
    let spec_res = spectrum
        .eigenvalues
        .iter()
        .zip(expected)
        .map(|(z, e)| (z - Complex64::new(e, 0.0)).norm())
        .fold(0.0, f64::max);
    checks.push(Check::new("aklt_transfer_spectrum", spec_res));
    checks.push(Check::new(
        "aklt_correlation_length",
        (spectrum.correlation_length - 1.0 / 3f64.ln()).abs(),
    ));

    let mut identity_res: f64 = 0.0;
    let mut range_res: f64 = 0.0;
    let vv = v.range_projector();
    for _ in 0..100 {
        let x = random::ginibre(&mut rng, 2, 2);
        identity_res = identity_res.max(e_h(&e_h_dual(&x)?)?.max_abs_diff(&x));
        let y = random::ginibre(&mut rng, 4, 4);
        range_res = range_res.max(e_h_dual(&e_h(&y)?)?.max_abs_diff(&vv.conjugate(&y)));
    }
    checks.push(Check::new("e_h_after_dual_is_identity", identity_res));
    checks.push(Check::new("dual_after_e_h_is_range_projection", range_res));

    let choi = hidden_expectation().dual_channel().choi();
    let rho_b = partial_trace(&choi.choi, &[2, 4], &[1])?;
    let rho_r = partial_trace(&choi.choi, &[2, 4], &[0])?;
    checks.push(Check::new("bond_choi_purity", (choi.purity - 1.0).abs()));
    checks.push(Check::new("bond_entropy_reference", (von_neumann_entropy(&rho_r)? - 1.0).abs()));
    checks.push(Check::new("bond_entropy_virtual", (von_neumann_entropy(&rho_b)? - 1.0).abs()));

    let t = GenerativeTriplet::aklt_stationary();
    let mut decomposed_res: f64 = 0.0;
    for n in 1..=3 {
        for _ in 0..10 {
            let xs = (0..n).map(|_| random::ginibre(&mut rng, 2, 2)).collect();
            let ys = (0..n).map(|_| random::ginibre(&mut rng, 3, 3)).collect();
            let word = ObservableWord::new(xs, ys)?;
            decomposed_res = decomposed_res.max((t.evaluate(&word)? - t.evaluate_decomposed(&word)?).norm());
        }
    }
    checks.push(Check::new("nested_equals_decomposed", decomposed_res));
    let mut collapse_res: f64 = 0.0;
    for n in 1..=5 {
        let xs: Vec<_> = (0..n).map(|_| random::ginibre(&mut rng, 2, 2)).collect();
        collapse_res = collapse_res.max((t.hidden_marginal(&xs)? - t.hidden_marginal_via_channel(&phi, &xs)?).norm());
    }
    checks.push(Check::new("hidden_marginal_markov_collapse", collapse_res));
    let total: f64 = t.string_distribution(4)?.iter().map(|(_, p)| p).sum();
    checks.push(Check::new("string_probabilities_normalize", (total - 1.0).abs()));

    checks.push(Check::new("rotation_covariance", spt::covariance_sweep(100, seed)));
    checks.push(Check::new("emission_equivariance", spt::equivariance_sweep(50, seed.wrapping_add(1))?));
    checks.push(Check::new("emission_dual_covariance", spt::dual_covariance_sweep(20, seed.wrapping_add(2))?));
    checks.push(Check::new("d2_index", (spt::d2_index()?.theta + 1.0).abs()));
    Ok(checks)
}

pub fn cmd_invariants(config: &RunConfig) -> Result<Outcome> {
    let checks = invariant_checks(config.seed)?;
    let (list, ok, first_failure) = checks_json(&checks, config.tolerance);
    match config.format_or(Format::Json) {
        Format::Json => {
            let v = json!({
                "pass": ok,
                "first_failure": first_failure,
                "tolerance": float_value(config.tolerance),
                "seed": config.seed,
                "checks": list,
            });
            json_outcome(&v, ok)
        }
        Format::Csv => {
            let mut text = String::from("check,residual,pass\n");
            for c in &checks {
                let _ = writeln!(text, "{},{},{}", c.name, format_float(c.residual), c.passes(config.tolerance));
            }
            Ok(Outcome { text, ok })
        }
    }
}

pub fn spectrum_json(report: &SpectrumReport) -> Value {
    json!({
        "eigenvalues": report.eigenvalues.iter().map(|z| complex_value(*z)).collect::<Vec<_>>(),
        "magnitudes": report.eigenvalues.iter().map(|z| float_value(z.norm())).collect::<Vec<_>>(),
        "lambda_2": report.second().map(complex_value),
        "spectral_gap": float_value(report.spectral_gap),
        "correlation_length": float_value(report.correlation_length),
    })
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<Outcome> {
    let channel: KrausChannel = match config.read_input()? {
        Some(text) => io::parse_channel(&text)?,
        None => aklt_channel(),
    };
    let report = channel.transfer_spectrum()?;
    match config.format_or(Format::Json) {
        Format::Json => json_outcome(&spectrum_json(&report), true),
        Format::Csv => {
            let mut text = String::from("index,re,im,magnitude\n");
            for (i, z) in report.eigenvalues.iter().enumerate() {
                let _ = writeln!(text, "{i},{},{},{}", format_float(z.re), format_float(z.im), format_float(z.norm()));
            }
            Ok(Outcome { text, ok: true })
        }
    }
}

/// Word length up to which `evaluate` also prints the decomposed sum.
pub const CROSS_CHECK_HORIZON: usize = 4;

pub fn cmd_evaluate(config: &RunConfig) -> Result<Outcome> {
    let (triplet, word) = match config.read_input()? {
        Some(text) => {
            let file = io::parse_word(&text, 2, 3)?;
            (GenerativeTriplet::aklt(file.phi0)?, file.word)
        }
        None => (GenerativeTriplet::aklt_stationary(), ObservableWord::identity(config.n, 2, 3)?),
    };
    let value = triplet.evaluate(&word)?;
    let cross = if word.len() <= CROSS_CHECK_HORIZON {
        let d = triplet.evaluate_decomposed(&word)?;
        Some((d, (d - value).norm()))
    } else {
        None
    };
    let ok = cross.is_none_or(|(_, diff)| diff <= config.tolerance);
    match config.format_or(Format::Json) {
        Format::Json => {
            let v = json!({
                "n": word.len(),
                "value": complex_value(value),
                "decomposed": cross.map(|(d, _)| complex_value(d)),
                "difference": cross.map(|(_, diff)| float_value(diff)),
            });
            json_outcome(&v, ok)
        }
        Format::Csv => {
            let mut text = String::from("n,re,im,decomposed_re,decomposed_im,difference\n");
            let (dre, dim, diff) = match cross {
                Some((d, diff)) => (format_float(d.re), format_float(d.im), format_float(diff)),
                None => Default::default(),
            };
            let _ = writeln!(text, "{},{},{},{dre},{dim},{diff}", word.len(), format_float(value.re), format_float(value.im));
            Ok(Outcome { text, ok })
        }
    }
}

pub const DEFAULT_SAMPLE_COUNT: usize = 1000;

/// Trajectories are emitted in index order; aborted ones are summarized on
/// stderr and omitted from the table.
pub fn cmd_sample(config: &RunConfig) -> Result<Outcome> {
    if config.n == 0 {
        return Err(Error::LengthMismatch("--n must be at least 1".into()));
    }
    let triplet = GenerativeTriplet::aklt_stationary();
    let count = config.count.unwrap_or(DEFAULT_SAMPLE_COUNT);
    let mut rows = Vec::with_capacity(count);
    let mut aborted = Vec::new();
    for (i, sample) in triplet.sample_batch(config.n, count, config.seed).into_iter().enumerate() {
        match sample {
            Ok(s) => {
                let p = triplet.string_probability(&s.outcomes)?;
                rows.push((s.outcome_string(), p));
            }
            Err(e @ Error::VanishingPrefix { .. }) => aborted.push((i, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    for (i, msg) in &aborted {
        eprintln!("trajectory {i} aborted: {msg}");
    }
    match config.format_or(Format::Csv) {
        Format::Csv => {
            let mut text = String::from("outcome,probability\n");
            for (s, p) in &rows {
                let _ = writeln!(text, "{s},{}", format_float(*p));
            }
            Ok(Outcome { text, ok: true })
        }
        Format::Json => {
            let v = json!({
                "n": config.n,
                "count": count,
                "seed": config.seed,
                "aborted": aborted.len(),
                "trajectories": rows
                    .iter()
                    .map(|(s, p)| json!({"outcome": s, "probability": float_value(*p)}))
                    .collect::<Vec<_>>(),
            });
            json_outcome(&v, true)
        }
    }
}

/// Empirical frequencies of outcome strings over the lexicographic index.
pub fn empirical_distribution(samples: &[Vec<usize>], n: usize) -> Vec<f64> {
    let mut counts = vec![0.0; 3usize.pow(n as u32)];
    for s in samples {
        counts[s.iter().fold(0, |acc, &k| acc * 3 + k)] += 1.0;
    }
    let total = samples.len().max(1) as f64;
    counts.iter().map(|c| c / total).collect()
}

pub fn cmd_oracle(config: &RunConfig) -> Result<Outcome> {
    let n = config.n;
    let ground = oracle_mps::ground_energy_check(n)?;
    let state = oracle_mps::build_state(n)?;
    let closed = oracle_mps::norm_sq_closed_form(n);
    let expected_energy = -2.0 * n as f64 / 3.0;
    let table = oracle_mps::sz_correlator_table(n)?;
    let entropies = (1..n)
        .map(|l| Ok((l, oracle_mps::block_entropy_in(&state, l)?)))
        .collect::<Result<Vec<_>>>()?;
    let born = oracle_mps::born_distribution(n)?;
    let phi_o: Vec<f64> = GenerativeTriplet::aklt_stationary()
        .string_distribution(n)?
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    let tv = oracle_mps::total_variation(&born, &phi_o)?;
    let checks = [
        Check::new("ground_energy", (ground.energy - expected_energy).abs()),
        Check::new("eigen_residual", ground.residual),
        Check::new("norm_sq_closed_form", (state.norm_sq - closed).abs()),
    ];
    let (list, ok, first_failure) = checks_json(&checks, config.tolerance);
    match config.format_or(Format::Json) {
        Format::Json => {
            let v = json!({
                "n": n,
                "pass": ok,
                "first_failure": first_failure,
                "energy": float_value(ground.energy),
                "expected_energy": float_value(expected_energy),
                "residual": float_value(ground.residual),
                "norm_sq": float_value(state.norm_sq),
                "norm_sq_closed_form": float_value(closed),
                "correlators": table
                    .iter()
                    .map(|r| json!({
                        "separation": r.separation,
                        "correlator": float_value(r.correlator),
                        "abs_correlator": float_value(r.magnitude),
                    }))
                    .collect::<Vec<_>>(),
                "block_entropies": entropies
                    .iter()
                    .map(|(l, s)| json!({"block_length": l, "entropy_bits": float_value(*s)}))
                    .collect::<Vec<_>>(),
                "born_vs_observation_tv": float_value(tv),
                "checks": list,
            });
            json_outcome(&v, ok)
        }
        Format::Csv => {
            let mut text = String::from("separation,correlator,abs_correlator\n");
            for r in &table {
                let _ = writeln!(text, "{},{},{}", r.separation, format_float(r.correlator), format_float(r.magnitude));
            }
            Ok(Outcome { text, ok })
        }
    }
}

pub const DEFAULT_SPT_TRIALS: usize = 100;

pub fn cmd_spt(config: &RunConfig) -> Result<Outcome> {
    let trials = config.count.unwrap_or(DEFAULT_SPT_TRIALS);
    let report = spt::spt_report(trials, config.seed)?;
    let checks = [
        Check::new("theta", (report.theta + 1.0).abs()),
        Check::new("cocycle_ratio", (report.cocycle_ratio + 1.0).abs()),
        Check::new("covariance", report.max_covariance_residual),
        Check::new("equivariance", report.max_equivariance_residual),
        Check::new("dual_covariance", report.max_dual_covariance_residual),
    ];
    let (_, ok, first_failure) = checks_json(&checks, config.tolerance);
    match config.format_or(Format::Json) {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            v["pass"] = json!(ok);
            v["first_failure"] = json!(first_failure);
            json_outcome(&v, ok)
        }
        Format::Csv => {
            let mut text = String::from("quantity,value\n");
            for (k, x) in [
                ("theta", report.theta),
                ("eta_x", report.eta_x),
                ("eta_y", report.eta_y),
                ("eta_xy", report.eta_xy),
                ("cocycle_ratio", report.cocycle_ratio),
                ("max_covariance_residual", report.max_covariance_residual),
                ("max_equivariance_residual", report.max_equivariance_residual),
                ("max_dual_covariance_residual", report.max_dual_covariance_residual),
            ] {
                let _ = writeln!(text, "{k},{}", format_float(x));
            }
            let _ = writeln!(text, "trials,{trials}\nseed,{}", config.seed);
            Ok(Outcome { text, ok })
        }
    }
}
