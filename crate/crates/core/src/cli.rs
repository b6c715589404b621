//! Command-line frontend.
//!
//! Exit codes: 0 success, 1 validation failure (bad flags, malformed
//! JSON, domain errors), 2 an audit report contains a violation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::audit;
use crate::cnd::{tulap_cdf, ContinuousCnd};
use crate::discrete::{named_distribution, round_cnd, unique_sens1, DiscreteCnd, NamedDistribution};
use crate::error::{Error, Result};
use crate::logconcave;
use crate::report::AuditReport;
use crate::spec::{parse_noise_spec, parse_pmf_file, parse_tradeoff_spec, TradeoffSpec};
use crate::tradeoff::{cauchy_tradeoff, roc_discrete, TradeoffFunction};

/// Outcome of one CLI invocation.
#[derive(Debug)]
pub struct CommandResult {
    pub exit_code: i32,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

impl CommandResult {
    fn ok(summary: String, files: Vec<PathBuf>) -> Self {
        CommandResult {
            exit_code: 0,
            files,
            summary,
        }
    }

    fn failure(message: String) -> Self {
        CommandResult {
            exit_code: 1,
            files: Vec::new(),
            summary: message,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "fdp-noise",
    about = "Tradeoff-function algebra, canonical noise distributions, and anti-concentration audits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate and summarize tradeoff functions.
    Tradeoff {
        #[command(subcommand)]
        cmd: TradeoffCmd,
    },
    /// Continuous canonical noise distributions.
    Cnd {
        #[command(subcommand)]
        cmd: CndCmd,
    },
    /// Discrete canonical noise distributions.
    Discrete {
        #[command(subcommand)]
        cmd: DiscreteCmd,
    },
    /// Anti-concentration and dominance audits.
    Audit {
        #[command(subcommand)]
        cmd: AuditCmd,
    },
    /// Emit the CSV datasets behind the reference figures.
    Figures {
        which: FigureId,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct SpecArg {
    /// Tradeoff spec JSON, e.g. '{"kind":"eps_delta","eps":1,"delta":0}'.
    #[arg(long)]
    spec: String,
}

impl SpecArg {
    fn tradeoff(&self) -> Result<TradeoffFunction> {
        parse_tradeoff_spec(&self.spec)?.build()
    }

    fn cnd(&self) -> Result<ContinuousCnd> {
        ContinuousCnd::construct(self.tradeoff()?)
    }
}

#[derive(Subcommand, Debug)]
enum TradeoffCmd {
    /// Evaluate the curve at one specificity.
    Eval {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Fixed point, total variation, and pure-DP level.
    Summary {
        #[command(flatten)]
        spec: SpecArg,
    },
}

#[derive(Subcommand, Debug)]
enum CndCmd {
    /// Cdf of the constructed CND at a point.
    Cdf {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Quantile of the constructed CND at a probability.
    Quantile {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        u: f64,
    },
    /// Reproducible draws (one value per output line).
    Sample {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Write CSV here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV table of (x, F(x)).
    Table {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_negative_numbers = true)]
        xmin: f64,
        #[arg(long, allow_negative_numbers = true)]
        xmax: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// CSV table of (u, F^{-1}(u)).
    Qtable {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        umin: f64,
        #[arg(long)]
        umax: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum DiscreteCmd {
    /// CSV of (x, pmf, cdf) for the rounded discrete CND.
    Pmf {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify the discrete-CND properties of a pmf file.
    Verify {
        /// Pmf JSON file: {"lo": -5, "mass": [...]}.
        #[arg(long)]
        pmf: PathBuf,
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        delta: u32,
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum AuditCmd {
    /// Anti-concentration audit of a noise file against a tradeoff spec.
    Anti {
        /// Noise JSON file (cdf-grid / pmf / samples).
        #[arg(long)]
        noise: PathBuf,
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        tmax: u32,
        #[arg(long)]
        json: bool,
    },
    /// Stochastic-dominance audit against the CND of the spec.
    Dominance {
        #[arg(long)]
        noise: PathBuf,
        #[command(flatten)]
        spec: SpecArg,
        /// Treat the spec as a divisible family and audit against its
        /// log-concave CND (continuous dominance) instead of the
        /// sensitivity-1 discrete CND.
        #[arg(long)]
        family: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

/// Format with 12 significant digits, plain decimal in a moderate
/// exponent range and scientific notation outside it.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-4..12).contains(&exp) {
        format!("{v:.11e}")
    } else {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    }
}

fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut text = String::with_capacity(rows.len() * 32);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| fmt_sig(*v)).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn report_outcome(report: &AuditReport, json: bool, files: Vec<PathBuf>) -> CommandResult {
    let summary = if json {
        report.to_json()
    } else {
        report.render_table()
    };
    CommandResult {
        exit_code: if report.all_pass { 0 } else { 2 },
        files,
        summary,
    }
}

/// Parse and run one invocation; never panics on user input.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return CommandResult {
                exit_code: code,
                files: Vec::new(),
                summary: e.to_string(),
            };
        }
    };
    match dispatch(cli) {
        Ok(result) => result,
        Err(e) => CommandResult::failure(format!("error: {e}")),
    }
}

fn dispatch(cli: Cli) -> Result<CommandResult> {
    match cli.command {
        Command::Tradeoff { cmd } => tradeoff_cmd(cmd),
        Command::Cnd { cmd } => cnd_cmd(cmd),
        Command::Discrete { cmd } => discrete_cmd(cmd),
        Command::Audit { cmd } => audit_cmd(cmd),
        Command::Figures { which, out } => figures_cmd(which, &out),
    }
}

fn tradeoff_cmd(cmd: TradeoffCmd) -> Result<CommandResult> {
    match cmd {
        TradeoffCmd::Eval { spec, alpha } => {
            let f = spec.tradeoff()?;
            let v = f.try_eval(alpha)?;
            Ok(CommandResult::ok(fmt_sig(v), vec![]))
        }
        TradeoffCmd::Summary { spec } => {
            let f = spec.tradeoff()?;
            let s = f.summaries();
            let mut out = String::new();
            writeln!(out, "c_f = {}", fmt_sig(s.c_f)).unwrap();
            writeln!(out, "tv = {}", fmt_sig(s.tv)).unwrap();
            write!(out, "eps_f = {}", fmt_sig(s.eps_f)).unwrap();
            Ok(CommandResult::ok(out, vec![]))
        }
    }
}

fn cnd_cmd(cmd: CndCmd) -> Result<CommandResult> {
    match cmd {
        CndCmd::Cdf { spec, x } => {
            let cnd = spec.cnd()?;
            Ok(CommandResult::ok(fmt_sig(cnd.cdf(x)), vec![]))
        }
        CndCmd::Quantile { spec, u } => {
            let cnd = spec.cnd()?;
            Ok(CommandResult::ok(fmt_sig(cnd.quantile(u)?), vec![]))
        }
        CndCmd::Sample {
            spec,
            n,
            seed,
            out,
        } => {
            let cnd = spec.cnd()?;
            let draws = cnd.sample(seed, n);
            match out {
                Some(path) => {
                    let rows: Vec<Vec<f64>> = draws.iter().map(|v| vec![*v]).collect();
                    write_csv(&path, "value", &rows)?;
                    Ok(CommandResult::ok(
                        format!("wrote {} draws to {}", n, path.display()),
                        vec![path],
                    ))
                }
                None => {
                    let lines: Vec<String> = draws.iter().map(|v| fmt_sig(*v)).collect();
                    Ok(CommandResult::ok(lines.join("\n"), vec![]))
                }
            }
        }
        CndCmd::Table {
            spec,
            xmin,
            xmax,
            step,
            out,
        } => {
            if !(step > 0.0) || xmax < xmin {
                return Err(Error::param("step", "need step > 0 and xmax >= xmin"));
            }
            let cnd = spec.cnd()?;
            let mut rows = Vec::new();
            let n = ((xmax - xmin) / step).round() as usize;
            for i in 0..=n {
                let x = xmin + i as f64 * step;
                rows.push(vec![x, cnd.cdf(x)]);
            }
            write_csv(&out, "x,cdf", &rows)?;
            Ok(CommandResult::ok(
                format!("wrote {} rows to {}", rows.len(), out.display()),
                vec![out],
            ))
        }
        CndCmd::Qtable {
            spec,
            umin,
            umax,
            step,
            out,
        } => {
            if !(step > 0.0) || !(umin > 0.0) || !(umax < 1.0) || umax < umin {
                return Err(Error::param(
                    "step",
                    "need step > 0 and 0 < umin <= umax < 1",
                ));
            }
            let cnd = spec.cnd()?;
            let mut rows = Vec::new();
            let n = ((umax - umin) / step).round() as usize;
            for i in 0..=n {
                let u = umin + i as f64 * step;
                rows.push(vec![u, cnd.quantile(u)?]);
            }
            write_csv(&out, "u,quantile", &rows)?;
            Ok(CommandResult::ok(
                format!("wrote {} rows to {}", rows.len(), out.display()),
                vec![out],
            ))
        }
    }
}

fn discrete_cmd(cmd: DiscreteCmd) -> Result<CommandResult> {
    match cmd {
        DiscreteCmd::Pmf { spec, delta, out } => {
            let dcnd = round_cnd(&spec.cnd()?, delta)?;
            let pmf = dcnd.pmf();
            let mut rows = Vec::new();
            let mut cum = 0.0;
            for x in pmf.lo()..=pmf.hi() {
                cum += pmf.mass_at(x);
                rows.push(vec![x as f64, pmf.mass_at(x), cum.min(1.0)]);
            }
            write_csv(&out, "x,pmf,cdf", &rows)?;
            Ok(CommandResult::ok(
                format!("wrote {} rows to {}", rows.len(), out.display()),
                vec![out],
            ))
        }
        DiscreteCmd::Verify {
            pmf,
            spec,
            delta,
            json,
        } => {
            let text = std::fs::read_to_string(&pmf)?;
            let parsed = parse_pmf_file(&text)?;
            let f = spec.tradeoff()?;
            let dcnd = DiscreteCnd::new(parsed, f, delta)?;
            let report = crate::discrete::verify_discrete_cnd(&dcnd);
            Ok(report_outcome(&report, json, vec![]))
        }
    }
}

fn audit_cmd(cmd: AuditCmd) -> Result<CommandResult> {
    match cmd {
        AuditCmd::Anti {
            noise,
            spec,
            tmax,
            json,
        } => {
            let text = std::fs::read_to_string(&noise)?;
            let base = noise.parent().unwrap_or(Path::new(".")).to_path_buf();
            let noise_spec = parse_noise_spec(&text)?.build(&base)?;
            let f = spec.tradeoff()?;
            let report = audit::audit_noise(&noise_spec, &f, tmax, &[])?;
            Ok(report_outcome(&report, json, vec![]))
        }
        AuditCmd::Dominance {
            noise,
            spec,
            family,
            json,
        } => {
            let text = std::fs::read_to_string(&noise)?;
            let base = noise.parent().unwrap_or(Path::new(".")).to_path_buf();
            let noise_spec = parse_noise_spec(&text)?.build(&base)?;
            if family {
                let parsed = parse_tradeoffspec_family(&spec.spec)?;
                let cnd = logconcave::construct_logconcave_cnd(&parsed)?;
                let report =
                    logconcave::dominance_audit(&cnd, &noise_spec.noise, &[], &[], None)?;
                Ok(report_outcome(&report, json, vec![]))
            } else {
                let f = spec.tradeoff()?;
                let dcnd = unique_sens1(&f)?;
                let rival = match &noise_spec.noise {
                    logconcave::RivalNoise::Pmf { pmf, .. } => pmf.clone(),
                    _ => {
                        return Err(Error::InvalidDistribution(
                            "discrete dominance audits need pmf noise; \
                             pass --family for continuous rivals"
                                .into(),
                        ))
                    }
                };
                let radius = rival.lo().abs().max(rival.hi().abs()).max(2);
                let report = crate::discrete::dominance_audit_discrete(
                    &dcnd,
                    &rival,
                    -radius..=radius,
                    radius as u32,
                    None,
                )?;
                Ok(report_outcome(&report, json, vec![]))
            }
        }
    }
}

fn parse_tradeoffspec_family(json: &str) -> Result<crate::tradeoff::TradeoffFamily> {
    match parse_tradeoff_spec(json)? {
        TradeoffSpec::Family { base, .. } => Ok(base.family()),
        _ => Err(Error::param(
            "spec",
            "--family requires a {\"kind\":\"family\",...} spec",
        )),
    }
}

fn figures_cmd(which: FigureId, out: &Path) -> Result<CommandResult> {
    std::fs::create_dir_all(out)?;
    let files = match which {
        FigureId::Fig2 => fig2(out)?,
        FigureId::Fig3 => fig3(out)?,
        FigureId::Fig4 => fig4(out)?,
        FigureId::Fig5 => fig5(out)?,
    };
    let mut summary = String::new();
    for f in &files {
        writeln!(summary, "wrote {}", f.display()).unwrap();
    }
    summary.pop();
    Ok(CommandResult::ok(summary, files))
}

/// Central-window probabilities of Tulap vs Laplace noise over an
/// epsilon grid, at radii 1/2 and 1/4.
fn fig2(out: &Path) -> Result<Vec<PathBuf>> {
    let mut rows = Vec::with_capacity(200);
    for i in 1..=200 {
        let eps = 6.0 * i as f64 / 200.0;
        let tulap_half = 1.0 - 2.0 * tulap_cdf(eps, -0.5)?;
        let laplace_half = 1.0 - (-eps / 2.0).exp();
        let tulap_quarter = 1.0 - 2.0 * tulap_cdf(eps, -0.25)?;
        let laplace_quarter = 1.0 - (-eps / 4.0).exp();
        rows.push(vec![
            eps,
            tulap_half,
            laplace_half,
            tulap_quarter,
            laplace_quarter,
        ]);
    }
    let path = out.join("fig2.csv");
    write_csv(
        &path,
        "eps,tulap_half,laplace_half,tulap_quarter,laplace_quarter",
        &rows,
    )?;
    Ok(vec![path])
}

/// The 1-GDP curve against the shift-1 tradeoffs of the discrete
/// Gaussian and of the discrete CND for 1-GDP.
fn fig3(out: &Path) -> Result<Vec<PathBuf>> {
    let g1 = TradeoffFunction::gdp(1.0)?;
    let mut rows = Vec::with_capacity(501);
    for i in 0..=500 {
        let a = i as f64 / 500.0;
        rows.push(vec![a, g1.eval(a)]);
    }
    let gdp_path = out.join("fig3_gdp.csv");
    write_csv(&gdp_path, "alpha,beta", &rows)?;

    let dgauss = named_distribution(&NamedDistribution::DiscreteGaussian { sigma: 1.0 })?;
    let curve = roc_discrete(&dgauss, &dgauss.shift(1))?;
    let dg_path = out.join("fig3_discrete_gaussian.csv");
    let dg_rows: Vec<Vec<f64>> = curve.vertices().iter().map(|&(a, b)| vec![a, b]).collect();
    write_csv(&dg_path, "alpha,beta", &dg_rows)?;

    let dcnd = unique_sens1(&g1)?;
    let curve = roc_discrete(dcnd.pmf(), &dcnd.pmf().shift(1))?;
    let cnd_path = out.join("fig3_discrete_cnd.csv");
    let cnd_rows: Vec<Vec<f64>> = curve.vertices().iter().map(|&(a, b)| vec![a, b]).collect();
    write_csv(&cnd_path, "alpha,beta", &cnd_rows)?;

    Ok(vec![gdp_path, dg_path, cnd_path])
}

/// The Cauchy tradeoff curve with its pure-DP envelopes.
fn fig4(out: &Path) -> Result<Vec<PathBuf>> {
    let ct = cauchy_tradeoff(1.0)?;
    let lower = TradeoffFunction::eps_delta(ct.eps_l, 0.0)?;
    let upper = TradeoffFunction::eps_delta(ct.eps_u, 0.0)?;
    let mut rows = Vec::with_capacity(501);
    for i in 0..=500 {
        let a = i as f64 / 500.0;
        rows.push(vec![a, ct.curve.eval(a), lower.eval(a), upper.eval(a)]);
    }
    let path = out.join("fig4.csv");
    write_csv(&path, "alpha,c1,f_eps_l,f_eps_u", &rows)?;
    Ok(vec![path])
}

/// Staircase pmf of the (1, 0.05)-DP discrete CND at sensitivity 6.
fn fig5(out: &Path) -> Result<Vec<PathBuf>> {
    let f = TradeoffFunction::eps_delta(1.0, 0.05)?;
    let dcnd = round_cnd(&ContinuousCnd::construct(f)?, 6)?;
    let pmf = dcnd.pmf();
    let mut rows = Vec::new();
    for x in pmf.lo()..=pmf.hi() {
        rows.push(vec![x as f64, pmf.mass_at(x)]);
    }
    let path = out.join("fig5.csv");
    write_csv(&path, "x,pmf", &rows)?;
    Ok(vec![path])
}
