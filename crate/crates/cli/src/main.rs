//! Command-line front end. Exit codes: 0 pass, 3 violation or failed
//! scenario/fit, 1 usage or configuration error.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use divergence_lab::checks::{check_decomposable_binary, check_dpi, check_shannon_inequality, check_sufficiency};
use divergence_lab::divergence::SpecDocument;
use divergence_lab::family::{kl_type_from_h, write_family_table, HGenerator};
use divergence_lab::fitting::{fit_bregman_binary, fit_f_divergence, ConvexPiecewiseLinearFit};
use divergence_lab::verify::{render_report, run_all, run_scenario, ReportFormat, SCENARIOS};
use divergence_lab::{CheckReport, Distribution, Divergence, DivergenceSpec, ScalarFunction};

use config::{Format, Overrides, Settings};

const EXIT_FAIL: u8 = 3;
const EXIT_ERROR: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "divergence-lab", version, about = "Evaluate divergences and test their characterizing properties")]
struct Cli {
    /// JSON settings file; flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective settings and exit.
    #[arg(long, global = true)]
    show_config: bool,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Alphabet size.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Grid resolution for two-symbol checks.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Random trials.
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Output path (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate D(P; Q).
    Eval {
        /// Catalog name or path to a JSON spec document.
        #[arg(long)]
        divergence: String,
        /// Comma-separated probabilities.
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Search for violations of a property.
    Check {
        #[arg(value_enum)]
        property: CheckKind,
        /// Catalog name or spec path (all properties except `shannon`).
        #[arg(long)]
        divergence: Option<String>,
        /// Function for `shannon`, e.g. `log:-1,0` or `name:half_square_minus_x`.
        #[arg(long)]
        f: Option<String>,
    },
    /// Tabulate the KL-type family generated by h as CSV `x,G,f`.
    Generate {
        /// Nondecreasing h on (0, 1/2], e.g. `name:square` or `poly:0,0,1`.
        #[arg(long)]
        h: String,
        /// Table knots.
        #[arg(long)]
        samples: Option<usize>,
        /// Also write the generated spec document here.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Fit a binary divergence as an f-divergence or a Bregman divergence.
    Fit {
        #[arg(value_enum)]
        kind: FitTarget,
        #[arg(long)]
        divergence: String,
        #[arg(long)]
        sample_pairs: Option<usize>,
        #[arg(long)]
        knots: Option<usize>,
        /// Write the fitted `knot,value` CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run verification scenarios.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckKind {
    Dpi,
    Sufficiency,
    Decomposable,
    Shannon,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FitTarget {
    Fdiv,
    Bregman,
}

#[derive(Subcommand, Debug)]
enum VerifyTarget {
    /// Run one scenario by id.
    Scenario { id: String },
    /// Run every scenario.
    All,
    /// List scenario ids and claims.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(path) => Box::new(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_text(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    let mut out = output(path)?;
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn resolve(divergence: &str) -> anyhow::Result<DivergenceSpec> {
    DivergenceSpec::resolve(divergence).with_context(|| format!("resolving divergence `{divergence}`"))
}

/// Returns whether the command passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let (sample_pairs, knots, samples) = match &cli.command {
        Some(Command::Fit { sample_pairs, knots, .. }) => (*sample_pairs, *knots, None),
        Some(Command::Generate { samples, .. }) => (None, None, *samples),
        _ => (None, None, None),
    };
    let flags = Overrides {
        seed: cli.seed,
        n: cli.n,
        grid: cli.grid,
        trials: cli.trials,
        sample_pairs,
        knots,
        samples,
        format: cli.format,
    };
    let settings = Settings::load(cli.config.as_deref(), &flags)?;
    if cli.show_config {
        write_text(cli.out.as_deref(), &serde_json::to_string_pretty(&settings)?)?;
        return Ok(true);
    }
    let out = cli.out.as_deref();
    let Some(command) = cli.command else {
        bail!("no subcommand given (try --help)");
    };
    match command {
        Command::Eval { divergence, p, q } => {
            let d = resolve(&divergence)?;
            let p = Distribution::parse(&p).context("parsing --p")?;
            let q = Distribution::parse(&q).context("parsing --q")?;
            let value = d.evaluate(&p, &q)?;
            let text = match settings.format {
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "divergence": d.label(),
                    "p": p.probs(),
                    "q": q.probs(),
                    "value": value,
                }))?,
                Format::Markdown => format!("{}({:?}; {:?}) = {value:e}", d.label(), p.probs(), q.probs()),
            };
            write_text(out, &text)?;
            Ok(true)
        }
        Command::Check { property, divergence, f } => {
            let report = check(property, divergence.as_deref(), f.as_deref(), &settings)?;
            let text = match settings.format {
                Format::Json => report.to_json()?,
                Format::Markdown => report.summary(),
            };
            write_text(out, &text)?;
            Ok(!report.is_violation())
        }
        Command::Generate { h, spec, .. } => {
            let h = ScalarFunction::parse(&h).context("parsing --h")?;
            let generator = HGenerator::new(h, settings.samples)?;
            let mut sink = output(out)?;
            write_family_table(&generator, &mut sink)?;
            sink.flush()?;
            if let Some(path) = spec {
                let doc = SpecDocument::from_spec(&kl_type_from_h(&generator)?)?;
                write_text(Some(&path), &serde_json::to_string_pretty(&doc)?)?;
            }
            Ok(true)
        }
        Command::Fit { kind, divergence, csv, .. } => {
            let d = resolve(&divergence)?;
            let fit: ConvexPiecewiseLinearFit = match kind {
                FitTarget::Fdiv => fit_f_divergence(&d, settings.sample_pairs, settings.knots, settings.seed)?,
                FitTarget::Bregman => fit_bregman_binary(&d, settings.sample_pairs, settings.knots, settings.seed)?,
            };
            if let Some(path) = csv {
                fit.write_csv(File::create(&path).with_context(|| format!("creating {}", path.display()))?)?;
            }
            let text = match settings.format {
                Format::Json => fit.summary_json()?,
                Format::Markdown => format!(
                    "{:?} fit of {}: residual {:e}, threshold {:e}, {}",
                    fit.kind,
                    fit.subject,
                    fit.residual,
                    fit.threshold,
                    if fit.passed { "passed" } else { "not representable at this threshold" }
                ),
            };
            write_text(out, &text)?;
            Ok(fit.passed)
        }
        Command::Verify { target } => {
            let results = match target {
                VerifyTarget::Scenario { id } => vec![run_scenario(&id, settings.seed)?],
                VerifyTarget::All => run_all(settings.seed),
                VerifyTarget::List => {
                    let text: String = SCENARIOS.iter().map(|s| format!("{}\t{}\n", s.id, s.claim)).collect();
                    write_text(out, &text)?;
                    return Ok(true);
                }
            };
            let format = match settings.format {
                Format::Json => ReportFormat::Json,
                Format::Markdown => ReportFormat::Markdown,
            };
            write_text(out, &render_report(&results, format)?)?;
            for r in &results {
                eprintln!("{}: {:?} ({:.2}s)", r.scenario_id, r.status, r.runtime);
            }
            Ok(results.iter().all(|r| r.passed()))
        }
    }
}

fn check(property: CheckKind, divergence: Option<&str>, f: Option<&str>, s: &Settings) -> anyhow::Result<CheckReport> {
    if let CheckKind::Shannon = property {
        let Some(f) = f else { bail!("`check shannon` needs --f") };
        let f = ScalarFunction::parse(f).context("parsing --f")?;
        return Ok(check_shannon_inequality(&f, s.n, s.trials, s.seed)?);
    }
    let Some(divergence) = divergence else { bail!("this check needs --divergence") };
    let d = resolve(divergence)?;
    Ok(match property {
        CheckKind::Dpi => check_dpi(&d, s.n, s.grid, s.trials, s.seed)?,
        CheckKind::Sufficiency => check_sufficiency(&d, s.n, s.trials, s.seed)?,
        CheckKind::Decomposable => check_decomposable_binary(&d, s.grid)?,
        CheckKind::Shannon => unreachable!("handled above"),
    })
}
