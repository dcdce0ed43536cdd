use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzydy_core::engine::{ExploreOptions, DEFAULT_MAX_STATES};
use fuzzydy_core::protocols::registry::variant;
use fuzzydy_core::protocols::{build_model, default_leak, model_names, ProtocolConfig, ProtocolError};
use fuzzydy_core::reduct::{
    enumerate_e_reducts, extract_context, select_keep, FormalContext, ReductError, DEFAULT_LAMBDA,
};
use fuzzydy_core::report::{sweep, verify_named};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "fuzzydy", version, about = "Graded-intruder protocol model checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Explore a bundled model and report its verdict.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compute the exact attribute reducts of a model or CSV context.
    Reduct {
        #[arg(long, conflicts_with = "csv", required_unless_present = "csv")]
        model: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Binarization threshold for graded CSV cells.
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Verify one model at several precisions and grid steps.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        precisions: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        deltas: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// List the bundled models.
    List,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    precision: Option<u32>,
    /// Pick the leaky or safe variant of the named model.
    #[arg(long)]
    leak: Option<Switch>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    coarse_sigma: Option<f64>,
    #[arg(long)]
    fine_sigma: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    #[arg(long, default_value = "on")]
    symmetry: Switch,
    #[arg(long, default_value = "off")]
    pruned: Switch,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
}

struct Failure(u8, String);

impl From<ProtocolError> for Failure {
    fn from(e: ProtocolError) -> Self {
        let code = match &e {
            ProtocolError::UnknownModel(_) | ProtocolError::UnknownFamily(_) | ProtocolError::InvalidConfig(_) => {
                EXIT_USAGE
            }
            ProtocolError::Fuzzy(_) => EXIT_USAGE,
            ProtocolError::Reduct(_) => EXIT_DATA,
            ProtocolError::Engine(_) => EXIT_INTERNAL,
        };
        Failure(code, e.to_string())
    }
}

impl From<ReductError> for Failure {
    fn from(e: ReductError) -> Self {
        Failure(EXIT_DATA, e.to_string())
    }
}

impl RunArgs {
    fn model_name(&self) -> Result<String, Failure> {
        if default_leak(&self.model).is_none() {
            return Err(ProtocolError::UnknownModel(self.model.clone()).into());
        }
        match self.leak {
            None => Ok(self.model.clone()),
            Some(s) => variant(&self.model, s.on()).ok_or_else(|| {
                Failure(EXIT_USAGE, format!("model `{}` has no variant with leak {}", self.model, if s.on() { "on" } else { "off" }))
            }),
        }
    }

    fn config(&self) -> ProtocolConfig {
        let mut cfg = ProtocolConfig::default();
        if let Some(d) = self.delta {
            cfg.delta = d;
        }
        if let Some(p) = self.precision {
            cfg.precision = p;
        }
        if let Some(a) = self.alpha {
            cfg.alpha_threshold = a;
        }
        if let Some(s) = self.coarse_sigma {
            cfg.coarse_sigma = s;
        }
        if let Some(s) = self.fine_sigma {
            cfg.fine_sigma = s;
        }
        cfg
    }

    fn options(&self) -> Result<ExploreOptions, Failure> {
        let workers = ExploreOptions::workers_from_env().map_err(|e| Failure(EXIT_USAGE, e))?;
        Ok(ExploreOptions {
            max_states: self.max_states,
            symmetry: self.symmetry.on(),
            workers,
            ..ExploreOptions::default()
        })
    }
}

fn emit(out: &OutArgs, json: String, text: String) -> Result<(), Failure> {
    let body = match out.format {
        Format::Json => json + "\n",
        Format::Text => text,
    };
    match &out.out {
        None => print!("{body}"),
        Some(p) => std::fs::write(p, body).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", p.display())))?,
    }
    Ok(())
}

fn join(xs: &[String]) -> String {
    if xs.is_empty() {
        "(none)".into()
    } else {
        xs.join(", ")
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::List => {
            for name in model_names() {
                println!("{name}");
            }
            Ok(0)
        }
        Command::Verify { run, out } => {
            let name = run.model_name()?;
            let report = verify_named(&name, &run.config(), &run.options()?, run.pruned.on())?;
            emit(&out, report.to_json(), report.to_text())?;
            Ok(report.exit_code() as u8)
        }
        Command::Sweep {
            run,
            precisions,
            deltas,
            out,
        } => {
            let name = run.model_name()?;
            let report = sweep(&name, &run.config(), &precisions, &deltas, &run.options()?, run.pruned.on())
                .map_err(|e| match e {
                    ProtocolError::InvalidConfig(m) => Failure(EXIT_USAGE, m),
                    e => e.into(),
                })?;
            emit(&out, report.to_json(), report.to_text())?;
            Ok(0)
        }
        Command::Reduct {
            model,
            csv,
            lambda,
            out,
        } => {
            let (ctx, built) = match (&model, &csv) {
                (Some(name), _) => {
                    let m = build_model(name, &ProtocolConfig::default())?;
                    (extract_context(&m), Some(m))
                }
                (None, Some(path)) => (FormalContext::from_csv_path(path, lambda)?, None),
                (None, None) => unreachable!("clap requires a source"),
            };
            let report = enumerate_e_reducts(&ctx)?;
            let mut json = serde_json::to_value(&report).expect("report serializes");
            let obj = json.as_object_mut().expect("object");
            obj.insert("reduct_count".into(), report.reducts.len().into());
            obj.insert("objects".into(), ctx.objects().into());
            obj.insert("attributes".into(), ctx.attributes().into());
            let mut text = format!(
                "reducts: {}\ncore: {}\nredundant: {}\n",
                report.reducts.len(),
                join(&report.core),
                join(&report.redundant)
            );
            if let Some(m) = &built {
                let keep = select_keep(m)?;
                let pruned: Vec<String> = m
                    .live_vars()
                    .into_iter()
                    .filter(|v| !keep.contains(v))
                    .map(|v| m.vars[v.index()].name.clone())
                    .collect();
                text += &format!("pruned by --pruned on: {}\n", join(&pruned));
                obj.insert("model".into(), m.name.clone().into());
                obj.insert("pruned".into(), pruned.into());
            }
            emit(&out, serde_json::to_string_pretty(&json).expect("json"), text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("fuzzydy: {msg}");
            ExitCode::from(code)
        }
    }
}
