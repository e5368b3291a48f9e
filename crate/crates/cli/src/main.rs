//! `conesphere`: classify, reduce and measure points of the character
//! variety from the command line.
//!
//! Words act rightmost-first: `Ia Ib` applied to `p` is `Ia(Ib(p))`.
//! Exit status is 0 on success, 1 on a domain error or a failed
//! verification, 2 on a usage error.

mod args;
mod commands;
mod config;
mod emit;
mod numfmt;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use conesphere::growth::FeMode;
use conesphere::mcg::Involution;
use conesphere::verify::Suite;

use commands::{Context, TreeArgs};
use config::{OutputFormat, RunConfig, CONFIG_ENV};
use emit::{error_document, Document};

#[derive(Debug, Parser)]
#[command(
    name = "conesphere",
    version,
    about = "Character variety of the four-holed sphere with a cone point"
)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the document here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Seed for sampling commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Disable the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InvolutionArg {
    Ia,
    Ib,
    Ic,
}

impl From<InvolutionArg> for Involution {
    fn from(i: InvolutionArg) -> Self {
        match i {
            InvolutionArg::Ia => Involution::Ia,
            InvolutionArg::Ib => Involution::Ib,
            InvolutionArg::Ic => Involution::Ic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Normalized,
    RootSum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AutoArg {
    Identity,
    PhiAlpha,
    PhiBeta,
    PhiGamma,
}

impl AutoArg {
    fn name(self) -> &'static str {
        match self {
            AutoArg::Identity => "identity",
            AutoArg::PhiAlpha => "phi_alpha",
            AutoArg::PhiBeta => "phi_beta",
            AutoArg::PhiGamma => "phi_gamma",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Mobius,
    Charvar,
    Mcg,
    Growth,
    Volume,
    Acceptance,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Mobius => Suite::Mobius,
            SuiteArg::Charvar => Suite::Charvar,
            SuiteArg::Mcg => Suite::Mcg,
            SuiteArg::Growth => Suite::Growth,
            SuiteArg::Volume => Suite::Volume,
            SuiteArg::Acceptance => Suite::Acceptance,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Level, boundary type, component and inequality report of a triple.
    Classify {
        #[arg(long, value_parser = args::triple, allow_hyphen_values = true)]
        triple: [f64; 3],
    },
    /// Greedy reduction into the closure of the fundamental domain.
    Reduce {
        #[arg(long, value_parser = args::triple, allow_hyphen_values = true)]
        triple: [f64; 3],
    },
    /// Action of a mapping class on the coordinates.
    Induced {
        #[arg(long = "auto", value_enum)]
        auto: AutoArg,
        #[arg(long, value_parser = args::triple, allow_hyphen_values = true)]
        triple: [f64; 3],
    },
    /// Orbit tree, growth check and optional census of regions with f <= L.
    Tree {
        #[arg(long, value_parser = args::triple, allow_hyphen_values = true)]
        root: [f64; 3],
        #[arg(long)]
        depth: usize,
        /// Census bound L on f = log(value).
        #[arg(long, value_parser = args::number)]
        census: Option<f64>,
        #[arg(long, value_enum, default_value = "ia")]
        start: InvolutionArg,
        #[arg(long, value_enum, default_value = "normalized")]
        mode: ModeArg,
    },
    /// Weil-Petersson volume of the fundamental domain on a level set.
    Volume {
        #[arg(long, value_parser = args::number, allow_hyphen_values = true, required_unless_present = "table")]
        kappa: Option<f64>,
        #[arg(long, value_parser = args::number_list, allow_hyphen_values = true, conflicts_with = "kappa")]
        table: Option<args::NumberList>,
    },
    /// Fenchel-Nielsen coordinates and the Darboux comparison at (a, b).
    Fncheck {
        #[arg(long, value_parser = args::pair, allow_hyphen_values = true)]
        point: [f64; 2],
        #[arg(long, value_parser = args::number, default_value = "1e-5")]
        step: f64,
    },
    /// Fundamental polygon certificate for a cone-point triple.
    Polygon {
        #[arg(long, value_parser = args::triple, allow_hyphen_values = true)]
        triple: [f64; 3],
    },
    /// Run property suites; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.output_format = f;
    }
    if let Some(o) = &cli.output {
        cfg.output_path = Some(o.clone());
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.sequential |= cli.sequential;
    Ok(cfg)
}

/// The document and whether the run counts as a success.
fn dispatch(ctx: &Context, command: Command) -> (Document, bool) {
    let result = match command {
        Command::Classify { triple } => commands::classify(ctx, triple),
        Command::Reduce { triple } => commands::reduce(ctx, triple),
        Command::Induced { auto, triple } => commands::induced(ctx, auto.name(), triple),
        Command::Tree {
            root,
            depth,
            census,
            start,
            mode,
        } => commands::tree(
            ctx,
            &TreeArgs {
                root,
                depth,
                census,
                start: start.into(),
                mode: match mode {
                    ModeArg::Normalized => FeMode::Normalized,
                    ModeArg::RootSum => FeMode::RootSum,
                },
            },
        ),
        Command::Volume { kappa, table } => {
            commands::volume(ctx, kappa, table.as_ref().map(|t| t.0.as_slice()))
        }
        Command::Fncheck { point, step } => commands::fncheck(point, step),
        Command::Polygon { triple } => commands::polygon(ctx, triple),
        Command::Verify { suite } => return commands::verify(ctx, suite.into()),
    };
    match result {
        Ok(doc) => (doc, true),
        Err(e) => (error_document(e.code(), &e.to_string()), false),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve_config(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let format = cfg.output_format;
    let output_path = cfg.output_path.clone();
    let ctx = Context { cfg };
    let (doc, ok) = dispatch(&ctx, cli.command);
    // errors are always JSON
    let text = if doc.body.get("error").is_some() {
        emit::to_json(&doc.body)
    } else {
        doc.render(format)
    };
    let written = match output_path {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
