use clap::{Parser, Subcommand, ValueEnum};
use mwtoric::report::{
    parse_fan, render_fan, render_text, report_chow, report_complex, report_homology,
    report_motive, report_rows, report_shelling, report_surface, report_validate, selftest,
    ReportError,
};
use serde_json::Value;
use std::io::Read;
use std::process::ExitCode;

/// Exact cellular decompositions, Chow bases and Chow-Witt tables for smooth
/// toric fans.
#[derive(Parser)]
#[command(name = "mwtoric", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pathway {
    Auto,
    Lambda,
    Canonical,
    MomentAngle,
}

impl Pathway {
    fn as_str(self) -> &'static str {
        match self {
            Pathway::Auto => "auto",
            Pathway::Lambda => "lambda",
            Pathway::Canonical => "canonical",
            Pathway::MomentAngle => "moment-angle",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check smoothness, surjectivity, purity and completeness.
    Validate(FanArgs),
    /// Report the restriction data and search for a shelling.
    Shelling(FanArgs),
    /// List the 2^n row sets and the per-facet assignment.
    Rows(FanArgs),
    /// Print a cellular chain complex with its differential entries.
    Complex {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long, value_enum, default_value = "auto")]
        pathway: Pathway,
    },
    /// Decompose and print the homology sheaves.
    Homology(FanArgs),
    /// Print motivic, MW-motivic, eta-inverted and rational decompositions.
    Motive(FanArgs),
    /// Print the Chow group basis and ranks.
    Chow(FanArgs),
    /// Complete-surface report: reduced complex, Chow-Witt table, motives.
    Surface(FanArgs),
    /// Emit a builtin fan file (pipe into the other commands).
    Builtin {
        /// projective_space, hirzebruch, surface_from_rays,
        /// exotic_nonshellable, exotic_nonpure
        name: String,
        /// Dimension n, Hirzebruch parameter a, or a ray list "x,y;x,y;...".
        param: Option<String>,
    },
    /// Run the embedded golden corpus and oracle suite.
    Selftest {
        /// Keep only cases whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
    },
}

#[derive(clap::Args)]
struct FanArgs {
    /// Fan file path; "-" or absent reads stdin.
    file: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn read_input(path: &Option<String>) -> Result<String, String> {
    match path.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            Ok(buf)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("cannot read {p}: {e}")),
    }
}

fn emit(value: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Text => print!("{}", render_text(value)),
    }
}

fn run_fan_verb(
    args: &FanArgs,
    verb: impl Fn(&mwtoric::Fan) -> Result<Value, ReportError>,
) -> ExitCode {
    let doc = match read_input(&args.file) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let fan = match parse_fan(&doc) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    match verb(&fan) {
        Ok(value) => {
            emit(&value, args.format);
            ExitCode::SUCCESS
        }
        Err(ReportError::Validation(msg, value)) => {
            if !value.is_null() {
                emit(&value, args.format);
            }
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(ReportError::Input(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Validate(args) => run_fan_verb(args, report_validate),
        Command::Shelling(args) => run_fan_verb(args, report_shelling),
        Command::Rows(args) => run_fan_verb(args, report_rows),
        Command::Complex { fan, pathway } => {
            let p = pathway.as_str();
            run_fan_verb(fan, move |f| report_complex(f, p))
        }
        Command::Homology(args) => run_fan_verb(args, report_homology),
        Command::Motive(args) => run_fan_verb(args, report_motive),
        Command::Chow(args) => run_fan_verb(args, report_chow),
        Command::Surface(args) => run_fan_verb(args, report_surface),
        Command::Builtin { name, param } => match mwtoric::builtin(name, param.as_deref()) {
            Ok(fan) => {
                let file = render_fan(&fan);
                println!("{}", serde_json::to_string_pretty(&file).expect("serializable"));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(2)
            }
        },
        Command::Selftest { filter } => {
            let results = selftest(filter.as_deref());
            let mut failed = 0usize;
            for case in &results {
                println!("{} {}", if case.passed { "PASS" } else { "FAIL" }, case.name);
                if !case.passed {
                    failed += 1;
                }
            }
            println!("{} cases, {} failed", results.len(), failed);
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
