use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tight_cli::commands::{run, CliError, Command, Options};
use tight_cli::jobspec::JobSpec;

/// Tight closures of powers of parameter ideals in Fermat hypersurfaces.
///
/// Exit status: 0 when every check passes, 1 when a mathematical check
/// fails, 2 on bad input.
#[derive(Parser)]
#[command(name = "tightcl", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Spec file with a [ring] table and [ideal.NAME] tables
    spec: PathBuf,
    /// Which ideal to use; optional when the spec defines exactly one
    #[arg(long)]
    ideal: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Apply the closed form outside its hypotheses, marked conjectural
    #[arg(long)]
    force: bool,
    /// Reserved; every computation is deterministic
    #[arg(long)]
    seed: Option<u64>,
    /// Record wall-clock time in the report
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Echo the ring and ideals without computing anything
    Describe {
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form tight closure of J^n
    TightClosure {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Tight Hilbert function n ↦ ℓ(R/(J^n)*)
    Hilbert {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_n: Option<u32>,
    },
    /// Tight Hilbert coefficients, fitted and as Huckaba-Marley sums
    Coeffs {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// J ∩ (J^(n+1))* = J(J^n)* for n = 0..max-n
    VvCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_n: Option<u32>,
    },
    /// (a_i^2) ∩ (J^n)* = (a_i^2)(J^(n-2))* for n = 3..max-n
    BuchsbaumCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_n: Option<u32>,
    },
    /// J^n ∩ (J^(n+1))* = J^n J* for n = 0..max-n
    ItohCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_n: Option<u32>,
    },
    /// Frobenius certificates for an element against J^n
    Certify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long)]
        element: String,
        #[arg(long)]
        q_max: Option<u64>,
        /// Test element overriding x0^(r-1)
        #[arg(long)]
        test_element: Option<String>,
    },
    /// Degree-t slice of (J^n)* by linear algebra over F_p
    Slice {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        q_max: Option<u64>,
        #[arg(long)]
        test_element: Option<String>,
    },
    /// Reduction numbers r_J(m^e), r*(J) and the Rees algebra verdict
    Reduction {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Everything above with defaults
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long)]
        q_max: Option<u64>,
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        test_element: Option<String>,
    },
}

fn split(cmd: Cmd) -> (Common, Command, Option<u32>, Option<String>) {
    match cmd {
        Cmd::Describe { common } => (common, Command::Describe, None, None),
        Cmd::TightClosure { common, power } => {
            (common, Command::TightClosure { power }, None, None)
        }
        Cmd::Hilbert { common, max_n } => (common, Command::Hilbert { max_n }, None, None),
        Cmd::Coeffs { common, cap } => (common, Command::Coeffs, cap, None),
        Cmd::VvCheck { common, max_n } => (common, Command::VvCheck { max_n }, None, None),
        Cmd::BuchsbaumCheck { common, max_n } => {
            (common, Command::BuchsbaumCheck { max_n }, None, None)
        }
        Cmd::ItohCheck { common, max_n } => (common, Command::ItohCheck { max_n }, None, None),
        Cmd::Certify {
            common,
            power,
            element,
            q_max,
            test_element,
        } => (
            common,
            Command::Certify {
                power,
                element,
                q_max,
            },
            None,
            test_element,
        ),
        Cmd::Slice {
            common,
            power,
            degree,
            q_max,
            test_element,
        } => (
            common,
            Command::Slice {
                power,
                degree,
                q_max,
            },
            None,
            test_element,
        ),
        Cmd::Reduction { common, cap } => (common, Command::Reduction, cap, None),
        Cmd::Report {
            common,
            max_n,
            q_max,
            cap,
            test_element,
        } => (common, Command::Report { max_n, q_max }, cap, test_element),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, command, cap, test_element) = split(cli.command);
    let opts = Options {
        ideal: common.ideal,
        force: common.force,
        test_element,
        cap,
        timing: common.timing,
    };
    let result = std::fs::read_to_string(&common.spec)
        .map_err(|e| CliError::Input(format!("{}: {e}", common.spec.display())))
        .and_then(|text| {
            JobSpec::parse(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", common.spec.display())))
        })
        .and_then(|spec| run(&spec, &command, &opts));
    match result {
        Ok(report) => {
            match common.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            let failures = report.failures();
            for f in &failures {
                eprintln!("check failed: {f}");
            }
            ExitCode::from(if failures.is_empty() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
