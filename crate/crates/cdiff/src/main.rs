use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use cdiff_tools::config::{
    AnalyzeArgs, Command, ConstructArgs, ExperimentArgs, Format, Kind, MonomialArgs, Probe, RunConfig, TermSpec,
    Theorem, VerifyArgs,
};
use cdiff_tools::RunError;
use clap::{Parser, Subcommand};

/// c-differential uniformity analysis over finite fields.
#[derive(Parser, Debug)]
#[command(name = "cdiff", version)]
struct Cli {
    /// JSON run configuration; flags given on the command line override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    parallelism: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest field order built by monomial sweeps.
    #[arg(long, global = true)]
    field_cap: Option<u64>,
    /// Allow generic c-DDT work above order 4096.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Exit with status 1 when a verification fails.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// c-differential uniformity of one function for every c in scope.
    Analyze {
        /// `p^n`, `p^n/c0,...,cn` or a prime power.
        #[arg(long)]
        field: String,
        #[arg(long)]
        function: String,
        /// `all` or `subfield:<k>`.
        #[arg(long)]
        scope: Option<String>,
        /// Print the full table for this c as CSV.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Build a member of one of the permutation or 2-to-1 families.
    Construct {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Subfield order.
        #[arg(long)]
        q: u64,
        /// Extension degree over the subfield.
        #[arg(long)]
        n: u32,
        /// Comma-separated modulus coefficients, constant term first.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[arg(long, value_enum, default_value = "f1")]
        kind: Kind,
        /// `g:s`, repeatable.
        #[arg(long = "term", value_parser = parse_term)]
        terms: Vec<TermSpec>,
        /// Build even when the hypotheses fail.
        #[arg(long)]
        no_validate: bool,
    },
    /// Exceptional c-uniformity analysis of x^d over extensions of F_{p^h}.
    Monomial {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 4)]
        rmax: u32,
    },
    /// Run the built-in verification suites.
    VerifyTheorems {
        /// Suite id, repeatable; all when omitted.
        #[arg(long = "suite")]
        suites: Vec<u32>,
    },
    /// Exploratory probes that report counts only.
    Experiment {
        #[arg(value_enum)]
        probe: Probe,
        #[arg(long)]
        field: String,
        #[arg(long)]
        function: Option<String>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        sub_degree: Option<u32>,
    },
}

fn parse_term(text: &str) -> Result<TermSpec, String> {
    let (g, s) = text.rsplit_once(':').ok_or("expected g:s")?;
    let s = s.trim().parse().map_err(|_| format!("bad exponent {s:?}"))?;
    Ok(TermSpec { g: g.to_string(), s })
}

fn command(cmd: Cmd) -> Command {
    match cmd {
        Cmd::Analyze { field, function, scope, matrix } => Command::Analyze(AnalyzeArgs { field, function, scope, matrix }),
        Cmd::Construct { theorem, q, n, modulus, phi, g, b, h, kind, terms, no_validate } => {
            Command::Construct(ConstructArgs { theorem, q, n, modulus, phi, g, b, h, kind, terms, validate: !no_validate })
        }
        Cmd::Monomial { p, h, d, c, rmax } => Command::Monomial(MonomialArgs { p, h, d, c, rmax }),
        Cmd::VerifyTheorems { suites } => Command::VerifyTheorems(VerifyArgs { suites }),
        Cmd::Experiment { probe, field, function, samples, sub_degree } => {
            Command::Experiment(ExperimentArgs { probe, field, function, samples, sub_degree })
        }
    }
}

fn resolve(cli: Cli) -> Result<RunConfig, RunError> {
    let mut config = match (&cli.config, cli.command) {
        (Some(path), cmd) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
            let mut config = RunConfig::from_json(&text)?;
            if let Some(cmd) = cmd {
                config.command = command(cmd);
            }
            config
        }
        (None, Some(cmd)) => RunConfig::new(command(cmd)),
        (None, None) => return Err(RunError::Config("a subcommand or --config is required".into())),
    };
    if let Some(f) = cli.format {
        config.format = f;
    }
    if let Some(p) = cli.parallelism {
        config.parallelism = p;
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(c) = cli.field_cap {
        config.field_cap = c;
    }
    config.allow_large |= cli.allow_large;
    config.strict |= cli.strict;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(cli).and_then(|config| Ok((cdiff_tools::run(&config)?, config.strict)));
    match result {
        Ok((output, strict)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(output.text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            if !output.verified {
                eprintln!("verification failed");
                if strict {
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
