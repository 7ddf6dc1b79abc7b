use std::path::PathBuf;
use std::process::ExitCode;

use charvar_cli::{
    cmd_compile, cmd_count, cmd_distinguish, cmd_fill, cmd_oracle_check, cmd_parse, cmd_stabilize,
    CliError, CompileArgs, Emit, Engine, Payload, Report, Source, CEILING_ENV,
};
use charvar_core::acfc::{ConjSemantics, DEFAULT_GUARD};
use charvar_core::presentation::SlopeConvention;
use charvar_core::repvar::DEFAULT_BUDGET;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// SL(2) representation and character-variety census over finite fields.
///
/// INPUT is a presentation file, or `corpus:NAME` for a bundled example
/// (trivial, z, zmod2, zmod3, zmod4, zmod6, q8, free2, fig8).
#[derive(Parser)]
#[command(name = "charvar", version)]
struct Cli {
    /// Print the machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct EngineArgs {
    /// Maximum tuples scanned per field.
    #[arg(long, env = CEILING_ENV, default_value_t = DEFAULT_BUDGET)]
    ceiling: u64,
    /// Scan every first generator instead of class representatives.
    #[arg(long)]
    no_prune: bool,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl From<EngineArgs> for Engine {
    fn from(a: EngineArgs) -> Engine {
        Engine { ceiling: a.ceiling, prune: !a.no_prune, workers: a.workers.max(1) }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    /// Kill meridian^q * longitude^p.
    QmPl,
    /// Kill meridian^p * longitude^q.
    PmQl,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitKind {
    Sigma,
    Ideal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Semantics {
    Closure,
    Literal,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a presentation and print its abelianization.
    Parse { input: String },
    /// Dehn-fill along the peripheral pair.
    Fill {
        input: String,
        /// Slope p/q with gcd(p, q) = 1.
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
        #[arg(long, value_enum, default_value = "qm-pl")]
        slope_convention: Convention,
        /// Write the filled presentation here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Count absolutely irreducible characters over one field.
    Count {
        input: String,
        /// Field as p or p^k.
        #[arg(long)]
        field: String,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Count up the tower F_p, F_{p^2}, ..., F_{p^K}.
    Stabilize {
        input: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 2)]
        max_k: u32,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Emit the sentence Σ_{G,n} or the representation-variety ideal.
    Compile {
        input: String,
        #[arg(long, value_enum, default_value = "sigma")]
        emit: EmitKind,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// How CONJ is stated.
        #[arg(long, value_enum, default_value = "closure")]
        semantics: Semantics,
        /// Also evaluate the sentence by brute force over this field.
        #[arg(long)]
        eval: Option<String>,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u64,
    },
    /// Compare the fingerprints of two presentations.
    Distinguish {
        left: String,
        right: String,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        max_k: u32,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Compare pruned and naive counts on seeded random presentations.
    OracleCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        fields: Vec<String>,
        #[command(flatten)]
        engine: EngineArgs,
        /// Run with a deliberately broken pruned search.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Parse { input } => cmd_parse(&Source::load(&input)?),
        Command::Fill { input, slope, slope_convention, output } => {
            let convention = match slope_convention {
                Convention::QmPl => SlopeConvention::QmPl,
                Convention::PmQl => SlopeConvention::PmQl,
            };
            cmd_fill(&Source::load(&input)?, &slope, convention, output.as_deref())
        }
        Command::Count { input, field, engine } => cmd_count(&Source::load(&input)?, &field, &engine.into()),
        Command::Stabilize { input, prime, max_k, engine } => {
            cmd_stabilize(&Source::load(&input)?, prime, max_k, &engine.into())
        }
        Command::Compile { input, emit, n, semantics, eval, guard } => {
            let args = CompileArgs {
                emit: match emit {
                    EmitKind::Sigma => Emit::Sigma,
                    EmitKind::Ideal => Emit::Ideal,
                },
                n,
                semantics: match semantics {
                    Semantics::Closure => ConjSemantics::Closure,
                    Semantics::Literal => ConjSemantics::Literal,
                },
                eval_field: eval,
                guard,
            };
            cmd_compile(&Source::load(&input)?, &args)
        }
        Command::Distinguish { left, right, primes, max_k, engine } => {
            cmd_distinguish(&Source::load(&left)?, &Source::load(&right)?, &primes, max_k, &engine.into())
        }
        Command::OracleCheck { seed, cases, fields, engine, inject_fault } => {
            cmd_oracle_check(seed, cases, &fields, &engine.into(), inject_fault)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            match report.payload {
                Payload::Oracle { passed: false, .. } => ExitCode::from(3),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
