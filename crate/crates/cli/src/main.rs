//! Command-line front end: parse algebra and presentation files, dispatch
//! the analyses and emit deterministic text or JSON reports.
//!
//! Exit codes: 0 success, 2 parse/usage error, 3 precondition failure,
//! 4 cap exceeded, 5 internal invariant breach.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ncdc_core::Error;

mod commands;
mod expr;
mod fixtures;
mod formats;
mod reports;

use commands::Session;
use reports::emit;

#[derive(Parser)]
#[command(
    name = "ncdc",
    about = "Exact derivation-based differential calculus for finite-dimensional algebras",
    version
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for report assembly (output is identical for any count).
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Maximal Hochschild degree.
    #[arg(long, global = true, default_value_t = 3)]
    hochschild_cap: usize,
    /// Maximal form degree.
    #[arg(long, global = true, default_value_t = 3)]
    form_cap: usize,
    /// Rewriting step cap.
    #[arg(long, global = true, default_value_t = 10_000)]
    step_cap: usize,
    /// Irreducible-word cap for finite quotients.
    #[arg(long, global = true, default_value_t = 4096)]
    word_cap: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a structure-constant algebra file.
    Validate {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Center of the algebra.
    Center {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Derivations, inner derivations and the outer quotient.
    Der {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Hochschild cohomology of the regular bimodule in one degree.
    Hochschild {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        degree: usize,
        /// ordinary | relative | normalized | constrained
        #[arg(long, default_value = "ordinary")]
        variant: String,
        /// Basis of the subalgebra S for the relative variants (default: the center).
        #[arg(long)]
        subalgebra_basis: Option<String>,
        /// Generators of the ideal C for the constrained variant.
        #[arg(long)]
        ideal_gens: Option<String>,
    },
    /// Submanifold predicate for the quotient by the generated ideal.
    Submanifold {
        #[arg(long)]
        algebra: PathBuf,
        /// Comma-separated element expressions generating the ideal.
        #[arg(long)]
        ideal_gens: String,
        /// Also run the cohomology sequence check.
        #[arg(long)]
        seccohom: bool,
        /// Also compute the tangent space (requires a maximal ideal).
        #[arg(long)]
        tangent: bool,
    },
    /// Quotient manifold predicate for a subalgebra.
    QuotientManifold {
        #[arg(long)]
        algebra: PathBuf,
        /// Comma-separated basis expressions, or @center.
        #[arg(long)]
        subalgebra_basis: String,
        /// Relaxed mode: Der(B) is declared to be h/g-hat.
        #[arg(long)]
        relaxed: bool,
        /// Compare basic forms with forms of B up to this degree.
        #[arg(long)]
        isom_cap: Option<usize>,
    },
    /// Dimensions of generated and full multilinear forms per degree.
    Forms {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Synthesize a splitting and report the induced connection.
    Connection {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        subalgebra_basis: String,
    },
    /// Rewriting in finitely presented free algebras.
    Freealg {
        #[command(subcommand)]
        sub: FreealgCmd,
    },
    /// validate + center + der + requested predicates in one report.
    ReportAll {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        ideal_gens: Option<String>,
        #[arg(long)]
        subalgebra_basis: Option<String>,
    },
    /// Write the bundled example inputs into a directory.
    Fixtures {
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum FreealgCmd {
    /// Normal form of a polynomial.
    Nf {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Two-sided ideal membership (requires bounded confluence).
    Member {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        poly: String,
        /// Confluence degree bound (default: covers the input degree).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Extract the finite-dimensional quotient, optionally emitting an
    /// algebra file.
    Quotient {
        #[arg(long)]
        pres: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        bound: Option<usize>,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::CapExceeded { .. } | Error::StepCapExceeded(_) | Error::QuotientNotFinite(_) => 4,
        Error::Internal(_) => 5,
        _ => 3,
    }
}

fn run(cli: &Cli) -> ncdc_core::Result<()> {
    let session = Session {
        hochschild_cap: cli.hochschild_cap,
        form_cap: cli.form_cap,
        step_cap: cli.step_cap,
        word_cap: cli.word_cap,
    };
    session.validate()?;
    let name_of = |p: &PathBuf| -> String {
        p.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| p.display().to_string())
    };
    match &cli.cmd {
        Command::Validate { algebra } => {
            let alg = formats::read_algebra(algebra)?;
            emit(
                &commands::validate_report(&name_of(algebra), &alg),
                cli.json,
            );
        }
        Command::Center { algebra } => {
            let alg = formats::read_algebra(algebra)?;
            emit(&commands::center_report(&alg), cli.json);
        }
        Command::Der { algebra } => {
            let alg = formats::read_algebra(algebra)?;
            emit(&commands::der_report(&alg), cli.json);
        }
        Command::Hochschild {
            algebra,
            degree,
            variant,
            subalgebra_basis,
            ideal_gens,
        } => {
            let alg = formats::read_algebra(algebra)?;
            let report = commands::hochschild_report(
                &session,
                &alg,
                *degree,
                variant,
                subalgebra_basis.as_deref(),
                ideal_gens.as_deref(),
            )?;
            emit(&report, cli.json);
        }
        Command::Submanifold {
            algebra,
            ideal_gens,
            seccohom,
            tangent,
        } => {
            let alg = formats::read_algebra(algebra)?;
            let report = commands::submanifold_report(&alg, ideal_gens, *seccohom, *tangent)?;
            emit(&report, cli.json);
        }
        Command::QuotientManifold {
            algebra,
            subalgebra_basis,
            relaxed,
            isom_cap,
        } => {
            let alg = formats::read_algebra(algebra)?;
            let report = commands::quotient_manifold_report(
                &session,
                &alg,
                subalgebra_basis,
                *relaxed,
                *isom_cap,
            )?;
            emit(&report, cli.json);
        }
        Command::Forms { algebra, cap } => {
            let alg = formats::read_algebra(algebra)?;
            emit(&commands::forms_report(&session, &alg, *cap)?, cli.json);
        }
        Command::Connection {
            algebra,
            subalgebra_basis,
        } => {
            let alg = formats::read_algebra(algebra)?;
            emit(
                &commands::connection_report(&alg, subalgebra_basis)?,
                cli.json,
            );
        }
        Command::Freealg { sub } => match sub {
            FreealgCmd::Nf { pres, poly } => {
                let p = commands::load_presentation(pres)?;
                emit(&commands::freealg_nf_report(&session, &p, poly)?, cli.json);
            }
            FreealgCmd::Member { pres, poly, bound } => {
                let p = commands::load_presentation(pres)?;
                emit(
                    &commands::freealg_member_report(&session, &p, poly, *bound)?,
                    cli.json,
                );
            }
            FreealgCmd::Quotient { pres, out, bound } => {
                let p = commands::load_presentation(pres)?;
                emit(
                    &commands::freealg_quotient_report(&session, &p, out.as_deref(), *bound)?,
                    cli.json,
                );
            }
        },
        Command::ReportAll {
            algebra,
            ideal_gens,
            subalgebra_basis,
        } => {
            let alg = formats::read_algebra(algebra)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.workers.max(1))
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {}", e)))?;
            let report = commands::report_all(
                &session,
                &name_of(algebra),
                &alg,
                ideal_gens.as_deref(),
                subalgebra_basis.as_deref(),
                &pool,
            )?;
            emit(&report, cli.json);
        }
        Command::Fixtures { out_dir } => {
            let written = fixtures::write_fixtures(out_dir)?;
            emit(&reports::FixturesReport { written }, cli.json);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
