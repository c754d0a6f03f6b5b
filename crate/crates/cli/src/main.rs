mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tenfold_core::classify::{classify_set, Cartan, ClassInstance, ClassifyError, SymmetrySet, TABLE};
use tenfold_core::clifford::{witness_iso_cl1, witness_iso_cl2};
use tenfold_core::conformance;

use input::{InputDocument, InputError};

const EXIT_OK: u8 = 0;
const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;

#[derive(Parser)]
#[command(name = "tenfold", version, about = "Tenfold-way classification of free-fermion Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Quick,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ten symmetry classes with their K-groups and signs.
    Table,
    /// Look up the class of a symmetry set.
    Classify {
        /// Comma-separated subset of TRS, SRS, Q, PHS (or "none").
        #[arg(long, value_delimiter = ',')]
        symmetries: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Classify a Hamiltonian file and compute its invariant.
    Analyze {
        file: PathBuf,
        /// Seed for the perturbation check (defaults to the file's seed, then 0).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Verify Cl_{r,s} ⊗̂ Cl_{r',s'} ≅ Cl_{r+r',s+s'}, or ℍ ⊗ Cl_{1,1} ≅ Cl_{0,4}.
    CliffordIso {
        #[arg(required_unless_present = "quaternionic", num_args = 4, value_names = ["R", "S", "R2", "S2"])]
        signature: Vec<usize>,
        #[arg(long, conflicts_with = "signature")]
        quaternionic: bool,
    },
    /// Run the built-in checks.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
        #[arg(long, default_value_t = 20240917)]
        seed: u64,
        #[arg(long, hide = true)]
        corrupt_table: bool,
    },
    /// Print a random input document for a class.
    #[command(hide = true)]
    Example {
        class: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn classify_error_code(e: &ClassifyError) -> u8 {
    match e {
        ClassifyError::Inadmissible(_) | ClassifyError::UnknownClass(_) => EXIT_USAGE,
        _ => EXIT_VALIDATION,
    }
}

fn cmd_classify(names: &[String], json: bool) -> ExitCode {
    let names: Vec<&str> = names
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty() && !s.eq_ignore_ascii_case("none"))
        .collect();
    let set = match SymmetrySet::from_names(&names) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    match classify_set(set) {
        Ok(label) => {
            if json {
                let r = report::LabelReport::from(&label);
                println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
            } else {
                println!("{} / {} (group {}, s = {})", label.cartan, label.k_theory(), label.group(), label.s);
            }
            ExitCode::from(EXIT_OK)
        }
        Err(e) => fail(classify_error_code(&e), e),
    }
}

fn cmd_analyze(path: &PathBuf, seed: Option<u64>, json: bool) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_USAGE, format!("{}: {e}", path.display())),
    };
    let input_code = |e: &InputError| match e {
        InputError::Syntax { .. } | InputError::Shape(_) => EXIT_PARSE,
        InputError::Structural(_) => EXIT_VALIDATION,
    };
    let doc = match input::parse(&text) {
        Ok(d) => d,
        Err(e) => return fail(input_code(&e), e),
    };
    let (b, ops) = match doc.hamiltonian().and_then(|b| Ok((b, doc.operators()?))) {
        Ok(x) => x,
        Err(e) => return fail(input_code(&e), e),
    };
    let seed = seed.or(doc.seed).unwrap_or(0);
    match report::build_report(&b, &ops, seed) {
        Ok(r) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
            } else {
                print!("{}", report::render_report(&r));
            }
            ExitCode::from(EXIT_OK)
        }
        Err(e) => fail(classify_error_code(&e), e),
    }
}

fn cmd_clifford(signature: &[usize], quaternionic: bool) -> ExitCode {
    let res = if quaternionic {
        witness_iso_cl2()
    } else {
        witness_iso_cl1(signature[0], signature[1], signature[2], signature[3])
    };
    match res {
        Ok(w) => {
            println!("{w}");
            ExitCode::from(EXIT_OK)
        }
        Err(tenfold_core::clifford::CliffordError::TooLarge(n)) => {
            fail(EXIT_USAGE, format!("{n} generators exceed the supported maximum"))
        }
        Err(e) => fail(EXIT_VALIDATION, e),
    }
}

fn cmd_selftest(level: Level, seed: u64, corrupt: bool) -> ExitCode {
    let mut rows = TABLE;
    if corrupt {
        rows[2].index = (rows[2].index + 1) % 8;
    }
    let results = match level {
        Level::Quick => conformance::quick(&rows, seed),
        Level::Full => {
            let (results, stats) = conformance::full(&rows, seed);
            for (c, s) in &stats {
                println!(
                    "instances {c:<5} pairs {:>2}  equal {:>2} connected {:>2}  different {:>2} connected {}",
                    s.equal_pairs + s.different_pairs,
                    s.equal_pairs,
                    s.connected,
                    s.different_pairs,
                    s.unsound
                );
            }
            results
        }
    };
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        println!("{r}");
    }
    println!("{} of {} checks passed", results.len() - failed, results.len());
    ExitCode::from(if failed == 0 { EXIT_OK } else { EXIT_VALIDATION })
}

fn cmd_example(class: &str, seed: u64) -> ExitCode {
    let cartan: Cartan = match class.parse() {
        Ok(c) => c,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let inst = ClassInstance::new(cartan).expect("built-in instance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = match inst.sample(&mut rng) {
        Ok(b) => b,
        Err(e) => return fail(EXIT_VALIDATION, e),
    };
    let doc = InputDocument::example(&inst, &b, seed);
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    ExitCode::from(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Table => {
            print!("{}", report::render_table(&TABLE));
            ExitCode::from(EXIT_OK)
        }
        Command::Classify { symmetries, json } => cmd_classify(symmetries, *json),
        Command::Analyze { file, seed, json } => cmd_analyze(file, *seed, *json),
        Command::CliffordIso {
            signature,
            quaternionic,
        } => cmd_clifford(signature, *quaternionic),
        Command::Selftest {
            level,
            seed,
            corrupt_table,
        } => cmd_selftest(*level, *seed, *corrupt_table),
        Command::Example { class, seed } => cmd_example(class, *seed),
    }
}
