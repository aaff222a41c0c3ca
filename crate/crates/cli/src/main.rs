mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Code, Report};

#[derive(Parser, Debug)]
#[command(name = "treelength", version, about = "Translation length functions of trees: compatibility, good pairs, refinements")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the certificate or tree produced by the command to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Budget as `W,A`: maximum witness word length, maximum anchor length.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub words: usize,
    pub anchors: usize,
}

fn parse_budget(s: &str) -> Result<Budget, String> {
    let (w, a) = s.split_once(',').ok_or("expected W,A")?;
    let p = |x: &str| -> Result<usize, String> {
        let n: usize = x.trim().parse().map_err(|e| format!("`{x}`: {e}"))?;
        if n == 0 {
            return Err("budgets must be positive".into());
        }
        Ok(n)
    };
    Ok(Budget {
        words: p(w)?,
        anchors: p(a)?,
    })
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Translation lengths of words.
    Length {
        tree: PathBuf,
        /// File with one word per line.
        words: Option<PathBuf>,
        /// Word given inline; repeatable.
        #[arg(short, long = "word")]
        word: Vec<String>,
    },
    /// Checks the length function axioms on all words up to the bound.
    Axioms {
        tree: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        len_bound: usize,
    },
    /// Compatibility of two trees: pair scan, then rectangle search.
    Compat {
        tree_a: PathBuf,
        tree_b: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        len_bound: usize,
        #[arg(long, default_value = "5,3", value_parser = parse_budget)]
        budget: Budget,
        /// Seed for the randomized subarc spot-check; never affects verdicts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// First good pair for one tree, or one good for two trees and their sum.
    GoodPair {
        tree: PathBuf,
        tree_b: Option<PathBuf>,
        #[arg(long, default_value_t = 4, value_parser = positive)]
        len_bound: usize,
    },
    /// Based lengths at the common point of the axes of a good pair.
    BasedLength {
        tree: PathBuf,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        words: Option<PathBuf>,
        #[arg(short, long = "word")]
        word: Vec<String>,
    },
    /// Builds the common refinement of two compatible trees on a finite sample.
    Refine {
        tree_a: PathBuf,
        tree_b: PathBuf,
        /// Word bound for the compatibility pre-check.
        #[arg(long, default_value_t = 3, value_parser = positive)]
        len_bound: usize,
        /// Word bound for the orbit sample.
        #[arg(long, default_value_t = 2, value_parser = positive)]
        sample_bound: usize,
        /// Word bound for the good pair search.
        #[arg(long, default_value_t = 4, value_parser = positive)]
        pair_bound: usize,
    },
    /// Re-derives a certificate from the tree files.
    Verify {
        certificate: PathBuf,
        #[arg(required = true)]
        trees: Vec<PathBuf>,
    },
}

fn run(cli: &Cli) -> Result<Report, treelength::Error> {
    match &cli.command {
        Command::Length { tree, words, word } => commands::length(tree, words.as_deref(), word),
        Command::Axioms { tree, len_bound } => commands::axioms(tree, *len_bound),
        Command::Compat {
            tree_a,
            tree_b,
            len_bound,
            budget,
            seed,
        } => commands::compat(tree_a, tree_b, *len_bound, *budget, *seed),
        Command::GoodPair {
            tree,
            tree_b,
            len_bound,
        } => commands::good_pair(tree, tree_b.as_deref(), *len_bound),
        Command::BasedLength {
            tree,
            g,
            h,
            words,
            word,
        } => commands::based_length(tree, g, h, words.as_deref(), word),
        Command::Refine {
            tree_a,
            tree_b,
            len_bound,
            sample_bound,
            pair_bound,
        } => commands::refine(tree_a, tree_b, *len_bound, *sample_bound, *pair_bound),
        Command::Verify { certificate, trees } => commands::verify(certificate, trees),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Code::InputError as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", serde_json::json!({ "error": e.to_string() })),
            }
            return ExitCode::from(Code::InputError as u8);
        }
    };
    match cli.format {
        Format::Text => {
            for line in &report.text {
                println!("{line}");
            }
        }
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report.json).expect("reports serialize")
        ),
    }
    if let (Some(path), Some(artifact)) = (&cli.out, &report.artifact) {
        if let Err(e) = std::fs::write(path, artifact) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(Code::InputError as u8);
        }
    }
    ExitCode::from(report.code as u8)
}
