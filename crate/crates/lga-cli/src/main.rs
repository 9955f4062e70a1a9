//! `lga` — compile local grammars into failure-function matchers and apply
//! them to acyclic text automata.

mod commands;
mod error;
mod util;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::error::{report, CliError};

#[derive(Parser)]
#[command(name = "lga", version, about = "Local-grammar automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a grammar automaton (.fsa) into a matcher (.fsm3).
    Compile {
        /// Acyclic grammar automaton listing the forbidden/required factors.
        grammar: PathBuf,
        /// Output matcher file.
        #[arg(short, long, value_name = "OUT.fsm3")]
        output: PathBuf,
        /// Allow the wildcard label `<?>` in the grammar.
        #[arg(long)]
        wildcard: bool,
    },
    /// Apply a compiled matcher to a text automaton.
    Apply {
        /// Text automaton to prune.
        text: PathBuf,
        /// Compiled matcher.
        matcher: PathBuf,
        /// Keep only paths the matcher scans to completion (default: drop
        /// every path containing a compiled factor).
        #[arg(long)]
        positive: bool,
        /// Skip determinization+minimization of the result.
        #[arg(long)]
        no_minimize: bool,
        /// Output automaton file.
        #[arg(short, long, value_name = "OUT.fsa")]
        output: PathBuf,
        /// Also write application statistics as JSON.
        #[arg(long, value_name = "STATS.json")]
        stats: Option<PathBuf>,
    },
    /// Scan whitespace-tokenized lines and print match end positions.
    Scan {
        /// Compiled matcher.
        matcher: PathBuf,
        /// Input file (defaults to standard input).
        file: Option<PathBuf>,
    },
    /// Build one text automaton per sentence line, using a lexicon.
    Text {
        /// Sentence file, one whitespace-tokenized sentence per line.
        sentences: PathBuf,
        /// Tab-separated lexicon mapping surfaces to analyses.
        lexicon: PathBuf,
        /// Reject sentences containing out-of-lexicon tokens.
        #[arg(long)]
        strict: bool,
        /// Output directory for the numbered .fsa files.
        #[arg(short, long, value_name = "DIR")]
        output: PathBuf,
    },
    /// Report size and path statistics for an automaton.
    Stats {
        automaton: PathBuf,
        /// Emit a single JSON object instead of human-readable lines.
        #[arg(long)]
        json: bool,
    },
    /// Generate a seeded random instance and measure the full pipeline.
    Bench {
        /// Number of random label sequences in the text automaton.
        #[arg(long, value_name = "N")]
        sequences: u32,
        /// Minimum sequence length (actual lengths span 10 above this).
        #[arg(long, value_name = "L")]
        min_len: u32,
        /// Alphabet size.
        #[arg(long, value_name = "A")]
        alphabet: u32,
        /// Grow the grammar until it has at least this many states.
        #[arg(long, value_name = "S")]
        grammar_states: u32,
        /// Random seed; fixes every byte of the generated instance.
        #[arg(long, value_name = "K")]
        seed: u64,
        /// Emit a single JSON object instead of human-readable lines.
        #[arg(long)]
        json: bool,
    },
    /// Compare an application against the brute-force oracle.
    OracleCheck {
        /// Text automaton (acyclic, small enough to enumerate).
        text: PathBuf,
        /// Grammar automaton, compiled internally.
        grammar: PathBuf,
        /// Check positive-mode application instead of negative.
        #[arg(long)]
        positive: bool,
        /// Compare only sequences up to this length.
        #[arg(long, value_name = "M")]
        max_len: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compile {
            grammar,
            output,
            wildcard,
        } => commands::compile::run(&grammar, &output, wildcard),
        Command::Apply {
            text,
            matcher,
            positive,
            no_minimize,
            output,
            stats,
        } => commands::apply::run(&text, &matcher, positive, no_minimize, &output, stats.as_deref()),
        Command::Scan { matcher, file } => commands::scan::run(&matcher, file.as_deref()),
        Command::Text {
            sentences,
            lexicon,
            strict,
            output,
        } => commands::text::run(&sentences, &lexicon, strict, &output),
        Command::Stats { automaton, json } => commands::stats::run(&automaton, json),
        Command::Bench {
            sequences,
            min_len,
            alphabet,
            grammar_states,
            seed,
            json,
        } => commands::bench::run(sequences, min_len, alphabet, grammar_states, seed, json),
        Command::OracleCheck {
            text,
            grammar,
            positive,
            max_len,
        } => commands::oracle_check::run(&text, &grammar, positive, max_len),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report(&err);
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
