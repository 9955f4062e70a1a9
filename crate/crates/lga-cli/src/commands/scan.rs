use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use lga_core::Label;

use crate::error::CliError;
use crate::util::load_fsm3;

/// Streams lines from `file` (or stdin), printing the match end positions
/// of each line's token sequence, one line of space-separated positions per
/// input line. Tokens never seen by the matcher stay un-interned, so memory
/// stays bounded by the matcher plus the current line.
pub fn run(matcher_path: &Path, file: Option<&Path>) -> Result<(), CliError> {
    let fa = load_fsm3(matcher_path)?;
    let reader: Box<dyn BufRead> = match file {
        Some(path) => Box::new(BufReader::new(std::fs::File::open(path).map_err(
            |source| CliError::Io {
                path: path.to_path_buf(),
                source,
            },
        )?)),
        None => Box::new(io::stdin().lock()),
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for line in reader.lines() {
        let line = line.map_err(|source| CliError::Io {
            path: file.unwrap_or_else(|| Path::new("<stdin>")).to_path_buf(),
            source,
        })?;
        let (ends, _) = fa.scan_tokens(line.split_whitespace().map(Label::lookup));
        let mut sep = "";
        for e in ends {
            write!(out, "{sep}{e}").map_err(stdout_err)?;
            sep = " ";
        }
        writeln!(out).map_err(stdout_err)?;
    }
    Ok(())
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: Path::new("<stdout>").to_path_buf(),
        source,
    }
}
