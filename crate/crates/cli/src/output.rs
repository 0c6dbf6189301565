//! Output plumbing: provenance headers, 15-significant-digit formatting,
//! and CSV reading for `replot`/`diff`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

/// 15 significant digits, scientific notation.
pub fn format_sig(v: f64) -> String {
    format!("{v:.14e}")
}

/// The invocation string recorded in every output header.
pub fn invocation() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

enum Sink {
    Stdout(std::io::Stdout),
    File(BufWriter<File>),
}

/// CSV sink (file or stdout) that writes the provenance header first.
pub struct OutputTarget {
    sink: Sink,
}

impl OutputTarget {
    pub fn create(
        path: &Option<PathBuf>,
        seed: u64,
        timestamps: bool,
    ) -> std::io::Result<Self> {
        let mut target = match path {
            Some(p) => OutputTarget {
                sink: Sink::File(BufWriter::new(File::create(p)?)),
            },
            None => OutputTarget {
                sink: Sink::Stdout(std::io::stdout()),
            },
        };
        target.write_line(&format!("# landau1d {}", env!("CARGO_PKG_VERSION")))?;
        target.write_line(&format!("# config: {}", invocation()))?;
        target.write_line(&format!("# seed: {seed}"))?;
        if timestamps {
            target.write_line(&format!(
                "# generated: {:?}",
                std::time::SystemTime::now()
            ))?;
        }
        Ok(target)
    }

    pub fn write_line(&mut self, line: &str) -> std::io::Result<()> {
        match &mut self.sink {
            Sink::Stdout(s) => writeln!(s, "{line}"),
            Sink::File(f) => writeln!(f, "{line}"),
        }
    }

    pub fn finish(self) -> std::io::Result<()> {
        match self.sink {
            Sink::Stdout(mut s) => s.flush(),
            Sink::File(mut f) => f.flush(),
        }
    }
}

/// Pretty-printed JSON to a file or stdout.
pub fn emit_json(path: &Option<PathBuf>, doc: &serde_json::Value) -> std::io::Result<()> {
    let body = serde_json::to_string_pretty(doc).expect("json serialization");
    match path {
        Some(p) => std::fs::write(p, body + "\n"),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

/// Reads a CSV emitted by this tool, skipping `#` comments and blank lines.
pub fn read_csv(path: &Path) -> std::io::Result<Vec<Vec<String>>> {
    let reader = BufReader::new(File::open(path)?);
    let mut rows = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        // inline comments after a cell (scan error annotations) stay attached
        rows.push(trimmed.split(',').map(|c| c.trim().to_string()).collect());
    }
    Ok(rows)
}
