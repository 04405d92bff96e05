//! Plain-text sequence files: one waveform per line, space-separated indices,
//! `#` starts a comment line.

use std::fs;
use std::path::{Path, PathBuf};

use super::CodingSequence;
use crate::error::{Error, Result};

/// Parses sequence-file text. `origin` is only used in error messages.
pub fn parse_sequences(text: &str, origin: &Path) -> Result<Vec<CodingSequence>> {
    let err = |line: usize, detail: String| Error::SequenceFile {
        path: origin.to_path_buf(),
        line,
        detail,
    };
    let mut out: Vec<CodingSequence> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let codes = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| err(line_no, format!("bad index {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = out.first() {
            if first.len() != codes.len() {
                return Err(err(
                    line_no,
                    format!("expected {} indices, found {}", first.len(), codes.len()),
                ));
            }
        }
        let seq = CodingSequence::new(codes).map_err(|e| err(line_no, e.to_string()))?;
        out.push(seq);
    }
    if out.is_empty() {
        return Err(err(0, "no sequences found".into()));
    }
    Ok(out)
}

pub fn read_sequence_file(path: impl AsRef<Path>) -> Result<Vec<CodingSequence>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sequences(&text, path)
}

/// Renders sequences in file format, with an optional leading comment.
pub fn format_sequences(set: &[CodingSequence], comment: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            s.push_str("# ");
            s.push_str(line);
            s.push('\n');
        }
    }
    for seq in set {
        s.push_str(&seq.to_string());
        s.push('\n');
    }
    s
}

pub fn write_sequence_file(
    path: impl AsRef<Path>,
    set: &[CodingSequence],
    comment: Option<&str>,
) -> Result<PathBuf> {
    let path = path.as_ref();
    fs::write(path, format_sequences(set, comment)).map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}
