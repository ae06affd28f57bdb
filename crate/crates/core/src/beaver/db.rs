//! Classification database (`.bbdb`).
//!
//! One header comment, then one LF-terminated record per machine in index
//! order:
//!
//! ```text
//! # omegalab-bbdb states=2 budget=1000
//! 0 halted 1 0 -
//! 3 nonhalting - - runaway
//! 9 unresolved 1000 - -
//! ```
//!
//! Records stream into `<path>.partial` chunk by chunk. A rerun with the same
//! header resumes after the last complete record; the finished file is
//! written to a temporary name and renamed into place.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{classify_range, BeaverError, Proof, BeaverReport, ClassificationRecord, MachineClass, Verdict};
use crate::tm::Certificate;

#[derive(Debug, Error)]
pub enum DbError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Beaver(#[from] BeaverError),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("partial database was written for {found}, not {expected}")]
    HeaderMismatch { expected: String, found: String },
}

/// Machines classified between two appends to the partial file.
pub const DEFAULT_CHUNK: u64 = 4096;

pub fn header(states: usize, budget: u64) -> String {
    format!("# omegalab-bbdb states={states} budget={budget}")
}

pub fn format_record(rec: &ClassificationRecord) -> String {
    match rec.verdict {
        Verdict::Halted { steps, ones } => format!("{} halted {steps} {ones} -", rec.index),
        Verdict::ProvenNonHalting(c) => format!("{} nonhalting - - {c}", rec.index),
        Verdict::Unresolved { budget } => format!("{} unresolved {budget} - -", rec.index),
    }
}

fn parse_proof(s: &str) -> Option<Proof> {
    match s {
        "runaway" => return Some(Proof::Runner(Certificate::BlankRunaway)),
        "unreachable" => return Some(Proof::HaltUnreachable),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("translated:") {
        let (period, shift) = rest.split_once(':')?;
        return Some(Proof::TranslatedCycle {
            period: period.parse().ok()?,
            shift: shift.parse().ok()?,
        });
    }
    let period = s.strip_prefix("cycle:")?.parse().ok()?;
    Some(Proof::Runner(Certificate::ExactCycle { period }))
}

pub fn parse_record(line: &str) -> Option<ClassificationRecord> {
    let f: Vec<&str> = line.split(' ').collect();
    let [index, verdict, steps, ones, cert] = f[..] else {
        return None;
    };
    let index = index.parse().ok()?;
    let verdict = match (verdict, cert) {
        ("halted", "-") => Verdict::Halted {
            steps: steps.parse().ok()?,
            ones: ones.parse().ok()?,
        },
        ("nonhalting", c) if steps == "-" && ones == "-" => Verdict::ProvenNonHalting(parse_proof(c)?),
        ("unresolved", "-") if ones == "-" => Verdict::Unresolved {
            budget: steps.parse().ok()?,
        },
        _ => return None,
    };
    Some(ClassificationRecord { index, verdict })
}

/// Parses a finished database.
pub fn read_db(path: &Path) -> Result<(String, Vec<ClassificationRecord>), DbError> {
    let reader = BufReader::new(File::open(path)?);
    let mut head = None;
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if !line.starts_with("# omegalab-bbdb ") {
                return Err(DbError::Malformed {
                    line: 1,
                    message: "missing header".into(),
                });
            }
            head = Some(line);
            continue;
        }
        let rec = parse_record(&line).ok_or_else(|| DbError::Malformed {
            line: i + 1,
            message: format!("bad record {line:?}"),
        })?;
        records.push(rec);
    }
    let head = head.ok_or(DbError::Malformed {
        line: 1,
        message: "empty file".into(),
    })?;
    Ok((head, records))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Complete, contiguous records of a partial file and the byte length they
/// occupy together with the header.
fn resume_point(partial: &Path, expected: &str) -> Result<(Vec<ClassificationRecord>, u64), DbError> {
    let text = fs::read(partial)?;
    let mut records = Vec::new();
    let mut offset = 0usize;
    let mut lines = text.split_inclusive(|&b| b == b'\n');
    match lines.next() {
        Some(first) if first.ends_with(b"\n") => {
            let found = String::from_utf8_lossy(&first[..first.len() - 1]).into_owned();
            if found != expected {
                return Err(DbError::HeaderMismatch {
                    expected: expected.to_string(),
                    found,
                });
            }
            offset += first.len();
        }
        // torn header: start over
        _ => return Ok((records, 0)),
    }
    for line in lines {
        if !line.ends_with(b"\n") {
            break;
        }
        let Some(rec) = std::str::from_utf8(&line[..line.len() - 1]).ok().and_then(parse_record) else {
            break;
        };
        if rec.index != records.len() as u64 {
            break;
        }
        records.push(rec);
        offset += line.len();
    }
    Ok((records, offset as u64))
}

/// Classifies the whole class into `path`, resuming from `<path>.partial`
/// when one with a matching header exists.
pub fn classify_to_db(path: &Path, states: usize, budget: u64, chunk: u64) -> Result<BeaverReport, DbError> {
    let class = MachineClass::new(states)?;
    if budget == 0 {
        return Err(BeaverError::ZeroBudget.into());
    }
    let head = header(states, budget);
    let partial = with_suffix(path, ".partial");
    let (mut records, keep) = if partial.exists() {
        resume_point(&partial, &head)?
    } else {
        (Vec::new(), 0)
    };
    let file = OpenOptions::new().create(true).write(true).truncate(false).open(&partial)?;
    file.set_len(keep)?;
    drop(file);
    let mut file = OpenOptions::new().append(true).open(&partial)?;
    if keep == 0 {
        records.clear();
        writeln!(file, "{head}")?;
    }
    let chunk = chunk.max(1);
    let mut next = records.len() as u64;
    while next < class.size() {
        let end = (next + chunk).min(class.size());
        let batch = classify_range(class, next..end, budget)?;
        let mut buf = String::new();
        for rec in &batch {
            buf.push_str(&format_record(rec));
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
        file.flush()?;
        records.extend(batch);
        next = end;
    }
    file.sync_all()?;
    drop(file);

    let tmp = with_suffix(path, ".tmp");
    {
        let mut out = io::BufWriter::new(File::create(&tmp)?);
        writeln!(out, "{head}")?;
        for rec in &records {
            writeln!(out, "{}", format_record(rec))?;
        }
        out.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    fs::remove_file(&partial)?;
    Ok(BeaverReport::from_records(states, budget, &records))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("omegalab-db-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir.join("class.bbdb")
    }

    #[test]
    fn record_round_trip() {
        for line in ["0 halted 1 0 -", "3 nonhalting - - runaway", "4 nonhalting - - cycle:2", "5 nonhalting - - translated:12:-2", "6 nonhalting - - unreachable", "9 unresolved 1000 - -"] {
            assert_eq!(format_record(&parse_record(line).unwrap()), line);
        }
        for bad in ["", "1 halted 1 0", "1 halted x 0 -", "1 nonhalting - - loop", "1 unresolved 5 1 -"] {
            assert!(parse_record(bad).is_none(), "{bad:?}");
        }
    }

    #[test]
    fn fresh_and_resumed_runs_agree() {
        let fresh = scratch("fresh");
        let report = classify_to_db(&fresh, 1, 100, 10).unwrap();
        assert_eq!(report, super::super::sigma(1, 100).unwrap());
        assert!(!with_suffix(&fresh, ".partial").exists());
        let fresh_text = fs::read_to_string(&fresh).unwrap();
        assert_eq!(fresh_text.lines().count(), 65);

        // an interrupted run: header, 20 records and a torn line
        let resumed = scratch("resumed");
        let lines: Vec<&str> = fresh_text.lines().take(21).collect();
        let torn = format!("{}\n20 hal", lines.join("\n"));
        fs::write(with_suffix(&resumed, ".partial"), torn).unwrap();
        assert_eq!(classify_to_db(&resumed, 1, 100, 7).unwrap(), report);
        assert_eq!(fs::read_to_string(&resumed).unwrap(), fresh_text);

        let (head, records) = read_db(&resumed).unwrap();
        assert_eq!(head, header(1, 100));
        assert_eq!(records.len(), 64);
    }

    #[test]
    fn mismatched_partial_is_rejected() {
        let path = scratch("mismatch");
        fs::write(with_suffix(&path, ".partial"), format!("{}\n", header(1, 5))).unwrap();
        assert!(matches!(
            classify_to_db(&path, 1, 100, 10),
            Err(DbError::HeaderMismatch { .. })
        ));
    }
}
