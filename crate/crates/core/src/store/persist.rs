//! Plain-text index directory format.
//!
//! ```text
//! manifest.tsv   key<TAB>value lines
//! 1gram.tsv      token<TAB>count
//! ...
//! 5gram.tsv      t1 t2 t3 t4 t5<TAB>count
//! ```
//!
//! Records are sorted by token sequence, LF-terminated, no trailing
//! whitespace. Only orders up to the manifest's `max_order` are written.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{NgramIndex, MAX_ORDER};
use crate::error::IndexError;
use crate::token::{normalize_token, NORMALIZATION_VERSION};

pub const MANIFEST_FILE: &str = "manifest.tsv";

fn order_file(order: usize) -> String {
    format!("{order}gram.tsv")
}

pub fn save_index(index: &NgramIndex, dir: &Path) -> Result<(), IndexError> {
    fs::create_dir_all(dir).map_err(|source| IndexError::Io {
        path: dir.to_owned(),
        source,
    })?;

    let manifest_text = index.manifest().to_tsv();
    let manifest_path = dir.join(MANIFEST_FILE);
    fs::write(&manifest_path, manifest_text).map_err(|source| IndexError::Io {
        path: manifest_path,
        source,
    })?;

    for (k, table) in index.tables.iter().enumerate() {
        let path = dir.join(order_file(k + 1));
        let mut records: Vec<(Vec<&str>, u64)> = table
            .iter()
            .map(|(key, &c)| (key.split(' ').collect(), c))
            .collect();
        records.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        write_records(&path, &records).map_err(|source| IndexError::Io { path, source })?;
    }
    Ok(())
}

fn write_records(path: &Path, records: &[(Vec<&str>, u64)]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for (tokens, count) in records {
        writeln!(out, "{}\t{}", tokens.join(" "), count)?;
    }
    out.flush()
}

fn format_err(path: &Path, line: usize, reason: impl Into<String>) -> IndexError {
    IndexError::Format {
        path: path.to_owned(),
        line,
        reason: reason.into(),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, IndexError> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::new(f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            Err(format_err(path, 0, "file is missing"))
        }
        Err(source) => Err(IndexError::Io {
            path: path.to_owned(),
            source,
        }),
    }
}

/// Reads `path` line by line; a line that is not valid UTF-8 is a format
/// error at that line.
fn lines(path: &Path) -> Result<Vec<String>, IndexError> {
    let mut reader = open(path)?;
    let mut out = Vec::new();
    let mut buf = Vec::new();
    loop {
        buf.clear();
        let n = reader
            .read_until(b'\n', &mut buf)
            .map_err(|source| IndexError::Io {
                path: path.to_owned(),
                source,
            })?;
        if n == 0 {
            return Ok(out);
        }
        if buf.last() == Some(&b'\n') {
            buf.pop();
        }
        match String::from_utf8(std::mem::take(&mut buf)) {
            Ok(s) => out.push(s),
            Err(_) => return Err(format_err(path, out.len() + 1, "invalid UTF-8")),
        }
    }
}

struct ManifestFields {
    corpus_id: String,
    max_order: usize,
    token_count: u64,
    distinct_unigrams: usize,
}

fn read_manifest(path: &Path) -> Result<ManifestFields, IndexError> {
    let mut fields: HashMap<String, (usize, String)> = HashMap::new();
    for (i, line) in lines(path)?.into_iter().enumerate() {
        let lineno = i + 1;
        let (key, value) = line
            .split_once('\t')
            .ok_or_else(|| format_err(path, lineno, "expected key<TAB>value"))?;
        if fields
            .insert(key.to_owned(), (lineno, value.to_owned()))
            .is_some()
        {
            return Err(format_err(path, lineno, format!("duplicate key {key:?}")));
        }
    }

    let mut take = |key: &str| {
        fields
            .remove(key)
            .ok_or_else(|| format_err(path, 0, format!("missing key {key:?}")))
    };
    let (_, corpus_id) = take("corpus_id")?;
    let (max_line, max_order) = take("max_order")?;
    let (tc_line, token_count) = take("token_count")?;
    let (du_line, distinct_unigrams) = take("distinct_unigrams")?;
    let (nv_line, version) = take("normalization_version")?;
    if let Some((key, (lineno, _))) = fields.into_iter().next() {
        return Err(format_err(path, lineno, format!("unknown key {key:?}")));
    }

    let max_order: usize = max_order
        .parse()
        .map_err(|_| format_err(path, max_line, "max_order is not an integer"))?;
    if !(1..=MAX_ORDER).contains(&max_order) {
        return Err(format_err(
            path,
            max_line,
            format!("max_order {max_order} out of range"),
        ));
    }
    if version != NORMALIZATION_VERSION {
        return Err(format_err(
            path,
            nv_line,
            format!("normalization version {version:?} does not match {NORMALIZATION_VERSION:?}"),
        ));
    }
    Ok(ManifestFields {
        corpus_id,
        max_order,
        token_count: token_count
            .parse()
            .map_err(|_| format_err(path, tc_line, "token_count is not an integer"))?,
        distinct_unigrams: distinct_unigrams
            .parse()
            .map_err(|_| format_err(path, du_line, "distinct_unigrams is not an integer"))?,
    })
}

fn read_order(path: &Path, order: usize) -> Result<HashMap<String, u64>, IndexError> {
    let mut table = HashMap::new();
    let mut prev: Option<Vec<String>> = None;
    for (i, line) in lines(path)?.into_iter().enumerate() {
        let lineno = i + 1;
        let (key, count) = line
            .split_once('\t')
            .ok_or_else(|| format_err(path, lineno, "expected tokens<TAB>count"))?;
        let tokens: Vec<String> = key.split(' ').map(str::to_owned).collect();
        if tokens.len() != order {
            return Err(format_err(
                path,
                lineno,
                format!("expected {order} tokens, found {}", tokens.len()),
            ));
        }
        if let Some(bad) = tokens.iter().find(|t| {
            normalize_token(t)
                .map(|n| n.as_str() != t.as_str())
                .unwrap_or(true)
        }) {
            return Err(format_err(
                path,
                lineno,
                format!("token {bad:?} is not normalized"),
            ));
        }
        let count: u64 = count
            .parse()
            .map_err(|_| format_err(path, lineno, format!("bad count {count:?}")))?;
        if count == 0 {
            return Err(format_err(path, lineno, "count must be at least 1"));
        }
        if prev.as_ref().is_some_and(|p| p >= &tokens) {
            return Err(format_err(path, lineno, "records are not strictly sorted"));
        }
        table.insert(key.to_owned(), count);
        prev = Some(tokens);
    }
    Ok(table)
}

/// Loads an index directory written by [`save_index`].
pub fn load_index(dir: &Path) -> Result<NgramIndex, IndexError> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest = read_manifest(&manifest_path)?;

    let mut tables = Vec::with_capacity(manifest.max_order);
    for order in 1..=manifest.max_order {
        let path: PathBuf = dir.join(order_file(order));
        tables.push(read_order(&path, order)?);
    }

    if tables[0].len() != manifest.distinct_unigrams {
        return Err(format_err(
            &manifest_path,
            0,
            format!(
                "distinct_unigrams is {} but {} holds {} records",
                manifest.distinct_unigrams,
                order_file(1),
                tables[0].len()
            ),
        ));
    }
    let unigram_total: u64 = tables[0].values().sum();
    if unigram_total != manifest.token_count {
        return Err(format_err(
            &manifest_path,
            0,
            format!(
                "token_count is {} but unigram counts sum to {unigram_total}",
                manifest.token_count
            ),
        ));
    }

    Ok(NgramIndex::from_parts(
        manifest.corpus_id,
        manifest.max_order,
        tables,
        manifest.token_count,
    ))
}
