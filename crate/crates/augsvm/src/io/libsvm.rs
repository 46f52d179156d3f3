//! LIBSVM / SVMlight sparse text: `<label> <idx>:<val> ...`, 1-based indices.

use std::io::{BufRead, Write};

use augsvm_core::{Dataset, SparseRow, Task};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParseOptions {
    pub task: Task,
    /// Append a unit feature after the last column.
    pub add_bias: bool,
    /// Feature count before the bias; inferred from the largest index if unset.
    pub dim: Option<usize>,
    /// Class count for multiclass data; the largest label if unset.
    pub classes: Option<usize>,
}

impl ParseOptions {
    pub fn new(task: Task) -> Self {
        Self {
            task,
            add_bias: true,
            dim: None,
            classes: None,
        }
    }
}

/// How the first token of a line is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    Task(Task),
    /// Any number; used when labels are ignored.
    Any,
}

/// Parsed rows before dataset validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Records {
    pub rows: Vec<SparseRow>,
    pub labels: Vec<f64>,
    /// Feature count including the bias column.
    pub dim: usize,
    pub bias: bool,
}

struct RawLine {
    line: usize,
    label: f64,
    pairs: Vec<(usize, f64)>,
}

fn parse_label(tok: &str, mode: LabelMode, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("malformed label `{tok}`")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite label `{tok}`")));
    }
    match mode {
        LabelMode::Any | LabelMode::Task(Task::Svr) => Ok(v),
        LabelMode::Task(Task::Cls) => match v {
            1.0 => Ok(1.0),
            -1.0 | 0.0 => Ok(-1.0),
            _ => Err(Error::parse(line, format!("binary label `{tok}` not in {{+1, -1}} or {{1, 0}}"))),
        },
        LabelMode::Task(Task::Mlt) => {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v)
            } else {
                Err(Error::parse(line, format!("class label `{tok}` is not a positive integer")))
            }
        }
    }
}

fn parse_line(text: &str, line: usize, mode: LabelMode) -> Result<Option<RawLine>> {
    let text = text.split('#').next().unwrap_or("");
    let mut toks = text.split_ascii_whitespace();
    let Some(first) = toks.next() else {
        return Ok(None);
    };
    let label = parse_label(first, mode, line)?;
    let mut pairs = Vec::new();
    let mut last = 0usize;
    for tok in toks {
        let (i, v) = tok
            .split_once(':')
            .ok_or_else(|| Error::parse(line, format!("malformed token `{tok}`")))?;
        if i == "qid" {
            continue;
        }
        let idx: usize = i
            .parse()
            .map_err(|_| Error::parse(line, format!("malformed index in `{tok}`")))?;
        if idx == 0 {
            return Err(Error::parse(line, "indices are 1-based"));
        }
        if idx <= last {
            return Err(Error::parse(line, format!("index {idx} not ascending (after {last})")));
        }
        last = idx;
        let val: f64 = v
            .parse()
            .map_err(|_| Error::parse(line, format!("malformed value in `{tok}`")))?;
        if !val.is_finite() {
            return Err(Error::parse(line, format!("non-finite value in `{tok}`")));
        }
        if val != 0.0 {
            pairs.push((idx - 1, val));
        }
    }
    Ok(Some(RawLine { line, label, pairs }))
}

fn parse_chunk(text: &str, first_line: usize, mode: LabelMode) -> Result<Vec<RawLine>> {
    let mut out = Vec::new();
    for (k, l) in text.lines().enumerate() {
        if let Some(r) = parse_line(l, first_line + k, mode)? {
            out.push(r);
        }
    }
    Ok(out)
}

fn finish(raw: Vec<RawLine>, add_bias: bool, dim: Option<usize>) -> Result<Records> {
    if raw.is_empty() {
        return Err(augsvm_core::Error::EmptyDataset.into());
    }
    let widest = raw.iter().filter_map(|r| r.pairs.last().map(|p| (p.0 + 1, r.line))).max_by_key(|p| p.0);
    let k = match (dim, widest) {
        (Some(d), Some((w, line))) if w > d => {
            return Err(Error::parse(line, format!("index {w} exceeds the declared dimension {d}")))
        }
        (Some(d), _) => d,
        (None, w) => w.map_or(0, |w| w.0),
    };
    let mut rows = Vec::with_capacity(raw.len());
    let mut labels = Vec::with_capacity(raw.len());
    for r in raw {
        let row = SparseRow::from_pairs(r.pairs, k).map_err(|e| Error::parse(r.line, e.to_string()))?;
        rows.push(if add_bias { row.with_bias() } else { row });
        labels.push(r.label);
    }
    Ok(Records {
        rows,
        labels,
        dim: k + usize::from(add_bias),
        bias: add_bias,
    })
}

/// Reads every record from `reader`.
pub fn read_records<R: BufRead>(mut reader: R, mode: LabelMode, add_bias: bool, dim: Option<usize>) -> Result<Records> {
    let mut raw = Vec::new();
    let mut buf = String::new();
    let mut line = 0;
    loop {
        buf.clear();
        let n = reader
            .read_line(&mut buf)
            .map_err(|e| Error::parse(line + 1, e.to_string()))?;
        if n == 0 {
            break;
        }
        line += 1;
        if let Some(r) = parse_line(&buf, line, mode)? {
            raw.push(r);
        }
    }
    finish(raw, add_bias, dim)
}

/// Splits `text` into `parts` pieces at line boundaries and parses them on
/// separate threads. The result is identical to [`read_records`].
pub fn read_records_split(text: &str, mode: LabelMode, add_bias: bool, dim: Option<usize>, parts: usize) -> Result<Records> {
    let parts = parts.max(1);
    let mut bounds = vec![0];
    for p in 1..parts {
        let mut at = (text.len() * p / parts).max(*bounds.last().unwrap());
        while at < text.len() && !text.is_char_boundary(at) {
            at += 1;
        }
        at = text[at..].find('\n').map_or(text.len(), |i| at + i + 1);
        bounds.push(at);
    }
    bounds.push(text.len());
    let pieces: Vec<(&str, usize)> = {
        let mut line = 1;
        bounds
            .windows(2)
            .map(|w| {
                let s = &text[w[0]..w[1]];
                let first = line;
                line += s.bytes().filter(|&b| b == b'\n').count();
                (s, first)
            })
            .collect()
    };
    let chunks: Vec<Result<Vec<RawLine>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = pieces
            .iter()
            .map(|&(s, first)| scope.spawn(move || parse_chunk(s, first, mode)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Model("parser thread panicked".into()))))
            .collect()
    });
    let mut raw = Vec::new();
    for c in chunks {
        raw.extend(c?);
    }
    finish(raw, add_bias, dim)
}

fn into_dataset(rec: Records, opts: &ParseOptions) -> Result<Dataset> {
    let classes = match opts.task {
        Task::Mlt => Some(opts.classes.unwrap_or_else(|| rec.labels.iter().fold(0.0f64, |a, &b| a.max(b)) as usize)),
        _ => None,
    };
    Ok(Dataset::new(rec.rows, rec.labels, opts.task, classes, rec.bias)?)
}

pub fn parse_libsvm<R: BufRead>(reader: R, opts: &ParseOptions) -> Result<Dataset> {
    into_dataset(read_records(reader, LabelMode::Task(opts.task), opts.add_bias, opts.dim)?, opts)
}

pub fn parse_libsvm_str(text: &str, opts: &ParseOptions) -> Result<Dataset> {
    parse_libsvm(text.as_bytes(), opts)
}

/// [`parse_libsvm`] over `parts` line-aligned byte ranges in parallel.
pub fn parse_libsvm_split(text: &str, opts: &ParseOptions, parts: usize) -> Result<Dataset> {
    into_dataset(read_records_split(text, LabelMode::Task(opts.task), opts.add_bias, opts.dim, parts)?, opts)
}

fn write_label(out: &mut impl Write, task: Task, y: f64) -> std::io::Result<()> {
    match task {
        Task::Cls => write!(out, "{}", if y > 0.0 { "+1" } else { "-1" }),
        Task::Mlt => write!(out, "{}", y as usize),
        Task::Svr => write!(out, "{y}"),
    }
}

/// Writes `row` as ` idx:val` pairs, 1-based, skipping column `skip`.
pub(crate) fn write_pairs(out: &mut impl Write, row: &SparseRow, skip: Option<usize>) -> std::io::Result<()> {
    for (i, v) in row.iter() {
        if Some(i) != skip {
            write!(out, " {}:{v}", i + 1)?;
        }
    }
    Ok(())
}

/// Writes `data` back in LIBSVM form, dropping the bias column. Values use
/// the shortest decimal that parses back to the same `f64`.
pub fn write_libsvm<W: Write>(data: &Dataset, mut out: W) -> std::io::Result<()> {
    let skip = data.has_bias().then(|| data.dim() - 1);
    for (row, &y) in data.rows().iter().zip(data.labels()) {
        write_label(&mut out, data.task(), y)?;
        write_pairs(&mut out, row, skip)?;
        writeln!(out)?;
    }
    out.flush()
}
