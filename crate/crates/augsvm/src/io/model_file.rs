//! Line-oriented text model files.
//!
//! ```text
//! augsvm-model 1
//! task cls|svr|mlt
//! solver lin|krn
//! lambda <v>
//! epsilon <v>
//! bias 0|1
//! dim <K_b>
//! classes <M>            (mlt)
//! kernel gaussian <σ>    (krn; or `kernel linear`)
//! w <v> ...              (one per class for mlt)
//! omega <v> ...          (krn)
//! sv <label> <i>:<v> ... (krn, one per support row)
//! check <task> <dim> <values>
//! ```
//!
//! Reals are written with 17 significant digits, so loading reproduces every
//! weight bit for bit. The `check` trailer repeats the task and counts the
//! stored weights so a tampered header is caught.

use std::fmt::Write as _;

use augsvm_core::{Dataset, KernelSpec, Model, SparseRow, Task, Weights};

use crate::error::{Error, Result};

pub const FORMAT_ID: &str = "augsvm-model";
pub const VERSION: u32 = 1;

/// `v` with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_reals(out: &mut String, key: &str, v: &[f64]) {
    out.push_str(key);
    for x in v {
        out.push(' ');
        out.push_str(&fmt_real(*x));
    }
    out.push('\n');
}

fn value_count(m: &Model) -> usize {
    match &m.weights {
        Weights::Linear(w) => w.len(),
        Weights::Multiclass(ws) => ws.iter().map(Vec::len).sum(),
        Weights::Kernel { omega, .. } => omega.len(),
    }
}

pub fn save_model(model: &Model) -> Result<String> {
    model.validate()?;
    let mut out = String::new();
    let task = model.task.as_str();
    // writing to a String cannot fail
    let _ = writeln!(out, "{FORMAT_ID} {VERSION}");
    let _ = writeln!(out, "task {task}");
    let _ = writeln!(out, "solver {}", model.solver().as_str());
    let _ = writeln!(out, "lambda {}", fmt_real(model.lambda));
    let _ = writeln!(out, "epsilon {}", fmt_real(model.epsilon));
    let _ = writeln!(out, "bias {}", u8::from(model.add_bias));
    let _ = writeln!(out, "dim {}", model.dim);
    match &model.weights {
        Weights::Linear(w) => push_reals(&mut out, "w", w),
        Weights::Multiclass(ws) => {
            let _ = writeln!(out, "classes {}", ws.len());
            for w in ws {
                push_reals(&mut out, "w", w);
            }
        }
        Weights::Kernel { omega, support, kernel } => {
            match kernel {
                KernelSpec::Gaussian { sigma } => {
                    let _ = writeln!(out, "kernel gaussian {}", fmt_real(*sigma));
                }
                KernelSpec::Linear => out.push_str("kernel linear\n"),
            }
            push_reals(&mut out, "omega", omega);
            for (row, y) in support.rows().iter().zip(support.labels()) {
                let _ = write!(out, "sv {}", if *y > 0.0 { "+1" } else { "-1" });
                for (i, v) in row.iter() {
                    let _ = write!(out, " {}:{}", i + 1, fmt_real(v));
                }
                out.push('\n');
            }
        }
    }
    let _ = writeln!(out, "check {task} {} {}", model.dim, value_count(model));
    Ok(out)
}

struct Lines<'a> {
    it: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

fn bad(m: impl Into<String>) -> Error {
    Error::Model(m.into())
}

impl<'a> Lines<'a> {
    fn peek_key(&mut self) -> Option<&'a str> {
        self.it.peek().and_then(|(_, l)| l.split_ascii_whitespace().next())
    }

    /// Next line, which must start with `key`; returns the remaining tokens.
    fn expect(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        let (n, line) = self.it.next().ok_or_else(|| bad(format!("truncated: missing `{key}` line")))?;
        let mut toks = line.split_ascii_whitespace();
        match toks.next() {
            Some(k) if k == key => Ok((n + 1, toks.collect())),
            other => Err(bad(format!("line {}: expected `{key}`, found `{}`", n + 1, other.unwrap_or("")))),
        }
    }

    fn single(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, t) = self.expect(key)?;
        match t.as_slice() {
            [v] => Ok((n, v)),
            _ => Err(bad(format!("line {n}: `{key}` takes one value"))),
        }
    }
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| bad(format!("line {line}: bad number `{s}`")))
}

fn reals(line: usize, toks: &[&str]) -> Result<Vec<f64>> {
    toks.iter().map(|t| num(line, t)).collect()
}

pub fn load_model(text: &str) -> Result<Model> {
    let mut lines = Lines {
        it: text.lines().enumerate().peekable(),
    };
    let (_, head) = lines.expect(FORMAT_ID).map_err(|_| bad("not an augsvm model file"))?;
    match head.as_slice() {
        [v] if *v == VERSION.to_string() => {}
        _ => return Err(bad(format!("version mismatch: expected {VERSION}, found `{}`", head.join(" ")))),
    }
    let (n, t) = lines.single("task")?;
    let task = Task::parse(t).ok_or_else(|| bad(format!("line {n}: unknown task `{t}`")))?;
    let (n, s) = lines.single("solver")?;
    let solver = augsvm_core::Solver::parse(s).ok_or_else(|| bad(format!("line {n}: unknown solver `{s}`")))?;
    let (n, l) = lines.single("lambda")?;
    let lambda = num(n, l)?;
    let (n, e) = lines.single("epsilon")?;
    let epsilon = num(n, e)?;
    let (n, b) = lines.single("bias")?;
    let add_bias = match b {
        "0" => false,
        "1" => true,
        _ => return Err(bad(format!("line {n}: bias must be 0 or 1"))),
    };
    let (n, d) = lines.single("dim")?;
    let dim: usize = num(n, d)?;

    let weights = match (solver, lines.peek_key()) {
        (augsvm_core::Solver::Lin, Some("classes")) => {
            let (n, m) = lines.single("classes")?;
            let m: usize = num(n, m)?;
            let mut ws = Vec::with_capacity(m);
            for _ in 0..m {
                let (n, t) = lines.expect("w")?;
                ws.push(reals(n, &t)?);
            }
            Weights::Multiclass(ws)
        }
        (augsvm_core::Solver::Lin, _) => {
            let (n, t) = lines.expect("w")?;
            Weights::Linear(reals(n, &t)?)
        }
        (augsvm_core::Solver::Krn, _) => {
            let (n, k) = lines.expect("kernel")?;
            let kernel = match k.as_slice() {
                ["gaussian", s] => KernelSpec::Gaussian { sigma: num(n, s)? },
                ["linear"] => KernelSpec::Linear,
                _ => return Err(bad(format!("line {n}: unknown kernel `{}`", k.join(" ")))),
            };
            let (n, t) = lines.expect("omega")?;
            let omega = reals(n, &t)?;
            let mut rows = Vec::with_capacity(omega.len());
            let mut labels = Vec::with_capacity(omega.len());
            while lines.peek_key() == Some("sv") {
                let (n, t) = lines.expect("sv")?;
                let (y, pairs) = t.split_first().ok_or_else(|| bad(format!("line {n}: empty support row")))?;
                labels.push(num::<f64>(n, y)?);
                let pairs = pairs
                    .iter()
                    .map(|p| {
                        let (i, v) = p.split_once(':').ok_or_else(|| bad(format!("line {n}: bad pair `{p}`")))?;
                        let i: usize = num(n, i)?;
                        if i == 0 {
                            return Err(bad(format!("line {n}: indices are 1-based")));
                        }
                        Ok((i - 1, num::<f64>(n, v)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(SparseRow::new(pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect(), dim)
                    .map_err(|e| bad(format!("line {n}: {e}")))?);
            }
            if rows.len() != omega.len() {
                return Err(bad(format!(
                    "truncated: {} coefficients but {} support rows",
                    omega.len(),
                    rows.len()
                )));
            }
            let support = Dataset::new(rows, labels, Task::Cls, None, add_bias)?;
            Weights::Kernel { omega, support, kernel }
        }
    };
    let (n, check) = lines.expect("check")?;
    let model = Model {
        task,
        lambda,
        epsilon,
        add_bias,
        dim,
        weights,
    };
    match check.as_slice() {
        [t, d, c] => {
            if *t != task.as_str() {
                return Err(bad(format!("task mismatch: header says {}, trailer says {t}", task.as_str())));
            }
            let (d, c): (usize, usize) = (num(n, d)?, num(n, c)?);
            if d != dim || c != value_count(&model) {
                return Err(bad(format!(
                    "dimension mismatch: trailer declares dim {d} with {c} values, file has dim {dim} with {}",
                    value_count(&model)
                )));
            }
        }
        _ => return Err(bad(format!("line {n}: malformed check line"))),
    }
    if let Some((n, l)) = lines.it.find(|(_, l)| !l.trim().is_empty()) {
        return Err(bad(format!("line {}: unexpected `{l}` after trailer", n + 1)));
    }
    let task_ok = match &model.weights {
        Weights::Multiclass(_) => task == Task::Mlt,
        Weights::Linear(_) => task != Task::Mlt,
        Weights::Kernel { .. } => task == Task::Cls,
    };
    if !task_ok {
        return Err(bad(format!("task mismatch: {} header with a {} payload", task.as_str(), solver.as_str())));
    }
    model.validate().map_err(|e| bad(e.to_string()))?;
    Ok(model)
}
