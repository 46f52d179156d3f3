//! Metrics over labelled rows.

use augsvm_core::{predict, Model, Prediction, SparseRow, StopReason, Task, TrainTrace};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};

/// What training reported, attached to a report produced right after it.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSummary {
    pub seconds: f64,
    pub iterations: usize,
    pub stop: StopReason,
    pub final_objective: f64,
}

impl TrainSummary {
    pub fn new(trace: &TrainTrace, seconds: f64) -> Self {
        Self {
            seconds,
            iterations: trace.iterations(),
            stop: trace.stop,
            final_objective: trace.final_objective(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub task: Task,
    pub total: usize,
    /// Classification only.
    pub correct: Option<usize>,
    pub accuracy: Option<f64>,
    /// `confusion[truth][predicted]`; binary order is `[-1, +1]`, multiclass `1..=M`.
    pub confusion: Option<Vec<Vec<usize>>>,
    /// Regression only.
    pub rmse: Option<f64>,
    pub train: Option<TrainSummary>,
}

fn class_index(task: Task, classes: usize, y: f64, p: Prediction) -> Result<(usize, usize)> {
    let truth = match task {
        Task::Cls => usize::from(y > 0.0),
        _ => {
            if y.fract() != 0.0 || y < 1.0 || y > classes as f64 {
                return Err(augsvm_core::Error::InvalidLabels(format!("class label {y} outside 1..={classes}")).into());
            }
            y as usize - 1
        }
    };
    let pred = match p {
        Prediction::Binary(s) => usize::from(s > 0),
        Prediction::Class(c) => c - 1,
        Prediction::Real(_) => unreachable!("classification model"),
    };
    Ok((truth, pred))
}

/// Scores `model` on `rows`; labels must belong to the model's task.
pub fn evaluate(model: &Model, rows: &[SparseRow], labels: &[f64]) -> Result<EvalReport> {
    if rows.len() != labels.len() {
        return Err(Error::Usage(format!("{} rows but {} labels", rows.len(), labels.len())));
    }
    if rows.is_empty() {
        return Err(augsvm_core::Error::EmptyDataset.into());
    }
    let preds = rows.iter().map(|x| predict(model, x)).collect::<augsvm_core::Result<Vec<_>>>()?;
    let mut report = EvalReport {
        task: model.task,
        total: rows.len(),
        correct: None,
        accuracy: None,
        confusion: None,
        rmse: None,
        train: None,
    };
    match model.task {
        Task::Svr => {
            let sse: f64 = preds.iter().zip(labels).map(|(p, y)| (p.as_f64() - y).powi(2)).sum();
            report.rmse = Some((sse / rows.len() as f64).sqrt());
        }
        task => {
            let classes = match &model.weights {
                augsvm_core::Weights::Multiclass(ws) => ws.len(),
                _ => 2,
            };
            let mut confusion = vec![vec![0usize; classes]; classes];
            for (p, &y) in preds.iter().zip(labels) {
                if task == Task::Cls && y != 1.0 && y != -1.0 {
                    return Err(augsvm_core::Error::InvalidLabels(format!("binary label {y} not in {{+1, -1}}")).into());
                }
                let (t, q) = class_index(task, classes, y, *p)?;
                confusion[t][q] += 1;
            }
            let correct: usize = (0..classes).map(|c| confusion[c][c]).sum();
            report.correct = Some(correct);
            report.accuracy = Some(correct as f64 / rows.len() as f64);
            report.confusion = Some(confusion);
        }
    }
    Ok(report)
}

/// A JSON number with 17 significant digits, or `null` when not finite.
pub fn json_real(v: f64) -> Box<RawValue> {
    let text = if v.is_finite() { format!("{v:.16e}") } else { "null".to_string() };
    RawValue::from_string(text).expect("formatted reals are valid JSON")
}

#[derive(Serialize)]
struct JsonTrain {
    seconds: Box<RawValue>,
    iterations: usize,
    stop: &'static str,
    final_objective: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    task: &'static str,
    total: usize,
    correct: Option<usize>,
    accuracy: Option<Box<RawValue>>,
    confusion: Option<&'a [Vec<usize>]>,
    rmse: Option<Box<RawValue>>,
    train: Option<JsonTrain>,
}

impl EvalReport {
    /// Stable schema: `task`, `total`, `correct`, `accuracy`, `confusion`,
    /// `rmse`, `train {seconds, iterations, stop, final_objective}`; absent
    /// metrics are `null`.
    pub fn to_json(&self) -> String {
        let j = JsonReport {
            task: self.task.as_str(),
            total: self.total,
            correct: self.correct,
            accuracy: self.accuracy.map(json_real),
            confusion: self.confusion.as_deref(),
            rmse: self.rmse.map(json_real),
            train: self.train.as_ref().map(|t| JsonTrain {
                seconds: json_real(t.seconds),
                iterations: t.iterations,
                stop: t.stop.as_str(),
                final_objective: json_real(t.final_objective),
            }),
        };
        serde_json::to_string(&j).expect("report serializes")
    }

    /// Human-readable lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("task {}\nrows {}\n", self.task.as_str(), self.total);
        if let (Some(c), Some(a)) = (self.correct, self.accuracy) {
            out.push_str(&format!("correct {c}\naccuracy {a}\n"));
        }
        if let Some(m) = &self.confusion {
            for (t, row) in m.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                out.push_str(&format!("confusion[{t}] {}\n", cells.join(" ")));
            }
        }
        if let Some(r) = self.rmse {
            out.push_str(&format!("rmse {r}\n"));
        }
        if let Some(t) = &self.train {
            out.push_str(&format!(
                "train_seconds {}\niterations {}\nstop {}\nfinal_objective {}\n",
                t.seconds,
                t.iterations,
                t.stop.as_str(),
                t.final_objective
            ));
        }
        out
    }
}
