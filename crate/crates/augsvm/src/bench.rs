//! Timing sweeps over workers, rows, features or classes.

use std::io::Write;

use augsvm_core::runtime::{timing_report, Phase};
use augsvm_core::{train, Dataset, Executor, Task, TrainConfig, TrainTrace};

use crate::error::{Error, Result};
use crate::synth::{blobs, coefficients, linear_targets, SynthSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Workers,
    Rows,
    Features,
    Classes,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Workers => "workers",
            SweepAxis::Rows => "rows",
            SweepAxis::Features => "features",
            SweepAxis::Classes => "classes",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "workers" | "p" => Some(SweepAxis::Workers),
            "rows" | "n" => Some(SweepAxis::Rows),
            "features" | "k" => Some(SweepAxis::Features),
            "classes" | "m" => Some(SweepAxis::Classes),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub axis: SweepAxis,
    pub values: Vec<usize>,
    /// Generator settings; the swept field is overwritten per point.
    pub synth: SynthSpec,
    /// A fixed dataset used instead of the generator (worker sweeps only).
    pub data: Option<Dataset>,
    /// Solver, task, algorithm and λ; the iteration count is forced.
    pub config: TrainConfig,
    pub iterations: usize,
    pub repeats: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub axis: SweepAxis,
    pub value: usize,
    pub rows: usize,
    pub features: usize,
    pub classes: usize,
    pub workers: usize,
    pub iterations: usize,
    /// Median over repeats of the median iteration (sweep) wall time.
    pub iter_seconds: f64,
    /// Median per-iteration time of each of the six phases.
    pub phases: [f64; 6],
    /// Median over repeats of the whole training call.
    pub total_seconds: f64,
}

pub fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Per-iteration phase sums (multiclass blocks of one sweep are added up).
fn phase_medians(trace: &TrainTrace) -> [f64; 6] {
    let report = timing_report(trace);
    let iters = trace.iterations();
    let mut per = vec![[0.0; 6]; iters];
    for s in &report {
        if let Some(slot) = per.get_mut(s.iteration - 1) {
            for (k, p) in Phase::ROUND.iter().enumerate() {
                slot[k] += s.seconds(*p);
            }
        }
    }
    let mut out = [0.0; 6];
    for (k, o) in out.iter_mut().enumerate() {
        let mut col: Vec<f64> = per.iter().map(|p| p[k]).collect();
        *o = median(&mut col);
    }
    out
}

/// Iteration times with the first (warm-up) one dropped when there are enough.
fn steady_iterations(trace: &TrainTrace) -> Vec<f64> {
    let s = &trace.iteration_seconds;
    if s.len() >= 3 {
        s[1..].to_vec()
    } else {
        s.clone()
    }
}

fn point_data(spec: &BenchSpec, synth: &SynthSpec, task: Task) -> Result<Dataset> {
    if let Some(d) = &spec.data {
        return Ok(d.clone());
    }
    match task {
        Task::Svr => linear_targets(synth, &coefficients(synth)),
        Task::Mlt if synth.classes < 3 => Err(Error::Usage("multiclass benchmarks need at least 3 classes".into())),
        Task::Cls if synth.classes != 2 => Err(Error::Usage("binary benchmarks use 2 classes".into())),
        _ => blobs(synth),
    }
}

pub fn run_bench<E: Executor>(spec: &BenchSpec, exec: &E) -> Result<Vec<BenchRow>> {
    if spec.values.is_empty() || spec.repeats == 0 || spec.iterations == 0 {
        return Err(Error::Usage("bench needs sweep values, repeats and iterations".into()));
    }
    if spec.data.is_some() && spec.axis != SweepAxis::Workers {
        return Err(Error::Usage("a fixed dataset can only be swept over workers".into()));
    }
    let mut points = Vec::with_capacity(spec.values.len());
    for &value in &spec.values {
        let mut synth = spec.synth;
        let mut config = spec.config.clone();
        match spec.axis {
            SweepAxis::Workers => config.workers = value,
            SweepAxis::Rows => synth.rows = value,
            SweepAxis::Features => synth.features = value,
            SweepAxis::Classes => synth.classes = value,
        }
        if config.task != Task::Mlt && spec.axis != SweepAxis::Classes && spec.data.is_none() {
            synth.classes = 2;
        }
        let data = point_data(spec, &synth, config.task)?;
        config.max_iters = spec.iterations;
        // run the full count: the stopping rule never fires on a real change
        config.tol_scale = f64::MIN_POSITIVE;
        config.burn_in = config.burn_in.min(spec.iterations - 1);
        points.push((value, data, config));
    }

    // Repeats are interleaved across points so slow drift in machine load
    // hits every point alike instead of biasing one end of the sweep.
    let mut iter_s = vec![Vec::new(); points.len()];
    let mut total_s = vec![Vec::new(); points.len()];
    let mut phases = vec![Vec::new(); points.len()];
    let mut iterations = vec![0; points.len()];
    for _ in 0..spec.repeats {
        for (i, (_, data, config)) in points.iter().enumerate() {
            let t0 = exec.now();
            let (_, trace) = train(data, config, exec)?;
            total_s[i].push(exec.now() - t0);
            iter_s[i].push(median(&mut steady_iterations(&trace)));
            phases[i].push(phase_medians(&trace));
            iterations[i] = trace.iterations();
        }
    }

    let mut out = Vec::with_capacity(points.len());
    for (i, (value, data, config)) in points.iter().enumerate() {
        let mut ph = [0.0; 6];
        for (k, p) in ph.iter_mut().enumerate() {
            let mut col: Vec<f64> = phases[i].iter().map(|x| x[k]).collect();
            *p = median(&mut col);
        }
        out.push(BenchRow {
            axis: spec.axis,
            value: *value,
            rows: data.len(),
            features: data.dim(),
            classes: data.num_classes(),
            workers: config.workers,
            iterations: iterations[i],
            iter_seconds: median(&mut iter_s[i]),
            phases: ph,
            total_seconds: median(&mut total_s[i]),
        });
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "axis,value,rows,features,classes,workers,iterations,iter_seconds,draw_scales,local_mu,local_sigma,reduce,solve,broadcast,total_seconds";

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        write!(
            out,
            "{},{},{},{},{},{},{},{:e}",
            r.axis.as_str(),
            r.value,
            r.rows,
            r.features,
            r.classes,
            r.workers,
            r.iterations,
            r.iter_seconds
        )?;
        for p in r.phases {
            write!(out, ",{p:e}")?;
        }
        writeln!(out, ",{:e}", r.total_seconds)?;
    }
    out.flush()
}
