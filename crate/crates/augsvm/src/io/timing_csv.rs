use std::io::Write;

use augsvm_core::runtime::timing_rows;
use augsvm_core::TrainTrace;

/// `iter,phase,rank,seconds`, one row per rank-phase of every iteration.
pub fn write_timing_csv<W: Write>(trace: &TrainTrace, mut out: W) -> std::io::Result<()> {
    writeln!(out, "iter,phase,rank,seconds")?;
    for r in timing_rows(trace) {
        writeln!(out, "{},{},{},{:e}", r.iteration, r.phase.as_str(), r.rank, r.seconds)?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use augsvm_core::runtime::{IterationTiming, RankTiming};

    #[test]
    fn layout() {
        let mut t = TrainTrace::new(4.0);
        t.timings.push(IterationTiming {
            iteration: 1,
            block: None,
            ranks: vec![RankTiming { draw: 0.5, mu: 0.25, sigma: 1.0, barrier_wait: 0.0 }; 2],
            reduce: 0.125,
            solve: 2.0,
            broadcast: 0.0,
        });
        let mut out = Vec::new();
        write_timing_csv(&t, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 2 * 4 + 3);
        assert_eq!(lines[0], "iter,phase,rank,seconds");
        assert_eq!(lines[1], "1,draw_scales,0,5e-1");
        assert_eq!(lines[5], "1,draw_scales,1,5e-1");
        assert_eq!(lines[10], "1,solve,0,2e0");
    }
}
