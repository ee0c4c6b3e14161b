//! CSV output.

use std::io::Write;

use ccsched::rational::format_q;
use ccsched::Schedule;

/// Task-level schedule with exact times.
pub fn write_schedule<W: Write>(schedule: &Schedule, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["job", "cluster", "machine", "task", "start", "end"])?;
    for a in &schedule.assignments {
        w.write_record([
            a.job.to_string(),
            a.cluster.to_string(),
            a.machine.to_string(),
            a.task.to_string(),
            format_q(&a.start),
            format_q(&a.end),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `v` rounded to 12 significant digits, without exponent for ordinary
/// magnitudes.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    if !(-6..15).contains(&magnitude) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
