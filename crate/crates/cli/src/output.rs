//! Trace serialization and run summaries.

use std::io::Write;

use mconvex::polyhedral::PolyTrace;
use mconvex::trace::SolveTrace;
use mconvex::value::format_rat;

/// Writes a lattice trace as CSV: one row per applied step, `i`/`j` 1-based
/// with the null decrease index as 0, rationals as `p/q` in lowest terms.
pub fn write_trace_csv(path: &str, trace: &SolveTrace) -> std::io::Result<()> {
    let mut out = String::from("iter,outer,i,j,length,slope,f_value\n");
    for (idx, step) in trace.steps.iter().enumerate() {
        let j = step.direction.dec.map_or(0, |j| j + 1);
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            idx + 1,
            step.outer,
            step.direction.inc + 1,
            j,
            step.length,
            format_rat(&step.slope),
            format_rat(&step.value_after),
        ));
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())
}

/// The polyhedral counterpart; step lengths are rationals.
pub fn write_poly_trace_csv(path: &str, trace: &PolyTrace) -> std::io::Result<()> {
    let mut out = String::from("iter,outer,i,j,length,slope,f_value\n");
    for (idx, step) in trace.steps.iter().enumerate() {
        let j = step.direction.dec.map_or(0, |j| j + 1);
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            idx + 1,
            step.outer,
            step.direction.inc + 1,
            j,
            format_rat(&step.length),
            format_rat(&step.slope),
            format_rat(&step.value_after),
        ));
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())
}
