use std::fmt::Write;

use crate::transforms::GateCountReport;

/// Render a report: entries sorted by (name, positive, negative), counts
/// right-aligned to the width of the total.
///
/// ```text
/// Aggregated gate count:
///  2: "H"
///  1: "not", controls 1
/// Total gates: 3
/// Inputs: 2
/// Outputs: 2
/// Qubits in circuit: 2
/// ```
pub fn render_counts(r: &GateCountReport) -> String {
    let mut out = String::new();
    out.push_str(if r.aggregated { "Aggregated gate count:\n" } else { "Gate count:\n" });
    let w = r.total.to_string().len();
    for (k, n) in &r.entries {
        let n = n.to_string();
        let _ = write!(out, " {n:>w$}: \"{}\"", k.name);
        match (k.pos, k.neg) {
            (0, 0) => {}
            (a, 0) => {
                let _ = write!(out, ", controls {a}");
            }
            (a, b) => {
                let _ = write!(out, ", controls {a}+{b}");
            }
        }
        out.push('\n');
    }
    let _ = writeln!(out, "Total gates: {}", r.total);
    let _ = writeln!(out, "Inputs: {}", r.inputs);
    let _ = writeln!(out, "Outputs: {}", r.outputs);
    let _ = writeln!(out, "Qubits in circuit: {}", r.qubits);
    out
}
