//! Per-step trace export, CSV and JSON lines.
//!
//! Decimal values are written with 17 significant digits (`{:.16e}`), which
//! round-trips every f64. CSV emits one row per (step, element); matrix
//! traces carry a `# dimension=<d>` header line and flatten each matrix
//! row-major into `v0..v{d*d-1}` columns.

use std::io;

use crate::engine::{relative_spread, ElementDomain, IterationState, ScalarDomain};
use crate::spd::{SpdDomain, SpdMatrix};

/// 17-significant-digit decimal form of `v`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_scalar_trace_csv<W: io::Write>(
    out: &mut W,
    domain: &ScalarDomain,
    trace: &[IterationState<f64>],
) -> io::Result<()> {
    writeln!(out, "step,index,value,spread,rel_spread")?;
    for state in trace {
        let spread = domain.spread(&state.elements);
        let rel = relative_spread(domain, &state.elements);
        for (index, value) in state.elements.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                state.step,
                index,
                fmt_f64(*value),
                fmt_f64(spread),
                fmt_f64(rel)
            )?;
        }
    }
    Ok(())
}

pub fn write_scalar_trace_jsonl<W: io::Write>(
    out: &mut W,
    domain: &ScalarDomain,
    trace: &[IterationState<f64>],
) -> io::Result<()> {
    for state in trace {
        let spread = domain.spread(&state.elements);
        let rel = relative_spread(domain, &state.elements);
        let elements = state
            .elements
            .iter()
            .map(|v| fmt_f64(*v))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(
            out,
            r#"{{"step":{},"elements":[{}],"spread":{},"rel_spread":{}}}"#,
            state.step,
            elements,
            fmt_f64(spread),
            fmt_f64(rel)
        )?;
    }
    Ok(())
}

pub fn write_matrix_trace_csv<W: io::Write>(
    out: &mut W,
    domain: &SpdDomain,
    trace: &[IterationState<SpdMatrix>],
) -> io::Result<()> {
    let dim = trace
        .first()
        .and_then(|s| s.elements.first())
        .map(|m| m.dim())
        .unwrap_or(0);
    writeln!(out, "# dimension={dim}")?;
    let cols: Vec<String> = (0..dim * dim).map(|i| format!("v{i}")).collect();
    writeln!(out, "step,index,{},spread,rel_spread", cols.join(","))?;
    for state in trace {
        let spread = domain.spread(&state.elements);
        let rel = relative_spread(domain, &state.elements);
        for (index, matrix) in state.elements.iter().enumerate() {
            let entries = matrix
                .entries()
                .iter()
                .map(|v| fmt_f64(*v))
                .collect::<Vec<_>>()
                .join(",");
            writeln!(
                out,
                "{},{},{},{},{}",
                state.step,
                index,
                entries,
                fmt_f64(spread),
                fmt_f64(rel)
            )?;
        }
    }
    Ok(())
}

pub fn write_matrix_trace_jsonl<W: io::Write>(
    out: &mut W,
    domain: &SpdDomain,
    trace: &[IterationState<SpdMatrix>],
) -> io::Result<()> {
    for state in trace {
        let spread = domain.spread(&state.elements);
        let rel = relative_spread(domain, &state.elements);
        let elements = state
            .elements
            .iter()
            .map(|m| {
                let data = m
                    .entries()
                    .iter()
                    .map(|v| fmt_f64(*v))
                    .collect::<Vec<_>>()
                    .join(",");
                format!(r#"{{"dimension":{},"data":[{}]}}"#, m.dim(), data)
            })
            .collect::<Vec<_>>()
            .join(",");
        writeln!(
            out,
            r#"{{"step":{},"elements":[{}],"spread":{},"rel_spread":{}}}"#,
            state.step,
            elements,
            fmt_f64(spread),
            fmt_f64(rel)
        )?;
    }
    Ok(())
}
