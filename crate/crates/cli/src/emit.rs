//! Report rendering: deterministic JSON and CSV.
//!
//! The JSON emitter writes keys in a fixed order and formats every real
//! with 17 significant digits (`{:.16e}`), which round-trips `f64`
//! bit-exactly.  Because the writer is hand-ordered, two runs with the
//! same resolved config and seed produce byte-identical output once
//! timings are suppressed with `--no-timing`.
//!
//! CSV output carries one row per result entry under the header
//! `id,value,formula,inputs`, with RFC 4180 quoting, so a scan (say, the
//! dilation orbit) plots directly.

use relmol_core::report::ReportValue;

use crate::config::Format;
use crate::run::RunReport;

/// Formats a real with enough digits to reparse to the identical bits.
/// Non-finite values have no JSON literal and are emitted as strings.
fn json_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        json_text(&x.to_string())
    }
}

/// JSON string literal with proper escaping.
fn json_text(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization is infallible")
}

fn json_value(v: &ReportValue) -> String {
    match v {
        ReportValue::Real(x) => json_real(*x),
        ReportValue::Int(i) => i.to_string(),
        // Exact rationals render as their "p/q" form, quoted.
        ReportValue::Rational(r) => json_text(&r.to_string()),
        ReportValue::Text(t) => json_text(t),
    }
}

fn render_json(report: &RunReport, include_timing: bool) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"command\": {},\n", json_text(report.command)));
    out.push_str(&format!("  \"version\": {},\n", json_text(report.version)));

    out.push_str("  \"config\": {");
    let mut first = true;
    for (key, value) in &report.config {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format!("\n    {}: {}", json_text(key), json_value(value)));
    }
    out.push_str(if first { "},\n" } else { "\n  },\n" });

    out.push_str("  \"results\": [");
    let mut first = true;
    for e in &report.results {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str("\n    {\n");
        out.push_str(&format!("      \"id\": {},\n", json_text(&e.id)));
        out.push_str(&format!("      \"value\": {},\n", json_value(&e.value)));
        out.push_str(&format!("      \"formula\": {},\n", json_text(&e.formula)));
        out.push_str("      \"inputs\": {");
        let mut first_input = true;
        for (key, value) in &e.inputs {
            if !first_input {
                out.push(',');
            }
            first_input = false;
            out.push_str(&format!(
                "\n        {}: {}",
                json_text(key),
                json_value(value)
            ));
        }
        out.push_str(if first_input { "},\n" } else { "\n      },\n" });
        out.push_str(&format!("      \"units\": {}\n", json_text(&e.units)));
        out.push_str("    }");
    }
    out.push_str(if first { "],\n" } else { "\n  ],\n" });

    out.push_str("  \"invariants\": [");
    let mut first = true;
    for inv in &report.invariants {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format!(
            "\n    {{ \"id\": {}, \"passed\": {}, \"detail\": {} }}",
            json_text(&inv.id),
            inv.passed,
            json_text(&inv.detail)
        ));
    }
    out.push_str(if first { "]" } else { "\n  ]" });

    if include_timing {
        out.push_str(",\n  \"timings\": {");
        let mut first = true;
        for (label, seconds) in &report.timings {
            if !first {
                out.push(',');
            }
            first = false;
            out.push_str(&format!(
                "\n    {}: {}",
                json_text(label),
                json_real(*seconds)
            ));
        }
        out.push_str(if first { "}\n" } else { "\n  }\n" });
    } else {
        out.push('\n');
    }

    out.push_str("}\n");
    out
}

/// Plain-text form of a value for CSV cells (quoting is applied on top).
fn csv_value(v: &ReportValue) -> String {
    match v {
        ReportValue::Real(x) => format!("{x:.16e}"),
        ReportValue::Int(i) => i.to_string(),
        ReportValue::Rational(r) => r.to_string(),
        ReportValue::Text(t) => t.clone(),
    }
}

/// RFC 4180 field quoting: wrap when the field holds a comma, quote, or
/// line break, doubling embedded quotes.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(report: &RunReport) -> String {
    let mut out = String::from("id,value,formula,inputs\n");
    for e in &report.results {
        let inputs = e
            .inputs
            .iter()
            .map(|(k, v)| format!("{k}={}", csv_value(v)))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{}\n",
            csv_field(&e.id),
            csv_field(&csv_value(&e.value)),
            csv_field(&e.formula),
            csv_field(&inputs)
        ));
    }
    out
}

/// Renders the report in the requested format.  `include_timing` is false
/// under `--no-timing`, which drops the only run-to-run varying section.
pub fn render(report: &RunReport, format: Format, include_timing: bool) -> String {
    match format {
        Format::Json => render_json(report, include_timing),
        Format::Csv => render_csv(report),
    }
}
