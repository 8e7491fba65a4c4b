//! Deterministic JSON reports: fixed key order, floats at 17 significant
//! digits, complex numbers as {re, im} pairs, amplitude records one per
//! line sorted by basis index. The timing entry sits alone on its line so
//! byte comparison of two reports only has to skip that line.

use num_complex::Complex64 as C64;

use ioncav_core::protocols::{BranchPair, PhaseGateRun, ProtocolOutcome};

/// Ordered JSON value; objects keep insertion order.
pub enum Json {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Null,
    /// Array with one element per line.
    Arr(Vec<Json>),
    /// Array rendered on a single line.
    InlineArr(Vec<Json>),
    /// Object with one field per line.
    Obj(Vec<(&'static str, Json)>),
    /// Object rendered on a single line.
    InlineObj(Vec<(&'static str, Json)>),
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

impl Json {
    pub fn complex(z: C64) -> Json {
        Json::InlineObj(vec![("re", Json::Float(z.re)), ("im", Json::Float(z.im))])
    }

    fn render_into(&self, out: &mut String, indent: usize) {
        match self {
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Float(x) => out.push_str(&fmt_f64(*x)),
            Json::Str(s) => {
                out.push('"');
                out.push_str(&escape(s));
                out.push('"');
            }
            Json::Null => out.push_str("null"),
            Json::InlineObj(fields) => {
                out.push('{');
                for (k, (key, value)) in fields.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    out.push('"');
                    out.push_str(key);
                    out.push_str("\": ");
                    value.render_into(out, indent);
                }
                out.push('}');
            }
            Json::InlineArr(items) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    item.render_into(out, indent);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push_str("{\n");
                let pad = "  ".repeat(indent + 1);
                for (k, (key, value)) in fields.iter().enumerate() {
                    out.push_str(&pad);
                    out.push('"');
                    out.push_str(key);
                    out.push_str("\": ");
                    value.render_into(out, indent + 1);
                    if k + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&"  ".repeat(indent));
                out.push('}');
            }
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push_str("[\n");
                let pad = "  ".repeat(indent + 1);
                for (k, item) in items.iter().enumerate() {
                    out.push_str(&pad);
                    item.render_into(out, indent + 1);
                    if k + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&"  ".repeat(indent));
                out.push(']');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out.push('\n');
        out
    }
}

/// Amplitude dump of a two-mode state, phase-aligned, sorted by basis index.
pub fn amplitude_rows(state: &ioncav_core::TwoModeState) -> Json {
    let mut aligned = state.clone();
    aligned.phase_align();
    let mut rows = Vec::new();
    for n_a in 0..aligned.cutoff_a() {
        for n_b in 0..aligned.cutoff_b() {
            let z = aligned.amplitude(n_a, n_b);
            rows.push(Json::InlineObj(vec![
                ("n_a", Json::Int(n_a as i64)),
                ("n_b", Json::Int(n_b as i64)),
                ("re", Json::Float(z.re)),
                ("im", Json::Float(z.im)),
            ]));
        }
    }
    Json::Arr(rows)
}

fn outcome_json(outcome: &ProtocolOutcome) -> Json {
    let mut fields = vec![
        ("branch", Json::Str(outcome.branch.label().into())),
        ("probability", Json::Float(outcome.probability)),
        ("target_fidelity", outcome.target_fidelity.map_or(Json::Null, Json::Float)),
        ("truncation_mass", Json::Float(outcome.diagnostics.truncation_mass)),
        ("post_norm", Json::Float(outcome.diagnostics.post_norm)),
    ];
    match &outcome.post_state {
        Some(state) => fields.push(("amplitudes", amplitude_rows(state))),
        None => fields.push(("amplitudes", Json::Arr(vec![]))),
    }
    Json::Obj(fields)
}

pub fn branches_json(pair: &BranchPair) -> Json {
    Json::Arr(vec![outcome_json(&pair.g), outcome_json(&pair.e)])
}

pub fn gate_json(run: &PhaseGateRun) -> Json {
    let table = Json::Arr(
        run.truth_table
            .matrix
            .iter()
            .map(|row| Json::InlineArr(row.iter().map(|&z| Json::complex(z)).collect()))
            .collect(),
    );
    Json::Obj(vec![
        ("truth_table", table),
        ("input", Json::InlineArr(run.input.iter().map(|&z| Json::complex(z)).collect())),
        ("evolved", Json::InlineArr(run.evolved.iter().map(|&z| Json::complex(z)).collect())),
        ("leakage", Json::Float(run.leakage)),
        ("max_error_vs_phase_gate", Json::Float(run.truth_table.max_error_vs_phase_gate())),
        ("off_diagonal_max", Json::Float(run.truth_table.off_diagonal_max())),
        ("unitarity_defect", Json::Float(run.truth_table.unitarity_defect())),
    ])
}
