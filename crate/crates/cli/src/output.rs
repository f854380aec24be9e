//! CSV and JSON emitters. Both render every float through the same
//! 12-significant-digit formatter so repeated runs are byte-identical and
//! the JSON mirror carries exactly the CSV values.

use nhqfi::SweepRecord;
use serde_json::{json, Map, Value};

pub const CSV_HEADER: &str =
    "model,regime,m,phi,n_label,epsilon,omega,r,s,x_or_theta,F_generic,F_closed_form,F_projected,residual";

/// 12 significant digits, scientific notation.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

fn cell(v: Option<f64>) -> String {
    v.map(sig12).unwrap_or_default()
}

pub fn to_csv(rows: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.model,
            r.regime.unwrap_or(""),
            cell(r.m),
            cell(r.phi),
            r.n_label.as_deref().unwrap_or(""),
            cell(r.epsilon),
            cell(r.omega),
            cell(r.r),
            cell(r.s),
            sig12(r.x_or_theta),
            cell(r.f_generic),
            cell(r.f_closed_form),
            cell(r.f_projected),
            cell(r.residual),
        ));
    }
    out
}

fn json_cell(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| Value::String(sig12(x)))
}

fn row_value(r: &SweepRecord) -> Value {
    let mut m = Map::new();
    m.insert("model".into(), Value::String(r.model.into()));
    m.insert(
        "regime".into(),
        r.regime.map_or(Value::Null, |s| Value::String(s.into())),
    );
    m.insert("m".into(), json_cell(r.m));
    m.insert("phi".into(), json_cell(r.phi));
    m.insert(
        "n_label".into(),
        r.n_label
            .as_deref()
            .map_or(Value::Null, |s| Value::String(s.into())),
    );
    m.insert("epsilon".into(), json_cell(r.epsilon));
    m.insert("omega".into(), json_cell(r.omega));
    m.insert("r".into(), json_cell(r.r));
    m.insert("s".into(), json_cell(r.s));
    m.insert("x_or_theta".into(), Value::String(sig12(r.x_or_theta)));
    m.insert("F_generic".into(), json_cell(r.f_generic));
    m.insert("F_closed_form".into(), json_cell(r.f_closed_form));
    m.insert("F_projected".into(), json_cell(r.f_projected));
    m.insert("residual".into(), json_cell(r.residual));
    Value::Object(m)
}

/// Rows plus a metadata header: the invoked command, its parameters, the
/// tool version, and a residual summary.
pub fn to_json(command: &str, parameters: Value, rows: &[SweepRecord]) -> String {
    let max_residual = rows
        .iter()
        .filter_map(|r| r.residual)
        .fold(f64::NEG_INFINITY, f64::max);
    let meta = json!({
        "tool": "nhqfi",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "parameters": parameters,
        "residual_summary": {
            "rows": rows.len(),
            "max_residual": if max_residual.is_finite() {
                Value::String(sig12(max_residual))
            } else {
                Value::Null
            },
        },
    });
    let doc = json!({ "metadata": meta, "rows": rows.iter().map(row_value).collect::<Vec<_>>() });
    let mut s = serde_json::to_string_pretty(&doc).expect("static structure serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_twelve_significant_digits() {
        assert_eq!(sig12(2.0 / 81.0), "2.46913580247e-2");
        assert_eq!(sig12(1.0), "1.00000000000e0");
    }

    #[test]
    fn empty_cells_for_missing_fields() {
        let rows = vec![SweepRecord::empty("pseudo", 0.5)];
        let csv = to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "pseudo,,,,,,,,,5.00000000000e-1,,,,");
    }
}
