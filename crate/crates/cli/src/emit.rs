//! Canonical emission: JSON with sorted keys, CSV and SVG line plots, all
//! floats printed as `%.12g`.

use std::fmt::Write as _;

use bandwidth_core::GridField1D;
use serde_json::Value;

use crate::error::CliError;

/// `x` formatted like C's `%.12g`.
pub fn fmt_g(x: f64) -> String {
    fmt_g_digits(x, 12)
}

pub fn fmt_g_digits(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Pretty-printed JSON with sorted keys and `%.12g` numbers; non-finite
/// floats become `null`.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat("  ").take(d));
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                match n.as_f64() {
                    Some(x) if x.is_finite() => out.push_str(&fmt_g(x)),
                    _ => out.push_str("null"),
                }
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 == items.len() { "\n" } else { ",\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, key) in keys.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                out.push_str(": ");
                write_value(out, &map[key.as_str()], depth + 1);
                out.push_str(if i + 1 == keys.len() { "\n" } else { ",\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

/// CSV with a header row; numbers as `%.12g`.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Internal(e.to_string()))?;
    for row in rows {
        if row.len() != header.len() {
            return Err(CliError::Internal(format!("CSV row has {} columns, header has {}", row.len(), header.len())));
        }
        w.write_record(row.iter().map(|&x| fmt_g(x))).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// Fields sharing one grid as CSV: `t` followed by one column per field.
pub fn fields_csv(fields: &[(&str, &GridField1D<f64>)]) -> Result<String, CliError> {
    let first = same_grid(fields)?;
    let mut header = vec!["t"];
    header.extend(fields.iter().map(|(name, _)| *name));
    let rows = (0..first.len()).map(|i| {
        let mut row = vec![first.t(i)];
        row.extend(fields.iter().map(|(_, f)| f.values()[i]));
        row
    });
    csv_table(&header, rows)
}

fn same_grid<'a>(fields: &[(&str, &'a GridField1D<f64>)]) -> Result<&'a GridField1D<f64>, CliError> {
    let (_, first) = fields.first().ok_or_else(|| CliError::Usage("a plot needs at least one field".into()))?;
    for (name, f) in fields {
        if f.len() != first.len() || f.start() != first.start() || f.step() != first.step() {
            return Err(CliError::Usage(format!("field {name} lives on a different grid")));
        }
    }
    Ok(first)
}

pub const SVG_WIDTH: f64 = 800.0;
pub const SVG_HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 770.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 440.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Coordinate rounded to 1e-6.
fn coord(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    let s = format!("{r:.6}");
    let s = trim_fraction(&s);
    if s == "-0" { "0".into() } else { s.into() }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Largest pointwise gap between the first two fields.
pub fn max_gap(fields: &[(&str, &GridField1D<f64>)]) -> Option<f64> {
    let [(_, a), (_, b), ..] = fields else { return None };
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).reduce(f64::max)
}

/// Standalone SVG line plot of fields on a shared grid. With two or more
/// fields the largest gap between the first two is annotated.
pub fn svg_plot(title: &str, fields: &[(&str, &GridField1D<f64>)]) -> Result<String, CliError> {
    let grid = same_grid(fields)?;
    let (x0, x1) = (grid.start(), grid.end());
    let finite = fields.iter().flat_map(|(_, f)| f.values().iter().copied()).filter(|v| v.is_finite());
    let (mut y0, mut y1) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !(y0 <= y1) {
        (y0, y1) = (-1.0, 1.0);
    }
    let pad = if y1 - y0 > 0.0 { 0.05 * (y1 - y0) } else { 1.0f64.max(y0.abs()) * 0.5 };
    y0 -= pad;
    y1 += pad;
    let span_x = if x1 > x0 { x1 - x0 } else { 1.0 };
    let sx = |x: f64| LEFT + (x - x0) / span_x * (RIGHT - LEFT);
    let sy = |y: f64| BOTTOM - (y - y0) / (y1 - y0) * (BOTTOM - TOP);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 500" width="800" height="500" font-family="sans-serif">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="800" height="500" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="400" y="28" text-anchor="middle" font-size="16">{}</text>"#, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        coord(LEFT),
        coord(TOP),
        coord(RIGHT - LEFT),
        coord(BOTTOM - TOP)
    );
    for i in 0..=4 {
        let fx = x0 + span_x * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let (px, py) = (sx(fx), sy(fy));
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/><text x="{0}" y="{3}" text-anchor="middle" font-size="11">{4}</text>"#,
            coord(px),
            coord(BOTTOM),
            coord(BOTTOM + 5.0),
            coord(BOTTOM + 20.0),
            escape(&fmt_g_digits(fx, 4))
        );
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/><text x="{3}" y="{4}" text-anchor="end" font-size="11">{5}</text>"#,
            coord(LEFT - 5.0),
            coord(py),
            coord(LEFT),
            coord(LEFT - 8.0),
            coord(py + 4.0),
            escape(&fmt_g_digits(fy, 4))
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="475" text-anchor="middle" font-size="12">t</text>"#, coord(0.5 * (LEFT + RIGHT)));
    for (i, (name, field)) in fields.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = field
            .iter()
            .filter(|(_, v)| v.is_finite())
            .map(|(t, v)| format!("{},{}", coord(sx(t)), coord(sy(v))))
            .collect();
        let dash = if i % 2 == 1 { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 18.0 + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{color}" stroke-width="2"{dash}/><text x="{3}" y="{4}" font-size="12">{5}</text>"#,
            coord(RIGHT - 150.0),
            coord(ly),
            coord(RIGHT - 125.0),
            coord(RIGHT - 118.0),
            coord(ly + 4.0),
            escape(name)
        );
    }
    if let Some(gap) = max_gap(fields) {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12">max |{} - {}| = {}</text>"#,
            coord(LEFT + 10.0),
            coord(TOP + 18.0),
            escape(fields[0].0),
            escape(fields[1].0),
            escape(&fmt_g_digits(gap, 6))
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
