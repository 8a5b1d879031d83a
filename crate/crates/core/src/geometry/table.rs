//! Custom warps from sampled `(t, f, f', f'')` tables with uniform step.

use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::CustomWarp;
use crate::scalar::Real;

#[derive(Debug, Clone)]
struct Table<T> {
    t0: T,
    step: T,
    f: Vec<T>,
    df: Vec<T>,
    d2f: Vec<T>,
}

impl<T: Real> Table<T> {
    fn locate(&self, t: T) -> (usize, T) {
        let n = self.f.len();
        let x = ((t - self.t0) / self.step).max(T::zero());
        let i = x.floor().to_usize().unwrap_or(0).min(n - 2);
        (i, x - T::count(i))
    }

    /// Cubic Hermite through `(y, slope)` at the cell ends.
    fn hermite(&self, y: &[T], slope: &[T], t: T) -> T {
        let (i, s) = self.locate(t);
        let h = self.step;
        let s2 = s * s;
        let s3 = s2 * s;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        h00 * y[i] + h10 * h * slope[i] + h01 * y[i + 1] + h11 * h * slope[i + 1]
    }

    fn linear(&self, y: &[T], t: T) -> T {
        let (i, s) = self.locate(t);
        y[i] + s * (y[i + 1] - y[i])
    }
}

/// Parses a warp table. Accepts an optional header row; rows are
/// `t, f, f', f''`. `t` must increase with a uniform step and `f` must be
/// positive. Returns the warp and the tabulated interval.
pub fn load_warp_table<T: Real, R: Read>(reader: R, label: &str) -> Result<(CustomWarp<T>, (T, T))> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows: Vec<[f64; 4]> = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Table(e.to_string()))?;
        if record.len() != 4 {
            return Err(Error::Table(format!("row {}: expected 4 columns (t, f, f', f''), got {}", line + 1, record.len())));
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push([v[0], v[1], v[2], v[3]]),
            Err(_) if line == 0 && rows.is_empty() => continue,
            Err(e) => return Err(Error::Table(format!("row {}: {e}", line + 1))),
        }
    }
    if rows.len() < 4 {
        return Err(Error::Table(format!("need at least 4 samples, got {}", rows.len())));
    }
    let step = (rows[rows.len() - 1][0] - rows[0][0]) / (rows.len() - 1) as f64;
    for (i, w) in rows.windows(2).enumerate() {
        let d = w[1][0] - w[0][0];
        if !(d > 0.0) {
            return Err(Error::Table(format!("t is not strictly increasing at row {}", i + 2)));
        }
        if (d - step).abs() > 1e-6 * step {
            return Err(Error::Table(format!("non-uniform step at row {}: {d} vs {step}", i + 2)));
        }
    }
    if let Some(r) = rows.iter().find(|r| !(r[1] > 0.0)) {
        return Err(Error::NonPositiveWarp { t: r[0], value: r[1] });
    }
    let lit = |i: usize| rows.iter().map(|r| T::lit(r[i])).collect::<Vec<T>>();
    let table = Arc::new(Table { t0: T::lit(rows[0][0]), step: T::lit(step), f: lit(1), df: lit(2), d2f: lit(3) });
    let interval = (table.t0, T::lit(rows[rows.len() - 1][0]));
    let (a, b, c) = (table.clone(), table.clone(), table);
    let warp = CustomWarp::analytic(
        label,
        move |t| a.hermite(&a.f, &a.df, t),
        move |t| b.hermite(&b.df, &b.d2f, t),
        move |t| c.linear(&c.d2f, t),
    );
    Ok((warp, interval))
}

pub fn load_warp_table_file<T: Real>(path: &Path) -> Result<(CustomWarp<T>, (T, T))> {
    let file = std::fs::File::open(path).map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
    load_warp_table(file, &path.display().to_string())
}
