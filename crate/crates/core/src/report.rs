//! CSV emission with fixed float formatting, so identical runs give identical bytes.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::moments::MomentReport;
use crate::wimu::{gamma_factor_sq, stirling_gamma_sq, MuContext};
use crate::Result;

/// 17 significant digits in scientific notation; `nan` for missing values.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    /// Emitted as `# key = value` lines before the column header.
    pub comments: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            ..Self::default()
        }
    }

    pub fn comment(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.comments.push((key.into(), value.into()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.comments {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub const MU_SCAN_COLUMNS: [&str; 6] = ["t", "re_mu", "im_mu", "abs2_mu", "gamma_factor_sq", "stirling_sq"];

pub const MOMENT_COLUMNS: [&str; 8] = [
    "T",
    "integral_re",
    "integral_im",
    "predicted_re",
    "predicted_im",
    "ratio_re",
    "ratio_im",
    "err",
];

/// μ_{n,t} and the gamma-factor comparison at `t_min, t_min + step, ...` up to `t_max`.
pub fn mu_scan(ctx: &MuContext<'_>, t_min: f64, t_max: f64, step: f64) -> Result<CsvTable> {
    let mut table = CsvTable::new(MU_SCAN_COLUMNS.to_vec());
    let count = ((t_max - t_min) / step + 1e-9).floor() as usize + 1;
    for k in 0..count {
        let t = t_min + step * k as f64;
        let (mu, _) = ctx.mu(t)?;
        table.rows.push(vec![
            t,
            mu.re,
            mu.im,
            mu.norm_sqr(),
            gamma_factor_sq(ctx.form(), ctx.n(), t)?,
            stirling_gamma_sq(ctx.n(), t),
        ]);
    }
    Ok(table)
}

pub fn moment_row(r: &MomentReport) -> Vec<f64> {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let p = r.predicted.unwrap_or(nan);
    let q = r.ratio.unwrap_or(nan);
    vec![r.t_window, r.integral.re, r.integral.im, p.re, p.im, q.re, q.im, r.err_estimate]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_17_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.5), "-2.5000000000000000e0");
        assert_eq!(format_float(f64::NAN), "nan");
        let x = 1.0 / 3.0;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn table_layout() {
        let mut t = CsvTable::new(vec!["a", "b"]);
        t.comment("version", "0.1.0");
        t.rows.push(vec![1.0, 2.0]);
        assert_eq!(t.render(), "# version = 0.1.0\na,b\n1.0000000000000000e0,2.0000000000000000e0\n");
    }
}
