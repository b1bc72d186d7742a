//! Pairwise scatter matrix rendered as a standalone SVG.
//!
//! Off-diagonal panel `(i, j)` plots dimension `j` against dimension `i`; the
//! diagonal holds a strip plot of dimension `i` with points spread vertically
//! by sample index. Every panel draws one circle per sample; unlabeled
//! samples are gray.

use std::fmt::Write as _;
use std::path::Path;

use mvkit::MvError;
use nalgebra::DMatrix;

pub const CANVAS: f64 = 800.0;
const MARGIN: f64 = 20.0;
const GAP: f64 = 10.0;
const MAX_DIMS: usize = 4;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];
const UNLABELED_COLOR: &str = "#999999";

fn range(col: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = col
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (-1.0, 1.0)
    } else if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        (lo - 1.0, hi + 1.0)
    } else {
        (lo, hi)
    }
}

/// Maps `v` from `[lo, hi]` into `[0, 1]`; non-finite values go to the middle.
fn unit(v: f64, (lo, hi): (f64, f64)) -> f64 {
    if v.is_finite() {
        (v - lo) / (hi - lo)
    } else {
        0.5
    }
}

pub fn render_scatter_svg(embedding: &DMatrix<f64>, labels: Option<&[Option<usize>]>) -> Result<String, MvError> {
    let (n, r) = embedding.shape();
    if r < 2 {
        return Err(MvError::Rank(format!("scatter plot needs at least 2 dimensions, got {r}")));
    }
    if let Some(l) = labels {
        if l.len() != n {
            return Err(MvError::LengthMismatch(l.len(), n));
        }
    }
    let m = r.min(MAX_DIMS);
    let panel = (CANVAS - 2.0 * MARGIN - GAP * (m - 1) as f64) / m as f64;
    let radius = 3.0;
    let inner = panel - 2.0 * radius;
    let ranges: Vec<(f64, f64)> = (0..m).map(|j| range(embedding.column(j).iter().copied())).collect();
    let color = |i: usize| match labels.and_then(|l| l[i]) {
        Some(c) => PALETTE[c % PALETTE.len()],
        None => UNLABELED_COLOR,
    };

    let mut s = String::new();
    let size = CANVAS as u32;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    for row in 0..m {
        for col in 0..m {
            let x0 = MARGIN + col as f64 * (panel + GAP);
            let y0 = MARGIN + row as f64 * (panel + GAP);
            let _ = writeln!(s, r#"<g class="panel" data-row="{row}" data-col="{col}">"#);
            let _ = writeln!(
                s,
                r##"<rect x="{x0:.2}" y="{y0:.2}" width="{panel:.2}" height="{panel:.2}" fill="none" stroke="#cccccc"/>"##
            );
            for i in 0..n {
                let fx = unit(embedding[(i, col)], ranges[col]);
                let fy = if row == col {
                    if n > 1 { i as f64 / (n - 1) as f64 } else { 0.5 }
                } else {
                    unit(embedding[(i, row)], ranges[row])
                };
                let cx = x0 + radius + fx * inner;
                // SVG y grows downward
                let cy = y0 + radius + (1.0 - fy) * inner;
                let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{radius}" fill="{}"/>"#, color(i));
            }
            s.push_str("</g>\n");
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn emit_scatter_svg(embedding: &DMatrix<f64>, labels: Option<&[Option<usize>]>, path: &Path) -> Result<(), MvError> {
    let body = render_scatter_svg(embedding, labels)?;
    std::fs::write(path, body).map_err(|e| MvError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
