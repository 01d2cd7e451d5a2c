//! The five bound curves on the reliability function of the 5-input
//! typewriter channel on `C0 < R < C`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::scalar::{bisect, entropy_q, h2, BISECT_TOL};

/// Slack on domain endpoints, absorbing rounding in caller-computed rates.
const EDGE_SLACK: f64 = 1e-12;

/// Zero-error capacity `log sqrt 5`.
pub fn c0() -> f64 {
    0.5 * 5f64.log2()
}

/// Capacity `log(5/2)`.
pub fn capacity() -> f64 {
    2.5f64.log2()
}

/// Slope `4/3 - H2(1/3)` of the lower bound below `R*`.
pub fn gv_slope() -> f64 {
    4.0 / 3.0 - h2(1.0 / 3.0)
}

/// `R* = log 5 - H2(1/4)/2 - 3/4`.
pub fn r_star() -> f64 {
    5f64.log2() - 0.5 * h2(0.25) - 0.75
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub c0: f64,
    pub c: f64,
    pub gv_slope: f64,
    pub r_star: f64,
}

impl BoundConstants {
    pub fn get() -> Self {
        Self {
            c0: c0(),
            c: capacity(),
            gv_slope: gv_slope(),
            r_star: r_star(),
        }
    }
}

fn check_rate(rate: f64, lo: f64, hi: f64, what: &str) -> Result<f64> {
    if rate.is_nan() || rate < lo - EDGE_SLACK || rate > hi + EDGE_SLACK {
        return domain(format!("{what}: rate {rate} outside [{lo}, {hi}]"));
    }
    Ok(rate.clamp(lo, hi))
}

/// Random coding / expurgated lower bound `log(5/2) - R`.
pub fn e_rex(rate: f64) -> Result<f64> {
    let rate = check_rate(rate, c0(), capacity(), "e_rex")?;
    Ok(capacity() - rate)
}

/// Straight line upper bound anchored at one bit at `R = C0`.
pub fn e_sl(rate: f64) -> Result<f64> {
    let rate = check_rate(rate, c0(), capacity(), "e_sl")?;
    Ok((capacity() - rate) / (capacity() - c0()))
}

/// Straight line bound re-anchored at `E_LP1(C0) = 1 - 1/sqrt 5`.
pub fn e_sl_star(rate: f64) -> Result<f64> {
    Ok((1.0 - 1.0 / 5f64.sqrt()) * e_sl(rate)?)
}

/// Left side of the implicit equation for `delta(R)`.
pub fn delta_equation(delta: f64) -> f64 {
    5f64.log2() - 2.0 * delta - 0.5 * h2(2.0 * delta)
}

/// Solves `log 5 - 2 delta - H2(2 delta)/2 = R` for `C0 <= R <= R*`.
pub fn delta_of_r(rate: f64) -> Result<f64> {
    let rate = check_rate(rate, c0(), r_star(), "delta_of_R")?;
    // the left side has its minimum, exactly C0, at delta = 2/5; the
    // decreasing branch below it is the relevant one. The root is double
    // there, so rates within rounding of C0 are snapped to it.
    if delta_equation(0.4) - rate >= -4.0 * f64::EPSILON * rate {
        return Ok(0.4);
    }
    bisect(|d| delta_equation(d) - rate, 0.37, 0.4, BISECT_TOL)
}

/// Structured-GV lower bound: `gv_slope * delta(R)` up to `R*`, then `e_rex`.
pub fn e_gv_star(rate: f64) -> Result<f64> {
    let rate = check_rate(rate, c0(), capacity(), "e_gv_star")?;
    if rate <= r_star() {
        Ok(gv_slope() * delta_of_r(rate)?)
    } else {
        e_rex(rate)
    }
}

/// First linear programming rate bound for a `q`-ary Hamming space of
/// relative distance `delta`; `q` may be non-integer.
pub fn r_lp1(q: f64, delta: f64) -> Result<f64> {
    if q.is_nan() || q <= 1.0 {
        return domain(format!("r_lp1: alphabet parameter {q} must exceed 1"));
    }
    let top = 1.0 - 1.0 / q;
    if !(0.0..=top + EDGE_SLACK).contains(&delta) {
        return domain(format!("r_lp1: delta {delta} outside [0, {top}]"));
    }
    let delta = delta.min(top);
    let mut arg =
        ((q - 1.0) - (q - 2.0) * delta - 2.0 * ((q - 1.0) * delta * (1.0 - delta)).sqrt()) / q;
    if (-EDGE_SLACK..0.0).contains(&arg) {
        arg = 0.0;
    }
    entropy_q(arg, q)
}

/// Upper bound `E_LP1(R)`, the inverse of `E -> log sqrt 5 + r_lp1(sqrt 5, E)`,
/// defined on `[log sqrt 5, log 5]`.
pub fn e_lp1(rate: f64) -> Result<f64> {
    let rate = check_rate(rate, c0(), 5f64.log2(), "e_lp1")?;
    let q = 5f64.sqrt();
    let top = 1.0 - 1.0 / q;
    bisect(
        |e| c0() + r_lp1(q, e.clamp(0.0, top)).unwrap_or(f64::NAN) - rate,
        0.0,
        top,
        BISECT_TOL,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveName {
    Rex,
    Sl,
    SlStar,
    GvStar,
    Lp1,
}

impl CurveName {
    pub const ALL: [CurveName; 5] = [
        CurveName::Rex,
        CurveName::Sl,
        CurveName::SlStar,
        CurveName::GvStar,
        CurveName::Lp1,
    ];

    pub fn column(self) -> &'static str {
        match self {
            CurveName::Rex => "E_rex",
            CurveName::Sl => "E_sl",
            CurveName::SlStar => "E_sl_star",
            CurveName::GvStar => "E_gv_star",
            CurveName::Lp1 => "E_lp1",
        }
    }

    /// Evaluates the curve, reporting `+inf` below `C0`.
    pub fn eval(self, rate: f64) -> Result<f64> {
        if rate < c0() - EDGE_SLACK {
            return Ok(f64::INFINITY);
        }
        match self {
            CurveName::Rex => e_rex(rate),
            CurveName::Sl => e_sl(rate),
            CurveName::SlStar => e_sl_star(rate),
            CurveName::GvStar => e_gv_star(rate),
            CurveName::Lp1 => e_lp1(rate),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub name: CurveName,
    pub points: Vec<(f64, f64)>,
}

/// `m` equally spaced rates on `[rmin, rmax]`, endpoints exact.
pub fn rate_grid(rmin: f64, rmax: f64, m: usize) -> Vec<f64> {
    let step = (rmax - rmin) / (m - 1) as f64;
    (0..m)
        .map(|i| {
            if i + 1 == m {
                rmax
            } else {
                rmin + step * i as f64
            }
        })
        .collect()
}

/// Samples all five curves at `m` equally spaced rates.
///
/// Points are computed independently (in parallel) and assembled in index
/// order, so output is independent of the thread schedule.
pub fn sample_curves(rmin: f64, rmax: f64, m: usize) -> Result<Vec<BoundCurve>> {
    if m < 2 {
        return domain("at least two samples required");
    }
    if !(rmin < rmax) {
        return domain(format!("empty rate range [{rmin}, {rmax}]"));
    }
    check_rate(rmin, c0(), capacity(), "sample_curves rmin")?;
    check_rate(rmax, c0(), capacity(), "sample_curves rmax")?;
    let rates = rate_grid(rmin, rmax, m);
    let rows: Vec<[f64; 5]> = rates
        .par_iter()
        .map(|&r| {
            let mut row = [0.0; 5];
            for (slot, name) in row.iter_mut().zip(CurveName::ALL) {
                *slot = name.eval(r)?;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(CurveName::ALL
        .iter()
        .enumerate()
        .map(|(j, &name)| BoundCurve {
            name,
            points: rates.iter().zip(&rows).map(|(&r, row)| (r, row[j])).collect(),
        })
        .collect())
}

pub const CSV_HEADER: &str = "R,E_rex,E_sl,E_sl_star,E_gv_star,E_lp1";

pub(crate) fn fmt_value(x: f64) -> String {
    if x.is_infinite() && x > 0.0 {
        "inf".to_string()
    } else {
        format!("{x:.15}")
    }
}

/// Renders curves (as produced by [`sample_curves`]) into the CSV table,
/// without any provenance comment line.
pub fn curves_to_csv(curves: &[BoundCurve]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let rows = curves.first().map_or(0, |c| c.points.len());
    for i in 0..rows {
        out.push_str(&fmt_value(curves[0].points[i].0));
        for name in CurveName::ALL {
            let curve = curves
                .iter()
                .find(|c| c.name == name)
                .expect("all five curves present");
            let _ = write!(out, ",{}", fmt_value(curve.points[i].1));
        }
        out.push('\n');
    }
    out
}

/// A row of the curve table read back from CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub rate: f64,
    pub values: [f64; 5],
}

/// Parses a curve CSV, skipping `#` comment lines.
pub fn parse_curves_csv(text: &str) -> Result<Vec<CurveRow>> {
    use crate::error::Error;
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected CSV header {other:?}"))),
    }
    lines
        .map(|line| {
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| match f.trim() {
                    "inf" => Ok(f64::INFINITY),
                    s => s
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{s:?}: {e}"))),
                })
                .collect::<Result<_>>()?;
            if fields.len() != 6 {
                return Err(Error::Parse(format!("expected 6 fields in {line:?}")));
            }
            Ok(CurveRow {
                rate: fields[0],
                values: [fields[1], fields[2], fields[3], fields[4], fields[5]],
            })
        })
        .collect()
}

/// A matplotlib script that plots the CSV written next to it.
pub fn plot_script(csv_file_name: &str) -> String {
    format!(
        r##"# Plots the bound curves for the 5-input typewriter channel.
# Usage: python3 figure1.py  (expects {csv} in the same directory)
import csv
import os

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = []
with open(os.path.join(here, "{csv}")) as fh:
    reader = csv.reader(line for line in fh if not line.startswith("#"))
    header = next(reader)
    for row in reader:
        rows.append([float(x) for x in row])

rate = [r[0] for r in rows]
labels = {{
    "E_rex": "$E_{{r/ex}}$",
    "E_sl": "$E_{{sl}}$",
    "E_sl_star": "$E_{{sl}}^*$",
    "E_gv_star": "$E_{{GV}}^*$",
    "E_lp1": "$E_{{LP1}}$",
}}
for j, name in enumerate(header[1:], start=1):
    plt.plot(rate, [r[j] for r in rows], label=labels.get(name, name))
plt.xlabel("R (bits)")
plt.ylabel("E(R)")
plt.xlim(rate[0], rate[-1])
plt.ylim(bottom=0)
plt.legend()
plt.grid(alpha=0.3)
plt.savefig(os.path.join(here, "figure1.pdf"), bbox_inches="tight")
"##,
        csv = csv_file_name
    )
}
