//! The sphere-collapsed linear program over Krawtchouk coefficients, its
//! certificates, and the composite code-size bound.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::fourier::{group_weight, GroupFunction};
use super::lovasz::{check_odd_modulus, lovasz_assignment, lovasz_bound, qprime, SphereKind, SphereSpec};
use super::simplex::{LinearProgram, LpStatus, Relation};
use crate::error::{domain, Error, Result};
use crate::scalar::krawtchouk_table;
use crate::word::ExtendedWeight;

/// Slack allowed when re-checking a solved program.
pub const RECHECK_SLACK: f64 = 1e-7;
/// Tolerance for pointwise certificate checks.
pub const CERT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionStatus {
    Optimal,
    /// The solver stopped early; the stored point is feasible but may not be
    /// optimal.
    BestFeasible,
    /// Closed-form certificate rather than an LP optimum.
    Certificate,
}

impl SolutionStatus {
    fn as_str(self) -> &'static str {
        match self {
            SolutionStatus::Optimal => "optimal",
            SolutionStatus::BestFeasible => "best-feasible",
            SolutionStatus::Certificate => "certificate",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(SolutionStatus::Optimal),
            "best-feasible" => Ok(SolutionStatus::BestFeasible),
            "certificate" => Ok(SolutionStatus::Certificate),
            other => Err(Error::Parse(format!("unknown status {other:?}"))),
        }
    }
}

/// Coefficients `lambda_l` of a feasible `Lambda(u) = sum_l lambda_l K_l(u; q')`.
#[derive(Debug, Clone, PartialEq)]
pub struct LPSolution {
    pub n: usize,
    pub d: usize,
    pub qprime: f64,
    pub lambda: Vec<f64>,
    pub lambda_values: Vec<f64>,
    /// `Lambda(0) / lambda_0`.
    pub objective: f64,
    pub status: SolutionStatus,
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt17(x)).collect::<Vec<_>>().join(" ")
}

impl LPSolution {
    /// Builds a solution from coefficients, recomputing `Lambda` and the
    /// objective.
    pub fn from_lambda(
        n: usize,
        d: usize,
        qprime: f64,
        lambda: Vec<f64>,
        status: SolutionStatus,
    ) -> Result<Self> {
        if lambda.len() != n + 1 {
            return Err(Error::LengthMismatch {
                left: n + 1,
                right: lambda.len(),
            });
        }
        let table = krawtchouk_table(n, qprime)?;
        let lambda_values = evaluate(&table, &lambda);
        if lambda[0] <= 0.0 {
            return Err(Error::Numeric(format!("lambda_0 = {} is not positive", lambda[0])));
        }
        let objective = lambda_values[0] / lambda[0];
        Ok(Self {
            n,
            d,
            qprime,
            lambda,
            lambda_values,
            objective,
            status,
        })
    }

    /// Independent re-check of the defining constraints with slack `tol`
    /// (relative to the scale of each quantity); returns the first violation.
    pub fn check(&self, tol: f64) -> Result<()> {
        let table = krawtchouk_table(self.n, self.qprime)?;
        if self.lambda[0] <= 0.0 {
            return Err(Error::Precondition("lambda_0 must be positive".into()));
        }
        // positivity is judged on lambda_l K_l(0), the scale each term
        // contributes to Lambda(0)
        let scale = magnitude(&table, &self.lambda);
        for (ell, &l) in self.lambda.iter().enumerate() {
            if l * table[ell][0].abs() < -tol * scale {
                return Err(Error::Precondition(format!("lambda_{ell} = {l} is negative")));
            }
        }
        let values = evaluate(&table, &self.lambda);
        for u in self.d..=self.n {
            if values[u] > tol * scale.max(values[0].abs()) {
                return Err(Error::Precondition(format!(
                    "Lambda({u}) = {} is positive",
                    values[u]
                )));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n);
        let _ = writeln!(out, "d {}", self.d);
        let _ = writeln!(out, "qprime {}", fmt17(self.qprime));
        let _ = writeln!(out, "status {}", self.status.as_str());
        let _ = writeln!(out, "lambda {}", join(&self.lambda));
        let _ = writeln!(out, "Lambda {}", join(&self.lambda_values));
        let _ = writeln!(out, "objective {}", fmt17(self.objective));
        out
    }

    /// Parses [`LPSolution::to_text`] output; `#` lines are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut d = None;
        let mut qp = None;
        let mut status = None;
        let mut lambda = None;
        let mut values = None;
        let mut objective = None;
        let floats = |rest: &str| -> Result<Vec<f64>> {
            rest.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect()
        };
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            let int = |s: &str| s.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{key}: {e}")));
            match key {
                "n" => n = Some(int(rest)?),
                "d" => d = Some(int(rest)?),
                "qprime" => qp = floats(rest)?.first().copied(),
                "status" => status = Some(SolutionStatus::parse(rest.trim())?),
                "lambda" => lambda = Some(floats(rest)?),
                "Lambda" => values = Some(floats(rest)?),
                "objective" => objective = floats(rest)?.first().copied(),
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("missing field {k}"));
        let sol = LPSolution {
            n: n.ok_or_else(|| missing("n"))?,
            d: d.ok_or_else(|| missing("d"))?,
            qprime: qp.ok_or_else(|| missing("qprime"))?,
            lambda: lambda.ok_or_else(|| missing("lambda"))?,
            lambda_values: values.ok_or_else(|| missing("Lambda"))?,
            objective: objective.ok_or_else(|| missing("objective"))?,
            status: status.ok_or_else(|| missing("status"))?,
        };
        if sol.lambda.len() != sol.n + 1 || sol.lambda_values.len() != sol.n + 1 {
            return Err(Error::Parse("vector lengths disagree with n".into()));
        }
        Ok(sol)
    }
}

fn evaluate(table: &[Vec<f64>], lambda: &[f64]) -> Vec<f64> {
    let n = table.len() - 1;
    (0..=n)
        .map(|u| lambda.iter().enumerate().map(|(l, &c)| c * table[l][u]).sum())
        .collect()
}

/// `sum_l |lambda_l K_l(0)|`, the natural scale of `Lambda`.
fn magnitude(table: &[Vec<f64>], lambda: &[f64]) -> f64 {
    lambda.iter().enumerate().map(|(l, &c)| (c * table[l][0]).abs()).sum()
}

/// Minimises `Lambda(0)/lambda_0` over `lambda >= 0` with `Lambda(u) <= 0` for
/// `u = d..=n`.
///
/// The program is solved in the variables `mu_l = lambda_l K_l(0)` with
/// `lambda_0 = 1`, which keeps every coefficient of order one.
pub fn lp_solve_lambda(n: usize, d: usize, qprime: f64) -> Result<LPSolution> {
    if n == 0 || d == 0 || d > n {
        return Err(Error::Precondition(format!(
            "need 1 <= d <= n, got n = {n}, d = {d}"
        )));
    }
    if qprime.is_nan() || qprime <= 1.0 {
        return domain(format!("q' = {qprime} must exceed 1"));
    }
    let table = krawtchouk_table(n, qprime)?;
    let k0: Vec<f64> = (0..=n).map(|l| table[l][0]).collect();
    if k0.iter().any(|&v| v <= 0.0) {
        return Err(Error::Numeric("K_l(0) must be positive".into()));
    }
    // Columns are rescaled so each has unit max over the constrained rows,
    // and rows so each has unit max; the raw ratios K_l(u)/K_l(0) span many
    // orders of magnitude and leave the simplex bases badly conditioned.
    let rows: Vec<Vec<f64>> = (d..=n)
        .map(|u| (1..=n).map(|l| table[l][u] / k0[l]).collect())
        .collect();
    let col_scale: Vec<f64> = (0..n)
        .map(|j| {
            let m = rows.iter().fold(0.0f64, |m, r| m.max(r[j].abs()));
            if m > 0.0 {
                1.0 / m
            } else {
                1.0
            }
        })
        .collect();
    let mut lp = LinearProgram::new(col_scale.clone());
    for row in &rows {
        let scaled: Vec<f64> = row.iter().zip(&col_scale).map(|(a, c)| a * c).collect();
        let m = scaled.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let m = if m > 0.0 { m } else { 1.0 };
        lp.constrain(scaled.iter().map(|v| v / m).collect(), Relation::Le, -1.0 / m);
    }
    let result = lp.solve();
    let status = match result.status {
        LpStatus::Optimal => SolutionStatus::Optimal,
        LpStatus::IterationLimit => SolutionStatus::BestFeasible,
        LpStatus::Infeasible => {
            return Err(Error::Numeric(format!("program infeasible at n = {n}, d = {d}")))
        }
        LpStatus::Unbounded => {
            return Err(Error::Numeric(format!("program unbounded at n = {n}, d = {d}")))
        }
    };
    if result.status == LpStatus::IterationLimit && result.objective.is_nan() {
        return Err(Error::Numeric("simplex stopped before finding a feasible point".into()));
    }
    let mut lambda = Vec::with_capacity(n + 1);
    lambda.push(1.0);
    lambda.extend(
        result
            .x
            .iter()
            .zip(&col_scale)
            .zip(&k0[1..])
            .map(|((&nu, &c), &k)| (nu * c).max(0.0) / k),
    );
    let sol = LPSolution::from_lambda(n, d, qprime, lambda, status)?;
    sol.check(RECHECK_SLACK)?;
    Ok(sol)
}

/// Upper bound on the size of a length-`n` code over `Z_5` with pairwise
/// typewriter distance at least `d`.
pub fn composite_bound(n: usize, d: ExtendedWeight) -> Result<f64> {
    if n == 0 {
        return Err(Error::Precondition("length must be positive".into()));
    }
    let lovasz = lovasz_bound(n, 5)?;
    match d {
        ExtendedWeight::Infinite => Ok(lovasz),
        ExtendedWeight::Finite(0) => domain("minimum distance must be at least 1"),
        // g vanishes off {0, ±1}^n, where weights are at most n, so the
        // constraint is the infinite one
        ExtendedWeight::Finite(d) if d as usize > n => Ok(lovasz),
        ExtendedWeight::Finite(d) => {
            Ok(lovasz * lp_solve_lambda(n, d as usize, qprime(5))?.objective)
        }
    }
}

/// `f = g h` on `Z_q^n`, where `g` is Lovász's assignment and `h^` equals
/// `q^n lambda_l (2 cos(pi/q))^-l` on each frequency sphere `S_l^c`.
pub fn certificate_function(sol: &LPSolution, q: usize) -> Result<GroupFunction> {
    check_odd_modulus(q)?;
    if (sol.qprime - qprime(q)).abs() > 1e-12 {
        return domain(format!(
            "certificate parameter {} does not match q = {q}",
            sol.qprime
        ));
    }
    let n = sol.n;
    let mut h_hat = GroupFunction::zeros(n, q)?;
    let size = h_hat.len() as f64;
    let two_cos = 2.0 * (PI / q as f64).cos();
    for (ell, &l) in sol.lambda.iter().enumerate() {
        let value = size * l * two_cos.powi(-(ell as i32));
        let sphere = SphereSpec::new(n, q, SphereKind::Frequency, ell)?;
        for w in sphere.members() {
            let i = h_hat.index_of(&w);
            h_hat.values_mut()[i] = Complex64::new(value, 0.0);
        }
    }
    let h = h_hat.inverse_dft();
    lovasz_assignment(n, q)?.mul(&h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub coords: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    /// Points of weight at least `d` where `f > 0`.
    pub primal_violations: Vec<Violation>,
    /// Frequencies where `f^ < 0`.
    pub dual_violations: Vec<Violation>,
    /// `q^n f(0) / f^(0)`.
    pub bound: f64,
    pub max_imag: f64,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.primal_violations.is_empty()
            && self.dual_violations.is_empty()
            && self.bound.is_finite()
            && self.bound > 0.0
    }
}

/// Checks that `f` certifies a code-size bound at minimum distance `d`:
/// `f(x) <= 0` whenever `w(x) >= d` and `f^ >= 0` everywhere.
pub fn verify_certificate(f: &GroupFunction, d: ExtendedWeight) -> CertificateReport {
    let q = f.q();
    let f_hat = f.dft();
    let scale = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    let hat_scale = f_hat.values().iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    let mut primal = Vec::new();
    let mut dual = Vec::new();
    for i in 0..f.len() {
        let coords = f.coords(i);
        if i != 0 && group_weight(&coords, q) >= d && f.at(i).re > CERT_TOL * scale {
            primal.push(Violation {
                index: i,
                coords: coords.clone(),
                value: f.at(i).re,
            });
        }
        if f_hat.at(i).re < -CERT_TOL * hat_scale {
            dual.push(Violation {
                index: i,
                coords,
                value: f_hat.at(i).re,
            });
        }
    }
    CertificateReport {
        primal_violations: primal,
        dual_violations: dual,
        bound: f.len() as f64 * f.at(0).re / f_hat.at(0).re,
        max_imag: f.max_imag().max(f_hat.max_imag()),
    }
}
