//! Dense simplex solvers with Bland-type pivoting.
//!
//! Solves `min c.x` subject to linear constraints and `x >= 0`. Programs made
//! only of `<=` rows with `c >= 0` start dual feasible from the slack basis and
//! go through the dual simplex; everything else goes through the two-phase
//! primal simplex. The primal uses Bland's rule; the dual prices by largest
//! infeasibility and falls back to a lowest-index rule when it stalls. Every
//! solve is deterministic.
//!
//! The tableau `B^-1 [A | b]` is recomputed from the original data by
//! Gaussian elimination at every pivot, so rounding does not accumulate over
//! long pivot sequences.

const EPS: f64 = 1e-9;
const MAX_PIVOTS: usize = 50_000;
/// Degenerate dual pivots tolerated before switching to the lowest-index rule.
const STALL_LIMIT: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// `A x = b`, `x >= 0` with a current basis.
struct StandardForm {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl StandardForm {
    fn tableau(&self) -> Option<Tableau> {
        let m = self.a.len();
        // augmented [B | A | b]
        let mut aug: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut row: Vec<f64> = self.basis.iter().map(|&j| self.a[i][j]).collect();
                row.extend_from_slice(&self.a[i]);
                row.push(self.b[i]);
                row
            })
            .collect();
        for col in 0..m {
            let p = (col..m).max_by(|&x, &y| aug[x][col].abs().total_cmp(&aug[y][col].abs()))?;
            if aug[p][col].abs() < 1e-300 {
                return None;
            }
            aug.swap(col, p);
            let piv = aug[col][col];
            for v in aug[col].iter_mut() {
                *v /= piv;
            }
            let pivot_row = aug[col].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != col && row[col] != 0.0 {
                    let f = row[col];
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        let rows = aug.iter().map(|r| r[m..m + self.width].to_vec()).collect();
        let rhs = aug.iter().map(|r| r[m + self.width]).collect();
        Some(Tableau { rows, rhs })
    }

    fn reduced_costs(&self, t: &Tableau, c: &[f64]) -> Vec<f64> {
        let mut z = c.to_vec();
        for (i, &bi) in self.basis.iter().enumerate() {
            let cb = c[bi];
            if cb != 0.0 {
                for (zj, a) in z.iter_mut().zip(&t.rows[i]) {
                    *zj -= cb * a;
                }
            }
        }
        for &bi in &self.basis {
            z[bi] = 0.0;
        }
        z
    }

    /// Primal simplex on cost `c` over columns allowed by `allowed`, from a
    /// primal feasible basis.
    fn primal(&mut self, c: &[f64], allowed: &dyn Fn(usize) -> bool) -> LpStatus {
        loop {
            if self.pivots >= MAX_PIVOTS {
                return LpStatus::IterationLimit;
            }
            let Some(t) = self.tableau() else {
                return LpStatus::IterationLimit;
            };
            let z = self.reduced_costs(&t, c);
            let Some(col) = (0..self.width).find(|&j| allowed(j) && z[j] < -EPS * c[j].abs().max(1.0))
            else {
                return LpStatus::Optimal;
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in t.rows.iter().enumerate() {
                let a = row[col];
                if a > EPS {
                    let ratio = t.rhs[i].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((j, best)) => {
                            let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                            if (ratio < best && !tie) || (tie && self.basis[i] < self.basis[j]) {
                                Some((i, ratio))
                            } else {
                                Some((j, best))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return LpStatus::Unbounded,
                Some((r, _)) => {
                    self.basis[r] = col;
                    self.pivots += 1;
                }
            }
        }
    }

    /// Dual simplex on cost `c` from a dual feasible basis. The leaving row is
    /// the most infeasible one while the objective keeps rising; after
    /// `STALL_LIMIT` degenerate pivots it becomes the infeasible row with the
    /// lowest basic index, which cannot cycle. The entering column is the
    /// lowest index among those attaining the minimum dual ratio.
    fn dual(&mut self, c: &[f64]) -> LpStatus {
        let bscale = self.b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let (mut last_value, mut stalled) = (f64::NEG_INFINITY, 0);
        loop {
            if self.pivots >= MAX_PIVOTS {
                return LpStatus::IterationLimit;
            }
            let Some(t) = self.tableau() else {
                return LpStatus::IterationLimit;
            };
            let z = self.reduced_costs(&t, c);
            let value: f64 = self.basis.iter().zip(&t.rhs).map(|(&b, &v)| c[b] * v).sum();
            if value > last_value + 1e-12 * value.abs().max(1.0) {
                stalled = 0;
            } else {
                stalled += 1;
            }
            last_value = last_value.max(value);
            let infeasible = (0..t.rows.len()).filter(|&i| t.rhs[i] < -EPS * bscale);
            let leaving = if stalled < STALL_LIMIT {
                infeasible.min_by(|&x, &y| t.rhs[x].total_cmp(&t.rhs[y]))
            } else {
                infeasible.min_by_key(|&i| self.basis[i])
            };
            let Some(r) = leaving else {
                return LpStatus::Optimal;
            };
            let mut enter: Option<(usize, f64)> = None;
            for j in 0..self.width {
                let a = t.rows[r][j];
                if a < -EPS && !self.basis.contains(&j) {
                    let ratio = z[j].max(0.0) / -a;
                    enter = match enter {
                        Some((_, best)) if ratio >= best - 1e-12 * best.abs().max(1.0) => enter,
                        _ => Some((j, ratio)),
                    };
                }
            }
            match enter {
                None => return LpStatus::Infeasible,
                Some((col, _)) => {
                    self.basis[r] = col;
                    self.pivots += 1;
                }
            }
        }
    }

    fn solution(&self, nvars: usize) -> Option<Vec<f64>> {
        let t = self.tableau()?;
        let mut x = vec![0.0; nvars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < nvars {
                x[b] = t.rhs[i].max(0.0);
            }
        }
        Some(x)
    }
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> LpResult {
        let dual_ready = self.objective.iter().all(|&c| c >= 0.0)
            && self.constraints.iter().all(|c| c.relation == Relation::Le);
        if dual_ready {
            self.solve_dual()
        } else {
            self.solve_two_phase()
        }
    }

    fn finish(&self, form: &StandardForm, status: LpStatus) -> LpResult {
        let nvars = self.objective.len();
        let Some(x) = form.solution(nvars) else {
            return self.failed(LpStatus::IterationLimit, form.pivots);
        };
        let objective = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpResult {
            status,
            x,
            objective,
            pivots: form.pivots,
        }
    }

    fn solve_dual(&self) -> LpResult {
        let nvars = self.objective.len();
        let m = self.constraints.len();
        let width = nvars + m;
        let mut form = StandardForm {
            a: Vec::with_capacity(m),
            b: Vec::with_capacity(m),
            basis: (nvars..width).collect(),
            width,
            pivots: 0,
        };
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![0.0; width];
            for (slot, &v) in row.iter_mut().zip(&c.coeffs) {
                *slot = v;
            }
            row[nvars + i] = 1.0;
            form.a.push(row);
            form.b.push(c.rhs);
        }
        let mut cost = self.objective.clone();
        cost.resize(width, 0.0);
        let status = form.dual(&cost);
        match status {
            LpStatus::Optimal => self.finish(&form, status),
            other => self.failed(other, form.pivots),
        }
    }

    fn solve_two_phase(&self) -> LpResult {
        let nvars = self.objective.len();
        // normalise to nonnegative right-hand sides
        let rows: Vec<(Vec<f64>, Relation, f64)> = self
            .constraints
            .iter()
            .map(|c| {
                let mut coeffs = c.coeffs.clone();
                coeffs.resize(nvars, 0.0);
                if c.rhs < 0.0 {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (coeffs.iter().map(|v| -v).collect(), rel, -c.rhs)
                } else {
                    (coeffs, c.relation, c.rhs)
                }
            })
            .collect();

        let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let artificial_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let art_start = nvars + slack_count;
        let width = art_start + artificial_count;

        let mut form = StandardForm {
            a: Vec::with_capacity(rows.len()),
            b: Vec::with_capacity(rows.len()),
            basis: Vec::with_capacity(rows.len()),
            width,
            pivots: 0,
        };
        let (mut s, mut a) = (nvars, art_start);
        for (coeffs, rel, rhs) in &rows {
            let mut row = vec![0.0; width];
            row[..nvars].copy_from_slice(coeffs);
            match rel {
                Relation::Le => {
                    row[s] = 1.0;
                    form.basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -1.0;
                    s += 1;
                    row[a] = 1.0;
                    form.basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = 1.0;
                    form.basis.push(a);
                    a += 1;
                }
            }
            form.a.push(row);
            form.b.push(*rhs);
        }

        // phase one: minimise the sum of artificials
        if artificial_count > 0 {
            let mut phase1 = vec![0.0; width];
            for v in &mut phase1[art_start..] {
                *v = 1.0;
            }
            if form.primal(&phase1, &|_| true) != LpStatus::Optimal {
                // phase one is bounded below, so anything else is a numerical breakdown
                return self.failed(LpStatus::IterationLimit, form.pivots);
            }
            let Some(t) = form.tableau() else {
                return self.failed(LpStatus::IterationLimit, form.pivots);
            };
            let infeasibility: f64 = form
                .basis
                .iter()
                .zip(&t.rhs)
                .filter(|(&bi, _)| bi >= art_start)
                .map(|(_, &v)| v.max(0.0))
                .sum();
            let scale = rows.iter().map(|r| r.2).fold(1.0, f64::max);
            if infeasibility > 1e-9 * scale {
                return self.failed(LpStatus::Infeasible, form.pivots);
            }
            // drive artificials out of the basis where a structural column can
            // replace them; the rest sit on redundant rows at level zero
            for i in 0..form.basis.len() {
                if form.basis[i] < art_start {
                    continue;
                }
                let Some(t) = form.tableau() else {
                    return self.failed(LpStatus::IterationLimit, form.pivots);
                };
                if let Some(j) = (0..art_start)
                    .filter(|j| !form.basis.contains(j))
                    .find(|&j| t.rows[i][j].abs() > 1e-7)
                {
                    form.basis[i] = j;
                    form.pivots += 1;
                }
            }
        }

        let mut cost = vec![0.0; width];
        cost[..nvars].copy_from_slice(&self.objective);
        let status = form.primal(&cost, &|j| j < art_start);
        self.finish(&form, status)
    }

    fn failed(&self, status: LpStatus, pivots: usize) -> LpResult {
        LpResult {
            status,
            x: vec![0.0; self.objective.len()],
            objective: f64::NAN,
            pivots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn textbook_maximisation() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let mut lp = LinearProgram::new(vec![-3.0, -5.0]);
        lp.constrain(vec![1.0, 0.0], Relation::Le, 4.0)
            .constrain(vec![0.0, 2.0], Relation::Le, 12.0)
            .constrain(vec![3.0, 2.0], Relation::Le, 18.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(close(r.objective, -36.0));
        assert!(close(r.x[0], 2.0) && close(r.x[1], 6.0));
    }

    #[test]
    fn dual_route_with_negative_rhs() {
        // min x + y s.t. -x - 2y <= -4, -3x - y <= -6  ->  2.8, same as the >= form
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.constrain(vec![-1.0, -2.0], Relation::Le, -4.0)
            .constrain(vec![-3.0, -1.0], Relation::Le, -6.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(close(r.objective, 2.8));
        assert!(close(r.x[0], 1.6) && close(r.x[1], 1.2));

        let mut lp = LinearProgram::new(vec![1.0]);
        lp.constrain(vec![1.0], Relation::Le, -1.0);
        assert_eq!(lp.solve().status, LpStatus::Infeasible);
    }

    #[test]
    fn needs_phase_one() {
        // min x + y s.t. x + 2y >= 4, 3x + y >= 6  ->  (1.6, 1.2), 2.8
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.constrain(vec![1.0, 2.0], Relation::Ge, 4.0)
            .constrain(vec![3.0, 1.0], Relation::Ge, 6.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(close(r.objective, 2.8));
    }

    #[test]
    fn negative_rhs_and_equalities() {
        // min 2x + 3y s.t. -x - y <= -5, x - y = 1  ->  x = 3, y = 2, 12
        let mut lp = LinearProgram::new(vec![2.0, 3.0]);
        lp.constrain(vec![-1.0, -1.0], Relation::Le, -5.0)
            .constrain(vec![1.0, -1.0], Relation::Eq, 1.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(close(r.objective, 12.0));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.constrain(vec![1.0], Relation::Le, 1.0)
            .constrain(vec![1.0], Relation::Ge, 2.0);
        assert_eq!(lp.solve().status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(vec![-1.0, 0.0]);
        lp.constrain(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve().status, LpStatus::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // a classic cycling example for the largest-coefficient rule
        let mut lp = LinearProgram::new(vec![-0.75, 150.0, -0.02, 6.0]);
        lp.constrain(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0)
            .constrain(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0)
            .constrain(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(close(r.objective, -0.05));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(vec![1.0, 2.0]);
        lp.constrain(vec![1.0, 1.0], Relation::Eq, 2.0)
            .constrain(vec![2.0, 2.0], Relation::Eq, 4.0);
        let r = lp.solve();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!(close(r.objective, 2.0));
    }
}
