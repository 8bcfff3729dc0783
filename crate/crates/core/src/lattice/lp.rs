//! Exact rational linear programming over the nonnegative orthant.
//!
//! Problems have the shape `min (or max) c·x  s.t.  a_i·x >= b_i, x >= 0`.
//! The solver is a dense two-phase tableau simplex with Bland's
//! anti-cycling rule, so results are deterministic and exact. Every
//! outcome carries a certificate: dual multipliers for optima, a Farkas
//! vector for infeasibility and a recession ray for unboundedness.

use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Upper bound on structural variables. Newton-membership programs carry one
/// variable per generator, which is what drives this number.
pub const MAX_LP_VARIABLES: usize = 256;
pub const MAX_LP_CONSTRAINTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `coeffs · x >= bound`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, bound: Rational) -> Constraint {
        Constraint { coeffs, bound }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn minimize(objective: Vec<Rational>) -> LinearProgram {
        LinearProgram {
            sense: Sense::Minimize,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn maximize(objective: Vec<Rational>) -> LinearProgram {
        LinearProgram {
            sense: Sense::Maximize,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn geq(mut self, coeffs: Vec<Rational>, bound: Rational) -> LinearProgram {
        self.constraints.push(Constraint { coeffs, bound });
        self
    }

    pub fn push_geq(&mut self, coeffs: Vec<Rational>, bound: Rational) {
        self.constraints.push(Constraint { coeffs, bound });
    }

    /// Adds `coeffs · x == bound` as a pair of inequalities.
    pub fn push_eq(&mut self, coeffs: Vec<Rational>, bound: Rational) {
        let neg: Vec<Rational> = coeffs.iter().map(|c| -c).collect();
        self.constraints.push(Constraint {
            coeffs,
            bound: bound.clone(),
        });
        self.constraints.push(Constraint {
            coeffs: neg,
            bound: -bound,
        });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if n == 0 {
            return Err(Error::validation("linear program needs at least one variable"));
        }
        if n > MAX_LP_VARIABLES {
            return Err(Error::Capacity {
                what: "linear program variables".into(),
                limit: MAX_LP_VARIABLES,
                requested: n,
            });
        }
        if self.constraints.len() > MAX_LP_CONSTRAINTS {
            return Err(Error::Capacity {
                what: "linear program constraints".into(),
                limit: MAX_LP_CONSTRAINTS,
                requested: self.constraints.len(),
            });
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::validation(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                lhs >= c.bound
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Optimum {
    pub value: Rational,
    pub point: Vec<Rational>,
    /// One multiplier per constraint. For minimization `y >= 0`,
    /// `Aᵀy <= c` and `b·y == value`; for maximization `y <= 0`,
    /// `Aᵀy >= c` and `b·y == value`.
    pub duals: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LpOutcome {
    Optimal(Optimum),
    /// `y >= 0` with `Aᵀy <= 0` and `b·y > 0`.
    Infeasible { farkas: Vec<Rational> },
    /// `d >= 0` with `A d >= 0` and objective strictly improving along `d`.
    Unbounded { ray: Vec<Rational> },
}

impl LpOutcome {
    pub fn optimum(&self) -> Option<&Optimum> {
        match self {
            LpOutcome::Optimal(o) => Some(o),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            LpOutcome::Optimal(_) => "optimal",
            LpOutcome::Infeasible { .. } => "infeasible",
            LpOutcome::Unbounded { .. } => "unbounded",
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_cols: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.num_cols]
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d = cost.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                if !row[j].is_zero() {
                    *dj -= &(cb * &row[j]);
                }
            }
        }
        d
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&factor * p);
                }
            }
        }
        self.basis[r] = col;
    }

    /// Primal simplex with Bland's rule; `allowed` masks columns that may enter.
    fn run(&mut self, cost: &[Rational], allowed: &[bool]) -> PhaseEnd {
        loop {
            let d = self.reduced_costs(cost);
            let entering = (0..self.num_cols).find(|&j| allowed[j] && d[j].is_negative());
            let Some(col) = entering else {
                return PhaseEnd::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return PhaseEnd::Unbounded(col),
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }
}

/// Solves `p` exactly. Deterministic: identical inputs give identical
/// outputs, including the choice among alternative optima.
pub fn lp_solve(p: &LinearProgram) -> Result<LpOutcome> {
    p.validate()?;
    let n = p.num_vars();
    let m = p.constraints.len();

    // Columns: [x (n) | surplus (m) | artificial (k)]; A x - s = b.
    // Rows with b < 0 are negated so the surplus column can start basic.
    let needs_art: Vec<bool> = p.constraints.iter().map(|c| c.bound.is_positive()).collect();
    let num_art = needs_art.iter().filter(|&&b| b).count();
    let num_cols = n + m + num_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_col = n + m;
    for (i, c) in p.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); num_cols + 1];
        if needs_art[i] {
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = a.clone();
            }
            row[n + i] = -Rational::one();
            row[art_col] = Rational::one();
            row[num_cols] = c.bound.clone();
            basis.push(art_col);
            art_col += 1;
        } else {
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = -a;
            }
            row[n + i] = Rational::one();
            row[num_cols] = -&c.bound;
            basis.push(n + i);
        }
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        basis,
        num_cols,
    };

    if num_art > 0 {
        let mut cost1 = vec![Rational::zero(); num_cols];
        for c in cost1.iter_mut().skip(n + m) {
            *c = Rational::one();
        }
        let allowed = vec![true; num_cols];
        // Phase one is bounded below by zero, so it always ends optimal.
        let _ = tab.run(&cost1, &allowed);
        let infeas: Rational = (0..m)
            .filter(|&i| tab.basis[i] >= n + m)
            .map(|i| tab.rhs(i).clone())
            .sum();
        if infeas.is_positive() {
            let d = tab.reduced_costs(&cost1);
            let farkas = (0..m).map(|i| d[n + i].clone()).collect();
            return Ok(LpOutcome::Infeasible { farkas });
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..m {
            if tab.basis[i] >= n + m {
                if let Some(col) = (0..n + m).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, col);
                }
            }
        }
    }

    let flip = p.sense == Sense::Maximize;
    let mut cost = vec![Rational::zero(); num_cols];
    for (j, c) in p.objective.iter().enumerate() {
        cost[j] = if flip { -c } else { c.clone() };
    }
    let mut allowed = vec![true; num_cols];
    for a in allowed.iter_mut().skip(n + m) {
        *a = false;
    }
    match tab.run(&cost, &allowed) {
        PhaseEnd::Unbounded(col) => {
            let mut ray = vec![Rational::zero(); n];
            if col < n {
                ray[col] = Rational::one();
            }
            for (i, &b) in tab.basis.iter().enumerate() {
                if b < n {
                    ray[b] = -&tab.rows[i][col];
                }
            }
            Ok(LpOutcome::Unbounded { ray })
        }
        PhaseEnd::Optimal => {
            let mut point = vec![Rational::zero(); n];
            for (i, &b) in tab.basis.iter().enumerate() {
                if b < n {
                    point[b] = tab.rhs(i).clone();
                }
            }
            let d = tab.reduced_costs(&cost);
            let duals: Vec<Rational> = (0..m)
                .map(|i| if flip { -&d[n + i] } else { d[n + i].clone() })
                .collect();
            let value = p.objective_at(&point);
            Ok(LpOutcome::Optimal(Optimum {
                value,
                point,
                duals,
            }))
        }
    }
}

/// Checks the certificate attached to an outcome against the program.
/// Used by tests and by the `verify` suites.
pub fn certificate_holds(p: &LinearProgram, outcome: &LpOutcome) -> bool {
    let n = p.num_vars();
    let col_dot = |y: &[Rational], j: usize| -> Rational {
        p.constraints
            .iter()
            .zip(y)
            .map(|(c, yi)| &c.coeffs[j] * yi)
            .sum()
    };
    let b_dot = |y: &[Rational]| -> Rational {
        p.constraints.iter().zip(y).map(|(c, yi)| &c.bound * yi).sum()
    };
    match outcome {
        LpOutcome::Optimal(o) => {
            if !p.is_feasible_point(&o.point) || o.duals.len() != p.constraints.len() {
                return false;
            }
            let dual_ok = match p.sense {
                Sense::Minimize => {
                    o.duals.iter().all(|y| !y.is_negative())
                        && (0..n).all(|j| col_dot(&o.duals, j) <= p.objective[j])
                }
                Sense::Maximize => {
                    o.duals.iter().all(|y| !y.is_positive())
                        && (0..n).all(|j| col_dot(&o.duals, j) >= p.objective[j])
                }
            };
            dual_ok && b_dot(&o.duals) == o.value && p.objective_at(&o.point) == o.value
        }
        LpOutcome::Infeasible { farkas } => {
            farkas.len() == p.constraints.len()
                && farkas.iter().all(|y| !y.is_negative())
                && (0..n).all(|j| !col_dot(farkas, j).is_positive())
                && b_dot(farkas).is_positive()
        }
        LpOutcome::Unbounded { ray } => {
            let improving = p.objective_at(ray);
            ray.len() == n
                && ray.iter().all(|d| !d.is_negative())
                && p.constraints.iter().all(|c| {
                    let lhs: Rational = c.coeffs.iter().zip(ray).map(|(a, d)| a * d).sum();
                    !lhs.is_negative()
                })
                && match p.sense {
                    Sense::Minimize => improving.is_negative(),
                    Sense::Maximize => improving.is_positive(),
                }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rational::q;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn two_variable_vertex() {
        let p = LinearProgram::minimize(vec![r(1), r(1)])
            .geq(vec![r(2), r(0)], r(1))
            .geq(vec![r(0), r(3)], r(1));
        let out = lp_solve(&p).unwrap();
        let o = out.optimum().unwrap();
        assert_eq!(o.value, q(5, 6));
        assert_eq!(o.point, vec![q(1, 2), q(1, 3)]);
        assert!(certificate_holds(&p, &out));
    }

    #[test]
    fn orthant_boundary() {
        let p = LinearProgram::minimize(vec![r(1)]).geq(vec![r(1)], r(0));
        let o = lp_solve(&p).unwrap();
        assert_eq!(o.optimum().unwrap().value, r(0));
        assert_eq!(o.optimum().unwrap().point, vec![r(0)]);
    }

    #[test]
    fn unbounded_with_ray() {
        let p = LinearProgram::maximize(vec![r(1)]).geq(vec![r(1)], r(1));
        let out = lp_solve(&p).unwrap();
        assert_eq!(out.status(), "unbounded");
        assert!(certificate_holds(&p, &out));
    }

    #[test]
    fn infeasible_with_farkas() {
        // x >= 2 and -x >= -1
        let p = LinearProgram::minimize(vec![r(1)])
            .geq(vec![r(1)], r(2))
            .geq(vec![r(-1)], r(-1));
        let out = lp_solve(&p).unwrap();
        assert_eq!(out.status(), "infeasible");
        assert!(certificate_holds(&p, &out));
    }

    #[test]
    fn maximize_with_duals() {
        // max x + 2y s.t. x + y <= 4, x + 3y <= 6
        let p = LinearProgram::maximize(vec![r(1), r(2)])
            .geq(vec![r(-1), r(-1)], r(-4))
            .geq(vec![r(-1), r(-3)], r(-6));
        let out = lp_solve(&p).unwrap();
        assert_eq!(out.optimum().unwrap().value, r(5));
        assert!(certificate_holds(&p, &out));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance (as a minimization with >= rows).
        let p = LinearProgram::minimize(vec![q(-3, 4), r(150), q(-1, 50), r(6)])
            .geq(vec![q(-1, 4), r(60), q(1, 25), r(-9)], r(0))
            .geq(vec![q(-1, 2), r(90), q(1, 50), r(-3)], r(0))
            .geq(vec![r(0), r(0), r(-1), r(0)], r(-1));
        let out = lp_solve(&p).unwrap();
        assert_eq!(out.optimum().unwrap().value, q(-1, 20));
        assert!(certificate_holds(&p, &out));
    }

    #[test]
    fn validation_and_capacity() {
        let p = LinearProgram::minimize(vec![r(1), r(1)]).geq(vec![r(1)], r(0));
        assert!(matches!(lp_solve(&p), Err(Error::Validation(_))));
        let big = LinearProgram::minimize(vec![r(0); MAX_LP_VARIABLES + 1]);
        assert!(matches!(lp_solve(&big), Err(Error::Capacity { .. })));
        let empty = LinearProgram::minimize(vec![]);
        assert!(matches!(lp_solve(&empty), Err(Error::Validation(_))));
    }
}
