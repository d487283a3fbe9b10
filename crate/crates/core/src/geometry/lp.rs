//! Dense linear programming for small numbers of variables.
//!
//! Problems have the form `maximize c.v subject to A v <= r` with `v` free.
//! With few variables and many constraints the natural tableau is the dual,
//! `minimize r.y subject to A^T y = c, y >= 0`, which has one row per
//! variable. That dual is solved with a two-phase revised simplex whose basis
//! is only `m x m`; the primal optimum is recovered as the simplex
//! multipliers. Pivoting follows Bland's rule, so the constraint order is
//! also the pricing order: callers that know which constraints are likely to
//! be active should list them first.

use crate::linalg::Lu;

/// Absolute tolerance for tight constraints and feasibility.
pub const TIGHT_TOL: f64 = 1e-9;
/// Reduced cost below `-PRICE_TOL` makes a column eligible to enter.
const PRICE_TOL: f64 = 1e-11;
/// Pivot elements smaller than this are ignored by the ratio test.
const PIVOT_TOL: f64 = 1e-11;
const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("invalid linear program: {0}")]
    Invalid(String),
    #[error("simplex iteration limit reached")]
    IterationLimit,
}

/// `maximize objective . v` subject to `constraint_matrix v <= constraint_rhs`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    /// Row-major, one row per constraint.
    matrix: Vec<f64>,
    rhs: Vec<f64>,
}

impl LinearProgram {
    /// `matrix` is row-major with `rhs.len()` rows of `objective.len()` entries.
    pub fn new(objective: Vec<f64>, matrix: Vec<f64>, rhs: Vec<f64>) -> Result<Self, LpError> {
        let m = objective.len();
        if m == 0 {
            return Err(LpError::Invalid("no variables".into()));
        }
        if matrix.len() != m * rhs.len() {
            return Err(LpError::Invalid(format!(
                "constraint matrix has {} entries, expected {} x {}",
                matrix.len(),
                rhs.len(),
                m
            )));
        }
        let finite = objective
            .iter()
            .chain(&matrix)
            .chain(&rhs)
            .all(|v| v.is_finite());
        if !finite {
            return Err(LpError::Invalid("non-finite coefficient".into()));
        }
        Ok(Self {
            objective,
            matrix,
            rhs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }

    fn row(&self, i: usize) -> &[f64] {
        let m = self.num_vars();
        &self.matrix[i * m..(i + 1) * m]
    }

    /// Slack `r_i - a_i . v` of constraint `i`.
    pub fn slack(&self, i: usize, v: &[f64]) -> f64 {
        self.rhs[i] - dot(self.row(i), v)
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    /// Optimal vertex.
    pub point: Vec<f64>,
    pub objective: f64,
    /// Every constraint whose slack is within [`TIGHT_TOL`], ascending.
    pub tight: Vec<usize>,
    /// Constraints in the final simplex basis (a subset of `tight`), in basis
    /// order. Fewer than `num_vars` entries when the constraint matrix is rank
    /// deficient.
    pub basis: Vec<usize>,
    /// Dual weights of the basis constraints, aligned with `basis`.
    pub basis_weights: Vec<f64>,
}

/// Solves a small dense LP. See the module docs for the method.
pub fn solve_small_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    solve_inner(lp, true)
}

fn solve_inner(lp: &LinearProgram, classify: bool) -> Result<LpSolution, LpError> {
    let m = lp.num_vars();
    let dual = StandardForm {
        rows: m,
        columns: &lp.matrix,
        cost: &lp.rhs,
        rhs: lp.objective.clone(),
    };
    let mut simplex = RevisedSimplex::new(&dual);
    match simplex.phase_one()? {
        PhaseOne::Feasible => {}
        PhaseOne::Infeasible => {
            // Dual infeasible: primal is unbounded or infeasible.
            if !classify {
                return Err(LpError::Unbounded);
            }
            return if primal_feasible(lp)? {
                Err(LpError::Unbounded)
            } else {
                Err(LpError::Infeasible)
            };
        }
    }
    // Dual unbounded means the primal is infeasible.
    simplex.phase_two().map_err(|e| match e {
        LpError::Unbounded => LpError::Infeasible,
        other => other,
    })?;

    let point = simplex.multipliers();
    let objective = dot(&lp.objective, &point);
    let tight = (0..lp.num_constraints())
        .filter(|&i| lp.slack(i, &point).abs() <= TIGHT_TOL)
        .collect();
    let (basis, basis_weights) = simplex
        .basis
        .iter()
        .zip(&simplex.values)
        .filter(|(&j, _)| j < dual.num_columns())
        .map(|(&j, &w)| (j, w))
        .unzip();
    Ok(LpSolution {
        point,
        objective,
        tight,
        basis,
        basis_weights,
    })
}

/// Decides feasibility of `A v <= r` through `maximize -t s.t. A v - t <= r, -t <= 0`.
fn primal_feasible(lp: &LinearProgram) -> Result<bool, LpError> {
    let m = lp.num_vars();
    let n = lp.num_constraints();
    let mut matrix = Vec::with_capacity((n + 1) * (m + 1));
    for i in 0..n {
        matrix.extend_from_slice(lp.row(i));
        matrix.push(-1.0);
    }
    matrix.extend(std::iter::repeat_n(0.0, m));
    matrix.push(-1.0);
    let mut rhs = lp.rhs.clone();
    rhs.push(0.0);
    let mut objective = vec![0.0; m + 1];
    objective[m] = -1.0;
    let aux = LinearProgram::new(objective, matrix, rhs)?;
    let sol = solve_inner(&aux, false)?;
    Ok(sol.objective >= -TIGHT_TOL)
}

/// Finds convex weights `w >= 0, sum w = 1` with `sum w_i p_i = query`, where
/// `points` is row-major `n x d`. `order` lists point indices in pricing
/// order. Returns the nonzero support as `(point index, weight)` pairs, or
/// `None` when the query is outside the convex hull.
pub(crate) fn convex_combination(
    points: &[f64],
    dim: usize,
    query: &[f64],
    order: &[usize],
) -> Result<Option<Vec<(usize, f64)>>, LpError> {
    let m = dim + 1;
    let mut columns = Vec::with_capacity(order.len() * m);
    for &i in order {
        // Centering on the query keeps entries on the scale of the point spread.
        columns.extend(
            points[i * dim..(i + 1) * dim]
                .iter()
                .zip(query)
                .map(|(p, q)| p - q),
        );
        columns.push(1.0);
    }
    let cost = vec![0.0; order.len()];
    let mut rhs = vec![0.0; m];
    rhs[dim] = 1.0;
    let sf = StandardForm {
        rows: m,
        columns: &columns,
        cost: &cost,
        rhs,
    };
    let mut simplex = RevisedSimplex::new(&sf);
    match simplex.phase_one()? {
        PhaseOne::Infeasible => Ok(None),
        PhaseOne::Feasible => Ok(Some(
            simplex
                .basis
                .iter()
                .zip(&simplex.values)
                .filter(|(&j, &w)| j < order.len() && w > 0.0)
                .map(|(&j, &w)| (order[j], w))
                .collect(),
        )),
    }
}

/// `minimize cost . y  s.t.  columns y = rhs, y >= 0`. Column `j` occupies
/// `columns[j * rows .. (j + 1) * rows]`.
struct StandardForm<'a> {
    rows: usize,
    columns: &'a [f64],
    cost: &'a [f64],
    rhs: Vec<f64>,
}

impl StandardForm<'_> {
    fn num_columns(&self) -> usize {
        self.cost.len()
    }

    fn column(&self, j: usize) -> &[f64] {
        &self.columns[j * self.rows..(j + 1) * self.rows]
    }
}

enum PhaseOne {
    Feasible,
    Infeasible,
}

struct RevisedSimplex<'a> {
    sf: &'a StandardForm<'a>,
    /// +1 or -1 per row so the working right-hand side is nonnegative.
    sign: Vec<f64>,
    b: Vec<f64>,
    /// Variable ids; `n + i` is the artificial for row `i`.
    basis: Vec<usize>,
    values: Vec<f64>,
    in_basis: Vec<bool>,
    lu: Option<Lu>,
    phase_one: bool,
}

impl<'a> RevisedSimplex<'a> {
    fn new(sf: &'a StandardForm<'a>) -> Self {
        let m = sf.rows;
        let n = sf.num_columns();
        let sign: Vec<f64> = sf
            .rhs
            .iter()
            .map(|&v| if v < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let b: Vec<f64> = sf.rhs.iter().zip(&sign).map(|(v, s)| v * s).collect();
        let mut in_basis = vec![false; n + m];
        in_basis[n..].iter_mut().for_each(|f| *f = true);
        Self {
            sf,
            sign,
            values: b.clone(),
            b,
            basis: (n..n + m).collect(),
            in_basis,
            lu: None,
            phase_one: true,
        }
    }

    fn n(&self) -> usize {
        self.sf.num_columns()
    }

    /// Working (sign-adjusted) column of variable `j`.
    fn column_into(&self, j: usize, out: &mut [f64]) {
        let n = self.n();
        if j >= n {
            out.iter_mut().for_each(|v| *v = 0.0);
            out[j - n] = 1.0;
        } else {
            for ((o, a), s) in out.iter_mut().zip(self.sf.column(j)).zip(&self.sign) {
                *o = a * s;
            }
        }
    }

    fn cost(&self, j: usize) -> f64 {
        let n = self.n();
        match (self.phase_one, j >= n) {
            (true, true) => 1.0,
            (true, false) => 0.0,
            (false, true) => 0.0,
            (false, false) => self.sf.cost[j],
        }
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.sf.rows;
        let mut bmat = vec![0.0; m * m];
        let mut col = vec![0.0; m];
        for (k, &j) in self.basis.iter().enumerate() {
            self.column_into(j, &mut col);
            for i in 0..m {
                bmat[i * m + k] = col[i];
            }
        }
        let lu = Lu::factor(&bmat, m).map_err(|_| LpError::Invalid("singular basis".into()))?;
        self.values = lu.solve(&self.b);
        // Round-off can push degenerate basics slightly negative.
        self.values
            .iter_mut()
            .filter(|v| **v < 0.0 && **v > -TIGHT_TOL)
            .for_each(|v| *v = 0.0);
        self.lu = Some(lu);
        Ok(())
    }

    fn pi(&self) -> Vec<f64> {
        let c_b: Vec<f64> = self.basis.iter().map(|&j| self.cost(j)).collect();
        self.lu.as_ref().expect("factored").solve_transpose(&c_b)
    }

    /// Runs simplex iterations for the current phase until optimal.
    fn iterate(&mut self) -> Result<(), LpError> {
        let m = self.sf.rows;
        let n = self.n();
        let mut col = vec![0.0; m];
        for _ in 0..MAX_ITERATIONS {
            self.refactor()?;
            let pi = self.pi();
            // Bland: first eligible column in index order. Artificials never re-enter.
            let mut entering = None;
            for j in 0..n {
                if self.in_basis[j] {
                    continue;
                }
                let a = self.sf.column(j);
                let mut d = self.cost(j);
                for i in 0..m {
                    d -= pi[i] * self.sign[i] * a[i];
                }
                if d < -PRICE_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(q) = entering else {
                return Ok(());
            };
            self.column_into(q, &mut col);
            let u = self.lu.as_ref().expect("factored").solve(&col);
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                if u[r] > PIVOT_TOL {
                    let ratio = self.values[r].max(0.0) / u[r];
                    let better = match leave {
                        None => true,
                        Some((lr, best)) => {
                            ratio < best || (ratio == best && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.in_basis[self.basis[r]] = false;
            self.in_basis[q] = true;
            self.basis[r] = q;
        }
        Err(LpError::IterationLimit)
    }

    fn phase_one(&mut self) -> Result<PhaseOne, LpError> {
        self.phase_one = true;
        self.iterate()?;
        let n = self.n();
        let infeasibility: f64 = self
            .basis
            .iter()
            .zip(&self.values)
            .filter(|(&j, _)| j >= n)
            .map(|(_, &v)| v)
            .sum();
        if infeasibility > TIGHT_TOL {
            return Ok(PhaseOne::Infeasible);
        }
        self.drive_out_artificials()?;
        Ok(PhaseOne::Feasible)
    }

    /// Pivots zero-level artificials out of the basis where some real column
    /// can replace them; the rest sit on redundant rows and stay at zero.
    fn drive_out_artificials(&mut self) -> Result<(), LpError> {
        let m = self.sf.rows;
        let n = self.n();
        let mut col = vec![0.0; m];
        for r in 0..m {
            if self.basis[r] < n {
                continue;
            }
            self.refactor()?;
            let mut e = vec![0.0; m];
            e[r] = 1.0;
            let rho = self.lu.as_ref().expect("factored").solve_transpose(&e);
            let replacement = (0..n).filter(|&j| !self.in_basis[j]).find(|&j| {
                self.column_into(j, &mut col);
                dot(&rho, &col).abs() > 1e-9
            });
            if let Some(j) = replacement {
                self.in_basis[self.basis[r]] = false;
                self.in_basis[j] = true;
                self.basis[r] = j;
            }
        }
        self.refactor()
    }

    fn phase_two(&mut self) -> Result<(), LpError> {
        self.phase_one = false;
        self.iterate()
    }

    /// Primal solution: multipliers of the original (unsigned) rows.
    fn multipliers(&self) -> Vec<f64> {
        self.pi()
            .iter()
            .zip(&self.sign)
            .map(|(p, s)| p * s)
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_constraint() {
        let lp = LinearProgram::new(vec![1.0], vec![1.0], vec![3.0]).unwrap();
        let sol = solve_small_lp(&lp).unwrap();
        assert!((sol.point[0] - 3.0).abs() < 1e-12);
        assert!((sol.objective - 3.0).abs() < 1e-12);
        assert_eq!(sol.tight, vec![0]);
    }

    #[test]
    fn two_dimensional_vertex() {
        // Candidate vertices: (1,1.5) obj 2.5, (0.5,2) obj 2.5, (1,2) infeasible.
        let lp = LinearProgram::new(
            vec![1.0, 1.0],
            vec![1.0, 0.0, 0.0, 1.0, 1.0, 1.0],
            vec![1.0, 2.0, 2.5],
        )
        .unwrap();
        let sol = solve_small_lp(&lp).unwrap();
        assert!((sol.objective - 2.5).abs() < 1e-12);
        assert!(sol.tight.contains(&2));
        for i in 0..3 {
            assert!(lp.slack(i, &sol.point) >= -1e-12);
        }
    }

    #[test]
    fn no_constraints_is_unbounded() {
        let lp = LinearProgram::new(vec![1.0], vec![], vec![]).unwrap();
        assert_eq!(solve_small_lp(&lp).unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn open_direction_is_unbounded() {
        // maximize v1 + v2 with only v1 <= 1.
        let lp = LinearProgram::new(vec![1.0, 1.0], vec![1.0, 0.0], vec![1.0]).unwrap();
        assert_eq!(solve_small_lp(&lp).unwrap_err(), LpError::Unbounded);
    }

    #[test]
    fn contradictory_constraints_are_infeasible() {
        // v1 <= -1 and -v1 <= -1 (v1 >= 1).
        let lp = LinearProgram::new(vec![1.0], vec![1.0, -1.0], vec![-1.0, -1.0]).unwrap();
        assert_eq!(solve_small_lp(&lp).unwrap_err(), LpError::Infeasible);
        // Also infeasible when the objective direction is open.
        let lp = LinearProgram::new(
            vec![0.0, 1.0],
            vec![1.0, 0.0, -1.0, 0.0],
            vec![-1.0, -1.0],
        )
        .unwrap();
        assert_eq!(solve_small_lp(&lp).unwrap_err(), LpError::Infeasible);
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // maximize -v1 - v2 s.t. v1 >= 1, v2 >= 2  (as -v <= -b).
        let lp = LinearProgram::new(
            vec![-1.0, -1.0],
            vec![-1.0, 0.0, 0.0, -1.0],
            vec![-1.0, -2.0],
        )
        .unwrap();
        let sol = solve_small_lp(&lp).unwrap();
        assert!((sol.point[0] - 1.0).abs() < 1e-12);
        assert!((sol.point[1] - 2.0).abs() < 1e-12);
        assert!((sol.objective + 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_constraints_still_solve() {
        // Only v1 + v2 appears; optimum is a line, any point on it will do.
        let lp = LinearProgram::new(vec![1.0, 1.0], vec![1.0, 1.0, 2.0, 2.0], vec![1.0, 3.0])
            .unwrap();
        let sol = solve_small_lp(&lp).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-12);
        assert!(lp.slack(0, &sol.point).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(LinearProgram::new(vec![1.0], vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(LinearProgram::new(vec![], vec![], vec![]).is_err());
        assert!(LinearProgram::new(vec![f64::NAN], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn convex_combination_detects_hull() {
        let pts = [0.0, 1.0];
        let order = [0, 1];
        let inside = convex_combination(&pts, 1, &[0.25], &order).unwrap().unwrap();
        let total: f64 = inside.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(convex_combination(&pts, 1, &[1.5], &order).unwrap().is_none());
        assert!(convex_combination(&pts, 1, &[1.0], &order).unwrap().is_some());
    }
}
