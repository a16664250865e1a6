//! Exact rational linear programming.
//!
//! `solve` minimizes `<c, x>` over `{x : Ax <= b, Ex = d}` with `x` free.
//! Equalities are eliminated up front by parametrizing their solution set
//! `x = x0 + K lambda`; the remaining inequality system is solved by a dense
//! two-phase tableau simplex with Bland's rule, so every run terminates and
//! is reproducible. Optimal results carry dual multipliers that certify the
//! optimum exactly (see [`verify_certificate`]).

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::linalg::{solve_affine, AffineSolution};
use crate::geometry::{QVector, Rational};
use crate::polyhedron::{Constraint, Polyhedron};

/// `f(x) = <c, x>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearObjective {
    pub c: QVector,
}

impl LinearObjective {
    pub fn new(c: QVector) -> Self {
        LinearObjective { c }
    }

    pub fn eval(&self, x: &QVector) -> Rational {
        self.c.dot(x)
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub point: QVector,
    pub value: Rational,
    /// `y >= 0`, one per inequality row, with `c + A^T y + E^T mu = 0`.
    pub ineq_duals: Vec<Rational>,
    /// `mu`, one per equality row.
    pub eq_duals: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal(_) => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn solution(&self) -> Option<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn into_solution(self) -> Result<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Ok(s),
            other => Err(Error::NotOptimal(other.status())),
        }
    }

    pub fn point(&self) -> Option<&QVector> {
        self.solution().map(|s| &s.point)
    }

    pub fn value(&self) -> Option<&Rational> {
        self.solution().map(|s| &s.value)
    }
}

/// Minimizes `c` over `p`.
pub fn solve(p: &Polyhedron, c: &LinearObjective) -> Result<LpOutcome> {
    if c.dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: p.ambient_dim(),
            found: c.dim(),
        });
    }
    Ok(solve_unchecked(p, &c.c))
}

/// `M(P, c)`: `p` with the equality `<c, x> = min` appended.
pub fn optimal_face(p: &Polyhedron, c: &LinearObjective) -> Result<Polyhedron> {
    let sol = solve(p, c)?.into_solution()?;
    Ok(p.with_equalities(vec![Constraint::new(c.c.clone(), sol.value)]))
}

/// Checks an optimal solution against its dual multipliers, exactly:
/// primal feasibility, `y >= 0`, stationarity `c + A^T y + E^T mu = 0`,
/// and zero duality gap `<c, x> = -(b.y + d.mu)`.
pub fn verify_certificate(p: &Polyhedron, c: &LinearObjective, sol: &LpSolution) -> bool {
    if !p.contains(&sol.point) || c.eval(&sol.point) != sol.value {
        return false;
    }
    if sol.ineq_duals.len() != p.ineqs().len() || sol.eq_duals.len() != p.eqs().len() {
        return false;
    }
    if sol.ineq_duals.iter().any(Signed::is_negative) {
        return false;
    }
    let mut grad = c.c.clone();
    let mut bound = Rational::zero();
    let rows = p.ineqs().iter().zip(&sol.ineq_duals);
    let eq_rows = p.eqs().iter().zip(&sol.eq_duals);
    for (row, y) in rows.chain(eq_rows) {
        if y.is_zero() {
            continue;
        }
        grad = &grad + &row.a.scale(y);
        bound -= &row.b * y;
    }
    grad.is_zero() && bound == sol.value
}

fn solve_unchecked(p: &Polyhedron, c: &QVector) -> LpOutcome {
    let n = p.ambient_dim();
    let eq_rows: Vec<QVector> = p.eqs().iter().map(|r| r.a.clone()).collect();
    let eq_rhs: Vec<Rational> = p.eqs().iter().map(|r| r.b.clone()).collect();
    let Some(AffineSolution { particular, kernel }) = solve_affine(&eq_rows, &eq_rhs, n) else {
        return LpOutcome::Infeasible;
    };
    let k = kernel.len();

    // Reduced inequality system over lambda: (A K) lambda <= b - A x0.
    // Zero rows are checked and dropped; identical rows are merged.
    let mut reduced: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut row_of: Vec<Option<usize>> = Vec::with_capacity(p.ineqs().len());
    for row in p.ineqs() {
        let coeffs: Vec<Rational> = kernel.iter().map(|col| row.a.dot(col)).collect();
        let rhs = &row.b - row.a.dot(&particular);
        if coeffs.iter().all(Zero::is_zero) {
            if rhs.is_negative() {
                return LpOutcome::Infeasible;
            }
            row_of.push(None);
            continue;
        }
        match reduced.iter().position(|(a, b)| *a == coeffs && *b == rhs) {
            Some(i) => row_of.push(Some(i)),
            None => {
                row_of.push(Some(reduced.len()));
                reduced.push((coeffs, rhs));
            }
        }
    }
    let reduced_cost: Vec<Rational> = kernel.iter().map(|col| c.dot(col)).collect();

    let (lambda, slack_duals) = if k == 0 {
        (Vec::new(), vec![Rational::zero(); reduced.len()])
    } else {
        match simplex(&reduced, &reduced_cost) {
            Simplex::Optimal { lambda, duals } => (lambda, duals),
            Simplex::Infeasible => return LpOutcome::Infeasible,
            Simplex::Unbounded => return LpOutcome::Unbounded,
        }
    };

    let mut point = particular;
    for (col, l) in kernel.iter().zip(&lambda) {
        if !l.is_zero() {
            point = &point + &col.scale(l);
        }
    }
    let value = c.dot(&point);

    // A duplicate row carries its multiplier on the first copy only.
    let mut seen = vec![false; reduced.len()];
    let ineq_duals: Vec<Rational> = row_of
        .iter()
        .map(|r| match r {
            Some(i) if !seen[*i] => {
                seen[*i] = true;
                slack_duals[*i].clone()
            }
            _ => Rational::zero(),
        })
        .collect();

    // Remaining stationarity residual lies in the row space of E.
    let mut residual = c.clone();
    for (row, y) in p.ineqs().iter().zip(&ineq_duals) {
        if !y.is_zero() {
            residual = &residual + &row.a.scale(y);
        }
    }
    let eq_duals = if p.eqs().is_empty() {
        Vec::new()
    } else {
        let m = p.eqs().len();
        let transposed: Vec<QVector> = (0..n)
            .map(|j| p.eqs().iter().map(|r| r.a[j].clone()).collect())
            .collect();
        let target: Vec<Rational> = residual.iter().map(|v| -v).collect();
        solve_affine(&transposed, &target, m)
            .map(|s| s.particular.into_coords())
            .expect("stationarity residual must lie in the equality row space")
    };

    LpOutcome::Optimal(LpSolution {
        point,
        value,
        ineq_duals,
        eq_duals,
    })
}

enum Simplex {
    Optimal {
        lambda: Vec<Rational>,
        duals: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

/// Dense simplex tableau over standard-form columns.
///
/// Column layout: `lambda+` (k), `lambda-` (k), slacks (m), artificials.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    obj: Vec<Rational>,
    obj_rhs: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for &j in &nz {
                let delta = &factor * &pivot_row[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.obj[col].is_zero() {
            let factor = self.obj[col].clone();
            for &j in &nz {
                let delta = &factor * &pivot_row[j];
                self.obj[j] -= delta;
            }
            self.obj_rhs -= &factor * &pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// Resets the reduced-cost row for `cost` under the current basis.
    fn price(&mut self, cost: &[Rational]) {
        self.obj = cost.to_vec();
        self.obj_rhs = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in self.obj.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *o -= cb * a;
                }
            }
            self.obj_rhs -= cb * &self.rhs[i];
        }
    }

    /// Bland's rule: lowest-index improving column enters; ratio ties go to
    /// the lowest-index basic variable.
    fn optimize(&mut self, ncols: usize) -> bool {
        loop {
            let Some(enter) = (0..ncols).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

fn simplex(rows: &[(Vec<Rational>, Rational)], cost: &[Rational]) -> Simplex {
    let m = rows.len();
    let k = cost.len();
    let n_struct = 2 * k + m;
    let negated: Vec<bool> = rows.iter().map(|(_, b)| b.is_negative()).collect();
    let n_art = negated.iter().filter(|&&x| x).count();
    let ncols = n_struct + n_art;

    let mut table = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = n_struct;
    for (i, (a, b)) in rows.iter().enumerate() {
        let sign = if negated[i] {
            -Rational::one()
        } else {
            Rational::one()
        };
        let mut row = vec![Rational::zero(); ncols];
        for (j, v) in a.iter().enumerate() {
            if !v.is_zero() {
                row[j] = v * &sign;
                row[k + j] = -(v * &sign);
            }
        }
        row[2 * k + i] = sign.clone();
        if negated[i] {
            row[art] = Rational::one();
            basis.push(art);
            art += 1;
        } else {
            basis.push(2 * k + i);
        }
        table.push(row);
        rhs.push(b * &sign);
    }
    let mut t = Tableau {
        rows: table,
        rhs,
        basis,
        obj: Vec::new(),
        obj_rhs: Rational::zero(),
    };

    if n_art > 0 {
        let mut phase1 = vec![Rational::zero(); ncols];
        for c in phase1.iter_mut().skip(n_struct) {
            *c = Rational::one();
        }
        t.price(&phase1);
        t.optimize(ncols);
        if !t.obj_rhs.is_zero() {
            return Simplex::Infeasible;
        }
        // Drive zero-level artificials out of the basis; rows where that is
        // impossible are redundant and removed.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= n_struct {
                match (0..n_struct).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in t.rows.iter_mut() {
            row.truncate(n_struct);
        }
    }

    let mut phase2 = vec![Rational::zero(); n_struct];
    for (j, cj) in cost.iter().enumerate() {
        phase2[j] = cj.clone();
        phase2[k + j] = -cj.clone();
    }
    t.price(&phase2);
    if !t.optimize(n_struct) {
        return Simplex::Unbounded;
    }

    let mut values = vec![Rational::zero(); n_struct];
    for (i, &b) in t.basis.iter().enumerate() {
        values[b] = t.rhs[i].clone();
    }
    let lambda = (0..k).map(|j| &values[j] - &values[k + j]).collect();
    // The reduced cost of slack i is the multiplier of row i (original sign).
    let duals = (0..m).map(|i| t.obj[2 * k + i].clone()).collect();
    Simplex::Optimal { lambda, duals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, rat};

    fn v(c: &[i64]) -> QVector {
        QVector::from_ints(c)
    }

    fn unit_interval() -> Polyhedron {
        Polyhedron::from_rows(1, &[(&[1], 1), (&[-1], 0)], &[]).unwrap()
    }

    #[test]
    fn minimize_over_interval() {
        let p = unit_interval();
        let out = solve(&p, &LinearObjective::new(v(&[1]))).unwrap();
        let sol = out.solution().unwrap();
        assert_eq!(sol.point, v(&[0]));
        assert_eq!(sol.value, int(0));
        assert!(verify_certificate(&p, &LinearObjective::new(v(&[1])), sol));

        let face = optimal_face(&p, &LinearObjective::new(v(&[1]))).unwrap();
        assert!(face.contains(&v(&[0])));
        assert!(!face.contains(&v(&[1])));
    }

    #[test]
    fn statuses() {
        let empty = Polyhedron::from_rows(1, &[(&[1], 0), (&[-1], -1)], &[]).unwrap();
        assert_eq!(
            solve(&empty, &LinearObjective::new(v(&[1])))
                .unwrap()
                .status(),
            LpStatus::Infeasible
        );
        let ray = Polyhedron::from_rows(1, &[(&[-1], 0)], &[]).unwrap();
        assert_eq!(
            solve(&ray, &LinearObjective::new(v(&[-1])))
                .unwrap()
                .status(),
            LpStatus::Unbounded
        );
        let bad_eq = Polyhedron::from_rows(2, &[], &[(&[1, 1], 1), (&[2, 2], 3)]).unwrap();
        assert_eq!(
            solve(&bad_eq, &LinearObjective::new(v(&[0, 0])))
                .unwrap()
                .status(),
            LpStatus::Infeasible
        );
        assert!(matches!(
            solve(&unit_interval(), &LinearObjective::new(v(&[1, 1]))),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn equalities_and_degenerate_vertices() {
        // Pyramid apex with four tight facets (degenerate vertex).
        let p = Polyhedron::from_rows(
            3,
            &[
                (&[1, 0, 1], 1),
                (&[-1, 0, 1], 1),
                (&[0, 1, 1], 1),
                (&[0, -1, 1], 1),
                (&[0, 0, -1], 0),
            ],
            &[],
        )
        .unwrap();
        let c = LinearObjective::new(v(&[0, 0, -1]));
        let out = solve(&p, &c).unwrap();
        let sol = out.solution().unwrap();
        assert_eq!(sol.value, int(-1));
        assert_eq!(sol.point, v(&[0, 0, 1]));
        assert!(verify_certificate(&p, &c, sol));

        let slice = p.with_equalities(vec![Constraint::new(v(&[1, 1, 0]), rat(1, 2))]);
        let c2 = LinearObjective::new(v(&[1, 0, -1]));
        let sol = solve(&slice, &c2).unwrap().into_solution().unwrap();
        assert!(verify_certificate(&slice, &c2, &sol));
    }

    #[test]
    fn redundant_and_duplicate_rows() {
        let p = Polyhedron::from_rows(
            2,
            &[
                (&[1, 0], 1),
                (&[1, 0], 1),
                (&[0, 1], 1),
                (&[1, 1], 5),
                (&[-1, 0], 0),
                (&[0, -1], 0),
            ],
            &[(&[1, -1], 0), (&[2, -2], 0)],
        )
        .unwrap();
        let c = LinearObjective::new(v(&[-1, -2]));
        let sol = solve(&p, &c).unwrap().into_solution().unwrap();
        assert_eq!(sol.point, v(&[1, 1]));
        assert_eq!(sol.value, int(-3));
        assert!(verify_certificate(&p, &c, &sol));
    }
}
