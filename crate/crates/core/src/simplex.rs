//! Exact rational simplex.
//!
//! Dense tableau, two phases. The entering column is the one with the
//! largest reduced cost, except that after a degenerate pivot Bland's
//! smallest-index rule takes over until the objective moves again; the
//! leaving row always follows Bland. The method therefore cannot cycle.
//! Arithmetic is exact throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Scalar>,
    pub sense: Sense,
    pub rhs: Scalar,
}

/// `maximize objective . x` subject to the constraints, with `x_j >= 0`
/// unless `free[j]`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Scalar>,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub x: Vec<Scalar>,
    pub objective: Scalar,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<Scalar>) -> Self {
        let num_vars = objective.len();
        LinearProgram {
            num_vars,
            objective,
            free: vec![false; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn minimize(objective: Vec<Scalar>) -> Self {
        LinearProgram::maximize(objective.into_iter().map(|c| -c).collect())
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<Scalar>, sense: Sense, rhs: Scalar) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, sense, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Solve to optimality. Infeasible and unbounded programs are errors.
    ///
    /// The reported objective is always that of the maximization form.
    pub fn solve(&self) -> Result<LpSolution> {
        let mut tab = Tableau::build(self);
        tab.phase_one()?;
        tab.phase_two()?;
        let y = tab.primal();
        // Undo the split of free variables.
        let mut x = Vec::with_capacity(self.num_vars);
        for (j, col) in tab.var_cols.iter().enumerate() {
            let mut v = y[col.0].clone();
            if let Some(neg) = col.1 {
                v -= &y[neg];
            }
            debug_assert!(self.free[j] || !v.is_negative());
            x.push(v);
        }
        let objective = self
            .objective
            .iter()
            .zip(&x)
            .map(|(c, v)| c * v)
            .sum::<Scalar>();
        let sol = LpSolution {
            x,
            objective,
            pivots: tab.pivots,
        };
        self.check_feasible(&sol.x)?;
        Ok(sol)
    }

    fn check_feasible(&self, x: &[Scalar]) -> Result<()> {
        for (i, c) in self.constraints.iter().enumerate() {
            let lhs: Scalar = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let ok = match c.sense {
                Sense::Le => lhs <= c.rhs,
                Sense::Ge => lhs >= c.rhs,
                Sense::Eq => lhs == c.rhs,
            };
            if !ok {
                return Err(Error::Simplex(format!(
                    "solution violates constraint {i}"
                )));
            }
        }
        Ok(())
    }
}

/// Fraction-free tableau: every entry is an integer and the true value is
/// the entry divided by the common denominator `det`, which is the absolute
/// determinant of the current basis. Pivots use exact Bareiss updates, so no
/// gcd is ever taken.
struct Tableau {
    /// Constraint rows; the last entry of every row is the right-hand side.
    rows: Vec<Vec<BigInt>>,
    det: BigInt,
    /// Basic variable of each row.
    basis: Vec<usize>,
    /// Columns `[0, structural)` are split originals plus slacks.
    structural: usize,
    /// Artificial columns are `[structural, width)`.
    width: usize,
    /// Integer multiple of the maximization objective over the structural columns.
    cost: Vec<BigInt>,
    /// Column(s) for each original variable: positive part and optional negative part.
    var_cols: Vec<(usize, Option<usize>)>,
    pivots: usize,
}

/// Multiply by the lcm of the denominators and return integer numerators.
fn integer_row(values: &[Scalar]) -> Vec<BigInt> {
    let l = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    values
        .iter()
        .map(|v| v.numer() * (&l / v.denom()))
        .collect()
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for j in 0..lp.num_vars {
            if lp.free[j] {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            } else {
                var_cols.push((next, None));
                next += 1;
            }
        }
        let split = next;
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.sense != Sense::Eq)
            .count();
        let structural = split + slack_count;
        let artificial_count = lp
            .constraints
            .iter()
            .filter(|c| {
                let flipped = c.rhs.is_negative();
                match c.sense {
                    Sense::Eq => true,
                    Sense::Le => flipped,
                    Sense::Ge => !flipped,
                }
            })
            .count();
        let width = structural + artificial_count;

        let mut rows = Vec::with_capacity(lp.constraints.len());
        let mut basis = Vec::with_capacity(lp.constraints.len());
        let mut slack = split;
        let mut art = structural;
        for c in &lp.constraints {
            // Normalize to a non-negative right-hand side, then scale the row
            // to integers. Slack and artificial coefficients stay at +-1,
            // which only rescales those auxiliary variables.
            let flip = c.rhs.is_negative();
            let sense = match (c.sense, flip) {
                (Sense::Le, true) => Sense::Ge,
                (Sense::Ge, true) => Sense::Le,
                (s, _) => s,
            };
            let mut values: Vec<Scalar> = c.coeffs.clone();
            values.push(c.rhs.clone());
            if flip {
                for v in values.iter_mut() {
                    *v = -&*v;
                }
            }
            let ints = integer_row(&values);
            let mut row = vec![BigInt::zero(); width + 1];
            for (j, a) in ints[..lp.num_vars].iter().enumerate() {
                let (pos, neg) = var_cols[j];
                if let Some(neg) = neg {
                    row[neg] = -a;
                }
                row[pos] = a.clone();
            }
            row[width] = ints[lp.num_vars].clone();
            match sense {
                Sense::Le => {
                    row[slack] = BigInt::one();
                    basis.push(slack);
                    slack += 1;
                }
                Sense::Ge => {
                    row[slack] = -BigInt::one();
                    slack += 1;
                    row[art] = BigInt::one();
                    basis.push(art);
                    art += 1;
                }
                Sense::Eq => {
                    row[art] = BigInt::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }

        let mut split_cost = vec![Scalar::zero(); structural];
        for (j, c) in lp.objective.iter().enumerate() {
            let (pos, neg) = var_cols[j];
            split_cost[pos] = c.clone();
            if let Some(neg) = neg {
                split_cost[neg] = -c;
            }
        }
        Tableau {
            rows,
            det: BigInt::one(),
            basis,
            structural,
            width,
            cost: integer_row(&split_cost),
            var_cols,
            pivots: 0,
        }
    }

    fn rhs(&self, i: usize) -> &BigInt {
        &self.rows[i][self.width]
    }

    /// Bareiss pivot on `(r, e)`. `extra` is carried along like a row
    /// (the reduced-cost row during optimization).
    fn pivot(&mut self, r: usize, e: usize, extra: Option<&mut Vec<BigInt>>) {
        let p = self.rows[r][e].clone();
        let det = self.det.clone();
        let pivot_row = self.rows[r].clone();
        let update = |row: &mut Vec<BigInt>| {
            let f = row[e].clone();
            for (j, v) in row.iter_mut().enumerate() {
                let mut t = &*v * &p;
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    t -= &f * &pivot_row[j];
                }
                *v = if det.is_one() { t } else { t / &det };
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row);
            }
        }
        let mut extra = extra;
        if let Some(row) = extra.as_deref_mut() {
            update(row);
        }
        self.det = p;
        if self.det.is_negative() {
            self.det = -&self.det;
            for row in self.rows.iter_mut().chain(extra) {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
            }
        }
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// `det` times the reduced costs `c_j - c_B B^-1 A_j` for columns `< limit`.
    fn reduced_costs(&self, cost: &[BigInt], limit: usize) -> Vec<BigInt> {
        let mut red: Vec<BigInt> = (0..=self.width)
            .map(|j| {
                if j < limit {
                    cost.get(j).map_or_else(BigInt::zero, |c| c * &self.det)
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        for (i, row) in self.rows.iter().enumerate() {
            let Some(cb) = cost.get(self.basis[i]).filter(|c| !c.is_zero()) else {
                continue;
            };
            for (j, r) in red.iter_mut().enumerate().take(limit) {
                if !row[j].is_zero() {
                    *r -= cb * &row[j];
                }
            }
        }
        red
    }

    /// Primal simplex on columns `< limit` maximizing `cost`.
    fn optimize(&mut self, cost: &[BigInt], limit: usize) -> Result<()> {
        let mut red = self.reduced_costs(cost, limit);
        let mut stalled = false;
        loop {
            let entering = if stalled {
                (0..limit).find(|&j| red[j].is_positive())
            } else {
                (0..limit)
                    .filter(|&j| red[j].is_positive())
                    .fold(None, |best: Option<usize>, j| match best {
                        Some(b) if red[b] >= red[j] => Some(b),
                        _ => Some(j),
                    })
            };
            let Some(e) = entering else {
                return Ok(());
            };
            // Ratio test by cross-multiplication; ties go to the smallest
            // basic index.
            let mut leave: Option<usize> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(li) => {
                        let best = &self.rows[li];
                        let lhs = &row[self.width] * &best[e];
                        let rhs = &best[self.width] * &row[e];
                        lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[li])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
            let Some(r) = leave else {
                return Err(Error::Simplex("objective is unbounded".into()));
            };
            stalled = self.rhs(r).is_zero();
            self.pivot(r, e, Some(&mut red));
        }
    }

    fn phase_one(&mut self) -> Result<()> {
        if self.width == self.structural {
            return Ok(());
        }
        let mut cost = vec![BigInt::zero(); self.width];
        for c in cost[self.structural..].iter_mut() {
            *c = -BigInt::one();
        }
        self.optimize(&cost, self.width)?;
        let infeasible = (0..self.rows.len())
            .any(|i| self.basis[i] >= self.structural && !self.rhs(i).is_zero());
        if infeasible {
            return Err(Error::Simplex("program is infeasible".into()));
        }
        // Drive degenerate artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.structural {
                match (0..self.structural).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(e) => {
                        self.pivot(i, e, None);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        Ok(())
    }

    fn phase_two(&mut self) -> Result<()> {
        let cost = self.cost.clone();
        self.optimize(&cost, self.structural)
    }

    fn primal(&self) -> Vec<Scalar> {
        let mut y = vec![Scalar::zero(); self.width];
        for (i, &b) in self.basis.iter().enumerate() {
            y[b] = Scalar::new(self.rhs(i).clone(), self.det.clone());
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int};

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::maximize(v(&[3, 5]));
        lp.add(v(&[1, 0]), Sense::Le, int(4));
        lp.add(v(&[0, 2]), Sense::Le, int(12));
        lp.add(v(&[3, 2]), Sense::Le, int(18));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.x, v(&[2, 6]));
        assert_eq!(sol.objective, int(36));
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + y, x + 2y >= 3, x - y = 0 -> x = y = 1
        let mut lp = LinearProgram::minimize(v(&[1, 1]));
        lp.add(v(&[1, 2]), Sense::Ge, int(3));
        lp.add(v(&[1, -1]), Sense::Eq, int(0));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.x, v(&[1, 1]));
        assert_eq!(sol.objective, int(-2));
    }

    #[test]
    fn free_variables() {
        // min e, -e <= c - 1 <= e, -e <= c + 2 <= e: c = -1/2, e = 3/2
        let mut lp = LinearProgram::minimize(v(&[0, 1]));
        lp.set_free(0);
        lp.add(v(&[1, -1]), Sense::Le, int(1));
        lp.add(v(&[-1, -1]), Sense::Le, int(-1));
        lp.add(v(&[1, -1]), Sense::Le, int(-2));
        lp.add(v(&[-1, -1]), Sense::Le, int(2));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.x, vec![frac(-1, 2), frac(3, 2)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::maximize(v(&[1]));
        lp.add(v(&[1]), Sense::Le, int(1));
        lp.add(v(&[1]), Sense::Ge, int(2));
        assert!(matches!(lp.solve(), Err(Error::Simplex(_))));

        let mut lp = LinearProgram::maximize(v(&[1, 0]));
        lp.add(v(&[0, 1]), Sense::Le, int(1));
        assert!(matches!(lp.solve(), Err(Error::Simplex(_))));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::maximize(v(&[1, 2]));
        lp.add(v(&[1, 1]), Sense::Eq, int(1));
        lp.add(v(&[2, 2]), Sense::Eq, int(2));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.x, v(&[0, 1]));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the largest-coefficient rule.
        let mut lp = LinearProgram::maximize(vec![frac(3, 4), int(-20), frac(1, 2), int(-6)]);
        lp.add(vec![frac(1, 4), int(-8), int(-1), int(9)], Sense::Le, int(0));
        lp.add(vec![frac(1, 2), int(-12), frac(-1, 2), int(3)], Sense::Le, int(0));
        lp.add(v(&[0, 0, 1, 0]), Sense::Le, int(1));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.objective, frac(5, 4));
    }
}
