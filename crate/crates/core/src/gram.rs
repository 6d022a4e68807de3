//! Discrete Chebyshev (Gram) polynomials over `D^in_n`.
//!
//! The family is kept in monic form `psi_d` together with the exact squared
//! norms `N_d = (psi_d, psi_d)`. The unit-norm polynomials `psi_d / sqrt(N_d)`
//! have irrational coefficients, so every quantity that involves them is
//! carried as a square.

use num_traits::{One, Zero};

use crate::arith::{factorial, frac, int, pow_u, DensePoly, Grid, Scalar};
use crate::error::{Error, Result};

/// Monic orthogonal family `psi_0 .. psi_max_deg` for parameter `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoBasis {
    n: usize,
    psi: Vec<DensePoly>,
    norm_sq: Vec<Scalar>,
}

impl OrthoBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_deg(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn psi(&self, d: usize) -> &DensePoly {
        &self.psi[d]
    }

    pub fn polys(&self) -> &[DensePoly] {
        &self.psi
    }

    /// `N_d = (psi_d, psi_d)`.
    pub fn norm_sq(&self, d: usize) -> &Scalar {
        &self.norm_sq[d]
    }

    pub fn norms_sq(&self) -> &[Scalar] {
        &self.norm_sq
    }
}

fn check_degree(n: usize, max_deg: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n must be positive"));
    }
    if max_deg >= n {
        return Err(Error::param(format!(
            "max-deg must be < n (got max-deg {max_deg}, n {n})"
        )));
    }
    Ok(())
}

/// Gram–Schmidt on `1, x, x^2, ...` under the normalized sum over `D^in_n`.
///
/// Each polynomial is carried alongside its values on the grid, so inner
/// products are plain dot products and nothing is re-evaluated.
pub fn build_basis_gs(n: usize, max_deg: usize) -> Result<OrthoBasis> {
    Ok(gs_with_values(n, max_deg)?.0)
}

/// [`build_basis_gs`] together with the values of each `psi_d` on `D^in_n`.
pub(crate) fn gs_with_values(n: usize, max_deg: usize) -> Result<(OrthoBasis, Vec<Vec<Scalar>>)> {
    check_degree(n, max_deg)?;
    let grid = Grid::inner(n)?;
    let scale = frac(1, n as i64);
    let dot = |a: &[Scalar], b: &[Scalar]| -> Scalar {
        a.iter().zip(b).map(|(x, y)| x * y).sum::<Scalar>() * &scale
    };
    let mut psi: Vec<DensePoly> = Vec::with_capacity(max_deg + 1);
    let mut values: Vec<Vec<Scalar>> = Vec::with_capacity(max_deg + 1);
    let mut norm_sq: Vec<Scalar> = Vec::with_capacity(max_deg + 1);
    let mut mono_values = vec![Scalar::one(); n];
    for d in 0..=max_deg {
        if d > 0 {
            for (v, x) in mono_values.iter_mut().zip(grid.points()) {
                *v *= x;
            }
        }
        let mut next = DensePoly::monomial(d);
        let mut next_values = mono_values.clone();
        for ((prev, prev_values), nsq) in psi.iter().zip(&values).zip(&norm_sq) {
            let proj = dot(&mono_values, prev_values) / nsq;
            if !proj.is_zero() {
                next = &next - &prev.scale(&proj);
                for (v, p) in next_values.iter_mut().zip(prev_values) {
                    *v -= &proj * p;
                }
            }
        }
        let nsq = dot(&next_values, &next_values);
        if nsq.is_zero() {
            return Err(Error::Internal(format!(
                "degenerate Gram-Schmidt norm at degree {d} for n = {n}"
            )));
        }
        psi.push(next);
        values.push(next_values);
        norm_sq.push(nsq);
    }
    Ok((OrthoBasis { n, psi, norm_sq }, values))
}

/// `alpha_{d-1}^2 = n^2 (d^2 - 1/4) / (d^2 (n^2 - d^2))` for `1 <= d <= n-1`.
pub fn alpha_sq(n: usize, d: usize) -> Result<Scalar> {
    if d == 0 || d >= n {
        return Err(Error::param(format!(
            "alpha_sq needs 1 <= d <= n-1 (got n {n}, d {d})"
        )));
    }
    let (n, d) = (n as i64, d as i64);
    let num = int(n * n) * (int(d * d) - frac(1, 4));
    Ok(num / int(d * d * (n * n - d * d)))
}

/// Ratio `N_d / N_{d-1} = 1 / (4 alpha_{d-1}^2)`.
fn norm_ratio(n: usize, d: usize) -> Result<Scalar> {
    Ok(Scalar::one() / (int(4) * alpha_sq(n, d)?))
}

/// Monic three-term recurrence
/// `psi_d = x psi_{d-1} - (N_{d-1}/N_{d-2}) psi_{d-2}`, with the norm ratios
/// taken from the closed-form `alpha` coefficients.
pub fn build_basis_recurrence(n: usize, max_deg: usize) -> Result<OrthoBasis> {
    check_degree(n, max_deg)?;
    let mut psi = vec![DensePoly::constant(Scalar::one())];
    let mut norm_sq = vec![Scalar::one()];
    for d in 1..=max_deg {
        let mut next = psi[d - 1].shift_up();
        if d >= 2 {
            next = &next - &psi[d - 2].scale(&norm_ratio(n, d - 1)?);
        }
        norm_sq.push(&norm_sq[d - 1] * norm_ratio(n, d)?);
        psi.push(next);
    }
    Ok(OrthoBasis { n, psi, norm_sq })
}

/// Coefficients of a polynomial in a Gram basis.
#[derive(Clone, Debug)]
pub struct GramExpansion<'a> {
    pub basis: &'a OrthoBasis,
    /// Coefficients against the monic `psi_d`.
    pub psi_coeffs: Vec<Scalar>,
    /// `c_d^2 = psi_coeffs[d]^2 * N_d`, the squared unit-norm coefficients.
    pub normalized_coeff_sq: Vec<Scalar>,
}

impl GramExpansion<'_> {
    pub fn reconstruct(&self) -> DensePoly {
        self.psi_coeffs
            .iter()
            .zip(self.basis.polys())
            .fold(DensePoly::zero(), |acc, (c, p)| &acc + &p.scale(c))
    }
}

pub fn gram_expand<'a>(p: &DensePoly, basis: &'a OrthoBasis) -> Result<GramExpansion<'a>> {
    let limit = basis.max_deg() as i64;
    if p.degree() > limit {
        return Err(Error::DegreeOverflow {
            degree: p.degree(),
            limit,
        });
    }
    let len = (p.degree() + 1).max(0) as usize;
    let mut psi_coeffs = vec![Scalar::zero(); len];
    let mut rest = p.clone();
    for d in (0..len).rev() {
        let c = rest.coeff(d);
        if !c.is_zero() {
            rest = &rest - &basis.psi(d).scale(&c);
        }
        psi_coeffs[d] = c;
    }
    debug_assert!(rest.is_zero());
    let normalized_coeff_sq = psi_coeffs
        .iter()
        .enumerate()
        .map(|(d, c)| c * c * basis.norm_sq(d))
        .collect();
    Ok(GramExpansion {
        basis,
        psi_coeffs,
        normalized_coeff_sq,
    })
}

/// Square of the leading unit-norm Gram coefficient of `x^k` for parameter `n`.
///
/// `x^k = psi_k + lower terms`, so this is just `N_k`.
pub fn monomial_leading_coeff_sq(n: usize, k: usize) -> Result<Scalar> {
    if k == 0 || k >= n {
        return Err(Error::param(format!("need 1 <= k < n (got n {n}, k {k})")));
    }
    let basis = build_basis_gs(n, k)?;
    let exp = gram_expand(&DensePoly::monomial(k), &basis)?;
    Ok(exp.normalized_coeff_sq[k].clone())
}

/// `prod_{d=1}^{k} 1 / (4 alpha_{d-1}^2)`; equals [`monomial_leading_coeff_sq`].
pub fn leading_coeff_sq_product(n: usize, k: usize) -> Result<Scalar> {
    if k == 0 || k >= n {
        return Err(Error::param(format!("need 1 <= k < n (got n {n}, k {k})")));
    }
    (1..=k).try_fold(Scalar::one(), |acc, d| Ok(acc * norm_ratio(n, d)?))
}

/// `rho(n, k) = C^2 (2n)^{2k} (n-k)! / (n+k)!`, how far the squared leading
/// coefficient sits from the factorial closed form.
pub fn leading_coeff_ratio(n: usize, k: usize) -> Result<Scalar> {
    let c_sq = monomial_leading_coeff_sq(n, k)?;
    let (n, k) = (n as u64, k as u64);
    let scale = Scalar::new(pow_u(2 * n, 2 * k) * factorial(n - k), factorial(n + k));
    Ok(c_sq * scale)
}

/// Best mean-square approximation of degree `<= deg` and its squared error.
///
/// When `deg >= deg p` the polynomial itself is returned with error 0.
pub fn l2_best_approx(p: &DensePoly, basis: &OrthoBasis, deg: usize) -> Result<(DensePoly, Scalar)> {
    if p.degree() <= deg as i64 {
        return Ok((p.clone(), Scalar::zero()));
    }
    let exp = gram_expand(p, basis)?;
    let approx = exp
        .psi_coeffs
        .iter()
        .zip(basis.polys())
        .take(deg + 1)
        .fold(DensePoly::zero(), |acc, (c, q)| &acc + &q.scale(c));
    let err_sq = exp.normalized_coeff_sq[deg + 1..].iter().sum();
    Ok((approx, err_sq))
}

/// Squared top normalized Gram coefficient of `p` (the Gram-orthogonality
/// lower bound on any lower-degree approximation over `D^in_n`).
pub fn top_coeff_sq(p: &DensePoly, n: usize) -> Result<Scalar> {
    if p.degree() < 0 {
        return Ok(Scalar::zero());
    }
    let basis = build_basis_gs(n, p.degree() as usize)?;
    let exp = gram_expand(p, &basis)?;
    Ok(exp.normalized_coeff_sq.last().cloned().unwrap_or_else(Scalar::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::inner_product;

    fn poly(c: &[(i64, i64)]) -> DensePoly {
        DensePoly::new(c.iter().map(|&(a, b)| frac(a, b)).collect())
    }

    #[test]
    fn gs_examples() {
        let b = build_basis_gs(2, 1).unwrap();
        assert_eq!(b.psi(0), &DensePoly::constant(int(1)));
        assert_eq!(b.psi(1), &DensePoly::x());
        assert_eq!(b.norms_sq(), &[int(1), frac(1, 4)]);

        let b = build_basis_gs(4, 2).unwrap();
        assert_eq!(b.psi(2), &poly(&[(-5, 16), (0, 1), (1, 1)]));
        assert_eq!(b.norm_sq(2), &frac(1, 16));

        let b = build_basis_gs(3, 1).unwrap();
        assert_eq!(b.psi(1), &DensePoly::x());
        assert_eq!(b.norm_sq(1), &frac(8, 27));
    }

    #[test]
    fn degree_cap() {
        assert!(build_basis_gs(4, 4).is_err());
        assert!(build_basis_recurrence(4, 4).is_err());
        assert!(build_basis_gs(0, 0).is_err());
        assert!(build_basis_gs(1, 0).is_ok());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_sq(2, 1).unwrap(), int(1));
        assert_eq!(alpha_sq(4, 1).unwrap(), frac(4, 5));
        assert_eq!(alpha_sq(4, 2).unwrap(), frac(5, 4));
        assert!(alpha_sq(4, 0).is_err());
        assert!(alpha_sq(4, 4).is_err());
    }

    #[test]
    fn recurrence_examples() {
        let b = build_basis_recurrence(4, 2).unwrap();
        assert_eq!(b.psi(2), &poly(&[(-5, 16), (0, 1), (1, 1)]));
        // psi_2 = x psi_1 - (N_1/N_0) psi_0
        assert_eq!(b.norm_sq(1) / b.norm_sq(0), frac(5, 16));
        assert_eq!(build_basis_recurrence(2, 1).unwrap().psi(1), &DensePoly::x());
        assert_eq!(build_basis_recurrence(6, 3).unwrap(), build_basis_gs(6, 3).unwrap());
    }

    #[test]
    fn recurrence_matches_gs_small() {
        for n in 1..=20 {
            let d = (n - 1).min(12);
            assert_eq!(build_basis_recurrence(n, d).unwrap(), build_basis_gs(n, d).unwrap());
        }
    }

    #[test]
    fn pairwise_orthogonal() {
        let b = build_basis_gs(9, 8).unwrap();
        for i in 0..=8 {
            assert!(b.norm_sq(i) > &Scalar::zero());
            assert!(b.psi(i).is_monic());
            assert_eq!(b.psi(i).degree(), i as i64);
            for j in 0..i {
                assert_eq!(inner_product(b.psi(i), b.psi(j), 9).unwrap(), int(0));
            }
        }
    }

    #[test]
    fn expansion_examples() {
        let b4 = build_basis_gs(4, 3).unwrap();
        let e = gram_expand(&DensePoly::monomial(2), &b4).unwrap();
        assert_eq!(e.psi_coeffs, vec![frac(5, 16), int(0), int(1)]);
        assert_eq!(e.normalized_coeff_sq, vec![frac(25, 256), int(0), frac(1, 16)]);
        assert_eq!(e.reconstruct(), DensePoly::monomial(2));

        let e = gram_expand(b4.psi(2), &b4).unwrap();
        assert_eq!(e.psi_coeffs, vec![int(0), int(0), int(1)]);

        let b2 = build_basis_gs(2, 1).unwrap();
        let e = gram_expand(&DensePoly::x(), &b2).unwrap();
        assert_eq!(e.psi_coeffs, vec![int(0), int(1)]);
        assert_eq!(e.normalized_coeff_sq[1], frac(1, 4));

        assert!(matches!(
            gram_expand(&DensePoly::monomial(2), &b2),
            Err(Error::DegreeOverflow { degree: 2, limit: 1 })
        ));
    }

    #[test]
    fn leading_coefficient_examples() {
        assert_eq!(monomial_leading_coeff_sq(2, 1).unwrap(), frac(1, 4));
        assert_eq!(monomial_leading_coeff_sq(4, 2).unwrap(), frac(1, 16));
        assert_eq!(monomial_leading_coeff_sq(4, 1).unwrap(), frac(5, 16));
        assert!(monomial_leading_coeff_sq(4, 4).is_err());
        for n in 2..=15 {
            for k in 1..n {
                assert_eq!(
                    monomial_leading_coeff_sq(n, k).unwrap(),
                    leading_coeff_sq_product(n, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn l2_examples() {
        let b4 = build_basis_gs(4, 3).unwrap();
        let (q, e) = l2_best_approx(&DensePoly::monomial(2), &b4, 1).unwrap();
        assert_eq!(q, DensePoly::constant(frac(5, 16)));
        assert_eq!(e, frac(1, 16));

        let b2 = build_basis_gs(2, 1).unwrap();
        let (q, e) = l2_best_approx(&DensePoly::x(), &b2, 0).unwrap();
        assert!(q.is_zero());
        assert_eq!(e, frac(1, 4));

        let (q, e) = l2_best_approx(b4.psi(2), &b4, 2).unwrap();
        assert_eq!(&q, b4.psi(2));
        assert!(e.is_zero());
    }

    #[test]
    fn l2_error_matches_direct_mean_square() {
        let b = build_basis_gs(7, 5).unwrap();
        let p = poly(&[(1, 3), (-2, 1), (0, 1), (5, 7), (1, 1), (-1, 2)]);
        for deg in 0..5 {
            let (q, err) = l2_best_approx(&p, &b, deg).unwrap();
            let diff = &p - &q;
            assert_eq!(inner_product(&diff, &diff, 7).unwrap(), err);
        }
    }
}
