use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{checked_div, Scalar};
use crate::error::{Error, Result};

/// Univariate polynomial with exact rational coefficients, index = degree.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and has degree -1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DensePoly {
    coeffs: Vec<Scalar>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        DensePoly::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        DensePoly::monomial(1)
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); k + 1];
        coeffs[k] = Scalar::one();
        DensePoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        DensePoly::new(coeffs.iter().map(|&c| super::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    /// Horner evaluation, exact.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DensePoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `x * self`.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return DensePoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Scalar::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        DensePoly { coeffs }
    }

    /// Drop every term of degree above `deg`.
    pub fn truncate(&self, deg: i64) -> Self {
        let keep = (deg + 1).clamp(0, self.coeffs.len() as i64) as usize;
        DensePoly::new(self.coeffs[..keep].to_vec())
    }

    /// `q(x) = self(a x + b)`.
    pub fn compose_affine(&self, a: &Scalar, b: &Scalar) -> Self {
        let inner = DensePoly::new(vec![b.clone(), a.clone()]);
        self.coeffs.iter().rev().fold(DensePoly::zero(), |acc, c| {
            &(&acc * &inner) + &DensePoly::constant(c.clone())
        })
    }

    /// Lagrange interpolation through `(xs[i], ys[i])` using Newton divided
    /// differences. The nodes must be distinct.
    pub fn interpolate(xs: &[Scalar], ys: &[Scalar]) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Mismatch(format!(
                "{} nodes vs {} values",
                xs.len(),
                ys.len()
            )));
        }
        let len = xs.len();
        let mut table = ys.to_vec();
        for level in 1..len {
            for i in (level..len).rev() {
                let num = &table[i] - &table[i - 1];
                let den = &xs[i] - &xs[i - level];
                table[i] = checked_div(&num, &den)?;
            }
        }
        // Horner on the Newton form.
        let mut out = DensePoly::zero();
        for i in (0..len).rev() {
            let factor = DensePoly::new(vec![-xs[i].clone(), Scalar::one()]);
            out = &(&out * &factor) + &DensePoly::constant(table[i].clone());
        }
        Ok(out)
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;

    fn add(self, rhs: &DensePoly) -> DensePoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;

    fn sub(self, rhs: &DensePoly) -> DensePoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        DensePoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;

    fn mul(self, rhs: &DensePoly) -> DensePoly {
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DensePoly::new(out)
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;

    fn neg(self) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn zero_has_degree_minus_one() {
        assert_eq!(DensePoly::zero().degree(), -1);
        assert_eq!(DensePoly::new(vec![int(0), int(0)]).degree(), -1);
        assert_eq!(DensePoly::from_i64(&[1, 0, 0]).degree(), 0);
    }

    #[test]
    fn affine_compose_examples() {
        let sq = DensePoly::monomial(2);
        assert_eq!(sq.compose_affine(&int(1), &int(0)), sq);
        assert_eq!(
            sq.compose_affine(&int(1), &frac(1, 2)),
            DensePoly::new(vec![frac(1, 4), int(1), int(1)])
        );
        assert_eq!(
            sq.compose_affine(&frac(3, 2), &int(0)),
            DensePoly::new(vec![int(0), int(0), frac(9, 4)])
        );
    }

    #[test]
    fn interpolation_recovers_quadratic() {
        let xs: Vec<_> = [-1, 0, 1, 2].iter().map(|&v| int(v)).collect();
        let p = DensePoly::new(vec![frac(1, 3), int(0), frac(-2, 3)]);
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(DensePoly::interpolate(&xs, &ys).unwrap(), p);
    }

    #[test]
    fn interpolation_rejects_repeated_nodes() {
        let xs = vec![int(1), int(1)];
        let ys = vec![int(0), int(1)];
        assert_eq!(
            DensePoly::interpolate(&xs, &ys),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn display() {
        let p = DensePoly::new(vec![frac(-5, 16), int(0), int(1)]);
        assert_eq!(p.to_string(), "x^2 - 5/16");
        assert_eq!(DensePoly::zero().to_string(), "0");
    }

    fn small_rational() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..9).prop_map(|(n, d)| frac(n, d))
    }

    proptest! {
        #[test]
        fn affine_compose_inverts(
            coeffs in prop::collection::vec(small_rational(), 0..6),
            a in small_rational().prop_filter("nonzero", |a| !a.is_zero()),
            b in small_rational(),
        ) {
            let p = DensePoly::new(coeffs);
            let q = p.compose_affine(&a, &b);
            if !p.is_zero() {
                prop_assert_eq!(q.degree(), p.degree());
            }
            let back = q.compose_affine(&(Scalar::one() / &a), &(-&b / &a));
            prop_assert_eq!(back, p);
        }

        #[test]
        fn eval_is_a_ring_homomorphism(
            f in prop::collection::vec(small_rational(), 0..5),
            g in prop::collection::vec(small_rational(), 0..5),
            x in small_rational(),
        ) {
            let f = DensePoly::new(f);
            let g = DensePoly::new(g);
            prop_assert_eq!((&f * &g).eval(&x), f.eval(&x) * g.eval(&x));
            prop_assert_eq!((&f - &g).eval(&x), f.eval(&x) - g.eval(&x));
        }
    }
}
