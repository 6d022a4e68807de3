//! Symmetrized weight tests.
//!
//! `Q_w` reads k of the n bits and accepts when exactly `w` of them are set.
//! Averaging over uniformly random strings of Hamming weight `m` gives a
//! hypergeometric probability, and as a function of `t = 1 - 2m/n` those
//! probabilities lie on a polynomial `p_w` of degree at most `k`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    binomial, double_factorial, frac, int, pow_u, weight_to_point, DensePoly, Grid, Scalar,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrizedTest {
    pub n: usize,
    pub k: usize,
    pub w: usize,
    pub poly: DensePoly,
    /// `Z_- ∪ Z_+` in increasing order.
    pub zeros: Vec<Scalar>,
    pub leading_abs: Scalar,
    /// Sign of the monomial leading coefficient; observed, not asserted.
    pub leading_sign: i8,
}

fn check_nkw(n: usize, k: usize, w: usize) -> Result<()> {
    if n == 0 || k > n || w > k {
        return Err(Error::param(format!(
            "need 0 <= w <= k <= n, n >= 1 (got n {n}, k {k}, w {w})"
        )));
    }
    Ok(())
}

/// `Pr[|Z restricted to k fixed indices| = w]` for `Z` uniform of weight `m`:
/// `C(k,w) C(n-k, m-w) / C(n,m)`.
pub fn hypergeometric_pmf(n: usize, k: usize, m: usize, w: usize) -> Result<Scalar> {
    check_nkw(n, k, w)?;
    if m > n {
        return Err(Error::param(format!("weight {m} outside 0..={n}")));
    }
    let (n, k, m, w) = (n as i64, k as i64, m as i64, w as i64);
    Ok(Scalar::new(
        binomial(k, w) * binomial(n - k, m - w),
        binomial(n, m),
    ))
}

/// The predicted zero set `Z_w` of `p_w`, increasing.
pub fn zero_set(n: usize, k: usize, w: usize) -> Result<Vec<Scalar>> {
    check_nkw(n, k, w)?;
    let ni = n as i64;
    let mut zeros: Vec<Scalar> = (0..(k - w) as i64)
        .map(|h| frac(2 * h - ni, ni))
        .chain((0..w as i64).map(|h| frac(ni - 2 * h, ni)))
        .collect();
    zeros.sort();
    zeros.dedup();
    Ok(zeros)
}

/// Interpolate `p_w` through the `n + 1` hypergeometric values on `D^out_n`.
pub fn build_pw(n: usize, k: usize, w: usize) -> Result<SymmetrizedTest> {
    check_nkw(n, k, w)?;
    let mut ts = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    for m in 0..=n {
        ts.push(weight_to_point(n, m)?);
        values.push(hypergeometric_pmf(n, k, m, w)?);
    }
    let poly = DensePoly::interpolate(&ts, &values)?;
    if poly.degree() > k as i64 {
        return Err(Error::Internal(format!(
            "p_w for (n {n}, k {k}, w {w}) has degree {} > k",
            poly.degree()
        )));
    }
    let zeros = zero_set(n, k, w)?;
    if let Some(z) = zeros.iter().find(|z| !poly.eval(z).is_zero()) {
        return Err(Error::Internal(format!(
            "p_w for (n {n}, k {k}, w {w}) does not vanish at {z}"
        )));
    }
    let lead = poly.leading_coeff();
    let leading_sign = if lead.is_negative() { -1 } else { 1 };
    Ok(SymmetrizedTest {
        n,
        k,
        w,
        leading_abs: lead.abs(),
        leading_sign,
        poly,
        zeros,
    })
}

impl SymmetrizedTest {
    /// `p_w` at every point of `D^out_n`, in weight order `m = 0..n`.
    pub fn values_by_weight(&self) -> Vec<Scalar> {
        (0..=self.n)
            .map(|m| self.poly.eval(&weight_to_point(self.n, m).expect("weight in range")))
            .collect()
    }

    /// `C_w * prod_{z in Z_w} (t - z)`, the factored form.
    pub fn factored(&self) -> DensePoly {
        let lead = if self.leading_sign < 0 {
            -&self.leading_abs
        } else {
            self.leading_abs.clone()
        };
        self.zeros
            .iter()
            .fold(DensePoly::constant(lead), |acc, z| {
                &acc * &DensePoly::new(vec![-z, Scalar::one()])
            })
    }

    /// Grid points of `D^out_n` where `p_w` vanishes.
    pub fn grid_zeros(&self) -> Vec<Scalar> {
        Grid::outer(self.n)
            .expect("n >= 1")
            .points()
            .iter()
            .filter(|t| self.poly.eval(t).is_zero())
            .cloned()
            .collect()
    }
}

/// Closed-form magnitude of the leading coefficient of `p_w`, valid when
/// `n - k` is even:
/// `C(k,w) C(n-k,(n-k)/2) / C(n,(n-k+2w)/2) * n^k ((n-k)!!)^2 / ((n-k+2w)!! (n+k-2w)!!)`.
pub fn cw_closed_form(n: usize, k: usize, w: usize) -> Result<Scalar> {
    check_nkw(n, k, w)?;
    if (n - k) % 2 != 0 {
        return Err(Error::Parity(format!("n - k = {} must be even", n - k)));
    }
    let (ni, ki, wi) = (n as i64, k as i64, w as i64);
    let binoms = Scalar::new(
        binomial(ki, wi) * binomial(ni - ki, (ni - ki) / 2),
        binomial(ni, (ni - ki + 2 * wi) / 2),
    );
    let dfk = double_factorial(ni - ki)?;
    let rest = Scalar::new(
        pow_u(n as u64, k as u64) * &dfk * &dfk,
        double_factorial(ni - ki + 2 * wi)? * double_factorial(ni + ki - 2 * wi)?,
    );
    Ok(binoms * rest)
}

/// Closed form for the maximizing coefficient `C_{k/2}` (n, k even).
pub fn cw_half_closed_form(n: usize, k: usize) -> Result<Scalar> {
    check_even(n, k)?;
    let (ni, ki) = (n as i64, k as i64);
    let binoms = Scalar::new(
        binomial(ki, ki / 2) * binomial(ni - ki, (ni - ki) / 2),
        binomial(ni, ni / 2),
    );
    let dfk = double_factorial(ni - ki)?;
    let dfn = double_factorial(ni)?;
    Ok(binoms * Scalar::new(pow_u(n as u64, k as u64) * &dfk * &dfk, &dfn * &dfn))
}

fn check_even(n: usize, k: usize) -> Result<()> {
    if n == 0 || k > n {
        return Err(Error::param(format!("need k <= n, n >= 1 (got n {n}, k {k})")));
    }
    if n % 2 != 0 || k % 2 != 0 {
        return Err(Error::Parity(format!("n = {n} and k = {k} must both be even")));
    }
    Ok(())
}

/// Exhaustive maximization of `|C_w|` over `w = 0..k`.
#[derive(Clone, Debug)]
pub struct CwArgmax {
    pub n: usize,
    pub k: usize,
    pub argmax: usize,
    /// `|C_w|` for every w.
    pub leading_abs: Vec<Scalar>,
    pub c_half: Scalar,
    pub c_half_closed: Scalar,
}

impl CwArgmax {
    pub fn holds(&self) -> bool {
        self.argmax * 2 == self.k && self.c_half == self.c_half_closed
    }
}

pub fn cw_argmax(n: usize, k: usize) -> Result<CwArgmax> {
    check_even(n, k)?;
    let leading_abs: Vec<Scalar> = (0..=k)
        .map(|w| build_pw(n, k, w).map(|t| t.leading_abs))
        .collect::<Result<_>>()?;
    let best = leading_abs.iter().max().cloned().unwrap_or_else(Scalar::zero);
    let maximizers: Vec<usize> = (0..=k).filter(|&w| leading_abs[w] == best).collect();
    let argmax = maximizers[0];
    if maximizers.len() > 2 || (maximizers.len() == 2 && maximizers[0] + maximizers[1] != k) {
        return Err(Error::Internal(format!(
            "unexpected tie among maximizers {maximizers:?} for (n {n}, k {k})"
        )));
    }
    Ok(CwArgmax {
        n,
        k,
        argmax,
        c_half: leading_abs[k / 2].clone(),
        c_half_closed: cw_half_closed_form(n, k)?,
        leading_abs,
    })
}

/// `v(k) = prod_{i=1}^{k} (1 - 1/(4 i^2)) = (2k+1) C(2k,k)^2 / 16^k`.
pub fn wallis_product(k: usize) -> Result<Scalar> {
    if k == 0 {
        return Err(Error::param("k must be positive"));
    }
    let (num, den) = WallisSeq::new().nth(k - 1).expect("infinite sequence").1;
    Ok(Scalar::new(num, den))
}

/// Unreduced `(k, (numerator, denominator))` of `v(k)` for `k = 1, 2, ...`.
///
/// Kept as a plain integer pair so long sweeps avoid a gcd per step.
#[derive(Clone, Debug)]
pub struct WallisSeq {
    k: u64,
    num: BigInt,
    den: BigInt,
}

impl WallisSeq {
    pub fn new() -> Self {
        WallisSeq {
            k: 0,
            num: BigInt::one(),
            den: BigInt::one(),
        }
    }
}

impl Default for WallisSeq {
    fn default() -> Self {
        WallisSeq::new()
    }
}

impl Iterator for WallisSeq {
    type Item = (u64, (BigInt, BigInt));

    fn next(&mut self) -> Option<Self::Item> {
        self.k += 1;
        let i = self.k;
        self.num *= (2 * i - 1) * (2 * i + 1);
        self.den *= 4 * i * i;
        Some((i, (self.num.clone(), self.den.clone())))
    }
}

/// Rational bracket `lo < pi < hi` from Machin's formula with `terms`
/// terms of each arctangent series.
pub fn pi_bracket(terms: usize) -> (Scalar, Scalar) {
    let (a_lo, a_hi) = atan_inv_bracket(5, terms);
    let (b_lo, b_hi) = atan_inv_bracket(239, terms);
    let lo = int(16) * a_lo - int(4) * &b_hi;
    let hi = int(16) * a_hi - int(4) * &b_lo;
    (lo, hi)
}

/// Bracket on `atan(1/x)` from consecutive partial sums of the alternating series.
fn atan_inv_bracket(x: i64, terms: usize) -> (Scalar, Scalar) {
    let x_big = BigInt::from(x);
    let x_sq = &x_big * &x_big;
    let mut power = x_big.clone();
    let mut sum = Scalar::zero();
    let mut prev = Scalar::zero();
    for j in 0..=terms {
        prev = sum.clone();
        let term = Scalar::new(BigInt::one(), &power * BigInt::from(2 * j + 1));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &x_sq;
    }
    if prev < sum {
        (prev, sum)
    } else {
        (sum, prev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(i64, i64)]) -> DensePoly {
        DensePoly::new(c.iter().map(|&(a, b)| frac(a, b)).collect())
    }

    #[test]
    fn hypergeometric_examples() {
        for n in 1..6 {
            for k in 0..=n {
                assert_eq!(hypergeometric_pmf(n, k, 0, 0).unwrap(), int(1));
            }
        }
        assert_eq!(hypergeometric_pmf(4, 2, 2, 1).unwrap(), frac(2, 3));
        assert_eq!(hypergeometric_pmf(4, 2, 1, 0).unwrap(), frac(1, 2));
        assert!(hypergeometric_pmf(4, 5, 1, 0).is_err());
        assert!(hypergeometric_pmf(4, 2, 1, 3).is_err());
        assert!(hypergeometric_pmf(4, 2, 5, 0).is_err());
    }

    #[test]
    fn pw_examples() {
        let t = build_pw(2, 1, 1).unwrap();
        assert_eq!(t.poly, poly(&[(1, 2), (-1, 2)]));
        assert_eq!(t.zeros, vec![int(1)]);
        assert_eq!(t.leading_abs, frac(1, 2));

        let t = build_pw(4, 2, 1).unwrap();
        assert_eq!(t.poly, poly(&[(2, 3), (0, 1), (-2, 3)]));
        assert_eq!(t.zeros, vec![int(-1), int(1)]);
        assert_eq!(t.leading_abs, frac(2, 3));
        assert_eq!(t.leading_sign, -1);

        let t = build_pw(4, 2, 0).unwrap();
        assert_eq!(t.poly, poly(&[(1, 6), (1, 2), (1, 3)]));
        assert_eq!(t.zeros, vec![int(-1), frac(-1, 2)]);
        assert_eq!(t.leading_abs, frac(1, 3));
        assert_eq!(t.factored(), t.poly);
    }

    #[test]
    fn pw_values_are_probabilities_summing_to_one() {
        for n in 1..=10 {
            for k in 0..=n {
                let tests: Vec<_> = (0..=k).map(|w| build_pw(n, k, w).unwrap()).collect();
                for m in 0..=n {
                    let mut total = Scalar::zero();
                    for t in &tests {
                        let v = &t.values_by_weight()[m];
                        assert!(*v >= Scalar::zero() && *v <= int(1));
                        total += v;
                    }
                    assert_eq!(total, int(1));
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(cw_closed_form(4, 2, 1).unwrap(), frac(2, 3));
        assert_eq!(cw_closed_form(4, 2, 0).unwrap(), frac(1, 3));
        assert!(matches!(cw_closed_form(2, 1, 1), Err(Error::Parity(_))));
    }

    #[test]
    fn argmax_examples() {
        let r = cw_argmax(4, 2).unwrap();
        assert_eq!(r.argmax, 1);
        assert_eq!(r.c_half, frac(2, 3));
        assert_eq!(r.leading_abs, vec![frac(1, 3), frac(2, 3), frac(1, 3)]);
        assert!(r.holds());
        assert_eq!(cw_argmax(2, 2).unwrap().argmax, 1);
        assert_eq!(cw_argmax(6, 2).unwrap().argmax, 1);
        assert!(matches!(cw_argmax(5, 2), Err(Error::Parity(_))));
        assert!(matches!(cw_argmax(6, 3), Err(Error::Parity(_))));
    }

    #[test]
    fn wallis_examples() {
        assert_eq!(wallis_product(1).unwrap(), frac(3, 4));
        assert_eq!(wallis_product(2).unwrap(), frac(45, 64));
        assert_eq!(wallis_product(3).unwrap(), frac(1575, 2304));
        assert!(wallis_product(0).is_err());
        // closed form (2k+1) C(2k,k)^2 / 16^k
        for k in 1..40u64 {
            let c = binomial(2 * k as i64, k as i64);
            let closed = Scalar::new(BigInt::from(2 * k + 1) * &c * &c, pow_u(16, k));
            assert_eq!(wallis_product(k as usize).unwrap(), closed);
        }
    }

    #[test]
    fn pi_bracket_is_tight_and_ordered() {
        let (lo, hi) = pi_bracket(30);
        assert!(lo < hi);
        assert!(lo > frac(314_159, 100_000) && hi < frac(314_160, 100_000));
        assert!(&hi - &lo < Scalar::new(BigInt::one(), pow_u(10, 40)));
    }
}
