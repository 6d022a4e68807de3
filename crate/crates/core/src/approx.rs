//! Best discrete L-infinity approximation by exact linear programming, plus
//! the constructive monomial approximation through the Gram basis and the
//! shift that moves an approximation from `D^out_n` to `D^in_n`.

use num_traits::{One, Signed, Zero};

use crate::arith::{factorial, frac, pow_u, stretch_map, DensePoly, Grid, GridKind, Scalar};
use crate::error::{Error, Result};
use crate::gram::{build_basis_gs, gram_expand};
use crate::simplex::{LinearProgram, Sense};

/// An approximant together with its exact error over a grid.
#[derive(Clone, Debug)]
pub struct ApproxCertificate {
    pub target: DensePoly,
    pub grid: Grid,
    pub degree_bound: usize,
    pub approximant: DensePoly,
    pub epsilon: Scalar,
    /// `target(t) - approximant(t)` for every grid point, in grid order.
    pub residuals: Vec<Scalar>,
    /// Indices of grid points with `|residual| = epsilon`.
    pub active: Vec<usize>,
    /// A longest subsequence of `active` whose residual signs alternate.
    pub alternation: Vec<usize>,
    /// True when produced by the LP.
    pub optimal: bool,
}

impl ApproxCertificate {
    fn assemble(
        target: DensePoly,
        grid: Grid,
        degree_bound: usize,
        approximant: DensePoly,
        optimal: bool,
    ) -> Self {
        let residuals: Vec<Scalar> = grid
            .points()
            .iter()
            .map(|t| target.eval(t) - approximant.eval(t))
            .collect();
        let epsilon = residuals
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Scalar::zero);
        let active: Vec<usize> = (0..residuals.len())
            .filter(|&i| residuals[i].abs() == epsilon)
            .collect();
        let alternation = alternating_subsequence(&active, &residuals);
        ApproxCertificate {
            target,
            grid,
            degree_bound,
            approximant,
            epsilon,
            residuals,
            active,
            alternation,
            optimal,
        }
    }

    /// Recompute every residual from the stored approximant and confirm that
    /// the stored data is self-consistent.
    pub fn integrity_holds(&self) -> bool {
        if self.approximant.degree() > self.degree_bound as i64 {
            return false;
        }
        let recomputed = ApproxCertificate::assemble(
            self.target.clone(),
            self.grid.clone(),
            self.degree_bound,
            self.approximant.clone(),
            self.optimal,
        );
        recomputed.epsilon == self.epsilon && recomputed.residuals == self.residuals
    }

    /// Equioscillation on `degree_bound + 2` points certifies optimality
    /// (de la Vallée Poussin); an exact fit is trivially optimal.
    pub fn equioscillates(&self) -> bool {
        self.epsilon.is_zero() || self.alternation.len() >= self.degree_bound + 2
    }

    pub fn points(&self) -> &[Scalar] {
        self.grid.points()
    }
}

fn alternating_subsequence(active: &[usize], residuals: &[Scalar]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &i in active {
        if residuals[i].is_zero() {
            continue;
        }
        match out.last() {
            Some(&j) if residuals[j].is_positive() == residuals[i].is_positive() => {}
            _ => out.push(i),
        }
    }
    out
}

/// `min_q max_{t in grid} |target(t) - q(t)|` over `deg q <= deg`, solved
/// exactly as a linear program in the coefficients of `q` and the error.
pub fn linf_best_approx(target: &DensePoly, grid: &Grid, deg: usize) -> Result<ApproxCertificate> {
    if grid.is_empty() {
        return Err(Error::param("empty grid"));
    }
    let width = deg + 2;
    let eps = deg + 1;
    let mut objective = vec![Scalar::zero(); width];
    objective[eps] = Scalar::one();
    let mut lp = LinearProgram::minimize(objective);
    for j in 0..=deg {
        lp.set_free(j);
    }
    for t in grid.points() {
        let mut powers = Vec::with_capacity(width);
        let mut p = Scalar::one();
        for _ in 0..=deg {
            powers.push(p.clone());
            p *= t;
        }
        let value = target.eval(t);
        let mut upper = powers.clone();
        upper.push(-Scalar::one());
        lp.add(upper, Sense::Le, value.clone());
        let mut lower: Vec<Scalar> = powers.iter().map(|a| -a).collect();
        lower.push(-Scalar::one());
        lp.add(lower, Sense::Le, -value);
    }
    let sol = lp.solve()?;
    let approximant = DensePoly::new(sol.x[..=deg].to_vec());
    let cert = ApproxCertificate::assemble(target.clone(), grid.clone(), deg, approximant, true);
    if cert.epsilon != sol.x[eps] {
        return Err(Error::Simplex(format!(
            "LP error {} disagrees with realized grid error {}",
            sol.x[eps], cert.epsilon
        )));
    }
    Ok(cert)
}

/// Degree `k-1` approximation of `x^k` over `D^out_n`: expand
/// `((n+1)/n x)^k` in the Gram basis with parameter `n+1`, drop the top term
/// and pull back through the stretch map. The reported error is the realized
/// grid error, not an estimate.
pub fn monomial_gram_truncation(n: usize, k: usize) -> Result<ApproxCertificate> {
    if k == 0 || k > n {
        return Err(Error::param(format!("need 1 <= k <= n (got n {n}, k {k})")));
    }
    let stretch = stretch_map(n)?;
    let basis = build_basis_gs(n + 1, k)?;
    let scaled = DensePoly::monomial(k).compose_affine(&stretch.scale, &Scalar::zero());
    let exp = gram_expand(&scaled, &basis)?;
    let truncated = exp
        .psi_coeffs
        .iter()
        .zip(basis.polys())
        .take(k)
        .fold(DensePoly::zero(), |acc, (c, p)| &acc + &p.scale(c));
    let inverse = stretch.inverse()?;
    let approximant = truncated.compose_affine(&inverse.scale, &inverse.offset);
    Ok(ApproxCertificate::assemble(
        DensePoly::monomial(k),
        Grid::outer(n)?,
        k - 1,
        approximant,
        false,
    ))
}

/// Turn an approximation of `target` over `D^out_n` into one over `D^in_n`
/// with no larger error: `q(t) = p~(t + 1/n) + p(t) - p(t + 1/n)`.
pub fn shift_reduce(target: &DensePoly, cert_out: &ApproxCertificate) -> Result<ApproxCertificate> {
    if cert_out.grid.kind() != GridKind::Out {
        return Err(Error::param("shift_reduce expects a certificate over D^out_n"));
    }
    let k = target.degree();
    if k < 1 {
        return Err(Error::param("target must have degree >= 1"));
    }
    if cert_out.degree_bound as i64 > k - 1 || cert_out.approximant.degree() > k - 1 {
        return Err(Error::param(format!(
            "approximant degree bound {} must be below target degree {k}",
            cert_out.degree_bound
        )));
    }
    let n = cert_out.grid.n();
    let h = frac(1, n as i64);
    let one = Scalar::one();
    let shifted_target = target.compose_affine(&one, &h);
    let shifted_approx = cert_out.approximant.compose_affine(&one, &h);
    let q = &(&shifted_approx + target) - &shifted_target;
    if q.degree() > k - 1 {
        return Err(Error::Internal(format!(
            "shifted approximant has degree {} > {}",
            q.degree(),
            k - 1
        )));
    }
    let cert = ApproxCertificate::assemble(
        target.clone(),
        Grid::inner(n)?,
        (k - 1) as usize,
        q,
        false,
    );
    if cert.epsilon > cert_out.epsilon {
        return Err(Error::Internal(format!(
            "shift increased the error from {} to {}",
            cert_out.epsilon, cert.epsilon
        )));
    }
    Ok(cert)
}

/// `2^{1-k}`, the best uniform error for `x^k` on `[-1, 1]` by degree `k-1`.
pub fn uniform_reference_error(k: usize) -> Result<Scalar> {
    if k == 0 {
        return Err(Error::param("k must be positive"));
    }
    Ok(Scalar::new(One::one(), pow_u(2, k as u64 - 1)))
}

/// Square of the closed-form hardness reference `(2n)^{-k} sqrt((n+k)!/(n-k)!)`.
pub fn monomial_hardness_ref(n: usize, k: usize) -> Result<Scalar> {
    if k == 0 || k >= n {
        return Err(Error::param(format!("need 1 <= k < n (got n {n}, k {k})")));
    }
    let (n, k) = (n as u64, k as u64);
    Ok(Scalar::new(
        factorial(n + k),
        factorial(n - k) * pow_u(2 * n, 2 * k),
    ))
}

/// Smallest `k < n` where the discrete optimum over `D^out_n` beats the
/// uniform reference `2^{1-k}`.
pub fn uniform_crossover(n: usize) -> Result<Option<usize>> {
    let grid = Grid::outer(n)?;
    for k in 1..n {
        let cert = linf_best_approx(&DensePoly::monomial(k), &grid, k - 1)?;
        if cert.epsilon < uniform_reference_error(k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
