//! Extremal (k-1)-wise indistinguishable pairs and the bound harness.
//!
//! A pair of weight distributions `(mu, nu)` over n bits is (k-1)-wise
//! indistinguishable iff their factorial moments agree up to order k-1, so
//! the best advantage of a fixed symmetric k-bit test is a small exact LP in
//! the `2(n+1)` masses. By LP duality it equals twice the best degree-(k-1)
//! approximation error of the symmetrized test over `D^out_n`.

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::approx::linf_best_approx;
use crate::arith::{big, binomial, int, pow_u, Grid, Scalar};
use crate::distributions::{
    advantage, best_symmetric_test, is_jwise_indist, tv_distance, SymmetricDist, SymmetricTestSet,
};
use crate::error::{Error, Result};
use crate::simplex::{LinearProgram, Sense};
use crate::symmetrize::{build_pw, hypergeometric_pmf};

/// Largest k for which exhaustive test enumeration is allowed.
pub const ENUMERATE_MAX_K: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalPair {
    pub n: usize,
    pub k: usize,
    pub mu: SymmetricDist,
    pub nu: SymmetricDist,
    pub test: SymmetricTestSet,
    pub advantage: Scalar,
    pub indist_level: usize,
}

/// `B(n,k)^2 = (n-k)^{n-k} (n+k)^{n+k} / (4^k n^{2n})`, with `0^0 = 1`.
pub fn bound_b_sq(n: usize, k: usize) -> Result<Scalar> {
    if n == 0 || k > n {
        return Err(Error::param(format!("need 0 <= k <= n, n >= 1 (got n {n}, k {k})")));
    }
    let (n, k) = (n as u64, k as u64);
    Ok(Scalar::new(
        pow_u(n - k, n - k) * pow_u(n + k, n + k),
        pow_u(4, k) * pow_u(n, 2 * n),
    ))
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::param(format!("need 1 <= k <= n (got n {n}, k {k})")));
    }
    Ok(())
}

/// Maximize `sum_m (mu_m - nu_m) * accept(m)` over (k-1)-wise
/// indistinguishable pairs, where `accept(m)` is the acceptance probability
/// of the test on a uniformly random string of weight m.
fn solve_pair_lp(n: usize, k: usize, accept: &[Scalar], test: SymmetricTestSet) -> Result<ExtremalPair> {
    let width = 2 * (n + 1);
    let mut objective = vec![Scalar::zero(); width];
    for (m, a) in accept.iter().enumerate() {
        objective[m] = a.clone();
        objective[n + 1 + m] = -a;
    }
    let mut lp = LinearProgram::maximize(objective);
    for half in 0..2 {
        let mut row = vec![Scalar::zero(); width];
        for m in 0..=n {
            row[half * (n + 1) + m] = int(1);
        }
        lp.add(row, Sense::Eq, int(1));
    }
    for i in 1..k {
        let mut row = vec![Scalar::zero(); width];
        for m in i..=n {
            let c = big(binomial(m as i64, i as i64));
            row[n + 1 + m] = -&c;
            row[m] = c;
        }
        lp.add(row, Sense::Eq, Scalar::zero());
    }
    let sol = lp.solve()?;
    let mu = SymmetricDist::new(sol.x[..=n].to_vec())?;
    let nu = SymmetricDist::new(sol.x[n + 1..].to_vec())?;
    if !is_jwise_indist(&mu, &nu, k - 1)? {
        return Err(Error::Internal(format!(
            "LP pair for (n {n}, k {k}) is not {}-wise indistinguishable",
            k - 1
        )));
    }
    let adv = advantage(&mu, &nu, &test, k)?;
    if adv != sol.objective {
        return Err(Error::Internal(format!(
            "pair advantage {adv} differs from LP optimum {}",
            sol.objective
        )));
    }
    Ok(ExtremalPair {
        n,
        k,
        mu,
        nu,
        test,
        advantage: adv,
        indist_level: k - 1,
    })
}

/// Best (k-1)-wise indistinguishable pair against the single-weight test `Q_w`.
pub fn extremal_pair_for_test(n: usize, k: usize, w: usize) -> Result<ExtremalPair> {
    check_nk(n, k)?;
    let pw = build_pw(n, k, w)?;
    solve_pair_lp(n, k, &pw.values_by_weight(), SymmetricTestSet::single(k, w)?)
}

/// Best (k-1)-wise indistinguishable pair against an arbitrary symmetric test.
pub fn extremal_pair_for_set(n: usize, k: usize, test: &SymmetricTestSet) -> Result<ExtremalPair> {
    check_nk(n, k)?;
    if test.k != k {
        return Err(Error::Mismatch(format!("test reads {} bits, not {k}", test.k)));
    }
    let accept = (0..=n)
        .map(|m| {
            test.accept
                .iter()
                .map(|&w| hypergeometric_pmf(n, k, m, w))
                .sum::<Result<Scalar>>()
        })
        .collect::<Result<Vec<_>>>()?;
    solve_pair_lp(n, k, &accept, test.clone())
}

/// One duality cell: the pair LP against twice the minimax error of `p_w`.
#[derive(Clone, Debug, Serialize)]
pub struct DualityCell {
    pub n: usize,
    pub k: usize,
    pub w: usize,
    #[serde(skip)]
    pub lp_advantage: Scalar,
    #[serde(skip)]
    pub approx_error: Scalar,
    pub holds: bool,
}

pub fn duality_check(n: usize, k: usize, w: usize) -> Result<DualityCell> {
    check_nk(n, k)?;
    let pair = extremal_pair_for_test(n, k, w)?;
    let pw = build_pw(n, k, w)?;
    let cert = linf_best_approx(&pw.poly, &Grid::outer(n)?, k - 1)?;
    let holds = pair.advantage == int(2) * &cert.epsilon;
    Ok(DualityCell {
        n,
        k,
        w,
        lp_advantage: pair.advantage,
        approx_error: cert.epsilon,
        holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TvMode {
    /// One LP per test subset; exact optimum.
    Enumerate,
    /// Alternate LP and best-response test until a fixpoint; lower bound.
    Alternate,
}

impl std::str::FromStr for TvMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumerate" | "ENUMERATE" => Ok(TvMode::Enumerate),
            "alternate" | "ALTERNATE" => Ok(TvMode::Alternate),
            other => Err(Error::param(format!("unknown tv mode {other:?}"))),
        }
    }
}

fn marginal_tv(pair: &ExtremalPair) -> Result<Scalar> {
    tv_distance(&pair.mu.marginal(pair.k)?, &pair.nu.marginal(pair.k)?)
}

fn first_max(pairs: Vec<ExtremalPair>) -> Option<ExtremalPair> {
    pairs.into_iter().fold(None, |best: Option<ExtremalPair>, p| match best {
        Some(b) if b.advantage >= p.advantage => Some(b),
        _ => Some(p),
    })
}

/// Maximum statistical distance of k-bit marginals over (k-1)-wise
/// indistinguishable pairs. Returns the witnessing pair (its `test` is the
/// optimal one) and the distance.
pub fn extremal_tv(n: usize, k: usize, mode: TvMode) -> Result<(ExtremalPair, Scalar)> {
    check_nk(n, k)?;
    let best = match mode {
        TvMode::Enumerate => {
            if k > ENUMERATE_MAX_K {
                return Err(Error::param(format!(
                    "enumerate mode is limited to k <= {ENUMERATE_MAX_K}"
                )));
            }
            // A test and its complement have the same optimum (swap mu and nu),
            // so only subsets that accept weight 0 are solved.
            let full = (1usize << (k + 1)) - 1;
            let masks: Vec<usize> = (0..=full).filter(|m| m & 1 == 1 && *m != full).collect();
            let pairs = masks
                .par_iter()
                .map(|&mask| {
                    let test = SymmetricTestSet::new(k, (0..=k).filter(|w| mask >> w & 1 == 1))?;
                    extremal_pair_for_set(n, k, &test)
                })
                .collect::<Result<Vec<_>>>()?;
            first_max(pairs)
        }
        TvMode::Alternate => {
            let singles = (0..=k)
                .into_par_iter()
                .map(|w| extremal_pair_for_test(n, k, w))
                .collect::<Result<Vec<_>>>()?;
            let mut current = first_max(singles).expect("k + 1 >= 1 candidates");
            loop {
                let (test, _) =
                    best_symmetric_test(&current.mu.marginal(k)?, &current.nu.marginal(k)?)?;
                if test == current.test || test.accept.is_empty() {
                    break;
                }
                let next = extremal_pair_for_set(n, k, &test)?;
                if next.advantage <= current.advantage {
                    break;
                }
                current = next;
            }
            Some(current)
        }
    };
    let mut pair = best.ok_or_else(|| Error::Internal("no test evaluated".into()))?;
    let tv = marginal_tv(&pair)?;
    // Report the optimal test for the returned pair.
    let (test, adv) = best_symmetric_test(&pair.mu.marginal(k)?, &pair.nu.marginal(k)?)?;
    if adv != tv || tv < pair.advantage {
        return Err(Error::Internal(format!(
            "best test advantage {adv} disagrees with distance {tv}"
        )));
    }
    // Orient the pair so the reported test is the smaller of a test and its
    // complement; both have the same advantage once mu and nu are swapped.
    if 2 * test.accept.len() > k + 1 {
        std::mem::swap(&mut pair.mu, &mut pair.nu);
        pair.test = SymmetricTestSet::new(k, (0..=k).filter(|w| !test.accept.contains(w)))?;
    } else {
        pair.test = test;
    }
    pair.advantage = adv;
    Ok((pair, tv))
}

/// Everything the upper/lower bound harness measures for one `(n, k)` cell.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub bound_b_sq: Scalar,
    /// Weight used for `lp_advantage`: `k/2` for even k, otherwise the best w.
    pub w_star: usize,
    pub lp_advantage: Scalar,
    pub approx_error: Scalar,
    /// `max_w` of the single-weight LP advantage.
    pub lp_max: Scalar,
    pub lp_by_w: Vec<Scalar>,
    pub tv_star: Scalar,
    pub tv_mode: TvMode,
    pub tv_pair: Option<ExtremalPair>,
    /// Slack exponent allowed in the upper bound check.
    pub slack_exponent: u32,
}

impl BoundReport {
    /// `lp_advantage = 2 * approx_error`.
    pub fn duality_holds(&self) -> bool {
        self.lp_advantage == int(2) * &self.approx_error
    }

    /// `lp_advantage >= B`, compared on squares. Meaningful for even k.
    pub fn lower_bound_holds(&self) -> bool {
        &self.lp_advantage * &self.lp_advantage >= self.bound_b_sq
    }

    /// `TV* <= (k+1) max_w lp`.
    pub fn decomposition_holds(&self) -> bool {
        self.tv_star <= int(self.k as i64 + 1) * &self.lp_max
    }

    /// `TV* <= n^c B`, compared on squares.
    pub fn upper_bound_holds(&self) -> bool {
        let scale = big(pow_u(self.n as u64, 2 * self.slack_exponent as u64));
        &self.tv_star * &self.tv_star <= scale * &self.bound_b_sq
    }

    pub fn bound_b(&self) -> f64 {
        self.bound_b_sq.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Smallest c with `TV* <= n^c B`; negative when TV* is below B.
    pub fn measured_exponent(&self) -> Option<f64> {
        if self.n < 2 || self.tv_star.is_zero() {
            return None;
        }
        let ratio_sq = (&self.tv_star * &self.tv_star / &self.bound_b_sq).to_f64()?;
        Some(0.5 * ratio_sq.ln() / (self.n as f64).ln())
    }

    /// `TV* / B` squared, exact.
    pub fn ratio_sq(&self) -> Scalar {
        &self.tv_star * &self.tv_star / &self.bound_b_sq
    }

    pub fn all_hold(&self) -> bool {
        self.duality_holds()
            && (self.k == 0 || self.k % 2 == 1 || self.lower_bound_holds())
            && self.decomposition_holds()
            && self.upper_bound_holds()
    }
}

/// Assemble the bound report for one cell. `k = 0` gives the empty-test
/// cell where every advantage is zero.
pub fn verify_sandwich(n: usize, k: usize, slack_exponent: u32) -> Result<BoundReport> {
    let bound = bound_b_sq(n, k)?;
    if k == 0 {
        return Ok(BoundReport {
            n,
            k,
            bound_b_sq: bound,
            w_star: 0,
            lp_advantage: Scalar::zero(),
            approx_error: Scalar::zero(),
            lp_max: Scalar::zero(),
            lp_by_w: vec![Scalar::zero()],
            tv_star: Scalar::zero(),
            tv_mode: TvMode::Enumerate,
            tv_pair: None,
            slack_exponent,
        });
    }
    let pairs = (0..=k)
        .into_par_iter()
        .map(|w| extremal_pair_for_test(n, k, w))
        .collect::<Result<Vec<_>>>()?;
    let lp_by_w: Vec<Scalar> = pairs.iter().map(|p| p.advantage.clone()).collect();
    let lp_max = lp_by_w.iter().max().cloned().unwrap_or_else(Scalar::zero);
    let w_star = if k % 2 == 0 {
        k / 2
    } else {
        lp_by_w.iter().position(|a| *a == lp_max).unwrap_or(0)
    };
    let pw = build_pw(n, k, w_star)?;
    let approx_error = linf_best_approx(&pw.poly, &Grid::outer(n)?, k - 1)?.epsilon;
    let tv_mode = if k <= ENUMERATE_MAX_K {
        TvMode::Enumerate
    } else {
        TvMode::Alternate
    };
    let (pair, tv_star) = extremal_tv(n, k, tv_mode)?;
    Ok(BoundReport {
        n,
        k,
        bound_b_sq: bound,
        w_star,
        lp_advantage: lp_by_w[w_star].clone(),
        approx_error,
        lp_max,
        lp_by_w,
        tv_star,
        tv_mode,
        tv_pair: Some(pair),
        slack_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;

    #[test]
    fn bound_examples() {
        for n in 1..8 {
            assert_eq!(bound_b_sq(n, 0).unwrap(), int(1));
            assert_eq!(bound_b_sq(n, n).unwrap(), int(1));
        }
        assert_eq!(bound_b_sq(4, 2).unwrap(), frac(729, 4096));
        assert!(bound_b_sq(3, 4).is_err());
    }

    #[test]
    fn pair_examples() {
        let p = extremal_pair_for_test(4, 2, 1).unwrap();
        assert_eq!(p.advantage, frac(2, 3));
        assert_eq!(p.mu, SymmetricDist::point(4, 2).unwrap());
        assert_eq!(p.nu, SymmetricDist::uniform_on(4, &[0, 4]).unwrap());

        let p = extremal_pair_for_test(2, 1, 1).unwrap();
        assert_eq!(p.advantage, int(1));
        assert_eq!(p.mu, SymmetricDist::point(2, 2).unwrap());
        assert_eq!(p.nu, SymmetricDist::point(2, 0).unwrap());
        assert!(extremal_pair_for_test(2, 0, 0).is_err());
    }

    #[test]
    fn duality_examples() {
        let c = duality_check(4, 2, 1).unwrap();
        assert_eq!(c.lp_advantage, frac(2, 3));
        assert_eq!(c.approx_error, frac(1, 3));
        assert!(c.holds);
        let c = duality_check(2, 1, 1).unwrap();
        assert_eq!(c.approx_error, frac(1, 2));
        assert!(c.holds);
        for n in 1..=5 {
            for w in 0..=n {
                assert!(duality_check(n, n, w).unwrap().holds);
            }
        }
    }

    #[test]
    fn tv_examples() {
        let (pair, tv) = extremal_tv(4, 2, TvMode::Enumerate).unwrap();
        assert_eq!(tv, frac(2, 3));
        assert_eq!(pair.test, SymmetricTestSet::single(2, 1).unwrap());

        let (_, tv) = extremal_tv(2, 2, TvMode::Enumerate).unwrap();
        assert_eq!(tv, int(1));
        for n in 1..6 {
            assert_eq!(extremal_tv(n, 1, TvMode::Enumerate).unwrap().1, int(1));
        }
        assert!(extremal_tv(20, 11, TvMode::Enumerate).is_err());
    }

    #[test]
    fn alternate_never_beats_enumerate() {
        for n in 2..=7 {
            for k in 1..=n {
                let e = extremal_tv(n, k, TvMode::Enumerate).unwrap().1;
                let a = extremal_tv(n, k, TvMode::Alternate).unwrap().1;
                assert!(a <= e, "n {n} k {k}");
            }
        }
    }

    #[test]
    fn sandwich_examples() {
        let r = verify_sandwich(4, 2, 4).unwrap();
        assert_eq!(r.bound_b_sq, frac(729, 4096));
        assert_eq!(r.lp_advantage, frac(2, 3));
        assert_eq!(r.tv_star, frac(2, 3));
        assert!(r.all_hold());
        assert_eq!(r.ratio_sq(), frac(16384, 6561));

        let r = verify_sandwich(2, 2, 4).unwrap();
        assert_eq!(r.bound_b_sq, int(1));
        assert_eq!(r.lp_advantage, int(1));
        assert_eq!(r.tv_star, int(1));
        assert!(r.all_hold());

        let r = verify_sandwich(6, 0, 4).unwrap();
        assert!(r.tv_star.is_zero() && r.decomposition_holds() && r.upper_bound_holds());
    }
}
