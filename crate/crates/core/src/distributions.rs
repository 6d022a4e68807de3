//! Symmetric distributions over `{0,1}^n`, stored as Hamming-weight mass
//! functions.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{big, binomial, int, Scalar};
use crate::error::{Error, Result};
use crate::symmetrize::hypergeometric_pmf;

/// Mass on each Hamming weight `m = 0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricDist {
    pmf: Vec<Scalar>,
}

impl SymmetricDist {
    pub fn new(pmf: Vec<Scalar>) -> Result<Self> {
        if pmf.len() < 2 {
            return Err(Error::param("a distribution over n >= 1 bits needs n + 1 masses"));
        }
        if pmf.iter().any(Signed::is_negative) {
            return Err(Error::param("negative mass"));
        }
        let total: Scalar = pmf.iter().sum();
        if total != int(1) {
            return Err(Error::param(format!("masses sum to {total}, not 1")));
        }
        Ok(SymmetricDist { pmf })
    }

    /// All mass on weight `m`.
    pub fn point(n: usize, m: usize) -> Result<Self> {
        if m > n {
            return Err(Error::param(format!("weight {m} outside 0..={n}")));
        }
        let mut pmf = vec![Scalar::zero(); n + 1];
        pmf[m] = int(1);
        SymmetricDist::new(pmf)
    }

    /// Uniform mixture of point masses at the given weights.
    pub fn uniform_on(n: usize, weights: &[usize]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::param("empty support"));
        }
        let mut pmf = vec![Scalar::zero(); n + 1];
        let share = Scalar::new(1.into(), weights.len().into());
        for &m in weights {
            if m > n {
                return Err(Error::param(format!("weight {m} outside 0..={n}")));
            }
            pmf[m] += &share;
        }
        SymmetricDist::new(pmf)
    }

    pub fn n(&self) -> usize {
        self.pmf.len() - 1
    }

    pub fn pmf(&self) -> &[Scalar] {
        &self.pmf
    }

    pub fn mass(&self, m: usize) -> &Scalar {
        &self.pmf[m]
    }

    /// Weight distribution of the restriction to any k coordinates.
    pub fn marginal(&self, k: usize) -> Result<SymmetricDist> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::param(format!("marginal size {k} outside 1..={n}")));
        }
        let mut out = vec![Scalar::zero(); k + 1];
        for (m, mass) in self.pmf.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for (w, slot) in out.iter_mut().enumerate() {
                let h = hypergeometric_pmf(n, k, m, w)?;
                if !h.is_zero() {
                    *slot += mass * h;
                }
            }
        }
        Ok(SymmetricDist { pmf: out })
    }

    /// `E[C(|X|, i)]`.
    pub fn factorial_moment(&self, i: usize) -> Result<Scalar> {
        let n = self.n();
        if i > n {
            return Err(Error::param(format!("moment order {i} exceeds n = {n}")));
        }
        Ok(self
            .pmf
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(m, p)| p * big(binomial(m as i64, i as i64)))
            .sum())
    }
}

fn same_n(mu: &SymmetricDist, nu: &SymmetricDist) -> Result<()> {
    if mu.n() != nu.n() {
        return Err(Error::Mismatch(format!(
            "distributions over {} and {} bits",
            mu.n(),
            nu.n()
        )));
    }
    Ok(())
}

/// Agreement of all factorial moments of order `1..=j`; equivalent to equal
/// marginals on every set of at most `j` coordinates.
pub fn is_jwise_indist(mu: &SymmetricDist, nu: &SymmetricDist, j: usize) -> Result<bool> {
    same_n(mu, nu)?;
    if j > mu.n() {
        return Err(Error::param(format!("j = {j} exceeds n = {}", mu.n())));
    }
    for i in 1..=j {
        if mu.factorial_moment(i)? != nu.factorial_moment(i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn tv_distance(mu: &SymmetricDist, nu: &SymmetricDist) -> Result<Scalar> {
    same_n(mu, nu)?;
    let l1: Scalar = mu
        .pmf
        .iter()
        .zip(&nu.pmf)
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(l1 / int(2))
}

/// A symmetric test on k bits that accepts the listed Hamming weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymmetricTestSet {
    pub k: usize,
    pub accept: BTreeSet<usize>,
}

impl SymmetricTestSet {
    pub fn new(k: usize, accept: impl IntoIterator<Item = usize>) -> Result<Self> {
        let accept: BTreeSet<usize> = accept.into_iter().collect();
        if let Some(&w) = accept.iter().find(|&&w| w > k) {
            return Err(Error::param(format!("accepted weight {w} exceeds k = {k}")));
        }
        Ok(SymmetricTestSet { k, accept })
    }

    pub fn single(k: usize, w: usize) -> Result<Self> {
        SymmetricTestSet::new(k, [w])
    }

    /// Acceptance indicator over `0..=k`.
    pub fn indicator(&self) -> Vec<bool> {
        (0..=self.k).map(|w| self.accept.contains(&w)).collect()
    }
}

/// The optimal test between two k-bit weight distributions: accept where
/// `mu` has strictly more mass. Its advantage is the total variation distance.
pub fn best_symmetric_test(
    mu_k: &SymmetricDist,
    nu_k: &SymmetricDist,
) -> Result<(SymmetricTestSet, Scalar)> {
    same_n(mu_k, nu_k)?;
    let k = mu_k.n();
    let accept: Vec<usize> = (0..=k).filter(|&w| mu_k.pmf[w] > nu_k.pmf[w]).collect();
    let adv = accept
        .iter()
        .map(|&w| &mu_k.pmf[w] - &nu_k.pmf[w])
        .sum();
    Ok((SymmetricTestSet::new(k, accept)?, adv))
}

/// `|E_mu[T] - E_nu[T]|` for a test reading `k` of the `n` bits.
pub fn advantage(
    mu: &SymmetricDist,
    nu: &SymmetricDist,
    test: &SymmetricTestSet,
    k: usize,
) -> Result<Scalar> {
    same_n(mu, nu)?;
    if test.k != k {
        return Err(Error::Mismatch(format!("test reads {} bits, not {k}", test.k)));
    }
    let (mk, nk) = (mu.marginal(k)?, nu.marginal(k)?);
    let diff: Scalar = test.accept.iter().map(|&w| &mk.pmf[w] - &nk.pmf[w]).sum();
    Ok(diff.abs())
}

/// Largest bits size handled by the exhaustive oracle.
pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Largest `j` such that `mu` and `nu` have identical marginals on every set
/// of at most `j` coordinates, found by expanding both distributions over all
/// `2^n` strings and marginalizing every coordinate subset. Independent of
/// the moment characterization.
pub fn indist_level_bruteforce(mu: &SymmetricDist, nu: &SymmetricDist) -> Result<usize> {
    same_n(mu, nu)?;
    let n = mu.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::param(format!(
            "exhaustive oracle limited to n <= {BRUTE_FORCE_MAX_N}"
        )));
    }
    let full = (1usize << n) - 1;
    // Difference of the two string-level mass functions.
    let diff: Vec<Scalar> = (0..=full)
        .map(|x| {
            let m = x.count_ones() as usize;
            (&mu.pmf[m] - &nu.pmf[m]) / big(binomial(n as i64, m as i64))
        })
        .collect();

    // marginals[s][y] for y a submask of s: total difference mass of strings
    // whose bits inside s equal y.
    let mut marginals: Vec<Option<Vec<Scalar>>> = vec![None; full + 1];
    marginals[full] = Some(diff);
    let mut order: Vec<usize> = (0..full).collect();
    order.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
    for s in order {
        let free_bit = (0..n).find(|b| s & (1 << b) == 0).expect("s is not full");
        let bit = 1 << free_bit;
        let parent = marginals[s | bit].as_ref().expect("parent computed first");
        let mut table = vec![Scalar::zero(); full + 1];
        let mut y = s;
        loop {
            table[y] = &parent[y] + &parent[y | bit];
            if y == 0 {
                break;
            }
            y = (y - 1) & s;
        }
        marginals[s] = Some(table);
    }

    let mut level = n;
    for (s, table) in marginals.iter().enumerate() {
        let size = s.count_ones() as usize;
        if size == 0 || size > level {
            continue;
        }
        let table = table.as_ref().expect("all subsets computed");
        let mut y = s;
        loop {
            if !table[y].is_zero() {
                level = size - 1;
                break;
            }
            if y == 0 {
                break;
            }
            y = (y - 1) & s;
        }
    }
    Ok(level)
}

/// Exhaustive-oracle version of [`is_jwise_indist`].
pub fn jwise_indist_bruteforce(mu: &SymmetricDist, nu: &SymmetricDist, j: usize) -> Result<bool> {
    if j > mu.n() {
        return Err(Error::param(format!("j = {j} exceeds n = {}", mu.n())));
    }
    Ok(j <= indist_level_bruteforce(mu, nu)?)
}
