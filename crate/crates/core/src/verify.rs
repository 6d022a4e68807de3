//! Parameter sweeps that check the library's exact identities and bounds.
//!
//! Each suite returns a [`Report`] with one row per cell and a verdict per
//! checked property. Cells run in parallel on the ambient rayon pool and are
//! collected in sweep order, so the output does not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::approx::{
    linf_best_approx, monomial_gram_truncation, monomial_hardness_ref, shift_reduce,
};
use crate::arith::{big, binomial, factorial, frac, int, pow_u, DensePoly, Grid, Scalar};
use crate::distributions::{indist_level_bruteforce, is_jwise_indist, SymmetricDist};
use crate::error::{Error, Result};
use crate::extremal::{duality_check, extremal_tv, verify_sandwich, BoundReport, TvMode};
use crate::gram::{build_basis_recurrence, gs_with_values, leading_coeff_sq_product};
use crate::report::{decimal, Report, Row, Verdict};
use crate::symmetrize::{
    build_pw, cw_argmax, cw_closed_form, pi_bracket, zero_set, WallisSeq,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Orthogonality,
    Approx,
    Symmetrize,
    Duality,
    Sandwich,
    Moments,
    Appendix,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Orthogonality,
        Suite::Approx,
        Suite::Symmetrize,
        Suite::Duality,
        Suite::Sandwich,
        Suite::Moments,
        Suite::Appendix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orthogonality => "orthogonality",
            Suite::Approx => "approx",
            Suite::Symmetrize => "symmetrize",
            Suite::Duality => "duality",
            Suite::Sandwich => "sandwich",
            Suite::Moments => "moments",
            Suite::Appendix => "appendix",
            Suite::All => "all",
        }
    }

    /// Sweep size used when `--n-max` is not given. For `appendix` this is
    /// the largest k.
    pub fn default_n_max(self) -> usize {
        match self {
            Suite::Orthogonality => 60,
            Suite::Approx => 24,
            Suite::Symmetrize => 30,
            Suite::Duality => 16,
            Suite::Sandwich => 20,
            Suite::Moments => 8,
            Suite::Appendix => 10_000,
            Suite::All => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| Error::param(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub n_max: Option<usize>,
    /// Random pairs per n for the moments suite.
    pub pairs: usize,
    pub seed: u64,
    /// Allowed exponent c in `TV* <= n^c B`.
    pub slack_exponent: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_max: None,
            pairs: 1000,
            seed: 0x6b77_6973_65,
            slack_exponent: 4,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Report> {
    let n_max = cfg.n_max.unwrap_or(suite.default_n_max());
    match suite {
        Suite::Orthogonality => orthogonality(n_max),
        Suite::Approx => approx_bracket(n_max),
        Suite::Symmetrize => symmetrize(n_max),
        Suite::Duality => duality(n_max),
        Suite::Sandwich => sandwich(n_max, cfg.slack_exponent),
        Suite::Moments => moments(n_max, cfg.pairs, cfg.seed),
        Suite::Appendix => appendix(n_max),
        Suite::All => {
            let mut all = Report::new("verify", Row::new().with("suite", "all"));
            for s in Suite::EACH {
                all.absorb(run_suite(s, cfg)?);
            }
            Ok(all)
        }
    }
}

fn params(n_max: usize) -> Row {
    Row::new().with("n_max", n_max)
}

fn count_verdict(name: &str, failed: usize, total: usize) -> Verdict {
    Verdict::new(name, failed == 0, format!("{} of {total} cells hold", total - failed))
}

/// Gram–Schmidt against the recurrence, pairwise orthogonality, and the
/// leading-coefficient identity `C^2 = N_k = prod 1/(4 alpha^2)` with the
/// ratio `rho` to the factorial closed form.
pub fn orthogonality(n_max: usize) -> Result<Report> {
    let mut report = Report::new("orthogonality", params(n_max));
    let cells = (1..=n_max)
        .into_par_iter()
        .map(orthogonality_cell)
        .collect::<Result<Vec<_>>>()?;
    let (mut bad_basis, mut bad_orth, mut bad_c, mut bad_rho, mut checked_k) = (0, 0, 0, 0, 0);
    let mut rho_lo: Option<(Scalar, usize, usize)> = None;
    let mut rho_hi: Option<(Scalar, usize, usize)> = None;
    for (n, basis_eq, orthogonal, ks) in cells {
        bad_basis += usize::from(!basis_eq);
        bad_orth += usize::from(!orthogonal);
        report.rows.push(
            Row::new()
                .with("kind", "basis")
                .with("n", n)
                .with("max_deg", (n - 1).min(30))
                .with("recurrence_equals_gs", basis_eq)
                .with("orthogonal", orthogonal),
        );
        for (k, c_sq, identity, rho) in ks {
            checked_k += 1;
            bad_c += usize::from(!identity);
            let n4 = big(pow_u(n as u64, 4));
            let in_envelope = rho <= n4 && rho >= Scalar::one() / &n4;
            bad_rho += usize::from(!in_envelope);
            if rho_lo.as_ref().is_none_or(|(r, _, _)| rho < *r) {
                rho_lo = Some((rho.clone(), n, k));
            }
            if rho_hi.as_ref().is_none_or(|(r, _, _)| rho > *r) {
                rho_hi = Some((rho.clone(), n, k));
            }
            report.rows.push(
                Row::new()
                    .with("kind", "leading")
                    .with("n", n)
                    .with("k", k)
                    .with("c_sq", c_sq)
                    .with("c_sq_identity", identity)
                    .with("rho", rho)
                    .with("rho_in_envelope", in_envelope),
            );
        }
    }
    report
        .verdicts
        .push(count_verdict("recurrence_equals_gs", bad_basis, n_max));
    report.verdicts.push(count_verdict("orthogonal", bad_orth, n_max));
    report
        .verdicts
        .push(count_verdict("c_sq_identity", bad_c, checked_k));
    let envelope = match (&rho_lo, &rho_hi) {
        (Some((lo, ln, lk)), Some((hi, hn, hk))) => format!(
            "; rho ranges over [{} at (n={ln},k={lk}), {} at (n={hn},k={hk})]",
            decimal(lo),
            decimal(hi)
        ),
        _ => String::new(),
    };
    report.verdicts.push(Verdict::new(
        "rho_within_n4",
        bad_rho == 0,
        format!("{} of {checked_k} cells hold{envelope}", checked_k - bad_rho),
    ));
    Ok(report)
}

type LeadingCell = (usize, Scalar, bool, Scalar);

fn orthogonality_cell(n: usize) -> Result<(usize, bool, bool, Vec<LeadingCell>)> {
    let max_deg = (n - 1).min(30);
    let rec = build_basis_recurrence(n, max_deg)?;
    // One Gram-Schmidt run to degree n-1 serves both checks.
    let (gs_full, gs_values) = gs_with_values(n, n - 1)?;
    let basis_eq = rec.polys() == &gs_full.polys()[..=max_deg]
        && rec.norms_sq() == &gs_full.norms_sq()[..=max_deg];

    let grid = Grid::inner(n)?;
    let dot = |a: &[Scalar], b: &[Scalar]| -> Scalar {
        a.iter().zip(b).map(|(x, y)| x * y).sum::<Scalar>() / int(n as i64)
    };
    // Orthogonality of the recurrence family, from its own values.
    let values: Vec<Vec<Scalar>> = rec
        .polys()
        .iter()
        .map(|p| grid.points().iter().map(|x| p.eval(x)).collect())
        .collect();
    let mut orthogonal = true;
    for i in 0..values.len() {
        for j in i..values.len() {
            let ip = dot(&values[i], &values[j]);
            let ok = if i == j {
                ip == *rec.norm_sq(i)
            } else {
                ip.is_zero()
            };
            orthogonal &= ok;
        }
    }

    let mut ks = Vec::new();
    let mut mono: Vec<Scalar> = vec![Scalar::one(); n];
    for k in 1..n {
        for (v, x) in mono.iter_mut().zip(grid.points()) {
            *v *= x;
        }
        // Unit-norm leading coefficient of x^k: <x^k, psi_k>^2 / N_k.
        let proj = dot(&mono, &gs_values[k]);
        let c_sq = &proj * &proj / gs_full.norm_sq(k);
        let identity = c_sq == *gs_full.norm_sq(k) && c_sq == leading_coeff_sq_product(n, k)?;
        let (nn, kk) = (n as u64, k as u64);
        let rho = &c_sq
            * Scalar::new(
                pow_u(2 * nn, 2 * kk) * factorial(nn - kk),
                factorial(nn + kk),
            );
        ks.push((k, c_sq, identity, rho));
    }
    Ok((n, basis_eq, orthogonal, ks))
}

/// Hardness and achievability bracket for approximating `x^k` with degree
/// `k-1`: the inner-grid optimum is at least `C`, the outer-grid optimum is
/// at least the inner one (and shifting it back certifies that), and the
/// Gram truncation is never better than the LP optimum.
pub fn approx_bracket(n_max: usize) -> Result<Report> {
    let mut report = Report::new("approx", params(n_max));
    let cells: Vec<(usize, usize)> = (2..=n_max)
        .flat_map(|n| (1..n).map(move |k| (n, k)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(n, k)| approx_cell(n, k))
        .collect::<Result<Vec<_>>>()?;
    let mut failed = [0usize; 4];
    for (row, flags) in rows {
        for (f, ok) in failed.iter_mut().zip(flags) {
            *f += usize::from(!ok);
        }
        report.rows.push(row);
    }
    let total = cells.len();
    for (name, f) in ["hardness", "outer_dominates_inner", "shift_certificate", "truncation_not_better"]
        .iter()
        .zip(failed)
    {
        report.verdicts.push(count_verdict(name, f, total));
    }
    Ok(report)
}

fn approx_cell(n: usize, k: usize) -> Result<(Row, [bool; 4])> {
    let target = DensePoly::monomial(k);
    let inner = linf_best_approx(&target, &Grid::inner(n)?, k - 1)?;
    let outer = linf_best_approx(&target, &Grid::outer(n)?, k - 1)?;
    let c_sq = leading_coeff_sq_product(n, k)?;
    let shifted = shift_reduce(&target, &outer)?;
    let trunc = monomial_gram_truncation(n, k)?;
    let hardness = &inner.epsilon * &inner.epsilon >= c_sq;
    let dominates = outer.epsilon >= inner.epsilon;
    let shift_ok = shifted.epsilon <= outer.epsilon && shifted.epsilon >= inner.epsilon;
    let trunc_ok = trunc.epsilon >= outer.epsilon;
    let reference_sq = monomial_hardness_ref(n, k)?;
    let row = Row::new()
        .with("n", n)
        .with("k", k)
        .with("eps_in", &inner.epsilon)
        .with("c_sq", &c_sq)
        .with("eps_out", &outer.epsilon)
        .with("eps_shift", &shifted.epsilon)
        .with("eps_truncation", &trunc.epsilon)
        .with("truncation_ratio", &trunc.epsilon / &outer.epsilon)
        .with("eps_in_sq_over_reference_sq", &inner.epsilon * &inner.epsilon / reference_sq)
        .with("hardness", hardness)
        .with("outer_dominates_inner", dominates)
        .with("shift_certificate", shift_ok)
        .with("truncation_not_better", trunc_ok);
    Ok((row, [hardness, dominates, shift_ok, trunc_ok]))
}

/// Symmetrized tests `p_w`: degree, partition of unity, zero sets, the
/// closed-form leading coefficient, and the argmax at `w = k/2`.
pub fn symmetrize(n_max: usize) -> Result<Report> {
    let mut report = Report::new("symmetrize", params(n_max));
    let cells: Vec<(usize, usize)> = (1..=n_max)
        .flat_map(|n| (0..=n).map(move |k| (n, k)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(n, k)| symmetrize_cell(n, k))
        .collect::<Result<Vec<_>>>()?;
    let mut failed = [0usize; 5];
    let mut argmax_cells = 0;
    for (row, flags) in rows {
        for (f, ok) in failed.iter_mut().zip(flags) {
            *f += usize::from(!ok.unwrap_or(true));
        }
        argmax_cells += usize::from(flags[4].is_some());
        report.rows.push(row);
    }
    let total = cells.len();
    for (i, name) in ["degree", "partition_of_unity", "zero_sets", "closed_form"]
        .iter()
        .enumerate()
    {
        report.verdicts.push(count_verdict(name, failed[i], total));
    }
    report
        .verdicts
        .push(count_verdict("argmax_half", failed[4], argmax_cells));
    Ok(report)
}

fn symmetrize_cell(n: usize, k: usize) -> Result<(Row, [Option<bool>; 5])> {
    let tests = (0..=k).map(|w| build_pw(n, k, w)).collect::<Result<Vec<_>>>()?;
    let degree = tests.iter().all(|t| t.poly.degree() <= k as i64);
    let sum = tests
        .iter()
        .fold(DensePoly::zero(), |acc, t| &acc + &t.poly);
    let unity = sum == DensePoly::constant(Scalar::one());
    let grid = Grid::outer(n)?;
    let mut zeros_ok = true;
    for (w, t) in tests.iter().enumerate() {
        let observed: Vec<Scalar> = grid
            .points()
            .iter()
            .filter(|x| t.poly.eval(x).is_zero())
            .cloned()
            .collect();
        let mut expected = zero_set(n, k, w)?;
        expected.sort();
        zeros_ok &= observed == expected;
    }
    let closed = if (n - k) % 2 == 0 {
        let mut ok = true;
        for (w, t) in tests.iter().enumerate() {
            ok &= cw_closed_form(n, k, w)? == t.leading_abs;
        }
        Some(ok)
    } else {
        None
    };
    let argmax = if n % 2 == 0 && k % 2 == 0 {
        let a = cw_argmax(n, k)?;
        Some(a.holds())
    } else {
        None
    };
    let leading: Vec<Scalar> = tests.iter().map(|t| t.leading_abs.clone()).collect();
    let signs: Vec<i64> = tests.iter().map(|t| t.leading_sign as i64).collect();
    let row = Row::new()
        .with("n", n)
        .with("k", k)
        .with("leading_abs", leading)
        .with("leading_sign", crate::report::Cell::Ints(signs))
        .with("degree_ok", degree)
        .with("partition_of_unity", unity)
        .with("zero_sets", zeros_ok)
        .with("closed_form", closed)
        .with("argmax_half", argmax);
    Ok((row, [Some(degree), Some(unity), Some(zeros_ok), closed, argmax]))
}

/// Strong duality between the pair LP and minimax approximation of `p_w`.
pub fn duality(n_max: usize) -> Result<Report> {
    let mut report = Report::new("duality", params(n_max));
    let cells: Vec<(usize, usize, usize)> = (1..=n_max)
        .flat_map(|n| (1..=n).flat_map(move |k| (0..=k).map(move |w| (n, k, w))))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(n, k, w)| duality_check(n, k, w))
        .collect::<Result<Vec<_>>>()?;
    let mut failed = 0;
    for c in results {
        failed += usize::from(!c.holds);
        report.rows.push(
            Row::new()
                .with("n", c.n)
                .with("k", c.k)
                .with("w", c.w)
                .with("lp_advantage", &c.lp_advantage)
                .with("approx_error", &c.approx_error)
                .with("holds", c.holds),
        );
    }
    report
        .verdicts
        .push(count_verdict("lp_equals_twice_error", failed, cells.len()));
    Ok(report)
}

/// Upper and lower bounds on the extremal marginal distance. The lower
/// bound verdict covers even `n` and even `k < n`; other parities are
/// reported per row only.
pub fn sandwich(n_max: usize, slack_exponent: u32) -> Result<Report> {
    let mut report = Report::new(
        "sandwich",
        params(n_max).with("slack_exponent", slack_exponent as usize),
    );
    let cells: Vec<(usize, usize)> = (1..=n_max)
        .flat_map(|n| (1..=n).map(move |k| (n, k)))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(n, k)| {
            let r = verify_sandwich(n, k, slack_exponent)?;
            // Cross-check the heuristic search where the exact one also ran.
            let alt = if r.tv_mode == TvMode::Enumerate && k <= 8 {
                Some(extremal_tv(n, k, TvMode::Alternate)?.1)
            } else {
                None
            };
            Ok((r, alt))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut failed = [0usize; 6];
    let mut lower_cells = 0;
    let mut exponent: Option<(f64, usize, usize)> = None;
    let mut alt_matches = 0;
    let mut alt_cells = 0;
    for (r, alt) in results {
        let lower_scope = r.n % 2 == 0 && r.k % 2 == 0 && r.k < r.n;
        lower_cells += usize::from(lower_scope);
        let lower = r.lower_bound_holds();
        let alt_le = alt.as_ref().is_none_or(|a| *a <= r.tv_star);
        if let Some(a) = &alt {
            alt_cells += 1;
            alt_matches += usize::from(*a == r.tv_star);
        }
        let tv_range = r.tv_star <= Scalar::one() && (r.k != r.n || r.tv_star.is_one());
        failed[0] += usize::from(!r.duality_holds());
        failed[1] += usize::from(lower_scope && !lower);
        failed[2] += usize::from(!r.decomposition_holds());
        failed[3] += usize::from(!r.upper_bound_holds());
        failed[4] += usize::from(!tv_range);
        failed[5] += usize::from(!alt_le);
        if let Some(c) = r.measured_exponent() {
            if exponent.is_none_or(|(e, _, _)| c > e) {
                exponent = Some((c, r.n, r.k));
            }
        }
        report.rows.push(sandwich_row(&r, alt));
    }
    let total = cells.len();
    report.verdicts.push(count_verdict("duality", failed[0], total));
    report
        .verdicts
        .push(count_verdict("lower_bound_even", failed[1], lower_cells));
    report.verdicts.push(count_verdict("decomposition", failed[2], total));
    let envelope = exponent
        .map(|(c, n, k)| format!("; largest measured exponent {c:.6} at (n={n},k={k})"))
        .unwrap_or_default();
    report.verdicts.push(Verdict::new(
        "upper_bound",
        failed[3] == 0,
        format!("{} of {total} cells hold with c = {slack_exponent}{envelope}", total - failed[3]),
    ));
    report.verdicts.push(count_verdict("tv_range", failed[4], total));
    report.verdicts.push(Verdict::new(
        "alternate_below_enumerate",
        failed[5] == 0,
        format!(
            "{} of {alt_cells} cells hold; alternate matches enumerate on {alt_matches}",
            alt_cells - failed[5]
        ),
    ));
    Ok(report)
}

pub(crate) fn sandwich_row(r: &BoundReport, alt: Option<Scalar>) -> Row {
    let test = r
        .tv_pair
        .as_ref()
        .map(|p| p.test.accept.iter().copied().collect::<Vec<_>>());
    let mode = match r.tv_mode {
        TvMode::Enumerate => "enumerate",
        TvMode::Alternate => "alternate (lower bound)",
    };
    Row::new()
        .with("n", r.n)
        .with("k", r.k)
        .with("bound_b_sq", &r.bound_b_sq)
        .with("bound_b", r.bound_b())
        .with("w_star", r.w_star)
        .with("lp_advantage", &r.lp_advantage)
        .with("approx_error", &r.approx_error)
        .with("lp_max", &r.lp_max)
        .with("tv_star", &r.tv_star)
        .with("tv_mode", mode)
        .with("tv_test", test)
        .with("tv_alternate", alt)
        .with("ratio_sq", r.ratio_sq())
        .with("measured_exponent", r.measured_exponent())
        .with("lower_bound_holds", r.lower_bound_holds())
        .with("decomposition_holds", r.decomposition_holds())
        .with("upper_bound_holds", r.upper_bound_holds())
}

/// Random pair of symmetric distributions on `n` bits whose indistinguishability
/// level is spread over `0..=n`.
///
/// `mu` has small random integer masses. `nu` adds a multiple of an r-th
/// finite difference, which leaves factorial moments below r unchanged, so
/// the pair is (r-1)-wise indistinguishable and generically no more.
/// A quarter of the pairs use an independent `nu` instead.
pub fn random_pair<R: Rng>(n: usize, rng: &mut R) -> Result<(SymmetricDist, SymmetricDist)> {
    let mu = random_dist(n, rng)?;
    if rng.gen_range(0..4) == 0 {
        return Ok((mu.clone(), random_dist(n, rng)?));
    }
    let r = rng.gen_range(1..=n + 1);
    let mut delta = vec![Scalar::zero(); n + 1];
    if r <= n {
        for _ in 0..rng.gen_range(1..=2) {
            let offset = rng.gen_range(0..=n - r);
            let weight = int(rng.gen_range(1..=3));
            for i in 0..=r {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                delta[offset + i] += &weight * int(sign) * big(binomial(r as i64, i as i64));
            }
        }
    }
    // Largest step keeping nu nonnegative, then a random fraction of it.
    let t_max = delta
        .iter()
        .zip(mu.pmf())
        .filter(|(d, _)| d.is_negative())
        .map(|(d, m)| m / d.abs())
        .min()
        .unwrap_or_else(Scalar::zero);
    let q = rng.gen_range(1..=4);
    let t = t_max * frac(rng.gen_range(1..=q), q);
    let nu = mu
        .pmf()
        .iter()
        .zip(&delta)
        .map(|(m, d)| m + &t * d)
        .collect();
    Ok((mu, SymmetricDist::new(nu)?))
}

fn random_dist<R: Rng>(n: usize, rng: &mut R) -> Result<SymmetricDist> {
    let mut masses: Vec<i64> = (0..=n)
        .map(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(1..=12) })
        .collect();
    if masses.iter().all(|&m| m == 0) {
        masses[rng.gen_range(0..=n)] = 1;
    }
    let total: i64 = masses.iter().sum();
    SymmetricDist::new(masses.iter().map(|&m| frac(m, total)).collect())
}

/// Factorial-moment indistinguishability against the exhaustive
/// subset-marginal oracle, for every `j <= n`.
pub fn moments(n_max: usize, pairs: usize, seed: u64) -> Result<Report> {
    let mut report = Report::new(
        "moments",
        params(n_max).with("pairs", pairs).with("seed", seed as i64),
    );
    let mut total_failed = 0;
    let mut total_checks = 0;
    for n in 1..=n_max {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let instances = (0..pairs)
            .map(|_| random_pair(n, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        let outcomes = instances
            .par_iter()
            .map(|(mu, nu)| {
                let level = indist_level_bruteforce(mu, nu)?;
                let mut disagreements = 0;
                for j in 0..=n {
                    if is_jwise_indist(mu, nu, j)? != (j <= level) {
                        disagreements += 1;
                    }
                }
                Ok((level, disagreements))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut histogram = vec![0usize; n + 1];
        let mut failed = 0;
        for (level, bad) in outcomes {
            histogram[level] += 1;
            failed += bad;
        }
        total_failed += failed;
        total_checks += pairs * (n + 1);
        report.rows.push(
            Row::new()
                .with("n", n)
                .with("pairs", pairs)
                .with("checks", pairs * (n + 1))
                .with("disagreements", failed)
                .with("level_histogram", histogram),
        );
    }
    report.verdicts.push(Verdict::new(
        "moments_match_bruteforce",
        total_failed == 0,
        format!("{} of {total_checks} (pair, j) checks agree", total_checks - total_failed),
    ));
    Ok(report)
}

/// Range of `v(k) = prod_{i<=k} (1 - 1/(4 i^2))` for `1 <= k <= k_max`.
///
/// Every comparison is exact. Monotonicity follows from each new factor
/// being below 1; the lower bound `2/pi < v` uses a rational lower bound
/// on pi. Cells where the printed `1/k^2 <= v` fails are listed.
pub fn appendix(k_max: usize) -> Result<Report> {
    let mut report = Report::new("appendix", Row::new().with("k_max", k_max));
    let (pi_lo, pi_hi) = pi_bracket(40);
    let (lo_num, lo_den) = (pi_lo.numer().clone(), pi_lo.denom().clone());
    let (mut decreasing, mut above, mut below_three_quarters, mut below_one) = (true, true, true, true);
    let mut k_squared_failures = Vec::new();
    let mut last = None;
    for (k, (num, den)) in WallisSeq::new().take(k_max) {
        let i = k as i64;
        // v(k)/v(k-1) = (4k^2 - 1)/(4k^2) < 1.
        if k > 1 {
            decreasing &= 4 * i * i - 1 < 4 * i * i;
        }
        above &= &num * &lo_num > &den * &lo_den * 2;
        below_three_quarters &= &num * 4 <= &den * 3;
        below_one &= num <= den;
        if num.clone() * (i * i) < den {
            k_squared_failures.push(k as usize);
        }
        if k as usize == k_max || k <= 3 {
            report.rows.push(
                Row::new()
                    .with("k", k as usize)
                    .with("v", Scalar::new(num.clone(), den.clone()))
                    .with("inverse_k_squared_holds", num.clone() * (i * i) >= den),
            );
        }
        last = Some(k);
    }
    if last.is_none() {
        return Err(Error::param("k-max must be at least 1"));
    }
    let two_over_pi = Scalar::from_integer(2.into()) / &pi_hi;
    report.verdicts.push(Verdict::new("strictly_decreasing", decreasing, ""));
    report.verdicts.push(Verdict::new(
        "above_two_over_pi",
        above,
        format!("2/pi >= {}", decimal(&two_over_pi)),
    ));
    report
        .verdicts
        .push(Verdict::new("at_most_three_quarters", below_three_quarters, ""));
    report.verdicts.push(Verdict::new("at_most_one", below_one, ""));
    report.verdicts.push(Verdict::new(
        "inverse_k_squared_erratum",
        k_squared_failures == [1],
        format!("printed lower bound 1/k^2 <= v fails at k in {k_squared_failures:?}"),
    ));
    Ok(report)
}
