//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification finding, 2 usage error,
//! 3 internal error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};

use crate::approx::{
    linf_best_approx, monomial_gram_truncation, monomial_hardness_ref, uniform_reference_error,
};
use crate::arith::{weight_to_point, DensePoly, Grid, GridKind, Scalar};
use crate::distributions::is_jwise_indist;
use crate::error::{Error, Result};
use crate::extremal::{
    duality_check, extremal_pair_for_test, extremal_tv, verify_sandwich, ExtremalPair, TvMode,
};
use crate::gram::{alpha_sq, build_basis_gs, build_basis_recurrence};
use crate::report::{Cell, Report, Row, Verdict};
use crate::symmetrize::{build_pw, cw_closed_form};
use crate::verify::{run_suite, sandwich_row, Suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "kwise", version, about = "Exact Gram polynomials, minimax approximation and k-wise indistinguishable pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridArg {
    In,
    Out,
}

impl From<GridArg> for GridKind {
    fn from(g: GridArg) -> Self {
        match g {
            GridArg::In => GridKind::In,
            GridArg::Out => GridKind::Out,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Lp,
    Truncate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TvArg {
    Enumerate,
    Alternate,
}

impl From<TvArg> for TvMode {
    fn from(t: TvArg) -> Self {
        match t {
            TvArg::Enumerate => TvMode::Enumerate,
            TvArg::Alternate => TvMode::Alternate,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the points of a grid.
    Grid {
        #[arg(long, value_enum)]
        kind: GridArg,
        #[arg(long)]
        n: usize,
    },
    /// Monic Gram polynomials, squared norms and recurrence coefficients.
    Gram {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_deg: usize,
    },
    /// Best degree k-1 approximation of x^k on a grid.
    Approx {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = GridArg::In)]
        grid: GridArg,
        #[arg(long, value_enum, default_value_t = Method::Lp)]
        method: Method,
    },
    /// Symmetrized test polynomials.
    Symm {
        #[command(subcommand)]
        command: SymmCommand,
    },
    /// Extremal (k-1)-wise indistinguishable pair.
    Pair(PairArgs),
    /// Upper and lower bound report for one (n, k) cell.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Allowed exponent c in TV* <= n^c B.
        #[arg(long, default_value_t = 4)]
        slack: u32,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n_max: Option<usize>,
        /// Random pairs per n (moments suite).
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 4)]
        slack: u32,
    },
}

#[derive(Subcommand, Debug)]
enum SymmCommand {
    /// p_w for one w, or for every w when omitted.
    Pw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        w: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, conflicts_with_all = ["best_w", "tv"])]
    w: Option<usize>,
    /// Use the weight with the largest advantage (the default without --w).
    #[arg(long, conflicts_with = "tv")]
    best_w: bool,
    /// Optimize over all symmetric tests instead of a single weight.
    #[arg(long, value_enum)]
    tv: Option<TvArg>,
}

/// Parse arguments, run, write the report and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs as usize)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return EXIT_INTERNAL;
        }
    };
    let report = match pool.install(|| run(&cli.command)) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return if e.is_usage() { EXIT_USAGE } else { EXIT_INTERNAL };
        }
    };
    let text = match cli.format {
        Format::Json => Ok(report.to_json()),
        Format::Csv => report.to_csv(),
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    if let Err(e) = emit(cli.out.as_ref(), &text) {
        eprintln!("error: writing output: {e}");
        return EXIT_INTERNAL;
    }
    for v in report.verdicts.iter().filter(|v| !v.passed) {
        eprintln!("finding: {} failed: {}", v.name, v.detail);
    }
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_FINDING
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Run one parsed command.
fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Grid { kind, n } => cmd_grid((*kind).into(), *n),
        Command::Gram { n, max_deg } => cmd_gram(*n, *max_deg),
        Command::Approx { n, k, grid, method } => cmd_approx(*n, *k, (*grid).into(), *method),
        Command::Symm {
            command: SymmCommand::Pw { n, k, w },
        } => cmd_symm_pw(*n, *k, *w),
        Command::Pair(args) => cmd_pair(args),
        Command::Bounds { n, k, slack } => cmd_bounds(*n, *k, *slack),
        Command::Verify {
            suite,
            n_max,
            pairs,
            seed,
            slack,
        } => {
            let suite: Suite = suite.parse()?;
            let mut cfg = SuiteConfig {
                n_max: *n_max,
                pairs: *pairs,
                slack_exponent: *slack,
                ..SuiteConfig::default()
            };
            if let Some(seed) = seed {
                cfg.seed = *seed;
            }
            let mut report = run_suite(suite, &cfg)?;
            let mut params = Row::new().with("suite", suite.name());
            params.0.extend(report.params.0.drain(..).filter(|(k, _)| k != "suite"));
            report.params = params;
            report.command = "verify".into();
            Ok(report)
        }
    }
}

fn cmd_grid(kind: GridKind, n: usize) -> Result<Report> {
    let grid = Grid::new(kind, n)?;
    let mut report = Report::new(
        "grid",
        Row::new().with("kind", kind.to_string()).with("n", n),
    );
    for (i, t) in grid.points().iter().enumerate() {
        let mut row = Row::new().with("index", i).with("point", t);
        if kind == GridKind::Out {
            row = row.with("weight", i);
        }
        report.rows.push(row);
    }
    Ok(report)
}

fn cmd_gram(n: usize, max_deg: usize) -> Result<Report> {
    let rec = build_basis_recurrence(n, max_deg)?;
    let gs = build_basis_gs(n, max_deg)?;
    let mut report = Report::new("gram", Row::new().with("n", n).with("max_deg", max_deg));
    for d in 0..=max_deg {
        let alpha = if d >= 1 { Some(alpha_sq(n, d)?) } else { None };
        report.rows.push(
            Row::new()
                .with("d", d)
                .with("psi", rec.psi(d).to_string())
                .with("psi_coeffs", rec.psi(d).coeffs())
                .with("norm_sq", rec.norm_sq(d))
                .with("alpha_prev_sq", alpha),
        );
    }
    report.verdicts.push(Verdict::new(
        "recurrence_equals_gs",
        rec == gs,
        "coefficient-exact comparison",
    ));
    Ok(report)
}

fn cmd_approx(n: usize, k: usize, kind: GridKind, method: Method) -> Result<Report> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let cert = match method {
        Method::Lp => linf_best_approx(&DensePoly::monomial(k), &Grid::new(kind, n)?, k - 1)?,
        Method::Truncate => {
            if kind != GridKind::Out {
                return Err(Error::param("the truncate method is defined on the out grid"));
            }
            monomial_gram_truncation(n, k)?
        }
    };
    let method_name = match method {
        Method::Lp => "lp",
        Method::Truncate => "truncate",
    };
    let mut report = Report::new(
        "approx",
        Row::new()
            .with("n", n)
            .with("k", k)
            .with("grid", kind.to_string())
            .with("method", method_name),
    );
    let hardness_ref = if k < n {
        Some(monomial_hardness_ref(n, k)?)
    } else {
        None
    };
    report.rows.push(
        Row::new()
            .with("kind", "summary")
            .with("epsilon", &cert.epsilon)
            .with("approximant", cert.approximant.to_string())
            .with("approximant_coeffs", cert.approximant.coeffs())
            .with("degree_bound", cert.degree_bound)
            .with("optimal", cert.optimal)
            .with("active", cert.active.clone())
            .with("alternation", cert.alternation.clone())
            .with("hardness_reference_sq", hardness_ref)
            .with("uniform_reference", uniform_reference_error(k)?),
    );
    for (i, t) in cert.points().iter().enumerate() {
        report.rows.push(
            Row::new()
                .with("kind", "point")
                .with("index", i)
                .with("t", t)
                .with("target", cert.target.eval(t))
                .with("approximant_value", cert.approximant.eval(t))
                .with("residual", &cert.residuals[i])
                .with("active", cert.active.contains(&i)),
        );
    }
    report.verdicts.push(Verdict::new(
        "integrity",
        cert.integrity_holds(),
        "residuals and epsilon recomputed from the approximant",
    ));
    if cert.optimal {
        report.verdicts.push(Verdict::new(
            "equioscillation",
            cert.equioscillates(),
            format!(
                "{} alternating active points for degree bound {}",
                cert.alternation.len(),
                cert.degree_bound
            ),
        ));
    }
    Ok(report)
}

fn cmd_symm_pw(n: usize, k: usize, w: Option<usize>) -> Result<Report> {
    let ws: Vec<usize> = match w {
        Some(w) => vec![w],
        None => (0..=k).collect(),
    };
    let mut report = Report::new(
        "symm pw",
        Row::new().with("n", n).with("k", k).with("w", w),
    );
    let mut sum = DensePoly::zero();
    let mut closed_ok = true;
    let mut degree_ok = true;
    for &w in &ws {
        let t = build_pw(n, k, w)?;
        let closed = if (n - k) % 2 == 0 {
            Some(cw_closed_form(n, k, w)?)
        } else {
            None
        };
        if let Some(c) = &closed {
            closed_ok &= *c == t.leading_abs;
        }
        degree_ok &= t.poly.degree() <= k as i64;
        sum = &sum + &t.poly;
        report.rows.push(
            Row::new()
                .with("w", w)
                .with("poly", t.poly.to_string())
                .with("coeffs", t.poly.coeffs())
                .with("factored", t.factored().to_string())
                .with("degree", Cell::Int(t.poly.degree()))
                .with("leading_abs", &t.leading_abs)
                .with("leading_sign", Cell::Int(t.leading_sign as i64))
                .with("zeros", t.zeros.clone())
                .with("values_by_weight", t.values_by_weight())
                .with("closed_form", closed),
        );
    }
    report
        .verdicts
        .push(Verdict::new("degree_at_most_k", degree_ok, ""));
    if (n - k) % 2 == 0 {
        report
            .verdicts
            .push(Verdict::new("closed_form", closed_ok, "exact leading coefficient magnitude"));
    }
    if w.is_none() {
        report.verdicts.push(Verdict::new(
            "partition_of_unity",
            sum == DensePoly::constant(Scalar::one()),
            "sum over w of p_w",
        ));
    }
    Ok(report)
}

fn pair_row(pair: &ExtremalPair) -> Result<Row> {
    let points = (0..=pair.n)
        .map(|m| weight_to_point(pair.n, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(Row::new()
        .with("test", pair.test.accept.iter().copied().collect::<Vec<_>>())
        .with("advantage", &pair.advantage)
        .with("indist_level", pair.indist_level)
        .with("points", points)
        .with("mu", pair.mu.pmf())
        .with("nu", pair.nu.pmf())
        .with("mu_marginal", pair.mu.marginal(pair.k)?.pmf())
        .with("nu_marginal", pair.nu.marginal(pair.k)?.pmf()))
}

fn cmd_pair(args: &PairArgs) -> Result<Report> {
    let (n, k) = (args.n, args.k);
    if k == 0 || k > n {
        return Err(Error::param(format!("need 1 <= k <= n (got n {n}, k {k})")));
    }
    let mut params = Row::new().with("n", n).with("k", k);
    if let Some(tv) = args.tv {
        let mode: TvMode = tv.into();
        let (pair, tv_star) = extremal_tv(n, k, mode)?;
        let label = match mode {
            TvMode::Enumerate => "enumerate",
            TvMode::Alternate => "alternate (lower bound)",
        };
        params = params.with("tv", label);
        let mut report = Report::new("pair", params);
        let mut row = Row::new().with("tv_star", &tv_star);
        row.0.extend(pair_row(&pair)?.0);
        report.rows.push(row);
        report.verdicts.push(Verdict::new(
            "indistinguishable",
            is_jwise_indist(&pair.mu, &pair.nu, k - 1)?,
            format!("{}-wise", k - 1),
        ));
        return Ok(report);
    }
    let w = match args.w {
        Some(w) if w > k => return Err(Error::param(format!("w must be <= k (got {w})"))),
        Some(w) => w,
        None => {
            let mut best = (0, Scalar::zero());
            for w in 0..=k {
                let adv = extremal_pair_for_test(n, k, w)?.advantage;
                if adv > best.1 {
                    best = (w, adv);
                }
            }
            best.0
        }
    };
    params = params.with("w", w).with("best_w", args.w.is_none());
    let pair = extremal_pair_for_test(n, k, w)?;
    let cell = duality_check(n, k, w)?;
    let mut report = Report::new("pair", params);
    let mut row = Row::new().with("w", w);
    row.0.extend(pair_row(&pair)?.0);
    row = row.with("approx_error", &cell.approx_error);
    report.rows.push(row);
    report.verdicts.push(Verdict::new(
        "duality",
        cell.holds,
        "advantage equals twice the degree k-1 minimax error of p_w on the out grid",
    ));
    report.verdicts.push(Verdict::new(
        "indistinguishable",
        is_jwise_indist(&pair.mu, &pair.nu, k - 1)?,
        format!("{}-wise", k - 1),
    ));
    Ok(report)
}

fn cmd_bounds(n: usize, k: usize, slack: u32) -> Result<Report> {
    let r = verify_sandwich(n, k, slack)?;
    let mut report = Report::new(
        "bounds",
        Row::new()
            .with("n", n)
            .with("k", k)
            .with("slack_exponent", slack as usize),
    );
    report.rows.push(sandwich_row(&r, None));
    report
        .verdicts
        .push(Verdict::new("duality", r.duality_holds(), ""));
    if k >= 1 && k % 2 == 0 && n % 2 == 0 && k < n {
        report
            .verdicts
            .push(Verdict::new("lower_bound", r.lower_bound_holds(), "lp at w = k/2 >= B"));
    }
    report.verdicts.push(Verdict::new(
        "decomposition",
        r.decomposition_holds(),
        "TV* <= (k+1) max_w lp",
    ));
    report.verdicts.push(Verdict::new(
        "upper_bound",
        r.upper_bound_holds(),
        format!("TV* <= n^{slack} B"),
    ));
    Ok(report)
}
