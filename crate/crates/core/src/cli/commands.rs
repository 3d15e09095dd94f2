use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::*;
use crate::algebra::Polynomial;
use crate::coeffs::LGCoefficientTable;
use crate::domains::{error_bound, level_curves as contour, Grid, PathKind};
use crate::error::Result;
use crate::eval::{eval_gamma_lg, eval_gti, eval_upper_gamma_lg, LGEvalConfig};
use crate::gti::{Gti, PrecisionMode};
use crate::oracle::{delta_family_with, oracle_gti, refine_zero_with, CiSiIntegrator, QuadratureConfig};
use crate::zeros::{expand_zero, expand_zero_gti, QTable, ZeroExpansion, ZeroFamily};

fn mode(extended: bool) -> PrecisionMode {
    if extended {
        PrecisionMode::Extended
    } else {
        PrecisionMode::Standard
    }
}

fn print_json<T: Serialize>(v: &T, out: &mut dyn Write) -> std::result::Result<(), CliError> {
    let s = serde_json::to_string_pretty(v).map_err(|e| CliError { code: EXIT_NUMERICAL, message: e.to_string() })?;
    writeln!(out, "{s}").map_err(io_err)
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::domain(format!("cannot write output: {e}"))
}

/// Write `body` to `path` in one call, or to `out` when no path is given.
fn emit(body: &str, path: Option<&Path>, out: &mut dyn Write) -> std::result::Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| CliError::domain(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(body.as_bytes()).map_err(io_err),
    }
}

pub(super) fn eval(args: EvalArgs, out: &mut dyn Write) -> std::result::Result<(), CliError> {
    let cfg = LGEvalConfig::new(args.order, mode(args.extended), args.bound)?;
    let result = match (args.family, args.igf) {
        (Some(family), _) => {
            let theta = args.theta.ok_or_else(|| CliError::domain("--family needs --theta"))?;
            eval_gti(args.a, theta, family, args.alpha, &cfg)?
        }
        (None, Some(igf)) => {
            let (re, im) = args.z.ok_or_else(|| CliError::domain("--igf needs --z"))?;
            let z = Complex64::new(re, im);
            match igf {
                Igf::Lower => eval_gamma_lg(args.a, z, &cfg)?,
                Igf::Upper => eval_upper_gamma_lg(args.a, z, &cfg)?,
            }
        }
        (None, None) => return Err(CliError::domain("one of --family or --igf is required")),
    };
    print_json(&result, out)
}

struct ZeroRow {
    expansion: ZeroExpansion,
    refined: Option<(f64, f64)>,
}

pub(super) fn zeros(args: ZerosArgs, reproducible: bool, out: &mut dyn Write) -> std::result::Result<(), CliError> {
    let ms: Vec<u32> = args.m.clone().collect();
    let pool = thread_pool()?;
    let (family, a, k, alpha) = (args.family, args.a, args.k, args.alpha);
    let expansions: Vec<ZeroExpansion> = pool.install(|| {
        ms.par_iter().map(|&m| expand_zero_gti(family, a, m, k, alpha)).collect::<Result<Vec<_>>>()
    })?;
    let rows: Vec<ZeroRow> = if args.refine {
        let cfg = QuadratureConfig::extended();
        let hint = expansions.iter().map(|e| e.theta_assembled).fold(0.0, f64::max) * a + 4.0;
        pool.install(|| {
            expansions
                .into_par_iter()
                .map_init(
                    || CiSiIntegrator::new(a, hint, &cfg),
                    |integ, e| {
                        let integ = integ.as_mut().map_err(|e| e.clone())?;
                        let r = refine_zero_with(integ, family, alpha, e.theta_assembled, &cfg)?;
                        let d = delta_family_with(integ, family, alpha, a * e.theta_assembled)?;
                        Ok(ZeroRow { expansion: e, refined: Some((r.theta_star, d.abs().log10())) })
                    },
                )
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        expansions.into_iter().map(|e| ZeroRow { expansion: e, refined: None }).collect()
    };

    let manifest = RunManifest::new("zeros", k)
        .param("family", family)
        .param("a", a)
        .param("m", format!("{}..{}", args.m.start(), args.m.end()))
        .param("alpha", alpha)
        .param("refine", args.refine)
        .stamped(reproducible);
    let mut body = manifest.header();
    body.push_str("family,a,m,leading,theta_assembled");
    if args.refine {
        body.push_str(",theta_refined,delta_log10");
    }
    body.push_str(",degenerate_flag\n");
    for row in &rows {
        let e = &row.expansion;
        let _ = write!(body, "{},{},{},{},{}", family, a, e.m, e.leading, e.theta_assembled);
        if let Some((t, d)) = row.refined {
            let _ = write!(body, ",{t},{d}");
        }
        let _ = writeln!(body, ",{}", e.degenerate_flag);
    }
    emit(&body, args.out.as_deref(), out)
}

fn base_plus_one_sq() -> Polynomial<num_rational::BigRational> {
    Polynomial::from_ints(&[1, 0, 1])
}

pub(super) fn coeffs(args: CoeffsArgs, out: &mut dyn Write) -> std::result::Result<(), CliError> {
    if args.order == 0 {
        return Err(CliError::domain("--order must be at least 1"));
    }
    let table = LGCoefficientTable::with_order(args.order)?;
    let q = match args.q {
        Some(k) => Some(QTable::with_k(k)?),
        None => None,
    };
    let base = base_plus_one_sq();
    if args.json {
        let rows: Vec<_> = (1..=args.order)
            .map(|s| {
                let e = table.e(s);
                json!({
                    "s": s,
                    "E": {
                        "rational": e.rational_part,
                        "log_coeff": e.log_coeff.to_string(),
                        "log_arg": e.log_arg,
                    },
                    "L": table.l(s),
                    "R": table.r(s),
                })
            })
            .collect();
        let mut doc = json!({ "order": args.order, "coefficients": rows });
        if let Some(q) = &q {
            doc["q"] = json!((2..=q.k_max())
                .map(|k| json!({ "k": k, "q": q.q(k).unwrap() }))
                .collect::<Vec<_>>());
        }
        return print_json(&doc, out);
    }
    let mut s = String::new();
    for k in 1..=args.order {
        let _ = writeln!(s, "E{k}(z) = {}", table.e(k));
    }
    for k in 1..=args.order {
        let _ = writeln!(s, "L{k}(theta) = {}", table.l(k).pretty("theta", &base));
    }
    for k in 1..=args.order {
        let _ = writeln!(s, "R{k}(theta) = {}", table.r(k).pretty("theta", &base));
    }
    if let Some(q) = &q {
        for k in 2..=q.k_max() {
            let _ = writeln!(s, "q{k}(x) = {}", q.q(k).unwrap().pretty("x", &base));
        }
    }
    out.write_all(s.as_bytes()).map_err(io_err)
}

pub(super) fn bounds(args: BoundsArgs, out: &mut dyn Write) -> std::result::Result<(), CliError> {
    let kind = match args.kind {
        BoundKind::Zero => PathKind::FromZero,
        BoundKind::Infinity => PathKind::FromInfinity,
    };
    let report = error_bound(args.a, Complex64::new(args.z.0, args.z.1), args.n, kind)?;
    print_json(&report, out)
}

pub(super) fn level_curves(args: LevelArgs, reproducible: bool, out: &mut dyn Write) -> std::result::Result<(), CliError> {
    let grid = Grid { nx: args.nx, ny: args.ny, ..Grid::default() };
    let curves = contour(&args.c, &grid)?;
    let levels: Vec<String> = args.c.iter().map(|c| c.to_string()).collect();
    let manifest = RunManifest::new("figure level-curves", 0)
        .param("c", levels.join(","))
        .param("grid", format!("[{},{}]x[{},{}] {}x{}", grid.x_min, grid.x_max, grid.y_min, grid.y_max, grid.nx, grid.ny))
        .stamped(reproducible);
    let mut body = manifest.header();
    body.push_str("curve_id,c,re_z,im_z\n");
    for pl in &curves {
        for p in &pl.points {
            let _ = writeln!(body, "{},{},{},{}", pl.curve_id, pl.c, p.re, p.im);
        }
    }
    emit(&body, args.out.as_deref(), out)
}

/// One row of the Δ plot: `(m, leading, a θ, Δ)`.
pub fn delta_rows(a: f64, m_max: u32, k: usize) -> Result<Vec<(u32, f64, f64, f64)>> {
    let cfg = QuadratureConfig::extended();
    let exps: Vec<ZeroExpansion> = (1..=m_max)
        .into_par_iter()
        .map(|m| expand_zero(ZeroFamily::ci(), a, m, k))
        .collect::<Result<_>>()?;
    let hint = exps.last().map_or(1.0, |e| a * e.theta_assembled + 4.0);
    exps.into_par_iter()
        .map_init(
            || CiSiIntegrator::new(a, hint, &cfg),
            |integ, e| {
                let integ = integ.as_mut().map_err(|e| e.clone())?;
                let x = a * e.theta_assembled;
                let d = delta_family_with(integ, Gti::Ci, 0.0, x)?;
                Ok((e.m, e.leading, x, d))
            },
        )
        .collect()
}

pub(super) fn delta_plot(args: DeltaArgs, reproducible: bool, out: &mut dyn Write) -> std::result::Result<(), CliError> {
    if args.m_max == 0 {
        return Err(CliError::domain("--m-max must be at least 1"));
    }
    let pool = thread_pool()?;
    let rows = pool.install(|| delta_rows(args.a, args.m_max, args.k))?;
    let manifest = RunManifest::new("figure delta-plot", args.k)
        .param("a", args.a)
        .param("m_max", args.m_max)
        .stamped(reproducible);
    let mut body = manifest.header();
    body.push_str("m,leading,theta_mK,delta,log10_abs_delta\n");
    for (m, lead, x, d) in rows {
        let _ = writeln!(body, "{m},{lead},{x},{d},{}", d.abs().log10());
    }
    emit(&body, args.out.as_deref(), out)
}

#[derive(Serialize)]
struct OracleValue {
    family: Gti,
    a: f64,
    alpha: f64,
    theta: f64,
    x: f64,
    value: f64,
    mode: PrecisionMode,
}

fn oracle_point(family: Gti, a: f64, theta: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<OracleValue> {
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument(format!("theta must be positive, got {theta}")));
    }
    let x = a * theta;
    Ok(OracleValue {
        family,
        a,
        alpha,
        theta,
        x,
        value: oracle_gti(a, x, family, alpha, cfg)?,
        mode: cfg.precision_mode,
    })
}

pub(super) fn oracle(args: OracleArgs, reproducible: bool, out: &mut dyn Write) -> std::result::Result<(), CliError> {
    let cfg = QuadratureConfig::for_mode(mode(args.extended));
    let Some(grid) = &args.grid else {
        let (family, a) = match (args.family, args.a) {
            (Some(f), Some(a)) => (f, a),
            _ => return Err(CliError::domain("--family and --a are required without --grid")),
        };
        let theta = args.theta.ok_or_else(|| CliError::domain("--theta is required without --grid"))?;
        let v = oracle_point(family, a, theta, args.alpha, &cfg)?;
        return print_json(&v, out);
    };
    let text = std::fs::read_to_string(grid)
        .map_err(|e| CliError::domain(format!("cannot read {}: {e}", grid.display())))?;
    let points = parse_grid(&text)?;
    let pool = thread_pool()?;
    let values: Vec<OracleValue> = pool.install(|| {
        points
            .par_iter()
            .map(|&(f, a, t, al)| oracle_point(f, a, t, al, &cfg))
            .collect::<Result<_>>()
    })?;
    let manifest = RunManifest::new("oracle", 0)
        .param("grid", grid.display())
        .param("mode", cfg.precision_mode)
        .stamped(reproducible);
    let mut body = manifest.header();
    body.push_str("family,a,alpha,theta,value\n");
    for v in &values {
        let _ = writeln!(body, "{},{},{},{},{}", v.family, v.a, v.alpha, v.theta, v.value);
    }
    emit(&body, args.out.as_deref(), out)
}

/// Rows `family,a,theta[,alpha]` with a header line; `#` lines are skipped.
fn parse_grid(text: &str) -> std::result::Result<Vec<(Gti, f64, f64, f64)>, CliError> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| CliError::domain("grid file is empty"))?
        .split(',')
        .map(str::trim)
        .collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (fi, ai, ti) = match (col("family"), col("a"), col("theta")) {
        (Some(f), Some(a), Some(t)) => (f, a, t),
        _ => return Err(CliError::domain("grid header needs family,a,theta")),
    };
    let al = col("alpha");
    lines
        .enumerate()
        .map(|(i, line)| {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            let get = |j: usize| cells.get(j).copied().ok_or_else(|| CliError::domain(format!("grid row {} is short", i + 1)));
            let num = |j: usize| get(j).and_then(|c| parse_decimal(c).map_err(CliError::domain));
            let family = parse_family(get(fi)?).map_err(CliError::domain)?;
            let alpha = match al {
                Some(j) => num(j)?,
                None => 0.0,
            };
            Ok((family, num(ai)?, num(ti)?, alpha))
        })
        .collect()
}
