use std::fs::File;
use std::io::{self, Write};

use biprabhakar::kinetic::{self, KineticProblem};
use biprabhakar::prabhakar::{self, gamma_bicomplex};
use biprabhakar::quadrature::QuadratureSpec;
use biprabhakar::transforms::{self, ContourSpec, Grid, GridFunction};
use biprabhakar::{verify, Bicomplex, Error, Hyperbolic, PrabhakarParams, Result, SeriesPolicy};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::{Cli, Command, Format, ParamArgs, TableKind};

/// Exit status for a library error: 2 for invalid input, 3 for numerical failure.
pub fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::NoConvergence(_) | Error::QuadratureFailure { .. } | Error::SeriesDivergence(_) => 3,
        _ => 2,
    }
}

enum Output {
    Json(Value),
    Csv(String),
}

pub fn run(cli: &Cli) -> Result<u8> {
    let policy = policy(cli)?;
    let quad = quad_spec(cli);
    let format = cli.format.unwrap_or(match cli.command {
        Command::Table { .. } => Format::Csv,
        _ => Format::Json,
    });
    let mut code = 0;
    let out = match &cli.command {
        Command::Eval { params, z } => {
            let p = params_of(params)?;
            let v = prabhakar::prabhakar(&p, z, &policy)?;
            value_output(json!({ "params": p, "z": z, "value": v }), &[("value", v)], format)
        }
        Command::Gamma { z } => {
            let v = gamma_bicomplex(z)?;
            value_output(json!({ "z": z, "value": v }), &[("value", v)], format)
        }
        Command::Laplace { params, lambda, z, quadrature } => {
            let p = params_of(params)?;
            let closed = transforms::laplace_closed(&p, lambda, z)?;
            let mut rows = vec![("closed", closed)];
            if *quadrature {
                rows.push(("quadrature", transforms::laplace_quadrature(&p, lambda, z, &quad, &policy)?));
            }
            transform_output(p, *lambda, *z, &rows, format)
        }
        Command::Mellin { params, lambda, z, quadrature } => {
            let p = params_of(params)?;
            let closed = transforms::mellin_closed(&p, lambda, z)?;
            let mut rows = vec![("closed", closed)];
            if *quadrature {
                rows.push(("quadrature", transforms::mellin_quadrature(&p, lambda, z, &quad, &policy)?));
            }
            transform_output(p, *lambda, *z, &rows, format)
        }
        Command::Barnes { params, z, c } => {
            let p = params_of(params)?;
            let contour = ContourSpec { c: *c, ..ContourSpec::default() };
            let mb = transforms::mellin_barnes_eval(&p, z, &contour, &policy)?;
            let series = prabhakar::prabhakar(&p, z, &policy)?;
            let diff = (mb - series).max_norm();
            value_output(
                json!({ "params": p, "z": z, "barnes": mb, "series": series, "difference": diff }),
                &[("barnes", mb), ("series", series)],
                format,
            )
        }
        Command::Kinetic { .. } => kinetic_output(cli, &policy, format)?,
        Command::Verify { suite, draws, seed } => {
            let reports = verify::run(suite, *draws, *seed)?;
            if reports.iter().any(|r| !r.passed) {
                code = 1;
            }
            match format {
                Format::Json => Output::Json(json!({
                    "passed": code == 0,
                    "reports": reports,
                })),
                Format::Csv => {
                    let mut s = String::from("suite,seed,draws,checks,failed,worst_ratio,passed\n");
                    for r in &reports {
                        s += &format!(
                            "{},{},{},{},{},{:e},{}\n",
                            r.suite, r.seed, r.draws, r.checks, r.failed, r.worst_ratio, r.passed
                        );
                    }
                    Output::Csv(s)
                }
            }
        }
        Command::Table { params, lambda, t_min, t_max, steps, kind } => {
            let p = params_of(params)?;
            let f = table(&p, lambda, *t_min, *t_max, *steps, *kind, &policy)?;
            grid_output(&f, json!({ "params": p, "lambda": lambda, "kind": format!("{kind:?}").to_lowercase() }), format)?
        }
    };
    emit(out, cli)?;
    Ok(code)
}

fn policy(cli: &Cli) -> Result<SeriesPolicy> {
    let mut p = SeriesPolicy::default();
    if let Some(tol) = cli.tol {
        p.rel_tol = tol;
    }
    if let Some(m) = cli.max_terms {
        p.max_terms = m;
    }
    p.validate()?;
    Ok(p)
}

fn quad_spec(cli: &Cli) -> QuadratureSpec {
    let mut q = QuadratureSpec::default();
    if let Some(tol) = cli.tol {
        q.rel_tol = tol;
        q.abs_tol = tol;
    }
    q
}

fn params_of(a: &ParamArgs) -> Result<PrabhakarParams> {
    PrabhakarParams::new(a.sigma, a.tau, a.delta)
}

fn csv_rows(rows: &[(&str, Bicomplex)]) -> String {
    let mut s = String::from("name,x0,x1,x2,x3\n");
    for (name, v) in rows {
        let x = v.reals();
        s += &format!("{name},{:.16e},{:.16e},{:.16e},{:.16e}\n", x[0], x[1], x[2], x[3]);
    }
    s
}

fn value_output(doc: Value, rows: &[(&str, Bicomplex)], format: Format) -> Output {
    match format {
        Format::Json => Output::Json(doc),
        Format::Csv => Output::Csv(csv_rows(rows)),
    }
}

fn transform_output(p: PrabhakarParams, lambda: Bicomplex, z: Bicomplex, rows: &[(&str, Bicomplex)], format: Format) -> Output {
    let mut doc = json!({ "params": p, "lambda": lambda, "z": z });
    for (name, v) in rows {
        doc[*name] = json!(v);
    }
    if let [(_, a), (_, b)] = rows {
        doc["difference"] = json!((*a - *b).max_norm());
    }
    value_output(doc, rows, format)
}

fn grid_output(f: &GridFunction, meta: Value, format: Format) -> Result<Output> {
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            f.write_csv(&mut buf)?;
            Output::Csv(String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))?)
        }
        Format::Json => {
            let rows: Vec<Value> = f
                .grid
                .times()
                .zip(&f.values)
                .map(|(t, v)| json!({ "t": t, "value": v }))
                .collect();
            let mut doc = meta;
            doc["rows"] = Value::Array(rows);
            Output::Json(doc)
        }
    })
}

fn emit(out: Output, cli: &Cli) -> Result<()> {
    let text = match out {
        Output::Json(v) => serde_json::to_string_pretty(&v)? + "\n",
        Output::Csv(s) => s,
    };
    match &cli.out {
        Some(path) => File::create(path)?.write_all(text.as_bytes())?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// `t^w` for `t >= 0` and `Re w > 0`, with `0^w = 0`.
fn real_pow(t: f64, w: Complex64) -> Complex64 {
    if t == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        (w * t.ln()).exp()
    }
}

fn table(
    p: &PrabhakarParams,
    lambda: &Bicomplex,
    t_min: f64,
    t_max: f64,
    steps: usize,
    kind: TableKind,
    policy: &SeriesPolicy,
) -> Result<GridFunction> {
    if steps < 2 {
        return Err(Error::Grid(format!("steps >= 2 violated: steps = {steps}")));
    }
    if !(t_min >= 0.0 && t_max > t_min && t_max.is_finite()) {
        return Err(Error::Grid(format!("0 <= t_min < t_max violated: [{t_min}, {t_max}]")));
    }
    let h = (t_max - t_min) / (steps - 1) as f64;
    let times: Vec<f64> = (0..steps)
        .map(|k| if k + 1 == steps { t_max } else { t_min + h * k as f64 })
        .collect();
    let grid = Grid::from_times(&times)?;
    let eval = p.evaluator()?;
    let (sigma, tau) = (p.sigma(), p.tau());
    GridFunction::try_from_fn(grid, |t| {
        Bicomplex::try_build(|r| {
            let arg = lambda.component(r) * real_pow(t, sigma.component(r));
            let e = eval.component(r).value(arg, policy)?;
            match kind {
                TableKind::Plain => Ok(e),
                TableKind::Kernel => {
                    let w = tau.component(r) - 1.0;
                    if t > 0.0 || w.re > 0.0 {
                        Ok(real_pow(t, w) * e)
                    } else if w == Complex64::new(0.0, 0.0) {
                        Ok(e)
                    } else {
                        Err(Error::Domain(format!(
                            "t^(tau-1) is unbounded at t = 0 for Re(tau_{r}) < 1: tau = {tau}"
                        )))
                    }
                }
            }
        })
    })
}

fn kinetic_output(cli: &Cli, policy: &SeriesPolicy, format: Format) -> Result<Output> {
    let Command::Kinetic { problem, sigma, tau, delta, a, nu, n, n0, t_end, h, terms } = &cli.command else {
        unreachable!("kinetic_output is only called for the kinetic subcommand")
    };
    let need = |v: &Option<Bicomplex>, name: &str| {
        v.ok_or_else(|| Error::Domain(format!("--{name} is required without --problem")))
    };
    let general = |prob: &KineticProblem, mode: &str| -> Result<Output> {
        let sol = kinetic::solve_general(prob, *terms, policy)?;
        let residual = kinetic::volterra_residual(&sol.values, prob)?;
        let meta = json!({
            "mode": mode,
            "terms_used": sol.terms_used,
            "ratio": sol.ratio,
            "tail_bound": sol.achieved_tail_bound,
            "volterra_residual": residual,
        });
        grid_output(&sol.values, meta, format)
    };
    if let Some(path) = problem {
        let prob = KineticProblem::from_json_file(path)?;
        return general(&prob, "general");
    }
    let p = PrabhakarParams::new(need(sigma, "sigma")?, need(tau, "tau")?, need(delta, "delta")?)?;
    let grid = Grid::new(*t_end, *h)?;
    if !nu.is_empty() {
        let one = Hyperbolic::new(1.0, 0.0);
        let f = kinetic::prabhakar_source(&p, &one, grid)?;
        let prob = KineticProblem::new(*n0, a.clone(), nu.clone(), f)?;
        return general(&prob, "general");
    }
    let n = n.ok_or_else(|| Error::Domain("--n is required for the special case".into()))?;
    let [scale] = a.as_slice() else {
        return Err(Error::Domain(format!("the special case takes exactly one --a, got {}", a.len())));
    };
    let sol = kinetic::solve_special(*n0, &p, scale, n, grid, policy)?;
    let prob = KineticProblem::special_case(*n0, &p, *scale, n, grid)?;
    let residual = kinetic::volterra_residual(&sol, &prob)?;
    grid_output(&sol, json!({ "mode": "special", "n": n, "volterra_residual": residual }), format)
}
