//! Fractional kinetic equation
//!
//! ```text
//! N(t) - N0 f(t) = -Σ_i a_i RL^{ν_i} N(t)
//! ```
//!
//! with hyperbolic coefficients `a_i` and bicomplex orders `ν_i`. Every
//! quantity splits into two independent idempotent components, and each
//! component is a scalar equation with real positive coefficients.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bicomplex::{Bicomplex, Hyperbolic};
use crate::error::{Error, Result};
use crate::prabhakar::PrabhakarParams;
use crate::quadrature::QuadratureSpec;
use crate::special::{self, ComplexPrabhakar, SeriesPolicy};
use crate::transforms::{integrate_checked, rl_fractional_integral, Grid, GridFunction};

/// Default cap on the number of series terms in `l`.
pub const DEFAULT_TERM_BUDGET: usize = 200;
/// Relative size of the dropped terms at which the general solver stops.
pub const TAIL_TARGET: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct KineticProblem {
    pub n0: f64,
    pub a: Vec<Hyperbolic>,
    pub nu: Vec<Bicomplex>,
    pub f: GridFunction,
}

impl KineticProblem {
    pub fn new(n0: f64, a: Vec<Hyperbolic>, nu: Vec<Bicomplex>, f: GridFunction) -> Result<Self> {
        if !(n0 > 0.0 && n0.is_finite()) {
            return Err(Error::Domain(format!("N0 > 0 violated: N0 = {n0}")));
        }
        if a.is_empty() {
            return Err(Error::Domain("at least one coefficient is needed".into()));
        }
        if a.len() != nu.len() {
            return Err(Error::Domain(format!("{} coefficients but {} orders", a.len(), nu.len())));
        }
        for (i, ai) in a.iter().enumerate() {
            if !(ai.is_positive() && ai.p1().is_finite() && ai.p2().is_finite()) {
                return Err(Error::Domain(format!(
                    "a_{} = {ai}: a_i1 > |a_i4| violated",
                    i + 1
                )));
            }
        }
        for (i, v) in nu.iter().enumerate() {
            if !v.param_domain_ok() {
                return Err(Error::Domain(format!("|Im_j(nu_{})| < Re(nu_{}) violated: nu = {v}", i + 1, i + 1)));
            }
        }
        if let Some(k) = f.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("source is not finite at t = {}", f.grid.t(k))));
        }
        Ok(Self { n0, a, nu, f })
    }

    /// The binomial problem `a_r = C(n, r) a^{rσ}`, `ν_r = rσ` with source
    /// `t^{τ-1} E^δ_{σ,τ}(-(a t)^σ)`, whose solution is [`solve_special`].
    /// Needs real idempotent components of `σ` so that `a^{rσ}` is hyperbolic.
    pub fn special_case(n0: f64, params: &PrabhakarParams, a: Hyperbolic, n: usize, grid: Grid) -> Result<Self> {
        check_special(params, &a, n)?;
        let sigma = params.sigma();
        let (s1, s2) = (sigma.z1(), sigma.z2());
        if s1.im != 0.0 || s2.im != 0.0 {
            return Err(Error::Domain(format!(
                "the binomial problem needs real idempotent components of sigma, got {sigma}"
            )));
        }
        let f = prabhakar_source(params, &a, grid)?;
        let mut coeffs = Vec::with_capacity(n);
        let mut orders = Vec::with_capacity(n);
        for r in 1..=n {
            let binom = binomial(n, r);
            let rf = r as f64;
            coeffs.push(Hyperbolic::from_idempotent(
                binom * a.p1().powf(rf * s1.re),
                binom * a.p2().powf(rf * s2.re),
            ));
            orders.push(sigma * Bicomplex::from_real(rf));
        }
        Self::new(n0, coeffs, orders, f)
    }

    pub fn grid(&self) -> Grid {
        self.f.grid
    }

    /// Loads a problem file; a CSV source path is resolved against the
    /// file's directory.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_json_str(&text, base)
    }

    pub fn from_json_str(text: &str, base: &Path) -> Result<Self> {
        let raw: ProblemFile = serde_json::from_str(text)?;
        raw.into_problem(base)
    }
}

/// Source term in a problem file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceSpec {
    /// `t^{τ-1} E^δ_{σ,τ}(-(a t)^σ)`; `a` is `[u1, u4]` and defaults to 1.
    Prabhakar {
        params: PrabhakarParams,
        #[serde(default)]
        a: Option<[f64; 2]>,
    },
    Csv { path: PathBuf },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_end: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "N0")]
    pub n0: f64,
    pub a: Vec<[f64; 2]>,
    pub nu: Vec<Bicomplex>,
    pub f: SourceSpec,
    pub grid: Option<GridSpec>,
}

impl ProblemFile {
    pub fn into_problem(self, base: &Path) -> Result<KineticProblem> {
        let a = self.a.iter().map(|&[u, v]| Hyperbolic::new(u, v)).collect();
        let f = match self.f {
            SourceSpec::Prabhakar { params, a: scale } => {
                let g = self.grid.ok_or_else(|| Error::Grid("a prabhakar source needs \"grid\"".into()))?;
                let grid = Grid::new(g.t_end, g.h)?;
                let [u, v] = scale.unwrap_or([1.0, 0.0]);
                let scale = Hyperbolic::new(u, v);
                if !scale.is_positive() {
                    return Err(Error::Domain(format!("source scale a = {scale}: u1 > |u4| violated")));
                }
                prabhakar_source(&params, &scale, grid)?
            }
            SourceSpec::Csv { path } => {
                let f = GridFunction::load_csv(&base.join(path))?;
                if let Some(g) = self.grid {
                    let want = Grid::new(g.t_end, g.h)?;
                    if want.len() != f.grid.len() || (want.h() - f.grid.h()).abs() > 1e-9 * want.h() {
                        return Err(Error::Grid("CSV source does not match \"grid\"".into()));
                    }
                }
                f
            }
        };
        KineticProblem::new(self.n0, a, self.nu, f)
    }
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_special(params: &PrabhakarParams, a: &Hyperbolic, n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain("n >= 1 violated".into()));
    }
    if !a.is_positive() {
        return Err(Error::Domain(format!("a = {a}: u1 > |u4| violated")));
    }
    if !params.sigma().param_domain_ok() || !params.tau().param_domain_ok() {
        return Err(Error::Domain("sigma and tau must satisfy |Im_j| < Re".into()));
    }
    Ok(())
}

/// `t^{τ-1} E^δ_{σ,τ}(-(a_r t)^σ)` on one component; `t = 0` by its limit.
fn scaled_kernel(f: &ComplexPrabhakar, a: f64, t: f64, policy: &SeriesPolicy) -> Result<Complex64> {
    let tau = f.tau();
    if t == 0.0 {
        return if tau.re > 1.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else if tau == Complex64::new(1.0, 0.0) {
            Ok(f.term(0, Complex64::new(0.0, 0.0)))
        } else {
            Err(Error::Domain(format!("t^(tau - 1) is not finite at t = 0 for tau = {tau}")))
        };
    }
    let lt = t.ln();
    let arg = -((a.ln() + lt) * f.sigma()).exp();
    let e = f.eval(arg, policy)?;
    Ok(((tau - 1.0) * lt).exp() * e.value)
}

/// The source `t^{τ-1} E^δ_{σ,τ}(-(a t)^σ)` on the grid.
pub fn prabhakar_source(params: &PrabhakarParams, a: &Hyperbolic, grid: Grid) -> Result<GridFunction> {
    let eval = params.evaluator()?;
    let policy = SeriesPolicy::default();
    GridFunction::try_from_fn(grid, |t| {
        Bicomplex::try_build(|r| scaled_kernel(eval.component(r), a.component(r), t, &policy))
    })
}

/// `N0 t^{τ-1} E^{δ+n}_{σ,τ}(-(a t)^σ)` on the grid. The node `t = 0` is
/// the limit: 0 when `Re τ_r > 1` and `N0 / Γ(τ_r)` when `τ_r = 1`; other
/// values of `τ_r` make it infinite and are rejected.
pub fn solve_special(
    n0: f64,
    params: &PrabhakarParams,
    a: &Hyperbolic,
    n: usize,
    grid: Grid,
    policy: &SeriesPolicy,
) -> Result<GridFunction> {
    check_special(params, a, n)?;
    let shifted = PrabhakarParams::new(
        params.sigma(),
        params.tau(),
        params.delta() + Bicomplex::from_real(n as f64),
    )?;
    let eval = shifted.evaluator()?;
    GridFunction::try_from_fn(grid, |t| {
        let v = Bicomplex::try_build(|r| scaled_kernel(eval.component(r), a.component(r), t, policy))?;
        Ok(v * Bicomplex::from_real(n0))
    })
}

/// Largest idempotent-component magnitude of
/// `N - N0 f + Σ_i a_i RL^{ν_i} N` over the grid.
pub fn volterra_residual(n: &GridFunction, problem: &KineticProblem) -> Result<f64> {
    if n.grid != problem.f.grid {
        return Err(Error::Grid("solution and source grids differ".into()));
    }
    let mut res = n.try_sub(&problem.f.scale(Bicomplex::from_real(problem.n0)))?;
    for (a, nu) in problem.a.iter().zip(&problem.nu) {
        let rl = rl_fractional_integral(n, nu)?;
        res = res.try_add(&rl.scale(a.to_bicomplex()))?;
    }
    Ok(res
        .values
        .iter()
        .map(|v| v.z1().norm().max(v.z2().norm()))
        .fold(0.0, f64::max))
}

/// Exponent `c` of the convolution kernel `u^{c-1} E^{l+1}_{ν_1,c}(-a_1 u^{ν_1})`
/// attached to a multi-index `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelExponent {
    /// `c = Σ_μ s_μ ν_{μ+1}`, as obtained by inverting the Laplace-domain expansion.
    #[default]
    Derived,
    /// `c = Σ_μ ν_{μ+1}` for every `s`.
    Printed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSolution {
    /// Largest `l` allowed.
    pub term_budget: usize,
    /// Largest `l` actually summed, over both components.
    pub terms_used: usize,
    /// Geometric ratio bounding successive terms, over both components.
    pub ratio: f64,
    /// Bound on the sup norm of the dropped terms on `[0, T_end]`.
    pub achieved_tail_bound: f64,
    #[serde(skip)]
    pub values: GridFunction,
}

struct ComponentRun {
    values: Vec<Complex64>,
    terms_used: usize,
    ratio: f64,
    tail: f64,
}

/// Compositions of `l` into `parts` non-negative integers, in lexicographic order.
fn compositions(l: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if l == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![l]];
    }
    let mut out = Vec::new();
    for first in 0..=l {
        for mut rest in compositions(l - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multinomial(s: &[usize]) -> f64 {
    let mut total = 0usize;
    let mut acc = 1.0;
    for &k in s {
        for i in 1..=k {
            total += 1;
            acc *= total as f64 / i as f64;
        }
    }
    acc
}

/// `‖(1 + a I^ν)^{-1}‖ ≤ 1 + a ∫_0^T |u^{ν-1} E_{ν,ν}(-a u^ν)| du` on `C[0, T]`.
fn resolvent_norm(a: f64, nu: Complex64, t_end: f64) -> Result<f64> {
    let f = ComplexPrabhakar::new(nu, nu, Complex64::new(1.0, 0.0))?;
    let policy = SeriesPolicy::default();
    let radius = special::ACCURACY_RADIUS.max(1.01 * a * t_end.powf(nu.re));
    let integrand = |u: f64| {
        if u <= 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let lu = u.ln();
        let w = ((nu - 1.0) * lu).exp();
        let e = f.eval_within(-a * (nu * lu).exp(), &policy, radius)?;
        Ok((Complex64::new((w * e.value).norm(), 0.0), w.norm() * e.abs_error))
    };
    let spec = QuadratureSpec {
        abs_tol: 1e-10,
        rel_tol: 1e-8,
        ..Default::default()
    };
    let p = (nu.re < 1.0).then(|| 2.0 / nu.re);
    let integral = integrate_checked(integrand, 0.0, t_end, p, &spec)?;
    Ok((1.0 + a * integral.re) * (1.0 + 1e-6))
}

/// `Σ_{j≥2} |a_j| ‖I^{ν_j}‖` with `‖I^ν‖ ≤ T^{Re ν} / (Re ν |Γ(ν)|)`.
fn secondary_norm(a: &[f64], nu: &[Complex64], t_end: f64) -> f64 {
    a.iter()
        .zip(nu)
        .skip(1)
        .map(|(&aj, &vj)| aj * t_end.powf(vj.re) * special::recip_gamma(vj).norm() / vj.re)
        .sum()
}

/// `f ⋆ K` at every node, for piecewise-linear `f`, given the first and
/// second antiderivatives `A_m = K1(m h)`, `B_m = K2(m h)` of the kernel.
fn convolve(f: &[Complex64], a: &[Complex64], b: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    // weights of f_j and f_{j+1} on the interval m = n - j
    let mut p = vec![zero; n + 1];
    let mut q = vec![zero; n + 2];
    for m in 1..=n {
        let db = (b[m] - b[m - 1]) / h;
        p[m] = a[m] - db;
        q[m] = db - a[m - 1];
    }
    let mut out = vec![zero; n + 1];
    for k in 1..=n {
        let mut acc = f[0] * p[k] + f[k] * q[1];
        for i in 1..k {
            acc += f[i] * (p[k - i] + q[k - i + 1]);
        }
        out[k] = acc;
    }
    out
}

fn solve_component(
    n0: f64,
    a: &[f64],
    nu: &[Complex64],
    f: &[Complex64],
    grid: Grid,
    term_budget: usize,
    form: KernelExponent,
    policy: &SeriesPolicy,
) -> Result<ComponentRun> {
    let t_end = grid.t_end();
    let (a1, nu1) = (a[0], nu[0]);
    let f_norm = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let r_norm = resolvent_norm(a1, nu1, t_end)?;
    let ratio = r_norm * secondary_norm(a, nu, t_end);
    if ratio >= 1.0 {
        return Err(Error::SeriesDivergence(format!(
            "geometric ratio {ratio:.4} >= 1 on [0, {t_end}]"
        )));
    }
    let tail = |l: usize| n0 * f_norm * r_norm * ratio.powi(l as i32 + 1) / (1.0 - ratio);
    let target = TAIL_TARGET * n0 * f_norm;
    let mut last = 0;
    while last < term_budget && tail(last) > target {
        last += 1;
    }

    // merge multi-indices that share the kernel (l, c)
    let mut kernels: Vec<(usize, Complex64, f64)> = Vec::new();
    let printed: Complex64 = nu.iter().skip(1).sum();
    for l in 0..=last {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        for s in compositions(l, a.len() - 1) {
            let mut coeff = sign * multinomial(&s);
            let mut c = Complex64::new(0.0, 0.0);
            for (mu, &k) in s.iter().enumerate() {
                coeff *= a[mu + 1].powi(k as i32);
                c += nu[mu + 1] * k as f64;
            }
            if form == KernelExponent::Printed {
                c = printed;
            }
            match kernels.iter_mut().find(|(kl, kc, _)| *kl == l && *kc == c) {
                Some(entry) => entry.2 += coeff,
                None => kernels.push((l, c, coeff)),
            }
        }
    }

    let n = grid.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    let mut big_a = vec![zero; n + 1];
    let mut big_b = vec![zero; n + 1];
    let radius = special::ACCURACY_RADIUS.max(1.01 * a1 * t_end.powf(nu1.re));
    // K1(0+) = 1 when c = 0: the kernel carries a point mass at u = 0
    let mut jump = 0.0;
    for &(l, c, coeff) in &kernels {
        if c == Complex64::new(0.0, 0.0) {
            jump += coeff;
        }
        let delta = Complex64::new((l + 1) as f64, 0.0);
        let e1 = ComplexPrabhakar::new(nu1, c + 1.0, delta)?;
        let e2 = ComplexPrabhakar::new(nu1, c + 2.0, delta)?;
        for m in 1..=n {
            let lx = grid.t(m).ln();
            let z = -a1 * (nu1 * lx).exp();
            let k1 = (c * lx).exp() * e1.eval_within(z, policy, radius)?.value;
            let k2 = ((c + 1.0) * lx).exp() * e2.eval_within(z, policy, radius)?.value;
            big_a[m] += coeff * k1;
            big_b[m] += coeff * k2;
        }
    }
    let mut conv = convolve(f, &big_a, &big_b, grid.h());
    conv[0] = f[0] * jump;
    let values = conv.into_iter().map(|v| v * n0).collect();
    Ok(ComponentRun {
        values,
        terms_used: last,
        ratio,
        tail: tail(last),
    })
}

/// Particular solution as the series in `l` of Prabhakar-kernel
/// convolutions, summed until the geometric tail bound drops below
/// `TAIL_TARGET` relative to `N0 ‖f‖` or `term_budget` is reached.
pub fn solve_general(problem: &KineticProblem, term_budget: usize, policy: &SeriesPolicy) -> Result<SeriesSolution> {
    solve_general_with(problem, term_budget, policy, KernelExponent::Derived)
}

pub fn solve_general_with(
    problem: &KineticProblem,
    term_budget: usize,
    policy: &SeriesPolicy,
    form: KernelExponent,
) -> Result<SeriesSolution> {
    policy.validate()?;
    let grid = problem.grid();
    let mut runs = Vec::with_capacity(2);
    for r in [1u8, 2] {
        let a: Vec<f64> = problem.a.iter().map(|ai| ai.component(r)).collect();
        let nu: Vec<Complex64> = problem.nu.iter().map(|v| v.component(r)).collect();
        let run = solve_component(problem.n0, &a, &nu, &problem.f.component(r), grid, term_budget, form, policy)
            .map_err(|e| e.in_component(r))?;
        runs.push(run);
    }
    let values = GridFunction::from_components(grid, &runs[0].values, &runs[1].values)?;
    Ok(SeriesSolution {
        term_budget,
        terms_used: runs[0].terms_used.max(runs[1].terms_used),
        ratio: runs[0].ratio.max(runs[1].ratio),
        achieved_tail_bound: runs[0].tail.max(runs[1].tail),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: f64) -> Bicomplex {
        Bicomplex::from_real(x)
    }

    #[test]
    fn special_examples() {
        let pol = SeriesPolicy::default();
        let grid = Grid::new(2.0, 0.01).unwrap();
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let one = Hyperbolic::ONE;
        let n1 = solve_special(3.0, &p, &one, 1, grid, &pol).unwrap();
        let n2 = solve_special(3.0, &p, &one, 2, grid, &pol).unwrap();
        for (k, t) in grid.times().enumerate() {
            let want1 = 3.0 * (1.0 - t) * (-t).exp();
            let want2 = 3.0 * (1.0 - 2.0 * t + 0.5 * t * t) * (-t).exp();
            assert!((n1.values[k].z1().re - want1).abs() < 1e-12);
            assert!((n2.values[k].z2().re - want2).abs() < 1e-12);
        }
        assert_eq!(n1.values[0], real(3.0));
    }

    #[test]
    fn special_origin_rule() {
        let pol = SeriesPolicy::default();
        let grid = Grid::new(1.0, 0.1).unwrap();
        let late = PrabhakarParams::real(1.0, 1.5, 1.0).unwrap();
        let v = solve_special(1.0, &late, &Hyperbolic::ONE, 1, grid, &pol).unwrap();
        assert_eq!(v.values[0], Bicomplex::ZERO);
        let early = PrabhakarParams::real(1.0, 0.5, 1.0).unwrap();
        assert!(solve_special(1.0, &early, &Hyperbolic::ONE, 1, grid, &pol).is_err());
        let bad = Hyperbolic::new(1.0, 1.5);
        assert!(matches!(
            solve_special(1.0, &late, &bad, 1, grid, &pol),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn special_solution_has_small_residual() {
        let pol = SeriesPolicy::default();
        let grid = Grid::new(2.0, 1e-3).unwrap();
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let prob = KineticProblem::special_case(1.0, &p, Hyperbolic::ONE, 1, grid).unwrap();
        let n = solve_special(1.0, &p, &Hyperbolic::ONE, 1, grid, &pol).unwrap();
        assert!(volterra_residual(&n, &prob).unwrap() < 1e-6);
        let zero = KineticProblem::new(1.0, vec![Hyperbolic::ONE], vec![real(1.0)], GridFunction::zeros(grid)).unwrap();
        assert_eq!(volterra_residual(&GridFunction::zeros(grid), &zero).unwrap(), 0.0);
        let shifted = n.try_add(&GridFunction::from_fn(grid, |_| real(1e-3))).unwrap();
        assert!(volterra_residual(&shifted, &prob).unwrap() > 1e-3);
    }

    #[test]
    fn general_single_term_matches_special() {
        let pol = SeriesPolicy::default();
        let grid = Grid::new(1.0, 1e-3).unwrap();
        // τ = 1 keeps the source smooth enough for O(h^2) product integration
        let p = PrabhakarParams::real(0.8, 1.0, 0.9).unwrap();
        let a = Hyperbolic::new(0.9, 0.3);
        let prob = KineticProblem::special_case(2.0, &p, a, 1, grid).unwrap();
        let sol = solve_general(&prob, DEFAULT_TERM_BUDGET, &pol).unwrap();
        let want = solve_special(2.0, &p, &a, 1, grid, &pol).unwrap();
        let diff = sol.values.try_sub(&want).unwrap().max_norm();
        assert!(diff < 1e-5, "{diff}");
        assert_eq!(sol.terms_used, 0);
    }

    #[test]
    fn general_binomial_matches_special() {
        let pol = SeriesPolicy::default();
        let grid = Grid::new(1.0, 1e-3).unwrap();
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let a = Hyperbolic::from_idempotent(0.5, 0.4);
        let prob = KineticProblem::special_case(1.0, &p, a, 2, grid).unwrap();
        let sol = solve_general(&prob, DEFAULT_TERM_BUDGET, &pol).unwrap();
        assert!(sol.ratio < 1.0 && sol.achieved_tail_bound < 1e-12);
        let want = solve_special(1.0, &p, &a, 2, grid, &pol).unwrap();
        let diff = sol.values.try_sub(&want).unwrap().max_norm();
        assert!(diff < 1e-5, "{diff}");
    }

    #[test]
    fn homogeneous_and_divergent() {
        let pol = SeriesPolicy::default();
        let grid = Grid::new(2.0, 0.01).unwrap();
        let a = vec![Hyperbolic::ONE, Hyperbolic::ONE];
        let nu = vec![real(1.0), real(2.0)];
        let small = vec![Hyperbolic::ONE, Hyperbolic::new(0.3, 0.0)];
        let zero = KineticProblem::new(1.0, small, vec![real(1.0), real(0.5)], GridFunction::zeros(Grid::new(0.5, 0.01).unwrap())).unwrap();
        let sol = solve_general(&zero, 50, &pol).unwrap();
        assert_eq!(sol.values.max_norm(), 0.0);
        let big = KineticProblem::new(1.0, a, nu, GridFunction::from_fn(grid, |_| real(1.0))).unwrap();
        let err = solve_general(&big, 50, &pol).unwrap_err();
        assert!(matches!(err.root(), Error::SeriesDivergence(_)));
    }

    #[test]
    fn components_are_independent() {
        let pol = SeriesPolicy::default();
        let grid = Grid::new(0.5, 0.005).unwrap();
        let f = GridFunction::from_fn(grid, |t| Bicomplex::new(1.0 + t, 0.3 * t, -0.2, t * t));
        let nu = vec![real(0.7), Bicomplex::from_idempotent(Complex64::new(1.1, 0.2), Complex64::new(0.9, -0.1))];
        let mixed = KineticProblem::new(1.5, vec![Hyperbolic::new(1.0, 0.4), Hyperbolic::new(0.5, -0.2)], nu.clone(), f.clone()).unwrap();
        let first = KineticProblem::new(
            1.5,
            vec![Hyperbolic::from_idempotent(1.4, 1.4), Hyperbolic::from_idempotent(0.3, 0.3)],
            nu,
            f,
        )
        .unwrap();
        let m = solve_general(&mixed, 100, &pol).unwrap();
        let s = solve_general(&first, 100, &pol).unwrap();
        assert_eq!(m.values.component(1), s.values.component(1));
    }

    #[test]
    fn problem_file_roundtrip() {
        let text = r#"{"N0": 2.0, "a": [[1.0, 0.25]], "nu": ["1,0,0,0"],
            "f": {"kind": "prabhakar", "params": {"sigma": "1,0,0,0", "tau": "1,0,0,0", "delta": "1,0,0,0"}},
            "grid": {"t_end": 1.0, "h": 0.1}}"#;
        let prob = KineticProblem::from_json_str(text, Path::new(".")).unwrap();
        assert_eq!(prob.a[0], Hyperbolic::new(1.0, 0.25));
        assert_eq!(prob.grid().len(), 11);
        assert!((prob.f.values[10].z1().re - (-1.0f64).exp()).abs() < 1e-14);
        let bad = text.replace("0.25", "1.5");
        assert!(KineticProblem::from_json_str(&bad, Path::new(".")).is_err());
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert_eq!(multinomial(&[2, 1]), 3.0);
    }
}
