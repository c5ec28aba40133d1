//! Seeded randomized verification suites. Each suite draws parameters from
//! a fixed distribution, compares a production path against an independent
//! oracle and reports the worst error relative to its tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bicomplex::{Bicomplex, ComplexPair, Hyperbolic};
use crate::error::{Error, Result};
use crate::kinetic::{self, KernelExponent, KineticProblem};
use crate::prabhakar::{self, PrabhakarParams};
use crate::quadrature::QuadratureSpec;
use crate::special::{self, ComplexPrabhakar, SeriesPolicy};
use crate::transforms::{self, ContourSpec, Grid};

pub const SUITES: [&str; 12] = [
    "algebra",
    "scalar",
    "recurrence",
    "differential",
    "integral",
    "laplace",
    "mellin",
    "barnes",
    "cauchy_riemann",
    "kinetic_special",
    "kinetic_general",
    "euler",
];

/// Failure messages kept per report.
const MAX_LISTED: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub draws: usize,
    /// Individual comparisons performed.
    pub checks: usize,
    pub failed: usize,
    /// Largest `error / tolerance` over all checks.
    pub worst_ratio: f64,
    pub passed: bool,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(suite: &str, seed: u64, draws: usize) -> Self {
        Self {
            report: SuiteReport {
                suite: suite.into(),
                seed,
                draws,
                checks: 0,
                failed: 0,
                worst_ratio: 0.0,
                passed: true,
                failures: Vec::new(),
                notes: Vec::new(),
            },
        }
    }

    fn fail(&mut self, what: String, ratio: f64) {
        let r = &mut self.report;
        r.checks += 1;
        r.failed += 1;
        r.worst_ratio = r.worst_ratio.max(ratio);
        if r.failures.len() < MAX_LISTED {
            r.failures.push(what);
        }
    }

    /// Records `err <= tol`; NaN errors fail.
    fn check(&mut self, what: impl FnOnce() -> String, err: f64, tol: f64) {
        let ratio = err / tol;
        if ratio <= 1.0 {
            self.report.checks += 1;
            self.report.worst_ratio = self.report.worst_ratio.max(ratio);
        } else {
            let msg = format!("{}: error {err:.3e} > {tol:.1e}", what());
            // NaN compares false above and lands here; max() would drop it.
            self.fail(msg, if ratio.is_nan() { f64::INFINITY } else { ratio });
        }
    }

    fn check_true(&mut self, what: impl FnOnce() -> String, ok: bool) {
        self.check(what, if ok { 0.0 } else { f64::INFINITY }, 1.0);
    }

    /// A draw whose evaluation errored counts as a failed check.
    fn guard<T>(&mut self, what: impl FnOnce() -> String, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{}: {e}", what()), f64::INFINITY);
                None
            }
        }
    }

    fn note(&mut self, s: String) {
        self.report.notes.push(s);
    }

    fn finish(mut self) -> SuiteReport {
        self.report.passed = self.report.failed == 0;
        self.report
    }
}

/// Draws used when none are requested.
pub fn default_draws(suite: &str) -> usize {
    match suite {
        "algebra" => 10_000,
        "scalar" | "integral" | "mellin" | "cauchy_riemann" => 100,
        "recurrence" => 1000,
        "differential" | "laplace" => 200,
        "barnes" | "kinetic_special" | "euler" => 50,
        "kinetic_general" => 12,
        _ => 100,
    }
}

/// Runs one suite, or every suite for `"all"`.
pub fn run(suite: &str, draws: Option<usize>, seed: u64) -> Result<Vec<SuiteReport>> {
    if suite == "all" {
        return SUITES.iter().map(|s| run_one(s, draws, seed)).collect();
    }
    Ok(vec![run_one(suite, draws, seed)?])
}

pub fn run_one(suite: &str, draws: Option<usize>, seed: u64) -> Result<SuiteReport> {
    let n = draws.unwrap_or_else(|| default_draws(suite));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new(suite, seed, n);
    match suite {
        "algebra" => algebra(&mut t, &mut rng, n),
        "scalar" => scalar(&mut t, &mut rng, n),
        "recurrence" => recurrence(&mut t, &mut rng, n),
        "differential" => differential(&mut t, &mut rng, n),
        "integral" => integral(&mut t, &mut rng, n),
        "laplace" => laplace(&mut t, &mut rng, n),
        "mellin" => mellin(&mut t, &mut rng, n),
        "barnes" => barnes(&mut t, &mut rng, n),
        "cauchy_riemann" => cauchy_riemann(&mut t, &mut rng, n),
        "kinetic_special" => kinetic_special(&mut t, &mut rng, n),
        "kinetic_general" => kinetic_general(&mut t, &mut rng, n),
        "euler" => euler(&mut t, &mut rng, n),
        other => {
            return Err(Error::Domain(format!(
                "unknown suite {other:?}; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    }
    Ok(t.finish())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn uniform_c(rng: &mut ChaCha8Rng, re: (f64, f64), im: (f64, f64)) -> Complex64 {
    c(rng.gen_range(re.0..re.1), rng.gen_range(im.0..im.1))
}

fn in_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(-PI..PI))
}

fn pair(rng: &mut ChaCha8Rng, re: (f64, f64), im: (f64, f64)) -> Bicomplex {
    Bicomplex::from_idempotent(uniform_c(rng, re, im), uniform_c(rng, re, im))
}

fn ulps(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() / (scale * f64::EPSILON).max(f64::MIN_POSITIVE)
}

fn ulps_c(a: Complex64, b: Complex64) -> f64 {
    ulps(a.re, b.re).max(ulps(a.im, b.im))
}

/// Per-component `|a - b| / (1 + |b|)`.
fn rel_err(a: &Bicomplex, b: &Bicomplex) -> f64 {
    [1u8, 2]
        .iter()
        .map(|&r| (a.component(r) - b.component(r)).norm() / (1.0 + b.component(r).norm()))
        .fold(0.0, f64::max)
}

fn algebra(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    for i in 0..n {
        let a = Bicomplex::new(
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
        );
        let b = pair(rng, (-10.0, 10.0), (-10.0, 10.0));
        let p = a.split();
        t.check_true(|| format!("draw {i}: compose(split(a)) != a"), Bicomplex::compose(p) == a);
        t.check_true(|| format!("draw {i}: split(compose(p)) != p"), Bicomplex::compose(p).split() == p);
        let prod = (a * b).split();
        let err = ulps_c(prod.z1, a.z1() * b.z1()).max(ulps_c(prod.z2, a.z2() * b.z2()));
        t.check(|| format!("draw {i}: split(a b)"), err, 4.0);
        let jm = (a * b).j_modulus();
        let (ja, jb) = (a.j_modulus(), b.j_modulus());
        let err = ulps(jm.p1(), ja.p1() * jb.p1()).max(ulps(jm.p2(), ja.p2() * jb.p2()));
        t.check(|| format!("draw {i}: j_modulus(a b)"), err, 4.0);

        // moduli in [1e-3, 1e3]
        let z = Bicomplex::from_idempotent(
            Complex64::from_polar(10f64.powf(rng.gen_range(-3.0..3.0)), rng.gen_range(-PI..PI)),
            Complex64::from_polar(10f64.powf(rng.gen_range(-3.0..3.0)), rng.gen_range(-PI..PI)),
        );
        if let Some(inv) = t.guard(|| format!("draw {i}: inverse"), z.inverse()) {
            let one = inv * z;
            let err = (one.z1() - 1.0).norm().max((one.z2() - 1.0).norm());
            t.check(|| format!("draw {i}: inverse(z) z"), err, 1e-14);
        }

        // null cone: one component vanishes
        let w = uniform_c(rng, (-5.0, 5.0), (-5.0, 5.0));
        let (null, eta) = if i % 2 == 0 {
            (Bicomplex::compose(ComplexPair { z1: w, z2: c(0.0, 0.0) }), Bicomplex::from_idempotent(c(0.0, 0.0), c(1.0, 0.0)))
        } else {
            (Bicomplex::compose(ComplexPair { z1: c(0.0, 0.0), z2: w }), Bicomplex::from_idempotent(c(1.0, 0.0), c(0.0, 0.0)))
        };
        t.check_true(|| format!("draw {i}: zero divisor"), null.is_zero_divisor() && (null * eta).is_zero());
        t.check_true(
            || format!("draw {i}: division by a null-cone value did not fail"),
            matches!(a.try_div(&null), Err(Error::NullCone(_))),
        );
    }
}

fn scalar(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    let exp_fn = ComplexPrabhakar::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).expect("valid parameters");
    let cos_fn = ComplexPrabhakar::new(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).expect("valid parameters");
    for i in 0..n {
        let z = in_disk(rng, 20.0);
        if let Some(v) = t.guard(|| format!("E_1,1({z})"), exp_fn.eval(z, &policy)) {
            let want = z.exp();
            t.check(|| format!("draw {i}: E_1,1({z}) vs exp"), (v.value - want).norm() / want.norm(), 1e-13);
        }
        let w = in_disk(rng, 5.0);
        if let Some(v) = t.guard(|| format!("E_2,1(-{w}^2)"), cos_fn.eval(-w * w, &policy)) {
            let want = w.cos();
            let err = (v.value - want).norm() / want.norm().max(1.0);
            t.check(|| format!("draw {i}: E_2,1(-z^2) vs cos at z = {w}"), err, 1e-12);
        }
        // Γ(z) / Γ(z) away from poles
        let g = uniform_c(rng, (-6.0, 6.0), (-3.0, 3.0));
        let pole_dist = (g - c(g.re.round().min(0.0), 0.0)).norm();
        if pole_dist >= 0.1 {
            if let Some(gv) = t.guard(|| format!("gamma({g})"), special::gamma(g)) {
                let err = (special::recip_gamma(g) * gv - 1.0).norm();
                t.check(|| format!("draw {i}: recip_gamma(z) gamma(z) at {g}"), err, 1e-13);
            }
        }
    }
}

/// `Γ(z)` from Euler's product `(1/z) Π_{k≤N} (1 + 1/k)^z / (1 + z/k)`,
/// summed in log space.
pub fn euler_product_gamma(z: Complex64, factors: usize) -> Complex64 {
    let mut log = -z.ln();
    for k in 1..=factors {
        let kf = k as f64;
        log += z * (1.0 / kf).ln_1p() - (z / kf + 1.0).ln();
    }
    log.exp()
}

fn euler(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    for i in 0..n {
        let z = pair(rng, (1.0, 3.0), (-1.0, 1.0));
        let Some(g) = t.guard(|| format!("draw {i}: gamma_bicomplex"), prabhakar::gamma_bicomplex(&z)) else {
            continue;
        };
        let oracle = Bicomplex::from_idempotent(euler_product_gamma(z.z1(), 100_000), euler_product_gamma(z.z2(), 100_000));
        let err = [1u8, 2]
            .iter()
            .map(|&r| (g.component(r) - oracle.component(r)).norm() / g.component(r).norm())
            .fold(0.0, f64::max);
        t.check(|| format!("draw {i}: gamma at {z}"), err, 1e-4);
    }
}

/// Series parameters with idempotent real parts in `(lo, hi)` and imaginary
/// parts in `(-1, 1)`.
fn draw_params(rng: &mut ChaCha8Rng, tau_lo: f64) -> PrabhakarParams {
    let sigma = pair(rng, (0.2, 3.0), (-1.0, 1.0));
    let tau = pair(rng, (tau_lo, 3.0), (-1.0, 1.0));
    let delta = pair(rng, (0.2, 3.0), (-1.0, 1.0));
    PrabhakarParams::new(sigma, tau, delta).expect("drawn inside the domain")
}

/// Argument with `|ζ_r| <= min(5, 8^{Re σ_r}) e^{-Im σ_r arg σ_r}`, which
/// keeps the largest series term within about `e^8` of the sum. The second
/// factor accounts for `|Γ(σk)|` shrinking like `e^{-k Im σ arg σ}`.
fn draw_arg(rng: &mut ChaCha8Rng, sigma: &Bicomplex) -> Bicomplex {
    let mut comp = |r: u8| {
        let s = sigma.component(r);
        let bound = 5f64.min(8f64.powf(s.re)) * (-s.im * s.arg()).exp();
        in_disk(rng, bound)
    };
    let z1 = comp(1);
    let z2 = comp(2);
    Bicomplex::from_idempotent(z1, z2)
}

/// Largest ratio of peak series term to `1 + |sum|` accepted in a draw. The
/// log-space terms carry about `2e-15` relative error, so this caps the
/// rounding floor near `2e-11 (1 + |E|)`.
const MAX_CANCELLATION: f64 = 1e4;

/// Whether each series `E^{δ+dδ}_{σ,τ+dτ}(ζ)` over `shifts` stays within
/// `MAX_CANCELLATION`.
fn well_conditioned(p: &PrabhakarParams, z: &Bicomplex, shifts: &[(Bicomplex, f64)], policy: &SeriesPolicy) -> bool {
    let (sigma, tau, delta) = (p.sigma(), p.tau(), p.delta());
    shifts.iter().all(|&(dt, dd)| {
        [1u8, 2].iter().all(|&r| {
            let f = ComplexPrabhakar::new(sigma.component(r), tau.component(r) + dt.component(r), delta.component(r) + dd);
            match f.and_then(|f| f.eval(z.component(r), policy)) {
                Ok(v) => v.magnitude <= MAX_CANCELLATION * (1.0 + v.value.norm()),
                Err(_) => false,
            }
        })
    })
}

/// Redraws `ζ` until `well_conditioned` holds. Gives up after 100 attempts.
fn draw_conditioned_arg(
    rng: &mut ChaCha8Rng,
    p: &PrabhakarParams,
    shifts: &[(Bicomplex, f64)],
    policy: &SeriesPolicy,
) -> Option<Bicomplex> {
    (0..100).map(|_| draw_arg(rng, &p.sigma())).find(|z| well_conditioned(p, z, shifts, policy))
}

fn recurrence(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    for i in 0..n {
        // identity (ii) needs Re τ_r > 1
        let p = draw_params(rng, 1.05);
        let zero = Bicomplex::ZERO;
        let one = Bicomplex::ONE;
        let shifts = [(zero, 0.0), (p.sigma(), 0.0), (zero, -1.0), (zero - one, 0.0), (zero, 1.0)];
        let Some(z) = draw_conditioned_arg(rng, &p, &shifts, &policy) else {
            t.note(format!("draw {i}: no well-conditioned argument found"));
            continue;
        };
        let what = || format!("draw {i}: sigma = {}, tau = {}, delta = {}, z = {z}", p.sigma(), p.tau(), p.delta());
        let Some(e) = t.guard(what, prabhakar::prabhakar(&p, &z, &policy)) else {
            continue;
        };
        let Some((r1, r2)) = t.guard(what, prabhakar::recurrence_residuals(&p, &z, &policy)) else {
            continue;
        };
        for r in [1u8, 2] {
            let scale = 1.0 + e.component(r).norm();
            t.check(|| format!("{} (i), component {r}", what()), r1.component(r).norm() / scale, 1e-10);
            t.check(|| format!("{} (ii), component {r}", what()), r2.component(r).norm() / scale, 1e-10);
        }
    }
}

const FD_STEP: f64 = 1e-5;

fn central_difference(f: impl Fn(&Bicomplex) -> Result<Bicomplex>, z: &Bicomplex) -> Result<Bicomplex> {
    let h = Bicomplex::from_real(FD_STEP);
    let hi = f(&(*z + h))?;
    let lo = f(&(*z - h))?;
    Ok((hi - lo) * Bicomplex::from_real(0.5 / FD_STEP))
}

fn differential(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    for i in 0..n {
        let p = draw_params(rng, 1.05);
        let shifts = [(Bicomplex::ZERO, 0.0), (p.sigma(), 1.0), (Bicomplex::ZERO, 1.0)];
        let Some(z) = draw_conditioned_arg(rng, &p, &shifts, &policy) else {
            t.note(format!("draw {i}: no well-conditioned argument found"));
            continue;
        };
        let what = || format!("draw {i}: sigma = {}, tau = {}, delta = {}, z = {z}", p.sigma(), p.tau(), p.delta());
        let closed = t.guard(what, prabhakar::derivative(&p, &z, 1, &policy));
        let fd = t.guard(what, central_difference(|w| prabhakar::prabhakar(&p, w, &policy), &z));
        if let (Some(closed), Some(fd)) = (closed, fd) {
            t.check(|| format!("{} d/dz", what()), rel_err(&fd, &closed), 1e-6);
            // (ζ d/dζ + δ) E^δ = δ E^{δ+1}
            let e = prabhakar::prabhakar(&p, &z, &policy);
            let up = PrabhakarParams::new(p.sigma(), p.tau(), p.delta() + Bicomplex::ONE)
                .and_then(|q| prabhakar::prabhakar(&q, &z, &policy));
            if let (Some(e), Some(up)) = (t.guard(what, e), t.guard(what, up)) {
                let lhs = z * closed + p.delta() * e;
                t.check(|| format!("{} (z d/dz + delta)", what()), rel_err(&lhs, &(p.delta() * up)), 1e-10);
            }
        }

        // d/dζ [ζ^{τ-1} E^δ_{σ,τ}(λ ζ^σ)] away from the branch cut
        let kernel_shifts = [(Bicomplex::ZERO, 0.0), (Bicomplex::ZERO - Bicomplex::ONE, 0.0)];
        let drawn = (0..100)
            .map(|_| {
                let lam = Bicomplex::from_idempotent(in_disk(rng, 1.0), in_disk(rng, 1.0));
                (lam, pair(rng, (0.5, 2.0), (-1.0, 1.0)))
            })
            .find(|(lam, zeta)| {
                zeta.pow(&p.sigma())
                    .map(|w| well_conditioned(&p, &(*lam * w), &kernel_shifts, &policy))
                    .unwrap_or(false)
            });
        let Some((lam, zeta)) = drawn else {
            t.note(format!("draw {i}: no well-conditioned kernel point found"));
            continue;
        };
        let closed = t.guard(what, prabhakar::kernel_derivative(&p, &lam, &zeta, 1, &policy));
        let fd = t.guard(what, central_difference(|w| prabhakar::kernel(&p, &lam, w, &policy), &zeta));
        if let (Some(closed), Some(fd)) = (closed, fd) {
            t.check(|| format!("{} kernel d/dz at {zeta}, lambda = {lam}", what()), rel_err(&fd, &closed), 1e-6);
        }
    }
}

fn integral(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    let spec = QuadratureSpec::default();
    for i in 0..n {
        let p = draw_params(rng, 0.2);
        // |λ s^σ ζ^σ| <= |λ ζ^σ| on the segment, so the endpoint bounds the term size
        let shifts = [(Bicomplex::ZERO, 0.0), (Bicomplex::ONE, 0.0)];
        let drawn = (0..100)
            .map(|_| {
                let lam = Bicomplex::from_idempotent(in_disk(rng, 1.0), in_disk(rng, 1.0));
                (lam, Bicomplex::from_idempotent(in_disk(rng, 2.0), in_disk(rng, 2.0)))
            })
            .find(|(lam, zeta)| {
                zeta.pow(&p.sigma())
                    .map(|w| well_conditioned(&p, &(*lam * w), &shifts, &policy))
                    .unwrap_or(false)
            });
        let Some((lam, zeta)) = drawn else {
            t.note(format!("draw {i}: no well-conditioned point found"));
            continue;
        };
        let what = || format!("draw {i}: sigma = {}, tau = {}, delta = {}, lambda = {lam}, zeta = {zeta}", p.sigma(), p.tau(), p.delta());
        let closed = t.guard(what, prabhakar::kernel_integral(&p, &lam, &zeta, &policy));
        let quad = t.guard(what, transforms::kernel_integral_quadrature(&p, &lam, &zeta, &spec, &policy));
        if let (Some(closed), Some(quad)) = (closed, quad) {
            t.check(what, rel_err(&quad, &closed), 1e-7);
        }
    }
}

fn cauchy_riemann(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    for i in 0..n {
        let sigma = pair(rng, (0.7, 3.0), (-1.0, 1.0));
        let tau = pair(rng, (0.2, 3.0), (-1.0, 1.0));
        let delta = pair(rng, (0.2, 3.0), (-1.0, 1.0));
        let p = PrabhakarParams::new(sigma, tau, delta).expect("drawn inside the domain");
        // point (z1, z2) with |z1|^2 + |z2|^2 <= 4
        let split = rng.gen_range(0.0..PI / 2.0);
        let radius = 2.0 * rng.gen::<f64>().sqrt();
        let z1 = Complex64::from_polar(radius * split.cos(), rng.gen_range(-PI..PI));
        let z2 = Complex64::from_polar(radius * split.sin(), rng.gen_range(-PI..PI));
        let what = || format!("draw {i}: sigma = {sigma}, tau = {tau}, delta = {delta}, z1 = {z1}, z2 = {z2}");
        if let Some(res) = t.guard(what, prabhakar::cauchy_riemann_residual(&p, z1, z2, FD_STEP, &policy)) {
            t.check(what, res, 1e-6);
        }
    }
}

fn laplace(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    let spec = QuadratureSpec::default();
    let mut rejected = 0usize;
    let mut i = 0;
    while i < n {
        let sigma = pair(rng, (0.5, 2.0), (-0.2, 0.2));
        let tau = pair(rng, (0.5, 3.0), (-1.0, 1.0));
        let delta = pair(rng, (0.3, 2.0), (-1.0, 1.0));
        let zeta = pair(rng, (1.0, 3.0), (-1.0, 1.0));
        // keep the growth rate of E(λ t^σ) well below Re ζ
        let mut lam = [c(0.0, 0.0); 2];
        for r in [1u8, 2] {
            let (s, z) = (sigma.component(r), zeta.component(r));
            let bound = (0.5 * z.re).powf(s.re).min(0.7 * z.norm().powf(s.re) * (-s.im * z.arg()).exp());
            lam[r as usize - 1] = in_disk(rng, bound);
        }
        let lam = Bicomplex::from_idempotent(lam[0], lam[1]);
        let p = PrabhakarParams::new(sigma, tau, delta).expect("drawn inside the domain");
        if transforms::laplace_guard(&p, &lam, &zeta).is_err() {
            rejected += 1;
            continue;
        }
        let what = || format!("draw {i}: sigma = {sigma}, tau = {tau}, delta = {delta}, lambda = {lam}, zeta = {zeta}");
        let closed = t.guard(what, transforms::laplace_closed(&p, &lam, &zeta));
        let quad = t.guard(what, transforms::laplace_quadrature(&p, &lam, &zeta, &spec, &policy));
        if let (Some(closed), Some(quad)) = (closed, quad) {
            t.check(what, rel_err(&quad, &closed), 1e-7);
        }
        // one component pushed outside |λ ζ^{-σ}| < 1
        let outside = Bicomplex::from_idempotent(
            zeta.z1().powc(sigma.z1()) * rng.gen_range(1.0..3.0),
            lam.z2(),
        );
        t.check_true(
            || format!("draw {i}: guard accepted lambda = {outside}"),
            matches!(transforms::laplace_closed(&p, &outside, &zeta), Err(Error::Domain(_))),
        );
        i += 1;
    }
    t.note(format!("{rejected} draws rejected by the guard before use"));
}

fn mellin(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    let spec = QuadratureSpec {
        abs_tol: 1e-9,
        rel_tol: 1e-8,
        ..Default::default()
    };
    for i in 0..n {
        let sigma = if i % 4 == 0 { 1.0 } else { rng.gen_range(0.5..1.0) };
        let tau = pair(rng, (0.5, 3.0), (-1.0, 1.0));
        let delta = pair(rng, (0.5, 3.0), (-1.0, 1.0));
        let mut s = [c(0.0, 0.0); 2];
        let mut lam = [c(0.0, 0.0); 2];
        for r in 0..2 {
            let d = delta.component(r as u8 + 1).re;
            s[r] = uniform_c(rng, (0.1 * d, 0.9 * d), (-1.0, 1.0));
            let sector = 0.5 * PI * (1.0 - 0.5 * sigma);
            lam[r] = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-sector..sector));
        }
        let (s, lam) = (Bicomplex::from_idempotent(s[0], s[1]), Bicomplex::from_idempotent(lam[0], lam[1]));
        let p = PrabhakarParams::new(Bicomplex::from_real(sigma), tau, delta).expect("drawn inside the domain");
        let what = || format!("draw {i}: sigma = {sigma}, tau = {tau}, delta = {delta}, lambda = {lam}, s = {s}");
        let closed = t.guard(what, transforms::mellin_closed(&p, &lam, &s));
        let quad = t.guard(what, transforms::mellin_quadrature(&p, &lam, &s, &spec, &policy));
        if let (Some(closed), Some(quad)) = (closed, quad) {
            t.check(what, rel_err(&quad, &closed), 1e-6);
        }
        // (1,1,1), λ = 1 reduces to Γ(s)
        let unit = PrabhakarParams::real(1.0, 1.0, 1.0).expect("valid parameters");
        let s0 = pair(rng, (0.05, 0.95), (-2.0, 2.0));
        let g = transforms::mellin_closed(&unit, &Bicomplex::ONE, &s0).and_then(|v| Ok((v, prabhakar::gamma_bicomplex(&s0)?)));
        if let Some((v, g)) = t.guard(|| format!("draw {i}: gamma reduction at {s0}"), g) {
            t.check(|| format!("draw {i}: gamma reduction at {s0}"), rel_err(&v, &g), 1e-10);
        }
    }
}

fn barnes(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    let contour = ContourSpec::default();
    for i in 0..n {
        let sigma = rng.gen_range(0.3..1.5);
        let tau = pair(rng, (0.5, 3.0), (-1.0, 1.0));
        let delta = pair(rng, (0.5, 3.0), (-1.0, 1.0));
        let sector = 0.8 * PI * (1.0 - 0.5 * sigma);
        let mut lam = [c(0.0, 0.0); 2];
        for l in lam.iter_mut() {
            *l = -Complex64::from_polar(rng.gen_range(0.05..2.0), rng.gen_range(-sector..sector));
        }
        let lam = Bicomplex::from_idempotent(lam[0], lam[1]);
        let p = PrabhakarParams::new(Bicomplex::from_real(sigma), tau, delta).expect("drawn inside the domain");
        let what = || format!("draw {i}: sigma = {sigma}, tau = {tau}, delta = {delta}, lambda = {lam}");
        let mb = t.guard(what, transforms::mellin_barnes_eval(&p, &lam, &contour, &policy));
        let series = t.guard(what, prabhakar::prabhakar(&p, &lam, &policy));
        if let (Some(mb), Some(series)) = (mb, series) {
            t.check(what, (mb - series).max_norm(), 1e-6);
        }
    }
}

fn kinetic_special(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    let grid = Grid::new(2.0, 1e-3).expect("valid grid");
    let unit = PrabhakarParams::real(1.0, 1.0, 1.0).expect("valid parameters");
    if let Some(sol) = t.guard(|| "analytic case".into(), kinetic::solve_special(2.5, &unit, &Hyperbolic::ONE, 1, grid, &policy)) {
        let err = grid
            .times()
            .zip(&sol.values)
            .map(|(x, v)| (*v - Bicomplex::from_real(2.5 * (1.0 - x) * (-x).exp())).max_norm())
            .fold(0.0, f64::max);
        t.check(|| "N0 (1 - t) e^(-t)".into(), err, 1e-10);
    }
    for i in 0..n {
        let (sigma, tau, delta) = (rng.gen_range(0.5..2.0), rng.gen_range(1.0..2.0), rng.gen_range(0.5..2.0));
        let order = rng.gen_range(1..=3usize);
        let a = Hyperbolic::new(rng.gen_range(0.1..2.0), 0.0);
        let n0 = rng.gen_range(0.5..5.0);
        let what = || format!("draw {i}: (sigma, tau, delta) = ({sigma:.4}, {tau:.4}, {delta:.4}), n = {order}, a = {:.4}, N0 = {n0:.3}", a.u());
        let p = PrabhakarParams::real(sigma, tau, delta).expect("drawn inside the domain");
        let run = KineticProblem::special_case(n0, &p, a, order, grid).and_then(|prob| {
            let sol = kinetic::solve_special(n0, &p, &a, order, grid, &policy)?;
            kinetic::volterra_residual(&sol, &prob)
        });
        if let Some(res) = t.guard(what, run) {
            t.check(what, res / n0, 1e-4);
        }
    }
}

fn kinetic_general(t: &mut Tally, rng: &mut ChaCha8Rng, n: usize) {
    let policy = SeriesPolicy::default();
    let grid = Grid::new(1.0, 1e-3).expect("valid grid");
    for i in 0..n {
        let sigma = rng.gen_range(0.7..1.5);
        // smooth sources: t^{τ-1} with τ ∈ {1, 2}
        let tau = if i % 2 == 0 { 1.0 } else { 2.0 };
        let delta = rng.gen_range(0.5..2.0);
        let order = 1 + i % 3;
        let a = Hyperbolic::from_idempotent(rng.gen_range(0.1..0.5), rng.gen_range(0.1..0.5));
        let n0 = rng.gen_range(0.5..5.0);
        let what = || format!("draw {i}: (sigma, tau, delta) = ({sigma:.4}, {tau}, {delta:.4}), n = {order}, a = {a}, N0 = {n0:.3}");
        let p = PrabhakarParams::real(sigma, tau, delta).expect("drawn inside the domain");
        let run = KineticProblem::special_case(n0, &p, a, order, grid).and_then(|prob| {
            let general = kinetic::solve_general(&prob, kinetic::DEFAULT_TERM_BUDGET, &policy)?;
            let special = kinetic::solve_special(n0, &p, &a, order, grid, &policy)?;
            Ok((prob, general, special))
        });
        let Some((prob, general, special)) = t.guard(what, run) else {
            continue;
        };
        let diff = general.values.try_sub(&special).map(|d| d.max_norm());
        if let Some(diff) = t.guard(what, diff) {
            t.check(what, diff / n0, 1e-5);
        }
        if order == 2 && t.report.notes.is_empty() {
            // both kernel exponents, judged by the equation itself
            let printed = kinetic::solve_general_with(&prob, kinetic::DEFAULT_TERM_BUDGET, &policy, KernelExponent::Printed);
            let res = |v: &transforms::GridFunction| kinetic::volterra_residual(v, &prob);
            if let (Ok(printed), Ok(rd)) = (printed, res(&general.values)) {
                if let Ok(rp) = res(&printed.values) {
                    t.note(format!(
                        "draw {i}: Volterra residual / N0 with c = sum s_mu nu_(mu+1): {:.3e}; with c = sum nu_(mu+1): {:.3e}",
                        rd / n0,
                        rp / n0
                    ));
                }
            }
        }
    }
    // the geometric condition fails: the solver must refuse
    let big = Grid::new(2.0, 1e-2).expect("valid grid");
    let refuse = KineticProblem::new(
        1.0,
        vec![Hyperbolic::ONE, Hyperbolic::ONE],
        vec![Bicomplex::ONE, Bicomplex::from_real(2.0)],
        transforms::GridFunction::from_fn(big, |_| Bicomplex::ONE),
    )
    .and_then(|prob| kinetic::solve_general(&prob, kinetic::DEFAULT_TERM_BUDGET, &policy));
    t.check_true(
        || format!("divergent problem was not refused: {refuse:?}"),
        matches!(refuse.as_ref().map_err(|e| e.root()), Err(Error::SeriesDivergence(_))),
    );
}
