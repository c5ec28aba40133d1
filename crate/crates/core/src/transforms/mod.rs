//! Integral transforms of the Prabhakar kernel and their quadrature oracles.

mod barnes;
mod grid;
mod laplace;
mod mellin;

pub use barnes::{mellin_barnes_eval, ContourSpec};
pub use grid::{rl_fractional_integral, Grid, GridFunction};
pub use laplace::{laplace_closed, laplace_guard, laplace_quadrature};
pub use mellin::{mellin_closed, mellin_quadrature};

use std::cell::Cell;

use num_complex::Complex64;

use crate::bicomplex::{cpow, Bicomplex};
use crate::error::{Error, Result};
use crate::prabhakar::PrabhakarParams;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::special::SeriesPolicy;

/// An integrand sample and an absolute error bound on it.
pub(crate) type Sample = (Complex64, f64);

/// `∫_a^b f(t) dt` where `f` also reports its own evaluation error. With
/// `substitution = Some(p)` (and `a = 0`) the integral is taken in `u` with
/// `t = u^p`, which regularizes `t^{α-1}` endpoint behavior for `α p ≥ 2`.
/// Fails when the accumulated evaluation error exceeds the tolerance.
pub(crate) fn integrate_checked<F>(f: F, a: f64, b: f64, substitution: Option<f64>, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Sample>,
{
    let g = |u: f64| -> Result<Sample> {
        match substitution {
            None => f(u),
            Some(_) if u <= 0.0 => Ok((Complex64::new(0.0, 0.0), 0.0)),
            Some(p) => {
                let t = u.powf(p);
                let (v, e) = f(t)?;
                let jac = p * t / u;
                Ok((v * jac, e * jac))
            }
        }
    };
    let (lo, hi) = match substitution {
        None => (a, b),
        Some(p) => (a.powf(1.0 / p), b.powf(1.0 / p)),
    };
    let sup = Cell::new(0.0f64);
    let main = integrate(
        |u| {
            let (v, e) = g(u)?;
            sup.set(sup.get().max(e));
            Ok(v)
        },
        lo,
        hi,
        spec.abs_tol,
        spec.rel_tol,
        spec.max_subdivisions,
    )?;
    let tol = spec.abs_tol.max(spec.rel_tol * main.value.norm());
    if sup.get() * (hi - lo).abs() > tol {
        let err = integrate(
            |u| Ok(Complex64::new(g(u)?.1, 0.0)),
            lo,
            hi,
            0.01 * tol,
            1e-2,
            spec.max_subdivisions,
        )?;
        if err.value.re > tol {
            return Err(Error::QuadratureFailure {
                message: "series cancellation in the integrand exceeds the tolerance".into(),
                estimate: err.value.re,
            });
        }
    }
    Ok(main.value)
}

/// Quadrature of `∫ t^{τ-1} E^δ_{σ,τ}(λ t^σ) dt` along the straight segments
/// `0 → ζ_r`, one per idempotent component. With `t = s ζ_r` the integral is
/// `ζ_r^{τ_r} ∫_0^1 s^{τ_r-1} E(λ_r ζ_r^{σ_r} s^{σ_r}) ds`.
pub fn kernel_integral_quadrature(
    params: &PrabhakarParams,
    lambda: &Bicomplex,
    zeta: &Bicomplex,
    spec: &QuadratureSpec,
    policy: &SeriesPolicy,
) -> Result<Bicomplex> {
    spec.validate()?;
    let eval = params.evaluator()?;
    let (sigma, tau) = (params.sigma(), params.tau());
    Bicomplex::try_build(|r| {
        let f = eval.component(r);
        let (z, s, t) = (zeta.component(r), sigma.component(r), tau.component(r));
        if z == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let scale = lambda.component(r) * cpow(z, s)?;
        let integrand = |x: f64| -> Result<Sample> {
            if x <= 0.0 {
                return Ok((Complex64::new(0.0, 0.0), 0.0));
            }
            let lx = x.ln();
            let w = ((t - 1.0) * lx).exp();
            let e = f.eval(scale * (s * lx).exp(), policy)?;
            Ok((w * e.value, w.norm() * e.abs_error))
        };
        let p = (t.re < 1.0).then(|| 2.0 / t.re);
        let inner = integrate_checked(integrand, 0.0, 1.0, p, spec)?;
        Ok(cpow(z, t)? * inner)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prabhakar::kernel_integral;

    #[test]
    fn segment_quadrature_matches_closed_form() {
        let pol = SeriesPolicy::default();
        let spec = QuadratureSpec::default();
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let one = Bicomplex::from_real(1.0);
        let t = Bicomplex::from_real(1.3);
        let q = kernel_integral_quadrature(&p, &one, &t, &spec, &pol).unwrap();
        assert!((q.z1().re - (1.3f64.exp() - 1.0)).abs() < 1e-9);

        let sigma = Bicomplex::from_idempotent(Complex64::new(0.9, 0.2), Complex64::new(1.4, -0.1));
        let tau = Bicomplex::from_idempotent(Complex64::new(0.6, 0.3), Complex64::new(1.7, -0.4));
        let delta = Bicomplex::from_idempotent(Complex64::new(1.2, -0.3), Complex64::new(0.5, 0.2));
        let p = PrabhakarParams::new(sigma, tau, delta).unwrap();
        let lam = Bicomplex::from_idempotent(Complex64::new(0.4, -0.8), Complex64::new(-1.0, 0.3));
        let z = Bicomplex::from_idempotent(Complex64::new(1.1, 0.9), Complex64::new(-0.7, 1.2));
        let closed = kernel_integral(&p, &lam, &z, &pol).unwrap();
        let quad = kernel_integral_quadrature(&p, &lam, &z, &spec, &pol).unwrap();
        assert!((closed - quad).max_norm() < 1e-8 * (1.0 + closed.max_norm()), "{closed} vs {quad}");
    }
}
