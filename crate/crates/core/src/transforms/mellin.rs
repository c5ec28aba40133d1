//! Mellin transform `∫_0^∞ t^{s-1} E^δ_{σ,τ}(-λ t) dt` for real `σ > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bicomplex::{cpow, Bicomplex};
use crate::error::{Error, Result};
use crate::prabhakar::PrabhakarParams;
use crate::quadrature::QuadratureSpec;
use crate::special::{self, ComplexPrabhakar, SeriesPolicy};
use crate::transforms::{integrate_checked, Sample};

/// Cutoffs tried in turn, as values of `u^{1/σ}` at the cutoff `u`: near 36
/// the double-double series rounding `~ 1e-30 e^{u^{1/σ}}` and the truncated
/// expansion error `~ e^{-u^{1/σ}}` balance, but the polynomial factors in
/// both move the best choice.
const BALANCE_EXPONENTS: [f64; 4] = [36.0, 30.0, 42.0, 26.0];
/// The same balance for series summed in plain `f64`.
const BALANCE_EXPONENT_F64: f64 = 18.0;
const MAX_ASYMPTOTIC_TERMS: usize = 400;

fn mellin_guard(params: &PrabhakarParams, lambda: &Bicomplex, s: &Bicomplex) -> Result<f64> {
    let sigma = params
        .sigma_real()
        .ok_or_else(|| Error::Domain(format!("sigma must be a positive real, got {}", params.sigma())))?;
    let delta = params.delta();
    if !delta.param_domain_ok() {
        return Err(Error::Domain(format!("|Im_j(delta)| < Re(delta) violated: delta = {delta}")));
    }
    for r in [1u8, 2] {
        let (sr, dr) = (s.component(r), delta.component(r));
        if !(sr.re > 0.0 && sr.re < dr.re) {
            return Err(Error::Domain(format!(
                "0 < Re(zeta_{r}) < Re(delta_{r}) violated: zeta_{r} = {sr}, delta_{r} = {dr}"
            )));
        }
        if params.tau().component(r) == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain(format!("tau_{r} != 0 violated")));
        }
    }
    if !lambda.is_invertible() {
        return Err(Error::NullCone(format!("lambda = {lambda} is not invertible")));
    }
    Ok(sigma)
}

/// `Γ(ζ) Γ(δ-ζ) λ^{-ζ} / (Γ(δ) Γ(τ-σζ))`, componentwise.
pub fn mellin_closed(params: &PrabhakarParams, lambda: &Bicomplex, zeta: &Bicomplex) -> Result<Bicomplex> {
    let sigma = mellin_guard(params, lambda, zeta)?;
    let (tau, delta) = (params.tau(), params.delta());
    Bicomplex::try_build(|r| {
        let (s, d, t, l) = (zeta.component(r), delta.component(r), tau.component(r), lambda.component(r));
        let num = special::gamma(s)? * special::gamma(d - s)? * cpow(l, -s)?;
        Ok(num * special::recip_gamma(d) * special::recip_gamma(t - s * sigma))
    })
}

/// Coefficients `c_q` of `E^δ_{σ,τ}(-x) ~ Σ_q c_q x^{-δ-q}` as `x → ∞`.
fn asymptotic_coefficients(sigma: f64, tau: Complex64, delta: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(MAX_ASYMPTOTIC_TERMS);
    // (-1)^q (δ)_q / q!
    let mut ratio = Complex64::new(1.0, 0.0);
    for q in 0..MAX_ASYMPTOTIC_TERMS {
        let qf = q as f64;
        out.push(ratio * special::recip_gamma(tau - (delta + qf) * sigma));
        ratio *= -(delta + qf) / (qf + 1.0);
    }
    out
}

/// Upper bound on `|(δ)_q / q! · x^{-e} / Γ(τ - σe)|` with `e = δ + q`, from
/// `1/Γ(w) = Γ(1-w) sin(πw) / π`. `None` until `Re(1-w) >= 1`, before which
/// the poles of `Γ(1-w)` make the bound useless.
fn envelope(sigma: f64, tau: Complex64, e: Complex64, ln_poch: f64, lnx: Complex64) -> Option<f64> {
    let w = tau - e * sigma;
    if (1.0 - w).re < 1.0 {
        return None;
    }
    let lg = special::ln_gamma(1.0 - w).ok()?;
    Some((ln_poch + lg.re - (e * lnx).re).exp() * (PI * w.im).cosh() / PI)
}

fn mellin_component(
    f: &ComplexPrabhakar,
    sigma: f64,
    s: Complex64,
    lambda: Complex64,
    spec: &QuadratureSpec,
    policy: &SeriesPolicy,
) -> Result<Complex64> {
    // the ray t = u / λ turns the integral into λ^{-s} ∫_0^∞ u^{s-1} E(-u) du;
    // E(-λt) decays throughout the sector swept, and on the positive axis the
    // exponentially small parts of E decay at their fastest rate
    let rotation = cpow(lambda, -s)?;
    let scaled = QuadratureSpec {
        abs_tol: spec.abs_tol / rotation.norm(),
        ..*spec
    };
    if let Some(t) = spec.tail_cutoff {
        return Ok(rotation * rotated_integral(f, sigma, s, t * lambda.norm(), &scaled, policy)?);
    }
    let exponents: &[f64] = if f.has_extended_path() {
        &BALANCE_EXPONENTS
    } else {
        &[BALANCE_EXPONENT_F64]
    };
    let mut outcome = Err(Error::Domain("no cutoff tried".into()));
    for x in exponents {
        outcome = rotated_integral(f, sigma, s, x.powf(sigma), &scaled, policy);
        match outcome {
            Err(Error::QuadratureFailure { .. }) => continue,
            _ => break,
        }
    }
    Ok(rotation * outcome?)
}

/// `∫_0^∞ u^{s-1} E(-u) du` with quadrature up to `t_max` and the asymptotic
/// expansion beyond.
fn rotated_integral(
    f: &ComplexPrabhakar,
    sigma: f64,
    s: Complex64,
    t_max: f64,
    spec: &QuadratureSpec,
    policy: &SeriesPolicy,
) -> Result<Complex64> {
    let (tau, delta) = (f.tau(), f.delta());
    let radius = special::ACCURACY_RADIUS.max(1.01 * t_max);
    let integrand = |t: f64| -> Result<Sample> {
        if t <= 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let weight = ((s - 1.0) * t.ln()).exp();
        let e = f.eval_extended(Complex64::new(-t, 0.0), policy, radius)?;
        Ok((weight * e.value, weight.norm() * e.abs_error))
    };
    let split = 1.0f64.min(t_max);
    let p = (s.re < 1.0).then(|| 2.0 / s.re);
    let finite = integrate_checked(integrand, 0.0, split, p, spec)? + integrate_checked(integrand, split, t_max, None, spec)?;
    let tol = spec.abs_tol.max(spec.rel_tol * finite.norm());

    // tail ∫_T^∞ t^{s-1} Σ_q c_q t^{-δ-q} dt, truncated where the envelope
    // of its terms is smallest: for non-integer σ the factor sin(π(τ - σ(δ+q)))
    // inside c_q oscillates in q, so the raw term sizes are not unimodal
    let coeffs = asymptotic_coefficients(sigma, tau, delta);
    let x = Complex64::new(t_max, 0.0);
    let lnx = x.ln();
    let mut tail = Complex64::new(0.0, 0.0);
    let mut expansion = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut smallest = f64::INFINITY;
    let mut ln_poch = 0.0;
    let mut kept = 0;
    for (q, c) in coeffs.iter().enumerate() {
        let e = delta + q as f64;
        let term = c * cpow(x, -e)?;
        let size = match envelope(sigma, tau, e, ln_poch, lnx) {
            Some(env) => {
                let size = term.norm().max(env);
                if size > last {
                    break;
                }
                last = size;
                size
            }
            None => term.norm(),
        };
        expansion += term;
        kept = q + 1;
        tail += term * cpow(Complex64::new(t_max, 0.0), s)? / (e - s);
        smallest = size;
        ln_poch += (delta + q as f64).norm().ln() - ((q + 1) as f64).ln();
    }
    // the expansion must reproduce the series at the cutoff
    let at_cut = f.eval_extended(-x, policy, radius)?;
    let mismatch = (at_cut.value - expansion).norm() + smallest + at_cut.abs_error;
    // beyond T the remainder after N terms decays like u^{-δ-N}, and the
    // exponentially small parts faster still
    let tail_error = mismatch * t_max.powf(s.re) / (delta.re + kept as f64 - s.re);
    if tail_error > tol {
        return Err(Error::QuadratureFailure {
            message: format!("asymptotic tail beyond T = {t_max:.3} is not resolved"),
            estimate: tail_error,
        });
    }
    Ok(finite + tail)
}

/// Componentwise quadrature of `∫_0^∞ t^{ζ_r-1} E^{δ_r}_{σ,τ_r}(-λ_r t) dt`
/// along the ray `arg t = -arg λ_r`: adaptive quadrature on `[0, T]` split at
/// `1`, and the algebraic asymptotic expansion integrated exactly beyond `T`.
/// Needs `|arg λ_r| < π(1 - σ/2)`, outside of which the integral diverges.
pub fn mellin_quadrature(
    params: &PrabhakarParams,
    lambda: &Bicomplex,
    zeta: &Bicomplex,
    spec: &QuadratureSpec,
    policy: &SeriesPolicy,
) -> Result<Bicomplex> {
    spec.validate()?;
    let sigma = mellin_guard(params, lambda, zeta)?;
    let sector = PI * (1.0 - 0.5 * sigma);
    for r in [1u8, 2] {
        let arg = lambda.component(r).arg().abs();
        if !(arg < sector) {
            return Err(Error::Domain(format!(
                "|arg(lambda_{r})| = {arg} must be below pi (1 - sigma/2) = {sector}"
            )));
        }
    }
    let eval = params.evaluator()?;
    Bicomplex::try_build(|r| {
        mellin_component(eval.component(r), sigma, zeta.component(r), lambda.component(r), spec, policy)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: f64) -> Bicomplex {
        Bicomplex::from_real(x)
    }

    #[test]
    fn closed_form_examples() {
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let v = mellin_closed(&p, &real(1.0), &real(0.5)).unwrap();
        assert!((v.z1().re - PI.sqrt()).abs() < 1e-14);
        let s = real(0.3);
        let g = mellin_closed(&p, &real(1.0), &s).unwrap();
        assert!((g.z1().re - special::gamma(0.3.into()).unwrap().re).abs() < 1e-13);
        let q = PrabhakarParams::real(1.0, 2.0, 1.0).unwrap();
        let w = mellin_closed(&q, &real(1.0), &real(0.5)).unwrap();
        assert!((w.z1().re - PI / special::gamma(1.5.into()).unwrap().re).abs() < 1e-13);
    }

    #[test]
    fn closed_form_guards() {
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        assert!(matches!(mellin_closed(&p, &real(1.0), &real(1.5)), Err(Error::Domain(_))));
        let cplx = PrabhakarParams::new(Bicomplex::new(1.0, 0.1, 0.0, 0.0), real(1.0), real(1.0)).unwrap();
        assert!(matches!(mellin_closed(&cplx, &real(1.0), &real(0.5)), Err(Error::Domain(_))));
        assert!(matches!(mellin_closed(&p, &Bicomplex::E1, &real(0.5)), Err(Error::NullCone(_))));
    }

    #[test]
    fn quadrature_needs_decaying_ray() {
        let pol = SeriesPolicy::default();
        let spec = QuadratureSpec::default();
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        // σ = 1: the integral diverges once |arg λ| reaches π/2
        let steep = Bicomplex::from_complex(Complex64::from_polar(1.0, 0.51 * PI));
        assert!(matches!(mellin_quadrature(&p, &steep, &real(0.5), &spec, &pol), Err(Error::Domain(_))));
        let tilted = Bicomplex::from_complex(Complex64::from_polar(1.3, 0.4 * PI));
        let q = mellin_quadrature(&p, &tilted, &real(0.5), &spec, &pol).unwrap();
        let want = mellin_closed(&p, &tilted, &real(0.5)).unwrap();
        assert!((q - want).max_norm() < 1e-8 * want.max_norm(), "{q} vs {want}");
    }

    #[test]
    fn quadrature_examples() {
        let pol = SeriesPolicy::default();
        let spec = QuadratureSpec::default();
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let v = mellin_quadrature(&p, &real(1.0), &real(0.5), &spec, &pol).unwrap();
        assert!((v.z1().re - PI.sqrt()).abs() < 1e-6);
        let q = PrabhakarParams::real(1.0, 2.0, 1.0).unwrap();
        let w = mellin_quadrature(&q, &real(1.0), &real(0.5), &spec, &pol).unwrap();
        let want = mellin_closed(&q, &real(1.0), &real(0.5)).unwrap();
        assert!((w - want).max_norm() < 1e-6 * want.max_norm(), "{w} vs {want}");
    }

    #[test]
    fn scaling_in_lambda() {
        let pol = SeriesPolicy::default();
        let spec = QuadratureSpec::default();
        let p = PrabhakarParams::real(1.0, 1.5, 1.7).unwrap();
        let s = Bicomplex::from_idempotent(Complex64::new(0.6, 0.2), Complex64::new(0.9, -0.1));
        let a = mellin_quadrature(&p, &real(0.8), &s, &spec, &pol).unwrap();
        let b = mellin_quadrature(&p, &real(1.6), &s, &spec, &pol).unwrap();
        let factor = real(2.0).pow(&(-s)).unwrap();
        assert!((b - factor * a).max_norm() < 1e-8 * a.max_norm());
    }
}
