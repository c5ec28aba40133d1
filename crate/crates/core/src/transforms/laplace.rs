//! Laplace transform of the Prabhakar kernel `t^{τ-1} E^δ_{σ,τ}(λ t^σ)`.

use num_complex::Complex64;

use crate::bicomplex::{cpow, Bicomplex, Hyperbolic};
use crate::error::{Error, Result};
use crate::prabhakar::PrabhakarParams;
use crate::quadrature::QuadratureSpec;
use crate::special::{ComplexPrabhakar, SeriesPolicy, ACCURACY_RADIUS};
use crate::transforms::{integrate_checked, Sample};

/// Checks the guards of the Laplace closed form.
pub fn laplace_guard(params: &PrabhakarParams, lambda: &Bicomplex, zeta: &Bicomplex) -> Result<()> {
    if !zeta.param_domain_ok() {
        return Err(Error::Domain(format!("|Im_j(zeta)| < Re(zeta) violated: zeta = {zeta}")));
    }
    if !params.tau().param_domain_ok() {
        return Err(Error::Domain(format!("|Im_j(tau)| < Re(tau) violated: tau = {}", params.tau())));
    }
    let ratio = *lambda * zeta.pow(&(-params.sigma()))?;
    if !ratio.j_modulus().strictly_less(&Hyperbolic::ONE) {
        return Err(Error::Domain(format!(
            "|lambda zeta^(-sigma)|_j < 1 violated: |.|_j = {}",
            ratio.j_modulus()
        )));
    }
    Ok(())
}

/// `∫_0^∞ e^{-ζt} t^{τ-1} E^δ_{σ,τ}(λ t^σ) dt = ζ^{-τ} (1 - λ ζ^{-σ})^{-δ}`.
///
/// This equals `ζ^{σδ-τ} (ζ^σ - λ)^{-δ}` whenever the principal branches
/// combine; the factored form is the one produced by summing the transformed
/// series termwise, so it is used for every admissible argument.
pub fn laplace_closed(params: &PrabhakarParams, lambda: &Bicomplex, zeta: &Bicomplex) -> Result<Bicomplex> {
    laplace_guard(params, lambda, zeta)?;
    let (sigma, tau, delta) = (params.sigma(), params.tau(), params.delta());
    Bicomplex::try_build(|r| {
        let z = zeta.component(r);
        let w = lambda.component(r) * cpow(z, -sigma.component(r))?;
        let base = Complex64::new(1.0, 0.0) - w;
        if base.norm() == 0.0 {
            return Err(Error::NullCone("zeta^sigma - lambda has a zero component".into()));
        }
        Ok(cpow(z, -tau.component(r))? * cpow(base, -delta.component(r))?)
    })
}

/// Upper limit for the Laplace integral of one component.
fn tail_cutoff(z: Complex64, lambda: Complex64, sigma: Complex64, tau: Complex64, abs_tol: f64) -> Result<f64> {
    // growth rate of E^δ_{σ,τ}(λ t^σ) is Re(λ^{1/σ})
    let growth = if lambda == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        cpow(lambda, sigma.inv())?.re.max(0.0)
    };
    let rate = z.re - growth;
    if !(rate > 0.0) {
        return Err(Error::QuadratureFailure {
            message: format!("integrand does not decay: Re(zeta) = {} vs growth {growth}", z.re),
            estimate: f64::INFINITY,
        });
    }
    let log_tol = (1.0 / abs_tol).ln();
    let t0 = (log_tol / rate).max(1.0);
    let t = (log_tol + (tau.re - 1.0).max(0.0) * t0.ln()) / rate;
    Ok(t.max(1.0))
}

fn laplace_component(
    f: &ComplexPrabhakar,
    z: Complex64,
    lambda: Complex64,
    spec: &QuadratureSpec,
    policy: &SeriesPolicy,
) -> Result<Complex64> {
    let (sigma, tau) = (f.sigma(), f.tau());
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("Re(zeta) > 0 violated: zeta = {z}")));
    }
    let t_max = match spec.tail_cutoff {
        Some(t) => t,
        None => tail_cutoff(z, lambda, sigma, tau, spec.abs_tol)?,
    };
    // the integrand may reach past the default series radius; each sample
    // is then accepted on its own error estimate
    let reach = lambda.norm() * t_max.powf(sigma.re);
    let radius = ACCURACY_RADIUS.max(1.01 * reach);
    let integrand = |t: f64| -> Result<Sample> {
        if t <= 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let lt = t.ln();
        let weight = (-z * t + (tau - 1.0) * lt).exp();
        let e = f.eval_within(lambda * (sigma * lt).exp(), policy, radius)?;
        Ok((weight * e.value, weight.norm() * e.abs_error))
    };
    let split = 1.0f64.min(t_max);
    let p = (tau.re < 1.0).then(|| 2.0 / tau.re);
    let head = integrate_checked(integrand, 0.0, split, p, spec)?;
    let tail = integrate_checked(integrand, split, t_max, None, spec)?;
    Ok(head + tail)
}

/// Componentwise quadrature of `∫_0^T e^{-ζ_r t} t^{τ_r-1} E^{δ_r}_{σ_r,τ_r}(λ_r t^{σ_r}) dt`.
pub fn laplace_quadrature(
    params: &PrabhakarParams,
    lambda: &Bicomplex,
    zeta: &Bicomplex,
    spec: &QuadratureSpec,
    policy: &SeriesPolicy,
) -> Result<Bicomplex> {
    spec.validate()?;
    let eval = params.evaluator()?;
    Bicomplex::try_build(|r| {
        laplace_component(eval.component(r), zeta.component(r), lambda.component(r), spec, policy)
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
        let v = laplace_closed(&p, &real(-0.5), &real(2.0)).unwrap();
        assert!((v.z1().re - 1.0 / 2.5).abs() < 1e-15);
        let q = PrabhakarParams::real(1.0, 1.0, 2.0).unwrap();
        let w = laplace_closed(&q, &real(-1.0), &real(2.0)).unwrap();
        assert!((w.z1().re - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn guard_rejections() {
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let err = laplace_closed(&p, &real(3.0), &real(2.0)).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("|lambda zeta^(-sigma)|_j")));
        let lam = Bicomplex::from_idempotent(0.5.into(), 2.0.into());
        assert!(laplace_closed(&p, &lam, &real(2.0)).is_err());
        let left = Bicomplex::new(1.0, 0.0, 0.0, 2.0);
        assert!(matches!(laplace_closed(&p, &real(0.1), &left), Err(Error::Domain(_))));
    }

    #[test]
    fn quadrature_examples() {
        let pol = SeriesPolicy::default();
        let spec = QuadratureSpec::default();
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let v = laplace_quadrature(&p, &real(-1.0), &real(2.0), &spec, &pol).unwrap();
        assert!((v.z1().re - 1.0 / 3.0).abs() < 1e-8);
        let c = PrabhakarParams::real(2.0, 1.0, 1.0).unwrap();
        let w = laplace_quadrature(&c, &real(-1.0), &real(1.0), &spec, &pol).unwrap();
        assert!((w.z1().re - 0.5).abs() < 1e-8, "{w}");
        let h = PrabhakarParams::real(0.8, 0.5, 1.3).unwrap();
        let lam = real(-0.7);
        let z = Bicomplex::from_idempotent(Complex64::new(1.5, 0.4), Complex64::new(2.0, -0.3));
        let closed = laplace_closed(&h, &lam, &z).unwrap();
        let quad = laplace_quadrature(&h, &lam, &z, &spec, &pol).unwrap();
        assert!((closed - quad).max_norm() < 1e-7 * (1.0 + closed.max_norm()));
    }
}
