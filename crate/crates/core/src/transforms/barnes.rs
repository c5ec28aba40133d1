//! Mellin-Barnes representation
//!
//! ```text
//! E^δ_{σ,τ}(λ) = 1/(2πi) ∫_{c-i∞}^{c+i∞} Γ(s) Γ(δ-s) / (Γ(δ) Γ(τ-σs)) (-λ)^{-s} ds
//! ```
//!
//! evaluated componentwise by the trapezoidal rule on the line `Re s = c`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bicomplex::Bicomplex;
use crate::error::{Error, Result};
use crate::prabhakar::PrabhakarParams;
use crate::special::{ln_gamma, SeriesPolicy};

/// Largest contour height tried before giving up.
const MAX_HEIGHT: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    /// Abscissa of the line; `None` uses `min_r Re(δ_r) / 2`.
    pub c: Option<f64>,
    /// Initial truncation height `Y`; grown until the integrand is negligible.
    pub height: f64,
    /// Minimum number of nodes on `[-Y, Y]`.
    pub nodes: usize,
    /// Absolute tolerance for the truncated tails.
    pub abs_tol: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self {
            c: None,
            height: 20.0,
            nodes: 256,
            abs_tol: 1e-12,
        }
    }
}

impl ContourSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 64 {
            return Err(Error::Contour(format!("nodes must be >= 64, got {}", self.nodes)));
        }
        if !(self.height > 0.0 && self.height.is_finite()) {
            return Err(Error::Contour(format!("height must be > 0, got {}", self.height)));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::Contour("abs_tol must be > 0".into()));
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Contour(format!("c must be > 0, got {c}")));
            }
        }
        Ok(())
    }
}

fn barnes_component(
    sigma: f64,
    tau: Complex64,
    delta: Complex64,
    lambda: Complex64,
    contour: &ContourSpec,
    policy: &SeriesPolicy,
    r: u8,
) -> Result<Complex64> {
    if !(delta.re > 0.0) {
        return Err(Error::Contour(format!("Re(delta_{r}) > 0 is needed to separate the poles")));
    }
    let c = contour.c.unwrap_or(0.5 * delta.re);
    if !(c > 0.0 && c < delta.re) {
        return Err(Error::Contour(format!(
            "0 < c < Re(delta_{r}) violated: c = {c}, delta_{r} = {delta}"
        )));
    }
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::Contour(format!("lambda_{r} = 0 has no Mellin-Barnes representation")));
    }
    let log_neg = (-lambda).ln();
    // |integrand| ~ exp(-rate |y|) along the line
    let rate = PI * (1.0 - 0.5 * sigma) - log_neg.im.abs();
    if !(rate > 0.0) {
        return Err(Error::Contour(format!(
            "|arg(-lambda_{r})| < pi (1 - sigma/2) violated: arg = {:.6}, bound = {:.6}",
            log_neg.im.abs(),
            PI * (1.0 - 0.5 * sigma)
        )));
    }
    let ln_gd = ln_gamma(delta)?;
    let integrand = |y: f64| -> Result<Complex64> {
        let s = Complex64::new(c, y);
        let lg = ln_gamma(s)? + ln_gamma(delta - s)? - ln_gd - s * log_neg;
        match ln_gamma(tau - s * sigma) {
            Ok(lt) => Ok((lg - lt).exp() / (2.0 * PI)),
            Err(Error::Pole(_)) => Ok(Complex64::new(0.0, 0.0)),
            Err(e) => Err(e),
        }
    };
    // analytic in |Im y| < dist; trapezoid error ~ exp(-2π dist / h)
    let dist = c.min(delta.re - c);
    let h = (dist / 6.0).min(2.0 * contour.height / contour.nodes as f64);
    let mut sum = integrand(0.0)?;
    let mut k = 0usize;
    let mut height = contour.height;
    loop {
        let k_end = (height / h).ceil() as usize;
        let mut outer = 0.0f64;
        while k < k_end {
            k += 1;
            let y = k as f64 * h;
            let (up, down) = (integrand(y)?, integrand(-y)?);
            outer = up.norm() + down.norm();
            sum += up + down;
        }
        // remaining mass beyond the outermost node
        let tail = outer / rate;
        if tail < contour.abs_tol.max(policy.rel_tol * (sum * h).norm()) {
            break;
        }
        height *= 2.0;
        if height > MAX_HEIGHT {
            return Err(Error::Contour(format!(
                "contour truncation did not converge (tail estimate {tail:e})"
            )));
        }
    }
    Ok(sum * h)
}

/// `E^δ_{σ,τ}(λ)` from the Mellin-Barnes integral, for real `σ`.
pub fn mellin_barnes_eval(
    params: &PrabhakarParams,
    lambda: &Bicomplex,
    contour: &ContourSpec,
    policy: &SeriesPolicy,
) -> Result<Bicomplex> {
    contour.validate()?;
    let sigma = params
        .sigma_real()
        .ok_or_else(|| Error::Domain(format!("sigma must be a positive real, got {}", params.sigma())))?;
    let (tau, delta) = (params.tau(), params.delta());
    let contour = &ContourSpec {
        c: contour.c.or(Some(0.5 * delta.z1().re.min(delta.z2().re))),
        ..*contour
    };
    Bicomplex::try_build(|r| {
        barnes_component(
            sigma,
            tau.component(r),
            delta.component(r),
            lambda.component(r),
            contour,
            policy,
            r,
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prabhakar::prabhakar;

    fn real(x: f64) -> Bicomplex {
        Bicomplex::from_real(x)
    }

    #[test]
    fn examples() {
        let pol = SeriesPolicy::default();
        let spec = ContourSpec::default();
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let v = mellin_barnes_eval(&p, &real(-0.5), &spec, &pol).unwrap();
        assert!((v.z1().re - (-0.5f64).exp()).abs() < 1e-6);
        let q = PrabhakarParams::real(1.0, 1.0, 2.0).unwrap();
        let w = mellin_barnes_eval(&q, &real(-1.0), &spec, &pol).unwrap();
        assert!(w.max_norm() < 1e-6);
    }

    #[test]
    fn zero_decay_rate_is_rejected() {
        let pol = SeriesPolicy::default();
        let p = PrabhakarParams::real(2.0, 1.0, 1.0).unwrap();
        let err = mellin_barnes_eval(&p, &real(-1.0), &ContourSpec::default(), &pol).unwrap_err();
        assert!(matches!(err.root(), Error::Contour(_)));
    }

    #[test]
    fn complex_parameters_match_series() {
        let pol = SeriesPolicy::default();
        let delta = Bicomplex::from_idempotent(Complex64::new(1.4, 0.3), Complex64::new(0.8, -0.2));
        let tau = Bicomplex::from_idempotent(Complex64::new(1.2, -0.5), Complex64::new(2.0, 0.4));
        let p = PrabhakarParams::new(real(0.7), tau, delta).unwrap();
        let lam = Bicomplex::from_idempotent(Complex64::new(-1.2, 0.5), Complex64::new(0.3, -1.1));
        let mb = mellin_barnes_eval(&p, &lam, &ContourSpec::default(), &pol).unwrap();
        let series = prabhakar(&p, &lam, &pol).unwrap();
        assert!((mb - series).max_norm() < 1e-6, "{mb} vs {series}");
    }

    #[test]
    fn bad_contour_abscissa() {
        let pol = SeriesPolicy::default();
        let p = PrabhakarParams::real(1.0, 1.0, 1.0).unwrap();
        let spec = ContourSpec {
            c: Some(1.5),
            ..Default::default()
        };
        let err = mellin_barnes_eval(&p, &real(-0.5), &spec, &pol).unwrap_err();
        assert!(matches!(err.root(), Error::Contour(_)));
        let few = ContourSpec {
            nodes: 10,
            ..Default::default()
        };
        assert!(matches!(mellin_barnes_eval(&p, &real(-0.5), &few, &pol), Err(Error::Contour(_))));
    }
}
