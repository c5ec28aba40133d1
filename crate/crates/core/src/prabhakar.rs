//! The bicomplex Prabhakar function `E^δ_{σ,τ}(ζ)` and its identities.
//!
//! Every bicomplex quantity is handled through its idempotent components:
//! `E^δ_{σ,τ}(ζ) = E^{δ1}_{σ1,τ1}(ζ1) e1 + E^{δ2}_{σ2,τ2}(ζ2) e2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bicomplex::Bicomplex;
use crate::error::{Error, Result};
use crate::special::{self, ComplexPrabhakar, SeriesPolicy};

/// Validated parameter triple `(σ, τ, δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct PrabhakarParams {
    sigma: Bicomplex,
    tau: Bicomplex,
    delta: Bicomplex,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    sigma: Bicomplex,
    tau: Bicomplex,
    delta: Bicomplex,
}

impl TryFrom<RawParams> for PrabhakarParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        Self::new(raw.sigma, raw.tau, raw.delta)
    }
}

impl From<PrabhakarParams> for RawParams {
    fn from(p: PrabhakarParams) -> Self {
        RawParams {
            sigma: p.sigma,
            tau: p.tau,
            delta: p.delta,
        }
    }
}

impl PrabhakarParams {
    /// Requires `|Im_j(σ)| < Re(σ)`, `|Im_j(τ)| < Re(τ)` and finite `δ`.
    pub fn new(sigma: Bicomplex, tau: Bicomplex, delta: Bicomplex) -> Result<Self> {
        if !sigma.is_finite() || !tau.is_finite() || !delta.is_finite() {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        if !sigma.param_domain_ok() {
            return Err(Error::Domain(format!("|Im_j(sigma)| < Re(sigma) violated: sigma = {sigma}")));
        }
        if !tau.param_domain_ok() {
            return Err(Error::Domain(format!("|Im_j(tau)| < Re(tau) violated: tau = {tau}")));
        }
        if delta.is_zero_divisor() {
            log::info!("delta = {delta} has a zero component; that component reduces to 1/Gamma(tau_r)");
        }
        Ok(Self { sigma, tau, delta })
    }

    pub fn real(sigma: f64, tau: f64, delta: f64) -> Result<Self> {
        Self::new(Bicomplex::from_real(sigma), Bicomplex::from_real(tau), Bicomplex::from_real(delta))
    }

    pub fn sigma(&self) -> Bicomplex {
        self.sigma
    }

    pub fn tau(&self) -> Bicomplex {
        self.tau
    }

    pub fn delta(&self) -> Bicomplex {
        self.delta
    }

    /// True when `δ` has a vanishing idempotent component.
    pub fn delta_has_zero_component(&self) -> bool {
        !self.delta.is_invertible()
    }

    /// `σ` as a positive real, if it is one.
    pub fn sigma_real(&self) -> Option<f64> {
        self.sigma.as_real().filter(|s| *s > 0.0)
    }

    pub fn evaluator(&self) -> Result<BicomplexPrabhakar> {
        BicomplexPrabhakar::new(self.sigma, self.tau, self.delta)
    }
}

/// A componentwise evaluator with cached series coefficients. The `τ`
/// parameter is not restricted here, so shifted parameters such as `τ - n`
/// can be evaluated through the reciprocal gamma function.
#[derive(Debug, Clone)]
pub struct BicomplexPrabhakar {
    parts: [ComplexPrabhakar; 2],
}

impl BicomplexPrabhakar {
    pub fn new(sigma: Bicomplex, tau: Bicomplex, delta: Bicomplex) -> Result<Self> {
        let part = |r: u8| {
            ComplexPrabhakar::new(sigma.component(r), tau.component(r), delta.component(r))
                .map_err(|e| e.in_component(r))
        };
        Ok(Self {
            parts: [part(1)?, part(2)?],
        })
    }

    /// Scalar evaluator for component `r` (1 or 2).
    pub fn component(&self, r: u8) -> &ComplexPrabhakar {
        &self.parts[usize::from(r - 1)]
    }

    pub fn eval(&self, zeta: &Bicomplex, policy: &SeriesPolicy) -> Result<Bicomplex> {
        Bicomplex::try_build(|r| self.component(r).value(zeta.component(r), policy))
    }
}

fn evaluate(sigma: Bicomplex, tau: Bicomplex, delta: Bicomplex, zeta: &Bicomplex, policy: &SeriesPolicy) -> Result<Bicomplex> {
    BicomplexPrabhakar::new(sigma, tau, delta)?.eval(zeta, policy)
}

/// `E^δ_{σ,τ}(ζ)`.
pub fn prabhakar(params: &PrabhakarParams, zeta: &Bicomplex, policy: &SeriesPolicy) -> Result<Bicomplex> {
    evaluate(params.sigma, params.tau, params.delta, zeta, policy)
}

/// Componentwise `Γ(ζ)`.
pub fn gamma_bicomplex(zeta: &Bicomplex) -> Result<Bicomplex> {
    zeta.try_map(special::gamma)
}

/// Componentwise Pochhammer symbol `(δ)_n`.
pub fn pochhammer_bicomplex(delta: &Bicomplex, n: usize) -> Bicomplex {
    delta.map(|d| special::pochhammer(d, n))
}

/// `dⁿ/dζⁿ E^δ_{σ,τ}(ζ) = (δ)_n E^{δ+n}_{σ,τ+nσ}(ζ)`.
pub fn derivative(params: &PrabhakarParams, zeta: &Bicomplex, n: usize, policy: &SeriesPolicy) -> Result<Bicomplex> {
    let nf = n as f64;
    let shifted = evaluate(params.sigma, params.tau + params.sigma * nf, params.delta + nf, zeta, policy)?;
    Ok(pochhammer_bicomplex(&params.delta, n) * shifted)
}

/// The kernel `ζ^{τ-1} E^δ_{σ,τ}(λ ζ^σ)`.
pub fn kernel(params: &PrabhakarParams, lambda: &Bicomplex, zeta: &Bicomplex, policy: &SeriesPolicy) -> Result<Bicomplex> {
    kernel_derivative(params, lambda, zeta, 0, policy)
}

/// `dⁿ/dζⁿ [ζ^{τ-1} E^δ_{σ,τ}(λ ζ^σ)] = ζ^{τ-n-1} E^δ_{σ,τ-n}(λ ζ^σ)`.
pub fn kernel_derivative(
    params: &PrabhakarParams,
    lambda: &Bicomplex,
    zeta: &Bicomplex,
    n: usize,
    policy: &SeriesPolicy,
) -> Result<Bicomplex> {
    let nf = n as f64;
    if !params.tau.param_domain_ok_shifted(nf) {
        return Err(Error::Domain(format!(
            "|Im_j(tau)| < Re(tau) - {n} violated: tau = {}",
            params.tau
        )));
    }
    if !zeta.is_invertible() {
        return Err(Error::NullCone(format!("zeta = {zeta} is not invertible")));
    }
    let arg = *lambda * zeta.pow(&params.sigma)?;
    let e = evaluate(params.sigma, params.tau - nf, params.delta, &arg, policy)?;
    Ok(zeta.pow(&(params.tau - (nf + 1.0)))? * e)
}

/// Residuals (left minus right) of the two recurrence identities
///
/// ```text
/// (i)  ζ E^δ_{σ,σ+τ}(ζ) = E^δ_{σ,τ}(ζ) - E^{δ-1}_{σ,τ}(ζ)
/// (ii) (τ - σδ - 1) E^δ_{σ,τ}(ζ) = E^δ_{σ,τ-1}(ζ) - σδ E^{δ+1}_{σ,τ}(ζ)
/// ```
///
/// Identity (ii) needs `|Im_j(τ)| < Re(τ) - 1`.
pub fn recurrence_residuals(
    params: &PrabhakarParams,
    zeta: &Bicomplex,
    policy: &SeriesPolicy,
) -> Result<(Bicomplex, Bicomplex)> {
    if !params.tau.param_domain_ok_shifted(1.0) {
        return Err(Error::Domain(format!(
            "|Im_j(tau)| < Re(tau) - 1 violated: tau = {}",
            params.tau
        )));
    }
    let PrabhakarParams { sigma, tau, delta } = *params;
    let e = evaluate(sigma, tau, delta, zeta, policy)?;
    let first = {
        let lhs = *zeta * evaluate(sigma, sigma + tau, delta, zeta, policy)?;
        let rhs = e - evaluate(sigma, tau, delta - 1.0, zeta, policy)?;
        lhs - rhs
    };
    let second = {
        let lhs = (tau - sigma * delta - 1.0) * e;
        let rhs = evaluate(sigma, tau - 1.0, delta, zeta, policy)?
            - sigma * delta * evaluate(sigma, tau, delta + 1.0, zeta, policy)?;
        lhs - rhs
    };
    Ok((first, second))
}

/// Largest violation of the bicomplex Cauchy-Riemann equations
/// `∂f1/∂z1 = ∂f2/∂z2`, `∂f2/∂z1 = -∂f1/∂z2` for `f = E^δ_{σ,τ}` at
/// `ζ = z1 + i2 z2`, with `f = f1 + i2 f2`, from central differences of step `h`.
pub fn cauchy_riemann_residual(
    params: &PrabhakarParams,
    z1: Complex64,
    z2: Complex64,
    h: f64,
    policy: &SeriesPolicy,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("step h must be positive, got {h}")));
    }
    let f = params.evaluator()?;
    let at = |w1: Complex64, w2: Complex64| -> Result<(Complex64, Complex64)> {
        Ok(f.eval(&Bicomplex::from_w(w1, w2), policy)?.w())
    };
    let (p1, p2) = at(z1 + h, z2)?;
    let (m1, m2) = at(z1 - h, z2)?;
    let (q1, q2) = at(z1, z2 + h)?;
    let (n1, n2) = at(z1, z2 - h)?;
    let d11 = (p1 - m1) / (2.0 * h);
    let d21 = (p2 - m2) / (2.0 * h);
    let d12 = (q1 - n1) / (2.0 * h);
    let d22 = (q2 - n2) / (2.0 * h);
    Ok((d11 - d22).norm().max((d21 + d12).norm()))
}

/// `∫_0^ζ t^{τ-1} E^δ_{σ,τ}(λ t^σ) dt = ζ^τ E^δ_{σ,τ+1}(λ ζ^σ)`, the integral
/// taken componentwise along the segments `0 → ζ_r`.
pub fn kernel_integral(
    params: &PrabhakarParams,
    lambda: &Bicomplex,
    zeta: &Bicomplex,
    policy: &SeriesPolicy,
) -> Result<Bicomplex> {
    if !params.delta.param_domain_ok() {
        return Err(Error::Domain(format!(
            "|Im_j(delta)| < Re(delta) violated: delta = {}",
            params.delta
        )));
    }
    let arg = *lambda * zeta.pow(&params.sigma)?;
    let e = evaluate(params.sigma, params.tau + 1.0, params.delta, &arg, policy)?;
    Ok(zeta.pow(&params.tau)? * e)
}
