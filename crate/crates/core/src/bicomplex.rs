//! Bicomplex and hyperbolic arithmetic.
//!
//! A bicomplex number `ζ = x0 + i1 x1 + i2 x2 + j x3` (with `j = i1 i2`,
//! `i1² = i2² = -1`, `j² = 1`) is stored in its idempotent form
//! `ζ = ζ1 e1 + ζ2 e2`, where `e1 = (1 + j)/2`, `e2 = (1 - j)/2` and
//!
//! ```text
//! ζ1 = (x0 + x3) + i (x1 - x2)
//! ζ2 = (x0 - x3) + i (x1 + x2)
//! ```
//!
//! Every operation in this crate acts componentwise on `(ζ1, ζ2)`, so the
//! pair is the canonical representation and the four real coordinates are
//! derived on demand. `compose(split(ζ))` and `split(compose(p))` are
//! therefore exact.
//!
//! A component whose modulus is below [`NULL_CONE_THRESHOLD`] is treated as
//! zero when deciding invertibility.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Components with modulus below this count as zero for null-cone detection.
pub const NULL_CONE_THRESHOLD: f64 = 1e-300;

/// The two idempotent projections `(P1(ζ), P2(ζ))`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexPair {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl ComplexPair {
    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }
}

#[derive(Clone, Copy, PartialEq, Default)]
pub struct Bicomplex {
    pair: ComplexPair,
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Bicomplex {
    pub const ZERO: Bicomplex = Bicomplex::from_idempotent(c(0.0, 0.0), c(0.0, 0.0));
    pub const ONE: Bicomplex = Bicomplex::from_idempotent(c(1.0, 0.0), c(1.0, 0.0));
    pub const I1: Bicomplex = Bicomplex::from_idempotent(c(0.0, 1.0), c(0.0, 1.0));
    pub const I2: Bicomplex = Bicomplex::from_idempotent(c(0.0, -1.0), c(0.0, 1.0));
    pub const J: Bicomplex = Bicomplex::from_idempotent(c(1.0, 0.0), c(-1.0, 0.0));
    pub const E1: Bicomplex = Bicomplex::from_idempotent(c(1.0, 0.0), c(0.0, 0.0));
    pub const E2: Bicomplex = Bicomplex::from_idempotent(c(0.0, 0.0), c(1.0, 0.0));

    pub const fn from_idempotent(z1: Complex64, z2: Complex64) -> Self {
        Self {
            pair: ComplexPair { z1, z2 },
        }
    }

    /// Builds `x0 + i1 x1 + i2 x2 + j x3`.
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self::from_idempotent(c(x0 + x3, x1 - x2), c(x0 - x3, x1 + x2))
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_idempotent(c(x, 0.0), c(x, 0.0))
    }

    /// Embeds a complex number of `C(i1)`.
    pub fn from_complex(z: Complex64) -> Self {
        Self::from_idempotent(z, z)
    }

    /// `w1 + i2 w2` with `w1, w2` in `C(i1)`.
    pub fn from_w(w1: Complex64, w2: Complex64) -> Self {
        let i = Complex64::i();
        Self::from_idempotent(w1 - i * w2, w1 + i * w2)
    }

    /// Inverse of [`Bicomplex::from_w`]: `(w1, w2)` with `ζ = w1 + i2 w2`.
    pub fn w(&self) -> (Complex64, Complex64) {
        let ComplexPair { z1, z2 } = self.pair;
        ((z1 + z2) * 0.5, (z2 - z1) * Complex64::new(0.0, -0.5))
    }

    pub fn split(&self) -> ComplexPair {
        self.pair
    }

    pub fn compose(pair: ComplexPair) -> Self {
        Self { pair }
    }

    #[inline]
    pub fn z1(&self) -> Complex64 {
        self.pair.z1
    }

    #[inline]
    pub fn z2(&self) -> Complex64 {
        self.pair.z2
    }

    /// Component `r` (1 or 2).
    pub fn component(&self, r: u8) -> Complex64 {
        match r {
            1 => self.pair.z1,
            2 => self.pair.z2,
            _ => panic!("idempotent component index must be 1 or 2, got {r}"),
        }
    }

    /// Real coordinates `[x0, x1, x2, x3]`.
    pub fn reals(&self) -> [f64; 4] {
        let ComplexPair { z1, z2 } = self.pair;
        [
            0.5 * (z1.re + z2.re),
            0.5 * (z1.im + z2.im),
            0.5 * (z2.im - z1.im),
            0.5 * (z1.re - z2.re),
        ]
    }

    /// `Re(ζ) = x0`.
    pub fn re(&self) -> f64 {
        self.reals()[0]
    }

    /// `Im_j(ζ) = x3`.
    pub fn im_j(&self) -> f64 {
        self.reals()[3]
    }

    pub fn map(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        Self::from_idempotent(f(self.pair.z1), f(self.pair.z2))
    }

    /// Applies a fallible map per component and labels errors with the component index.
    pub fn try_map(&self, mut f: impl FnMut(Complex64) -> Result<Complex64>) -> Result<Self> {
        let z1 = f(self.pair.z1).map_err(|e| e.in_component(1))?;
        let z2 = f(self.pair.z2).map_err(|e| e.in_component(2))?;
        Ok(Self::from_idempotent(z1, z2))
    }

    /// Fallible per-component computation with access to the component index.
    pub fn try_build(mut f: impl FnMut(u8) -> Result<Complex64>) -> Result<Self> {
        let z1 = f(1).map_err(|e| e.in_component(1))?;
        let z2 = f(2).map_err(|e| e.in_component(2))?;
        Ok(Self::from_idempotent(z1, z2))
    }

    pub fn is_zero(&self) -> bool {
        self.pair.z1 == Complex64::new(0.0, 0.0) && self.pair.z2 == Complex64::new(0.0, 0.0)
    }

    /// True when `ζ` lies in the null cone (a non-zero zero divisor).
    pub fn is_zero_divisor(&self) -> bool {
        !self.is_zero() && !self.is_invertible()
    }

    pub fn is_invertible(&self) -> bool {
        self.pair.z1.norm() >= NULL_CONE_THRESHOLD && self.pair.z2.norm() >= NULL_CONE_THRESHOLD
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_invertible() {
            return Err(Error::NullCone(format!("{self} has no inverse")));
        }
        Ok(self.map(|z| z.inv()))
    }

    pub fn try_div(&self, rhs: &Bicomplex) -> Result<Self> {
        Ok(*self * rhs.inverse()?)
    }

    /// Principal componentwise power `ζ^w`: `(ζ1^{w1}, ζ2^{w2})`.
    ///
    /// A zero component raised to an exponent with positive real part gives
    /// zero; an exponent component exactly zero gives one. Any other zero
    /// component is a [`Error::NullCone`].
    pub fn pow(&self, w: &Bicomplex) -> Result<Self> {
        Self::try_build(|r| cpow(self.component(r), w.component(r)))
    }

    pub fn powf(&self, w: f64) -> Result<Self> {
        self.pow(&Bicomplex::from_real(w))
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        if n >= 0 {
            Ok(self.map(|z| z.powi(n)))
        } else {
            self.inverse().map(|inv| inv.map(|z| z.powi(-n)))
        }
    }

    pub fn exp(&self) -> Self {
        self.map(|z| z.exp())
    }

    /// Principal componentwise logarithm.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_invertible() {
            return Err(Error::NullCone(format!("logarithm of {self}")));
        }
        Ok(self.map(|z| z.ln()))
    }

    pub fn j_modulus(&self) -> Hyperbolic {
        Hyperbolic::from_idempotent(self.pair.z1.norm(), self.pair.z2.norm())
    }

    /// `|Im_j(ζ)| < Re(ζ)`, equivalently `Re ζ1 > 0` and `Re ζ2 > 0`.
    pub fn param_domain_ok(&self) -> bool {
        self.param_domain_ok_shifted(0.0)
    }

    /// `|Im_j(ζ)| < Re(ζ) - n`, equivalently `Re ζ1 > n` and `Re ζ2 > n`.
    pub fn param_domain_ok_shifted(&self, n: f64) -> bool {
        self.pair.z1.re > n && self.pair.z2.re > n
    }

    pub fn is_finite(&self) -> bool {
        self.pair.z1.is_finite() && self.pair.z2.is_finite()
    }

    /// Both components real (the value is a hyperbolic number).
    pub fn is_hyperbolic(&self) -> bool {
        self.pair.z1.im == 0.0 && self.pair.z2.im == 0.0
    }

    /// `x1 = x2 = x3 = 0`.
    pub fn as_real(&self) -> Option<f64> {
        if self.is_hyperbolic() && self.pair.z1.re == self.pair.z2.re {
            Some(self.pair.z1.re)
        } else {
            None
        }
    }

    /// Largest component modulus.
    pub fn max_norm(&self) -> f64 {
        self.pair.z1.norm().max(self.pair.z2.norm())
    }
}

/// Principal complex power with the zero-base conventions of [`Bicomplex::pow`].
pub fn cpow(base: Complex64, exponent: Complex64) -> Result<Complex64> {
    if exponent == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if base.norm() < NULL_CONE_THRESHOLD {
        if exponent.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::NullCone(format!(
            "zero component raised to exponent {exponent} with non-positive real part"
        )));
    }
    if exponent.im == 0.0 && exponent.re.fract() == 0.0 && exponent.re.abs() <= 64.0 {
        return Ok(base.powi(exponent.re as i32));
    }
    Ok((exponent * base.ln()).exp())
}

impl fmt::Debug for Bicomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ComplexPair { z1, z2 } = self.pair;
        write!(f, "Bicomplex[{}, {}; {}, {}]", z1.re, z1.im, z2.re, z2.im)
    }
}

/// Writes the four-real text form `x0,x1,x2,x3`.
impl fmt::Display for Bicomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x0, x1, x2, x3] = self.reals();
        write!(f, "{x0},{x1},{x2},{x3}")
    }
}

fn parse_reals(s: &str, expected: usize) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != expected {
        return Err(Error::Parse(format!(
            "expected {expected} comma-separated reals, got {:?}",
            s
        )));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|e| Error::Parse(format!("{p:?}: {e}")))
        })
        .collect()
}

/// Parses `x0,x1,x2,x3` or the idempotent form `[re1,im1;re2,im2]`.
impl FromStr for Bicomplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated idempotent form {s:?}")))?;
            let (a, b) = inner
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("missing ';' in {s:?}")))?;
            let a = parse_reals(a, 2)?;
            let b = parse_reals(b, 2)?;
            return Ok(Bicomplex::from_idempotent(c(a[0], a[1]), c(b[0], b[1])));
        }
        let x = parse_reals(s, 4)?;
        Ok(Bicomplex::new(x[0], x[1], x[2], x[3]))
    }
}

#[derive(Serialize, Deserialize)]
struct BicomplexJson {
    x: [f64; 4],
    e: [[f64; 2]; 2],
}

impl Serialize for Bicomplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let ComplexPair { z1, z2 } = self.pair;
        BicomplexJson {
            x: self.reals(),
            e: [[z1.re, z1.im], [z2.re, z2.im]],
        }
        .serialize(serializer)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BicomplexRepr {
    Text(String),
    Reals([f64; 4]),
    Real(f64),
    Idempotent { e: [[f64; 2]; 2] },
    Coordinates { x: [f64; 4] },
}

/// Accepts the text forms, a bare number, a four-element array, or an object
/// carrying `e` (idempotent components, preferred) or `x`.
impl<'de> Deserialize<'de> for Bicomplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match BicomplexRepr::deserialize(deserializer)? {
            BicomplexRepr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            BicomplexRepr::Reals([x0, x1, x2, x3]) => Ok(Bicomplex::new(x0, x1, x2, x3)),
            BicomplexRepr::Real(x) => Ok(Bicomplex::from_real(x)),
            BicomplexRepr::Idempotent { e } => Ok(Bicomplex::from_idempotent(
                c(e[0][0], e[0][1]),
                c(e[1][0], e[1][1]),
            )),
            BicomplexRepr::Coordinates { x } => Ok(Bicomplex::new(x[0], x[1], x[2], x[3])),
        }
    }
}

impl Add for Bicomplex {
    type Output = Bicomplex;
    fn add(self, rhs: Bicomplex) -> Bicomplex {
        Bicomplex::from_idempotent(self.pair.z1 + rhs.pair.z1, self.pair.z2 + rhs.pair.z2)
    }
}

impl Sub for Bicomplex {
    type Output = Bicomplex;
    fn sub(self, rhs: Bicomplex) -> Bicomplex {
        Bicomplex::from_idempotent(self.pair.z1 - rhs.pair.z1, self.pair.z2 - rhs.pair.z2)
    }
}

impl Mul for Bicomplex {
    type Output = Bicomplex;
    fn mul(self, rhs: Bicomplex) -> Bicomplex {
        Bicomplex::from_idempotent(self.pair.z1 * rhs.pair.z1, self.pair.z2 * rhs.pair.z2)
    }
}

impl Mul<f64> for Bicomplex {
    type Output = Bicomplex;
    fn mul(self, rhs: f64) -> Bicomplex {
        self.map(|z| z * rhs)
    }
}

impl Mul<Bicomplex> for f64 {
    type Output = Bicomplex;
    fn mul(self, rhs: Bicomplex) -> Bicomplex {
        rhs * self
    }
}

impl Add<f64> for Bicomplex {
    type Output = Bicomplex;
    fn add(self, rhs: f64) -> Bicomplex {
        self.map(|z| z + rhs)
    }
}

impl Sub<f64> for Bicomplex {
    type Output = Bicomplex;
    fn sub(self, rhs: f64) -> Bicomplex {
        self.map(|z| z - rhs)
    }
}

impl Neg for Bicomplex {
    type Output = Bicomplex;
    fn neg(self) -> Bicomplex {
        self.map(|z| -z)
    }
}

impl AddAssign for Bicomplex {
    fn add_assign(&mut self, rhs: Bicomplex) {
        *self = *self + rhs;
    }
}

impl SubAssign for Bicomplex {
    fn sub_assign(&mut self, rhs: Bicomplex) {
        *self = *self - rhs;
    }
}

impl MulAssign for Bicomplex {
    fn mul_assign(&mut self, rhs: Bicomplex) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Bicomplex {
    fn sum<I: Iterator<Item = Bicomplex>>(iter: I) -> Bicomplex {
        iter.fold(Bicomplex::ZERO, |a, b| a + b)
    }
}

/// A hyperbolic number `u + j v`, stored by its idempotent components
/// `(u + v, u - v)`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Hyperbolic {
    p1: f64,
    p2: f64,
}

impl Hyperbolic {
    pub const ZERO: Hyperbolic = Hyperbolic { p1: 0.0, p2: 0.0 };
    pub const ONE: Hyperbolic = Hyperbolic { p1: 1.0, p2: 1.0 };

    pub fn new(u: f64, v: f64) -> Self {
        Self { p1: u + v, p2: u - v }
    }

    pub const fn from_idempotent(p1: f64, p2: f64) -> Self {
        Self { p1, p2 }
    }

    pub fn u(&self) -> f64 {
        0.5 * (self.p1 + self.p2)
    }

    pub fn v(&self) -> f64 {
        0.5 * (self.p1 - self.p2)
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn component(&self, r: u8) -> f64 {
        match r {
            1 => self.p1,
            2 => self.p2,
            _ => panic!("idempotent component index must be 1 or 2, got {r}"),
        }
    }

    /// Membership in `D⁺`: both idempotent components nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.p1 >= 0.0 && self.p2 >= 0.0
    }

    /// Both idempotent components strictly positive.
    pub fn is_positive(&self) -> bool {
        self.p1 > 0.0 && self.p2 > 0.0
    }

    /// `self ≺ q` in the partial order: `q - self ∈ D⁺ \ {0}`.
    pub fn precedes(&self, q: &Hyperbolic) -> bool {
        let d = *q - *self;
        d.is_nonnegative() && (d.p1 != 0.0 || d.p2 != 0.0)
    }

    /// Strict componentwise comparison used by convergence guards.
    pub fn strictly_less(&self, q: &Hyperbolic) -> bool {
        (*q - *self).is_positive()
    }

    pub fn to_bicomplex(&self) -> Bicomplex {
        Bicomplex::from_idempotent(c(self.p1, 0.0), c(self.p2, 0.0))
    }
}

impl fmt::Debug for Hyperbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hyperbolic({} + j{})", self.u(), self.v())
    }
}

/// Text form `u,v` meaning `u + j v`.
impl fmt::Display for Hyperbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.u(), self.v())
    }
}

impl FromStr for Hyperbolic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let x = parse_reals(s.trim(), 2)?;
        Ok(Hyperbolic::new(x[0], x[1]))
    }
}

impl Add for Hyperbolic {
    type Output = Hyperbolic;
    fn add(self, rhs: Hyperbolic) -> Hyperbolic {
        Hyperbolic::from_idempotent(self.p1 + rhs.p1, self.p2 + rhs.p2)
    }
}

impl Sub for Hyperbolic {
    type Output = Hyperbolic;
    fn sub(self, rhs: Hyperbolic) -> Hyperbolic {
        Hyperbolic::from_idempotent(self.p1 - rhs.p1, self.p2 - rhs.p2)
    }
}

impl Mul for Hyperbolic {
    type Output = Hyperbolic;
    fn mul(self, rhs: Hyperbolic) -> Hyperbolic {
        Hyperbolic::from_idempotent(self.p1 * rhs.p1, self.p2 * rhs.p2)
    }
}

impl From<Hyperbolic> for Bicomplex {
    fn from(h: Hyperbolic) -> Bicomplex {
        h.to_bicomplex()
    }
}

pub fn split(z: &Bicomplex) -> ComplexPair {
    z.split()
}

pub fn compose(p: ComplexPair) -> Bicomplex {
    Bicomplex::compose(p)
}

pub fn mul(a: &Bicomplex, b: &Bicomplex) -> Bicomplex {
    *a * *b
}

pub fn inverse(z: &Bicomplex) -> Result<Bicomplex> {
    z.inverse()
}

pub fn power(z: &Bicomplex, w: &Bicomplex) -> Result<Bicomplex> {
    z.pow(w)
}

pub fn j_modulus(z: &Bicomplex) -> Hyperbolic {
    z.j_modulus()
}

pub fn hyperbolic_strictly_less(p: &Hyperbolic, q: &Hyperbolic) -> bool {
    p.strictly_less(q)
}

pub fn param_domain_ok(z: &Bicomplex) -> bool {
    z.param_domain_ok()
}
