//! Minimal double-double arithmetic (about 106 bits of significand), used to
//! sum alternating series through term ratios, with just enough elementary
//! functions for a double-double log-gamma.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn scale(self, x: f64) -> Dd {
        self * Dd::from_f64(x)
    }

    /// `self * 2^n`, exact away from overflow.
    fn ldexp(self, n: i32) -> Dd {
        let f = 2f64.powi(n);
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::from_f64(0.0);
        }
        let k = (self.hi / LN2.hi).round();
        // |r| <= ln 2 / 2^10 keeps the Taylor series short
        let r = (self - LN2.scale(k)).ldexp(-9);
        let mut term = r;
        let mut sum = r;
        for n in 2..=12 {
            term = term * r / Dd::from_f64(n as f64);
            sum = sum + term;
        }
        // e^{2r} - 1 = (e^r - 1)(e^r + 1)
        for _ in 0..9 {
            sum = sum.ldexp(1) + sum * sum;
        }
        (sum + Dd::from_f64(1.0)).ldexp(k as i32)
    }

    /// Natural log of a positive value, by Newton steps on `exp`.
    pub fn ln(self) -> Dd {
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::from_f64(1.0);
        }
        y
    }

    pub fn sin_cos(self) -> (Dd, Dd) {
        let j = (self.hi / FRAC_PI_2.hi).round();
        let r = self - FRAC_PI_2.scale(j);
        let r2 = r * r;
        let (mut s, mut c) = (r, Dd::from_f64(1.0));
        let (mut ts, mut tc) = (r, Dd::from_f64(1.0));
        for n in 1..=14 {
            let n2 = 2.0 * n as f64;
            ts = -(ts * r2) / Dd::from_f64(n2 * (n2 + 1.0));
            tc = -(tc * r2) / Dd::from_f64(n2 * (n2 - 1.0));
            s = s + ts;
            c = c + tc;
        }
        match (j as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    fn sqr(self) -> Dd {
        self * self
    }
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};
const FRAC_PI_2: Dd = Dd {
    hi: std::f64::consts::FRAC_PI_2,
    lo: 6.123233995736766e-17,
};
const HALF_LN_2PI: Dd = Dd {
    hi: 0.9189385332046728,
    lo: -3.8782941580672414e-17,
};

/// `B_{2j} / (2j (2j-1))` as exact fractions.
const STIRLING: [(f64, f64); 12] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360360.0),
    (1.0, 156.0),
    (-3617.0, 122400.0),
    (43867.0, 244188.0),
    (-174611.0, 125400.0),
    (77683.0, 5796.0),
    (-236364091.0, 1506960.0),
];
/// Stirling's series is summed once `Re z` reaches this.
const STIRLING_SHIFT: f64 = 40.0;

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Dd::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn from_real(x: f64) -> Self {
        Self {
            re: Dd::from_f64(x),
            im: Dd::from_f64(0.0),
        }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Modulus of the leading parts.
    pub fn norm_hi(self) -> f64 {
        self.re.hi().hypot(self.im.hi())
    }

    pub fn is_zero(self) -> bool {
        self.re.hi() == 0.0 && self.im.hi() == 0.0
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Self { re: m * c, im: m * s }
    }

    /// Principal logarithm of a nonzero value.
    pub fn ln(self) -> Self {
        let re = (self.re.sqr() + self.im.sqr()).ln().scale(0.5);
        // one Newton step on tan refines the f64 angle
        let theta = Dd::from_f64(self.im.hi().atan2(self.re.hi()));
        let (s, c) = theta.sin_cos();
        let num = self.im * c - self.re * s;
        let den = self.re * c + self.im * s;
        Self { re, im: theta + num / den }
    }

    /// `ln Γ(z)` for `Re z > 0`, up to a multiple of `2πi`.
    pub fn ln_gamma(self) -> Self {
        let one = DdComplex::from_real(1.0);
        let mut w = self;
        let mut product = one;
        while w.re.hi() < STIRLING_SHIFT {
            product = product * w;
            w = w + one;
        }
        let half = DdComplex::from_real(0.5);
        let ln_w = w.ln();
        let mut out = (w - half) * ln_w - w;
        out.re = out.re + HALF_LN_2PI;
        let inv = one / w;
        let inv2 = inv * inv;
        let mut power = inv;
        for (num, den) in STIRLING {
            let c = Dd::from_f64(num) / Dd::from_f64(den);
            out = out + DdComplex { re: power.re * c, im: power.im * c };
            power = power * inv2;
        }
        out - product.ln()
    }
}

impl Neg for DdComplex {
    type Output = DdComplex;
    fn neg(self) -> DdComplex {
        DdComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Sub for DdComplex {
    type Output = DdComplex;
    fn sub(self, rhs: DdComplex) -> DdComplex {
        self + (-rhs)
    }
}

impl Add for DdComplex {
    type Output = DdComplex;
    fn add(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = DdComplex;
    fn mul(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for DdComplex {
    type Output = DdComplex;
    fn div(self, rhs: DdComplex) -> DdComplex {
        // scale to avoid overflow in |rhs|^2
        let scale = rhs.re.hi().abs().max(rhs.im.hi().abs());
        // a power of two keeps the scaling exact
        let s = Dd::from_f64((-scale.log2().floor()).exp2());
        let br = rhs.re * s;
        let bi = rhs.im * s;
        let den = br * br + bi * bi;
        let nr = (self.re * br + self.im * bi) * s;
        let ni = (self.im * br - self.re * bi) * s;
        DdComplex {
            re: nr / den,
            im: ni / den,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_accurate_beyond_f64() {
        let third = Dd::from_f64(1.0) / Dd::from_f64(3.0);
        let back = third * Dd::from_f64(3.0) - Dd::from_f64(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_division_roundtrip() {
        let a = DdComplex::from_c64(Complex64::new(1.25, -3.5));
        let b = DdComplex::from_c64(Complex64::new(-0.7, 2.1));
        let q = a / b;
        let r = q * b;
        let d = Complex64::new((r.re - a.re).to_f64(), (r.im - a.im).to_f64());
        assert!(d.norm() < 1e-30);
    }

    #[test]
    fn cancellation_is_resolved() {
        let big = Dd::from_f64(1e17);
        let s = (big + Dd::from_f64(1.0)) - big;
        assert_eq!(s.to_f64(), 1.0);
    }

    fn dd(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    fn close(a: Dd, b: Dd, tol: f64) -> bool {
        (a - b).to_f64().abs() <= tol * b.to_f64().abs().max(1.0)
    }

    #[test]
    fn elementary_functions() {
        assert!(close(Dd::from_f64(1.234567).exp(), dd(3.4368900250882164, 2.1402152068621726e-16), 1e-30));
        assert!(close(Dd::from_f64(-30.5).exp(), dd(5.675685232632723e-14, -2.744021414416088e-30), 1e-30));
        assert!(close(Dd::from_f64(3.7).ln(), dd(1.308332819650179, -8.256475934401426e-17), 1e-30));
        let (s, c) = Dd::from_f64(2.5).sin_cos();
        assert!(close(s, dd(0.5984721441039565, -5.521403334082375e-17), 1e-30));
        assert!(close(c, dd(-0.8011436155469337, -1.8674742705085553e-17), 1e-30));
        let (s, c) = Dd::from_f64(-7.1).sin_cos();
        assert!(close(s, dd(-0.7289690401258759, 2.4479659392426778e-17), 1e-30));
        assert!(close(c, dd(0.6845466664428066, 4.56044787414428e-18), 1e-30));
        let l = DdComplex::from_c64(Complex64::new(-2.0, 0.5)).ln();
        assert!(close(l.re, dd(0.7234594914681627, 4.532835114712103e-17), 1e-30));
        assert!(close(l.im, dd(2.896613990462929, 1.950326511428876e-16), 1e-30));
    }

    #[test]
    fn log_gamma_matches_reference() {
        // imaginary parts agree modulo 2π
        let check = |z: Complex64, re: Dd, im: Dd| {
            let g = DdComplex::from_c64(z).ln_gamma();
            assert!(close(g.re, re, 1e-29), "{z}: {:?}", g.re);
            let d = g.im - im;
            let k = (d.hi / (4.0 * FRAC_PI_2.hi)).round();
            let d = d - FRAC_PI_2.scale(4.0 * k);
            assert!(d.to_f64().abs() < 1e-28, "{z}: {d:?}");
        };
        check(
            Complex64::new(0.7, 1.3),
            dd(-1.0753829936378596, 2.0506177031466953e-17),
            dd(-0.6277260662956441, 1.583305893935204e-17),
        );
        check(
            Complex64::new(123.4, -5.0),
            dd(469.2344173346907, 1.697612333680822e-14),
            dd(-24.05824745657719, -1.3333212646164003e-15),
        );
    }
}
