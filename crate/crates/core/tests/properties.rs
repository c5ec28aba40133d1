use biprabhakar::prabhakar::{self, recurrence_residuals};
use biprabhakar::special::{self, ml_two_param, prabhakar_complex, recip_gamma};
use biprabhakar::{Bicomplex, ComplexPair, ComplexPrabhakarArgs, PrabhakarParams, SeriesPolicy};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, lo..hi).prop_map(|(re, im)| Complex64::new(re, im))
}

fn bicomplex() -> impl Strategy<Value = Bicomplex> {
    (complex(-10.0, 10.0), complex(-10.0, 10.0)).prop_map(|(a, b)| Bicomplex::from_idempotent(a, b))
}

/// Component with modulus in [1e-3, 1e3].
fn moderate() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(e, th)| Complex64::from_polar(10f64.powf(e), th))
}

/// Parameter with both components in the right half plane.
fn param(lo: f64, hi: f64) -> impl Strategy<Value = Bicomplex> {
    (lo..hi, -0.5f64..0.5, lo..hi, -0.5f64..0.5)
        .prop_map(|(a, b, c, d)| Bicomplex::from_idempotent(Complex64::new(a, b), Complex64::new(c, d)))
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * (1.0 + b.norm())
}

fn ulps_close(a: Complex64, b: Complex64, ulps: f64) -> bool {
    let scale = a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    (a - b).norm() <= ulps * f64::EPSILON * scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn multiplication_is_componentwise(a in bicomplex(), b in bicomplex()) {
        let p = (a * b).split();
        prop_assert!(ulps_close(p.z1, a.z1() * b.z1(), 4.0));
        prop_assert!(ulps_close(p.z2, a.z2() * b.z2(), 4.0));
    }

    #[test]
    fn split_compose_roundtrip(a in complex(-1e3, 1e3), b in complex(-1e3, 1e3)) {
        let pair = ComplexPair::new(a, b);
        prop_assert_eq!(Bicomplex::compose(pair).split(), pair);
        let x = Bicomplex::compose(pair);
        prop_assert_eq!(Bicomplex::compose(x.split()), x);
    }

    #[test]
    fn inverse_is_two_sided(a in moderate(), b in moderate()) {
        let z = Bicomplex::from_idempotent(a, b);
        let one = z.inverse().unwrap() * z;
        prop_assert!((one.z1() - 1.0).norm() < 1e-14);
        prop_assert!((one.z2() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn zero_divisors_have_annihilators(a in moderate(), first in any::<bool>()) {
        let zero = Complex64::new(0.0, 0.0);
        let (z, eta) = if first {
            (Bicomplex::from_idempotent(zero, a), Bicomplex::E1)
        } else {
            (Bicomplex::from_idempotent(a, zero), Bicomplex::E2)
        };
        prop_assert!(z.is_zero_divisor());
        prop_assert!(z.inverse().is_err());
        prop_assert!((z * eta).is_zero());
    }

    #[test]
    fn j_modulus_is_multiplicative(a in bicomplex(), b in bicomplex()) {
        let lhs = (a * b).j_modulus();
        let (ma, mb) = (a.j_modulus(), b.j_modulus());
        for r in [1u8, 2] {
            let want = ma.component(r) * mb.component(r);
            prop_assert!((lhs.component(r) - want).abs() <= 4.0 * f64::EPSILON * want.max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn text_form_roundtrip(a in bicomplex()) {
        // The four-real form passes through the idempotent split, so only a few ulps are kept.
        let back: Bicomplex = a.to_string().parse().unwrap();
        prop_assert!((back - a).max_norm() <= 8.0 * f64::EPSILON * a.max_norm());
    }

    #[test]
    fn reciprocal_gamma_inverts_gamma(z in complex(-8.0, 8.0)) {
        let pole_distance = if z.re <= 0.5 { (z - z.re.round()).norm() } else { 1.0 };
        prop_assume!(pole_distance >= 0.1);
        let g = special::gamma(z).unwrap();
        prop_assert!((recip_gamma(z) * g - 1.0).norm() < 1e-13);
    }

    #[test]
    fn unit_parameters_give_exponential(r in 0.0f64..20.0, th in -std::f64::consts::PI..std::f64::consts::PI) {
        let z = Complex64::from_polar(r, th);
        let e = prabhakar_complex(&ComplexPrabhakarArgs { z, ..ComplexPrabhakarArgs::real(1.0, 1.0, 1.0, 0.0) }, &SeriesPolicy::default()).unwrap();
        prop_assert!((e - z.exp()).norm() <= 1e-13 * z.exp().norm());
    }

    #[test]
    fn bicomplex_evaluation_is_componentwise(s in param(0.3, 2.0), t in param(0.3, 2.0), d in param(0.3, 2.0), a in complex(-2.0, 2.0), b in complex(-2.0, 2.0)) {
        let p = PrabhakarParams::new(s, t, d).unwrap();
        let zeta = Bicomplex::from_idempotent(a, b);
        let policy = SeriesPolicy::default();
        let v = prabhakar::prabhakar(&p, &zeta, &policy).unwrap();
        for r in [1u8, 2] {
            let args = ComplexPrabhakarArgs::new(s.component(r), t.component(r), d.component(r), zeta.component(r));
            prop_assert_eq!(v.component(r), prabhakar_complex(&args, &policy).unwrap());
        }
    }

    #[test]
    fn delta_one_reduces_to_two_parameter(s in param(0.3, 2.0), t in param(0.3, 2.0), a in complex(-2.0, 2.0), b in complex(-2.0, 2.0)) {
        let p = PrabhakarParams::new(s, t, Bicomplex::ONE).unwrap();
        let zeta = Bicomplex::from_idempotent(a, b);
        let v = prabhakar::prabhakar(&p, &zeta, &SeriesPolicy::default()).unwrap();
        for r in [1u8, 2] {
            let ml = ml_two_param(s.component(r), t.component(r), zeta.component(r)).unwrap();
            prop_assert!(close(v.component(r), ml, 1e-13));
        }
    }

    #[test]
    fn first_recurrence_holds(s in param(0.4, 2.0), t in param(1.6, 3.0), d in param(0.4, 2.0), a in complex(-1.5, 1.5), b in complex(-1.5, 1.5)) {
        let p = PrabhakarParams::new(s, t, d).unwrap();
        let zeta = Bicomplex::from_idempotent(a, b);
        let policy = SeriesPolicy::default();
        let e = prabhakar::prabhakar(&p, &zeta, &policy).unwrap();
        let (first, second) = recurrence_residuals(&p, &zeta, &policy).unwrap();
        for r in [1u8, 2] {
            let bound = 1e-10 * (1.0 + e.component(r).norm());
            prop_assert!(first.component(r).norm() <= bound);
            prop_assert!(second.component(r).norm() <= bound);
        }
    }
}

#[test]
fn poles_of_the_denominator_are_absorbed() {
    let args = ComplexPrabhakarArgs::real(1.0, 0.0, 1.0, 1.0);
    let v = prabhakar_complex(&args, &SeriesPolicy::default()).unwrap();
    // Σ_{k≥1} 1/Γ(k) = e.
    assert!((v - std::f64::consts::E).norm() < 1e-14);
}

#[test]
fn delta_zero_is_constant() {
    let args = ComplexPrabhakarArgs::real(0.7, 2.5, 0.0, -3.0);
    let v = prabhakar_complex(&args, &SeriesPolicy::default()).unwrap();
    assert!((v - recip_gamma(Complex64::new(2.5, 0.0))).norm() < 1e-16);
}
