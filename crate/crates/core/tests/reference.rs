//! Values computed independently with 40-digit arithmetic.

use biprabhakar::prabhakar;
use biprabhakar::special::prabhakar_complex;
use biprabhakar::{Bicomplex, ComplexPrabhakarArgs, PrabhakarParams, SeriesPolicy};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// (σ, τ, δ, z, E^δ_{σ,τ}(z))
const CASES: [[(f64, f64); 5]; 5] = [
    [(0.7, 0.2), (1.3, -0.4), (1.6, 0.5), (-2.5, 1.2), (0.10397409284120909245, -0.1232471232246188191)],
    [(1.5, -0.3), (0.6, 0.25), (0.8, 0.0), (3.0, -4.0), (2.2378271261594844801, -12.228775680909830544)],
    [(0.45, 0.1), (2.2, 0.0), (2.5, -1.0), (-1.0, -0.5), (0.15369982549525589792, 0.01887901579011642049)],
    [(2.0, 0.0), (1.0, 0.0), (1.0, 0.0), (-9.0, 0.0), (-0.98999249660044545727, 0.0)],
    [(1.2, 0.0), (0.9, 0.3), (-2.0, 0.0), (1.5, 2.5), (-3.2125191895658880676, -1.0425802458810405444)],
];

#[test]
fn complex_parameter_values() {
    for case in CASES {
        let [s, t, d, z, want] = case.map(|(re, im)| c(re, im));
        let got = prabhakar_complex(&ComplexPrabhakarArgs::new(s, t, d, z), &SeriesPolicy::default()).unwrap();
        assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()), "{case:?}: {got}");
    }
}

#[test]
fn bicomplex_value_from_two_components() {
    let [s1, t1, d1, z1, w1] = CASES[0].map(|(re, im)| c(re, im));
    let [s2, t2, d2, z2, w2] = CASES[1].map(|(re, im)| c(re, im));
    let p = PrabhakarParams::new(
        Bicomplex::from_idempotent(s1, s2),
        Bicomplex::from_idempotent(t1, t2),
        Bicomplex::from_idempotent(d1, d2),
    )
    .unwrap();
    let v = prabhakar::prabhakar(&p, &Bicomplex::from_idempotent(z1, z2), &SeriesPolicy::default()).unwrap();
    let want = Bicomplex::from_idempotent(w1, w2);
    assert!((v - want).max_norm() <= 1e-12 * (1.0 + want.max_norm()));
    // Four-real form of the same value: x0 = Re(w1 + w2)/2, x3 = Re(w1 - w2)/2.
    let x = v.reals();
    assert!((x[0] - 0.5 * (w1.re + w2.re)).abs() < 1e-12);
    assert!((x[3] - 0.5 * (w1.re - w2.re)).abs() < 1e-12);
}
