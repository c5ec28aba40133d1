//! Uniform time grids, bicomplex grid functions, their CSV form and the
//! Riemann-Liouville fractional integral by product integration.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bicomplex::Bicomplex;
use crate::error::{Error, Result};
use crate::special;

/// Uniform grid `t_k = k h`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    h: f64,
    len: usize,
}

impl Grid {
    /// Grid on `[0, t_end]` with step `h`; `t_end` must be a multiple of `h`
    /// up to rounding.
    pub fn new(t_end: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Grid(format!("step must be positive and finite, got {h}")));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::Grid(format!("t_end must be positive and finite, got {t_end}")));
        }
        let steps = (t_end / h).round();
        if (steps * h - t_end).abs() > 1e-9 * t_end {
            return Err(Error::Grid(format!("t_end = {t_end} is not a multiple of h = {h}")));
        }
        Self::with_steps(h, steps as usize)
    }

    /// Grid with `steps` intervals of width `h` (so `steps + 1` nodes).
    pub fn with_steps(h: f64, steps: usize) -> Result<Self> {
        if steps < 1 {
            return Err(Error::Grid("a grid needs at least two nodes".into()));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Grid(format!("step must be positive and finite, got {h}")));
        }
        Ok(Self { h, len: steps + 1 })
    }

    /// Recovers a grid from node times, rejecting non-uniform spacing.
    pub fn from_times(times: &[f64]) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::Grid("a grid needs at least two nodes".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::Grid(format!("grid must start at 0, starts at {}", times[0])));
        }
        let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
        for (k, &t) in times.iter().enumerate() {
            if (t - k as f64 * h).abs() > 1e-9 * h.max(t.abs()) {
                return Err(Error::Grid(format!("non-uniform grid at node {k} (t = {t})")));
            }
        }
        Self::with_steps(h, times.len() - 1)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.h
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.len - 1)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|k| self.t(k))
    }
}

/// Bicomplex samples on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: Grid,
    pub values: Vec<Bicomplex>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Bicomplex>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64) -> Bicomplex) -> Self {
        let values = grid.times().map(&mut f).collect();
        Self { grid, values }
    }

    pub fn try_from_fn(grid: Grid, mut f: impl FnMut(f64) -> Result<Bicomplex>) -> Result<Self> {
        let values = grid.times().map(&mut f).collect::<Result<_>>()?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::from_fn(grid, |_| Bicomplex::ZERO)
    }

    /// Samples of idempotent component `r`.
    pub fn component(&self, r: u8) -> Vec<Complex64> {
        self.values.iter().map(|v| v.component(r)).collect()
    }

    pub fn from_components(grid: Grid, c1: &[Complex64], c2: &[Complex64]) -> Result<Self> {
        let values = c1
            .iter()
            .zip(c2)
            .map(|(&a, &b)| Bicomplex::from_idempotent(a, b))
            .collect();
        Self::new(grid, values)
    }

    fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Grid("grid functions live on different grids".into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a + *b).collect();
        Ok(GridFunction { grid: self.grid, values })
    }

    pub fn try_sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a - *b).collect();
        Ok(GridFunction { grid: self.grid, values })
    }

    pub fn scale(&self, c: Bicomplex) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| c * *v).collect(),
        }
    }

    /// Largest idempotent-component modulus over the grid.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(Bicomplex::max_norm).fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "x0", "x1", "x2", "x3"])?;
        for (t, v) in self.grid.times().zip(&self.values) {
            let x = v.reals();
            w.write_record([t, x[0], x[1], x[2], x[3]].map(|y| format!("{y:.16e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        let expected = ["t", "x0", "x1", "x2", "x3"];
        if headers.iter().map(str::trim).ne(expected) {
            return Err(Error::Parse(format!("expected CSV header t,x0,x1,x2,x3, got {headers:?}")));
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (line, record) in r.records().enumerate() {
            let record = record?;
            let nums = record
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", line + 1)))?;
            if nums.len() != 5 {
                return Err(Error::Parse(format!("row {}: expected 5 columns", line + 1)));
            }
            times.push(nums[0]);
            values.push(Bicomplex::new(nums[1], nums[2], nums[3], nums[4]));
        }
        let grid = Grid::from_times(&times)?;
        Self::new(grid, values)
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// Product-integration weights for `RL^μ` on one complex component:
/// `I(t_n) ≈ h^μ / Γ(μ + 2) Σ_j a_{j,n} f_j`.
struct RlWeights {
    scale: Complex64,
    /// `m^{μ+1}` for `m = 0..=n`
    pow1: Vec<Complex64>,
    /// `m^μ`
    pow0: Vec<Complex64>,
    mu: Complex64,
}

impl RlWeights {
    fn new(mu: Complex64, h: f64, n: usize) -> Self {
        let pw = |m: usize, e: Complex64| {
            if m == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                (e * (m as f64).ln()).exp()
            }
        };
        let mu1 = mu + 1.0;
        Self {
            scale: (mu * h.ln()).exp() * special::recip_gamma(mu + 2.0),
            pow1: (0..=n).map(|m| pw(m, mu1)).collect(),
            pow0: (0..=n).map(|m| pw(m, mu)).collect(),
            mu,
        }
    }

    fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for n in 1..f.len() {
            let p1 = &self.pow1;
            let a0 = p1[n - 1] - (n as f64 - 1.0 - self.mu) * self.pow0[n];
            let mut acc = a0 * f[0] + f[n];
            for (j, fj) in f.iter().enumerate().take(n).skip(1) {
                let m = n - j;
                acc += (p1[m + 1] - 2.0 * p1[m] + p1[m - 1]) * fj;
            }
            out[n] = self.scale * acc;
        }
        out
    }
}

/// `(1/Γ(μ)) ∫_0^t (t - s)^{μ-1} f(s) ds` componentwise, with `f`
/// reconstructed piecewise linearly between grid nodes.
pub fn rl_fractional_integral(f: &GridFunction, mu: &Bicomplex) -> Result<GridFunction> {
    if !mu.param_domain_ok() {
        return Err(Error::Domain(format!("|Im_j(mu)| < Re(mu) violated: mu = {mu}")));
    }
    let grid = f.grid;
    let n = grid.len() - 1;
    let parts: Vec<Vec<Complex64>> = [1u8, 2]
        .iter()
        .map(|&r| RlWeights::new(mu.component(r), grid.h(), n).apply(&f.component(r)))
        .collect();
    GridFunction::from_components(grid, &parts[0], &parts[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_fn(grid: Grid, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(grid, |t| Bicomplex::from_real(f(t)))
    }

    #[test]
    fn grid_construction() {
        let g = Grid::new(2.0, 1e-3).unwrap();
        assert_eq!(g.len(), 2001);
        assert!((g.t_end() - 2.0).abs() < 1e-12);
        assert!(matches!(Grid::new(1.0, 0.3), Err(Error::Grid(_))));
        assert!(matches!(Grid::new(1.0, -0.1), Err(Error::Grid(_))));
        assert!(matches!(Grid::from_times(&[0.0, 0.1, 0.3]), Err(Error::Grid(_))));
        assert!(matches!(Grid::from_times(&[0.5, 1.0]), Err(Error::Grid(_))));
        assert_eq!(Grid::from_times(&[0.0, 0.5, 1.0]).unwrap().len(), 3);
    }

    #[test]
    fn mu_one_is_running_integral() {
        let g = Grid::new(1.0, 0.01).unwrap();
        let one = real_fn(g, |_| 1.0);
        let i = rl_fractional_integral(&one, &Bicomplex::ONE).unwrap();
        for (k, v) in i.values.iter().enumerate() {
            assert!((v.z1().re - g.t(k)).abs() < 1e-13);
        }
        let lin = real_fn(g, |t| t);
        let i2 = rl_fractional_integral(&lin, &Bicomplex::ONE).unwrap();
        for (k, v) in i2.values.iter().enumerate() {
            assert!((v.z1().re - g.t(k).powi(2) / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn half_integral_of_one() {
        let g = Grid::new(1.0, 1e-3).unwrap();
        let one = real_fn(g, |_| 1.0);
        let i = rl_fractional_integral(&one, &Bicomplex::from_real(0.5)).unwrap();
        let want = 1.0 / special::gamma(1.5.into()).unwrap().re;
        assert!((i.values[1000].z1().re - want).abs() < 1e-4);
    }

    #[test]
    fn componentwise_orders() {
        let g = Grid::new(1.0, 0.01).unwrap();
        let lin = real_fn(g, |t| t);
        let mu = Bicomplex::from_idempotent(1.0.into(), 2.0.into());
        let i = rl_fractional_integral(&lin, &mu).unwrap();
        let last = i.values[100];
        assert!((last.z1().re - 0.5).abs() < 1e-10);
        assert!((last.z2().re - 1.0 / 6.0).abs() < 1e-10);
        let bad = Bicomplex::new(0.5, 0.0, 0.0, 0.7);
        assert!(matches!(rl_fractional_integral(&lin, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn csv_roundtrip() {
        let g = Grid::new(1.0, 0.25).unwrap();
        let f = GridFunction::from_fn(g, |t| Bicomplex::new(t, -t, 1.0 / 3.0, t * t));
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,x0,x1,x2,x3\n"));
        let back = GridFunction::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.grid, f.grid);
        for (a, b) in back.values.iter().zip(&f.values) {
            assert!((*a - *b).max_norm() <= 4.0 * f64::EPSILON * b.max_norm());
        }
        assert!(matches!(GridFunction::read_csv("a,b\n1,2\n".as_bytes()), Err(Error::Parse(_))));
    }
}
