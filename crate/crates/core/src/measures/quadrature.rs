//! Adaptive Gauss-Kronrod (7/15) quadrature with an evaluation budget.
//!
//! Subintervals are kept in left-to-right order and summed in that order, so
//! the result depends only on the integrand, never on timing.

use std::cell::Cell;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Why integration stopped short; `estimate` is the best value so far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadFailure {
    pub evaluations: u64,
    pub estimate: f64,
}

#[derive(Debug)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub budget: u64,
    used: Cell<u64>,
}

type Integrand<'a> = dyn FnMut(f64) -> Result<f64, QuadFailure> + 'a;

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64, budget: u64) -> Self {
        Quadrature { abs_tol, rel_tol, budget, used: Cell::new(0) }
    }

    pub fn evaluations(&self) -> u64 {
        self.used.get()
    }

    /// Adds evaluations spent by a nested rule.
    pub fn charge(&self, n: u64) {
        self.used.set(self.used.get() + n);
    }

    fn fail(&self, estimate: f64) -> QuadFailure {
        QuadFailure { evaluations: self.used.get(), estimate }
    }

    fn gk15(&self, f: &mut Integrand<'_>, a: f64, b: f64) -> Result<(f64, f64), QuadFailure> {
        if self.used.get() + 15 > self.budget {
            return Err(self.fail(f64::NAN));
        }
        self.used.set(self.used.get() + 15);
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c)?;
        let mut kron = fc * WGK[7];
        let mut gauss = fc * WG[3];
        for i in 0..7 {
            let dx = h * XGK[i];
            let s = f(c - dx)? + f(c + dx)?;
            kron += WGK[i] * s;
            if i % 2 == 1 {
                gauss += WG[i / 2] * s;
            }
        }
        Ok((kron * h, ((kron - gauss) * h).abs()))
    }

    /// Globally adaptive: repeatedly bisects the interval with the largest
    /// error estimate (ties go to the leftmost) until the summed estimate
    /// meets the tolerance.
    pub fn integrate(&self, f: &mut Integrand<'_>, a: f64, b: f64) -> Result<f64, QuadFailure> {
        // (left, right, value, error)
        let mut parts: Vec<(f64, f64, f64, f64)> = Vec::new();
        let (k, e) = self.gk15(f, a, b)?;
        parts.push((a, b, k, e));
        loop {
            let total: f64 = sum_in_order(&parts, |p| p.2);
            let err: f64 = sum_in_order(&parts, |p| p.3);
            if !total.is_finite() {
                return Err(self.fail(total));
            }
            if err <= self.abs_tol.max(self.rel_tol * total.abs()) {
                return Ok(total);
            }
            let worst = parts
                .iter()
                .enumerate()
                .filter(|(_, p)| splittable(p.0, p.1))
                .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3).then(y.0.cmp(&x.0)))
                .map(|(i, _)| i);
            let Some(i) = worst else {
                return Err(self.fail(total));
            };
            let (l, r, _, _) = parts[i];
            let mid = 0.5 * (l + r);
            let left = self.gk15(f, l, mid).map_err(|e| QuadFailure { estimate: total, ..e })?;
            let right = self.gk15(f, mid, r).map_err(|e| QuadFailure { estimate: total, ..e })?;
            parts[i] = (l, mid, left.0, left.1);
            parts.insert(i + 1, (mid, r, right.0, right.1));
        }
    }

    /// `int_0^1 f` for integrands behaving like `x^e` at zero with `e > -1`.
    /// For `e < 0` substitutes `x = v^q`, `q = ceil(2 / (e + 1))`, which turns
    /// the singularity into a zero of order at least one.
    pub fn integrate_unit(&self, f: &mut Integrand<'_>, e: f64) -> Result<f64, QuadFailure> {
        let q = power_for(e);
        if q == 1 {
            return self.integrate(f, 0.0, 1.0);
        }
        let qf = f64::from(q);
        let mut g = |v: f64| -> Result<f64, QuadFailure> {
            let x = v.powi(q as i32);
            if x == 0.0 {
                return Ok(0.0);
            }
            Ok(f(x)? * qf * v.powi(q as i32 - 1))
        };
        self.integrate(&mut g, 0.0, 1.0)
    }
}

/// Left-to-right sum, so the result depends only on the partition.
fn sum_in_order(parts: &[(f64, f64, f64, f64)], f: impl Fn(&(f64, f64, f64, f64)) -> f64) -> f64 {
    parts.iter().map(f).sum()
}

fn splittable(a: f64, b: f64) -> bool {
    let mid = 0.5 * (a + b);
    mid > a && mid < b && (b - a) > 1e3 * f64::EPSILON * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Substitution power for an endpoint exponent `e`.
pub fn power_for(e: f64) -> u32 {
    if e >= 0.0 {
        1
    } else {
        (2.0 / (e + 1.0)).ceil() as u32
    }
}
