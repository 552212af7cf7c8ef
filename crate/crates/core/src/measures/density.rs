//! Representing densities.
//!
//! For the (2,1) family with `c0 = b0/a0` and `c2 = c0 (a1 - b2)(a1 - b1)`,
//!
//! ```text
//! w(s, t) = (s/t^c0)^(a1-1) t^(c0(b1+b2-a1)-1) / (a0 t^c0) * K(-c2 ln(s/t^c0) ln t)
//! ```
//!
//! on `s <= t^c0` and zero elsewhere, where `K` is [`kernel_eval`]. Its
//! `s^m t^n` moments are `1/p(m, n)`; the substitution `s = t^c0 u` reduces
//! the double integral to a product of Laplace transforms in `-ln u`, `-ln t`.
//!
//! For the (2,2) family restricted to a fixed `m`, `p(m, y) = (y + r1)(y + r2)`
//! and `w_m(t) = (t^(r1-1) - t^(r2-1)) / (r2 - r1)` has `t^y` moments
//! `1/p(m, y)`.
//!
//! [`kernel_eval`]: super::kernel::kernel_eval

use std::fmt::Write;

use num::{Signed, Zero};
use serde::Serialize;

use super::kernel::kernel;
use crate::cmdeciders::{BiDeg21Params, BiDeg22Params};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} is outside (0, 1)")))
    }
}

/// Float constants of the (2,1) density, validated once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weight21 {
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
    pub b2: f64,
    pub c0: f64,
    pub c2: f64,
}

impl Weight21 {
    pub fn new(p: &BiDeg21Params) -> Result<Self> {
        if p.a0.is_zero() || p.a1.is_zero() {
            return Err(Error::Parameter("the density needs a0 != 0 and a1 != 0".into()));
        }
        if let Some(w) = p.to_poly2().grid_violation(true)? {
            return Err(Error::PreconditionViolated {
                reason: "p is not positive on Z+^2".into(),
                witness: w.to_string(),
            });
        }
        let f = rational::to_f64;
        Ok(Weight21 {
            a0: f(&p.a0),
            a1: f(&p.a1),
            b1: f(&p.b1),
            b2: f(&p.b2),
            c0: f(&p.c0()),
            c2: f(&p.c2()),
        })
    }

    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        check_unit("s", s)?;
        check_unit("t", t)?;
        let tc = t.powf(self.c0);
        if s > tc {
            return Ok(0.0);
        }
        let u = s / tc;
        let front = u.powf(self.a1 - 1.0) * t.powf(self.c0 * (self.b1 + self.b2 - self.a1) - 1.0) / (self.a0 * tc);
        Ok(front * kernel(-self.c2 * u.ln() * t.ln()))
    }

    /// The `s^m t^n`-weighted density pulled back to `(u, t)` with
    /// `s = t^c0 u`, Jacobian included:
    /// `u^(a1-1+m) t^(c0(m+b1+b2-a1)+n-1) K(-c2 ln u ln t) / a0`.
    pub(crate) fn moment_integrand(&self, m: u64, n: u64, u: f64, t: f64) -> f64 {
        let (ea, eb) = self.moment_exponents(m, n);
        if u == 0.0 || t == 0.0 {
            return 0.0;
        }
        u.powf(ea) * t.powf(eb) * kernel(-self.c2 * u.ln() * t.ln()) / self.a0
    }

    /// Leading power of `t` at zero after the `u` integration: the inner
    /// integral behaves like `t^(c2 / (a1 + m))` when `c2 < 0`.
    pub fn outer_exponent(&self, m: u64, n: u64) -> f64 {
        let (_, eb) = self.moment_exponents(m, n);
        eb + self.c2.min(0.0) / (self.a1 + m as f64)
    }

    /// Exponents of `u` and `t` in [`Self::moment_integrand`].
    pub fn moment_exponents(&self, m: u64, n: u64) -> (f64, f64) {
        let (m, n) = (m as f64, n as f64);
        (
            self.a1 - 1.0 + m,
            self.c0 * (m + self.b1 + self.b2 - self.a1) + n - 1.0,
        )
    }
}

/// `w(s, t)` for the (2,1) family.
pub fn weight21_eval(p: &BiDeg21Params, s: f64, t: f64) -> Result<f64> {
    check_unit("s", s)?;
    check_unit("t", t)?;
    Weight21::new(p)?.eval(s, t)
}

/// `w_m` for the (2,2) family at a fixed `m`; `r1 > r2 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineDensity {
    pub m: u64,
    pub r1: f64,
    pub r2: f64,
}

impl LineDensity {
    pub fn new(p: &BiDeg22Params, m: u64) -> Result<Self> {
        let a = p.a_poly().eval_u64(m);
        let b = p.b_poly().eval_u64(m);
        let disc = &b * &b - rational::int(4) * &a;
        if disc.is_zero() {
            return Err(Error::DegenerateDensity { m });
        }
        if disc.is_negative() {
            return Err(Error::PreconditionViolated {
                reason: "b(m)^2 - 4a(m) < 0, so 1/p(m, .) is not completely monotone".into(),
                witness: format!("m = {m}, b^2 - 4a = {}", rational::format(&disc)),
            });
        }
        // both roots positive iff their sum b and product a are
        if !b.is_positive() || !a.is_positive() {
            return Err(Error::PreconditionViolated {
                reason: "p(m, .) has a root at a nonnegative y".into(),
                witness: format!("m = {m}, a = {}, b = {}", rational::format(&a), rational::format(&b)),
            });
        }
        let (bf, sq) = (rational::to_f64(&b), rational::to_f64(&disc).sqrt());
        let r1 = (bf + sq) / 2.0;
        // the smaller root via a / r1 avoids cancellation
        let r2 = rational::to_f64(&a) / r1;
        Ok(LineDensity { m, r1, r2 })
    }

    pub fn from_roots(r1: f64, r2: f64) -> Self {
        LineDensity { m: 0, r1, r2 }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        check_unit("t", t)?;
        Ok(self.eval_unchecked(t))
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        (t.powf(self.r1 - 1.0) - t.powf(self.r2 - 1.0)) / (self.r2 - self.r1)
    }

    /// Closed-form `t^y` moment `1/((y + r1)(y + r2))`.
    pub fn moment(&self, y: f64) -> f64 {
        1.0 / ((y + self.r1) * (y + self.r2))
    }
}

pub fn weight22_line_eval(p: &BiDeg22Params, m: u64, t: f64) -> Result<f64> {
    check_unit("t", t)?;
    LineDensity::new(p, m)?.eval(t)
}

fn midpoints(k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |i| (i as f64 + 0.5) / k as f64)
}

/// `"s,t,w"` on the midpoint grid of `(0,1)^2` with `k x k` cells.
pub fn sample21_csv(w: &Weight21, k: usize) -> Result<String> {
    let mut out = String::from("s,t,w\n");
    for s in midpoints(k) {
        for t in midpoints(k) {
            writeln!(out, "{s},{t},{}", w.eval(s, t)?).expect("write to string");
        }
    }
    Ok(out)
}

/// `"t,w"` on the midpoint grid of `(0,1)` with `k` cells.
pub fn sample_line_csv(d: &LineDensity, k: usize) -> String {
    let mut out = String::from("t,w\n");
    for t in midpoints(k) {
        writeln!(out, "{t},{}", d.eval_unchecked(t)).expect("write to string");
    }
    out
}

/// Exact `1/p(m, n)` as a float.
pub(crate) fn reciprocal_f64(v: &Rational) -> f64 {
    1.0 / rational::to_f64(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p21(v: [(i64, i64); 5]) -> BiDeg21Params {
        BiDeg21Params::from_ints(v)
    }

    #[test]
    fn flat_density() {
        let p = p21([(1, 1), (1, 1), (2, 1), (1, 1), (1, 1)]);
        assert!((weight21_eval(&p, 0.3, 0.5).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(weight21_eval(&p, 0.6, 0.5).unwrap(), 0.0);
        assert!(matches!(weight21_eval(&p, 0.0, 0.5), Err(Error::Domain(_))));
        assert!(matches!(weight21_eval(&p, 0.5, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn negative_sample_when_interval_fails() {
        let p = p21([(1, 1), (1, 1), (2, 1), (1, 1), (4, 1)]);
        let w = Weight21::new(&p).unwrap();
        assert_eq!(w.c2, 6.0);
        let t0: f64 = 0.5;
        let s0 = (-5.0 / (6.0 * 2f64.ln())).exp() / 2.0;
        // kernel argument -c2 ln(s0/t0) ln t0 = -5
        let arg = -w.c2 * (s0 / t0).ln() * t0.ln();
        assert!((arg + 5.0).abs() < 1e-12);
        assert!(w.eval(s0, t0).unwrap() < 0.0);
    }

    #[test]
    fn line_density_examples() {
        let p = BiDeg22Params::from_ints([(1, 1), (1, 1), (2, 1), (2, 1), (3, 2)]);
        let d = LineDensity::new(&p, 0).unwrap();
        assert!((d.r1 - 2.0).abs() < 1e-15 && (d.r2 - 1.0).abs() < 1e-15);
        assert!((d.eval(0.25).unwrap() - 0.75).abs() < 1e-15);
        for k in 1..20 {
            assert!(d.eval(k as f64 / 20.0).unwrap() >= 0.0);
        }
        let sq = BiDeg22Params::from_ints([(1, 1), (2, 1), (2, 1), (2, 1), (2, 1)]);
        assert!(matches!(weight22_line_eval(&sq, 3, 0.5), Err(Error::DegenerateDensity { m: 3 })));
        // b(0)^2 - 4a(0) = 1 - 16 < 0
        let neg = BiDeg22Params::from_ints([(4, 1), (1, 1), (1, 1), (1, 1), (1, 1)]);
        assert!(matches!(weight22_line_eval(&neg, 0, 0.5), Err(Error::PreconditionViolated { .. })));
    }

    #[test]
    fn csv_shapes() {
        let p = p21([(1, 1), (1, 1), (2, 1), (1, 1), (1, 1)]);
        let csv = sample21_csv(&Weight21::new(&p).unwrap(), 4).unwrap();
        assert_eq!(csv.lines().count(), 17);
        assert_eq!(csv.lines().next(), Some("s,t,w"));
        let line = sample_line_csv(&LineDensity::from_roots(2.0, 1.0), 5);
        assert_eq!(line.lines().nth(1), Some("0.1,0.9"));
    }
}
