//! Quadrature check that a density reproduces `1/p(m, n)`.

use serde::Serialize;

use super::density::{reciprocal_f64, LineDensity, Weight21};
use super::quadrature::{QuadFailure, Quadrature, DEFAULT_BUDGET};
use crate::cmdeciders::{BiDeg21Params, BiDeg22Params};
use crate::error::{Error, Result};

/// Which density to integrate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensitySource {
    /// `int int s^m t^n w(s, t) ds dt` against `1/p(m, n)`.
    Bideg21(BiDeg21Params),
    /// `int t^n w_m(t) dt` against `1/p(m, n)`.
    Line22(BiDeg22Params),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub m: u64,
    pub n: u64,
    pub integral: f64,
    pub expected: f64,
    pub residual: f64,
    pub evaluations: u64,
}

impl MomentReport {
    pub fn passed(&self, abs_tol: f64) -> bool {
        self.residual < abs_tol
    }
}

fn budget_error(expected: f64) -> impl Fn(QuadFailure) -> Error {
    move |f| Error::NumericalBudget {
        evaluations: f.evaluations,
        best_residual: (f.estimate - expected).abs(),
    }
}

fn not_integrable(ea: f64, eb: f64) -> Error {
    Error::PreconditionViolated {
        reason: "density moment is not integrable".into(),
        witness: format!("exponents {ea}, {eb} must exceed -1"),
    }
}

/// Integrates the density against the monomial and compares with the exact
/// reciprocal. The returned report carries the residual; the caller decides
/// success with [`MomentReport::passed`].
pub fn verify_moment_integral(src: &DensitySource, m: u64, n: u64, abs_tol: f64) -> Result<MomentReport> {
    verify_with_budget(src, m, n, abs_tol, DEFAULT_BUDGET)
}

pub fn verify_with_budget(src: &DensitySource, m: u64, n: u64, abs_tol: f64, budget: u64) -> Result<MomentReport> {
    if abs_tol.is_nan() || abs_tol <= 0.0 {
        return Err(Error::Parameter("abs_tol must be positive".into()));
    }
    match src {
        DensitySource::Bideg21(p) => {
            let w = Weight21::new(p)?;
            let expected = reciprocal_f64(&p.eval_u64(m, n));
            let (ea, eb) = w.moment_exponents(m, n);
            let et = w.outer_exponent(m, n);
            if ea <= -1.0 || eb <= -1.0 || et <= -1.0 {
                return Err(not_integrable(ea, et));
            }
            let outer = Quadrature::new(abs_tol * 1e-2, 1e-12, budget);
            let inner_tol = abs_tol * 1e-3;
            let integral = outer
                .integrate_unit(
                    &mut |t| {
                        // inner rule shares the outer counter through its budget
                        let inner = Quadrature::new(inner_tol, 1e-12, budget.saturating_sub(outer.evaluations()));
                        let v = inner.integrate_unit(&mut |u| Ok(w.moment_integrand(m, n, u, t)), ea);
                        outer.charge(inner.evaluations());
                        v.map_err(|f| QuadFailure { evaluations: outer.evaluations(), ..f })
                    },
                    et,
                )
                .map_err(budget_error(expected))?;
            Ok(MomentReport {
                m,
                n,
                integral,
                expected,
                residual: (integral - expected).abs(),
                evaluations: outer.evaluations(),
            })
        }
        DensitySource::Line22(p) => {
            let d = LineDensity::new(p, m)?;
            line_report(&d, m, n, reciprocal_f64(&p.eval_u64(m, n)), abs_tol, budget)
        }
    }
}

/// Moment check for a line density given by its roots; `expected` defaults
/// to the closed form `1/((n + r1)(n + r2))`.
pub fn verify_line_density(d: &LineDensity, n: u64, abs_tol: f64) -> Result<MomentReport> {
    line_report(d, d.m, n, d.moment(n as f64), abs_tol, DEFAULT_BUDGET)
}

fn line_report(d: &LineDensity, m: u64, n: u64, expected: f64, abs_tol: f64, budget: u64) -> Result<MomentReport> {
    let e = n as f64 + d.r2.min(d.r1) - 1.0;
    if e <= -1.0 {
        return Err(not_integrable(e, e));
    }
    let q = Quadrature::new(abs_tol * 1e-2, 1e-12, budget);
    let ni = n as i32;
    let integral = q
        .integrate_unit(&mut |t| Ok(t.powi(ni) * d.eval_unchecked(t)), e)
        .map_err(budget_error(expected))?;
    Ok(MomentReport {
        m,
        n,
        integral,
        expected,
        residual: (integral - expected).abs(),
        evaluations: q.evaluations(),
    })
}
