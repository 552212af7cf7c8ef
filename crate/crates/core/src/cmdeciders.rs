//! Closed-form deciders for complete monotonicity of `1/p` over `Z_+` and
//! `Z_+^2` for three polynomial families:
//!
//! * quadratics `a + b x + c x^2` in one variable: completely monotone iff
//!   all coefficients are positive and the polynomial splits over the reals;
//! * bi-degree (2, 1): `b0 (x + b1)(x + b2) + a0 (x + a1) y`, jointly
//!   completely monotone iff `b1 <= a1 <= b2`;
//! * bi-degree (2, 2): `a0 (x + a1)(x + a2) + b0 (x + b1) y + y^2`, jointly
//!   completely monotone iff `a1, a2, b0, b1 > 0`, `b0^2 >= 4 a0` and
//!   `a0 (a2 - a1)^2 <= b0^2 (b1 - a1)(a2 - b1)`.
//!
//! Each characterisation assumes `p > 0` on the lattice. That hypothesis is
//! verified exactly (see [`Poly2::grid_violation`]) and a failure is reported
//! as [`Verdict::PreconditionViolated`] with the offending point.
//!
//! Check names recorded in traces are part of the output format; see
//! [`names`].

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Poly, Poly2};
use crate::rational::{self, Rational};
use crate::trace::{CheckValue, DecisionTrace, Verdict};

/// Stable check names used in [`DecisionTrace`]s.
pub mod names {
    pub const NO_NATURAL_ROOT: &str = "p(n) != 0 on Z+";
    pub const A_POS: &str = "a > 0";
    pub const B_POS: &str = "b > 0";
    pub const C_POS: &str = "c > 0";
    pub const REAL_ROOTS: &str = "b^2 - 4ac >= 0";

    pub const GRID_POSITIVE: &str = "p > 0 on Z+^2";
    pub const A0_POS: &str = "a0 > 0";
    pub const A1_POS: &str = "a1 > 0";
    pub const A2_POS: &str = "a2 > 0";
    pub const B0_POS: &str = "b0 > 0";
    pub const B1_POS: &str = "b1 > 0";
    pub const B2_POS: &str = "b2 > 0";
    pub const B1_LE_A1: &str = "b1 <= a1";
    pub const A1_LE_B2: &str = "a1 <= b2";

    pub const A1_NONNEG: &str = "a1 >= 0";
    pub const A2_NONNEG: &str = "a2 >= 0";
    pub const A_SAME_SIGN: &str = "a1, a2 both zero or both positive";

    pub const B0_SQ_GE_4A0: &str = "b0^2 >= 4a0";
    pub const MAIN_22: &str = "a0(a2-a1)^2 <= b0^2(b1-a1)(a2-b1)";

    pub const PROFILE_NONZERO: &str = "q + r n + s n^2 != 0 on scan window";
    pub const PROFILE_DEGREE: &str = "deg q + deg s <= 2 deg r";
    pub const PROFILE_DISC: &str = "r^2 - 4qs >= 0 on Z+";
}

macro_rules! rat_struct_serde {
    ($raw:ident { $($f:ident),* }) => {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct $raw {
            $(#[serde(with = "rational::serde_str")] $f: Rational,)*
        }
    };
}

/// `p(x) = a + b x + c x^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Quadratic1DRaw")]
pub struct Quadratic1D {
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
}

rat_struct_serde!(Quadratic1DRaw { a, b, c });

impl TryFrom<Quadratic1DRaw> for Quadratic1D {
    type Error = Error;
    fn try_from(r: Quadratic1DRaw) -> Result<Self> {
        Quadratic1D::new(r.a, r.b, r.c)
    }
}

impl Quadratic1D {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(Error::Parameter("the zero polynomial has no reciprocal".into()));
        }
        Ok(Quadratic1D { a, b, c })
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(vec![self.a.clone(), self.b.clone(), self.c.clone()])
    }
}

pub fn decide_quadratic_reciprocal_cm(p: &Quadratic1D) -> Result<DecisionTrace> {
    let mut t = DecisionTrace::new();
    let poly = p.to_poly();
    if let Some(n) = poly.first_natural_root()? {
        t.push(
            names::NO_NATURAL_ROOT,
            CheckValue::Point { m: n, n: 0, value: Rational::zero() },
            false,
        );
        return Ok(t.precondition_violated());
    }
    t.push(names::NO_NATURAL_ROOT, CheckValue::None, true);
    let (a, b, c) = (&p.a, &p.b, &p.c);
    if !c.is_zero() {
        t.positive(names::A_POS, a);
        t.positive(names::B_POS, b);
        t.positive(names::C_POS, c);
        t.nonnegative(names::REAL_ROOTS, &(b * b - rational::int(4) * a * c));
    } else if !b.is_zero() {
        // affine: 1/(a + b n) is completely monotone iff a > 0 and b > 0
        t.positive(names::A_POS, a);
        t.positive(names::B_POS, b);
    } else {
        t.positive(names::A_POS, a);
    }
    Ok(t.conclude())
}

/// `p(x, y) = b0 (x + b1)(x + b2) + a0 (x + a1) y`, normalised to `b1 <= b2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "BiDeg21Raw")]
pub struct BiDeg21Params {
    #[serde(with = "rational::serde_str")]
    pub b0: Rational,
    #[serde(with = "rational::serde_str")]
    pub b1: Rational,
    #[serde(with = "rational::serde_str")]
    pub b2: Rational,
    #[serde(with = "rational::serde_str")]
    pub a0: Rational,
    #[serde(with = "rational::serde_str")]
    pub a1: Rational,
}

rat_struct_serde!(BiDeg21Raw { b0, b1, b2, a0, a1 });

impl From<BiDeg21Raw> for BiDeg21Params {
    fn from(r: BiDeg21Raw) -> Self {
        BiDeg21Params::new(r.b0, r.b1, r.b2, r.a0, r.a1)
    }
}

impl BiDeg21Params {
    pub fn new(b0: Rational, b1: Rational, b2: Rational, a0: Rational, a1: Rational) -> Self {
        let (b1, b2) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        BiDeg21Params { b0, b1, b2, a0, a1 }
    }

    pub fn from_ints(v: [(i64, i64); 5]) -> Self {
        let [b0, b1, b2, a0, a1] = v.map(|(p, q)| rational::ratio(p, q));
        Self::new(b0, b1, b2, a0, a1)
    }

    /// `c0 = b0 / a0`.
    pub fn c0(&self) -> Rational {
        &self.b0 / &self.a0
    }

    /// `c1 = (a1 - b2)(a1 - b1)`.
    pub fn c1(&self) -> Rational {
        (&self.a1 - &self.b2) * (&self.a1 - &self.b1)
    }

    /// `c2 = c0 c1`; nonpositive exactly when `a1` lies in `[b1, b2]`.
    pub fn c2(&self) -> Rational {
        self.c0() * self.c1()
    }

    pub fn eval(&self, m: &Rational, n: &Rational) -> Rational {
        &self.b0 * (m + &self.b1) * (m + &self.b2) + &self.a0 * (m + &self.a1) * n
    }

    pub fn eval_u64(&self, m: u64, n: u64) -> Rational {
        self.eval(&rational::from_u64(m), &rational::from_u64(n))
    }

    pub fn to_poly2(&self) -> Poly2 {
        let (b0, b1, b2, a0, a1) = (&self.b0, &self.b1, &self.b2, &self.a0, &self.a1);
        Poly2::new(vec![
            vec![b0 * b1 * b2, a0 * a1],
            vec![b0 * (b1 + b2), a0.clone()],
            vec![b0.clone()],
        ])
    }

    /// The same polynomial in the `(a1 x + a2) y` form.
    pub fn to_general(&self) -> BiDeg21General {
        BiDeg21General {
            b0: self.b0.clone(),
            b1: self.b1.clone(),
            b2: self.b2.clone(),
            a1: self.a0.clone(),
            a2: &self.a0 * &self.a1,
        }
    }
}

pub fn decide_bideg21_cm(p: &BiDeg21Params) -> Result<DecisionTrace> {
    if p.a0.is_zero() || p.a1.is_zero() {
        return Err(Error::Parameter(
            "a0 and a1 must be nonzero; with a0 = 0 use the one-variable decider, with a1 = 0 see check_bideg21_necessary".into(),
        ));
    }
    let mut t = DecisionTrace::new();
    if let Some(w) = p.to_poly2().grid_violation(true)? {
        t.push(names::GRID_POSITIVE, CheckValue::from(&w), false);
        return Ok(t.precondition_violated());
    }
    t.push(names::GRID_POSITIVE, CheckValue::None, true);
    // implied by positivity; recorded for the audit trail
    t.positive(names::A0_POS, &p.a0);
    t.positive(names::A1_POS, &p.a1);
    t.positive(names::B0_POS, &p.b0);
    t.le(names::B1_LE_A1, p.b1.clone(), p.a1.clone());
    t.le(names::A1_LE_B2, p.a1.clone(), p.b2.clone());
    Ok(t.conclude())
}

/// `q(x, y) = b0 (x + b1)(x + b2) + (a1 x + a2) y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "BiDeg21GeneralRaw")]
pub struct BiDeg21General {
    #[serde(with = "rational::serde_str")]
    pub b0: Rational,
    #[serde(with = "rational::serde_str")]
    pub b1: Rational,
    #[serde(with = "rational::serde_str")]
    pub b2: Rational,
    #[serde(with = "rational::serde_str")]
    pub a1: Rational,
    #[serde(with = "rational::serde_str")]
    pub a2: Rational,
}

rat_struct_serde!(BiDeg21GeneralRaw { b0, b1, b2, a1, a2 });

impl From<BiDeg21GeneralRaw> for BiDeg21General {
    fn from(r: BiDeg21GeneralRaw) -> Self {
        let (b1, b2) = if r.b1 <= r.b2 { (r.b1, r.b2) } else { (r.b2, r.b1) };
        BiDeg21General { b0: r.b0, b1, b2, a1: r.a1, a2: r.a2 }
    }
}

impl BiDeg21General {
    pub fn to_poly2(&self) -> Poly2 {
        let (b0, b1, b2) = (&self.b0, &self.b1, &self.b2);
        Poly2::new(vec![
            vec![b0 * b1 * b2, self.a2.clone()],
            vec![b0 * (b1 + b2), self.a1.clone()],
            vec![b0.clone()],
        ])
    }

    /// `a1 x + a2 = a1 (x + a2/a1)` when `a1 != 0`.
    pub fn normal_form(&self) -> Option<BiDeg21Params> {
        (!self.a1.is_zero()).then(|| {
            BiDeg21Params::new(
                self.b0.clone(),
                self.b1.clone(),
                self.b2.clone(),
                self.a1.clone(),
                &self.a2 / &self.a1,
            )
        })
    }
}

/// Necessary conditions for joint complete monotonicity of `1/q` in the
/// general `(a1 x + a2) y` form. A passing trace is not a proof of complete
/// monotonicity when `a1, a2 > 0`; the note then points at the normal-form
/// decider.
pub fn check_bideg21_necessary(q: &BiDeg21General) -> Result<DecisionTrace> {
    let mut t = DecisionTrace::new();
    match q.to_poly2().grid_violation(true)? {
        Some(w) if w.value.is_zero() => {
            t.push(names::GRID_POSITIVE, CheckValue::from(&w), false);
            return Ok(t
                .precondition_violated()
                .with_note("q vanishes at a lattice point"));
        }
        Some(w) => {
            // 1/q takes a negative value: already fails at order zero
            t.push(names::GRID_POSITIVE, CheckValue::from(&w), false);
        }
        None => {
            t.push(names::GRID_POSITIVE, CheckValue::None, true);
        }
    }
    t.positive(names::B0_POS, &q.b0);
    t.positive(names::B1_POS, &q.b1);
    t.positive(names::B2_POS, &q.b2);
    t.nonnegative(names::A1_NONNEG, &q.a1);
    t.nonnegative(names::A2_NONNEG, &q.a2);
    let same = (q.a1.is_zero() && q.a2.is_zero()) || (q.a1.is_positive() && q.a2.is_positive());
    t.push(
        names::A_SAME_SIGN,
        CheckValue::Pair(q.a1.clone(), q.a2.clone()),
        same,
    );
    let t = t.conclude();
    Ok(match t.verdict {
        Verdict::Holds if q.a1.is_zero() => {
            t.with_note("necessary conditions hold; q does not depend on y and 1/q is a product of completely monotone sequences")
        }
        Verdict::Holds => t.with_note(
            "necessary conditions hold; full decision requires the normal form (decide_bideg21_cm)",
        ),
        _ => t,
    })
}

/// `p(x, y) = a0 (x + a1)(x + a2) + b0 (x + b1) y + y^2`, normalised to
/// `a1 <= a2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "BiDeg22Raw")]
pub struct BiDeg22Params {
    #[serde(with = "rational::serde_str")]
    pub a0: Rational,
    #[serde(with = "rational::serde_str")]
    pub a1: Rational,
    #[serde(with = "rational::serde_str")]
    pub a2: Rational,
    #[serde(with = "rational::serde_str")]
    pub b0: Rational,
    #[serde(with = "rational::serde_str")]
    pub b1: Rational,
}

rat_struct_serde!(BiDeg22Raw { a0, a1, a2, b0, b1 });

impl From<BiDeg22Raw> for BiDeg22Params {
    fn from(r: BiDeg22Raw) -> Self {
        BiDeg22Params::new(r.a0, r.a1, r.a2, r.b0, r.b1)
    }
}

impl BiDeg22Params {
    pub fn new(a0: Rational, a1: Rational, a2: Rational, b0: Rational, b1: Rational) -> Self {
        let (a1, a2) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        BiDeg22Params { a0, a1, a2, b0, b1 }
    }

    pub fn from_ints(v: [(i64, i64); 5]) -> Self {
        let [a0, a1, a2, b0, b1] = v.map(|(p, q)| rational::ratio(p, q));
        Self::new(a0, a1, a2, b0, b1)
    }

    /// `a(x) = a0 (x + a1)(x + a2)`.
    pub fn a_poly(&self) -> Poly {
        Poly::new(vec![
            &self.a0 * &self.a1 * &self.a2,
            &self.a0 * (&self.a1 + &self.a2),
            self.a0.clone(),
        ])
    }

    /// `b(x) = b0 (x + b1)`.
    pub fn b_poly(&self) -> Poly {
        Poly::linear(&self.b0 * &self.b1, self.b0.clone())
    }

    /// `b(x)^2 - 4 a(x)`.
    pub fn discriminant_profile(&self) -> Poly {
        let b = self.b_poly();
        b.mul(&b).sub(&self.a_poly().scale(&rational::int(4)))
    }

    pub fn eval(&self, m: &Rational, n: &Rational) -> Rational {
        &self.a0 * (m + &self.a1) * (m + &self.a2) + &self.b0 * (m + &self.b1) * n + n * n
    }

    pub fn eval_u64(&self, m: u64, n: u64) -> Rational {
        self.eval(&rational::from_u64(m), &rational::from_u64(n))
    }

    pub fn to_poly2(&self) -> Poly2 {
        let (a0, a1, a2, b0, b1) = (&self.a0, &self.a1, &self.a2, &self.b0, &self.b1);
        Poly2::new(vec![
            vec![a0 * a1 * a2, b0 * b1, Rational::one()],
            vec![a0 * (a1 + a2), b0.clone()],
            vec![a0.clone()],
        ])
    }
}

pub fn decide_bideg22_cm(p: &BiDeg22Params) -> Result<DecisionTrace> {
    if p.a0.is_zero() {
        return Err(Error::Parameter(
            "a0 = 0 lowers the degree in x; rewrite the polynomial for a lower-degree decider".into(),
        ));
    }
    let mut t = DecisionTrace::new();
    if let Some(w) = p.to_poly2().grid_violation(true)? {
        t.push(names::GRID_POSITIVE, CheckValue::from(&w), false);
        return Ok(t.precondition_violated());
    }
    t.push(names::GRID_POSITIVE, CheckValue::None, true);
    t.positive(names::A1_POS, &p.a1);
    t.positive(names::A2_POS, &p.a2);
    t.positive(names::B0_POS, &p.b0);
    t.positive(names::B1_POS, &p.b1);
    let b0sq = &p.b0 * &p.b0;
    t.le(names::B0_SQ_GE_4A0, rational::int(4) * &p.a0, b0sq.clone());
    let gap = &p.a2 - &p.a1;
    t.le(
        names::MAIN_22,
        &p.a0 * &gap * &gap,
        b0sq * (&p.b1 - &p.a1) * (&p.a2 - &p.b1),
    );
    Ok(t.conclude())
}

/// Necessary conditions for `1/(q(m) + r(m) n + s(m) n^2)`: the degree
/// balance `deg q + deg s <= 2 deg r` and `r^2 - 4 q s >= 0` on `Z_+`,
/// the latter decided exactly. Nonvanishing of `p` is checked on the
/// `scan_bound x scan_bound` window.
pub fn check_discriminant_profile(q: &Poly, r: &Poly, s: &Poly, scan_bound: u64) -> Result<DecisionTrace> {
    if q.is_zero() && r.is_zero() && s.is_zero() {
        return Err(Error::Parameter("all three coefficient polynomials are zero".into()));
    }
    let mut t = DecisionTrace::new();
    for m in 0..scan_bound {
        let (qm, rm, sm) = (q.eval_u64(m), r.eval_u64(m), s.eval_u64(m));
        for n in 0..scan_bound {
            let nn = rational::from_u64(n);
            let v = &qm + &rm * &nn + &sm * &nn * &nn;
            if v.is_zero() {
                t.push(names::PROFILE_NONZERO, CheckValue::Point { m, n, value: v }, false);
                return Ok(t.precondition_violated());
            }
        }
    }
    t.push(names::PROFILE_NONZERO, CheckValue::Text(format!("{scan_bound}x{scan_bound}")), true);

    // deg 0 = -infinity, so a vanishing q or s makes the left side -infinity
    let deg_text = |d: Option<usize>| d.map_or("-inf".to_string(), |d| d.to_string());
    let lhs = q.degree().zip(s.degree()).map(|(a, b)| a + b);
    let rhs = r.degree().map(|d| 2 * d);
    let ok = match (lhs, rhs) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(l), Some(r)) => l <= r,
    };
    t.push(
        names::PROFILE_DEGREE,
        CheckValue::Text(format!("{} <= {}", deg_text(lhs), deg_text(rhs))),
        ok,
    );
    let disc = r.mul(r).sub(&q.mul(s).scale(&rational::int(4)));
    match disc.first_violation(false)? {
        Some((m, value)) => t.push(names::PROFILE_DISC, CheckValue::Point { m, n: 0, value }, false),
        None => t.push(names::PROFILE_DISC, CheckValue::None, true),
    };
    Ok(t.conclude())
}

/// `1/p(m, slope m + intercept)` for `m = 0 .. length - 1`.
pub fn line_restriction_sequence(
    p: &BiDeg22Params,
    slope: &Rational,
    intercept: &Rational,
    length: usize,
) -> Result<Vec<Rational>> {
    if !slope.is_positive() || !intercept.is_positive() {
        return Err(Error::Parameter("slope and intercept must be positive".into()));
    }
    (0..length as u64)
        .map(|m| {
            let mm = rational::from_u64(m);
            let y = slope * &mm + intercept;
            let v = p.eval(&mm, &y);
            if v.is_positive() {
                Ok(v.recip())
            } else {
                Err(Error::PreconditionViolated {
                    reason: "p is not positive on the line".into(),
                    witness: format!("p({m}, {}) = {}", rational::format(&y), rational::format(&v)),
                })
            }
        })
        .collect()
}
