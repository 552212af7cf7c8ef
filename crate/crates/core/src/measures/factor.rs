//! `p(x, y) = a0 (x + a1)(x + a2) + b0 (x + b1) y + y^2` as `p1 p2 - c2` with
//! linear factors over `Q(sqrt d)`, `d = b0^2 - 4 a0 > 0`.

use num::{One, Signed, Zero};
use serde::Serialize;

use super::quadext::QuadExt;
use crate::cmdeciders::BiDeg22Params;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `y + slope_x x + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFactor {
    pub slope_x: QuadExt,
    pub constant: QuadExt,
}

impl LinearFactor {
    pub fn eval(&self, m: &Rational, n: &Rational) -> QuadExt {
        let d = &self.slope_x.d;
        self.slope_x
            .scale(m)
            .add(&self.constant)
            .add(&QuadExt::rational(n.clone(), d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization22 {
    pub d: Rational,
    pub c0: QuadExt,
    pub c1: QuadExt,
    pub p1: LinearFactor,
    pub p2: LinearFactor,
    pub c2: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorPositivity {
    /// `b0 b1 / 2 + c1 > 0`
    pub constant1_positive: bool,
    /// `b0 b1 / 2 - c1 > 0`
    pub constant2_positive: bool,
    /// `c2 >= 0`
    pub c2_nonnegative: bool,
}

impl FactorPositivity {
    pub fn all(&self) -> bool {
        self.constant1_positive && self.constant2_positive && self.c2_nonnegative
    }
}

impl Factorization22 {
    /// `p1(m, n) p2(m, n) - c2`, exact.
    pub fn eval(&self, m: &Rational, n: &Rational) -> QuadExt {
        let prod = self.p1.eval(m, n).mul(&self.p2.eval(m, n));
        prod.sub(&QuadExt::rational(self.c2.clone(), &self.d))
    }

    pub fn positivity(&self) -> FactorPositivity {
        FactorPositivity {
            constant1_positive: self.p1.constant.is_positive(),
            constant2_positive: self.p2.constant.is_positive(),
            c2_nonnegative: !self.c2.is_negative(),
        }
    }

    /// Coefficients of `p1 p2 - c2` in the order `[1, x, y, x^2, xy, y^2]`.
    pub fn expanded(&self) -> [QuadExt; 6] {
        let d = &self.d;
        let (a, b) = (&self.p1.slope_x, &self.p2.slope_x);
        let (c, e) = (&self.p1.constant, &self.p2.constant);
        [
            c.mul(e).sub(&QuadExt::rational(self.c2.clone(), d)),
            a.mul(e).add(&b.mul(c)),
            c.add(e),
            a.mul(b),
            a.add(b),
            QuadExt::rational(Rational::one(), d),
        ]
    }
}

fn coefficients(p: &BiDeg22Params) -> [Rational; 6] {
    let (a0, a1, a2, b0, b1) = (&p.a0, &p.a1, &p.a2, &p.b0, &p.b1);
    [
        a0 * a1 * a2,
        a0 * (a1 + a2),
        b0 * b1,
        a0.clone(),
        b0.clone(),
        Rational::one(),
    ]
}

/// The `c2` constant: `a0 [b0^2 (b1 - a1)(a2 - b1) - a0 (a2 - a1)^2] / (b0^2 - 4 a0)`.
pub fn c2_closed_form(p: &BiDeg22Params) -> Rational {
    let (a0, a1, a2, b0, b1) = (&p.a0, &p.a1, &p.a2, &p.b0, &p.b1);
    let d = b0 * b0 - rational::int(4) * a0;
    let gap = a2 - a1;
    a0 * (b0 * b0 * (b1 - a1) * (a2 - b1) - a0 * &gap * &gap) / d
}

pub fn factorize22(p: &BiDeg22Params) -> Result<Factorization22> {
    let four = rational::int(4);
    let two = rational::int(2);
    let d = &p.b0 * &p.b0 - &four * &p.a0;
    if !d.is_positive() {
        return Err(Error::WrongCase(format!(
            "b0^2 - 4a0 = {} is not positive; the profile is not quadratic",
            rational::format(&d)
        )));
    }
    let half_b0 = &p.b0 / &two;
    let half_b0b1 = &p.b0 * &p.b1 / &two;
    // c0 = sqrt(d) / 2, c1 = N / (2 sqrt d) = N sqrt(d) / (2 d)
    let c0 = QuadExt::new(Rational::zero(), Rational::one() / &two, d.clone());
    let numer = &p.b0 * &p.b0 * &p.b1 - &two * &p.a0 * (&p.a1 + &p.a2);
    let c1 = QuadExt::new(Rational::zero(), &numer / (&two * &d), d.clone());
    let hb0 = QuadExt::rational(half_b0, &d);
    let hb0b1 = QuadExt::rational(half_b0b1.clone(), &d);
    let p1 = LinearFactor { slope_x: hb0.add(&c0), constant: hb0b1.add(&c1) };
    let p2 = LinearFactor { slope_x: hb0.sub(&c0), constant: hb0b1.sub(&c1) };
    // constant term of p1 p2 is (b0 b1 / 2)^2 - c1^2, which is rational
    let c1_sq = c1.mul(&c1).u;
    let c2 = &half_b0b1 * &half_b0b1 - c1_sq - &p.a0 * &p.a1 * &p.a2;
    let f = Factorization22 { d: d.clone(), c0, c1, p1, p2, c2 };

    let target = coefficients(p);
    for (got, want) in f.expanded().iter().zip(target.iter()) {
        if got.u != *want || !got.v.is_zero() {
            return Err(Error::WrongCase(format!(
                "factorisation identity failed: {got} != {}",
                rational::format(want)
            )));
        }
    }
    debug_assert_eq!(f.c2, c2_closed_form(p));
    Ok(f)
}
