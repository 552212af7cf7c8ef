//! Exact arithmetic in `Q(sqrt d)` for a fixed positive rational `d`.

use std::cmp::Ordering;
use std::fmt;

use num::{Signed, Zero};

use crate::rational::{self, Rational};

/// `u + v sqrt(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    pub u: Rational,
    pub v: Rational,
    pub d: Rational,
}

impl QuadExt {
    pub fn new(u: Rational, v: Rational, d: Rational) -> Self {
        assert!(d.is_positive(), "radicand must be positive");
        QuadExt { u, v, d }
    }

    pub fn rational(u: Rational, d: &Rational) -> Self {
        Self::new(u, Rational::zero(), d.clone())
    }

    /// `sqrt(d)` itself.
    pub fn root(d: &Rational) -> Self {
        Self::new(Rational::zero(), rational::int(1), d.clone())
    }

    fn same_field(&self, o: &QuadExt) {
        assert_eq!(self.d, o.d, "mixed radicands");
    }

    pub fn add(&self, o: &QuadExt) -> QuadExt {
        self.same_field(o);
        QuadExt { u: &self.u + &o.u, v: &self.v + &o.v, d: self.d.clone() }
    }

    pub fn sub(&self, o: &QuadExt) -> QuadExt {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt { u: -&self.u, v: -&self.v, d: self.d.clone() }
    }

    pub fn mul(&self, o: &QuadExt) -> QuadExt {
        self.same_field(o);
        QuadExt {
            u: &self.u * &o.u + &self.v * &o.v * &self.d,
            v: &self.u * &o.v + &self.v * &o.u,
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, k: &Rational) -> QuadExt {
        QuadExt { u: &self.u * k, v: &self.v * k, d: self.d.clone() }
    }

    /// `u - v sqrt(d)`.
    pub fn conj(&self) -> QuadExt {
        QuadExt { u: self.u.clone(), v: -&self.v, d: self.d.clone() }
    }

    /// Sign of the real number `u + v sqrt(d)`, exact.
    pub fn signum(&self) -> Ordering {
        let su = rational::sign(&self.u);
        let sv = rational::sign(&self.v);
        match (su, sv) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            (a, _) => {
                // opposite signs: compare u^2 with v^2 d
                let lhs = &self.u * &self.u;
                let rhs = &self.v * &self.v * &self.d;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.sub(&QuadExt::rational(r.clone(), &self.d)).signum()
    }

    /// The rational value when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.v.is_zero() {
            return Some(self.u.clone());
        }
        rational::exact_sqrt(&self.d).map(|r| &self.u + &self.v * r)
    }

    pub fn to_f64(&self) -> f64 {
        rational::to_f64(&self.u) + rational::to_f64(&self.v) * rational::to_f64(&self.d).sqrt()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*sqrt({})",
            rational::format(&self.u),
            rational::format(&self.v),
            rational::format(&self.d)
        )
    }
}
