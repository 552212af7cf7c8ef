//! Univariate and bivariate polynomials over the rationals, with exact sign
//! decisions on the nonnegative integer lattice.
//!
//! A univariate polynomial has constant sign beyond its Cauchy root bound
//! `1 + max |a_i / a_d|`, so "`p(n) > 0` for every `n` in `Z_+`" reduces to a
//! finite scan up to that bound. For bivariate polynomials of the shape
//! `q(m) + r(m) n + s n^2` (with `s` a constant) the minimum over `n` is taken
//! exactly for each `m`, and the scan over `m` is cut off at the point beyond
//! which every polynomial that governs that minimum has settled its sign. The
//! one case where the minimum keeps moving, a constant discriminant with a
//! vertex drifting along an arithmetic progression, is periodic in `m`; one
//! full period is scanned past the cut-off.

use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Hard cap on the number of lattice points a single sign decision may scan.
pub const MAX_SCAN: u64 = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    /// Coefficients from the constant term upwards, without trailing zeros.
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `a + b x`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Poly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_u64(&self, x: u64) -> Rational {
        self.eval(&rational::from_u64(x))
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    /// Zero for constants (no roots) and for the zero polynomial.
    pub fn cauchy_bound(&self) -> Rational {
        match self.degree() {
            None | Some(0) => Rational::zero(),
            Some(d) => {
                let lead = self.coeffs[d].abs();
                let max = self.coeffs[..d]
                    .iter()
                    .map(|c| c.abs() / &lead)
                    .max()
                    .unwrap_or_else(Rational::zero);
                Rational::one() + max
            }
        }
    }

    /// An integer `N` such that the sign of `p(x)` equals the sign of the
    /// leading coefficient for every `x >= N`.
    pub fn settled_from(&self) -> Result<u64> {
        let b = rational::ceil_int(&self.cauchy_bound());
        b.to_u64()
            .filter(|&v| v <= MAX_SCAN)
            .ok_or_else(|| Error::Parameter(format!("root bound {b} exceeds the scan limit {MAX_SCAN}")))
    }

    /// First `n` in `Z_+` with `p(n) <= 0` (`strict`) or `p(n) < 0`
    /// (otherwise), together with the value. `None` means the sign condition
    /// holds on all of `Z_+`.
    pub fn first_violation(&self, strict: bool) -> Result<Option<(u64, Rational)>> {
        let end = self.settled_from()?;
        for n in 0..=end {
            let v = self.eval_u64(n);
            if violates(&v, strict) {
                return Ok(Some((n, v)));
            }
        }
        Ok(None)
    }

    /// First nonnegative integer root, if any.
    pub fn first_natural_root(&self) -> Result<Option<u64>> {
        if self.is_zero() {
            return Ok(Some(0));
        }
        let end = self.settled_from()?;
        Ok((0..=end).find(|&n| self.eval_u64(n).is_zero()))
    }
}

fn violates(v: &Rational, strict: bool) -> bool {
    if strict {
        !v.is_positive()
    } else {
        v.is_negative()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", rational::format(c))?,
                1 => write!(f, "({})x", rational::format(c))?,
                _ => write!(f, "({})x^{i}", rational::format(c))?,
            }
        }
        Ok(())
    }
}

/// A lattice point where a bivariate sign condition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPoint {
    pub m: u64,
    pub n: u64,
    pub value: Rational,
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p({}, {}) = {}", self.m, self.n, rational::format(&self.value))
    }
}

/// Bivariate polynomial `sum c[i][j] x^i y^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2 {
    coeffs: Vec<Vec<Rational>>,
}

impl Poly2 {
    /// `coeffs[i][j]` multiplies `x^i y^j`; rows may have different lengths.
    pub fn new(coeffs: Vec<Vec<Rational>>) -> Self {
        let mut p = Poly2 { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        for row in &mut self.coeffs {
            while row.last().is_some_and(Zero::is_zero) {
                row.pop();
            }
        }
        while self.coeffs.last().is_some_and(Vec::is_empty) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Poly2 { coeffs: Vec::new() }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(|r| r.len().checked_sub(1)).max()
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for row in self.coeffs.iter().rev() {
            let inner = row
                .iter()
                .rev()
                .fold(Rational::zero(), |a, c| a * y + c);
            acc = acc * x + inner;
        }
        acc
    }

    pub fn eval_u64(&self, m: u64, n: u64) -> Rational {
        self.eval(&rational::from_u64(m), &rational::from_u64(n))
    }

    /// Coefficient polynomials in `x` of `y^0, y^1, ...`.
    pub fn coeffs_in_y(&self) -> Vec<Poly> {
        let dy = match self.degree_y() {
            Some(d) => d,
            None => return Vec::new(),
        };
        (0..=dy)
            .map(|j| Poly::new(self.coeffs.iter().map(|row| row.get(j).cloned().unwrap_or_else(Rational::zero)).collect()))
            .collect()
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        let rows = self.coeffs.len().max(other.coeffs.len());
        let out = (0..rows)
            .map(|i| {
                let cols = self.coeffs.get(i).map_or(0, Vec::len).max(other.coeffs.get(i).map_or(0, Vec::len));
                (0..cols).map(|j| self.coeff(i, j) - other.coeff(i, j)).collect()
            })
            .collect();
        Poly2::new(out)
    }

    /// `p(x + dx, y + dy)` for nonnegative integer shifts.
    pub fn shift(&self, dx: u64, dy: u64) -> Poly2 {
        let sx = rational::from_u64(dx);
        let sy = rational::from_u64(dy);
        let dxg = self.degree_x().unwrap_or(0);
        let dyg = self.degree_y().unwrap_or(0);
        let mut out = vec![vec![Rational::zero(); dyg + 1]; dxg + 1];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                // (x + sx)^i (y + sy)^j expanded binomially
                for (a, out_row) in out.iter_mut().enumerate().take(i + 1) {
                    let bx = binomial(i, a) * num::pow(sx.clone(), i - a);
                    for (b, cell) in out_row.iter_mut().enumerate().take(j + 1) {
                        let by = binomial(j, b) * num::pow(sy.clone(), j - b);
                        *cell += c * &bx * &by;
                    }
                }
            }
        }
        Poly2::new(out)
    }

    /// Forward difference in the first (`dir == 0`) or second variable.
    pub fn difference(&self, dir: usize) -> Poly2 {
        let shifted = if dir == 0 { self.shift(1, 0) } else { self.shift(0, 1) };
        shifted.sub(self)
    }

    /// Decides whether `p(m, n) > 0` (`strict`) or `p(m, n) >= 0` for every
    /// `(m, n)` in `Z_+^2`, returning a violating point if not.
    ///
    /// Supported shapes: degree at most 2 in `y` with a constant `y^2`
    /// coefficient. Everything in this crate (the reciprocal families, moment
    /// polynomials and their differences) has that shape.
    pub fn grid_violation(&self, strict: bool) -> Result<Option<GridPoint>> {
        let ys = self.coeffs_in_y();
        if ys.len() > 3 {
            return Err(Error::Parameter("sign decision supports degree <= 2 in the second variable".into()));
        }
        let q = ys.first().cloned().unwrap_or_else(Poly::zero);
        let r = ys.get(1).cloned().unwrap_or_else(Poly::zero);
        let s_poly = ys.get(2).cloned().unwrap_or_else(Poly::zero);
        if s_poly.degree().unwrap_or(0) > 0 {
            return Err(Error::Parameter(
                "sign decision requires a constant coefficient of y^2".into(),
            ));
        }
        let s = s_poly.leading();

        if s.is_negative() {
            // n -> infinity along m = 0
            let col = Poly::new(vec![q.coeff(0), r.coeff(0), s]);
            let (n, value) = col
                .first_violation(strict)?
                .expect("negative leading coefficient always violates");
            return Ok(Some(GridPoint { m: 0, n, value }));
        }

        let mut governing = vec![q.clone(), r.clone()];
        let mut period = 1u64;
        if s.is_positive() {
            let four_s = &s * rational::int(4);
            let d = q.sub(&r.mul(&r).scale(&(Rational::one() / &four_s)));
            governing.push(d.add(&Poly::constant(&s / rational::int(4))));
            governing.push(d);
            // vertex v(m) = -r(m) / 2s is affine in m; its fractional part has
            // period equal to the reduced denominator of the slope
            let slope = -r.coeff(1) / (&s * rational::int(2));
            period = slope
                .denom()
                .to_u64()
                .filter(|&p| p <= MAX_SCAN)
                .ok_or_else(|| Error::Parameter("vertex period exceeds the scan limit".into()))?;
        }
        let mut end = 0u64;
        for g in &governing {
            end = end.max(g.settled_from()?);
        }
        let end = end
            .checked_add(period + 1)
            .filter(|&e| e <= MAX_SCAN)
            .ok_or_else(|| Error::Parameter("sign decision scan exceeds the limit".into()))?;

        for m in 0..=end {
            let rm = r.eval_u64(m);
            let qm = q.eval_u64(m);
            let (n, value) = min_over_naturals(&s, &rm, &qm, strict);
            if violates(&value, strict) {
                return Ok(Some(GridPoint { m, n, value }));
            }
        }
        Ok(None)
    }
}

/// Minimiser over `n` in `Z_+` of `s n^2 + r n + q` for `s >= 0`. When `s == 0`
/// and `r < 0` the function is unbounded below and the first `n` violating the
/// sign condition is returned instead.
fn min_over_naturals(s: &Rational, r: &Rational, q: &Rational, strict: bool) -> (u64, Rational) {
    let at = |n: &BigInt| {
        let x = Rational::from_integer(n.clone());
        s * &x * &x + r * &x + q
    };
    if s.is_zero() {
        if r.is_negative() {
            let t = q / -r;
            let n = if strict { rational::ceil_int(&t) } else { rational::floor_int(&t) + 1 };
            let n = n.max(BigInt::zero());
            let v = at(&n);
            return (n.to_u64().unwrap_or(u64::MAX), v);
        }
        return (0, q.clone());
    }
    let v = -r / (s * rational::int(2));
    if !v.is_positive() {
        return (0, q.clone());
    }
    let lo = rational::floor_int(&v);
    let hi = rational::ceil_int(&v);
    let (vlo, vhi) = (at(&lo), at(&hi));
    let (n, val) = if vhi < vlo { (hi, vhi) } else { (lo, vlo) };
    (n.to_u64().unwrap_or(u64::MAX), val)
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}
