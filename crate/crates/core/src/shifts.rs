//! Weighted 2-shifts generated by a quadratic moment polynomial.
//!
//! A weighted 2-shift sends `e_alpha` to `w_alpha^(j) e_(alpha + eps_j)`.
//! Everything here is driven by the moment function
//! `gamma(alpha) = ||W^alpha e_0||^2`; weights are kept squared,
//! `w1sq(alpha) = gamma(alpha + eps_1) / gamma(alpha)` and likewise `w2sq`.
//!
//! On basis vectors `||W^alpha e_delta||^2 = gamma(delta + alpha) / gamma(delta)`
//! (telescope the squared weights along any lattice path from `delta` to
//! `delta + alpha`; commutation makes the product path independent). So the
//! toral `m`-isometry identity `sum (-1)^|alpha| C(beta, alpha) T*^alpha T^alpha = 0`,
//! being diagonal, holds iff `Delta^beta gamma(delta) = 0` for every `|beta| = m`
//! and every `delta`. Toral 3-isometries are exactly the quadratic `gamma`
//! below.
//!
//! Weights of a quadratic `gamma` are ratios of polynomials of equal degree,
//! hence globally bounded; this module asserts boundedness only on the
//! window it builds.

use std::fmt::Write;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::netcore::{MultiIndex2, Net2};
use crate::poly::Poly2;
use crate::rational::{self, Rational};

/// Mixed differences of `gamma` at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct RhoSet {
    #[serde(with = "rational::serde_str")]
    pub rho10: Rational,
    #[serde(with = "rational::serde_str")]
    pub rho01: Rational,
    #[serde(with = "rational::serde_str")]
    pub rho20: Rational,
    #[serde(with = "rational::serde_str")]
    pub rho02: Rational,
    #[serde(with = "rational::serde_str")]
    pub rho11: Rational,
}

impl RhoSet {
    pub fn new(rho10: Rational, rho01: Rational, rho20: Rational, rho02: Rational, rho11: Rational) -> Self {
        RhoSet { rho10, rho01, rho20, rho02, rho11 }
    }

    /// `(rho10, rho01, rho20, rho02, rho11)` from integer pairs `(p, q)`.
    pub fn from_ints(v: [(i64, i64); 5]) -> Self {
        let [a, b, c, d, e] = v.map(|(p, q)| rational::ratio(p, q));
        Self::new(a, b, c, d, e)
    }

    /// `2 rho10 - rho20`.
    pub fn rho1(&self) -> Rational {
        rational::int(2) * &self.rho10 - &self.rho20
    }

    /// `2 rho01 - rho02`.
    pub fn rho2(&self) -> Rational {
        rational::int(2) * &self.rho01 - &self.rho02
    }
}

/// Derived `rho1`, `rho2` are written alongside the base fields and ignored
/// on input.
impl Serialize for RhoSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            rho10: String,
            rho01: String,
            rho20: String,
            rho02: String,
            rho11: String,
            rho1: String,
            rho2: String,
        }
        let f = rational::format;
        Out {
            rho10: f(&self.rho10),
            rho01: f(&self.rho01),
            rho20: f(&self.rho20),
            rho02: f(&self.rho02),
            rho11: f(&self.rho11),
            rho1: f(&self.rho1()),
            rho2: f(&self.rho2()),
        }
        .serialize(s)
    }
}

/// `gamma(x, y) = 1 + a1 x + a2 x^2 + (b1 x + b2) y + c1 y^2`.
///
/// [`MomentPolynomial::new`] validates positivity on `Z_+^2`; deserialising
/// does not, so that callers can report an invalid input as a failed
/// hypothesis (see [`MomentPolynomial::validate`]).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentPolynomial {
    #[serde(with = "rational::serde_str")]
    pub a1: Rational,
    #[serde(with = "rational::serde_str")]
    pub a2: Rational,
    #[serde(with = "rational::serde_str")]
    pub b1: Rational,
    #[serde(with = "rational::serde_str")]
    pub b2: Rational,
    #[serde(with = "rational::serde_str")]
    pub c1: Rational,
}

impl MomentPolynomial {
    pub fn new(a1: Rational, a2: Rational, b1: Rational, b2: Rational, c1: Rational) -> Result<Self> {
        let g = MomentPolynomial { a1, a2, b1, b2, c1 };
        g.validate()?;
        Ok(g)
    }

    pub fn from_ints(v: [(i64, i64); 5]) -> Result<Self> {
        let [a, b, c, d, e] = v.map(|(p, q)| rational::ratio(p, q));
        Self::new(a, b, c, d, e)
    }

    /// `gamma > 0` on `Z_+^2`, decided exactly.
    pub fn validate(&self) -> Result<()> {
        match self.to_poly2().grid_violation(true)? {
            None => Ok(()),
            Some(w) => Err(Error::PreconditionViolated {
                reason: "gamma is not positive on Z+^2".into(),
                witness: format!("gamma({}, {}) = {}", w.m, w.n, rational::format(&w.value)),
            }),
        }
    }

    pub fn to_poly2(&self) -> Poly2 {
        Poly2::new(vec![
            vec![Rational::one(), self.b2.clone(), self.c1.clone()],
            vec![self.a1.clone(), self.b1.clone()],
            vec![self.a2.clone()],
        ])
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        Rational::one()
            + &self.a1 * x
            + &self.a2 * x * x
            + (&self.b1 * x + &self.b2) * y
            + &self.c1 * y * y
    }

    pub fn eval_u64(&self, m: u64, n: u64) -> Rational {
        self.eval(&rational::from_u64(m), &rational::from_u64(n))
    }

    /// `gamma` on the window as a net.
    pub fn moment_net(&self, width: usize, height: usize) -> Result<Net2> {
        crate::netcore::net_from_function(|a| Some(self.eval_u64(a.i as u64, a.j as u64)), width, height)
    }

    /// `1 / gamma` on the window, the moment net of the Cauchy dual.
    pub fn dual_moment_net(&self, width: usize, height: usize) -> Result<Net2> {
        crate::netcore::reciprocal_net(|m, n| self.eval_u64(m as u64, n as u64), width, height)
    }
}

pub fn gamma_from_rho(r: &RhoSet) -> Result<MomentPolynomial> {
    let g = gamma_from_rho_unchecked(r);
    g.validate()?;
    Ok(g)
}

/// Same coefficients as [`gamma_from_rho`] without the positivity check, so
/// callers can report the failing point themselves.
pub fn gamma_from_rho_unchecked(r: &RhoSet) -> MomentPolynomial {
    let two = rational::int(2);
    MomentPolynomial {
        a1: &r.rho10 - &r.rho20 / &two,
        a2: &r.rho20 / &two,
        b1: r.rho11.clone(),
        b2: &r.rho01 - &r.rho02 / &two,
        c1: &r.rho02 / &two,
    }
}

pub fn rho_from_gamma(g: &MomentPolynomial) -> RhoSet {
    let two = rational::int(2);
    RhoSet {
        rho10: &g.a1 + &g.a2,
        rho01: &g.b2 + &g.c1,
        rho20: &two * &g.a2,
        rho02: &two * &g.c1,
        rho11: g.b1.clone(),
    }
}

/// Squared weights on the window, row-major by `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftWeights {
    width: usize,
    height: usize,
    w1sq: Vec<Rational>,
    w2sq: Vec<Rational>,
}

impl ShiftWeights {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn w1sq(&self, m: usize, n: usize) -> &Rational {
        &self.w1sq[m * self.height + n]
    }

    pub fn w2sq(&self, m: usize, n: usize) -> &Rational {
        &self.w2sq[m * self.height + n]
    }

    /// `||W^alpha e_0||^2` by telescoping along `(0,0) -> (m,0) -> (m,n)`.
    pub fn moment_net(&self) -> Net2 {
        let values = (0..self.width)
            .flat_map(|m| (0..self.height).map(move |n| (m, n)))
            .map(|(m, n)| self.path_product(m, n, true))
            .collect();
        Net2::new(self.width, self.height, values).expect("window is nonempty")
    }

    /// Product of squared weights from the origin to `(m, n)`, moving first
    /// along the first axis (`m_first`) or the second.
    pub fn path_product(&self, m: usize, n: usize, m_first: bool) -> Rational {
        let mut acc = Rational::one();
        if m_first {
            for k in 0..m {
                acc *= self.w1sq(k, 0);
            }
            for k in 0..n {
                acc *= self.w2sq(m, k);
            }
        } else {
            for k in 0..n {
                acc *= self.w2sq(0, k);
            }
            for k in 0..m {
                acc *= self.w1sq(k, n);
            }
        }
        acc
    }

    /// First `alpha` where `w1sq(alpha) w2sq(alpha + e1) != w2sq(alpha) w1sq(alpha + e2)`.
    pub fn commutation_violation(&self) -> Option<MultiIndex2> {
        for m in 0..self.width.saturating_sub(1) {
            for n in 0..self.height.saturating_sub(1) {
                let lhs = self.w1sq(m, n) * self.w2sq(m + 1, n);
                let rhs = self.w2sq(m, n) * self.w1sq(m, n + 1);
                if lhs != rhs {
                    return Some(MultiIndex2::new(m, n));
                }
            }
        }
        None
    }

    /// Largest squared weight on the window.
    pub fn max_weight_sq(&self) -> Rational {
        self.w1sq
            .iter()
            .chain(self.w2sq.iter())
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// One CSV grid `"m,n,w1sq"` (`dir == 0`) or `"m,n,w2sq"`.
    pub fn to_csv(&self, dir: usize) -> String {
        let (name, vals) = if dir == 0 { ("w1sq", &self.w1sq) } else { ("w2sq", &self.w2sq) };
        let mut out = format!("m,n,{name}\n");
        for m in 0..self.width {
            for n in 0..self.height {
                writeln!(out, "{m},{n},{}", rational::format(&vals[m * self.height + n])).expect("write to string");
            }
        }
        out
    }
}

impl Serialize for ShiftWeights {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            width: usize,
            height: usize,
            #[serde(with = "rational::serde_str::vec")]
            w1sq: &'a [Rational],
            #[serde(with = "rational::serde_str::vec")]
            w2sq: &'a [Rational],
        }
        Out { width: self.width, height: self.height, w1sq: &self.w1sq, w2sq: &self.w2sq }.serialize(s)
    }
}

pub fn shift_weights(g: &MomentPolynomial, width: usize, height: usize) -> Result<ShiftWeights> {
    if width == 0 || height == 0 {
        return Err(Error::Dimension(format!("empty window {width}x{height}")));
    }
    // gamma on the window enlarged by one in each direction
    let mut gam = vec![Rational::zero(); (width + 1) * (height + 1)];
    for m in 0..=width {
        for n in 0..=height {
            let v = g.eval_u64(m as u64, n as u64);
            if !v.is_positive() {
                return Err(Error::PreconditionViolated {
                    reason: "gamma is not positive on the window".into(),
                    witness: format!("gamma({m}, {n}) = {}", rational::format(&v)),
                });
            }
            gam[m * (height + 1) + n] = v;
        }
    }
    let at = |m: usize, n: usize| &gam[m * (height + 1) + n];
    let mut w1sq = Vec::with_capacity(width * height);
    let mut w2sq = Vec::with_capacity(width * height);
    for m in 0..width {
        for n in 0..height {
            w1sq.push(at(m + 1, n) / at(m, n));
            w2sq.push(at(m, n + 1) / at(m, n));
        }
    }
    Ok(ShiftWeights { width, height, w1sq, w2sq })
}

/// Entrywise reciprocals: the Cauchy dual of a weighted shift is the shift
/// with weights `1 / w_alpha^(j)`.
pub fn cauchy_dual_weights(w: &ShiftWeights) -> Result<ShiftWeights> {
    let recip = |v: &[Rational]| -> Result<Vec<Rational>> {
        v.iter()
            .map(|x| {
                if x.is_zero() {
                    Err(Error::Parameter("zero weight has no Cauchy dual".into()))
                } else {
                    Ok(x.recip())
                }
            })
            .collect()
    };
    Ok(ShiftWeights { width: w.width, height: w.height, w1sq: recip(&w.w1sq)?, w2sq: recip(&w.w2sq)? })
}

/// Where an isometry identity fails: `Delta^beta gamma(delta) = value != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsometryWitness {
    pub beta: MultiIndex2,
    pub delta: MultiIndex2,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsometryReport {
    pub holds: bool,
    pub witness: Option<IsometryWitness>,
}

pub fn verify_toral_m_isometry(g: &MomentPolynomial, m: usize, width: usize, height: usize) -> Result<IsometryReport> {
    verify_toral_m_isometry_poly(&g.to_poly2(), m, width, height)
}

/// Same check for an arbitrary polynomial moment function. Witnesses are the
/// first `(beta, delta)` with `beta` ordered `(0, m), (1, m - 1), ...` and
/// `delta` row-major.
pub fn verify_toral_m_isometry_poly(gamma: &Poly2, m: usize, width: usize, height: usize) -> Result<IsometryReport> {
    if m == 0 {
        return Err(Error::Parameter("the isometry order must be positive".into()));
    }
    if m > width.min(height) {
        return Err(Error::Dimension(format!("order {m} needs a window of at least {m}x{m}")));
    }
    for i in 0..=m {
        let beta = MultiIndex2::new(i, m - i);
        let mut d = gamma.clone();
        for _ in 0..beta.i {
            d = d.difference(0);
        }
        for _ in 0..beta.j {
            d = d.difference(1);
        }
        for dm in 0..width {
            for dn in 0..height {
                let v = d.eval_u64(dm as u64, dn as u64);
                if !v.is_zero() {
                    return Ok(IsometryReport {
                        holds: false,
                        witness: Some(IsometryWitness { beta, delta: MultiIndex2::new(dm, dn), value: v }),
                    });
                }
            }
        }
    }
    Ok(IsometryReport { holds: true, witness: None })
}

/// First `(alpha, j)` with `gamma(alpha + eps_j) < gamma(alpha)`; `j` is 1 or 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansivityWitness {
    pub alpha: MultiIndex2,
    pub j: u8,
    /// `gamma(alpha + eps_j) - gamma(alpha)`.
    #[serde(with = "rational::serde_str")]
    pub difference: Rational,
    /// Found by the exact decision beyond the scanned window.
    pub beyond_window: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansivityReport {
    pub expansive: bool,
    pub witness: Option<ExpansivityWitness>,
}

/// `W_j* W_j >= I` for both `j`, i.e. every squared weight is at least one.
/// The window is scanned first; the affine differences `Delta_j gamma` are
/// then decided exactly on all of `Z_+^2`.
pub fn check_torally_expansive(g: &MomentPolynomial, width: usize, height: usize) -> Result<ExpansivityReport> {
    let poly = g.to_poly2();
    let diffs = [poly.difference(0), poly.difference(1)];
    for m in 0..width {
        for n in 0..height {
            for (k, d) in diffs.iter().enumerate() {
                let v = d.eval_u64(m as u64, n as u64);
                if v.is_negative() {
                    return Ok(ExpansivityReport {
                        expansive: false,
                        witness: Some(ExpansivityWitness {
                            alpha: MultiIndex2::new(m, n),
                            j: k as u8 + 1,
                            difference: v,
                            beyond_window: false,
                        }),
                    });
                }
            }
        }
    }
    for (k, d) in diffs.iter().enumerate() {
        if let Some(w) = d.grid_violation(false)? {
            return Ok(ExpansivityReport {
                expansive: false,
                witness: Some(ExpansivityWitness {
                    alpha: MultiIndex2::new(w.m as usize, w.n as usize),
                    j: k as u8 + 1,
                    difference: w.value,
                    beyond_window: true,
                }),
            });
        }
    }
    Ok(ExpansivityReport { expansive: true, witness: None })
}

/// `W_j` is a 2-isometry iff the second difference of `gamma` in direction
/// `j` vanishes: `a2 = 0` for `j = 1`, `c1 = 0` for `j = 2`.
pub fn is_coordinate_2_isometry(g: &MomentPolynomial, j: u8) -> Result<bool> {
    match j {
        1 => Ok(g.a2.is_zero()),
        2 => Ok(g.c1.is_zero()),
        _ => Err(Error::Parameter(format!("coordinate must be 1 or 2, got {j}"))),
    }
}

/// `gamma`, `rho` and the squared weights in one record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftBundle {
    pub gamma: MomentPolynomial,
    pub rho: RhoSet,
    pub weights: ShiftWeights,
    pub dual_weights: ShiftWeights,
    #[serde(with = "rational::serde_str")]
    pub max_weight_sq: Rational,
    pub expansive: ExpansivityReport,
}

pub fn shift_bundle(r: &RhoSet, width: usize, height: usize) -> Result<ShiftBundle> {
    let gamma = gamma_from_rho(r)?;
    let weights = shift_weights(&gamma, width, height)?;
    let dual_weights = cauchy_dual_weights(&weights)?;
    let expansive = check_torally_expansive(&gamma, width, height)?;
    Ok(ShiftBundle {
        rho: rho_from_gamma(&gamma),
        max_weight_sq: weights.max_weight_sq(),
        gamma,
        weights,
        dual_weights,
        expansive,
    })
}
