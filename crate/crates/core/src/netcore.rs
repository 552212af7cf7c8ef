//! Truncated two-parameter nets of exact rationals, forward differences and
//! the brute-force complete monotonicity oracle.
//!
//! A net `a` on the window `width x height` passes the joint test of order
//! `K` when `(-1)^{|beta|} (Delta^beta a)_alpha >= 0` for every `beta` with
//! `|beta| <= K` and every base point `alpha` keeping `alpha + beta` inside
//! the window. The separate test only uses `beta = (k, 0)` and `(0, k)`.
//!
//! The oracle can only certify failures. A passing verdict means "no violation
//! up to the given order on the given window", never complete monotonicity of
//! the infinite net.
//!
//! Violations are reported in the fixed order `(|beta|, beta, alpha)`, all
//! lexicographic, so results do not depend on how the work is scheduled.

use std::fmt;

use num::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const DEFAULT_WINDOW: usize = 12;
pub const DEFAULT_MAX_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex2 {
    pub i: usize,
    pub j: usize,
}

impl MultiIndex2 {
    pub const fn new(i: usize, j: usize) -> Self {
        MultiIndex2 { i, j }
    }

    pub fn total(&self) -> usize {
        self.i + self.j
    }
}

impl fmt::Display for MultiIndex2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// Rational values on the window `0 <= m < width`, `0 <= n < height`,
/// stored row-major by `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net2 {
    width: usize,
    height: usize,
    values: Vec<Rational>,
}

impl Net2 {
    pub fn new(width: usize, height: usize, values: Vec<Rational>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!("empty window {width}x{height}")));
        }
        if values.len() != width * height {
            return Err(Error::Dimension(format!(
                "expected {} values for a {width}x{height} window, got {}",
                width * height,
                values.len()
            )));
        }
        Ok(Net2 { width, height, values })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, m: usize, n: usize) -> &Rational {
        assert!(m < self.width && n < self.height, "({m}, {n}) outside {}x{}", self.width, self.height);
        &self.values[m * self.height + n]
    }

    /// Sub-window starting at `(dm, dn)`; the translate `alpha -> a(alpha + delta)`.
    pub fn translate(&self, dm: usize, dn: usize, width: usize, height: usize) -> Result<Net2> {
        if dm + width > self.width || dn + height > self.height || width == 0 || height == 0 {
            return Err(Error::Dimension(format!(
                "sub-window {width}x{height} at ({dm}, {dn}) does not fit in {}x{}",
                self.width, self.height
            )));
        }
        let values = (0..width)
            .flat_map(|m| (0..height).map(move |n| (m, n)))
            .map(|(m, n)| self.get(m + dm, n + dn).clone())
            .collect();
        Net2::new(width, height, values)
    }

    /// Entrywise product on the common window.
    pub fn product(&self, other: &Net2) -> Net2 {
        let width = self.width.min(other.width);
        let height = self.height.min(other.height);
        let values = (0..width)
            .flat_map(|m| (0..height).map(move |n| (m, n)))
            .map(|(m, n)| self.get(m, n) * other.get(m, n))
            .collect();
        Net2 { width, height, values }
    }

    /// One forward difference in direction 1 (`m`) or 2 (`n`).
    fn step(&self, dir1: bool) -> Net2 {
        let (w, h) = if dir1 { (self.width - 1, self.height) } else { (self.width, self.height - 1) };
        let mut values = Vec::with_capacity(w * h);
        for m in 0..w {
            for n in 0..h {
                let next = if dir1 { self.get(m + 1, n) } else { self.get(m, n + 1) };
                values.push(next - self.get(m, n));
            }
        }
        Net2 { width: w, height: h, values }
    }

    /// CSV with header `m,n,value`, rows ordered by `m` then `n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,value\n");
        for m in 0..self.width {
            for n in 0..self.height {
                out.push_str(&format!("{m},{n},{}\n", rational::format(self.get(m, n))));
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct Net2Json {
    width: usize,
    height: usize,
    #[serde(with = "rational::serde_str::vec")]
    values: Vec<Rational>,
}

impl Serialize for Net2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Net2Json { width: self.width, height: self.height, values: self.values.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Net2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Net2Json::deserialize(d)?;
        Net2::new(raw.width, raw.height, raw.values).map_err(serde::de::Error::custom)
    }
}

/// Builds the net `f(m, n)` on the window. `f` returns `None` where it is
/// undefined (a pole, say), which becomes a construction error naming the
/// point.
pub fn net_from_function<F>(f: F, width: usize, height: usize) -> Result<Net2>
where
    F: Fn(MultiIndex2) -> Option<Rational>,
{
    if width == 0 || height == 0 {
        return Err(Error::Dimension(format!("empty window {width}x{height}")));
    }
    let mut values = Vec::with_capacity(width * height);
    for m in 0..width {
        for n in 0..height {
            let v = f(MultiIndex2::new(m, n)).ok_or_else(|| Error::Construction {
                m,
                n,
                reason: "function undefined at this point".into(),
            })?;
            values.push(v);
        }
    }
    Net2::new(width, height, values)
}

/// `Delta^order` of the net on the shrunken window `(width - i) x (height - j)`.
pub fn forward_difference(net: &Net2, order: MultiIndex2) -> Result<Net2> {
    if order.i >= net.width || order.j >= net.height {
        return Err(Error::Dimension(format!(
            "order {order} does not fit in a {}x{} window",
            net.width, net.height
        )));
    }
    let mut cur = net.clone();
    for _ in 0..order.i {
        cur = cur.step(true);
    }
    for _ in 0..order.j {
        cur = cur.step(false);
    }
    Ok(cur)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CmMode {
    Joint,
    Separate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmWitness {
    pub order: MultiIndex2,
    pub base: MultiIndex2,
    /// The signed difference `Delta^order a` at `base` (before applying
    /// `(-1)^{|order|}`).
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmVerdict {
    pub passed: bool,
    pub mode: CmMode,
    pub witness: Option<CmWitness>,
    pub max_order_checked: usize,
    pub grid_used: (usize, usize),
}

impl CmVerdict {
    pub fn summary(&self) -> String {
        match &self.witness {
            None => format!(
                "no violation up to order {} on {}x{}",
                self.max_order_checked, self.grid_used.0, self.grid_used.1
            ),
            Some(w) => format!(
                "violation: Delta^{} at {} = {}",
                w.order,
                w.base,
                rational::format(&w.value)
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmOptions {
    pub max_order: usize,
    pub mode: CmMode,
    /// Worker threads; `1` runs on the calling thread.
    pub jobs: usize,
}

impl Default for CmOptions {
    fn default() -> Self {
        CmOptions { max_order: DEFAULT_MAX_ORDER, mode: CmMode::Joint, jobs: 1 }
    }
}

pub fn check_complete_monotone(net: &Net2, max_order: usize, mode: CmMode) -> Result<CmVerdict> {
    check_complete_monotone_with(net, CmOptions { max_order, mode, jobs: 1 })
}

pub fn check_complete_monotone_with(net: &Net2, opts: CmOptions) -> Result<CmVerdict> {
    let max_order = opts.max_order;
    if max_order >= net.width.min(net.height) {
        return Err(Error::Dimension(format!(
            "max order {max_order} needs a window larger than {}x{}",
            net.width, net.height
        )));
    }
    let verdict = |witness: Option<CmWitness>| CmVerdict {
        passed: witness.is_none(),
        mode: opts.mode,
        witness,
        max_order_checked: max_order,
        grid_used: (net.width, net.height),
    };

    if let Some(w) = first_bad_cell(net, MultiIndex2::new(0, 0)) {
        return Ok(verdict(Some(w)));
    }
    let pool = if opts.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    // level[i] holds Delta^{(i, k - i)} for the current total order k
    // (joint), or just the two pure differences (separate).
    let mut level: Vec<(MultiIndex2, Net2)> = vec![(MultiIndex2::new(0, 0), net.clone())];
    for k in 1..=max_order {
        let jobs = match opts.mode {
            CmMode::Joint => {
                // (i, k - i) from (i, k - 1 - i) by one step in n, except i = k
                // which comes from (k - 1, 0) by one step in m
                let mut tasks: Vec<(MultiIndex2, &Net2, bool)> = level
                    .iter()
                    .map(|(b, net)| (MultiIndex2::new(b.i, b.j + 1), net, false))
                    .collect();
                let last = level.iter().find(|(b, _)| b.j == 0).expect("pure m-difference present");
                tasks.push((MultiIndex2::new(k, 0), &last.1, true));
                tasks
            }
            CmMode::Separate => {
                let m_side = level.iter().find(|(b, _)| b.j == 0).expect("pure m-difference");
                let n_side = level.iter().find(|(b, _)| b.i == 0).expect("pure n-difference");
                vec![
                    (MultiIndex2::new(0, k), &n_side.1, false),
                    (MultiIndex2::new(k, 0), &m_side.1, true),
                ]
            }
        };
        let compute = |(b, src, dir1): &(MultiIndex2, &Net2, bool)| {
            let d = src.step(*dir1);
            let bad = first_bad_cell(&d, *b);
            (*b, d, bad)
        };
        let mut results: Vec<(MultiIndex2, Net2, Option<CmWitness>)> = match &pool {
            Some(pool) => pool.install(|| jobs.par_iter().map(compute).collect()),
            None => jobs.iter().map(compute).collect(),
        };
        results.sort_by_key(|(b, _, _)| *b);
        if let Some(w) = results.iter().find_map(|(_, _, bad)| bad.clone()) {
            return Ok(verdict(Some(w)));
        }
        level = results.into_iter().map(|(b, d, _)| (b, d)).collect();
    }
    Ok(verdict(None))
}

/// First base point (lexicographic) where `(-1)^{|order|} d < 0`.
fn first_bad_cell(diff: &Net2, order: MultiIndex2) -> Option<CmWitness> {
    let odd = order.total() % 2 == 1;
    diff.values.iter().enumerate().find_map(|(idx, v)| {
        let bad = if odd { v.is_positive() } else { v.is_negative() };
        bad.then(|| CmWitness {
            order,
            base: MultiIndex2::new(idx / diff.height, idx % diff.height),
            value: v.clone(),
        })
    })
}

/// One-dimensional oracle: first `(k, index)` in `(k, index)` order where
/// `(-1)^k Delta^k a < 0`, for `k <= max_order`.
pub fn check_sequence_cm(seq: &[Rational], max_order: usize) -> Result<Option<(usize, usize, Rational)>> {
    if max_order >= seq.len() {
        return Err(Error::Dimension(format!(
            "order {max_order} needs more than {} terms",
            seq.len()
        )));
    }
    let mut cur = seq.to_vec();
    for k in 0..=max_order {
        if k > 0 {
            cur = cur.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        let odd = k % 2 == 1;
        if let Some((idx, v)) = cur
            .iter()
            .enumerate()
            .find(|(_, v)| if odd { v.is_positive() } else { v.is_negative() })
        {
            return Ok(Some((k, idx, v.clone())));
        }
    }
    Ok(None)
}

/// Reciprocal net `1 / p(m, n)`; a zero of `p` is a construction error.
pub fn reciprocal_net<F>(p: F, width: usize, height: usize) -> Result<Net2>
where
    F: Fn(usize, usize) -> Rational,
{
    net_from_function(
        |a| {
            let v = p(a.i, a.j);
            (!v.is_zero()).then(|| v.recip())
        },
        width,
        height,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use num::One;

    fn bilinear() -> Net2 {
        net_from_function(|a| Some(int((1 + a.i + a.j + 2 * a.i * a.j) as i64)), 4, 4).unwrap()
    }

    #[test]
    fn net_construction_examples() {
        let ones = net_from_function(|_| Some(Rational::one()), 4, 4).unwrap();
        assert!(ones.values().iter().all(|v| v.is_one()));

        let prod = net_from_function(|a| Some(ratio(1, ((1 + a.i) * (1 + a.j)) as i64)), 3, 3).unwrap();
        assert_eq!(prod.get(2, 1), &ratio(1, 6));

        let b = net_from_function(|a| Some(int((1 + a.i + a.j + 2 * a.i * a.j) as i64)), 2, 2).unwrap();
        // 1 + 1 + 1 + 2 = 5 at (1, 1)
        assert_eq!(b.values(), &[int(1), int(2), int(2), int(5)]);
    }

    #[test]
    fn construction_error_names_point() {
        let err = net_from_function(|a| (a.i != 1 || a.j != 2).then(Rational::one), 3, 3).unwrap_err();
        assert_eq!(err, Error::Construction { m: 1, n: 2, reason: "function undefined at this point".into() });
        assert!(matches!(reciprocal_net(|m, n| int(m as i64 - n as i64), 2, 2), Err(Error::Construction { m: 0, n: 0, .. })));
    }

    #[test]
    fn difference_examples() {
        let ones = net_from_function(|_| Some(Rational::one()), 4, 4).unwrap();
        let d = forward_difference(&ones, MultiIndex2::new(1, 0)).unwrap();
        assert_eq!((d.width(), d.height()), (3, 4));
        assert!(d.values().iter().all(Zero::is_zero));

        assert_eq!(forward_difference(&bilinear(), MultiIndex2::new(1, 1)).unwrap().get(0, 0), &int(2));

        let sq = net_from_function(|a| Some(int((a.i * a.i) as i64)), 4, 2).unwrap();
        assert_eq!(forward_difference(&sq, MultiIndex2::new(2, 0)).unwrap().get(0, 0), &int(2));

        assert!(matches!(forward_difference(&sq, MultiIndex2::new(4, 0)), Err(Error::Dimension(_))));
    }

    #[test]
    fn oracle_examples() {
        let prod = net_from_function(|a| Some(ratio(1, ((1 + a.i) * (1 + a.j)) as i64)), 12, 12).unwrap();
        let v = check_complete_monotone(&prod, 6, CmMode::Joint).unwrap();
        assert!(v.passed && v.witness.is_none());
        assert_eq!(v.grid_used, (12, 12));

        let ones = net_from_function(|_| Some(Rational::one()), 5, 5).unwrap();
        assert!(check_complete_monotone(&ones, 4, CmMode::Joint).unwrap().passed);

        assert!(matches!(check_complete_monotone(&ones, 5, CmMode::Joint), Err(Error::Dimension(_))));
    }

    #[test]
    fn oracle_finds_first_witness_for_bilinear_reciprocal() {
        // frozen from an independent enumeration: the first violation of
        // 1/(1+m+n+2mn) in (|beta|, beta, alpha) order
        let net = reciprocal_net(|m, n| int((1 + m + n + 2 * m * n) as i64), 12, 12).unwrap();
        let v = check_complete_monotone(&net, 6, CmMode::Joint).unwrap();
        let w = v.witness.expect("theory guarantees a violation");
        assert_eq!((w.order, w.base), (MultiIndex2::new(3, 3), MultiIndex2::new(0, 0)));
        assert_eq!(w.value, ratio(-239, 42900));
        // separate monotonicity holds in each variable on this window
        assert!(check_complete_monotone(&net, 6, CmMode::Separate).unwrap().passed);
    }

    #[test]
    fn parallel_matches_serial() {
        let net = reciprocal_net(|m, n| int((1 + m + n + 2 * m * n) as i64), 10, 10).unwrap();
        let serial = check_complete_monotone(&net, 6, CmMode::Joint).unwrap();
        let par = check_complete_monotone_with(&net, CmOptions { max_order: 6, mode: CmMode::Joint, jobs: 4 }).unwrap();
        assert_eq!(serial, par);
    }

    #[test]
    fn sequence_oracle() {
        let harmonic: Vec<_> = (1..=12).map(|k| ratio(1, k)).collect();
        assert_eq!(check_sequence_cm(&harmonic, 8).unwrap(), None);
        let bad: Vec<_> = (0..6).map(int).collect();
        assert_eq!(check_sequence_cm(&bad, 2).unwrap().map(|t| (t.0, t.1)), Some((1, 0)));
    }

    #[test]
    fn json_and_csv_shapes() {
        let net = net_from_function(|a| Some(ratio(1, (1 + a.i + a.j) as i64)), 2, 2).unwrap();
        let js = serde_json::to_string(&net).unwrap();
        assert_eq!(js, r#"{"width":2,"height":2,"values":["1","1/2","1/2","1/3"]}"#);
        let back: Net2 = serde_json::from_str(&js).unwrap();
        assert_eq!(back, net);
        assert!(serde_json::from_str::<Net2>(r#"{"width":2,"height":2,"values":["1"]}"#).is_err());
        assert_eq!(net.to_csv(), "m,n,value\n0,0,1\n0,1,1/2\n1,0,1/2\n1,1,1/3\n");
    }
}
