//! Curated instances with frozen expectations, and a runner that replays
//! them against the deciders and the brute-force oracle.
//!
//! Witnesses of decider-false entries were found once with the joint oracle
//! on a 32x32 window up to order 8 and are stored as `(beta, alpha)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cdsp::{self, Branch, CdspVerdict, Side};
use crate::cmdeciders::{decide_bideg21_cm, decide_bideg22_cm, BiDeg21Params, BiDeg22Params};
use crate::error::Result;
use crate::netcore::{self, CmMode, CmOptions, MultiIndex2, Net2};
use crate::rational::{self, Rational};
use crate::shifts::{gamma_from_rho, RhoSet};
use crate::trace::Verdict;

type Q5 = [(i64, i64); 5];

/// Window and order used for decider-false entries.
pub const FALSE_WINDOW: usize = 32;
pub const FALSE_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Bideg21(BiDeg21Params),
    Bideg22(BiDeg22Params),
    Cdsp(RhoSet),
}

impl Instance {
    pub fn family(&self) -> &'static str {
        match self {
            Instance::Bideg21(_) => "bideg21",
            Instance::Bideg22(_) => "bideg22",
            Instance::Cdsp(_) => "cdsp",
        }
    }

    fn params(&self) -> String {
        let f = rational::format;
        match self {
            Instance::Bideg21(p) => format!("({}, {}, {}, {}, {})", f(&p.b0), f(&p.b1), f(&p.b2), f(&p.a0), f(&p.a1)),
            Instance::Bideg22(p) => format!("({}, {}, {}, {}, {})", f(&p.a0), f(&p.a1), f(&p.a2), f(&p.b0), f(&p.b1)),
            Instance::Cdsp(r) => {
                format!("({}, {}, {}, {}, {})", f(&r.rho10), f(&r.rho01), f(&r.rho20), f(&r.rho02), f(&r.rho11))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    /// Decider true; the oracle must pass on the small window.
    Cm,
    /// Decider false; the oracle must report this `(beta, alpha)` on the
    /// large window, or any witness when `None`.
    NotCm(Option<(MultiIndex2, MultiIndex2)>),
    /// Verdict and branch of `decide_cdsp`; the oracle must agree.
    Cdsp(CdspVerdict, Branch),
    /// Like `Cdsp`, and branch `c` applied directly gives the same verdict.
    CdspBothWays(CdspVerdict, Branch),
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub instance: Instance,
    pub expect: Expectation,
}

const fn mi(i: usize, j: usize) -> MultiIndex2 {
    MultiIndex2::new(i, j)
}

fn i(n: i64) -> (i64, i64) {
    (n, 1)
}

fn e21(name: &'static str, v: Q5, expect: Expectation) -> CorpusEntry {
    CorpusEntry { name: name.into(), instance: Instance::Bideg21(BiDeg21Params::from_ints(v)), expect }
}

fn e22(name: &'static str, v: Q5, expect: Expectation) -> CorpusEntry {
    CorpusEntry { name: name.into(), instance: Instance::Bideg22(BiDeg22Params::from_ints(v)), expect }
}

fn ecd(name: &'static str, r: [i64; 5], expect: Expectation) -> CorpusEntry {
    CorpusEntry { name: name.into(), instance: Instance::Cdsp(RhoSet::from_ints(r.map(i))), expect }
}

fn w(beta: (usize, usize), alpha: (usize, usize)) -> Expectation {
    Expectation::NotCm(Some((mi(beta.0, beta.1), mi(alpha.0, alpha.1))))
}

/// `(b0, b1, b2, a0, a1)`.
pub fn bideg21_true() -> Vec<CorpusEntry> {
    use Expectation::Cm;
    vec![
        e21("21-t1", [i(1), i(1), i(2), i(1), i(1)], Cm),
        e21("21-t2", [i(1), i(1), i(2), i(1), i(2)], Cm),
        e21("21-t3", [i(1), i(1), i(3), i(2), i(2)], Cm),
        e21("21-t4", [i(2), (1, 2), i(3), i(1), (3, 2)], Cm),
    ]
}

/// `(b0, b1, b2, a0, a1)`, all with `a1` outside `[b1, b2]`.
pub fn bideg21_false() -> Vec<CorpusEntry> {
    vec![
        e21("21-f1", [i(1), i(1), i(2), i(1), i(5)], w((5, 1), (0, 4))),
        e21("21-f2", [i(1), i(2), i(3), i(1), i(1)], w((5, 2), (0, 0))),
        e21("21-f3", [i(1), i(2), i(3), i(1), (1, 2)], w((1, 2), (0, 0))),
        e21("21-f4", [i(1), i(1), i(2), i(1), i(10)], w((3, 0), (0, 2))),
        e21("21-f5", [i(2), i(1), i(3), i(1), i(6)], w((6, 0), (0, 6))),
        e21("21-f6", [i(2), i(1), i(3), i(2), (1, 4)], w((1, 2), (0, 0))),
        e21("21-f7", [i(2), i(1), (5, 2), i(1), i(10)], w((3, 0), (0, 6))),
        e21("21-f8", [i(2), i(2), i(2), i(1), (1, 2)], w((2, 2), (0, 0))),
        e21("21-f9", [i(2), i(3), (5, 2), i(2), i(6)], w((8, 0), (0, 3))),
        e21("21-f10", [i(2), i(1), (5, 2), i(2), (1, 3)], w((1, 4), (0, 0))),
    ]
}

/// `(a0, a1, a2, b0, b1)`.
pub fn bideg22_true() -> Vec<CorpusEntry> {
    use Expectation::Cm;
    vec![
        e22("22-t1", [i(1), i(1), i(2), i(2), (3, 2)], Cm),
        e22("22-t2", [i(1), i(2), i(2), i(2), i(2)], Cm),
        e22("22-t3", [i(1), (1, 2), i(3), i(3), i(1)], Cm),
        e22("22-t4", [i(2), i(1), i(3), i(3), i(2)], Cm),
    ]
}

/// `(a0, a1, a2, b0, b1)`. The first entry sits close to the boundary and
/// has no witness inside the standard window; its first violation is
/// `beta = (0, 18)` at `alpha = (2, 0)`.
pub fn bideg22_false() -> Vec<CorpusEntry> {
    vec![
        e22("22-f1", [i(1), i(1), i(2), i(2), (11, 10)], Expectation::NotCm(None)),
        e22("22-f2", [i(1), i(1), i(2), i(2), (1, 2)], w((0, 5), (0, 0))),
        e22("22-f3", [i(1), i(1), i(2), i(2), (1, 10)], w((0, 3), (0, 0))),
        e22("22-f4", [i(1), i(1), i(2), i(3), i(4)], w((7, 0), (0, 1))),
        e22("22-f5", [i(1), i(1), i(2), i(2), i(6)], w((4, 0), (0, 2))),
        e22("22-f6", [i(1), i(1), i(2), i(1), i(4)], w((0, 3), (9, 0))),
        e22("22-f7", [i(1), (1, 2), i(3), i(1), (5, 4)], w((0, 3), (2, 0))),
        e22("22-f8", [i(2), i(1), i(2), i(2), i(4)], w((0, 4), (21, 0))),
        e22("22-f9", [i(1), i(1), i(3), i(2), (1, 10)], w((0, 2), (0, 0))),
        e22("22-f10", [i(1), (1, 2), i(3), i(2), i(4)], w((6, 0), (0, 4))),
    ]
}

/// `(rho10, rho01, rho20, rho02, rho11)`.
pub fn cdsp_examples() -> Vec<CorpusEntry> {
    use CdspVerdict::{NotSubnormal, Subnormal};
    use Expectation::{Cdsp, CdspBothWays};
    vec![
        ecd("cdsp-a", [1, 1, 0, 0, 1], Cdsp(Subnormal, Branch::A)),
        ecd("cdsp-b-ii-pass", [4, 1, 2, 0, 1], Cdsp(Subnormal, Branch::BII)),
        ecd("cdsp-b-ii-fail", [4, 5, 2, 0, 1], Cdsp(NotSubnormal, Branch::BII)),
        ecd("cdsp-b-i", [4, 0, 2, 0, 0], Cdsp(Subnormal, Branch::BI)),
        ecd("cdsp-c-ii", [1, 4, 0, 2, 1], Cdsp(Subnormal, Branch::CII)),
        ecd("cdsp-both", [2, 2, 1, 1, 1], CdspBothWays(Subnormal, Branch::BII)),
    ]
}

pub fn all() -> Vec<CorpusEntry> {
    let mut v = bideg21_true();
    v.extend(bideg21_false());
    v.extend(bideg22_true());
    v.extend(bideg22_false());
    v.extend(cdsp_examples());
    v
}

fn draw(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rational::ratio(rng.random_range(1..=num), rng.random_range(1..=den))
}

fn draw_between(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    lo + (hi - lo) * rational::ratio(rng.random_range(0..=8), 8)
}

fn sorted(a: Rational, b: Rational) -> (Rational, Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `count` seeded decider-true instances, alternating between the two
/// families. The same seed always yields the same entries.
pub fn random_true_entries(seed: u64, count: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = out.len();
        let instance = if k % 2 == 0 {
            let (b1, b2) = sorted(draw(&mut rng, 6, 4), draw(&mut rng, 6, 4));
            let a1 = draw_between(&mut rng, &b1, &b2);
            let p = BiDeg21Params::new(draw(&mut rng, 4, 3), b1, b2, draw(&mut rng, 4, 3), a1);
            if decide_bideg21_cm(&p).map(|t| t.verdict) != Ok(Verdict::Holds) {
                continue;
            }
            Instance::Bideg21(p)
        } else {
            let (a1, a2) = sorted(draw(&mut rng, 6, 3), draw(&mut rng, 6, 3));
            let b1 = draw_between(&mut rng, &a1, &a2);
            let p = BiDeg22Params::new(draw(&mut rng, 4, 3), a1, a2, draw(&mut rng, 12, 2), b1);
            if decide_bideg22_cm(&p).map(|t| t.verdict) != Ok(Verdict::Holds) {
                continue;
            }
            Instance::Bideg22(p)
        };
        out.push(CorpusEntry { name: format!("random-{k}"), instance, expect: Expectation::Cm });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusOptions {
    /// Window and order for decider-true entries and cdsp examples.
    pub window: (usize, usize),
    pub max_order: usize,
    pub jobs: usize,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions { window: (netcore::DEFAULT_WINDOW, netcore::DEFAULT_WINDOW), max_order: netcore::DEFAULT_MAX_ORDER, jobs: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusOutcome {
    pub name: String,
    pub family: &'static str,
    pub params: String,
    /// Decider verdict, as printed.
    pub decider: String,
    /// Oracle summary.
    pub oracle: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn joint(net: &Net2, max_order: usize, jobs: usize) -> Result<netcore::CmVerdict> {
    netcore::check_complete_monotone_with(net, CmOptions { max_order, mode: CmMode::Joint, jobs })
}

fn verdict_str(v: Verdict) -> String {
    match v {
        Verdict::Holds => "cm".into(),
        Verdict::Fails => "not-cm".into(),
        Verdict::PreconditionViolated => "precondition-violated".into(),
    }
}

pub fn run_entry(e: &CorpusEntry, opts: &CorpusOptions) -> Result<CorpusOutcome> {
    let mut out = CorpusOutcome {
        name: e.name.clone(),
        family: e.instance.family(),
        params: e.instance.params(),
        decider: String::new(),
        oracle: String::new(),
        passed: false,
        detail: None,
    };
    match (&e.instance, &e.expect) {
        (Instance::Cdsp(rho), expect) => {
            let g = gamma_from_rho(rho)?;
            let cv = cdsp::cross_validate(&g, opts.window, opts.max_order, opts.jobs)?;
            let d = &cv.decision;
            out.decider = format!("{} ({})", d.verdict.as_str(), d.branch.map_or("-", Branch::as_str));
            out.oracle = format!("{}: {}", cv.agreement.as_str(), cv.oracle.summary());
            let (want_v, want_b, both) = match expect {
                Expectation::Cdsp(v, b) => (*v, *b, false),
                Expectation::CdspBothWays(v, b) => (*v, *b, true),
                _ => return Err(crate::error::Error::WrongCase("cdsp entry needs a cdsp expectation".into())),
            };
            out.passed = d.verdict == want_v && d.branch == Some(want_b) && cv.agreement.consistent();
            if both {
                let (cb, cs) = cdsp::branch_rules(rho, Side::C)?;
                out.passed &= cs == d.is_subnormal();
                out.detail = Some(format!("branch {} gives {}", cb.as_str(), if cs { "subnormal" } else { "not-subnormal" }));
            }
        }
        (inst, expect) => {
            let (verdict, net_small, net_big) = match inst {
                Instance::Bideg21(p) => {
                    let f = |w: usize, h: usize| netcore::reciprocal_net(|m, n| p.eval_u64(m as u64, n as u64), w, h);
                    (decide_bideg21_cm(p)?.verdict, f(opts.window.0, opts.window.1), f(FALSE_WINDOW, FALSE_WINDOW))
                }
                Instance::Bideg22(p) => {
                    let f = |w: usize, h: usize| netcore::reciprocal_net(|m, n| p.eval_u64(m as u64, n as u64), w, h);
                    (decide_bideg22_cm(p)?.verdict, f(opts.window.0, opts.window.1), f(FALSE_WINDOW, FALSE_WINDOW))
                }
                Instance::Cdsp(_) => unreachable!(),
            };
            out.decider = verdict_str(verdict);
            match expect {
                Expectation::Cm => {
                    let r = joint(&net_small?, opts.max_order, opts.jobs)?;
                    out.oracle = r.summary();
                    out.passed = verdict == Verdict::Holds && r.passed;
                }
                Expectation::NotCm(frozen) => {
                    let r = joint(&net_big?, FALSE_ORDER, opts.jobs)?;
                    out.oracle = r.summary();
                    let found = r.witness.as_ref().map(|w| (w.order, w.base));
                    out.passed = verdict == Verdict::Fails
                        && match (frozen, found) {
                            (Some(f), Some(g)) => *f == g,
                            (None, Some(_)) => true,
                            (_, None) => false,
                        };
                    if found.is_none() {
                        out.detail =
                            Some(format!("no witness within {FALSE_WINDOW}x{FALSE_WINDOW} up to order {FALSE_ORDER}"));
                    } else if let (Some(f), Some(g)) = (frozen, found) {
                        if *f != g {
                            out.detail = Some(format!("expected witness Delta^{} at {}", f.0, f.1));
                        }
                    }
                }
                _ => return Err(crate::error::Error::WrongCase("family entry needs a cm expectation".into())),
            }
        }
    }
    Ok(out)
}

/// Runs `entries` in order.
pub fn run(entries: &[CorpusEntry], opts: &CorpusOptions) -> Result<Vec<CorpusOutcome>> {
    entries.iter().map(|e| run_entry(e, opts)).collect()
}

/// Fixed-width text table, one row per outcome.
pub fn table(rows: &[CorpusOutcome]) -> String {
    let mut s = String::new();
    for r in rows {
        s.push_str(&format!(
            "{:<4} {:<16} {:<8} {:<28} {:<26} {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.family,
            r.params,
            r.decider,
            r.oracle
        ));
        if let Some(d) = &r.detail {
            s.push_str(&format!("     {d}\n"));
        }
    }
    s
}
