//! Joint subnormality of the Cauchy dual of a torally expansive toral
//! 3-isometric weighted 2-shift, decided from the five `rho` parameters.
//!
//! Dispatch:
//!
//! * `rho20 = rho02 = 0` (both coordinates 2-isometries), branch `a`:
//!   subnormal iff `rho11 <= rho10 rho01`.
//! * `rho20 > 0`, branch `b`: the gate `rho1 > 0`, `rho1^2 >= 8 rho20`, then
//!   (i) `rho11 = rho01 = rho02 = 0`, or
//!   (ii) `rho11 > 0`, `rho2 > 0`, `rho11^2 >= rho20 rho02` and
//!   `(rho20 rho2 - rho11 rho1)^2 <= 4 (rho11^2 - rho20 rho02)(rho1^2/4 - 2 rho20)`.
//!   The sub-case label follows `rho11` (zero or positive); `rho11 = 0` with
//!   (i) failing, or `rho11 < 0`, gives `b-none`, reported as not subnormal.
//! * `rho20 = 0 < rho02`, branch `c`: the mirror image of `b`.
//!
//! The last inequality of (ii) is the (2,2) criterion of
//! [`decide_bideg22_cm`](crate::cmdeciders::decide_bideg22_cm) applied to
//! `gamma / c1` and multiplied through by `16 a2^2 c1^2`; when `rho02 = 0`
//! it reads `(rho20 rho2 - rho11 rho1)^2 <= 4 rho11^2 (rho1^2/4 - 2 rho20)`.
//!
//! The Cauchy dual is subnormal iff `1 / gamma` is jointly completely
//! monotone, which [`cross_validate`] tests with the brute-force oracle.

use num::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::netcore::{self, CmMode, CmOptions, CmVerdict, DEFAULT_WINDOW};
use crate::rational::{self, Rational};
use crate::shifts::{check_torally_expansive, rho_from_gamma, verify_toral_m_isometry, MomentPolynomial, RhoSet};
use crate::trace::{CheckValue, DecisionTrace, Verdict};

/// Stable check names used in the decision trace.
pub mod names {
    pub const POSITIVE: &str = "gamma > 0 on Z+^2";
    pub const EXPANSIVE: &str = "torally expansive";
    pub const THREE_ISOMETRY: &str = "toral 3-isometry";

    pub const A_MAIN: &str = "rho11 <= rho10 rho01";

    pub const B_RHO1_POS: &str = "rho1 > 0";
    pub const B_GATE: &str = "rho1^2 >= 8 rho20";
    pub const B_I_RHO11: &str = "(i) rho11 = 0";
    pub const B_I_RHO01: &str = "(i) rho01 = 0";
    pub const B_I_RHO02: &str = "(i) rho02 = 0";
    pub const B_II_RHO11: &str = "(ii) rho11 > 0";
    pub const B_II_RHO2: &str = "(ii) rho2 > 0";
    pub const B_II_CROSS: &str = "(ii) rho11^2 >= rho20 rho02";
    pub const B_II_MAIN: &str = "(ii) (rho20 rho2 - rho11 rho1)^2 <= 4(rho11^2 - rho20 rho02)(rho1^2/4 - 2 rho20)";

    pub const C_RHO2_POS: &str = "rho2 > 0";
    pub const C_GATE: &str = "rho2^2 >= 8 rho02";
    pub const C_I_RHO11: &str = "(i) rho11 = 0";
    pub const C_I_RHO10: &str = "(i) rho10 = 0";
    pub const C_I_RHO20: &str = "(i) rho20 = 0";
    pub const C_II_RHO11: &str = "(ii) rho11 > 0";
    pub const C_II_RHO1: &str = "(ii) rho1 > 0";
    pub const C_II_CROSS: &str = "(ii) rho11^2 >= rho20 rho02";
    pub const C_II_MAIN: &str = "(ii) (rho02 rho1 - rho11 rho2)^2 <= 4(rho11^2 - rho20 rho02)(rho2^2/4 - 2 rho02)";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdspVerdict {
    Subnormal,
    NotSubnormal,
    PreconditionViolated,
}

impl CdspVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CdspVerdict::Subnormal => "subnormal",
            CdspVerdict::NotSubnormal => "not-subnormal",
            CdspVerdict::PreconditionViolated => "precondition-violated",
        }
    }
}

impl Serialize for CdspVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    A,
    BI,
    BII,
    BNone,
    CI,
    CII,
    CNone,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::A => "a",
            Branch::BI => "b-i",
            Branch::BII => "b-ii",
            Branch::BNone => "b-none",
            Branch::CI => "c-i",
            Branch::CII => "c-ii",
            Branch::CNone => "c-none",
        }
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    Positivity,
    Expansivity,
    ThreeIsometry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PreconditionFailure {
    pub hypothesis: Hypothesis,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CdspDecision {
    pub verdict: CdspVerdict,
    pub branch: Option<Branch>,
    pub checks: DecisionTrace,
    pub rho: RhoSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precondition: Option<PreconditionFailure>,
}

impl CdspDecision {
    pub fn is_subnormal(&self) -> bool {
        self.verdict == CdspVerdict::Subnormal
    }
}

fn violated(mut t: DecisionTrace, rho: RhoSet, hypothesis: Hypothesis, witness: String) -> CdspDecision {
    t.verdict = Verdict::PreconditionViolated;
    CdspDecision {
        verdict: CdspVerdict::PreconditionViolated,
        branch: None,
        checks: t,
        rho,
        precondition: Some(PreconditionFailure { hypothesis, witness }),
    }
}

/// Checks the three hypotheses, then applies the branch rules.
pub fn decide_cdsp(g: &MomentPolynomial) -> Result<CdspDecision> {
    let rho = rho_from_gamma(g);
    let mut t = DecisionTrace::new();

    if let Some(w) = g.to_poly2().grid_violation(true)? {
        t.push(names::POSITIVE, CheckValue::from(&w), false);
        return Ok(violated(t, rho, Hypothesis::Positivity, w.to_string()));
    }
    t.push(names::POSITIVE, CheckValue::None, true);

    let exp = check_torally_expansive(g, DEFAULT_WINDOW, DEFAULT_WINDOW)?;
    if let Some(w) = exp.witness {
        let witness = format!("gamma(alpha + e{}) - gamma(alpha) = {} at alpha = {}", w.j, rational::format(&w.difference), w.alpha);
        t.push(
            names::EXPANSIVE,
            CheckValue::Point { m: w.alpha.i as u64, n: w.alpha.j as u64, value: w.difference },
            false,
        );
        return Ok(violated(t, rho, Hypothesis::Expansivity, witness));
    }
    t.push(names::EXPANSIVE, CheckValue::None, true);

    let iso = verify_toral_m_isometry(g, 3, DEFAULT_WINDOW, DEFAULT_WINDOW)?;
    if let Some(w) = iso.witness {
        let witness = format!("Delta^{} gamma({}) = {}", w.beta, w.delta, rational::format(&w.value));
        t.push(names::THREE_ISOMETRY, CheckValue::Text(witness.clone()), false);
        return Ok(violated(t, rho, Hypothesis::ThreeIsometry, witness));
    }
    t.push(names::THREE_ISOMETRY, CheckValue::None, true);

    Ok(decide_from_rho(rho, t))
}

fn is_zero_check(t: &mut DecisionTrace, name: &'static str, v: &Rational) -> bool {
    t.push(name, CheckValue::Scalar(v.clone()), v.is_zero())
}

struct Axis<'a> {
    // rho20 (rho02) of the coordinate that is not a 2-isometry
    r_main2: &'a Rational,
    // rho01, rho02 (rho10, rho20) of the other coordinate
    r_other: &'a Rational,
    r_other2: &'a Rational,
    main_sum: Rational,
    other_sum: Rational,
}

struct AxisNames {
    main_pos: &'static str,
    gate: &'static str,
    i_rho11: &'static str,
    i_other: &'static str,
    i_other2: &'static str,
    ii_rho11: &'static str,
    ii_other: &'static str,
    ii_cross: &'static str,
    ii_main: &'static str,
}

const B_NAMES: AxisNames = AxisNames {
    main_pos: names::B_RHO1_POS,
    gate: names::B_GATE,
    i_rho11: names::B_I_RHO11,
    i_other: names::B_I_RHO01,
    i_other2: names::B_I_RHO02,
    ii_rho11: names::B_II_RHO11,
    ii_other: names::B_II_RHO2,
    ii_cross: names::B_II_CROSS,
    ii_main: names::B_II_MAIN,
};

const C_NAMES: AxisNames = AxisNames {
    main_pos: names::C_RHO2_POS,
    gate: names::C_GATE,
    i_rho11: names::C_I_RHO11,
    i_other: names::C_I_RHO10,
    i_other2: names::C_I_RHO20,
    ii_rho11: names::C_II_RHO11,
    ii_other: names::C_II_RHO1,
    ii_cross: names::C_II_CROSS,
    ii_main: names::C_II_MAIN,
};

/// Returns `(gate, case_i, case_ii)` for the non-isometric coordinate.
fn axis_checks(t: &mut DecisionTrace, ax: &Axis<'_>, rho11: &Rational, cross: &Rational, nm: &AxisNames) -> (bool, bool, bool) {
    let eight = rational::int(8);
    let four = rational::int(4);
    let rs = &ax.main_sum;
    let gate = t.positive(nm.main_pos, rs) & t.le(nm.gate, &eight * ax.r_main2, rs * rs);

    let case_i = is_zero_check(t, nm.i_rho11, rho11) & is_zero_check(t, nm.i_other, ax.r_other) & is_zero_check(t, nm.i_other2, ax.r_other2);

    let lhs_inner = ax.r_main2 * &ax.other_sum - rho11 * rs;
    let rhs = &four * (rho11 * rho11 - cross) * (rs * rs / &four - rational::int(2) * ax.r_main2);
    let case_ii = t.positive(nm.ii_rho11, rho11)
        & t.positive(nm.ii_other, &ax.other_sum)
        & t.le(nm.ii_cross, cross.clone(), rho11 * rho11)
        & t.le(nm.ii_main, &lhs_inner * &lhs_inner, rhs);
    (gate, case_i, case_ii)
}

/// Which coordinate plays the non-isometric role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    B,
    C,
}

fn side_rules(rho: &RhoSet, side: Side, t: &mut DecisionTrace) -> (Branch, bool) {
    let cross = &rho.rho20 * &rho.rho02;
    let (ax, nm) = match side {
        Side::B => (
            Axis {
                r_main2: &rho.rho20,
                r_other: &rho.rho01,
                r_other2: &rho.rho02,
                main_sum: rho.rho1(),
                other_sum: rho.rho2(),
            },
            &B_NAMES,
        ),
        Side::C => (
            Axis {
                r_main2: &rho.rho02,
                r_other: &rho.rho10,
                r_other2: &rho.rho20,
                main_sum: rho.rho2(),
                other_sum: rho.rho1(),
            },
            &C_NAMES,
        ),
    };
    let (gate, i, ii) = axis_checks(t, &ax, &rho.rho11, &cross, nm);
    // the sign of rho11 selects the sub-case: (i) needs rho11 = 0 and
    // (ii) rho11 > 0, so at most one holds
    let case = if i {
        Some(true)
    } else if rho.rho11.is_positive() {
        Some(false)
    } else {
        None
    };
    let branch = match (side, case) {
        (Side::B, Some(true)) => Branch::BI,
        (Side::B, Some(false)) => Branch::BII,
        (Side::B, None) => Branch::BNone,
        (Side::C, Some(true)) => Branch::CI,
        (Side::C, Some(false)) => Branch::CII,
        (Side::C, None) => Branch::CNone,
    };
    (branch, gate && (i ^ ii))
}

/// Applies the rules of branch `b` or `c` directly, skipping dispatch and
/// the hypothesis checks. Used to compare both branches when `rho20` and
/// `rho02` are both positive.
pub fn branch_rules(rho: &RhoSet, side: Side) -> Result<(Branch, bool)> {
    let main2 = match side {
        Side::B => &rho.rho20,
        Side::C => &rho.rho02,
    };
    if !main2.is_positive() {
        return Err(Error::WrongCase(format!("branch {side:?} needs a positive second difference on its axis")));
    }
    Ok(side_rules(rho, side, &mut DecisionTrace::new()))
}

fn decide_from_rho(rho: RhoSet, mut t: DecisionTrace) -> CdspDecision {
    let (branch, subnormal) = if rho.rho20.is_zero() && rho.rho02.is_zero() {
        let ok = t.le(names::A_MAIN, rho.rho11.clone(), &rho.rho10 * &rho.rho01);
        (Branch::A, ok)
    } else {
        let side = if rho.rho20.is_positive() { Side::B } else { Side::C };
        side_rules(&rho, side, &mut t)
    };
    t.verdict = Verdict::from_bool(subnormal);
    if matches!(branch, Branch::BNone | Branch::CNone) {
        t = t.with_note("neither sub-case holds; branch flagged for audit");
    }
    CdspDecision {
        verdict: if subnormal { CdspVerdict::Subnormal } else { CdspVerdict::NotSubnormal },
        branch: Some(branch),
        checks: t,
        rho,
        precondition: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    /// Subnormal and no oracle violation.
    Confirmed,
    /// Not subnormal and the oracle exhibits a violation.
    WitnessFound,
    /// Not subnormal but no violation inside the searched window.
    WitnessNotFound,
    /// Subnormal yet the oracle found a violation: a bug.
    Contradiction,
}

impl Agreement {
    pub fn as_str(self) -> &'static str {
        match self {
            Agreement::Confirmed => "confirmed",
            Agreement::WitnessFound => "witness-found",
            Agreement::WitnessNotFound => "witness-not-found",
            Agreement::Contradiction => "contradiction",
        }
    }

    /// Only a contradiction is a failure.
    pub fn consistent(self) -> bool {
        self != Agreement::Contradiction
    }
}

impl Serialize for Agreement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub decision: CdspDecision,
    pub oracle: CmVerdict,
    pub agreement: Agreement,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
}

/// Runs [`decide_cdsp`] and the joint oracle on `1 / gamma`.
pub fn cross_validate(g: &MomentPolynomial, window: (usize, usize), max_order: usize, jobs: usize) -> Result<CrossValidation> {
    let decision = decide_cdsp(g)?;
    if let Some(p) = &decision.precondition {
        return Err(Error::PreconditionViolated {
            reason: format!("{:?} hypothesis fails", p.hypothesis).to_lowercase(),
            witness: p.witness.clone(),
        });
    }
    let net = g.dual_moment_net(window.0, window.1)?;
    let oracle = netcore::check_complete_monotone_with(&net, CmOptions { max_order, mode: CmMode::Joint, jobs })?;
    let (agreement, hint) = match (decision.is_subnormal(), oracle.passed) {
        (true, true) => (Agreement::Confirmed, None),
        (true, false) => (Agreement::Contradiction, Some("decider and oracle disagree".to_string())),
        (false, false) => (Agreement::WitnessFound, None),
        (false, true) => (
            Agreement::WitnessNotFound,
            Some(format!(
                "no violation within {}x{} up to order {max_order}; enlarge the window or the order",
                window.0, window.1
            )),
        ),
    };
    Ok(CrossValidation { decision, oracle, agreement, hint })
}
