//! Exact deciders and brute-force oracles for complete monotonicity of
//! two-variable nets, representing densities, and Cauchy dual
//! subnormality of toral 3-isometric weighted 2-shifts.
//!
//! All decisions run in exact rational arithmetic; only the measure
//! module uses floating point.

pub mod cdsp;
pub mod cmdeciders;
pub mod corpus;
pub mod error;
pub mod measures;
pub mod netcore;
pub mod poly;
pub mod rational;
pub mod shifts;
pub mod trace;

pub use cdsp::{cross_validate, decide_cdsp, Agreement, Branch, CdspDecision, CdspVerdict, CrossValidation};
pub use cmdeciders::{
    decide_bideg21_cm, decide_bideg22_cm, decide_quadratic_reciprocal_cm, line_restriction_sequence, BiDeg21Params,
    BiDeg22Params, Quadratic1D,
};
pub use error::{Error, Result};
pub use measures::{kernel_eval, verify_line_density, verify_moment_integral, MomentReport};
pub use netcore::{check_complete_monotone, forward_difference, net_from_function, CmMode, CmVerdict, MultiIndex2, Net2};
pub use rational::Rational;
pub use shifts::{gamma_from_rho, rho_from_gamma, shift_bundle, MomentPolynomial, RhoSet, ShiftBundle};
pub use trace::{DecisionTrace, Verdict};
