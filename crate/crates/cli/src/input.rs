//! Input documents. Every subcommand reads one JSON object; its shape is
//! recognised from the keys present and then deserialised with a JSON
//! pointer attached to any failure.

use std::path::Path;

use cdsp_core::cmdeciders::{BiDeg21Params, BiDeg22Params, Quadratic1D};
use cdsp_core::netcore::Net2;
use cdsp_core::shifts::{gamma_from_rho_unchecked, rho_from_gamma, MomentPolynomial, RhoSet};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Syntax { path: path.display().to_string(), message: e.to_string() })
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

/// Deserialises `value`, which sits at `base` in the document.
pub fn typed<T: DeserializeOwned>(value: &Value, base: &str) -> CliResult<T> {
    serde_path_to_error::deserialize(value.clone()).map_err(|e| {
        let mut pointer = base.to_string();
        for seg in e.path().iter() {
            match seg {
                serde_path_to_error::Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                serde_path_to_error::Segment::Map { key } => pointer.push_str(&format!("/{}", escape(key))),
                serde_path_to_error::Segment::Enum { variant } => pointer.push_str(&format!("/{}", escape(variant))),
                serde_path_to_error::Segment::Unknown => {}
            }
        }
        if pointer.is_empty() {
            pointer.push('/');
        }
        CliError::schema(pointer, e.inner().to_string())
    })
}

fn object(v: &Value) -> CliResult<&Map<String, Value>> {
    v.as_object().ok_or_else(|| CliError::schema("/", "expected a JSON object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> CliResult<&'a Value> {
    obj.get(key).ok_or_else(|| CliError::schema("/", format!("missing field `{key}`")))
}

#[derive(Debug, Clone)]
pub enum Family {
    Quadratic(Quadratic1D),
    Bideg21(BiDeg21Params),
    Bideg22(BiDeg22Params),
}

impl Family {
    pub fn eval(&self, m: u64, n: u64) -> cdsp_core::Rational {
        match self {
            Family::Quadratic(q) => q.to_poly().eval(&cdsp_core::rational::from_u64(m)),
            Family::Bideg21(p) => p.eval_u64(m, n),
            Family::Bideg22(p) => p.eval_u64(m, n),
        }
    }
}

fn family(obj: &Map<String, Value>) -> CliResult<Family> {
    let name = field(obj, "family")?
        .as_str()
        .ok_or_else(|| CliError::schema("/family", "expected a string"))?;
    let params = field(obj, "params")?;
    match name {
        "quadratic" => Ok(Family::Quadratic(typed(params, "/params")?)),
        "bideg21" => Ok(Family::Bideg21(typed(params, "/params")?)),
        "bideg22" => Ok(Family::Bideg22(typed(params, "/params")?)),
        other => Err(CliError::schema(
            "/family",
            format!("unknown family `{other}`, expected quadratic, bideg21 or bideg22"),
        )),
    }
}

/// Where a moment polynomial came from, echoed in diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Gamma,
    Rho,
    Bundle,
}

/// Reads `gamma` from a gamma object, a rho object or a shift bundle.
/// Positivity is not checked here so deciders can report where it fails.
fn moment(obj: &Map<String, Value>, v: &Value) -> CliResult<Option<(MomentPolynomial, Origin)>> {
    if obj.contains_key("gamma") {
        let g: MomentPolynomial = typed(&obj["gamma"], "/gamma")?;
        if let Some(r) = obj.get("rho") {
            let r: RhoSet = typed(r, "/rho")?;
            if r != rho_from_gamma(&g) {
                return Err(CliError::schema("/rho", "rho does not match gamma"));
            }
        }
        return Ok(Some((g, Origin::Bundle)));
    }
    if obj.contains_key("rho10") {
        let r: RhoSet = typed(v, "")?;
        return Ok(Some((gamma_from_rho_unchecked(&r), Origin::Rho)));
    }
    if obj.contains_key("c1") || obj.contains_key("a1") {
        return Ok(Some((typed(v, "")?, Origin::Gamma)));
    }
    Ok(None)
}

pub enum DecideInput {
    Moment(MomentPolynomial, Origin),
    Family(Family),
}

pub fn decide_input(v: &Value) -> CliResult<DecideInput> {
    let obj = object(v)?;
    if obj.contains_key("family") {
        return Ok(DecideInput::Family(family(obj)?));
    }
    match moment(obj, v)? {
        Some((g, o)) => Ok(DecideInput::Moment(g, o)),
        None => Err(CliError::schema("/", "expected gamma, rho, a shift bundle or a family object")),
    }
}

pub enum OracleInput {
    Net(Net2),
    Moment(MomentPolynomial),
    Family(Family),
}

pub fn oracle_input(v: &Value) -> CliResult<OracleInput> {
    let obj = object(v)?;
    if obj.contains_key("width") || obj.contains_key("values") {
        return Ok(OracleInput::Net(typed(v, "")?));
    }
    if obj.contains_key("family") {
        return Ok(OracleInput::Family(family(obj)?));
    }
    match moment(obj, v)? {
        Some((g, _)) => Ok(OracleInput::Moment(g)),
        None => Err(CliError::schema("/", "expected a net, gamma, rho, a shift bundle or a family object")),
    }
}

/// `rho`, or `gamma` converted to its rho parameters.
pub fn shift_input(v: &Value) -> CliResult<RhoSet> {
    let obj = object(v)?;
    match moment(obj, v)? {
        Some((g, _)) => Ok(rho_from_gamma(&g)),
        None => Err(CliError::schema("/", "expected rho, gamma or a shift bundle")),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bideg21Measure {
    #[allow(dead_code)]
    source: String,
    pub params: BiDeg21Params,
    pub moments: Vec<(u64, u64)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Line22Measure {
    #[allow(dead_code)]
    source: String,
    pub params: BiDeg22Params,
    pub moments: Vec<(u64, u64)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineRootsMeasure {
    #[allow(dead_code)]
    source: String,
    pub roots: (f64, f64),
    pub moments: Vec<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelMeasure {
    #[allow(dead_code)]
    source: String,
    pub z: Vec<f64>,
}

pub enum MeasureInput {
    Bideg21(Bideg21Measure),
    Line22(Line22Measure),
    LineRoots(LineRootsMeasure),
    Kernel(KernelMeasure),
}

pub fn measure_input(v: &Value) -> CliResult<MeasureInput> {
    let obj = object(v)?;
    let source = field(obj, "source")?
        .as_str()
        .ok_or_else(|| CliError::schema("/source", "expected a string"))?;
    match source {
        "bideg21" => Ok(MeasureInput::Bideg21(typed(v, "")?)),
        "line22" => Ok(MeasureInput::Line22(typed(v, "")?)),
        "line-roots" => Ok(MeasureInput::LineRoots(typed(v, "")?)),
        "kernel" => Ok(MeasureInput::Kernel(typed(v, "")?)),
        other => Err(CliError::schema(
            "/source",
            format!("unknown source `{other}`, expected bideg21, line22, line-roots or kernel"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pointer_into_params() {
        let v = json!({"family": "bideg21", "params": {"b0": "1", "b1": "x", "b2": "2", "a0": "1", "a1": "1"}});
        match decide_input(&v) {
            Err(CliError::Schema { pointer, .. }) => assert_eq!(pointer, "/params/b1"),
            _ => panic!(),
        }
    }

    #[test]
    fn pointer_into_list() {
        let v = json!({"source": "bideg21", "params": {"b0": "1", "b1": "1", "b2": "2", "a0": "1", "a1": "1"}, "moments": [[0, 0], [1, -1]]});
        match measure_input(&v) {
            Err(CliError::Schema { pointer, .. }) => assert_eq!(pointer, "/moments/1/1"),
            _ => panic!(),
        }
    }

    #[test]
    fn shapes_are_recognised() {
        let rho = json!({"rho10": "1", "rho01": "1", "rho20": "0", "rho02": "0", "rho11": "1"});
        assert!(matches!(decide_input(&rho).unwrap(), DecideInput::Moment(_, Origin::Rho)));
        let net = json!({"width": 1, "height": 1, "values": ["1"]});
        assert!(matches!(oracle_input(&net).unwrap(), OracleInput::Net(_)));
        assert!(matches!(decide_input(&json!([])), Err(CliError::Schema { .. })));
    }

    #[test]
    fn bundle_rho_must_match() {
        let g = json!({"a1": "1", "a2": "0", "b1": "1", "b2": "1", "c1": "0"});
        let bad = json!({"gamma": g, "rho": {"rho10": "2", "rho01": "1", "rho20": "0", "rho02": "0", "rho11": "1"}});
        match decide_input(&bad) {
            Err(CliError::Schema { pointer, .. }) => assert_eq!(pointer, "/rho"),
            _ => panic!(),
        }
    }
}
