//! JSON files: polytopes, corpus manifests and report fragments.
//!
//! A polytope file is `{"dim": d, "vertices": [[...], ...]}`. Integer
//! coordinates are JSON numbers; rationals (and integers too large for
//! `i64`) are strings such as `"3/2"`.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactlat::{LatticeVector, RationalPoint};
use crate::gen::GenParams;
use crate::idp::{IdpReport, Witness};
use crate::polytope::Polytope;

pub const TOOL: &str = "latcube";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn coord_json(x: &BigRational) -> Value {
    if x.is_integer() {
        if let Some(i) = x.to_integer().to_i64() {
            return json!(i);
        }
    }
    Value::String(x.to_string())
}

fn parse_coord(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(BigInt::from(i)))
            .ok_or_else(|| Error::Parse(format!("coordinate {n} is not an integer"))),
        Value::String(s) => {
            let bad = || Error::Parse(format!("bad coordinate {s:?}"));
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s.trim(), "1"),
            };
            let num: BigInt = num.parse().map_err(|_| bad())?;
            let den: BigInt = den.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        other => Err(Error::Parse(format!("bad coordinate {other}"))),
    }
}

pub fn point_json(p: &RationalPoint) -> Value {
    Value::Array(p.coords().iter().map(coord_json).collect())
}

pub fn lattice_json(v: &LatticeVector) -> Value {
    point_json(&v.to_point())
}

pub fn polytope_json(p: &Polytope) -> Value {
    json!({
        "dim": p.ambient_dim(),
        "vertices": p.vertices().iter().map(point_json).collect::<Vec<_>>(),
    })
}

pub fn polytope_to_string(p: &Polytope) -> String {
    serde_json::to_string(&polytope_json(p)).expect("serializable") + "\n"
}

pub fn polytope_from_json(v: &Value) -> Result<Polytope> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("polytope file must be a JSON object".into()))?;
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing or bad \"dim\"".into()))? as usize;
    let verts = obj
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing or bad \"vertices\"".into()))?;
    if dim == 0 || verts.is_empty() {
        return Err(Error::Parse("empty polytope".into()));
    }
    let mut pts = Vec::with_capacity(verts.len());
    for v in verts {
        let coords = v
            .as_array()
            .ok_or_else(|| Error::Parse("vertex must be an array".into()))?;
        if coords.len() != dim {
            return Err(Error::Parse(format!(
                "vertex has {} coordinates, expected {dim}",
                coords.len()
            )));
        }
        pts.push(RationalPoint::new(
            coords.iter().map(parse_coord).collect::<Result<_>>()?,
        ));
    }
    Polytope::from_vertices_embedded(&pts)
}

pub fn polytope_from_str(s: &str) -> Result<Polytope> {
    polytope_from_json(&serde_json::from_str(s)?)
}

pub fn read_polytope(path: &Path) -> Result<Polytope> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    polytope_from_str(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn write_polytope(path: &Path, p: &Polytope) -> Result<()> {
    std::fs::write(path, polytope_to_string(p))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Cube,
    Prismatoid,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the manifest's directory.
    pub path: String,
    pub kind: InstanceKind,
    pub params: GenParams,
}

pub fn write_manifest(path: &Path, entries: &[ManifestEntry]) -> Result<()> {
    let text = serde_json::to_string_pretty(entries)? + "\n";
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Manifest entries with their files resolved against the manifest's
/// directory.
pub fn read_manifest(path: &Path) -> Result<Vec<(PathBuf, ManifestEntry)>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let entries: Vec<ManifestEntry> = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok(entries
        .into_iter()
        .map(|e| (dir.join(&e.path), e))
        .collect())
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Counterexample {
            point,
            region_point,
        } => json!({
            "counterexample": lattice_json(point),
            "region_point": region_point.as_ref().map(point_json),
        }),
        Witness::Decomposition { x, p, q } => json!({
            "decomposition": {"x": lattice_json(x), "p": lattice_json(p), "q": lattice_json(q)},
        }),
    }
}

pub fn idp_report_json(r: &IdpReport) -> Value {
    json!({
        "pair": [r.pair.0, r.pair.1],
        "verdict": r.verdict,
        "regions_checked": r.regions_checked,
        "checked_k": r.checked_k,
        "witnesses": r.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_rationals() {
        let text = r#"{"dim": 2, "vertices": [[0, 0], ["3/2", 0], [0, "1/2"]]}"#;
        let p = polytope_from_str(text).unwrap();
        assert!(!p.is_lattice());
        let again = polytope_from_str(&polytope_to_string(&p)).unwrap();
        assert_eq!(p, again);
        assert!(polytope_to_string(&p).contains("\"3/2\""));
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "[]",
            r#"{"dim": 2}"#,
            r#"{"dim": 2, "vertices": [[0, 0, 0]]}"#,
            r#"{"dim": 2, "vertices": [[0, "x"]]}"#,
            r#"{"dim": 2, "vertices": [[0, "1/0"]]}"#,
            r#"{"dim": 2, "vertices": [[0.5, 0]]}"#,
        ] {
            assert!(
                matches!(polytope_from_str(bad), Err(Error::Parse(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn canonical_output() {
        let a = polytope_from_str(r#"{"dim": 2, "vertices": [[1, 1], [0, 0], [1, 0], [0, 1]]}"#)
            .unwrap();
        assert_eq!(
            polytope_to_string(&a),
            "{\"dim\":2,\"vertices\":[[0,0],[0,1],[1,0],[1,1]]}\n"
        );
    }
}
