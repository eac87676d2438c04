//! JSON input files.
//!
//! Parsing errors and validation errors both carry a JSON pointer to the
//! offending value. Points are `"inf"` or `[re, im]`, matrices are
//! `[[a, b], [c, d]]` with complex entries, weights are
//! `{"pi_multiple": "p/q"}` or `{"radians": x}`, and leaf positions may be
//! exact fractions `"p/q"`.

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer};
use serde_path_to_error::{Path, Segment};

use crate::error::Error;
use crate::framed::{FramedRep, RepPresentation, Triangulation, Word};
use crate::grafting::{CuspGraftSpec, EndType, GeodesicGraftSpec, Leaf, Sign, SignedEndData, Spiral};
use crate::moebius::{MoebiusMap, SpherePoint};
use crate::surfaces::SurfaceSignature;
use crate::tolerance::Tolerance;

/// A schema or validation failure at `pointer` (RFC 6901; empty for the root).
#[derive(Debug, Clone, PartialEq)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "{at}: {}", self.message)
    }
}

impl std::error::Error for SchemaError {}

fn at(pointer: impl Into<String>, e: impl fmt::Display) -> SchemaError {
    SchemaError {
        pointer: pointer.into(),
        message: e.to_string(),
    }
}

fn pointer(path: &Path) -> String {
    path.iter()
        .filter_map(|seg| match seg {
            Segment::Seq { index } => Some(index.to_string()),
            Segment::Map { key } => Some(key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => Some(variant.clone()),
            Segment::Unknown => None,
        })
        .map(|s| format!("/{s}"))
        .collect()
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let p = pointer(e.path());
        at(p, e.into_inner())
    })
}

/// Serde adapter writing a rational as `"p/q"` and reading `"p/q"` or an integer.
pub(crate) mod ratio {
    use num_rational::Ratio;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Ratio::from_integer(n)),
            Raw::Text(t) => parse(&t).map_err(de::Error::custom),
        }
    }

    pub fn parse(t: &str) -> Result<Ratio<i64>, String> {
        let (n, d) = t.split_once('/').unwrap_or((t, "1"));
        let n: i64 = n.trim().parse().map_err(|_| format!("invalid fraction {t:?}"))?;
        let d: i64 = d.trim().parse().map_err(|_| format!("invalid fraction {t:?}"))?;
        if d == 0 {
            return Err(format!("zero denominator in {t:?}"));
        }
        Ok(Ratio::new(n, d))
    }
}

/// Reads a leaf position given as a number or as `"p/q"`.
pub(crate) fn position<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Fraction(String),
    }
    match Raw::deserialize(d)? {
        Raw::Number(x) => Ok(x),
        Raw::Fraction(t) => {
            let q = ratio::parse(&t).map_err(serde::de::Error::custom)?;
            Ok(*q.numer() as f64 / *q.denom() as f64)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraft {
    end: EndType,
    length: Option<f64>,
    spiral: Option<Spiral>,
    #[serde(default)]
    leaves: Vec<Leaf>,
    end_sign: Option<Sign>,
    weight_sign: Option<Sign>,
}

/// A cusp or geodesic graft spec with its signs.
///
/// `weight_sign` defaults to `1`. At a geodesic end, a missing `end_sign` or
/// `spiral` is completed from the other so that clockwise means equal signs;
/// with neither, the spiral is clockwise.
pub fn parse_graft_spec(text: &str) -> Result<SignedEndData, SchemaError> {
    let raw: RawGraft = from_json(text)?;
    let tau = raw.weight_sign.unwrap_or(Sign::Plus);
    match raw.end {
        EndType::Cusp => {
            for (key, present) in [
                ("length", raw.length.is_some()),
                ("spiral", raw.spiral.is_some()),
                ("end_sign", raw.end_sign.is_some()),
            ] {
                if present {
                    return Err(at(format!("/{key}"), "not allowed at a cusp end"));
                }
            }
            let spec = CuspGraftSpec::new(raw.leaves).map_err(|e| at("/leaves", e))?;
            Ok(SignedEndData::cusp(spec, tau))
        }
        EndType::Geodesic => {
            let length = raw.length.ok_or_else(|| at("", "missing field `length`"))?;
            let (spiral, sigma) = match (raw.spiral, raw.end_sign) {
                (Some(s), Some(e)) => (s, e),
                (Some(Spiral::Clockwise), None) => (Spiral::Clockwise, tau),
                (Some(Spiral::Anticlockwise), None) => (Spiral::Anticlockwise, -tau),
                (None, Some(e)) => (crate::grafting::spiral_direction(e, tau), e),
                (None, None) => (Spiral::Clockwise, tau),
            };
            let spec = GeodesicGraftSpec::new(length, raw.leaves, spiral).map_err(|e| match e {
                Error::InvalidSpec(ref m) if m.starts_with("boundary length") => at("/length", e),
                _ => at("/leaves", e),
            })?;
            SignedEndData::geodesic(spec, sigma, tau).map_err(|e| at("/spiral", e))
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSignature {
    genus: u32,
    #[serde(default)]
    boundaries: Vec<u32>,
    #[serde(default)]
    punctures: u32,
    #[serde(default)]
    cusps: u32,
}

impl RawSignature {
    fn validate(self, ptr: &str) -> Result<SurfaceSignature, SchemaError> {
        SurfaceSignature::new(self.genus, self.boundaries, self.punctures, self.cusps).map_err(|e| at(ptr, e))
    }
}

/// `{"genus": g, "boundaries": [n_i], "punctures": m, "cusps": p}`.
pub fn parse_signature(text: &str) -> Result<SurfaceSignature, SchemaError> {
    from_json::<RawSignature>(text)?.validate("")
}

/// A bare matrix `[[a, b], [c, d]]`.
pub fn parse_matrix(text: &str) -> Result<MoebiusMap, SchemaError> {
    from_json(text)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRep {
    surface: RawSignature,
    generators: Vec<MoebiusMap>,
    peripherals: Option<Vec<Word>>,
    relator: Option<Word>,
}

impl RawRep {
    fn validate(self, ptr: &str) -> Result<RepPresentation, SchemaError> {
        let surface = self.surface.validate(&format!("{ptr}/surface"))?;
        let result = match (self.peripherals, self.relator) {
            (None, None) => RepPresentation::standard(surface, self.generators),
            (None, Some(_)) => return Err(at(format!("{ptr}/relator"), "a relator needs explicit peripherals")),
            (Some(p), r) => RepPresentation::new(surface, self.generators, p, r.unwrap_or_default()),
        };
        result.map_err(|e| {
            let field = match &e {
                Error::InvalidRepresentation(m) if m.contains("relator") => "/relator",
                Error::InvalidRepresentation(m) if m.contains("peripheral") => "/peripherals",
                Error::InvalidRepresentation(m) if m.contains("generators") => "/generators",
                Error::UnknownGenerator(_) => "/peripherals",
                _ => "",
            };
            at(format!("{ptr}{field}"), e)
        })
    }
}

/// `{"surface": …, "generators": [matrix], "peripherals": [word]?, "relator": word?}`.
///
/// Without `peripherals` the standard presentation is used: generators
/// `a_1, b_1, …, c_1, …, c_{m+k-1}`, punctures first.
pub fn parse_rep(text: &str) -> Result<RepPresentation, SchemaError> {
    from_json::<RawRep>(text)?.validate("")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFramingValue {
    marked_point: usize,
    value: SpherePoint,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFramed {
    rep: RawRep,
    framing: Vec<RawFramingValue>,
    signing: Option<Vec<Option<Sign>>>,
}

impl RawFramed {
    fn validate(self, ptr: &str, tol: &Tolerance) -> Result<FramedRep, SchemaError> {
        let rep = self.rep.validate(&format!("{ptr}/rep"))?;
        let n = rep.surface().marked_points() as usize;
        let mut values: Vec<Option<SpherePoint>> = vec![None; n];
        for (i, v) in self.framing.iter().enumerate() {
            let slot = values.get_mut(v.marked_point).ok_or_else(|| {
                at(
                    format!("{ptr}/framing/{i}/marked_point"),
                    format!("marked point {} out of range (there are {n})", v.marked_point),
                )
            })?;
            if slot.replace(v.value).is_some() {
                return Err(at(
                    format!("{ptr}/framing/{i}/marked_point"),
                    format!("marked point {} framed twice", v.marked_point),
                ));
            }
        }
        let framing = values
            .into_iter()
            .enumerate()
            .map(|(j, v)| v.ok_or_else(|| at(format!("{ptr}/framing"), format!("marked point {j} is not framed"))))
            .collect::<Result<Vec<_>, _>>()?;
        FramedRep::new(rep, framing, self.signing, tol).map_err(|e| at(format!("{ptr}/framing"), e))
    }
}

/// `{"rep": …, "framing": [{"marked_point": i, "value": point}], "signing": [±1 | null]?}`.
pub fn parse_framed(text: &str, tol: &Tolerance) -> Result<FramedRep, SchemaError> {
    from_json::<RawFramed>(text)?.validate("", tol)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTriangulated {
    framed: RawFramed,
    #[serde(flatten)]
    triangulation: Triangulation,
}

/// `{"framed": …, "corners": [{"marked_point": i, "value": point}], "triangles": [[u, v, w]]}`.
pub fn parse_triangulation(text: &str, tol: &Tolerance) -> Result<(FramedRep, Triangulation), SchemaError> {
    let raw: RawTriangulated = from_json(text)?;
    let fr = raw.framed.validate("/framed", tol)?;
    raw.triangulation.validate(&fr, tol).map_err(|e| at("/triangles", e))?;
    Ok((fr, raw.triangulation))
}
