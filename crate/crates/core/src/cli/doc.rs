//! JSON documents: series, truncated series, even elements and operators.
//!
//! Rationals are strings in the canonical Gaussian text form; polynomials
//! are objects keyed by comma-separated exponent vectors in term order.

use serde_json::{json, Map, Value};

use crate::algebra::{GaussianRational, Monomial, MultiPoly, TruncSeries, Vars};
use crate::error::{Error, Result};
use crate::hff::{AnnihilatorOp, LinearInT};
use crate::insertion::{EvenElement, Factor, SurfaceMode};
use crate::lattice::{self, CohClass, Lattice, ManifoldData};
use crate::series::{DonaldsonSeries, OneCycleWord, Sector, SeriesFlags, TermMap};

type Gr = GaussianRational;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| parse_err(format!("{what} must be a string")))
}

fn as_u32(v: &Value, what: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| parse_err(format!("{what} must be a non-negative integer")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(format!("{what} must be an integer")))
}

fn as_bool(v: &Value, what: &str) -> Result<bool> {
    v.as_bool().ok_or_else(|| parse_err(format!("{what} must be a boolean")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

pub fn int_vec(v: &Value, what: &str) -> Result<Vec<i64>> {
    as_array(v, what)?.iter().map(|x| as_i64(x, what)).collect()
}

fn string_vec(v: &Value, what: &str) -> Result<Vec<String>> {
    as_array(v, what)?.iter().map(|x| as_str(x, what).map(str::to_owned)).collect()
}

pub fn gr(v: &Value) -> Result<Gr> {
    as_str(v, "coefficient")?.parse()
}

pub fn gr_value(c: &Gr) -> Value {
    Value::String(c.to_string())
}

pub fn class_value(k: &CohClass) -> Value {
    json!(k.coords())
}

pub fn poly_value(p: &MultiPoly) -> Value {
    let mut m = Map::new();
    for (mono, c) in p.terms() {
        m.insert(mono.to_key(), gr_value(c));
    }
    Value::Object(m)
}

pub fn poly_from(v: &Value, vars: &Vars) -> Result<MultiPoly> {
    let obj = v.as_object().ok_or_else(|| parse_err("poly must be an object"))?;
    let mut p = MultiPoly::zero(vars.clone());
    for (key, c) in obj {
        p.add_term(Monomial::from_key(key, vars.len())?, gr(c)?);
    }
    Ok(p)
}

fn manifold_fields(m: &ManifoldData, w: &CohClass, zword: &OneCycleWord, out: &mut Map<String, Value>) {
    let l = &m.lattice;
    out.insert("name".into(), json!(m.name));
    out.insert("b1".into(), json!(m.b1));
    out.insert("bplus".into(), json!(m.bplus));
    out.insert("manifold_sst".into(), json!(m.sst));
    out.insert("lattice".into(), json!({ "rank": l.rank(), "gram": l.gram(), "labels": l.labels() }));
    out.insert("w".into(), class_value(w));
    out.insert("zword".into(), json!({ "labels": zword.labels(), "deg2z": zword.deg2z() }));
}

/// Manifold, reference class and one-cycle word carried by a document.
pub struct Header {
    pub manifold: ManifoldData,
    pub w: CohClass,
    pub zword: OneCycleWord,
}

fn header_from(doc: &Value) -> Result<Header> {
    let lat = field(doc, "lattice")?;
    let gram: Vec<Vec<i64>> =
        as_array(field(lat, "gram")?, "gram")?.iter().map(|row| int_vec(row, "gram row")).collect::<Result<_>>()?;
    if let Some(rank) = lat.get("rank") {
        let rank = as_u32(rank, "rank")? as usize;
        if rank != gram.len() {
            return Err(Error::RankMismatch { expected: rank, got: gram.len() });
        }
    }
    let lattice = match lat.get("labels") {
        Some(l) => Lattice::new(gram, string_vec(l, "labels")?)?,
        None => Lattice::with_gram(gram)?,
    };
    let name = as_str(field(doc, "name")?, "name")?;
    let mut manifold =
        ManifoldData::new(name, lattice, as_u32(field(doc, "b1")?, "b1")?, as_u32(field(doc, "bplus")?, "bplus")?)?;
    if let Some(v) = doc.get("manifold_sst") {
        manifold.sst = as_bool(v, "manifold_sst")?;
    }
    let rank = manifold.rank();
    let w = match doc.get("w") {
        Some(v) => CohClass::new(int_vec(v, "w")?),
        None => CohClass::zero(rank),
    };
    if w.rank() != rank {
        return Err(Error::RankMismatch { expected: rank, got: w.rank() });
    }
    let zword = match doc.get("zword") {
        Some(z) => {
            let labels = string_vec(field(z, "labels")?, "zword labels")?;
            match z.get("deg2z") {
                Some(d) => OneCycleWord::from_parts(labels, as_i64(d, "deg2z")?)?,
                None => OneCycleWord::new(labels)?,
            }
        }
        None => OneCycleWord::empty(),
    };
    Ok(Header { manifold, w, zword })
}

pub fn series_value(s: &DonaldsonSeries) -> Value {
    let mut out = Map::new();
    manifold_fields(s.manifold(), s.w(), s.zword(), &mut out);
    let d0 = s.dimension().map(|d| json!(d.d0_minus_d_mod4())).unwrap_or(Value::Null);
    out.insert("d0mod4".into(), d0);
    let f = s.flags();
    out.insert("flags".into(), json!({ "characteristic": f.characteristic, "symmetric": f.symmetric, "sst": f.sst }));
    let terms: Vec<Value> = s
        .terms()
        .map(|(sector, k, p)| json!({ "sector": sector.as_str(), "K": class_value(k), "poly": poly_value(p) }))
        .collect();
    out.insert("terms".into(), Value::Array(terms));
    Value::Object(out)
}

/// Parses a series document. Declared flags are validated; without a
/// `flags` object the maximal flags are inferred.
pub fn series_from(doc: &Value) -> Result<DonaldsonSeries> {
    let Header { manifold, w, zword } = header_from(doc)?;
    let rank = manifold.rank();
    let vars = Vars::series(rank);
    let mut terms = TermMap::new();
    for t in as_array(field(doc, "terms")?, "terms")? {
        let sector: Sector = as_str(field(t, "sector")?, "sector")?.parse()?;
        let k = CohClass::new(int_vec(field(t, "K")?, "K")?);
        if k.rank() != rank {
            return Err(Error::RankMismatch { expected: rank, got: k.rank() });
        }
        let p = poly_from(field(t, "poly")?, &vars)?;
        if terms.insert((sector, k.clone()), p).is_some() {
            return Err(Error::InvalidInput(format!("duplicate {sector} term for class {k:?}")));
        }
    }
    let s = match doc.get("flags") {
        Some(f) => {
            let flags = SeriesFlags {
                characteristic: as_bool(field(f, "characteristic")?, "characteristic")?,
                symmetric: as_bool(field(f, "symmetric")?, "symmetric")?,
                sst: as_bool(field(f, "sst")?, "sst")?,
            };
            DonaldsonSeries::from_map(manifold, w, zword, terms, flags)?
        }
        None => DonaldsonSeries::from_map(manifold, w, zword, terms, SeriesFlags::default())?.canonicalize(),
    };
    if let Some(v) = doc.get("d0mod4") {
        if !v.is_null() {
            let claimed = as_i64(v, "d0mod4")?;
            let dim = lattice::d0_mod4(s.manifold(), s.w(), s.zword().deg2z())?;
            if claimed != dim.d0_minus_d_mod4() {
                return Err(Error::InvalidInput(format!(
                    "d0mod4 is {claimed} but the manifold data give {}",
                    dim.d0_minus_d_mod4()
                )));
            }
        }
    }
    Ok(s)
}

/// Truncated-series document; `source` carries the manifold header when
/// the series came from `expand`.
pub fn trunc_value(g: &TruncSeries, source: Option<&DonaldsonSeries>) -> Value {
    let mut out = Map::new();
    out.insert("vars".into(), json!(g.vars().names()));
    out.insert("cutoff".into(), json!(g.cutoff()));
    out.insert("lambda_cutoff".into(), json!(g.lambda_cutoff()));
    if let Some(s) = source {
        let mut h = Map::new();
        manifold_fields(s.manifold(), s.w(), s.zword(), &mut h);
        out.insert("source".into(), Value::Object(h));
    }
    out.insert("terms".into(), poly_value(&g.to_poly()));
    Value::Object(out)
}

pub fn trunc_from(doc: &Value) -> Result<(TruncSeries, Option<Header>)> {
    let vars = Vars::new(&string_vec(field(doc, "vars")?, "vars")?);
    let cutoff = as_u32(field(doc, "cutoff")?, "cutoff")?;
    let lambda_cutoff = match doc.get("lambda_cutoff") {
        Some(v) => as_u32(v, "lambda_cutoff")?,
        None => 0,
    };
    let p = poly_from(field(doc, "terms")?, &vars)?;
    let g = TruncSeries::from_poly(&p, cutoff, lambda_cutoff);
    if g.to_poly() != p {
        return Err(Error::InvalidInput("terms exceed the declared cutoffs".into()));
    }
    let header = doc.get("source").map(header_from).transpose()?;
    Ok((g, header))
}

pub fn even_element_from(doc: &Value) -> Result<EvenElement> {
    let scale = match doc.get("scale") {
        Some(v) => gr(v)?,
        None => Gr::from_int(1),
    };
    let mut factors = Vec::new();
    for f in as_array(field(doc, "factors")?, "factors")? {
        let c = gr(field(f, "c")?)?;
        let power = match f.get("power") {
            Some(p) => as_u32(p, "power")?,
            None => 1,
        };
        match as_str(field(f, "kind")?, "kind")? {
            "point" => factors.push(Factor::Point { c, power }),
            "surface" => {
                let v = CohClass::new(int_vec(field(f, "v")?, "v")?);
                let mode: SurfaceMode = match f.get("mode") {
                    Some(m) => as_str(m, "mode")?.parse()?,
                    None => SurfaceMode::Reduced,
                };
                factors.push(Factor::Surface { v, c, mode, power });
            }
            other => return Err(parse_err(format!("unknown factor kind {other:?}"))),
        }
    }
    EvenElement::new(factors, scale)
}

pub fn even_element_value(e: &EvenElement) -> Value {
    let factors: Vec<Value> = e
        .factors
        .iter()
        .map(|f| match f {
            Factor::Point { c, power } => json!({ "kind": "point", "c": gr_value(c), "power": power }),
            Factor::Surface { v, c, mode, power } => json!({
                "kind": "surface",
                "v": class_value(v),
                "c": gr_value(c),
                "mode": mode.as_str(),
                "power": power,
            }),
        })
        .collect();
    json!({ "scale": gr_value(&e.scale), "factors": factors })
}

fn linear_value(x: &LinearInT) -> Value {
    json!({ "c0": gr_value(&x.c0), "c1": gr_value(&x.c1) })
}

pub fn op_value(op: &AnnihilatorOp) -> Value {
    let factors: Vec<Value> = op
        .factors
        .iter()
        .map(|f| json!({ "var": f.var.as_str(), "eigenvalue": linear_value(&f.eigenvalue), "mult": f.mult }))
        .collect();
    Value::Array(factors)
}
