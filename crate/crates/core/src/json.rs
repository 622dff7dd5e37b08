//! JSON interchange. Every number that is not a count or an index is written
//! as an exact `"p/q"` string. Objects are emitted through `serde_json::Value`,
//! whose maps keep keys sorted, so output is canonical.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generators::TameSystem;
use crate::reduction::ReductionRecord;
use crate::ring::{format_rational, parse_rational, Monomial, Poly};
use crate::system::PolySystem;

pub const FORMAT: u64 = 1;
pub const INDEXING: &str = "one-based-row-major";

pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .rev()
            .map(|(m, c)| json!({"exps": m.factors(), "c": format_rational(c)}))
            .collect(),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermIn {
    exps: Vec<(u32, u32)>,
    c: String,
}

pub fn poly_from_json(v: &Value, nvars: usize) -> Result<Poly> {
    let terms: Vec<TermIn> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("polynomial: {e}")))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exps.iter().any(|&(var, exp)| var == 0 || exp == 0) {
            return Err(Error::Parse("exponent pairs must be [var >= 1, exp >= 1]".into()));
        }
        if t.exps.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Parse(
                "exponent pairs must have strictly increasing variables".into(),
            ));
        }
        out.push((Monomial::from_pairs(t.exps), parse_rational(&t.c)?));
    }
    Poly::from_terms(nvars, out)
}

pub fn polys_to_json(ps: &[Poly]) -> Value {
    Value::Array(ps.iter().map(poly_to_json).collect())
}

pub fn system_to_json(f: &PolySystem) -> Value {
    let terms: Vec<Value> = f
        .couplings()
        .map(|(s, c)| json!({"k": s.k, "i": s.row, "js": s.js, "c": format_rational(c)}))
        .collect();
    json!({"format": FORMAT, "n": f.n(), "d": f.d(), "terms": terms})
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemIn {
    format: Option<u64>,
    n: usize,
    d: u32,
    terms: Vec<CouplingIn>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CouplingIn {
    k: u32,
    i: usize,
    js: Vec<usize>,
    c: String,
}

fn check_format(format: Option<u64>) -> Result<()> {
    match format {
        None | Some(FORMAT) => Ok(()),
        Some(other) => Err(Error::Parse(format!("unsupported format version {other}"))),
    }
}

/// Strict parse: `js` must be sorted, `k` must equal its length and no slot
/// may appear twice.
pub fn system_from_json(v: &Value) -> Result<PolySystem> {
    let raw: SystemIn = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("system: {e}")))?;
    check_format(raw.format)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut couplings = Vec::with_capacity(raw.terms.len());
    for t in raw.terms {
        if t.k as usize != t.js.len() {
            return Err(Error::Parse(format!(
                "term k = {} but js has {} entries",
                t.k,
                t.js.len()
            )));
        }
        if t.js.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Parse(format!("js {:?} not sorted ascending", t.js)));
        }
        if !seen.insert((t.i, t.js.clone())) {
            return Err(Error::Parse(format!("duplicate coupling i = {}, js = {:?}", t.i, t.js)));
        }
        couplings.push((t.i, t.js, parse_rational(&t.c)?));
    }
    PolySystem::from_couplings(raw.n, raw.d, couplings)
}

pub fn parse_system(text: &str) -> Result<PolySystem> {
    system_from_json(&parse_value(text)?)
}

pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

pub fn record_to_json(rec: &ReductionRecord) -> Value {
    json!({
        "format": FORMAT,
        "n": rec.n(),
        "d": rec.d(),
        "reduced": system_to_json(rec.reduced()),
        "sigma_base": rec.sigma_base(),
        "indexing": INDEXING,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordIn {
    format: Option<u64>,
    n: usize,
    d: u32,
    reduced: Value,
    sigma_base: usize,
    indexing: String,
}

pub fn record_from_json(v: &Value) -> Result<ReductionRecord> {
    let raw: RecordIn = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("record: {e}")))?;
    check_format(raw.format)?;
    if raw.indexing != INDEXING {
        return Err(Error::MalformedRecord(format!("unknown indexing {:?}", raw.indexing)));
    }
    if raw.sigma_base != raw.n {
        return Err(Error::MalformedRecord(format!(
            "sigma_base {} differs from n = {}",
            raw.sigma_base, raw.n
        )));
    }
    let reduced = system_from_json(&raw.reduced)?;
    ReductionRecord::from_reduced(raw.n, raw.d, reduced)
}

/// True when the object looks like a record rather than a bare system.
pub fn is_record(v: &Value) -> bool {
    v.get("reduced").is_some()
}

/// Parameters that produced a corpus entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CorpusParams {
    Tame { n: usize, steps: usize, maxdeg: u32 },
    Random { n: usize, d: u32, density: f64 },
}

pub fn tame_entry(seed: u64, n: usize, steps: usize, maxdeg: u32, tame: &TameSystem) -> Value {
    json!({
        "seed": seed,
        "params": CorpusParams::Tame { n, steps, maxdeg },
        "system": system_to_json(&tame.system),
        "known_inverse": system_to_json(&tame.known_inverse),
    })
}

pub fn random_entry(seed: u64, n: usize, d: u32, density: f64, f: &PolySystem) -> Value {
    json!({
        "seed": seed,
        "params": CorpusParams::Random { n, d, density },
        "system": system_to_json(f),
    })
}

/// Pretty-printed with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("Value always serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_tame;
    use crate::ring::{int, ratio};

    fn worked_example() -> PolySystem {
        PolySystem::from_couplings(2, 3, [(1, vec![2, 2, 2], int(-1))]).unwrap()
    }

    #[test]
    fn system_json_shape() {
        let v = system_to_json(&worked_example());
        assert_eq!(
            v,
            json!({"format": 1, "n": 2, "d": 3, "terms": [{"k": 3, "i": 1, "js": [2, 2, 2], "c": "-1"}]})
        );
        assert_eq!(system_from_json(&v).unwrap(), worked_example());
    }

    #[test]
    fn format_is_optional_but_checked() {
        let v = json!({"n": 2, "d": 3, "terms": [{"k": 3, "i": 1, "js": [2, 2, 2], "c": "-1"}]});
        assert_eq!(system_from_json(&v).unwrap(), worked_example());
        let bad = json!({"format": 2, "n": 2, "d": 3, "terms": []});
        assert!(system_from_json(&bad).is_err());
    }

    #[test]
    fn strict_system_validation() {
        let cases = [
            json!({"n": 2, "d": 3, "terms": [{"k": 2, "i": 1, "js": [2, 2, 2], "c": "1"}]}),
            json!({"n": 2, "d": 3, "terms": [{"k": 2, "i": 1, "js": [2, 1], "c": "1"}]}),
            json!({"n": 2, "d": 3, "terms": [{"k": 2, "i": 1, "js": [1, 2], "c": "0.5"}]}),
            json!({"n": 2, "d": 3, "terms": [{"k": 2, "i": 3, "js": [1, 2], "c": "1"}]}),
            json!({"n": 2, "d": 3, "terms": [{"k": 4, "i": 1, "js": [1, 1, 1, 1], "c": "1"}]}),
            json!({"n": 2, "d": 3, "terms": [
                {"k": 2, "i": 1, "js": [1, 2], "c": "1"},
                {"k": 2, "i": 1, "js": [1, 2], "c": "1"}]}),
            json!({"n": 2, "d": 3, "terms": [], "extra": true}),
            json!({"n": 2, "d": 3, "terms": [{"k": 2, "i": 1, "js": [1, 2], "c": 1}]}),
            json!({"n": 2, "terms": []}),
        ];
        for v in cases {
            assert!(system_from_json(&v).is_err(), "accepted {v}");
        }
    }

    #[test]
    fn poly_json_round_trip() {
        let p = &(&Poly::var(2, 1) - &Poly::var(2, 2).pow(3)) + &Poly::constant(2, ratio(1, 3));
        let v = poly_to_json(&p);
        assert_eq!(v[0], json!({"exps": [[2, 3]], "c": "-1"}));
        assert_eq!(poly_from_json(&v, 2).unwrap(), p);
        assert!(poly_from_json(&json!([{"exps": [[3, 1]], "c": "1"}]), 2).is_err());
        assert!(poly_from_json(&json!([{"exps": [[2, 1], [1, 1]], "c": "1"}]), 2).is_err());
    }

    #[test]
    fn record_round_trip() {
        let rec = crate::reduction::phi(&worked_example()).unwrap();
        let v = record_to_json(&rec);
        assert_eq!(v["sigma_base"], json!(2));
        assert_eq!(v["indexing"], json!(INDEXING));
        assert!(is_record(&v));
        let back = record_from_json(&v).unwrap();
        assert_eq!(back, rec);
        let mut bad = v.clone();
        bad["sigma_base"] = json!(3);
        assert!(record_from_json(&bad).is_err());
        let mut tampered = v.clone();
        tampered["reduced"]["terms"].as_array_mut().unwrap().remove(0);
        assert!(record_from_json(&tampered).is_err());
    }

    #[test]
    fn corpus_entries_are_byte_stable() {
        let a = random_tame(2, 3, 4, 9).unwrap();
        let b = random_tame(2, 3, 4, 9).unwrap();
        let ea = to_canonical_string(&tame_entry(9, 2, 3, 4, &a));
        let eb = to_canonical_string(&tame_entry(9, 2, 3, 4, &b));
        assert_eq!(ea, eb);
        let v = parse_value(&ea).unwrap();
        assert_eq!(system_from_json(&v["known_inverse"]).unwrap(), a.known_inverse);
        assert_eq!(v["params"]["kind"], json!("tame"));
    }
}
