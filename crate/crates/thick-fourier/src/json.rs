//! Canonical JSON encoding of scalars, polynomials, atoms, jets and pole
//! tables. Keys are emitted sorted (serde_json's default map is a BTreeMap)
//! and rationals are decimal strings, so equal values always serialize to
//! identical bytes; round-trip tests compare files byte for byte.
//!
//! Conventions: rationals inside scalars and polynomial coefficients are
//! always `"num/den"`; standalone parameters (`lambda`, powers) drop the
//! denominator when it is 1. Atoms may carry a `rule` field in transform
//! output; readers ignore it.

use std::collections::BTreeMap;

use num::{BigInt, One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::distributions::{
    JetSpace, SlAtom, SlThickDistribution, ThickAtom, ThickDistribution, ThickJet, WFunctionJet,
};
use crate::scalars::{Coeffs, ExactScalar, GammaFactor, Weight};
use crate::sphere::{AngularFunction, HarmonicPoly, MultiPoly, SpherePoly};
use crate::{Error, Rat, Result};

fn parse_err(detail: impl Into<String>) -> Error {
    Error::Parse { detail: detail.into() }
}

// ---------------------------------------------------------------------------
// rationals

/// `"num/den"`, reduced, denominator positive.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `"num"` when integral, else `"num/den"`.
pub fn rat_to_param_string(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        rat_to_string(r)
    }
}

pub fn rat_from_string(s: &str) -> Result<Rat> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| parse_err(format!("bad rational '{s}'")))?;
    let den: BigInt = den.trim().parse().map_err(|_| parse_err(format!("bad rational '{s}'")))?;
    if den.is_zero() {
        return Err(parse_err("zero denominator"));
    }
    Ok(Rat::new(num, den))
}

// ---------------------------------------------------------------------------
// scalars and weights

pub fn scalar_to_value(s: &ExactScalar) -> Value {
    let mut terms = Vec::new();
    for ((imag, pi2), c) in s.terms() {
        terms.push(json!({
            "i": if *imag { 1 } else { 0 },
            "pi": rat_to_string(&Rat::new(BigInt::from(*pi2), BigInt::from(2))),
            "a": rat_to_string(&c.a),
            "b": rat_to_string(&c.b),
            "c": rat_to_string(&c.c),
        }));
    }
    json!({ "terms": terms })
}

pub fn scalar_from_value(v: &Value) -> Result<ExactScalar> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("scalar needs a 'terms' array"))?;
    let mut map: BTreeMap<(bool, i64), Coeffs> = BTreeMap::new();
    let mut out = ExactScalar::zero();
    for t in terms {
        let i = t.get("i").and_then(Value::as_i64).ok_or_else(|| parse_err("term needs 'i'"))?;
        let pi = rat_from_string(
            t.get("pi").and_then(Value::as_str).ok_or_else(|| parse_err("term needs 'pi'"))?,
        )?;
        let pi2 = (&pi * Rat::new(BigInt::from(2), BigInt::one()))
            .to_integer()
            .to_i64()
            .ok_or_else(|| parse_err("pi power out of range"))?;
        if (&pi * Rat::new(BigInt::from(2), BigInt::one())).denom() != &BigInt::one() {
            return Err(parse_err("pi power must be a half-integer"));
        }
        let get = |k: &str| -> Result<Rat> {
            rat_from_string(
                t.get(k).and_then(Value::as_str).ok_or_else(|| parse_err("term field"))?,
            )
        };
        let coeffs = Coeffs { a: get("a")?, b: get("b")?, c: get("c")? };
        // reduce i^k mod 4 with sign absorption
        let k = i.rem_euclid(4);
        let (imag, sign) = match k {
            0 => (false, 1),
            1 => (true, 1),
            2 => (false, -1),
            _ => (true, -1),
        };
        let signed = if sign < 0 {
            Coeffs { a: -coeffs.a, b: -coeffs.b, c: -coeffs.c }
        } else {
            coeffs
        };
        let entry = map.entry((imag, pi2)).or_insert(Coeffs {
            a: Rat::zero(),
            b: Rat::zero(),
            c: Rat::zero(),
        });
        entry.a += signed.a;
        entry.b += signed.b;
        entry.c += signed.c;
    }
    for (k, c) in map {
        let mut single = BTreeMap::new();
        single.insert(k, c);
        out = out.add(&ExactScalar::from_terms(single));
    }
    Ok(out)
}

pub fn weight_to_value(w: &Weight) -> Value {
    let mut obj = match scalar_to_value(&w.exact) {
        Value::Object(o) => o,
        _ => unreachable!(),
    };
    if !w.gamma.is_trivial() {
        obj.insert("two_exp".into(), Value::String(rat_to_string(&w.gamma.two_exp)));
        obj.insert(
            "gamma_num".into(),
            Value::Array(w.gamma.num.iter().map(|g| Value::String(rat_to_string(g))).collect()),
        );
        obj.insert(
            "gamma_den".into(),
            Value::Array(w.gamma.den.iter().map(|g| Value::String(rat_to_string(g))).collect()),
        );
    }
    Value::Object(obj)
}

pub fn weight_from_value(v: &Value) -> Result<Weight> {
    let exact = scalar_from_value(v)?;
    let gamma = if v.get("two_exp").is_some() {
        let two_exp = rat_from_string(
            v.get("two_exp").and_then(Value::as_str).ok_or_else(|| parse_err("two_exp"))?,
        )?;
        let list = |key: &str| -> Result<Vec<Rat>> {
            v.get(key)
                .and_then(Value::as_array)
                .map(|a| {
                    a.iter()
                        .map(|x| {
                            rat_from_string(
                                x.as_str().ok_or_else(|| parse_err("gamma list entry"))?,
                            )
                        })
                        .collect()
                })
                .unwrap_or_else(|| Ok(Vec::new()))
        };
        GammaFactor::new(two_exp, list("gamma_num")?, list("gamma_den")?)
    } else {
        GammaFactor::trivial()
    };
    Ok(Weight { exact, gamma })
}

// ---------------------------------------------------------------------------
// polynomials and angular functions

pub fn poly_to_value(p: &MultiPoly) -> Value {
    let mut coeffs = Map::new();
    for (alpha, c) in p.terms() {
        let key = alpha.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let value = match c.as_rational() {
            Some(r) => Value::String(rat_to_string(&r)),
            None => scalar_to_value(c),
        };
        coeffs.insert(key, value);
    }
    let mut obj = Map::new();
    obj.insert("n".into(), json!(p.n));
    if let Ok(Some(d)) = p.homogeneous_degree() {
        obj.insert("degree".into(), json!(d));
    }
    obj.insert("coeffs".into(), Value::Object(coeffs));
    Value::Object(obj)
}

pub fn poly_from_value(v: &Value) -> Result<MultiPoly> {
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| parse_err("poly needs 'n'"))? as u32;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("poly needs 'coeffs'"))?;
    let mut p = MultiPoly::zero(n);
    for (key, val) in coeffs {
        let alpha: Vec<u32> = key
            .split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| parse_err("bad exponent key")))
            .collect::<Result<_>>()?;
        if alpha.len() != n as usize {
            return Err(parse_err("exponent key length mismatch"));
        }
        let c = match val {
            Value::String(s) => ExactScalar::from_rational(rat_from_string(s)?),
            other => scalar_from_value(other)?,
        };
        p.add_term(alpha, c);
    }
    Ok(p)
}

pub fn angular_to_value(a: &AngularFunction) -> Value {
    let mut comps = Map::new();
    for (d, h) in a.components() {
        comps.insert(d.to_string(), poly_to_value(&h.poly));
    }
    json!({ "n": a.n, "components": comps })
}

pub fn angular_from_value(v: &Value) -> Result<AngularFunction> {
    let n =
        v.get("n").and_then(Value::as_u64).ok_or_else(|| parse_err("angular needs 'n'"))? as u32;
    let comps = v
        .get("components")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("angular needs 'components'"))?;
    let mut a = AngularFunction::zero(n);
    for (key, val) in comps {
        let degree: u32 = key.parse().map_err(|_| parse_err("bad component degree"))?;
        let poly = poly_from_value(val)?;
        let h = HarmonicPoly::new(poly).map_err(|_| parse_err("component is not harmonic"))?;
        if h.degree != degree && !h.poly.is_zero() {
            return Err(parse_err("component degree mismatch"));
        }
        a.add_component(h);
    }
    Ok(a)
}

pub fn sphere_poly_to_value(p: &SpherePoly) -> Value {
    json!({ "n": p.n, "q": p.q, "poly": poly_to_value(&p.poly) })
}

pub fn sphere_poly_from_value(v: &Value) -> Result<SpherePoly> {
    let q = v.get("q").and_then(Value::as_u64).ok_or_else(|| parse_err("sphere poly 'q'"))? as u32;
    let poly = poly_from_value(v.get("poly").ok_or_else(|| parse_err("sphere poly 'poly'"))?)?;
    SpherePoly::new(q, poly).map_err(|_| parse_err("sphere poly degree mismatch"))
}

// ---------------------------------------------------------------------------
// atoms and distributions

fn thick_atom_to_value(w: &Weight, atom: &ThickAtom, rule: Option<&str>) -> Value {
    let mut obj = Map::new();
    obj.insert("weight".into(), weight_to_value(w));
    match atom {
        ThickAtom::Pf { lambda, density } => {
            obj.insert("kind".into(), json!("Pf"));
            obj.insert("lambda".into(), json!(rat_to_param_string(lambda)));
            obj.insert("density".into(), angular_to_value(density));
        }
        ThickAtom::Delta { order, density } => {
            obj.insert("kind".into(), json!("delta"));
            obj.insert("order".into(), json!(order));
            obj.insert("density".into(), angular_to_value(density));
        }
        ThickAtom::DerivDelta { k, q, poly } => {
            obj.insert("kind".into(), json!("deriv_delta"));
            obj.insert("k".into(), json!(k));
            obj.insert("q".into(), json!(q));
            obj.insert("poly".into(), poly_to_value(poly));
        }
    }
    if let Some(rule) = rule {
        obj.insert("rule".into(), json!(rule));
    }
    Value::Object(obj)
}

fn sl_atom_to_value(w: &Weight, atom: &SlAtom, rule: Option<&str>) -> Value {
    let mut obj = Map::new();
    obj.insert("weight".into(), weight_to_value(w));
    match atom {
        SlAtom::PfW { lambda, density } => {
            obj.insert("kind".into(), json!("PfW"));
            obj.insert("lambda".into(), json!(rat_to_param_string(lambda)));
            obj.insert("density".into(), angular_to_value(density));
        }
        SlAtom::DeltaInf { order, density } => {
            obj.insert("kind".into(), json!("delta_inf"));
            obj.insert("order".into(), json!(order));
            obj.insert("density".into(), angular_to_value(density));
        }
        SlAtom::DeltaLnInf { order, density } => {
            obj.insert("kind".into(), json!("delta_ln_inf"));
            obj.insert("order".into(), json!(order));
            obj.insert("density".into(), sphere_poly_to_value(density));
        }
        SlAtom::DerivDeltaOrigin { k, q, poly } => {
            obj.insert("kind".into(), json!("deriv_delta_origin"));
            obj.insert("k".into(), json!(k));
            obj.insert("q".into(), json!(q));
            obj.insert("poly".into(), poly_to_value(poly));
        }
    }
    if let Some(rule) = rule {
        obj.insert("rule".into(), json!(rule));
    }
    Value::Object(obj)
}

/// Either atom space, as read from an atom file.
pub enum AnyDistribution {
    Thick(ThickDistribution),
    Sl(SlThickDistribution),
}

pub fn thick_to_value(d: &ThickDistribution, rules: Option<&[String]>) -> Value {
    let atoms: Vec<Value> = d
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, (w, a))| thick_atom_to_value(w, a, rules.and_then(|r| r.get(i).map(|s| s.as_str()))))
        .collect();
    json!({ "space": "thick", "n": d.n, "atoms": atoms })
}

pub fn sl_to_value(d: &SlThickDistribution, rules: Option<&[String]>) -> Value {
    let atoms: Vec<Value> = d
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, (w, a))| sl_atom_to_value(w, a, rules.and_then(|r| r.get(i).map(|s| s.as_str()))))
        .collect();
    json!({ "space": "slthick", "n": d.n, "atoms": atoms })
}

pub fn distribution_from_value(v: &Value) -> Result<AnyDistribution> {
    let space = v
        .get("space")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("distribution needs 'space'"))?;
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| parse_err("needs 'n'"))? as u32;
    let atoms =
        v.get("atoms").and_then(Value::as_array).ok_or_else(|| parse_err("needs 'atoms'"))?;
    match space {
        "thick" => {
            let mut list = Vec::new();
            for a in atoms {
                list.push(thick_atom_from_value(a, n)?);
            }
            Ok(AnyDistribution::Thick(ThickDistribution::from_atoms(n, list)))
        }
        "slthick" => {
            let mut list = Vec::new();
            for a in atoms {
                list.push(sl_atom_from_value(a, n)?);
            }
            Ok(AnyDistribution::Sl(SlThickDistribution::from_atoms(n, list)))
        }
        other => Err(parse_err(format!("unknown space '{other}'"))),
    }
}

fn common_weight(v: &Value) -> Result<Weight> {
    match v.get("weight") {
        Some(w) => weight_from_value(w),
        None => Ok(Weight::one()),
    }
}

fn get_order(v: &Value) -> Result<i64> {
    v.get("order").and_then(Value::as_i64).ok_or_else(|| parse_err("atom needs 'order'"))
}

fn get_kq(v: &Value) -> Result<(u32, u32)> {
    let k = v.get("k").and_then(Value::as_u64).ok_or_else(|| parse_err("atom needs 'k'"))? as u32;
    let q = v.get("q").and_then(Value::as_u64).ok_or_else(|| parse_err("atom needs 'q'"))? as u32;
    Ok((k, q))
}

fn get_lambda(v: &Value) -> Result<Rat> {
    rat_from_string(
        v.get("lambda").and_then(Value::as_str).ok_or_else(|| parse_err("atom needs 'lambda'"))?,
    )
}

fn get_density(v: &Value) -> Result<AngularFunction> {
    angular_from_value(v.get("density").ok_or_else(|| parse_err("atom needs 'density'"))?)
}

fn thick_atom_from_value(v: &Value, _n: u32) -> Result<(Weight, ThickAtom)> {
    let w = common_weight(v)?;
    let kind =
        v.get("kind").and_then(Value::as_str).ok_or_else(|| parse_err("atom needs 'kind'"))?;
    let atom = match kind {
        "Pf" => ThickAtom::Pf { lambda: get_lambda(v)?, density: get_density(v)? },
        "delta" => ThickAtom::Delta { order: get_order(v)?, density: get_density(v)? },
        "deriv_delta" => {
            let (k, q) = get_kq(v)?;
            let poly =
                poly_from_value(v.get("poly").ok_or_else(|| parse_err("atom needs 'poly'"))?)?;
            ThickAtom::DerivDelta { k, q, poly }
        }
        other => return Err(parse_err(format!("unknown thick atom kind '{other}'"))),
    };
    Ok((w, atom))
}

fn sl_atom_from_value(v: &Value, _n: u32) -> Result<(Weight, SlAtom)> {
    let w = common_weight(v)?;
    let kind =
        v.get("kind").and_then(Value::as_str).ok_or_else(|| parse_err("atom needs 'kind'"))?;
    let atom = match kind {
        "PfW" => SlAtom::PfW { lambda: get_lambda(v)?, density: get_density(v)? },
        "delta_inf" => SlAtom::DeltaInf { order: get_order(v)?, density: get_density(v)? },
        "delta_ln_inf" => SlAtom::DeltaLnInf {
            order: get_order(v)?,
            density: sphere_poly_from_value(
                v.get("density").ok_or_else(|| parse_err("atom needs 'density'"))?,
            )?,
        },
        "deriv_delta_origin" => {
            let (k, q) = get_kq(v)?;
            let poly =
                poly_from_value(v.get("poly").ok_or_else(|| parse_err("atom needs 'poly'"))?)?;
            SlAtom::DerivDeltaOrigin { k, q, poly }
        }
        other => return Err(parse_err(format!("unknown sl atom kind '{other}'"))),
    };
    Ok((w, atom))
}

// ---------------------------------------------------------------------------
// jets

pub fn thick_jet_to_value(j: &ThickJet) -> Value {
    let mut orders = Map::new();
    for (o, a) in j.orders() {
        orders.insert(o.to_string(), angular_to_value(a));
    }
    json!({ "space": "thickjet", "n": j.n, "lo": j.lo, "hi": j.hi, "orders": orders })
}

pub fn thick_jet_from_value(v: &Value) -> Result<ThickJet> {
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| parse_err("jet 'n'"))? as u32;
    let lo = v.get("lo").and_then(Value::as_i64).ok_or_else(|| parse_err("jet 'lo'"))?;
    let hi = v.get("hi").and_then(Value::as_i64).ok_or_else(|| parse_err("jet 'hi'"))?;
    if lo > hi {
        return Err(parse_err("jet range empty"));
    }
    let mut jet = ThickJet::new(n, lo, hi);
    if let Some(orders) = v.get("orders").and_then(Value::as_object) {
        for (key, val) in orders {
            let o: i64 = key.parse().map_err(|_| parse_err("bad jet order"))?;
            if o < lo || o > hi {
                return Err(parse_err("jet order outside range"));
            }
            jet.set(o, angular_from_value(val)?);
        }
    }
    Ok(jet)
}

pub fn w_jet_to_value(j: &WFunctionJet) -> Value {
    let mut a = Map::new();
    for (o, f) in j.a_orders() {
        a.insert(o.to_string(), angular_to_value(f));
    }
    let mut p = Map::new();
    for (o, f) in j.p_orders() {
        p.insert(o.to_string(), sphere_poly_to_value(f));
    }
    json!({
        "space": "wjet",
        "n": j.n,
        "lo": j.lo,
        "hi": j.hi,
        "polynomial_free": j.space == JetSpace::PolynomialFree,
        "a": a,
        "p": p,
    })
}

pub fn w_jet_from_value(v: &Value) -> Result<WFunctionJet> {
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| parse_err("jet 'n'"))? as u32;
    let lo = v.get("lo").and_then(Value::as_i64).ok_or_else(|| parse_err("jet 'lo'"))?;
    let hi = v.get("hi").and_then(Value::as_i64).ok_or_else(|| parse_err("jet 'hi'"))?;
    let polyfree = v.get("polynomial_free").and_then(Value::as_bool).unwrap_or(true);
    let space = if polyfree { JetSpace::PolynomialFree } else { JetSpace::Pre };
    let mut jet = WFunctionJet::new(n, lo, hi, space);
    if let Some(a) = v.get("a").and_then(Value::as_object) {
        for (key, val) in a {
            let o: i64 = key.parse().map_err(|_| parse_err("bad jet order"))?;
            jet.set_a(o, angular_from_value(val)?);
        }
    }
    if let Some(p) = v.get("p").and_then(Value::as_object) {
        for (key, val) in p {
            let o: i64 = key.parse().map_err(|_| parse_err("bad jet order"))?;
            jet.set_p(o, sphere_poly_from_value(val)?);
        }
    }
    Ok(jet)
}

/// Either jet space, as read from a jet file.
pub enum AnyJet {
    Thick(ThickJet),
    W(WFunctionJet),
}

pub fn jet_from_value(v: &Value) -> Result<AnyJet> {
    match v.get("space").and_then(Value::as_str) {
        Some("thickjet") => Ok(AnyJet::Thick(thick_jet_from_value(v)?)),
        Some("wjet") => Ok(AnyJet::W(w_jet_from_value(v)?)),
        _ => Err(parse_err("jet needs 'space' of 'thickjet' or 'wjet'")),
    }
}

/// Canonical byte encoding: compact JSON plus a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable value");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))
}
