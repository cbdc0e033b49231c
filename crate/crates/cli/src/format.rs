//! JSON and text encodings of library values.

use serde_json::{json, Map, Value};

use intdiff_core::algebra_base::{Monomial, MultiPoly};
use intdiff_core::weight_modules::{DSet, Gen, ModuleWindow, Orbit, Side};
use intdiff_core::{BasisTerm1, Field, Matrix, Operator, Scalar};

use crate::Failure;

pub fn scalar(c: &Scalar) -> Value {
    Value::String(c.to_string())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| scalar(m.get(r, c))).collect()))
            .collect(),
    )
}

pub fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn point(p: &[i64]) -> Value {
    json!(p)
}

pub fn point_text(p: &[i64]) -> String {
    let cells: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", cells.join(","))
}

fn slot_term(t: &BasisTerm1) -> Value {
    match *t {
        BasisTerm1::DPow { i, k } => json!({"kind": "DPow", "i": i, "k": k}),
        BasisTerm1::HPow { k } => json!({"kind": "HPow", "i": 0, "k": k}),
        BasisTerm1::IPow { i, k } => json!({"kind": "IPow", "i": i, "k": k}),
        BasisTerm1::E { s, t } => json!({"kind": "E", "s": s, "t": t}),
    }
}

pub fn operator(a: &Operator) -> Value {
    let terms: Vec<Value> = a
        .terms()
        .map(|(t, c)| {
            json!({
                "slots": t.0.iter().map(slot_term).collect::<Vec<_>>(),
                "coeff": scalar(c),
            })
        })
        .collect();
    json!({"n": a.arity(), "terms": terms, "text": a.to_string()})
}

/// `Z` for integer slots, the representative otherwise.
pub fn orbit_slot(o: &Orbit, j: usize) -> String {
    if o.is_integer_slot(j) {
        "Z".into()
    } else {
        o.rep(j).to_string()
    }
}

pub fn orbit(o: &Orbit) -> Value {
    Value::Array(
        (0..o.arity())
            .map(|j| Value::String(orbit_slot(o, j)))
            .collect(),
    )
}

pub fn orbit_text(o: &Orbit) -> String {
    let parts: Vec<String> = (0..o.arity()).map(|j| orbit_slot(o, j)).collect();
    parts.join(",")
}

/// 1-based degenerate slots.
pub fn dset_slots(d: &DSet) -> Vec<usize> {
    d.degenerate().iter().map(|j| j + 1).collect()
}

pub fn dset(d: &DSet) -> Value {
    json!({"orbit": orbit(d.orbit()), "dset": dset_slots(d)})
}

pub fn dset_text(d: &DSet) -> String {
    let slots: Vec<String> = dset_slots(d).iter().map(|j| j.to_string()).collect();
    format!("M({{{}}}) over {}", slots.join(","), orbit_text(d.orbit()))
}

fn gen_name(g: Gen) -> &'static str {
    match g {
        Gen::D => "d",
        Gen::I => "int",
        Gen::H => "H",
    }
}

fn gen_from_name(s: &str) -> Option<Gen> {
    match s {
        "d" => Some(Gen::D),
        "int" => Some(Gen::I),
        "H" => Some(Gen::H),
        _ => None,
    }
}

pub fn module(m: &ModuleWindow) -> Value {
    let spaces: Vec<Value> = m
        .support()
        .iter()
        .map(|p| json!({"point": point(p), "dim": m.dim(p)}))
        .collect();
    let mut maps = Vec::new();
    for p in m.support() {
        for slot in 0..m.arity() {
            for g in Gen::ALL {
                let q = m.target(&p, slot, g);
                if !m.in_window(&q) || m.dim(&q) == 0 {
                    continue;
                }
                if let Some(a) = m.map(&p, slot, g) {
                    maps.push(json!({
                        "point": point(&p),
                        "slot": slot + 1,
                        "gen": gen_name(g),
                        "matrix": matrix(&a),
                    }));
                }
            }
        }
    }
    let window: Vec<Value> = m.window().iter().map(|&(a, b)| json!([a, b])).collect();
    json!({
        "side": match m.side() { Side::Left => "left", Side::Right => "right" },
        "orbit": orbit(m.orbit()),
        "window": window,
        "spaces": spaces,
        "maps": maps,
    })
}

fn bad(msg: impl Into<String>) -> Failure {
    Failure::usage(msg)
}

pub fn parse_scalar_value(v: &Value, field: Field) -> Result<Scalar, Failure> {
    let c = match v {
        Value::String(s) => s
            .parse::<Scalar>()
            .map_err(|e| bad(e.to_string()))?,
        Value::Number(n) => n
            .as_i64()
            .map(Scalar::from_int)
            .ok_or_else(|| bad(format!("number {} is not an integer; quote rationals", n)))?,
        _ => return Err(bad("matrix entries must be strings or integers")),
    };
    crate::check_field(&c, field)?;
    Ok(c)
}

/// A matrix from a JSON array of rows; `cols` is used when there are no rows.
pub fn parse_matrix_value(v: &Value, field: Field, cols: Option<usize>) -> Result<Matrix, Failure> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("a matrix must be a JSON array of rows"))?;
    let mut out = Vec::new();
    for r in rows {
        let r = r
            .as_array()
            .ok_or_else(|| bad("a matrix row must be a JSON array"))?;
        out.push(
            r.iter()
                .map(|x| parse_scalar_value(x, field))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let width = out.first().map(|r| r.len()).or(cols).unwrap_or(0);
    if out.iter().any(|r| r.len() != width) {
        return Err(bad("matrix rows have different lengths"));
    }
    Ok(Matrix::from_fn(out.len(), width, |r, c| out[r][c].clone()))
}

pub fn parse_json(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {}", e)))
}

fn field_of<'a>(o: &'a Map<String, Value>, key: &str) -> Result<&'a Value, Failure> {
    o.get(key)
        .ok_or_else(|| bad(format!("module JSON lacks `{}`", key)))
}

fn parse_point(v: &Value) -> Result<Vec<i64>, Failure> {
    v.as_array()
        .and_then(|a| a.iter().map(|x| x.as_i64()).collect::<Option<Vec<_>>>())
        .ok_or_else(|| bad("a point must be an array of integers"))
}

pub fn parse_orbit_strs<'a>(
    parts: impl Iterator<Item = &'a str>,
    field: Field,
) -> Result<Orbit, Failure> {
    let mut reps = Vec::new();
    for p in parts {
        let p = p.trim();
        if p == "Z" {
            reps.push(Scalar::zero());
        } else {
            let c: Scalar = p
                .parse()
                .map_err(|_| bad(format!("invalid orbit entry `{}` (use Z or a number)", p)))?;
            crate::check_field(&c, field)?;
            reps.push(c);
        }
    }
    Ok(Orbit::new(reps))
}

/// Reads a module, either bare or inside a report under `result.module`.
pub fn parse_module(v: &Value, field: Field) -> Result<ModuleWindow, Failure> {
    let v = v
        .get("result")
        .and_then(|r| r.get("module"))
        .unwrap_or(v);
    let o = v
        .as_object()
        .ok_or_else(|| bad("module JSON must be an object"))?;
    let side = match field_of(o, "side")?.as_str() {
        Some("left") => Side::Left,
        Some("right") => Side::Right,
        _ => return Err(bad("`side` must be \"left\" or \"right\"")),
    };
    let orbit_strs: Vec<String> = field_of(o, "orbit")?
        .as_array()
        .and_then(|a| a.iter().map(|x| x.as_str().map(String::from)).collect())
        .ok_or_else(|| bad("`orbit` must be an array of strings"))?;
    let orbit = parse_orbit_strs(orbit_strs.iter().map(|s| s.as_str()), field)?;
    let window: Vec<(i64, i64)> = field_of(o, "window")?
        .as_array()
        .and_then(|a| {
            a.iter()
                .map(|iv| {
                    let iv = iv.as_array()?;
                    match iv.as_slice() {
                        [a, b] => Some((a.as_i64()?, b.as_i64()?)),
                        _ => None,
                    }
                })
                .collect()
        })
        .ok_or_else(|| bad("`window` must be an array of [a, b] pairs"))?;
    let mut m = ModuleWindow::empty(side, orbit, window).map_err(Failure::module)?;
    for s in field_of(o, "spaces")?
        .as_array()
        .ok_or_else(|| bad("`spaces` must be an array"))?
    {
        let p = parse_point(s.get("point").unwrap_or(&Value::Null))?;
        let d = s
            .get("dim")
            .and_then(|d| d.as_u64())
            .ok_or_else(|| bad("space entries need a nonnegative `dim`"))?;
        if !m.in_window(&p) {
            return Err(bad(format!("point {} lies outside the window", point_text(&p))));
        }
        m.set_dim(p, d as usize);
    }
    for e in field_of(o, "maps")?
        .as_array()
        .ok_or_else(|| bad("`maps` must be an array"))?
    {
        let p = parse_point(e.get("point").unwrap_or(&Value::Null))?;
        let slot = e
            .get("slot")
            .and_then(|s| s.as_u64())
            .filter(|&s| s >= 1 && s as usize <= m.arity())
            .ok_or_else(|| bad("map entries need a slot in 1..n"))? as usize
            - 1;
        let g = e
            .get("gen")
            .and_then(|g| g.as_str())
            .and_then(gen_from_name)
            .ok_or_else(|| bad("map entries need `gen` in d, int, H"))?;
        if !m.in_window(&p) {
            return Err(bad(format!("point {} lies outside the window", point_text(&p))));
        }
        let q = m.target(&p, slot, g);
        let a = parse_matrix_value(
            e.get("matrix").unwrap_or(&Value::Null),
            field,
            Some(m.dim(&p)),
        )?;
        if !m.in_window(&q) {
            return Err(bad(format!(
                "map at {} leaves the window",
                point_text(&p)
            )));
        }
        m.set_map(p, slot, g, a).map_err(Failure::module)?;
    }
    m.check_relations().map_err(Failure::module)?;
    Ok(m)
}

/// A polynomial in `H_1..H_n` from an operator with only `H` terms.
pub fn operator_to_poly(a: &Operator) -> Option<MultiPoly> {
    let mut p = MultiPoly::zero(a.arity());
    for (t, c) in a.terms() {
        let exps: Option<Vec<u32>> = t
            .0
            .iter()
            .map(|s| match s {
                BasisTerm1::HPow { k } => Some(*k),
                _ => None,
            })
            .collect();
        p.add_term(Monomial(exps?), c.clone());
    }
    Some(p)
}

/// A polynomial in the shifted variables `h_j = H_j − λ_j`.
pub fn shifted_poly_text(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&Monomial, &Scalar)> = p.terms().collect();
    terms.sort_by(|a, b| {
        (a.0.degree(), &a.0 .0)
            .cmp(&(b.0.degree(), &b.0 .0))
            .reverse()
    });
    let mut out = String::new();
    for (k, (m, c)) in terms.iter().enumerate() {
        let neg = **c < Scalar::zero();
        let abs = if neg { -*c } else { (*c).clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let vars: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(j, e)| {
                if *e == 1 {
                    format!("h_{}", j + 1)
                } else {
                    format!("h_{}^{}", j + 1, e)
                }
            })
            .collect();
        if vars.is_empty() {
            out.push_str(&intdiff_core::operator::scalar_expr(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&intdiff_core::operator::scalar_expr(&abs));
                out.push('*');
            }
            out.push_str(&vars.join("*"));
        }
    }
    out
}
