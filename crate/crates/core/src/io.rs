//! JSON encodings of families, curves and matrices over prime fields.

use serde_json::{json, Value};

use crate::algebra::{Poly, Relation, VarId};
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{is_prime, Fp};
use crate::segre::JacobiMat;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn modulus(v: &Value) -> Result<u64> {
    let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| parse_err("missing integer field \"p\""))?;
    if p < 3 || !is_prime(p) {
        return Err(parse_err(format!("p = {p} is not an odd prime")));
    }
    Ok(p)
}

fn fp_of(v: &Value, p: u64) -> Result<Fp> {
    v.as_i64().map(|x| Fp::new(x, p)).ok_or_else(|| parse_err(format!("expected an integer, found {v}")))
}

/// A square or rectangular matrix given as an array of integer rows.
pub fn mat_from_json(v: &Value, p: u64) -> Result<Mat<Fp>> {
    let rows = v.as_array().ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| parse_err("matrix row must be an array"))?
                .iter()
                .map(|e| fp_of(e, p))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(&p, rows)
}

pub fn mat_to_json(m: &Mat<Fp>) -> Value {
    Value::Array((0..m.rows()).map(|i| m.row(i).iter().map(|e| json!(e.value())).collect()).collect())
}

/// `{"p": prime, "family": [matrix, ...]}`, optionally with `"n"`.
pub fn family_from_json(v: &Value) -> Result<(u64, Vec<Mat<Fp>>)> {
    let p = modulus(v)?;
    let fam = v
        .get("family")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing array field \"family\""))?
        .iter()
        .map(|m| mat_from_json(m, p))
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = v.get("n") {
        let n = n.as_u64().ok_or_else(|| parse_err("\"n\" must be an integer"))? as usize;
        if fam.iter().any(|m| m.rows() != n || m.cols() != n) || fam.len() != n + 2 {
            return Err(Error::Dimension(format!("family does not consist of {} matrices of size {n}", n + 2)));
        }
    }
    Ok((p, fam))
}

/// `{"p": prime, "f": [c0, c1, ...]}` for `y^2 = c0 + c1 x + ...`.
pub fn curve_from_json(v: &Value) -> Result<Curve> {
    let p = modulus(v)?;
    let f = v
        .get("f")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing array field \"f\""))?
        .iter()
        .map(|c| c.as_i64().ok_or_else(|| parse_err("curve coefficients must be integers")))
        .collect::<Result<Vec<_>>>()?;
    Curve::from_i64s(p, &f)
}

pub fn curve_to_json(c: &Curve) -> Value {
    json!({ "p": c.p(), "f": c.f().coeffs().iter().map(|x| x.value()).collect::<Vec<_>>() })
}

/// Human-readable form of a polynomial; generators print as `x`, `y` on
/// curves and `g0`, `g1`, ... otherwise, suffixed by their tensor slot.
pub fn poly_to_string(q: &Poly<Fp>) -> String {
    if q.is_empty() {
        return "0".into();
    }
    let curve = matches!(q.algebra().relation(), Relation::Hyperelliptic { .. });
    let terms: Vec<String> = q
        .terms()
        .iter()
        .rev()
        .map(|(m, c)| {
            let mut factors: Vec<String> = m
                .iter()
                .map(|(v, e)| {
                    let name = match v {
                        VarId::Gen { gen, slot } if curve => format!("{}_{slot}", ["x", "y"][gen as usize]),
                        VarId::Gen { gen, slot } => format!("g{gen}_{slot}"),
                        VarId::S(a) => format!("s{a}"),
                        VarId::T(b) => format!("t{b}"),
                    };
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() || c.value() != 1 {
                factors.insert(0, c.value().to_string());
            }
            factors.join("*")
        })
        .collect();
    terms.join(" + ")
}

pub fn poly_mat_to_json(m: &Mat<Poly<Fp>>) -> Value {
    Value::Array((0..m.rows()).map(|i| m.row(i).iter().map(|e| json!(poly_to_string(e))).collect()).collect())
}

/// Entries together with the factored discriminant.
pub fn jacobi_to_json(z: &JacobiMat<Fp>) -> Result<Value> {
    Ok(json!({
        "n": z.n(),
        "entries": poly_mat_to_json(z.mat()),
        "discriminant_factors": z.discriminant()?.factors().iter().map(|(f, e)| json!({
            "factor": poly_to_string(f),
            "exponent": e,
        })).collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::scalar::Ring;

    #[test]
    fn family_round_trip_and_errors() {
        let v: Value = serde_json::from_str(r#"{"p": 7, "n": 2, "family": [[[1,2],[3,4]],[[1,0],[0,0]],[[0,0],[0,1]],[[1,1],[1,1]]]}"#).unwrap();
        let (p, fam) = family_from_json(&v).unwrap();
        assert_eq!((p, fam.len()), (7, 4));
        assert_eq!(mat_to_json(&fam[0]), json!([[1, 2], [3, 4]]));
        let bad: Value = serde_json::from_str(r#"{"p": 8, "family": []}"#).unwrap();
        assert!(matches!(family_from_json(&bad), Err(Error::Parse(_))));
        let wrong: Value = serde_json::from_str(r#"{"p": 7, "n": 3, "family": [[[1]]]}"#).unwrap();
        assert!(matches!(family_from_json(&wrong), Err(Error::Dimension(_))));
    }

    #[test]
    fn curve_and_poly_rendering() {
        let c = curve_from_json(&json!({"p": 1009, "f": [3, 2, 0, 1]})).unwrap();
        assert_eq!(curve_to_json(&c), json!({"p": 1009, "f": [3, 2, 0, 1]}));
        let alg = c.algebra();
        let x = Poly::var(alg, VarId::gen(0, 1)).unwrap();
        let q = x.mul(&x).add(&Poly::constant(alg, Fp::new(-1, 1009)));
        assert_eq!(poly_to_string(&q), "x_1^2 + 1008");
        let free = Algebra::<Fp>::free(7, 1).unwrap();
        assert_eq!(poly_to_string(&Poly::var(&free, VarId::gen(0, 0)).unwrap().scale(&Fp::new(3, 7))), "3*g0_0");
    }
}
