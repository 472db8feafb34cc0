//! Browser demo: unit balls of planar norms, cone pairs with their roof cut,
//! and single casebook rows.
//!
//! The plain functions return JSON strings and are tested natively; the
//! `wasm_bindgen` exports wrap them for the page in `www/`.

use anisoperim::casebook;
use anisoperim::descriptors::NormDesc;
use anisoperim::geometry::{build_cone_pair, roof_cut_delta};
use anisoperim::Anisotropy;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn planar(desc: &str) -> Result<Anisotropy, String> {
    let d: NormDesc = serde_json::from_str(desc).map_err(|e| format!("line {} column {}: {e}", e.line(), e.column()))?;
    let n = d.build(Some(2)).map_err(|e| e.to_string())?;
    if n.dim() != 2 {
        return Err(format!("the demo draws planar norms, this one has dimension {}", n.dim()));
    }
    Ok(n)
}

/// Boundary points of `B_Φ` and `B_Φ°` along `samples` rays, with `Φ°` at
/// the first axis direction.
pub fn balls(desc: &str, samples: usize) -> Result<String, String> {
    let n = planar(desc)?;
    let samples = samples.clamp(8, 4096);
    let ray = |f: &dyn Fn(&[f64]) -> f64| -> Vec<[f64; 2]> {
        (0..samples)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / samples as f64;
                let v = [a.cos(), a.sin()];
                let r = 1.0 / f(&v);
                [r * v[0], r * v[1]]
            })
            .collect()
    };
    Ok(json!({
        "ball": ray(&|v| n.eval(v)),
        "dual_ball": ray(&|v| n.eval_dual(v)),
        "dual_e1": n.eval_dual(&[1.0, 0.0]),
        "dual_e2": n.eval_dual(&[0.0, 1.0]),
    })
    .to_string())
}

/// The cone pair with normals at angles `a1`, `a2` (radians), and the roof
/// cut at `depth` when the pair is a roof.
pub fn cones(a1: f64, a2: f64, desc: &str, depth: f64) -> Result<String, String> {
    let n = planar(desc)?;
    let (n1, n2) = ([a1.cos(), a1.sin()], [a2.cos(), a2.sin()]);
    let pair = build_cone_pair(&n1, &n2, None).map_err(|e| e.to_string())?;
    let roof = if pair.report.roof {
        Some(roof_cut_delta(&n1, &n2, depth, &n).map_err(|e| e.to_string())?)
    } else {
        None
    };
    Ok(json!({ "normals": [n1, n2], "report": pair.report, "roof": roof }).to_string())
}

pub fn scenario_ids() -> String {
    json!(casebook::registry().iter().map(|s| json!({"id": s.id, "title": s.title})).collect::<Vec<_>>()).to_string()
}

pub fn scenario(id: &str) -> Result<String, String> {
    let rows = casebook::run(id).map_err(|e| e.to_string())?;
    serde_json::to_string(&rows[0]).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = balls)]
pub fn balls_js(desc: &str, samples: usize) -> Result<String, JsValue> {
    balls(desc, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = cones)]
pub fn cones_js(a1: f64, a2: f64, desc: &str, depth: f64) -> Result<String, JsValue> {
    cones(a1, a2, desc, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = scenarioIds)]
pub fn scenario_ids_js() -> String {
    scenario_ids()
}

#[wasm_bindgen(js_name = scenario)]
pub fn scenario_js(id: &str) -> Result<String, JsValue> {
    scenario(id).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn l1_ball_and_dual() {
        let v: Value = serde_json::from_str(&balls(r#"{"kind":"pnorm","p":1}"#, 8).unwrap()).unwrap();
        // ray at 45°: |x| + |y| = 1
        let p = &v["ball"][1];
        assert!((p[0].as_f64().unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(v["dual_e1"].as_f64().unwrap(), 1.0);
        assert!(balls(r#"{"kind":"euclidean","dim":3}"#, 8).is_err());
        assert!(balls("{", 8).unwrap_err().contains("line 1"));
    }

    #[test]
    fn roof_pair() {
        let r = std::f64::consts::FRAC_PI_4;
        let v: Value = serde_json::from_str(&cones(3.0 * r, r, r#"{"kind":"pnorm","p":"inf"}"#, 1.0).unwrap()).unwrap();
        assert_eq!(v["report"]["roof"], true);
        let roof = &v["roof"];
        assert!((roof["delta"].as_f64().unwrap() - roof["closed_form"].as_f64().unwrap()).abs() < 1e-9);
        let v: Value = serde_json::from_str(&cones(r, 2.0 * r, r#"{"kind":"euclidean"}"#, 1.0).unwrap()).unwrap();
        assert!(v["roof"].is_null());
    }

    #[test]
    fn one_row() {
        let ids: Value = serde_json::from_str(&scenario_ids()).unwrap();
        assert!(ids.as_array().unwrap().len() >= 12);
        let row: Value = serde_json::from_str(&scenario("ex2.2-parallelogram").unwrap()).unwrap();
        assert_eq!(row["status"], "pass");
        assert!(scenario("nope").is_err());
    }
}
