//! Browser front end: writhe census, diagram rendering and torus link
//! identification for a curve pasted as JSON.

use mwknot::knotdiag::{identify_diagram, lift_double_cover, u1_center};
use mwknot::mwgen::{default_roots, quadric_specimen, twisted_cubic};
use mwknot::spacecurve::{check_smooth, SpaceCurve};
use mwknot::svg::{lifted_svg, projective_svg};
use mwknot::writhe::writhe_with_retries;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

const RETRIES: usize = 64;

fn curve(src: &str) -> Result<SpaceCurve, String> {
    let k = SpaceCurve::from_json(src).map_err(|e| e.to_string())?;
    check_smooth(&k).map_err(|e| format!("not smooth: {e}"))?;
    Ok(k)
}

/// Curve JSON of the standard specimen of degree `d` (not verified here).
pub fn specimen_json(d: usize) -> Result<String, String> {
    if d == 3 {
        return Ok(twisted_cubic().to_json());
    }
    let (c, e) = default_roots(d);
    Ok(quadric_specimen(d, &c, &e).map_err(|e| e.to_string())?.0.to_json())
}

/// Writhe and double point census from a seeded random center.
pub fn writhe_json(src: &str, seed: u64) -> Result<String, String> {
    let k = curve(src)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = writhe_with_retries(&k, &mut rng, RETRIES).map_err(|e| e.to_string())?;
    let n = mwknot::max_writhe(k.degree());
    Ok(json!({ "degree": k.degree(), "n_d": n, "report": r }).to_string())
}

/// Projective and lifted diagram SVGs from a center without solitary nodes.
pub fn diagram_svgs(src: &str, seed: u64) -> Result<[String; 2], String> {
    let k = curve(src)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, dg) = u1_center(&k, &mut rng, RETRIES).map_err(|e| e.to_string())?;
    let lift = lift_double_cover(&dg).map_err(|e| e.to_string())?;
    Ok([projective_svg(&dg, None), lifted_svg(&dg, &lift)])
}

/// Invariant comparison of the lifted diagram with `T(d, d-2)`.
pub fn identify_json(src: &str, seed: u64, budget: usize) -> Result<String, String> {
    let k = curve(src)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, dg) = u1_center(&k, &mut rng, RETRIES).map_err(|e| e.to_string())?;
    let (report, _) = identify_diagram(&dg, budget).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
pub fn specimen(d: usize) -> Result<String, JsError> {
    specimen_json(d).map_err(js)
}

#[wasm_bindgen]
pub fn writhe(src: &str, seed: u64) -> Result<String, JsError> {
    writhe_json(src, seed).map_err(js)
}

#[wasm_bindgen]
pub fn diagrams(src: &str, seed: u64) -> Result<Vec<String>, JsError> {
    diagram_svgs(src, seed).map(Vec::from).map_err(js)
}

#[wasm_bindgen]
pub fn identify(src: &str, seed: u64, budget: usize) -> Result<String, JsError> {
    identify_json(src, seed, budget).map_err(js)
}
