//! Browser bindings: each export returns a JSON document for the page in
//! `www/` to draw.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use shallowpack::measures::{brute_force_measure, traverse_and_measure, Measure};
use shallowpack::packing::{bound_shallow_packing, greedy_packing, shallow_filter};
use shallowpack::rng::{derive_seed, rng_for};
use shallowpack::sampling::decay_tail_experiment;
use shallowpack::setsystem::{build_halfspaces, CsParams};
use shallowpack::spanning::exact_mst;
use shallowpack::{PointSet, Separation, SetSystem};

/// Largest ground set the page may request; halfplane enumeration is
/// quadratic in it.
pub const MAX_POINTS: usize = 400;

#[derive(Debug, Serialize)]
pub struct PackingView {
    pub points: Vec<[f64; 2]>,
    /// Point indices of each packing member.
    pub members: Vec<Vec<usize>>,
    pub shallow_sets: usize,
    pub bound: f64,
}

#[derive(Debug, Serialize)]
pub struct TailCurve {
    pub t: Vec<f64>,
    pub empirical: Vec<f64>,
    pub exact: Vec<Option<f64>>,
    pub bound: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct WalkView {
    pub points: Vec<[f64; 2]>,
    pub sets: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize, usize)>,
    pub walk_order: Vec<usize>,
    pub values: Vec<f64>,
    pub total_updates: u64,
    pub brute_force_updates: u64,
    /// Largest deviation from the brute-force values.
    pub max_error: f64,
}

fn check_points(n: usize) -> shallowpack::Result<()> {
    if n == 0 || n > MAX_POINTS {
        return Err(shallowpack::Error::InvalidParameter(format!(
            "n must lie in 1..={MAX_POINTS}, got {n}"
        )));
    }
    Ok(())
}

fn coords(pts: &PointSet) -> Vec<[f64; 2]> {
    pts.iter().map(|p| [p[0], p[1]]).collect()
}

fn member_lists(sys: &SetSystem) -> Vec<Vec<usize>> {
    sys.vectors().iter().map(|v| v.ones_iter().collect()).collect()
}

/// Greedy strict `delta`-packing of the `k`-shallow halfplanes over `n`
/// uniform points in the unit square.
pub fn packing_view(n: usize, k: usize, delta: usize, seed: u64) -> shallowpack::Result<PackingView> {
    check_points(n)?;
    let pts = PointSet::uniform(n, 2, seed)?;
    let shallow = shallow_filter(&build_halfspaces(&pts)?, k);
    let packing = greedy_packing(&shallow, delta, Separation::Strict, seed);
    Ok(PackingView {
        points: coords(&pts),
        members: member_lists(&packing.system(&shallow)?),
        shallow_sets: shallow.len(),
        bound: bound_shallow_packing(n, k, delta.max(1), &CsParams::halfspaces(2))?,
    })
}

/// Tail of the projected length of a `k`-set under samples of `m_j - 1`
/// of `n` indices, at `steps` values of `t` from 2e to `t_max`.
pub fn tail_curve(n: usize, k: usize, m_j: usize, t_max: f64, steps: usize, trials: usize, seed: u64) -> shallowpack::Result<TailCurve> {
    let start = 2.0 * std::f64::consts::E;
    let steps = steps.max(2);
    let ts: Vec<f64> = (0..steps)
        .map(|i| start + (t_max - start).max(0.0) * i as f64 / (steps - 1) as f64)
        .collect();
    let r = decay_tail_experiment(n, k, m_j, &ts, trials, seed)?;
    Ok(TailCurve {
        t: ts,
        empirical: r.rows.iter().map(|row| row.empirical).collect(),
        exact: r.rows.iter().map(|row| row.exact).collect(),
        bound: r.rows.iter().map(|row| row.bound).collect(),
    })
}

/// `m` random `k`-shallow halfplane sets over clustered points, measured
/// along a depth-first walk of their minimum spanning tree.
pub fn walk_view(n: usize, k: usize, m: usize, measure: &str, seed: u64) -> shallowpack::Result<WalkView> {
    check_points(n)?;
    let measure: Measure = measure.parse()?;
    let pts = PointSet::clustered(n, 2, 4, 0.06, seed)?;
    let shallow = shallow_filter(&build_halfspaces(&pts)?, k);
    let mut rng = rng_for(derive_seed(seed, "web/walk", 0), "web/choose", 0);
    let mut picked = rand::seq::index::sample(&mut rng, shallow.len(), m.min(shallow.len())).into_vec();
    picked.sort_unstable();
    let sys = shallow.select(&picked)?;
    let tree = exact_mst(&sys)?;
    let walk = traverse_and_measure(&sys, &tree, &pts, measure, None)?;
    let brute = brute_force_measure(&sys, &pts, measure)?;
    let max_error = walk
        .values
        .iter()
        .zip(&brute.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(WalkView {
        points: coords(&pts),
        sets: member_lists(&sys),
        edges: tree.edges().to_vec(),
        walk_order: walk.walk_order,
        values: walk.values,
        total_updates: walk.total_updates,
        brute_force_updates: brute.total_updates,
        max_error,
    })
}

fn to_js<T: Serialize>(r: shallowpack::Result<T>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = packingView)]
pub fn packing_view_js(n: usize, k: usize, delta: usize, seed: u32) -> Result<String, JsError> {
    to_js(packing_view(n, k, delta, seed as u64))
}

#[wasm_bindgen(js_name = tailCurve)]
pub fn tail_curve_js(n: usize, k: usize, m_j: usize, t_max: f64, trials: usize, seed: u32) -> Result<String, JsError> {
    to_js(tail_curve(n, k, m_j, t_max, 24, trials, seed as u64))
}

#[wasm_bindgen(js_name = walkView)]
pub fn walk_view_js(n: usize, k: usize, m: usize, measure: &str, seed: u32) -> Result<String, JsError> {
    to_js(walk_view(n, k, m, measure, seed as u64))
}
