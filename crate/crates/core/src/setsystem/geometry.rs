//! Exact enumeration of the subsets of a finite point set cut out by closed
//! halfspaces, balls and parallel slabs, for inputs of dimension at most 3.
//!
//! Every routine first reduces the input to coordinates in its affine hull,
//! so degenerate configurations (collinear, coplanar, coincident points) are
//! handled by recursing in the lower dimension.
//!
//! Halfspaces: every nontrivial subset is realised by a hyperplane through
//! `r` affinely independent points (in hull dimension `r`) with the points on
//! the hyperplane split by a halfspace of the hyperplane itself. The split is
//! enumerated recursively.
//!
//! Balls: points are lifted onto the paraboloid `(x, |x|^2)`; balls are the
//! lower halfspaces of the lift. Non-vertical lifted hyperplanes contribute
//! their lower side plus any halfspace split of the cospherical points on
//! them; vertical ones are ordinary hyperplanes and contribute either side
//! plus any ball split of their points. Halfspace subsets are added as
//! limits of growing balls.
//!
//! Slabs: for a fixed direction the slab subsets are the intervals of the
//! projection order. The order only changes where two points project
//! equally, so one direction per cell of that arrangement of critical
//! directions suffices.

use std::collections::HashSet;

use super::{for_each_combination, PointSet, SetSystem};
use crate::bits::IncidenceVector;
use crate::error::{Error, Result};

const MAX_DIM: usize = 3;
const REL_TOL: f64 = 1e-9;

type Coords = Vec<Vec<f64>>;

/// Every distinct subset of `pts` of the form `{x : <a, x> <= b}`.
pub fn build_halfspaces(pts: &PointSet) -> Result<SetSystem> {
    let coords = checked_coords(pts)?;
    SetSystem::new(pts.len(), halfspace_subsets(&coords))
}

/// Every distinct subset of `pts` of the form `{x : |x - c| <= r}`, together
/// with the halfspace subsets obtained as limits of growing balls.
pub fn build_balls(pts: &PointSet) -> Result<SetSystem> {
    let coords = checked_coords(pts)?;
    SetSystem::new(pts.len(), ball_subsets(&coords))
}

/// Every distinct subset of `pts` of the form `{x : b1 <= <a, x> <= b2}`.
pub fn build_slabs(pts: &PointSet) -> Result<SetSystem> {
    let coords = checked_coords(pts)?;
    SetSystem::new(pts.len(), slab_subsets(&coords))
}

fn checked_coords(pts: &PointSet) -> Result<Coords> {
    if pts.dim() > MAX_DIM {
        return Err(Error::DimensionTooHigh(pts.dim()));
    }
    if pts.is_empty() {
        return Err(Error::invalid("point set must be non-empty"));
    }
    Ok(pts.iter().map(<[f64]>::to_vec).collect())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Points expressed in an orthonormal basis of their affine hull, centred
/// at the centroid.
struct Frame {
    rank: usize,
    coords: Coords,
    scale: f64,
}

fn affine_frame(points: &[Vec<f64>]) -> Frame {
    let k = points.len();
    if k == 0 {
        return Frame {
            rank: 0,
            coords: vec![],
            scale: 0.0,
        };
    }
    let dim = points[0].len();
    let mut centroid = vec![0.0; dim];
    for p in points {
        for (c, x) in centroid.iter_mut().zip(p) {
            *c += x / k as f64;
        }
    }
    let centred: Coords = points
        .iter()
        .map(|p| p.iter().zip(&centroid).map(|(x, c)| x - c).collect())
        .collect();
    let scale = centred.iter().map(|p| norm(p)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Frame {
            rank: 0,
            coords: vec![vec![]; k],
            scale,
        };
    }

    // Greedy basis: repeatedly take the point with the largest residual.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while basis.len() < dim {
        let mut best: Option<Vec<f64>> = None;
        let mut best_norm = REL_TOL * scale;
        for p in &centred {
            let mut r = p.clone();
            for b in &basis {
                let proj = dot(&r, b);
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= proj * bi;
                }
            }
            let rn = norm(&r);
            if rn > best_norm {
                best_norm = rn;
                best = Some(r);
            }
        }
        match best {
            Some(mut r) => {
                for x in r.iter_mut() {
                    *x /= best_norm;
                }
                basis.push(r);
            }
            None => break,
        }
    }
    let coords = centred
        .iter()
        .map(|p| basis.iter().map(|b| dot(p, b)).collect())
        .collect();
    Frame {
        rank: basis.len(),
        coords,
        scale,
    }
}

fn determinant(mut m: Vec<f64>, size: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..size {
        let pivot = (col..size)
            .max_by(|&a, &b| m[a * size + col].abs().total_cmp(&m[b * size + col].abs()))
            .unwrap();
        if m[pivot * size + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..size {
                m.swap(pivot * size + j, col * size + j);
            }
            det = -det;
        }
        let p = m[col * size + col];
        det *= p;
        for row in col + 1..size {
            let f = m[row * size + col] / p;
            for j in col..size {
                m[row * size + j] -= f * m[col * size + j];
            }
        }
    }
    det
}

/// Unit normal of the hyperplane through the `dim` points `pts[tuple[..]]`
/// in `R^dim`, or `None` when they are affinely dependent.
fn hyperplane_normal(pts: &[Vec<f64>], tuple: &[usize]) -> Option<Vec<f64>> {
    let dim = tuple.len();
    let base = &pts[tuple[0]];
    let diffs: Vec<Vec<f64>> = tuple[1..]
        .iter()
        .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let scale: f64 = diffs.iter().map(|d| norm(d)).product();
    if scale == 0.0 {
        return None;
    }
    let rows = dim - 1;
    let mut normal = Vec::with_capacity(dim);
    for skip in 0..dim {
        let mut minor = Vec::with_capacity(rows * rows);
        for d in &diffs {
            for (j, &x) in d.iter().enumerate() {
                if j != skip {
                    minor.push(x);
                }
            }
        }
        let sign = if skip % 2 == 0 { 1.0 } else { -1.0 };
        normal.push(sign * determinant(minor, rows));
    }
    let len = norm(&normal);
    if len <= REL_TOL * scale {
        return None;
    }
    for x in normal.iter_mut() {
        *x /= len;
    }
    Some(normal)
}

/// Indices sorted by value, grouped where values agree within `tol`.
fn value_groups(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for i in order {
        if groups.is_empty() || values[i] - last > tol {
            groups.push(vec![i]);
        } else {
            groups.last_mut().unwrap().push(i);
        }
        last = values[i];
    }
    groups
}

fn union_of_groups(width: usize, groups: &[Vec<usize>]) -> IncidenceVector {
    let mut v = IncidenceVector::zeros(width);
    for g in groups {
        for &i in g {
            v.set(i, true);
        }
    }
    v
}

fn gather(coords: &[Vec<f64>], idx: &[usize]) -> Coords {
    idx.iter().map(|&i| coords[i].clone()).collect()
}

/// Strict negative side, strict positive side and on-hyperplane indices.
fn classify(
    coords: &[Vec<f64>],
    normal: &[f64],
    anchor: &[f64],
    tol: f64,
) -> (IncidenceVector, IncidenceVector, Vec<usize>) {
    let k = coords.len();
    let offset = dot(normal, anchor);
    let mut below = IncidenceVector::zeros(k);
    let mut above = IncidenceVector::zeros(k);
    let mut on = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        let s = dot(normal, c) - offset;
        if s < -tol {
            below.set(i, true);
        } else if s > tol {
            above.set(i, true);
        } else {
            on.push(i);
        }
    }
    (below, above, on)
}

fn extend_with(base: &IncidenceVector, on: &[usize], split: &IncidenceVector) -> IncidenceVector {
    let mut v = base.clone();
    for j in split.ones_iter() {
        v.set(on[j], true);
    }
    v
}

fn trivial_subsets(k: usize) -> HashSet<IncidenceVector> {
    HashSet::from([IncidenceVector::zeros(k), IncidenceVector::ones(k)])
}

pub(super) fn halfspace_subsets(coords: &[Vec<f64>]) -> Vec<IncidenceVector> {
    let k = coords.len();
    let frame = affine_frame(coords);
    let mut out = trivial_subsets(k);
    match frame.rank {
        0 => {}
        1 => {
            let values: Vec<f64> = frame.coords.iter().map(|c| c[0]).collect();
            let groups = value_groups(&values, REL_TOL * frame.scale);
            for g in 0..groups.len() {
                out.insert(union_of_groups(k, &groups[..=g]));
                out.insert(union_of_groups(k, &groups[g..]));
            }
        }
        r => {
            let c = &frame.coords;
            let tol = REL_TOL * frame.scale;
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            for_each_combination(k, r, |tuple| {
                let Some(normal) = hyperplane_normal(c, tuple) else {
                    return true;
                };
                let (below, above, on) = classify(c, &normal, &c[tuple[0]], tol);
                if on.len() > r && !seen.insert(on.clone()) {
                    return true;
                }
                for split in halfspace_subsets(&gather(c, &on)) {
                    out.insert(extend_with(&below, &on, &split));
                    out.insert(extend_with(&above, &on, &split));
                }
                true
            });
        }
    }
    out.into_iter().collect()
}

pub(super) fn ball_subsets(coords: &[Vec<f64>]) -> Vec<IncidenceVector> {
    let k = coords.len();
    let frame = affine_frame(coords);
    let mut out = trivial_subsets(k);
    match frame.rank {
        0 => {}
        1 => {
            // a ball meets a line in an interval
            let values: Vec<f64> = frame.coords.iter().map(|c| c[0]).collect();
            let groups = value_groups(&values, REL_TOL * frame.scale);
            for a in 0..groups.len() {
                for b in a..groups.len() {
                    out.insert(union_of_groups(k, &groups[a..=b]));
                }
            }
        }
        r => {
            let c = &frame.coords;
            let lifted: Coords = c
                .iter()
                .map(|p| {
                    let mut y = p.clone();
                    y.push(dot(p, p));
                    y
                })
                .collect();
            let tol = REL_TOL * frame.scale.max(frame.scale * frame.scale);
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            for_each_combination(k, r + 1, |tuple| {
                let Some(mut normal) = hyperplane_normal(&lifted, tuple) else {
                    return true;
                };
                if normal[r] < 0.0 {
                    for x in normal.iter_mut() {
                        *x = -*x;
                    }
                }
                let (below, above, on) = classify(&lifted, &normal, &lifted[tuple[0]], tol);
                if on.len() > r + 1 && !seen.insert(on.clone()) {
                    return true;
                }
                let on_coords = gather(c, &on);
                if normal[r] > REL_TOL {
                    for split in halfspace_subsets(&on_coords) {
                        out.insert(extend_with(&below, &on, &split));
                    }
                } else {
                    for split in ball_subsets(&on_coords) {
                        out.insert(extend_with(&below, &on, &split));
                        out.insert(extend_with(&above, &on, &split));
                    }
                }
                true
            });
            out.extend(halfspace_subsets(c));
        }
    }
    out.into_iter().collect()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

/// One direction inside every cell of the arrangement of critical
/// directions (those along which two points project to the same value).
fn slab_directions(frame: &Frame) -> Vec<Vec<f64>> {
    let c = &frame.coords;
    let k = c.len();
    let tol = REL_TOL * frame.scale;
    match frame.rank {
        0 => vec![],
        1 => vec![vec![1.0]],
        2 => {
            let mut angles: Vec<f64> = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    let (dx, dy) = (c[j][0] - c[i][0], c[j][1] - c[i][1]);
                    if dx.hypot(dy) > tol {
                        let a = (dy.atan2(dx) + std::f64::consts::FRAC_PI_2)
                            .rem_euclid(std::f64::consts::PI);
                        angles.push(a);
                    }
                }
            }
            angles.sort_by(f64::total_cmp);
            angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            let mids: Vec<f64> = match angles.len() {
                0 => vec![0.0],
                1 => vec![angles[0] + std::f64::consts::FRAC_PI_2],
                len => {
                    let mut m: Vec<f64> = angles.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
                    m.push(0.5 * (angles[len - 1] + angles[0] + std::f64::consts::PI));
                    m
                }
            };
            mids.into_iter().map(|t| vec![t.cos(), t.sin()]).collect()
        }
        _ => {
            // Critical great circles have normals p_i - p_j.
            let mut normals: Vec<Vec<f64>> = Vec::new();
            for i in 0..k {
                for j in i + 1..k {
                    let d: Vec<f64> = c[j].iter().zip(&c[i]).map(|(a, b)| a - b).collect();
                    if norm(&d) <= tol {
                        continue;
                    }
                    let mut u = unit(&d);
                    let lead = u.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
                    if lead < 0.0 {
                        for x in u.iter_mut() {
                            *x = -*x;
                        }
                    }
                    if !normals
                        .iter()
                        .any(|n| n.iter().zip(&u).all(|(a, b)| (a - b).abs() < 1e-12))
                    {
                        normals.push(u);
                    }
                }
            }
            let mut dirs = Vec::new();
            if normals.len() == 1 {
                dirs.push(normals[0].clone());
                return dirs;
            }
            for a in 0..normals.len() {
                for b in a + 1..normals.len() {
                    let v = cross(&normals[a], &normals[b]);
                    if norm(&v) < 1e-9 {
                        continue;
                    }
                    let v = unit(&v);
                    let mut through = Vec::new();
                    let mut gap = 1.0f64;
                    for (idx, n) in normals.iter().enumerate() {
                        let s = dot(&v, n).abs();
                        if s <= 1e-9 {
                            through.push(idx);
                        } else {
                            gap = gap.min(s);
                        }
                    }
                    // visit each vertex once, from its two lowest circles
                    if through.len() < 2 || through[0] != a || through[1] != b {
                        continue;
                    }
                    let helper = if v[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
                    let e1 = unit(&cross(&v, &helper));
                    let e2 = cross(&v, &e1).to_vec();
                    let mut phis: Vec<f64> = Vec::new();
                    for &idx in &through {
                        let t = cross(&v, &normals[idx]);
                        let phi = dot(&t, &e2).atan2(dot(&t, &e1));
                        phis.push(phi.rem_euclid(std::f64::consts::TAU));
                        phis.push((phi + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU));
                    }
                    phis.sort_by(f64::total_cmp);
                    phis.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
                    let eps = 0.5 * gap;
                    for w in 0..phis.len() {
                        let lo = phis[w];
                        let hi = if w + 1 < phis.len() {
                            phis[w + 1]
                        } else {
                            phis[0] + std::f64::consts::TAU
                        };
                        let mid = 0.5 * (lo + hi);
                        let dir: Vec<f64> = (0..3)
                            .map(|i| v[i] + eps * (mid.cos() * e1[i] + mid.sin() * e2[i]))
                            .collect();
                        dirs.push(unit(&dir));
                    }
                }
            }
            dirs
        }
    }
}

pub(super) fn slab_subsets(coords: &[Vec<f64>]) -> Vec<IncidenceVector> {
    let k = coords.len();
    let frame = affine_frame(coords);
    let mut out = trivial_subsets(k);
    let tol = REL_TOL * frame.scale;
    for dir in slab_directions(&frame) {
        let values: Vec<f64> = frame.coords.iter().map(|p| dot(p, &dir)).collect();
        let groups = value_groups(&values, tol);
        for a in 0..groups.len() {
            let mut v = IncidenceVector::zeros(k);
            for g in &groups[a..] {
                for &i in g {
                    v.set(i, true);
                }
                out.insert(v.clone());
            }
        }
    }
    out.into_iter().collect()
}
