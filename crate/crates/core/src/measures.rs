//! Geometric measures of every set in a system, computed by walking a
//! spanning tree with incremental insertions and deletions, and counted
//! against loading each set from scratch.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::bits::IncidenceVector;
use crate::error::{Error, Result};
use crate::setsystem::{PointSet, SetSystem};
use crate::spanning::SpanningTree;

const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Diameter,
    SebRadius,
    BboxVolume,
}

impl Measure {
    pub fn id(self) -> &'static str {
        match self {
            Measure::Diameter => "diameter",
            Measure::SebRadius => "seb-radius",
            Measure::BboxVolume => "bbox-volume",
        }
    }

    pub fn evaluate(self, points: &[&[f64]]) -> Result<f64> {
        match self {
            Measure::Diameter => Ok(measure_diameter(points)),
            Measure::SebRadius => measure_seb_radius(points),
            Measure::BboxVolume => Ok(measure_bbox_volume(points)),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diameter" => Ok(Measure::Diameter),
            "seb-radius" | "seb" => Ok(Measure::SebRadius),
            "bbox-volume" | "bbox" => Ok(Measure::BboxVolume),
            other => Err(Error::invalid(format!("unknown measure `{other}`"))),
        }
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Largest pairwise Euclidean distance; 0 for fewer than two points.
pub fn measure_diameter(points: &[&[f64]]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(dist2(a, b));
        }
    }
    best.sqrt()
}

/// Product of the coordinate extents; 0 for an empty input.
pub fn measure_bbox_volume(points: &[&[f64]]) -> f64 {
    let Some(first) = points.first() else {
        return 0.0;
    };
    (0..first.len())
        .map(|j| {
            let (lo, hi) = points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[j]), hi.max(p[j])));
            hi - lo
        })
        .product()
}

#[derive(Clone, Debug)]
struct Ball {
    centre: Vec<f64>,
    radius2: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        let r = self.radius2.sqrt();
        dist2(&self.centre, p).sqrt() <= r + BOUNDARY_TOL * r.max(1.0)
    }
}

/// Solves `a x = b` for a small dense system, `None` when singular.
#[allow(clippy::needless_range_loop)]
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for j in col..n {
                a[row][j] -= f * a[col][j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|j| a[row][j] * x[j]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Smallest ball with every support point on its boundary, computed in the
/// affine hull of the support.
fn circumball(support: &[&[f64]]) -> Option<Ball> {
    let dim = support.first()?.len();
    let p0 = support[0];
    if support.len() == 1 {
        return Some(Ball {
            centre: p0.to_vec(),
            radius2: 0.0,
        });
    }
    let diffs: Vec<Vec<f64>> = support[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let a: Vec<Vec<f64>> = diffs
        .iter()
        .map(|di| diffs.iter().map(|dj| 2.0 * dot(di, dj)).collect())
        .collect();
    let b: Vec<f64> = diffs.iter().map(|d| dot(d, d)).collect();
    let lambda = solve(a, b)?;
    let mut centre = p0.to_vec();
    for (l, d) in lambda.iter().zip(&diffs) {
        for j in 0..dim {
            centre[j] += l * d[j];
        }
    }
    let radius2 = support.iter().map(|p| dist2(&centre, p)).fold(0.0, f64::max);
    Some(Ball { centre, radius2 })
}

/// Ball through `support`; for affinely dependent supports the smallest
/// ball through a sub-support that still contains every support point.
fn support_ball(support: &[&[f64]]) -> Ball {
    if let Some(b) = circumball(support) {
        return b;
    }
    let mut best: Option<Ball> = None;
    for skip in 0..support.len() {
        let sub: Vec<&[f64]> = support
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, p)| *p)
            .collect();
        let b = support_ball(&sub);
        if support.iter().all(|p| b.contains(p)) && best.as_ref().is_none_or(|o| b.radius2 < o.radius2) {
            best = Some(b);
        }
    }
    best.expect("some sub-support covers a dependent support")
}

/// Move-to-front Welzl recursion over the first `end` points of `pts`.
fn mtf_ball<'a>(pts: &mut Vec<&'a [f64]>, end: usize, support: &mut Vec<&'a [f64]>, dim: usize) -> Ball {
    let mut ball = if support.is_empty() {
        Ball {
            centre: vec![0.0; dim],
            radius2: -1.0,
        }
    } else {
        support_ball(support)
    };
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        let p = pts[i];
        let outside = ball.radius2 < 0.0 || !ball.contains(p);
        if outside {
            support.push(p);
            ball = mtf_ball(pts, i, support, dim);
            support.pop();
            pts[..=i].rotate_right(1);
        }
    }
    ball
}

/// Radius of the smallest enclosing ball, dimension at most 3. Empty input
/// has radius 0.
pub fn measure_seb_radius(points: &[&[f64]]) -> Result<f64> {
    let Some(first) = points.first() else {
        return Ok(0.0);
    };
    let dim = first.len();
    if dim > 3 {
        return Err(Error::DimensionTooHigh(dim));
    }
    let mut pts = points.to_vec();
    let ball = mtf_ball(&mut pts, points.len(), &mut Vec::new(), dim);
    Ok(ball.radius2.max(0.0).sqrt())
}

/// A subset of a fixed point set under insertions and deletions, with an
/// update counter and per-axis coordinate multisets.
#[derive(Clone, Debug)]
pub struct DynamicPointStore<'a> {
    points: &'a PointSet,
    members: IncidenceVector,
    axes: Vec<BTreeMap<OrderedFloat<f64>, usize>>,
    updates: u64,
}

impl<'a> DynamicPointStore<'a> {
    pub fn new(points: &'a PointSet) -> Self {
        DynamicPointStore {
            points,
            members: IncidenceVector::zeros(points.len()),
            axes: vec![BTreeMap::new(); points.dim()],
            updates: 0,
        }
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.points.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.points.len(),
            });
        }
        Ok(())
    }

    pub fn insert(&mut self, i: usize) -> Result<()> {
        self.check(i)?;
        if self.members.get(i) {
            return Err(Error::invalid(format!("point {i} is already stored")));
        }
        self.members.set(i, true);
        for (axis, &c) in self.axes.iter_mut().zip(self.points.point(i)) {
            *axis.entry(OrderedFloat(c)).or_default() += 1;
        }
        self.updates += 1;
        Ok(())
    }

    pub fn remove(&mut self, i: usize) -> Result<()> {
        self.check(i)?;
        if !self.members.get(i) {
            return Err(Error::invalid(format!("point {i} is not stored")));
        }
        self.members.set(i, false);
        for (axis, &c) in self.axes.iter_mut().zip(self.points.point(i)) {
            let key = OrderedFloat(c);
            let count = axis.get_mut(&key).expect("coordinate present");
            *count -= 1;
            if *count == 0 {
                axis.remove(&key);
            }
        }
        self.updates += 1;
        Ok(())
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &IncidenceVector {
        &self.members
    }

    /// Stored points in ground-set order.
    pub fn points(&self) -> Vec<&'a [f64]> {
        let pts = self.points;
        self.members.ones_iter().map(|i| pts.point(i)).collect()
    }

    pub fn query(&self, measure: Measure) -> Result<f64> {
        match measure {
            Measure::BboxVolume => {
                if self.is_empty() {
                    return Ok(0.0);
                }
                Ok(self
                    .axes
                    .iter()
                    .map(|axis| {
                        let lo = axis.keys().next().expect("non-empty").0;
                        let hi = axis.keys().next_back().expect("non-empty").0;
                        hi - lo
                    })
                    .product())
            }
            other => other.evaluate(&self.points()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub measure: Measure,
    /// Indexed by set.
    pub values: Vec<f64>,
    pub set_sizes: Vec<usize>,
    pub total_updates: u64,
    /// `2 * sum |S|`: every set inserted and then deleted.
    pub brute_force_updates: u64,
    /// Sets in order of first measurement.
    pub walk_order: Vec<usize>,
}

impl MeasureReport {
    /// `total_updates / brute_force_updates`, 0 when nothing was loaded.
    pub fn ratio(&self) -> f64 {
        if self.brute_force_updates == 0 {
            0.0
        } else {
            self.total_updates as f64 / self.brute_force_updates as f64
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("set_index,set_size,measure_value\n");
        for (i, (v, s)) in self.values.iter().zip(&self.set_sizes).enumerate() {
            let _ = writeln!(out, "{i},{s},{v}");
        }
        let _ = write!(
            out,
            "\ntotal_updates,brute_force_updates,ratio\n{},{},{}\n",
            self.total_updates,
            self.brute_force_updates,
            self.ratio()
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check_ground(sys: &SetSystem, pts: &PointSet) -> Result<()> {
    if pts.len() != sys.n() {
        return Err(Error::WidthMismatch {
            expected: sys.n(),
            found: pts.len(),
        });
    }
    Ok(())
}

fn brute_force_count(sys: &SetSystem) -> u64 {
    2 * sys.vectors().iter().map(|v| v.len() as u64).sum::<u64>()
}

/// The longest set, lowest index on ties.
pub fn default_root(sys: &SetSystem) -> Option<usize> {
    (0..sys.len()).min_by_key(|&i| (std::cmp::Reverse(sys.get(i).len()), i))
}

/// Loads the root set, then walks the tree depth first (children in index
/// order), applying the symmetric difference on every edge down and back up,
/// and records the measure on first arrival at each set.
pub fn traverse_and_measure(
    sys: &SetSystem,
    tree: &SpanningTree,
    pts: &PointSet,
    measure: Measure,
    root: Option<usize>,
) -> Result<MeasureReport> {
    check_ground(sys, pts)?;
    let m = sys.len();
    let brute_force_updates = brute_force_count(sys);
    if m == 0 {
        return Ok(MeasureReport {
            measure,
            values: vec![],
            set_sizes: vec![],
            total_updates: 0,
            brute_force_updates,
            walk_order: vec![],
        });
    }
    if tree.m() != m {
        return Err(Error::invalid(format!("tree spans {} nodes, system has {m} sets", tree.m())));
    }
    let root = root.or_else(|| default_root(sys)).expect("non-empty");
    if root >= m {
        return Err(Error::IndexOutOfRange { index: root, n: m });
    }

    let mut store = DynamicPointStore::new(pts);
    let apply = |store: &mut DynamicPointStore, from: usize, to: usize| -> Result<()> {
        let diff = sys.get(from).xor(sys.get(to))?;
        for i in diff.ones_iter() {
            if sys.get(to).get(i) {
                store.insert(i)?;
            } else {
                store.remove(i)?;
            }
        }
        Ok(())
    };

    for i in sys.get(root).ones_iter() {
        store.insert(i)?;
    }
    let mut values = vec![0.0; m];
    let mut walk_order = Vec::with_capacity(m);
    values[root] = store.query(measure)?;
    walk_order.push(root);

    let adj = tree.adjacency();
    // (node, parent, next neighbour position)
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
    while let Some(top) = stack.last_mut() {
        let (node, parent, pos) = *top;
        if pos < adj[node].len() {
            top.2 += 1;
            let child = adj[node][pos].0;
            if child == parent {
                continue;
            }
            apply(&mut store, node, child)?;
            values[child] = store.query(measure)?;
            walk_order.push(child);
            stack.push((child, node, 0));
        } else {
            stack.pop();
            if parent != usize::MAX {
                apply(&mut store, node, parent)?;
            }
        }
    }
    debug_assert_eq!(store.members(), sys.get(root));
    Ok(MeasureReport {
        measure,
        values,
        set_sizes: sys.vectors().iter().map(IncidenceVector::len).collect(),
        total_updates: store.updates(),
        brute_force_updates,
        walk_order,
    })
}

/// Every set loaded into an empty store, measured, then unloaded.
pub fn brute_force_measure(sys: &SetSystem, pts: &PointSet, measure: Measure) -> Result<MeasureReport> {
    check_ground(sys, pts)?;
    let mut store = DynamicPointStore::new(pts);
    let mut values = Vec::with_capacity(sys.len());
    for v in sys.vectors() {
        for i in v.ones_iter() {
            store.insert(i)?;
        }
        values.push(store.query(measure)?);
        for i in v.ones_iter() {
            store.remove(i)?;
        }
    }
    Ok(MeasureReport {
        measure,
        values,
        set_sizes: sys.vectors().iter().map(IncidenceVector::len).collect(),
        total_updates: store.updates(),
        brute_force_updates: brute_force_count(sys),
        walk_order: (0..sys.len()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_for;
    use crate::setsystem::build_halfspaces;
    use crate::spanning::exact_mst;
    use rand::Rng as _;

    fn refs(v: &[Vec<f64>]) -> Vec<&[f64]> {
        v.iter().map(Vec::as_slice).collect()
    }

    fn random_points(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = rng_for(seed, "test/points", 0);
        (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect()
    }

    #[test]
    fn diameter_examples() {
        let p = vec![vec![0.0, 0.0], vec![1.0, 1.0]];
        assert!((measure_diameter(&refs(&p)) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(measure_diameter(&refs(&[vec![3.0, 4.0]])), 0.0);
        assert_eq!(measure_diameter(&[]), 0.0);
    }

    /// Diameter via the convex hull and an all-pairs scan over hull vertices.
    #[test]
    fn diameter_matches_hull_vertices() {
        let p = random_points(40, 2, 3);
        let mut idx: Vec<usize> = (0..p.len()).collect();
        idx.sort_by(|&a, &b| p[a].partial_cmp(&p[b]).unwrap());
        let cross = |o: &[f64], a: &[f64], b: &[f64]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
        let mut hull: Vec<usize> = Vec::new();
        for pass in 0..2 {
            let start = hull.len();
            let seq: Vec<usize> = if pass == 0 { idx.clone() } else { idx.iter().rev().copied().collect() };
            for i in seq {
                while hull.len() >= start + 2
                    && cross(&p[hull[hull.len() - 2]], &p[hull[hull.len() - 1]], &p[i]) <= 0.0
                {
                    hull.pop();
                }
                hull.push(i);
            }
            hull.pop();
        }
        let hull_pts: Vec<Vec<f64>> = hull.iter().map(|&i| p[i].clone()).collect();
        assert_eq!(measure_diameter(&refs(&hull_pts)), measure_diameter(&refs(&p)));
    }

    #[test]
    fn seb_examples() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]];
        assert!((measure_seb_radius(&refs(&tri)).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let two = vec![vec![0.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]];
        assert!((measure_seb_radius(&refs(&two)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(measure_seb_radius(&[]).unwrap(), 0.0);
        let high = vec![vec![0.0; 4]];
        assert!(measure_seb_radius(&refs(&high)).is_err());
        // obtuse triangle: the long side is a diameter
        let obtuse = vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![2.0, 0.5]];
        assert!((measure_seb_radius(&refs(&obtuse)).unwrap() - 2.0).abs() < 1e-12);
        // collinear and duplicate points
        let line = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0], vec![1.0, 1.0]];
        assert!((measure_seb_radius(&refs(&line)).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    /// Every point inside; dropping any point on the boundary shrinks the ball.
    #[test]
    fn seb_is_minimal() {
        for (dim, seed) in [(2, 1), (3, 2), (2, 3), (3, 4), (1, 5)] {
            let p = random_points(20, dim, seed);
            let r = measure_seb_radius(&refs(&p)).unwrap();
            let mut pts = refs(&p);
            let ball = mtf_ball(&mut pts, p.len(), &mut Vec::new(), dim);
            for q in &p {
                assert!(dist2(&ball.centre, q).sqrt() <= r + 1e-9);
            }
            let boundary: Vec<usize> = (0..p.len())
                .filter(|&i| (dist2(&ball.centre, &p[i]).sqrt() - r).abs() <= 1e-9)
                .collect();
            assert!(!boundary.is_empty());
            for &b in &boundary {
                let rest: Vec<Vec<f64>> = p.iter().enumerate().filter(|&(i, _)| i != b).map(|(_, q)| q.clone()).collect();
                assert!(measure_seb_radius(&refs(&rest)).unwrap() < r - 1e-12, "dim {dim}");
            }
        }
    }

    #[test]
    fn bbox_examples() {
        let sq = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        assert_eq!(measure_bbox_volume(&refs(&sq)), 1.0);
        assert_eq!(measure_bbox_volume(&refs(&[vec![0.2, 0.3]])), 0.0);
    }

    #[test]
    fn store_matches_scratch_after_updates() {
        let pts = PointSet::uniform(30, 3, 9).unwrap();
        let mut store = DynamicPointStore::new(&pts);
        let mut rng = rng_for(1, "test/store", 0);
        let mut prev_diam = 0.0;
        let mut prev_box = 0.0;
        let mut grow = true;
        for step in 0..400 {
            let i = rng.gen_range(0..30);
            if store.members().get(i) {
                if !grow {
                    store.remove(i).unwrap();
                }
            } else {
                store.insert(i).unwrap();
                let (d, b) = (store.query(Measure::Diameter).unwrap(), store.query(Measure::BboxVolume).unwrap());
                if grow {
                    assert!(d >= prev_diam && b >= prev_box);
                }
                prev_diam = d;
                prev_box = b;
            }
            if step == 200 {
                grow = false;
            }
            let scratch = store.points();
            assert_eq!(store.query(Measure::BboxVolume).unwrap(), measure_bbox_volume(&scratch));
        }
        assert!(store.remove(31).is_err());
    }

    #[test]
    fn walk_example() {
        let pts = PointSet::new(1, vec![vec![0.0], vec![1.0], vec![3.0], vec![7.0]]).unwrap();
        let s = SetSystem::from_bit_strings(&["1000", "1100", "1111"]).unwrap();
        let t = exact_mst(&s).unwrap();
        let r = traverse_and_measure(&s, &t, &pts, Measure::Diameter, None).unwrap();
        assert_eq!(r.walk_order[0], s.len() - 1);
        assert_eq!(r.total_updates, 4 + 2 * 3);
        assert_eq!(r.brute_force_updates, 2 * (1 + 2 + 4));
        assert_eq!(r.values, brute_force_measure(&s, &pts, Measure::Diameter).unwrap().values);
        let from_small = traverse_and_measure(&s, &t, &pts, Measure::Diameter, Some(0)).unwrap();
        assert_eq!(from_small.total_updates, 1 + 2 * 3);
    }

    #[test]
    fn single_and_empty_systems() {
        let pts = PointSet::uniform(4, 2, 1).unwrap();
        let one = SetSystem::from_bit_strings(&["1101"]).unwrap();
        let t = exact_mst(&one).unwrap();
        let r = traverse_and_measure(&one, &t, &pts, Measure::SebRadius, None).unwrap();
        assert_eq!((r.total_updates, r.values.len()), (3, 1));
        let empty = SetSystem::new(4, vec![]).unwrap();
        let r = brute_force_measure(&empty, &pts, Measure::Diameter).unwrap();
        assert_eq!((r.total_updates, r.values.len()), (0, 0));
        let b = brute_force_measure(&SetSystem::from_bit_strings(&["1100"]).unwrap(), &pts, Measure::Diameter).unwrap();
        assert_eq!(b.total_updates, 4);
        assert!(brute_force_measure(&one, &PointSet::uniform(5, 2, 1).unwrap(), Measure::Diameter).is_err());
    }

    #[test]
    fn walk_matches_brute_force_on_halfplanes() {
        let pts = PointSet::clustered(24, 2, 3, 0.05, 2).unwrap();
        let s = build_halfspaces(&pts).unwrap();
        let t = exact_mst(&s).unwrap();
        for m in [Measure::Diameter, Measure::BboxVolume, Measure::SebRadius] {
            let walk = traverse_and_measure(&s, &t, &pts, m, None).unwrap();
            let brute = brute_force_measure(&s, &pts, m).unwrap();
            let root = default_root(&s).unwrap();
            assert_eq!(walk.total_updates, (s.get(root).len() + 2 * t.total_conflict()) as u64);
            assert!(walk.total_updates < brute.total_updates);
            let mut seen = walk.walk_order.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..s.len()).collect::<Vec<_>>());
            for (a, b) in walk.values.iter().zip(&brute.values) {
                if m == Measure::SebRadius {
                    assert!((a - b).abs() <= 1e-9);
                } else {
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn report_csv() {
        let pts = PointSet::new(1, vec![vec![0.0], vec![2.0]]).unwrap();
        let s = SetSystem::from_bit_strings(&["11"]).unwrap();
        let r = brute_force_measure(&s, &pts, Measure::Diameter).unwrap();
        assert_eq!(
            r.to_csv(),
            "set_index,set_size,measure_value\n0,2,2\n\ntotal_updates,brute_force_updates,ratio\n4,4,1\n"
        );
    }
}
