//! Spanning trees over the vectors of a set system under the
//! symmetric-difference metric, exact and sketch-based.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng as _;
use serde::Serialize;

use crate::bits::IncidenceVector;
use crate::error::{Error, Result};
use crate::par;
use crate::rng::rng_for;
use crate::setsystem::{CsParams, IndexSample, SetSystem};

/// A spanning tree on `m` nodes with integer edge weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanningTree {
    m: usize,
    /// `(u, v, weight)` with `u < v`.
    edges: Vec<(usize, usize, usize)>,
    total_conflict: usize,
}

impl SpanningTree {
    /// Checks that `edges` form a spanning tree on `m` nodes.
    pub fn new(m: usize, edges: Vec<(usize, usize, usize)>) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptySystem);
        }
        if edges.len() != m - 1 {
            return Err(Error::invalid(format!("a tree on {m} nodes has {} edges, got {}", m - 1, edges.len())));
        }
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= m {
                    return Err(Error::IndexOutOfRange { index: x, n: m });
                }
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return Err(Error::invalid(format!("edge ({u}, {v}) closes a cycle")));
            }
            parent[a] = b;
            normalized.push((u.min(v), u.max(v), w));
        }
        let total_conflict = normalized.iter().map(|e| e.2).sum();
        Ok(SpanningTree {
            m,
            edges: normalized,
            total_conflict,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn total_conflict(&self) -> usize {
        self.total_conflict
    }

    /// Every edge weight equals the distance between its endpoint vectors.
    pub fn weights_match(&self, sys: &SetSystem) -> bool {
        self.m == sys.len()
            && self
                .edges
                .iter()
                .all(|&(u, v, w)| sys.get(u).distance_unchecked(sys.get(v)) == w)
    }

    /// Neighbour lists sorted by node index.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.m];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// `m=<int> total_conflict=<int>`, a `u,v,weight` header, one edge per line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("m={} total_conflict={}\nu,v,weight\n", self.m, self.total_conflict);
        for (u, v, w) in &self.edges {
            let _ = writeln!(out, "{u},{v},{w}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let mut m = None;
        let mut total = None;
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::parse(hl, format!("bad header field `{field}`")))?;
            let value: usize = value.parse().map_err(|e| Error::parse(hl, format!("`{key}`: {e}")))?;
            match key {
                "m" => m = Some(value),
                "total_conflict" => total = Some(value),
                _ => return Err(Error::parse(hl, format!("unknown header field `{key}`"))),
            }
        }
        let (m, total) = m
            .zip(total)
            .ok_or_else(|| Error::parse(hl, "header must be `m=<int> total_conflict=<int>`"))?;
        let mut edges = Vec::new();
        for (ln, line) in lines {
            if line == "u,v,weight" {
                continue;
            }
            let f: Vec<usize> = line
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse(ln, e.to_string()))?;
            if f.len() != 3 {
                return Err(Error::parse(ln, "expected `u,v,weight`"));
            }
            edges.push((f[0], f[1], f[2]));
        }
        let tree = SpanningTree::new(m, edges).map_err(|e| Error::parse(hl, e.to_string()))?;
        if tree.total_conflict != total {
            return Err(Error::parse(hl, "total_conflict does not match the edge weights"));
        }
        Ok(tree)
    }
}

/// Sum of edge weights.
pub fn total_conflict(tree: &SpanningTree) -> usize {
    tree.total_conflict
}

/// Dense Prim over `m` nodes with weights from `weight`, minimising
/// `(weight, min endpoint, max endpoint)` at every step.
fn prim<W: PartialOrd + Copy>(m: usize, weight: impl Fn(usize, usize) -> W) -> Vec<(usize, usize)> {
    let mut in_tree = vec![false; m];
    let mut best: Vec<Option<(W, usize)>> = vec![None; m];
    let mut edges = Vec::with_capacity(m.saturating_sub(1));
    let key = |w: W, p: usize, v: usize| (w, p.min(v), p.max(v));
    let better = |a: (W, usize, usize), b: (W, usize, usize)| {
        a.0 < b.0 || (a.0 == b.0 && (a.1, a.2) < (b.1, b.2))
    };
    let mut current = 0;
    for _ in 1..m {
        in_tree[current] = true;
        for v in 0..m {
            if in_tree[v] {
                continue;
            }
            let w = weight(current, v);
            let replace = match best[v] {
                None => true,
                Some((bw, bp)) => better(key(w, current, v), key(bw, bp, v)),
            };
            if replace {
                best[v] = Some((w, current));
            }
        }
        let mut pick: Option<(usize, (W, usize, usize))> = None;
        for v in 0..m {
            if in_tree[v] {
                continue;
            }
            let (w, p) = best[v].expect("every outside node has a candidate");
            let k = key(w, p, v);
            if pick.is_none_or(|(_, pk)| better(k, pk)) {
                pick = Some((v, k));
            }
        }
        let (v, _) = pick.expect("an outside node remains");
        edges.push((best[v].unwrap().1, v));
        current = v;
    }
    edges
}

fn with_exact_weights(sys: &SetSystem, edges: Vec<(usize, usize)>) -> Result<SpanningTree> {
    let edges = edges
        .into_iter()
        .map(|(u, v)| (u, v, sys.get(u).distance_unchecked(sys.get(v))))
        .collect();
    SpanningTree::new(sys.len(), edges)
}

/// Minimum spanning tree of the complete graph on the vectors of `sys`
/// weighted by symmetric-difference distance.
pub fn exact_mst(sys: &SetSystem) -> Result<SpanningTree> {
    if sys.is_empty() {
        return Err(Error::EmptySystem);
    }
    let edges = prim(sys.len(), |u, v| sys.get(u).distance_unchecked(sys.get(v)));
    with_exact_weights(sys, edges)
}

/// `n^(d1/d) k^(1 - d1/d) m^(1 - 1/d)`.
pub fn bound_tree_conflict(n: usize, k: usize, m: usize, params: &CsParams) -> Result<f64> {
    if m == 0 || k > n {
        return Err(Error::invalid(format!("need m >= 1 and k <= n, got m = {m}, k = {k}, n = {n}")));
    }
    let r = params.d1 / params.d;
    Ok((n as f64).powf(r) * (k as f64).powf(1.0 - r) * (m as f64).powf(1.0 - 1.0 / params.d))
}

/// Sizes of the random index subsets behind the sketch coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SizeSchedule {
    /// 1, 2, 4, ... capped at `n`, then starting again from 1.
    Geometric,
    Fixed(usize),
}

impl SizeSchedule {
    fn size(self, coordinate: usize, n: usize) -> usize {
        match self {
            SizeSchedule::Fixed(s) => s.min(n),
            SizeSchedule::Geometric => {
                if n == 0 {
                    return 0;
                }
                let levels = (usize::BITS - n.leading_zeros()) as usize; // 1, 2, .., 2^(levels-1) <= n
                (1usize << (coordinate % levels)).min(n)
            }
        }
    }
}

/// `geometric`, or a fixed subset size.
impl std::str::FromStr for SizeSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(SizeSchedule::Geometric),
            other => other
                .parse()
                .map(SizeSchedule::Fixed)
                .map_err(|_| Error::invalid(format!("unknown size schedule `{other}`"))),
        }
    }
}

/// Each vector mapped to `mu` integer IDs, one per random index subset: the
/// rank of the vector's projection among the distinct projections.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HammingSketch {
    pub mu: usize,
    pub subsets: Vec<IndexSample>,
    /// `ids[set][coordinate]`
    pub ids: Vec<Vec<u32>>,
    seed: u64,
}

impl HammingSketch {
    /// Number of coordinates where the two sets' IDs differ.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.ids[a].iter().zip(&self.ids[b]).filter(|(x, y)| x != y).count()
    }
}

pub fn build_sketch(sys: &SetSystem, mu: usize, schedule: SizeSchedule, seed: u64) -> Result<HammingSketch> {
    if mu == 0 {
        return Err(Error::invalid("sketch width mu must be >= 1"));
    }
    let n = sys.n();
    let columns = par::map_indexed(mu, |c| {
        let size = schedule.size(c, n);
        let subset = IndexSample::random(n, size, &mut rng_for(seed, "sketch/subset", c as u64))
            .expect("size <= n");
        let projected: Vec<IncidenceVector> =
            sys.vectors().iter().map(|v| v.restrict(subset.indices())).collect();
        let mut dict: BTreeMap<&IncidenceVector, u32> = projected.iter().map(|p| (p, 0)).collect();
        for (rank, id) in dict.values_mut().enumerate() {
            *id = rank as u32;
        }
        let ids: Vec<u32> = projected.iter().map(|p| dict[p]).collect();
        (subset, ids)
    });
    let mut ids = vec![Vec::with_capacity(mu); sys.len()];
    let mut subsets = Vec::with_capacity(mu);
    for (subset, column) in columns {
        subsets.push(subset);
        for (row, id) in ids.iter_mut().zip(column) {
            row.push(id);
        }
    }
    Ok(HammingSketch { mu, subsets, ids, seed })
}

/// Per size class, the fraction of coordinates on which two sets differ.
fn class_features(sketch: &HammingSketch, classes: &[usize], class_count: usize, a: usize, b: usize) -> Vec<f64> {
    let mut diff = vec![0usize; class_count];
    let mut total = vec![0usize; class_count];
    for (c, &cls) in classes.iter().enumerate() {
        total[cls] += 1;
        if sketch.ids[a][c] != sketch.ids[b][c] {
            diff[cls] += 1;
        }
    }
    diff.iter().zip(&total).map(|(&d, &t)| d as f64 / t as f64).collect()
}

/// Non-negative least squares by cyclic coordinate descent.
fn nnls(rows: &[Vec<f64>], targets: &[f64]) -> Vec<f64> {
    let p = rows.first().map_or(0, Vec::len);
    let mut w = vec![0.0; p];
    let norms: Vec<f64> = (0..p).map(|j| rows.iter().map(|r| r[j] * r[j]).sum()).collect();
    let mut residual: Vec<f64> = targets.to_vec();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for j in 0..p {
            if norms[j] == 0.0 {
                continue;
            }
            let g: f64 = rows.iter().zip(&residual).map(|(r, e)| r[j] * e).sum();
            let new = (w[j] + g / norms[j]).max(0.0);
            let step = new - w[j];
            if step != 0.0 {
                for (r, e) in rows.iter().zip(residual.iter_mut()) {
                    *e -= step * r[j];
                }
                w[j] = new;
                moved = moved.max(step.abs());
            }
        }
        if moved < 1e-12 {
            break;
        }
    }
    w
}

/// Spanning tree computed on calibrated sketch distances.
///
/// Coordinates are grouped by subset size; the estimated distance of a
/// pair is a non-negative combination of the per-group disagreement
/// fractions, fitted by least squares against exact distances on
/// `ceil(16 / eta^2)` random pairs. The returned tree carries exact edge
/// weights. Falls back to [`exact_mst`] when the fit carries no signal.
pub fn approx_mst(sys: &SetSystem, sketch: &HammingSketch, eta: f64) -> Result<SpanningTree> {
    if sys.is_empty() {
        return Err(Error::EmptySystem);
    }
    if sketch.ids.len() != sys.len() || sketch.subsets.iter().any(|s| s.n() != sys.n()) {
        return Err(Error::invalid("sketch was not built over this system"));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::invalid("eta must lie in (0, 1)"));
    }
    let m = sys.len();
    if m <= 2 {
        return exact_mst(sys);
    }
    let mut sizes: Vec<usize> = sketch.subsets.iter().map(IndexSample::len).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let classes: Vec<usize> = sketch
        .subsets
        .iter()
        .map(|s| sizes.binary_search(&s.len()).unwrap())
        .collect();

    let pairs = ((16.0 / (eta * eta)).ceil() as usize).min(m * (m - 1) / 2);
    let mut rng = rng_for(sketch.seed, "sketch/calibration", 0);
    let mut rows = Vec::with_capacity(pairs);
    let mut targets = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let a = rng.gen_range(0..m);
        let mut b = rng.gen_range(0..m - 1);
        if b >= a {
            b += 1;
        }
        rows.push(class_features(sketch, &classes, sizes.len(), a, b));
        targets.push(sys.get(a).distance_unchecked(sys.get(b)) as f64);
    }
    let weights = nnls(&rows, &targets);
    if weights.iter().all(|&w| w == 0.0) {
        return exact_mst(sys);
    }
    let estimate = |a: usize, b: usize| -> f64 {
        class_features(sketch, &classes, sizes.len(), a, b)
            .iter()
            .zip(&weights)
            .map(|(f, w)| f * w)
            .sum()
    };
    let edges = prim(m, estimate);
    with_exact_weights(sys, edges)
}
