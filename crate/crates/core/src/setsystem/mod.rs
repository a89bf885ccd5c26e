//! Set systems over a finite ground set, represented as sorted, deduplicated
//! collections of indicator vectors.

mod generator;
mod geometry;
mod grid;
mod io;

use std::collections::{BTreeMap, HashSet};

use num_rational::Ratio;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::bits::IncidenceVector;
use crate::error::{Error, Result};
use crate::rng::{rng_for, Rng};

pub use generator::{Family, Generator};
pub use geometry::{build_balls, build_halfspaces, build_slabs};
pub use grid::build_rectangle_grid_dual;

/// Enumeration budget shared by the brute-force oracles.
pub const ENUMERATION_BUDGET: u128 = 1 << 22;

/// A finite sequence of points in `R^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("point dimension must be at least 1"));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::invalid(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::invalid(format!("point {i} has a non-finite coordinate")));
            }
            coords.extend(p);
        }
        Ok(Self { dim, coords })
    }

    /// `n` points drawn uniformly from the unit cube `[0,1)^dim`.
    pub fn uniform(n: usize, dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("point dimension must be at least 1"));
        }
        let mut rng = rng_for(seed, "points/uniform", 0);
        let coords = (0..n * dim).map(|_| rng.gen::<f64>()).collect();
        Ok(Self { dim, coords })
    }

    /// `n` points spread over `clusters` Gaussian-ish blobs of radius
    /// `spread` whose centres are uniform in the unit cube.
    pub fn clustered(n: usize, dim: usize, clusters: usize, spread: f64, seed: u64) -> Result<Self> {
        if dim == 0 || clusters == 0 {
            return Err(Error::invalid("need dim >= 1 and clusters >= 1"));
        }
        let mut rng = rng_for(seed, "points/clustered", 0);
        let centres: Vec<f64> = (0..clusters * dim).map(|_| rng.gen::<f64>()).collect();
        let mut coords = Vec::with_capacity(n * dim);
        for i in 0..n {
            let c = i % clusters;
            for j in 0..dim {
                // sum of uniforms is close enough to a bell for layout purposes
                let noise: f64 = (0..4).map(|_| rng.gen::<f64>() - 0.5).sum::<f64>() * 0.5;
                coords.push(centres[c * dim + j] + spread * noise);
            }
        }
        Ok(Self { dim, coords })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// True when two points share identical coordinates. Generators accept
    /// such inputs; coincident points always receive the same membership.
    pub fn has_duplicates(&self) -> bool {
        let mut seen = HashSet::new();
        self.iter()
            .any(|p| !seen.insert(p.iter().map(|c| c.to_bits()).collect::<Vec<_>>()))
    }
}

/// How a pair of vectors must relate to count as separated at scale `delta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Separation {
    /// distance > delta
    Strict,
    /// distance >= delta
    NonStrict,
}

impl Separation {
    #[inline]
    pub fn holds(self, distance: usize, delta: usize) -> bool {
        match self {
            Separation::Strict => distance > delta,
            Separation::NonStrict => distance >= delta,
        }
    }

    /// Largest distance that still counts as a conflict.
    #[inline]
    pub(crate) fn conflict_bound(self, delta: usize) -> Option<usize> {
        match self {
            Separation::Strict => Some(delta),
            Separation::NonStrict => delta.checked_sub(1),
        }
    }
}

impl std::str::FromStr for Separation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Separation::Strict),
            "non-strict" => Ok(Separation::NonStrict),
            other => Err(Error::invalid(format!("unknown separation `{other}` (strict or non-strict)"))),
        }
    }
}

/// A deduplicated set system over the ground set `[0, n)`, vectors kept in
/// lexicographic order of their bit strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetSystem {
    n: usize,
    vectors: Vec<IncidenceVector>,
}

impl SetSystem {
    pub fn new(n: usize, vectors: impl IntoIterator<Item = IncidenceVector>) -> Result<Self> {
        let mut vectors: Vec<_> = vectors.into_iter().collect();
        if let Some(bad) = vectors.iter().find(|v| v.width() != n) {
            return Err(Error::WidthMismatch {
                expected: n,
                found: bad.width(),
            });
        }
        vectors.sort_unstable();
        vectors.dedup();
        Ok(Self { n, vectors })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, vectors: Vec<IncidenceVector>) -> Self {
        debug_assert!(vectors.windows(2).all(|w| w[0] < w[1]));
        Self { n, vectors }
    }

    /// Parses `0`/`1` strings; convenient in tests and examples.
    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let vectors = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                IncidenceVector::parse_bits(r.as_ref())
                    .ok_or_else(|| Error::parse(i + 1, "expected a 0/1 string"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, vectors)
    }

    /// All `2^n` vectors over `[0, n)`.
    pub fn full_cube(n: usize) -> Result<Self> {
        if n > 20 {
            return Err(Error::BudgetExceeded {
                what: "cube size 2^n",
                value: 1u128 << n,
                limit: 1 << 20,
            });
        }
        let vectors = (0u64..1 << n).map(|mask| {
            IncidenceVector::from_bools(&(0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        });
        Self::new(n, vectors)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    #[inline]
    pub fn vectors(&self) -> &[IncidenceVector] {
        &self.vectors
    }

    #[inline]
    pub fn get(&self, i: usize) -> &IncidenceVector {
        &self.vectors[i]
    }

    pub fn contains(&self, v: &IncidenceVector) -> bool {
        self.vectors.binary_search(v).is_ok()
    }

    pub fn max_length(&self) -> usize {
        self.vectors.iter().map(IncidenceVector::len).max().unwrap_or(0)
    }

    /// Subsystem made of the vectors at the given positions.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut out = Vec::with_capacity(indices.len());
        for &i in indices {
            let v = self
                .vectors
                .get(i)
                .ok_or(Error::IndexOutOfRange { index: i, n: self.len() })?;
            out.push(v.clone());
        }
        Self::new(self.n, out)
    }

    /// Checks pairwise separation exhaustively; returns the first offending
    /// pair as an error.
    pub fn check_separated(&self, delta: usize, mode: Separation) -> Result<()> {
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                let d = self.vectors[a].distance_unchecked(&self.vectors[b]);
                if !mode.holds(d, delta) {
                    return Err(Error::NotSeparated {
                        delta,
                        a,
                        b,
                        distance: d,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn min_pairwise_distance(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                let d = self.vectors[a].distance_unchecked(&self.vectors[b]);
                best = Some(best.map_or(d, |x| x.min(d)));
            }
        }
        best
    }
}

/// A strictly increasing list of ground-set indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSample {
    n: usize,
    indices: Vec<usize>,
}

impl IndexSample {
    pub fn new(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("sample indices must be distinct"));
        }
        if let Some(&i) = indices.last() {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
        }
        Ok(Self { n, indices })
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            indices: (0..n).collect(),
        }
    }

    /// Uniform `size`-subset of `[0, n)` by a partial Fisher–Yates shuffle.
    pub fn random(n: usize, size: usize, rng: &mut Rng) -> Result<Self> {
        let mut perm = partial_shuffle(n, size, rng)?;
        perm.sort_unstable();
        Ok(Self { n, indices: perm })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    #[inline]
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn is_full(&self) -> bool {
        self.indices.len() == self.n
    }
}

/// First `size` entries of a uniformly random permutation of `[0, n)`.
pub(crate) fn partial_shuffle(n: usize, size: usize, rng: &mut Rng) -> Result<Vec<usize>> {
    if size > n {
        return Err(Error::invalid(format!("sample size {size} exceeds ground set size {n}")));
    }
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool.truncate(size);
    Ok(pool)
}

/// Parameters of the `(d, d1)` Clarkson–Shor property plus the VC-dimension
/// `d0` used in sample-size formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsParams {
    pub d: f64,
    pub d1: f64,
    pub d0: u32,
}

impl CsParams {
    pub fn new(d: f64, d1: f64, d0: u32) -> Result<Self> {
        if !(d.is_finite() && d1.is_finite() && d > 0.0 && 1.0 <= d1 && d1 <= d) {
            return Err(Error::invalid(format!("need 1 <= d1 <= d, got d={d}, d1={d1}")));
        }
        if d0 == 0 {
            return Err(Error::invalid("VC-dimension d0 must be at least 1"));
        }
        Ok(Self { d, d1, d0 })
    }

    /// Halfspaces in `R^dim`: `(dim, floor(dim/2))`, VC-dimension `dim + 1`.
    /// The lower end is clamped to 1 so that `dim = 1` stays valid.
    pub fn halfspaces(dim: usize) -> Self {
        Self {
            d: dim as f64,
            d1: ((dim / 2) as f64).max(1.0),
            d0: dim as u32 + 1,
        }
    }

    /// Balls in `R^dim`: `(dim + 1, floor((dim + 1)/2))`, VC-dimension `dim + 1`.
    pub fn balls(dim: usize) -> Self {
        Self {
            d: (dim + 1) as f64,
            d1: dim.div_ceil(2) as f64,
            d0: dim as u32 + 1,
        }
    }

    /// Parallel slabs in `R^dim`: `O(n^dim k)` shallow sets, i.e. `(dim + 1, dim)`.
    pub fn slabs(dim: usize) -> Self {
        Self {
            d: (dim + 1) as f64,
            d1: dim as f64,
            d0: 2 * dim as u32 + 1,
        }
    }
}

/// Sampled `(m, k)` profile of the primal shatter function restricted to
/// short vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShatterProfile {
    pub entries: BTreeMap<(usize, usize), usize>,
    pub trials: usize,
}

impl ShatterProfile {
    pub fn get(&self, m: usize, k: usize) -> Option<usize> {
        self.entries.get(&(m, k)).copied()
    }
}

/// Restriction of `sys` to the coordinates of `sample`, deduplicated.
pub fn project(sys: &SetSystem, sample: &IndexSample) -> Result<SetSystem> {
    if sample.n() != sys.n() {
        return Err(Error::WidthMismatch {
            expected: sys.n(),
            found: sample.n(),
        });
    }
    let idx = sample.indices();
    let mut out: Vec<IncidenceVector> = sys.vectors().iter().map(|v| v.restrict(idx)).collect();
    out.sort_unstable();
    out.dedup();
    Ok(SetSystem::from_sorted_unchecked(idx.len(), out))
}

/// Number of distinct projected vectors; packs into `u64` keys when the
/// sample fits in one word.
pub(crate) fn projection_size(sys: &SetSystem, indices: &[usize]) -> usize {
    if indices.len() <= 64 {
        let mut keys: Vec<u64> = sys
            .vectors()
            .iter()
            .map(|v| {
                indices
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &i)| acc | (v.get(i) as u64) << j)
            })
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.len()
    } else {
        let set: HashSet<IncidenceVector> =
            sys.vectors().iter().map(|v| v.restrict(indices)).collect();
        set.len()
    }
}

/// Symmetric-difference distance between two vectors of equal width.
pub fn distance(u: &IncidenceVector, v: &IncidenceVector) -> Result<usize> {
    u.distance(v)
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

/// Calls `f` on every increasing `k`-combination of `[0, n)`; stops early
/// when `f` returns `false`.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    'outer: loop {
        if !f(&c) {
            return;
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                continue 'outer;
            }
        }
        return;
    }
}

/// Exact primal shatter function `max_{|I| = m} |sys|_I|`.
pub fn shatter_function_exact(sys: &SetSystem, m: usize) -> Result<usize> {
    let n = sys.n();
    if m > n {
        return Err(Error::invalid(format!("m = {m} exceeds n = {n}")));
    }
    let count = binomial(n, m);
    if count > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "C(n, m) index subsets",
            value: count,
            limit: ENUMERATION_BUDGET,
        });
    }
    let ceiling = sys.len().min(if m >= 64 { usize::MAX } else { 1usize << m });
    let mut best = 0;
    for_each_combination(n, m, |idx| {
        best = best.max(projection_size(sys, idx));
        best < ceiling
    });
    Ok(best)
}

/// Exact VC-dimension: the size of the largest shattered index set.
pub fn vc_dimension_exact(sys: &SetSystem) -> Result<usize> {
    let n = sys.n();
    if sys.len() <= 1 {
        return Ok(0);
    }
    // A shattered k-set needs 2^k distinct vectors.
    let k_max = (usize::BITS - 1 - sys.len().leading_zeros()) as usize;
    let k_max = k_max.min(n);
    let work: u128 = (1..=k_max).map(|k| binomial(n, k)).fold(0u128, u128::saturating_add);
    if work > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "index subsets for VC-dimension",
            value: work,
            limit: ENUMERATION_BUDGET,
        });
    }
    let mut dim = 0;
    for k in 1..=k_max {
        let mut found = false;
        for_each_combination(n, k, |idx| {
            found = projection_size(sys, idx) == 1 << k;
            !found
        });
        if !found {
            break;
        }
        dim = k;
    }
    Ok(dim)
}

/// Sampled Clarkson–Shor profile. For each trial a random permutation of
/// `[0, n)` is drawn and the sample of size `m` is its first `m` entries, so
/// samples of different sizes within one trial are nested.
pub fn cs_profile(
    sys: &SetSystem,
    sample_sizes: &[usize],
    length_caps: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ShatterProfile> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let n = sys.n();
    if let Some(&m) = sample_sizes.iter().find(|&&m| m > n) {
        return Err(Error::invalid(format!("sample size {m} exceeds n = {n}")));
    }
    let per_trial = crate::par::map_indexed(trials, |t| {
        let mut rng = rng_for(seed, "cs_profile", t as u64);
        let perm = partial_shuffle(n, n, &mut rng).expect("n <= n");
        let mut local = BTreeMap::new();
        for &m in sample_sizes {
            let mut idx = perm[..m].to_vec();
            idx.sort_unstable();
            let mut projected: Vec<IncidenceVector> =
                sys.vectors().iter().map(|v| v.restrict(&idx)).collect();
            projected.sort_unstable();
            projected.dedup();
            let mut lengths: Vec<usize> = projected.iter().map(IncidenceVector::len).collect();
            lengths.sort_unstable();
            for &k in length_caps {
                let count = lengths.partition_point(|&l| l <= k);
                local.insert((m, k), count);
            }
        }
        local
    });
    let mut entries = BTreeMap::new();
    for local in per_trial {
        for (key, count) in local {
            let e = entries.entry(key).or_insert(0);
            *e = count.max(*e);
        }
    }
    Ok(ShatterProfile { entries, trials })
}

/// `|E| / |V|` for the unit-distance graph on the system's vectors.
pub fn unit_distance_density(sys: &SetSystem) -> Result<Ratio<u64>> {
    if sys.is_empty() {
        return Err(Error::EmptySystem);
    }
    Ok(Ratio::new(unit_distance_edges(sys) as u64, sys.len() as u64))
}

pub(crate) fn unit_distance_edges(sys: &SetSystem) -> usize {
    let mut edges = 0;
    for v in sys.vectors() {
        let mut w = v.clone();
        for i in 0..sys.n() {
            // count each edge once, from its endpoint with bit i clear
            if !v.get(i) {
                w.set(i, true);
                if sys.contains(&w) {
                    edges += 1;
                }
                w.set(i, false);
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sys(rows: &[&str]) -> SetSystem {
        SetSystem::from_bit_strings(rows).unwrap()
    }

    #[test]
    fn project_examples() {
        let s = sys(&["110", "101", "011"]);
        let p = project(&s, &IndexSample::new(3, vec![0]).unwrap()).unwrap();
        assert_eq!(p, sys(&["0", "1"]));

        let full = project(&s, &IndexSample::full(3)).unwrap();
        assert_eq!(full, s);

        let s = sys(&["1100", "1010"]);
        let p = project(&s, &IndexSample::new(4, vec![2, 3]).unwrap()).unwrap();
        assert_eq!(p, sys(&["00", "10"]));
    }

    #[test]
    fn project_rejects_mismatched_sample() {
        let s = sys(&["110"]);
        assert!(matches!(
            project(&s, &IndexSample::full(4)),
            Err(Error::WidthMismatch { .. })
        ));
    }

    #[test]
    fn shatter_function_examples() {
        assert_eq!(shatter_function_exact(&SetSystem::full_cube(3).unwrap(), 2).unwrap(), 4);
        let zero = sys(&["000"]);
        for m in 0..=3 {
            assert_eq!(shatter_function_exact(&zero, m).unwrap(), 1);
        }
        assert_eq!(shatter_function_exact(&sys(&["110", "101", "011"]), 2).unwrap(), 3);
    }

    #[test]
    fn shatter_function_budget() {
        let s = SetSystem::new(40, [IncidenceVector::zeros(40)]).unwrap();
        assert!(matches!(
            shatter_function_exact(&s, 20),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn vc_dimension_examples() {
        assert_eq!(vc_dimension_exact(&SetSystem::full_cube(3).unwrap()).unwrap(), 3);
        assert_eq!(vc_dimension_exact(&sys(&["000"])).unwrap(), 0);
        // {110,101,011}: every single coordinate takes both values, no pair
        // realises 00.
        assert_eq!(vc_dimension_exact(&sys(&["110", "101", "011"])).unwrap(), 1);
    }

    #[test]
    fn density_examples() {
        assert_eq!(
            unit_distance_density(&sys(&["000", "100", "110"])).unwrap(),
            Ratio::new(2, 3)
        );
        assert_eq!(unit_distance_density(&sys(&["0101"])).unwrap(), Ratio::from_integer(0));
        assert_eq!(
            unit_distance_density(&SetSystem::full_cube(2).unwrap()).unwrap(),
            Ratio::from_integer(1)
        );
    }

    #[test]
    fn cs_profile_identity_and_zero_cap() {
        let s = sys(&["1100", "0110", "0011", "1111", "1000"]);
        let p = cs_profile(&s, &[4], &[0, 4], 3, 1).unwrap();
        assert_eq!(p.get(4, 4), Some(s.len()));
        assert_eq!(p.get(4, 0), Some(0));
        let with_zero = sys(&["0000", "1100"]);
        let p = cs_profile(&with_zero, &[2, 4], &[0], 5, 9).unwrap();
        assert_eq!(p.get(4, 0), Some(1));
        assert_eq!(p.get(2, 0), Some(1));
    }

    #[test]
    fn cs_profile_is_seed_deterministic() {
        let pts = PointSet::uniform(24, 2, 5).unwrap();
        let s = build_halfspaces(&pts).unwrap();
        let a = cs_profile(&s, &[8, 16], &[2, 4, 8], 4, 11).unwrap();
        let b = cs_profile(&s, &[8, 16], &[2, 4, 8], 4, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cs_profile_monotone_on_halfplanes() {
        let pts = PointSet::uniform(64, 2, 3).unwrap();
        let s = build_halfspaces(&pts).unwrap();
        let caps = [0, 2, 4, 8, 16, 32];
        let p = cs_profile(&s, &[8, 16, 32], &caps, 6, 2).unwrap();
        for &m in &[8, 16, 32] {
            for w in caps.windows(2) {
                assert!(p.get(m, w[0]) <= p.get(m, w[1]));
            }
        }
        assert!(p.get(32, 4) <= p.get(32, 32));
        // direct evaluation of one (m, k) entry on a single trial
        let one = cs_profile(&s, &[32], &[4], 1, 77).unwrap();
        let mut rng = rng_for(77, "cs_profile", 0);
        let perm = partial_shuffle(64, 64, &mut rng).unwrap();
        let sample = IndexSample::new(64, perm[..32].to_vec()).unwrap();
        let direct = project(&s, &sample)
            .unwrap()
            .vectors()
            .iter()
            .filter(|v| v.len() <= 4)
            .count();
        assert_eq!(one.get(32, 4), Some(direct));
    }

    #[test]
    fn point_set_validation() {
        assert!(PointSet::new(2, vec![vec![0.0, f64::NAN]]).is_err());
        assert!(PointSet::new(0, vec![]).is_err());
        assert!(PointSet::new(2, vec![vec![1.0]]).is_err());
        let p = PointSet::new(2, vec![vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(p.has_duplicates());
        assert!(PointSet::new(2, vec![]).unwrap().is_empty());
    }

    #[test]
    fn combinations_count() {
        let mut c = 0;
        for_each_combination(6, 3, |_| {
            c += 1;
            true
        });
        assert_eq!(c, 20);
        let mut c = 0;
        for_each_combination(4, 0, |x| {
            assert!(x.is_empty());
            c += 1;
            true
        });
        assert_eq!(c, 1);
    }

    fn arb_system(max_n: usize, max_m: usize) -> impl Strategy<Value = SetSystem> {
        (1..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), 1..=max_m).prop_map(
                move |rows| SetSystem::new(n, rows.iter().map(|r| IncidenceVector::from_bools(r))).unwrap(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn projection_size_bounds(s in arb_system(10, 40), picks in proptest::collection::vec(any::<bool>(), 10)) {
            let idx: Vec<usize> = (0..s.n()).filter(|&i| picks[i]).collect();
            let sample = IndexSample::new(s.n(), idx.clone()).unwrap();
            let p = project(&s, &sample).unwrap();
            prop_assert!(p.len() <= s.len());
            prop_assert!(p.len() <= 1usize << idx.len());
            prop_assert_eq!(p.len(), projection_size(&s, &idx));
        }

        #[test]
        fn density_bounded_by_vc_dimension(s in arb_system(12, 60)) {
            let density = unit_distance_density(&s).unwrap();
            let vc = vc_dimension_exact(&s).unwrap();
            prop_assert!(density <= Ratio::from_integer(vc as u64));
        }

        #[test]
        fn shatter_function_monotone(s in arb_system(8, 30)) {
            let values: Vec<usize> = (0..=s.n()).map(|m| shatter_function_exact(&s, m).unwrap()).collect();
            prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(values[s.n()], s.len());
        }
    }
}
