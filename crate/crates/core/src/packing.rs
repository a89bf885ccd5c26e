//! Separated subsets of set systems: greedy maximal packings, exact maximum
//! packings on small systems, closed-form size predictors and scaling sweeps.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::fit_loglog;
use crate::par;
use crate::rng::{derive_seed, rng_for};
use crate::setsystem::{CsParams, Family, Generator, Separation, SetSystem};

/// Largest system handled by [`max_packing_bruteforce`].
pub const MAX_EXACT_PACKING: usize = 64;
const SEARCH_NODE_BUDGET: u128 = 1 << 28;

/// A separated subfamily, stored as indices into its system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Packing {
    pub delta: usize,
    pub separation: Separation,
    /// Sorted indices into the system's canonical vector order.
    pub members: Vec<usize>,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The packed vectors as a system of their own.
    pub fn system(&self, sys: &SetSystem) -> Result<SetSystem> {
        sys.select(&self.members)
    }
}

/// Greedy maximal separated subset. Vectors are scanned in canonical order
/// (`seed == 0`) or in a permutation derived from `seed`; each is kept when
/// it is separated from everything kept so far.
pub fn greedy_packing(sys: &SetSystem, delta: usize, separation: Separation, seed: u64) -> Packing {
    let mut order: Vec<usize> = (0..sys.len()).collect();
    if seed != 0 {
        order.shuffle(&mut rng_for(seed, "packing/order", 0));
    }
    let Some(bound) = separation.conflict_bound(delta) else {
        return Packing {
            delta,
            separation,
            members: (0..sys.len()).collect(),
        };
    };

    // Kept vectors bucketed by length: a pair whose lengths differ by more
    // than `bound` cannot conflict.
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); sys.n() + 1];
    let mut members = Vec::new();
    for i in order {
        let v = sys.get(i);
        let len = v.len();
        let lo = len.saturating_sub(bound);
        let hi = (len + bound).min(sys.n());
        let conflict = buckets[lo..=hi]
            .iter()
            .flatten()
            .any(|&j| !v.distance_exceeds(sys.get(j), bound));
        if !conflict {
            buckets[len].push(i);
            members.push(i);
        }
    }
    members.sort_unstable();
    Packing {
        delta,
        separation,
        members,
    }
}

/// Exact maximum separated subset by branch and bound over the conflict
/// graph. Ties resolve to the lexicographically smallest member list found
/// first in the search order.
pub fn max_packing_bruteforce(sys: &SetSystem, delta: usize, separation: Separation) -> Result<Packing> {
    let m = sys.len();
    if m > MAX_EXACT_PACKING {
        return Err(Error::BudgetExceeded {
            what: "exact packing system size",
            value: m as u128,
            limit: MAX_EXACT_PACKING as u128,
        });
    }
    let mut adj = vec![0u64; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = sys.get(i).distance_unchecked(sys.get(j));
            if !separation.holds(d, delta) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut search = Search {
        adj: &adj,
        best: 0,
        best_size: 0,
        nodes: 0,
    };
    search.expand(all, 0)?;
    let best = search.best;
    let members = (0..m).filter(|&i| best >> i & 1 == 1).collect();
    Ok(Packing {
        delta,
        separation,
        members,
    })
}

struct Search<'a> {
    adj: &'a [u64],
    best: u64,
    best_size: u32,
    nodes: u128,
}

impl Search<'_> {
    /// Upper bound on an independent set inside `cand`: the number of
    /// cliques in a greedy clique cover.
    fn cover_bound(&self, mut cand: u64) -> u32 {
        let mut cliques = 0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique_cand = cand & self.adj[v];
            cand &= !(1 << v);
            while clique_cand != 0 {
                let u = clique_cand.trailing_zeros() as usize;
                cand &= !(1 << u);
                clique_cand &= self.adj[u];
            }
            cliques += 1;
        }
        cliques
    }

    fn expand(&mut self, cand: u64, chosen: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > SEARCH_NODE_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "exact packing search nodes",
                value: self.nodes,
                limit: SEARCH_NODE_BUDGET,
            });
        }
        let size = chosen.count_ones();
        if cand == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = chosen;
            }
            return Ok(());
        }
        if size + self.cover_bound(cand) <= self.best_size {
            return Ok(());
        }
        let v = cand.trailing_zeros() as usize;
        let bit = 1u64 << v;
        self.expand(cand & !bit & !self.adj[v], chosen | bit)?;
        // excluding v only helps when some neighbour of v can be taken
        if cand & self.adj[v] != 0 {
            self.expand(cand & !bit, chosen)?;
        }
        Ok(())
    }
}

/// The subsystem of vectors of length at most `k`.
pub fn shallow_filter(sys: &SetSystem, k: usize) -> SetSystem {
    SetSystem::from_sorted_unchecked(
        sys.n(),
        sys.vectors().iter().filter(|v| v.len() <= k).cloned().collect(),
    )
}

fn check_delta(n: usize, delta: usize) -> Result<()> {
    if delta < 1 || delta > n {
        return Err(Error::invalid(format!("need 1 <= delta <= n, got delta = {delta}, n = {n}")));
    }
    Ok(())
}

/// `(n / delta)^d`.
pub fn bound_packing(n: usize, delta: usize, params: &CsParams) -> Result<f64> {
    check_delta(n, delta)?;
    Ok((n as f64 / delta as f64).powf(params.d))
}

/// `n^d1 * k^(d - d1) / delta^d`; defined for `k >= delta / 2`.
pub fn bound_shallow_packing(n: usize, k: usize, delta: usize, params: &CsParams) -> Result<f64> {
    check_delta(n, delta)?;
    if 2 * k < delta {
        return Err(Error::invalid(format!(
            "shallow packing needs k >= delta/2, got k = {k}, delta = {delta}"
        )));
    }
    let (n, k, delta) = (n as f64, k as f64, delta as f64);
    Ok(n.powf(params.d1) * k.powf(params.d - params.d1) / delta.powf(params.d))
}

/// The parameter swept by a scaling experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    N,
    K,
    Delta,
}

impl SweepVar {
    pub fn id(self) -> &'static str {
        match self {
            SweepVar::N => "n",
            SweepVar::K => "k",
            SweepVar::Delta => "delta",
        }
    }

    /// Exponent of this variable in [`bound_shallow_packing`].
    pub fn predicted_exponent(self, params: &CsParams) -> f64 {
        match self {
            SweepVar::N => params.d1,
            SweepVar::K => params.d - params.d1,
            SweepVar::Delta => -params.d,
        }
    }
}

impl std::str::FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(SweepVar::N),
            "k" => Ok(SweepVar::K),
            "delta" => Ok(SweepVar::Delta),
            other => Err(Error::invalid(format!("unknown sweep variable `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingSpec {
    pub generator: Generator,
    pub vary: SweepVar,
    pub values: Vec<usize>,
    /// Fixed values; the swept one is ignored.
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub separation: Separation,
    /// Greedy restarts per configuration; the largest packing is kept.
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub packing_size: usize,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub generator: String,
    pub vary: SweepVar,
    pub trials: usize,
    pub rows: Vec<ScalingRow>,
    pub slope: f64,
    pub slope_se: f64,
    pub predicted_slope: f64,
}

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("generator,n,k,delta,trials,packing_size,bound,slope,slope_se\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                self.generator, r.n, r.k, r.delta, self.trials, r.packing_size, r.bound, self.slope, self.slope_se
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Greedy packing sizes of `k`-shallow generated systems across a sweep of
/// one parameter, with a log-log slope fit of size against that parameter.
pub fn scaling_experiment(spec: &ScalingSpec) -> Result<ScalingReport> {
    let mut values = spec.values.clone();
    values.sort_unstable();
    values.dedup();
    if values.len() < 3 {
        return Err(Error::invalid("a sweep needs at least 3 distinct values"));
    }
    if spec.trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    let configs: Vec<(usize, usize, usize)> = values
        .iter()
        .map(|&v| match spec.vary {
            SweepVar::N => (v, spec.k, spec.delta),
            SweepVar::K => (spec.n, v, spec.delta),
            SweepVar::Delta => (spec.n, spec.k, v),
        })
        .collect();
    let params = spec.generator.params();
    for &(n, k, delta) in &configs {
        bound_shallow_packing(n, k, delta, &params)?;
    }

    // geometric systems depend on n only, the grid also on delta
    let key = |n: usize, delta: usize| (n, if spec.generator.family == Family::Grid { delta } else { 0 });
    let mut systems: BTreeMap<(usize, usize), SetSystem> = BTreeMap::new();
    for &(n, _, delta) in &configs {
        if let std::collections::btree_map::Entry::Vacant(e) = systems.entry(key(n, delta)) {
            e.insert(spec.generator.build(n, delta, spec.seed)?);
        }
    }

    let mut rows = Vec::with_capacity(configs.len());
    for &(n, k, delta) in &configs {
        let shallow = shallow_filter(&systems[&key(n, delta)], k);
        let sizes = par::map_indexed(spec.trials, |t| {
            let order_seed = if t == 0 {
                0
            } else {
                derive_seed(spec.seed, "scaling/order", t as u64) | 1
            };
            greedy_packing(&shallow, delta, spec.separation, order_seed).len()
        });
        rows.push(ScalingRow {
            n,
            k,
            delta,
            packing_size: sizes.into_iter().max().unwrap_or(0),
            bound: bound_shallow_packing(n, k, delta, &params)?,
        });
    }
    let xs: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.packing_size as f64).collect();
    let fit = fit_loglog(&xs, &ys)?;
    Ok(ScalingReport {
        generator: spec.generator.family.id().to_string(),
        vary: spec.vary,
        trials: spec.trials,
        rows,
        slope: fit.slope,
        slope_se: fit.slope_se,
        predicted_slope: spec.vary.predicted_exponent(&params),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsystem::{build_rectangle_grid_dual, PointSet};
    use proptest::prelude::*;

    fn sys(rows: &[&str]) -> SetSystem {
        SetSystem::from_bit_strings(rows).unwrap()
    }

    fn is_separated(sys: &SetSystem, p: &Packing) -> bool {
        p.members.iter().enumerate().all(|(a, &i)| {
            p.members[a + 1..]
                .iter()
                .all(|&j| p.separation.holds(sys.get(i).distance(sys.get(j)).unwrap(), p.delta))
        })
    }

    fn is_maximal(sys: &SetSystem, p: &Packing) -> bool {
        (0..sys.len()).filter(|i| !p.members.contains(i)).all(|i| {
            p.members
                .iter()
                .any(|&j| !p.separation.holds(sys.get(i).distance(sys.get(j)).unwrap(), p.delta))
        })
    }

    /// Maximum separated subset by trying every subset.
    fn exhaustive_max(sys: &SetSystem, delta: usize, sep: Separation) -> usize {
        let m = sys.len();
        (0u32..1 << m)
            .filter(|mask| {
                (0..m).all(|i| {
                    (i + 1..m).all(|j| {
                        mask >> i & 1 == 0
                            || mask >> j & 1 == 0
                            || sep.holds(sys.get(i).distance(sys.get(j)).unwrap(), delta)
                    })
                })
            })
            .map(u32::count_ones)
            .max()
            .unwrap() as usize
    }

    #[test]
    fn greedy_examples() {
        let p = greedy_packing(&sys(&["0000"]), 3, Separation::Strict, 0);
        assert_eq!(p.len(), 1);

        let s = sys(&["1000", "1100", "1111"]);
        let p = greedy_packing(&s, 1, Separation::Strict, 0);
        let kept: Vec<String> = p.members.iter().map(|&i| s.get(i).to_bit_string()).collect();
        assert_eq!(kept, ["1000", "1111"]);

        let grid = build_rectangle_grid_dual(8, 2).unwrap();
        assert_eq!(greedy_packing(&grid, 1, Separation::Strict, 0).len(), 16);
    }

    #[test]
    fn exact_examples() {
        let s = sys(&["1000", "1100", "1111"]);
        assert_eq!(max_packing_bruteforce(&s, 1, Separation::Strict).unwrap().len(), 2);
        assert_eq!(max_packing_bruteforce(&s, 0, Separation::Strict).unwrap().len(), 3);
        let cube = SetSystem::full_cube(2).unwrap();
        assert_eq!(max_packing_bruteforce(&cube, 2, Separation::Strict).unwrap().len(), 1);
        let empty = SetSystem::new(3, vec![]).unwrap();
        assert!(max_packing_bruteforce(&empty, 1, Separation::Strict).unwrap().is_empty());
        assert!(max_packing_bruteforce(&SetSystem::full_cube(7).unwrap(), 1, Separation::Strict).is_err());
    }

    #[test]
    fn grid_exact_packing_keeps_every_cell() {
        // distances are delta or 2 delta, so strict delta - 1 keeps all
        for (n, delta) in [(8, 2), (12, 2), (16, 4), (24, 4)] {
            let g = build_rectangle_grid_dual(n, delta).unwrap();
            let p = max_packing_bruteforce(&g, delta - 1, Separation::Strict).unwrap();
            assert_eq!(p.len(), (n / delta) * (n / delta));
            let p = max_packing_bruteforce(&g, delta, Separation::NonStrict).unwrap();
            assert_eq!(p.len(), (n / delta) * (n / delta));
            // strict delta: only one cell per row and column survives
            let p = max_packing_bruteforce(&g, delta, Separation::Strict).unwrap();
            assert_eq!(p.len(), n / delta);
        }
    }

    #[test]
    fn exact_matches_exhaustive_on_halfplanes() {
        let p = PointSet::uniform(5, 2, 9).unwrap();
        let h = crate::setsystem::build_halfspaces(&p).unwrap();
        assert_eq!(h.len(), 22);
        for delta in 0..5 {
            for sep in [Separation::Strict, Separation::NonStrict] {
                let got = max_packing_bruteforce(&h, delta, sep).unwrap();
                assert!(is_separated(&h, &got));
                assert_eq!(got.len(), exhaustive_max(&h, delta, sep), "delta {delta} {sep:?}");
            }
        }
    }

    #[test]
    fn shallow_filter_examples() {
        let s = sys(&["1100", "1110", "0000"]);
        assert_eq!(shallow_filter(&s, 4), s);
        assert_eq!(shallow_filter(&s, 2), sys(&["1100", "0000"]));
        assert_eq!(shallow_filter(&s, 0), sys(&["0000"]));
    }

    #[test]
    fn bound_examples() {
        let p2 = CsParams::new(2.0, 1.0, 3).unwrap();
        assert_eq!(bound_packing(16, 4, &p2).unwrap(), 16.0);
        assert_eq!(bound_packing(7, 7, &p2).unwrap(), 1.0);
        let p3 = CsParams::new(3.0, 1.0, 4).unwrap();
        assert!((bound_packing(100, 10, &p3).unwrap() - 1000.0).abs() < 1e-9);
        assert_eq!(bound_shallow_packing(16, 4, 2, &p2).unwrap(), 16.0);
        assert_eq!(bound_shallow_packing(64, 4, 4, &p2).unwrap(), 16.0);
        assert!(bound_shallow_packing(64, 1, 4, &p2).is_err());
        assert!(bound_packing(4, 0, &p2).is_err());
        assert!(bound_packing(4, 5, &p2).is_err());
    }

    #[test]
    fn grid_scaling_slope_is_two() {
        let spec = ScalingSpec {
            generator: Generator::new(Family::Grid, 2).unwrap(),
            vary: SweepVar::N,
            values: vec![16, 32, 64],
            n: 0,
            k: 4,
            delta: 4,
            separation: Separation::NonStrict,
            trials: 2,
            seed: 1,
        };
        let r = scaling_experiment(&spec).unwrap();
        let sizes: Vec<usize> = r.rows.iter().map(|r| r.packing_size).collect();
        assert_eq!(sizes, [16, 64, 256]);
        assert!((r.slope - 2.0).abs() < 1e-12);
        assert_eq!(r.predicted_slope, 2.0);
        assert!(r.to_csv().starts_with("generator,n,k,delta,trials,packing_size,bound,slope,slope_se\ngrid,16,4,4,2,16,"));
    }

    #[test]
    fn scaling_rejects_short_sweeps() {
        let spec = ScalingSpec {
            generator: Generator::new(Family::Halfspaces, 2).unwrap(),
            vary: SweepVar::Delta,
            values: vec![4, 8, 8],
            n: 32,
            k: 16,
            delta: 0,
            separation: Separation::Strict,
            trials: 1,
            seed: 1,
        };
        assert!(scaling_experiment(&spec).is_err());
    }

    #[test]
    fn scaling_is_deterministic() {
        let spec = ScalingSpec {
            generator: Generator::new(Family::Halfspaces, 2).unwrap(),
            vary: SweepVar::Delta,
            values: vec![2, 4, 8],
            n: 40,
            k: 12,
            delta: 0,
            separation: Separation::Strict,
            trials: 3,
            seed: 5,
        };
        let a = scaling_experiment(&spec).unwrap();
        assert_eq!(a, scaling_experiment(&spec).unwrap());
        assert!(a.rows.windows(2).all(|w| w[0].packing_size >= w[1].packing_size));
    }

    fn small_system() -> impl Strategy<Value = SetSystem> {
        (2usize..9).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), 1..16)
                .prop_map(move |rows| {
                    SetSystem::new(n, rows.iter().map(|r| crate::IncidenceVector::from_bools(r))).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn greedy_is_separated_maximal_and_at_most_exact(
            s in small_system(), delta in 0usize..5, seed in 0u64..4, strict in any::<bool>()
        ) {
            let sep = if strict { Separation::Strict } else { Separation::NonStrict };
            let g = greedy_packing(&s, delta, sep, seed);
            prop_assert!(is_separated(&s, &g));
            prop_assert!(is_maximal(&s, &g));
            let e = max_packing_bruteforce(&s, delta, sep).unwrap();
            prop_assert!(is_separated(&s, &e));
            prop_assert!(g.len() <= e.len());
            prop_assert_eq!(e.len(), exhaustive_max(&s, delta, sep));
        }

        #[test]
        fn zero_delta_strict_keeps_everything(s in small_system()) {
            prop_assert_eq!(greedy_packing(&s, 0, Separation::Strict, 3).len(), s.len());
            prop_assert_eq!(max_packing_bruteforce(&s, 0, Separation::Strict).unwrap().len(), s.len());
        }

        #[test]
        fn shallow_bound_degenerates_to_packing_bound(
            n in 1usize..500, delta_frac in 0.0f64..1.0, d in 1.0f64..4.0
        ) {
            let delta = ((n as f64 * delta_frac) as usize).max(1);
            let params = CsParams::new(d, d, 2).unwrap();
            let a = bound_shallow_packing(n, n, delta, &params).unwrap();
            let b = bound_packing(n, delta, &params).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * b.max(1.0));
        }
    }
}
