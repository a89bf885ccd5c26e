//! Typed experiments built from a [`Config`] and their reports.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use shallowpack::discrepancy::{coloring_csv, eval_coloring, random_coloring};
use shallowpack::measures::{traverse_and_measure, Measure};
use shallowpack::packing::{greedy_packing, shallow_filter, ScalingSpec, SweepVar};
use shallowpack::rng::{derive_seed, rng_for};
use shallowpack::sampling::{
    decay_tail_experiment, epsilon_net, projection_expectation_check, relative_approximation,
    symmetric_difference_system, verify_epsilon_net, verify_relative_approximation, SampleParams,
};
use shallowpack::setsystem::{
    build_balls, build_halfspaces, build_rectangle_grid_dual, build_slabs, Family, Generator,
};
use shallowpack::spanning::{approx_mst, bound_tree_conflict, build_sketch, exact_mst, SizeSchedule, SpanningTree};
use shallowpack::{PointSet, Separation, SetSystem};

use crate::config::{Config, ConfigError, Format, Kind};

/// A generated system, optionally restricted to sets of size at most `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    pub generator: Generator,
    pub n: usize,
    pub k: Option<usize>,
    /// Cell size, used only by the grid family.
    pub delta: usize,
}

impl Source {
    fn build(&self, seed: u64) -> shallowpack::Result<SetSystem> {
        let sys = self.generator.build(self.n, self.delta, seed)?;
        Ok(match self.k {
            Some(k) => shallow_filter(&sys, k),
            None => sys,
        })
    }

    /// Strict greedy packing at scale `delta`, in canonical order.
    fn packing(&self, delta: usize, seed: u64) -> shallowpack::Result<SetSystem> {
        let sys = self.build(seed)?;
        greedy_packing(&sys, delta, Separation::Strict, 0).system(&sys)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MstMethod {
    Exact,
    Approx { mu: usize, eta: f64, schedule: SizeSchedule },
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointLayout {
    Uniform,
    Clustered { clusters: usize, spread: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    PackingScaling(ScalingSpec),
    Tail { n: usize, k: usize, m_j: usize, ts: Vec<f64> },
    Net { source: Source, delta: usize, d: f64, c: f64, q: f64 },
    Approx { source: Source, delta: usize, d: f64, c: f64, q: f64, eta: f64 },
    Projection { source: Source, delta: usize, d0: u32 },
    Mst { source: Source, m: Option<usize>, method: MstMethod },
    Measures { generator: Generator, n: usize, k: Option<usize>, m: Option<usize>, measure: Measure, layout: PointLayout },
    Discrepancy { source: Source, d: u32 },
    GridLowerBound { n: usize, delta: usize },
}

fn positive(cfg: &Config, key: &str, value: usize) -> Result<usize, ConfigError> {
    if value == 0 {
        return Err(cfg.invalid(key, "must be >= 1"));
    }
    Ok(value)
}

fn unit_interval(cfg: &Config, key: &str, value: f64) -> Result<f64, ConfigError> {
    if !(value > 0.0 && value < 1.0) {
        return Err(cfg.invalid(key, "must lie in (0, 1)"));
    }
    Ok(value)
}

fn source(cfg: &Config, generator: Generator, delta: Option<usize>) -> Result<Source, ConfigError> {
    let n = positive(cfg, "n", cfg.param("n", None)?)?;
    let k = cfg.optional_param("k")?;
    let delta = match (generator.family, delta) {
        (_, Some(d)) => d,
        (Family::Grid, None) => cfg.param("delta", None)?,
        (_, None) => cfg.param("delta", Some(1))?,
    };
    Ok(Source { generator, n, k, delta })
}

impl Experiment {
    pub fn from_config(cfg: &Config) -> Result<Self, ConfigError> {
        // presence is checked when the config is parsed
        let generator = || cfg.generator.ok_or_else(|| ConfigError::new("missing [generator] section"));
        Ok(match cfg.kind {
            Kind::PackingScaling => {
                let vary: SweepVar = cfg.param("vary", None)?;
                let values: Vec<usize> = cfg.list_param("values")?;
                if values.len() < 3 || values.contains(&0) {
                    return Err(cfg.invalid("values", "need at least 3 positive values"));
                }
                let fixed = |key: &str, var: SweepVar| -> Result<usize, ConfigError> {
                    if vary == var {
                        Ok(cfg.optional_param(key)?.unwrap_or(0))
                    } else {
                        positive(cfg, key, cfg.param(key, None)?)
                    }
                };
                ScalingSpec {
                    generator: generator()?,
                    vary,
                    values,
                    n: fixed("n", SweepVar::N)?,
                    k: fixed("k", SweepVar::K)?,
                    delta: fixed("delta", SweepVar::Delta)?,
                    separation: cfg.param("separation", Some(Separation::Strict))?,
                    trials: cfg.trials,
                    seed: cfg.seed,
                }
                .into()
            }
            Kind::Tail => Experiment::Tail {
                n: cfg.param("n", None)?,
                k: cfg.param("k", None)?,
                m_j: cfg.param("m_j", None)?,
                ts: cfg.list_param("t")?,
            },
            Kind::Net | Kind::Approx => {
                let g = generator()?;
                let delta = positive(cfg, "delta", cfg.param("delta", None)?)?;
                let source = source(cfg, g, Some(delta))?;
                let d = cfg.param("d", Some(g.params().d))?;
                let c = cfg.param("c", Some(4.0))?;
                let q = unit_interval(cfg, "q", cfg.param("q", Some(0.25))?)?;
                if cfg.kind == Kind::Net {
                    Experiment::Net { source, delta, d, c, q }
                } else {
                    let eta = unit_interval(cfg, "eta", cfg.param("eta", Some(0.25))?)?;
                    Experiment::Approx { source, delta, d, c, q, eta }
                }
            }
            Kind::Projection => {
                let g = generator()?;
                let delta = positive(cfg, "delta", cfg.param("delta", None)?)?;
                Experiment::Projection {
                    source: source(cfg, g, Some(delta))?,
                    delta,
                    d0: cfg.param("d0", Some(g.params().d0))?,
                }
            }
            Kind::Mst => {
                let method = match cfg.param::<String>("method", Some("exact".into()))?.as_str() {
                    "exact" => MstMethod::Exact,
                    "approx" => MstMethod::Approx {
                        mu: positive(cfg, "mu", cfg.param("mu", Some(64))?)?,
                        eta: unit_interval(cfg, "eta", cfg.param("eta", Some(0.25))?)?,
                        schedule: cfg.param("schedule", Some(SizeSchedule::Geometric))?,
                    },
                    other => return Err(cfg.invalid("method", format!("unknown method `{other}` (exact or approx)"))),
                };
                Experiment::Mst {
                    source: source(cfg, generator()?, None)?,
                    m: cfg.optional_param("m")?,
                    method,
                }
            }
            Kind::Measures => {
                let g = generator()?;
                if g.family == Family::Grid {
                    return Err(ConfigError::new("measures need a geometric generator, not grid"));
                }
                let layout = match cfg.param::<String>("points", Some("uniform".into()))?.as_str() {
                    "uniform" => PointLayout::Uniform,
                    "clustered" => PointLayout::Clustered {
                        clusters: positive(cfg, "clusters", cfg.param("clusters", Some(4))?)?,
                        spread: cfg.param("spread", Some(0.05))?,
                    },
                    other => return Err(cfg.invalid("points", format!("unknown layout `{other}` (uniform or clustered)"))),
                };
                Experiment::Measures {
                    generator: g,
                    n: positive(cfg, "n", cfg.param("n", None)?)?,
                    k: cfg.optional_param("k")?,
                    m: cfg.optional_param("m")?,
                    measure: cfg.param("measure", None)?,
                    layout,
                }
            }
            Kind::Discrepancy => Experiment::Discrepancy {
                source: source(cfg, generator()?, None)?,
                d: cfg.param("d", Some(3))?,
            },
            Kind::GridLowerBound => Experiment::GridLowerBound {
                n: cfg.param("n", None)?,
                delta: cfg.param("delta", None)?,
            },
        })
    }
}

impl From<ScalingSpec> for Experiment {
    fn from(spec: ScalingSpec) -> Self {
        Experiment::PackingScaling(spec)
    }
}

#[derive(Debug, Serialize)]
struct SampleReport {
    kind: &'static str,
    n: usize,
    delta: usize,
    packing_size: usize,
    epsilon: f64,
    eta: Option<f64>,
    sample_size: usize,
    trials: usize,
    successes: usize,
    frequency: f64,
}

impl SampleReport {
    fn to_csv(&self) -> String {
        let eta = self.eta.map(|e| e.to_string()).unwrap_or_default();
        format!(
            "kind,n,delta,packing_size,epsilon,eta,sample_size,trials,successes,frequency\n{},{},{},{},{},{eta},{},{},{},{}\n",
            self.kind,
            self.n,
            self.delta,
            self.packing_size,
            self.epsilon,
            self.sample_size,
            self.trials,
            self.successes,
            self.frequency
        )
    }
}

#[derive(Debug, Serialize)]
struct MstReport {
    n: usize,
    m: usize,
    method: &'static str,
    total_conflict: usize,
    bound: Option<f64>,
    edges: Vec<(usize, usize, usize)>,
}

impl MstReport {
    fn to_csv(&self) -> String {
        let bound = self.bound.map(|b| b.to_string()).unwrap_or_default();
        let mut out = format!(
            "n,m,method,total_conflict,bound\n{},{},{},{},{bound}\n\nu,v,weight\n",
            self.n, self.m, self.method, self.total_conflict
        );
        for (u, v, w) in &self.edges {
            let _ = writeln!(out, "{u},{v},{w}");
        }
        out
    }
}

#[derive(Debug, Serialize)]
struct DiscrepancyReport {
    n: usize,
    disc: u64,
    set_sizes: Vec<usize>,
    values: Vec<i64>,
}

#[derive(Debug, Serialize)]
struct GridReport {
    n: usize,
    delta: usize,
    cells: usize,
    expected_cells: usize,
    min_distance: Option<usize>,
    min_length: usize,
    max_length: usize,
    verified: bool,
}

impl GridReport {
    fn to_csv(&self) -> String {
        let min = self.min_distance.map(|d| d.to_string()).unwrap_or_default();
        format!(
            "n,delta,cells,expected_cells,min_distance,min_length,max_length,verified\n{},{},{},{},{min},{},{},{}\n",
            self.n, self.delta, self.cells, self.expected_cells, self.min_length, self.max_length, self.verified
        )
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn render<T: Serialize>(format: Format, value: &T, csv: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Csv => csv(value),
        Format::Json => json(value),
    }
}

/// The first `m` sets of a seeded random order, kept in system order.
fn choose_sets(sys: &SetSystem, m: Option<usize>, seed: u64) -> shallowpack::Result<SetSystem> {
    match m {
        Some(m) if m < sys.len() => {
            let mut picked = sample(&mut rng_for(seed, "cli/choose-sets", 0), sys.len(), m).into_vec();
            picked.sort_unstable();
            sys.select(&picked)
        }
        _ => Ok(sys.clone()),
    }
}

fn build_over(family: Family, pts: &PointSet) -> shallowpack::Result<SetSystem> {
    match family {
        Family::Halfspaces => build_halfspaces(pts),
        Family::Balls => build_balls(pts),
        Family::Slabs => build_slabs(pts),
        Family::Grid => unreachable!("rejected during validation"),
    }
}

fn sample_report(
    kind: &'static str,
    n: usize,
    delta: usize,
    packing_size: usize,
    eta: Option<f64>,
    sample_size: usize,
    outcomes: &[bool],
) -> SampleReport {
    let successes = outcomes.iter().filter(|&&ok| ok).count();
    SampleReport {
        kind,
        n,
        delta,
        packing_size,
        epsilon: delta as f64 / n as f64,
        eta,
        sample_size,
        trials: outcomes.len(),
        successes,
        frequency: successes as f64 / outcomes.len() as f64,
    }
}

/// Runs the experiment and renders its report. Identical inputs give
/// byte-identical output.
pub fn run(exp: &Experiment, seed: u64, trials: usize, format: Format) -> shallowpack::Result<String> {
    let trial_seed = |label: &str, t: usize| derive_seed(seed, label, t as u64);
    Ok(match exp {
        Experiment::PackingScaling(spec) => {
            let r = shallowpack::packing::scaling_experiment(spec)?;
            match format {
                Format::Csv => r.to_csv(),
                Format::Json => r.to_json() + "\n",
            }
        }
        Experiment::Tail { n, k, m_j, ts } => {
            let r = decay_tail_experiment(*n, *k, *m_j, ts, trials, seed)?;
            match format {
                Format::Csv => r.to_csv(),
                Format::Json => r.to_json() + "\n",
            }
        }
        Experiment::Net { source, delta, d, c, q } => {
            let pack = source.packing(*delta, seed)?;
            let diffs = symmetric_difference_system(&pack);
            let eps = *delta as f64 / source.n as f64;
            let params = SampleParams::with(eps, 0.25, *q, *c)?;
            let outcomes = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let net = epsilon_net(&diffs, &params, *d, trial_seed("cli/net", t));
                    verify_epsilon_net(&diffs, &net, eps)
                })
                .collect::<shallowpack::Result<Vec<bool>>>()?;
            let r = sample_report("net", source.n, *delta, pack.len(), None, params.epsilon_net_size(*d), &outcomes);
            render(format, &r, SampleReport::to_csv)
        }
        Experiment::Approx { source, delta, d, c, q, eta } => {
            let pack = source.packing(*delta, seed)?;
            let eps = *delta as f64 / source.n as f64;
            let params = SampleParams::with(eps, *eta, *q, *c)?;
            let outcomes = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let a = relative_approximation(&pack, &params, *d, trial_seed("cli/approx", t));
                    verify_relative_approximation(&pack, &a, eps, *eta)
                })
                .collect::<shallowpack::Result<Vec<bool>>>()?;
            let size = params.relative_approximation_size(*d).min(source.n);
            let r = sample_report("approx", source.n, *delta, pack.len(), Some(*eta), size, &outcomes);
            render(format, &r, SampleReport::to_csv)
        }
        Experiment::Projection { source, delta, d0 } => {
            let pack = source.packing(*delta, seed)?;
            let r = projection_expectation_check(&pack, *delta, *d0, trials, seed)?;
            match format {
                Format::Csv => r.to_csv(),
                Format::Json => r.to_json() + "\n",
            }
        }
        Experiment::Mst { source, m, method } => {
            let sys = choose_sets(&source.build(seed)?, *m, seed)?;
            let (tree, method_id): (SpanningTree, _) = match *method {
                MstMethod::Exact => (exact_mst(&sys)?, "exact"),
                MstMethod::Approx { mu, eta, schedule } => {
                    let sketch = build_sketch(&sys, mu, schedule, derive_seed(seed, "cli/sketch", 0))?;
                    (approx_mst(&sys, &sketch, eta)?, "approx")
                }
            };
            let k = source.k.unwrap_or_else(|| sys.max_length()).max(1);
            let r = MstReport {
                n: sys.n(),
                m: sys.len(),
                method: method_id,
                total_conflict: tree.total_conflict(),
                bound: bound_tree_conflict(sys.n(), k, sys.len(), &source.generator.params()).ok(),
                edges: tree.edges().to_vec(),
            };
            render(format, &r, MstReport::to_csv)
        }
        Experiment::Measures { generator, n, k, m, measure, layout } => {
            let pts = match layout {
                PointLayout::Uniform => generator.points(*n, seed)?,
                PointLayout::Clustered { clusters, spread } => PointSet::clustered(
                    *n,
                    generator.dim,
                    *clusters,
                    *spread,
                    derive_seed(seed, "generator/points", *n as u64),
                )?,
            };
            let mut sys = build_over(generator.family, &pts)?;
            if let Some(k) = k {
                sys = shallow_filter(&sys, *k);
            }
            let sys = choose_sets(&sys, *m, seed)?;
            let tree = exact_mst(&sys)?;
            let r = traverse_and_measure(&sys, &tree, &pts, *measure, None)?;
            match format {
                Format::Csv => r.to_csv(),
                Format::Json => r.to_json() + "\n",
            }
        }
        Experiment::Discrepancy { source, d } => {
            let sys = source.build(seed)?;
            let chi = random_coloring(sys.n(), derive_seed(seed, "cli/coloring", 0));
            let eval = eval_coloring(&sys, &chi)?;
            match format {
                Format::Csv => coloring_csv(&sys, &eval, *d)?,
                Format::Json => json(&DiscrepancyReport {
                    n: sys.n(),
                    disc: eval.disc,
                    set_sizes: sys.vectors().iter().map(|v| v.len()).collect(),
                    values: eval.values,
                }),
            }
        }
        Experiment::GridLowerBound { n, delta } => {
            let g = build_rectangle_grid_dual(*n, *delta)?;
            let lengths: Vec<usize> = g.vectors().iter().map(|v| v.len()).collect();
            let min_distance = g.min_pairwise_distance();
            let side = n / delta;
            let r = GridReport {
                n: *n,
                delta: *delta,
                cells: g.len(),
                expected_cells: side * side,
                min_distance,
                min_length: lengths.iter().copied().min().unwrap_or(0),
                max_length: lengths.iter().copied().max().unwrap_or(0),
                verified: g.len() == side * side
                    && lengths.iter().all(|&l| l == *delta)
                    && min_distance.is_none_or(|d| d >= *delta),
            };
            render(format, &r, GridReport::to_csv)
        }
    })
}
