//! Random index samples: Haussler-style sample sizes, epsilon-nets, relative
//! approximations, compact projections, hypergeometric tails and the
//! projection-expectation inequality.

mod hypergeom;

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::bits::IncidenceVector;
use crate::error::{Error, Result};
use crate::par;
use crate::rng::rng_for;
use crate::setsystem::{
    binomial, for_each_combination, partial_shuffle, projection_size, IndexSample, Separation,
    SetSystem, ENUMERATION_BUDGET,
};

pub use hypergeom::{binomial_big, hypergeom_pmf, hypergeom_tail};

/// Slack for floating-point comparisons against exact thresholds.
const SLACK: f64 = 1e-12;

/// Parameters of the sample-size formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleParams {
    pub epsilon: f64,
    pub eta: f64,
    /// Target failure probability.
    pub q: f64,
    /// Multiplier in front of every size formula.
    pub c: f64,
}

impl SampleParams {
    /// `q = 1/4`, `c = 4`.
    pub fn new(epsilon: f64, eta: f64) -> Result<Self> {
        Self::with(epsilon, eta, 0.25, 4.0)
    }

    pub fn with(epsilon: f64, eta: f64, q: f64, c: f64) -> Result<Self> {
        let open = |x: f64| x > 0.0 && x < 1.0;
        if !open(epsilon) || !open(eta) || !open(q) {
            return Err(Error::invalid("epsilon, eta and q must lie in (0, 1)"));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid("c must be positive"));
        }
        Ok(SampleParams { epsilon, eta, q, c })
    }

    /// `c (d ln(1/eps) + ln(1/q)) / eps`, rounded up.
    pub fn epsilon_net_size(&self, d: f64) -> usize {
        ceil_size(self.c * (d * (1.0 / self.epsilon).ln() + (1.0 / self.q).ln()) / self.epsilon)
    }

    /// `c (d ln(1/eps) + ln(1/q)) / (eps eta^2)`, rounded up.
    pub fn relative_approximation_size(&self, d: f64) -> usize {
        ceil_size(
            self.c * (d * (1.0 / self.epsilon).ln() + (1.0 / self.q).ln())
                / (self.epsilon * self.eta * self.eta),
        )
    }
}

fn ceil_size(x: f64) -> usize {
    if x >= usize::MAX as f64 {
        usize::MAX
    } else {
        x.ceil().max(0.0) as usize
    }
}

/// `ceil((2 d0 + 2)(n + 1) / (delta + 2 d0 + 2))`.
pub fn haussler_sample_size(d0: u32, n: usize, delta: usize) -> Result<usize> {
    if n < (d0 as usize).max(delta) {
        return Err(Error::invalid(format!(
            "need n >= max(d0, delta), got n = {n}, d0 = {d0}, delta = {delta}"
        )));
    }
    let a = 2 * d0 as u128 + 2;
    let num = a * (n as u128 + 1);
    let den = delta as u128 + a;
    Ok(num.div_ceil(den) as usize)
}

/// `j`-fold iterated base-2 logarithm, `None` once an iterate drops below 1.
pub fn iterated_log2(x: f64, j: u32) -> Option<f64> {
    let mut v = x;
    for _ in 0..j {
        if v <= 0.0 {
            return None;
        }
        v = v.log2();
    }
    (v >= 1.0).then_some(v)
}

/// `ceil(m log2^(j)(n / delta))`.
pub fn iterated_sample_size(m: usize, n: usize, delta: usize, j: u32) -> Result<usize> {
    if j == 0 || delta == 0 {
        return Err(Error::invalid("need j >= 1 and delta >= 1"));
    }
    let l = iterated_log2(n as f64 / delta as f64, j).ok_or_else(|| {
        Error::invalid(format!("{j}-fold log of n/delta = {n}/{delta} is below 1"))
    })?;
    Ok(ceil_size(m as f64 * l - SLACK))
}

/// Uniform `size`-subset of `[n]`.
pub fn draw_sample(n: usize, size: usize, seed: u64) -> Result<IndexSample> {
    IndexSample::random(n, size, &mut rng_for(seed, "sampling/draw", 0))
}

fn sample_or_full(n: usize, size: usize, seed: u64, label: &str) -> IndexSample {
    if size >= n {
        return IndexSample::full(n);
    }
    IndexSample::random(n, size, &mut rng_for(seed, label, 0)).expect("size < n")
}

fn check_sample(sys: &SetSystem, sample: &IndexSample) -> Result<()> {
    if sample.n() != sys.n() {
        return Err(Error::WidthMismatch {
            expected: sys.n(),
            found: sample.n(),
        });
    }
    Ok(())
}

/// A random sample of [`SampleParams::epsilon_net_size`] indices for
/// dimension `d`; the full index set when that size reaches `n`.
pub fn epsilon_net(sys: &SetSystem, params: &SampleParams, d: f64, seed: u64) -> IndexSample {
    sample_or_full(sys.n(), params.epsilon_net_size(d), seed, "sampling/net")
}

/// Every vector of length at least `epsilon * n` has a set bit in `sample`.
pub fn verify_epsilon_net(sys: &SetSystem, sample: &IndexSample, epsilon: f64) -> Result<bool> {
    check_sample(sys, sample)?;
    let long = epsilon * sys.n() as f64 - SLACK;
    Ok(sys
        .vectors()
        .iter()
        .filter(|v| v.len() as f64 >= long)
        .all(|v| v.count_on(sample.indices()) >= 1))
}

/// A random sample of [`SampleParams::relative_approximation_size`] indices;
/// the full index set when that size reaches `n`.
pub fn relative_approximation(sys: &SetSystem, params: &SampleParams, d: f64, seed: u64) -> IndexSample {
    sample_or_full(sys.n(), params.relative_approximation_size(d), seed, "sampling/approx")
}

/// For every vector with density `p = |v|/n` and sampled density
/// `p' = |v|_I| / |I|`: `|p' - p| <= eta p` when `p >= epsilon`, and
/// `|p' - p| <= eta epsilon` otherwise. An empty sample has density 0.
pub fn verify_relative_approximation(
    sys: &SetSystem,
    sample: &IndexSample,
    epsilon: f64,
    eta: f64,
) -> Result<bool> {
    check_sample(sys, sample)?;
    let n = sys.n() as f64;
    Ok(sys.vectors().iter().all(|v| {
        let p = v.len() as f64 / n;
        let sampled = if sample.is_empty() {
            0.0
        } else {
            v.count_on(sample.indices()) as f64 / sample.len() as f64
        };
        let allowed = if p >= epsilon - SLACK { eta * p } else { eta * epsilon };
        (sampled - p).abs() <= allowed + SLACK
    }))
}

/// All pairwise symmetric differences `u xor v` for `u != v`, deduplicated.
pub fn symmetric_difference_system(sys: &SetSystem) -> SetSystem {
    let mut out = Vec::with_capacity(sys.len() * sys.len().saturating_sub(1) / 2);
    for (i, u) in sys.vectors().iter().enumerate() {
        for v in &sys.vectors()[i + 1..] {
            out.push(u.xor(v).expect("same width"));
        }
    }
    SetSystem::new(sys.n(), out).expect("same width")
}

/// A sample drawn for the compact-representation step together with the
/// two properties it should have.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompactProjection {
    pub sample: IndexSample,
    /// Distinct vectors stay distinct after projection.
    pub injective: bool,
    pub max_projected_length: usize,
    /// `1.5 k |I| / n`.
    pub length_limit: f64,
}

impl CompactProjection {
    pub fn short(&self) -> bool {
        self.max_projected_length as f64 <= self.length_limit + SLACK
    }

    pub fn holds(&self) -> bool {
        self.injective && self.short()
    }
}

/// Size `ceil(c d (n/delta) ln(n/delta))` used by [`compact_projection`].
pub fn compact_projection_size(n: usize, delta: usize, d: f64, c: f64) -> usize {
    let r = n as f64 / delta as f64;
    ceil_size(c * d * r * r.ln())
}

/// Draws a sample of [`compact_projection_size`] indices from `[n]` and
/// reports injectivity of the projection and the largest projected length.
/// `sys` must be strictly `delta`-separated and `k`-shallow, `k >= delta/2`.
pub fn compact_projection(
    sys: &SetSystem,
    delta: usize,
    k: usize,
    d: f64,
    c: f64,
    seed: u64,
) -> Result<CompactProjection> {
    if delta == 0 || 2 * k < delta {
        return Err(Error::invalid("need delta >= 1 and k >= delta/2"));
    }
    if sys.max_length() > k {
        return Err(Error::invalid(format!("system is not {k}-shallow")));
    }
    sys.check_separated(delta, Separation::Strict)?;
    let n = sys.n();
    let sample = sample_or_full(n, compact_projection_size(n, delta, d, c), seed, "sampling/compact");
    Ok(compact_diagnostics(sys, sample, k))
}

pub(crate) fn compact_diagnostics(sys: &SetSystem, sample: IndexSample, k: usize) -> CompactProjection {
    let injective = projection_size(sys, sample.indices()) == sys.len();
    let max_projected_length = sys
        .vectors()
        .iter()
        .map(|v| v.count_on(sample.indices()))
        .max()
        .unwrap_or(0);
    let length_limit = 1.5 * k as f64 * sample.len() as f64 / sys.n().max(1) as f64;
    CompactProjection {
        sample,
        injective,
        max_projected_length,
        length_limit,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailRow {
    pub t: f64,
    /// `t k (m_j - 1) / n`.
    pub threshold: f64,
    pub empirical: f64,
    /// Exact tail as a float; the exact comparison is in `exact_below_bound`.
    pub exact: Option<f64>,
    pub exact_below_bound: Option<bool>,
    /// `2^(-threshold)`.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub n: usize,
    pub k: usize,
    pub sample_size: usize,
    pub trials: usize,
    pub rows: Vec<TailRow>,
}

impl TailReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,empirical,exact,bound\n");
        for r in &self.rows {
            let exact = r.exact.map(|e| e.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{}", r.t, r.empirical, exact, r.bound);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Largest `n` for which the exact tail is summed in rational arithmetic.
const EXACT_TAIL_MAX_N: usize = 4096;

/// Tail of the projected length of a length-`k` vector (the first `k`
/// indices) under samples of `m_j - 1` indices, against `2^(-t k (m_j-1)/n)`
/// for each `t >= 2e`.
pub fn decay_tail_experiment(
    n: usize,
    k: usize,
    m_j: usize,
    ts: &[f64],
    trials: usize,
    seed: u64,
) -> Result<TailReport> {
    if k == 0 || k > n || m_j < 2 || m_j - 1 > n {
        return Err(Error::invalid("need 1 <= k <= n and 2 <= m_j <= n + 1"));
    }
    let two_e = 2.0 * std::f64::consts::E;
    if ts.is_empty() || ts.iter().any(|&t| !t.is_finite() || t < two_e - SLACK) {
        return Err(Error::invalid("every t must be finite and >= 2e"));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    let size = m_j - 1;
    let counts = par::map_indexed(trials, |trial| {
        let mut rng = rng_for(seed, "sampling/tail", trial as u64);
        let idx = partial_shuffle(n, size, &mut rng).expect("size <= n");
        idx.iter().filter(|&&i| i < k).count()
    });
    let scale = k as f64 * size as f64 / n as f64;
    let rows = ts
        .iter()
        .map(|&t| {
            let threshold = t * scale;
            let bound = (-threshold).exp2();
            let hits = counts.iter().filter(|&&c| c as f64 >= threshold - SLACK).count();
            let (exact, below) = if n <= EXACT_TAIL_MAX_N {
                let tail = hypergeom_tail(n, size, k, threshold - SLACK)?;
                let f = tail.to_f64().unwrap_or(f64::NAN);
                (Some(f), Some(f < bound))
            } else {
                (None, None)
            };
            Ok(TailRow {
                t,
                threshold,
                empirical: hits as f64 / trials as f64,
                exact,
                exact_below_bound: below,
                bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TailReport {
        n,
        k,
        sample_size: size,
        trials,
        rows,
    })
}

/// Largest system handled by [`conditional_variance_sum`].
pub const CONDITIONAL_VARIANCE_MAX_N: usize = 12;
pub const CONDITIONAL_VARIANCE_MAX_SIZE: usize = 4096;

/// `sum_i E[Var(V_i | V_j, j != i)]` for `V` uniform on the vectors of
/// `sys`, in exact arithmetic.
pub fn conditional_variance_sum(sys: &SetSystem) -> Result<Ratio<u64>> {
    if sys.is_empty() {
        return Err(Error::EmptySystem);
    }
    if sys.n() > CONDITIONAL_VARIANCE_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "conditional variance ground set",
            value: sys.n() as u128,
            limit: CONDITIONAL_VARIANCE_MAX_N as u128,
        });
    }
    if sys.len() > CONDITIONAL_VARIANCE_MAX_SIZE {
        return Err(Error::BudgetExceeded {
            what: "conditional variance system size",
            value: sys.len() as u128,
            limit: CONDITIONAL_VARIANCE_MAX_SIZE as u128,
        });
    }
    let total = sys.len() as u64;
    let mut sum = Ratio::new(0u64, 1);
    for i in 0..sys.n() {
        // group vectors by all coordinates except i: (size, ones at i)
        let mut classes: HashMap<IncidenceVector, (u64, u64)> = HashMap::new();
        for v in sys.vectors() {
            let mut key = v.clone();
            key.set(i, false);
            let e = classes.entry(key).or_default();
            e.0 += 1;
            e.1 += v.get(i) as u64;
        }
        for (size, ones) in classes.into_values() {
            // P(class) * p (1 - p) with p = ones / size
            sum += Ratio::new(ones * (size - ones), total * size);
        }
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionCheck {
    /// `|V|`
    pub lhs: usize,
    /// `(d0 + 1)` times the sample mean of `|V|_I|`.
    pub rhs: f64,
    /// Standard error of the sample mean.
    pub se: f64,
    pub trials: usize,
    /// `m - 1` with `m` from [`haussler_sample_size`].
    pub sample_size: usize,
    pub d0: u32,
}

impl ProjectionCheck {
    /// `lhs <= (d0 + 1)(mean + 3 se)`.
    pub fn holds(&self) -> bool {
        self.lhs as f64 <= self.rhs + 3.0 * (self.d0 as f64 + 1.0) * self.se + SLACK
    }

    pub fn to_csv(&self) -> String {
        format!("lhs,rhs,se,trials\n{},{},{},{}\n", self.lhs, self.rhs, self.se, self.trials)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn check_projection_preconditions(sys: &SetSystem, delta: usize, d0: u32) -> Result<usize> {
    sys.check_separated(delta, Separation::Strict)?;
    let n = sys.n();
    if d0 >= usize::BITS - 1 || (delta << (d0 + 1)) > n {
        return Err(Error::invalid(format!(
            "need delta <= n / 2^(d0 + 1), got delta = {delta}, n = {n}, d0 = {d0}"
        )));
    }
    Ok(haussler_sample_size(d0, n, delta)? - 1)
}

/// Monte Carlo estimate of both sides of `|V| <= (d0 + 1) E_I[|V|_I|]` for
/// uniform samples `I` of `m - 1` indices.
pub fn projection_expectation_check(
    sys: &SetSystem,
    delta: usize,
    d0: u32,
    trials: usize,
    seed: u64,
) -> Result<ProjectionCheck> {
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    let size = check_projection_preconditions(sys, delta, d0)?;
    let n = sys.n();
    let values = par::map_indexed(trials, |t| {
        let mut rng = rng_for(seed, "sampling/projection", t as u64);
        let mut idx = partial_shuffle(n, size, &mut rng).expect("size <= n");
        idx.sort_unstable();
        projection_size(sys, &idx) as f64
    });
    let mean = values.iter().sum::<f64>() / trials as f64;
    let se = if trials > 1 {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (trials - 1) as f64;
        (var / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(ProjectionCheck {
        lhs: sys.len(),
        rhs: (d0 as f64 + 1.0) * mean,
        se,
        trials,
        sample_size: size,
        d0,
    })
}

/// Exact `E_I[|V|_I|]` over all `(m - 1)`-subsets, when there are at most
/// [`ENUMERATION_BUDGET`] of them.
pub fn projection_expectation_exact(sys: &SetSystem, delta: usize, d0: u32) -> Result<Ratio<u64>> {
    let size = check_projection_preconditions(sys, delta, d0)?;
    let count = binomial(sys.n(), size);
    if count > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "projection samples",
            value: count,
            limit: ENUMERATION_BUDGET,
        });
    }
    let mut total = 0u64;
    for_each_combination(sys.n(), size, |c| {
        total += projection_size(sys, c) as u64;
        true
    });
    Ok(Ratio::new(total, count as u64))
}
