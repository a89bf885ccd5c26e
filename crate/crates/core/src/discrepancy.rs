//! Two-colorings of the ground set evaluated against set systems, with a
//! random baseline and size-sensitive bound predictors for halfspaces.

use std::fmt::Write as _;

use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::rng_for;
use crate::setsystem::SetSystem;

/// A sign in `{-1, +1}` for every ground element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    signs: Vec<i8>,
}

impl Coloring {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(i) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::invalid(format!("sign at {i} is {}, expected +1 or -1", signs[i])));
        }
        Ok(Coloring { signs })
    }

    pub fn constant(n: usize, sign: i8) -> Result<Self> {
        Self::new(vec![sign; n])
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn negated(&self) -> Self {
        Coloring {
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }
}

/// Independent uniform signs.
pub fn random_coloring(n: usize, seed: u64) -> Coloring {
    let mut rng = rng_for(seed, "discrepancy/coloring", 0);
    Coloring {
        signs: (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringEval {
    /// `chi(S)` per set, in system order.
    pub values: Vec<i64>,
    /// `max |chi(S)|`, 0 for an empty system.
    pub disc: u64,
}

pub fn eval_coloring(sys: &SetSystem, chi: &Coloring) -> Result<ColoringEval> {
    if chi.n() != sys.n() {
        return Err(Error::WidthMismatch {
            expected: sys.n(),
            found: chi.n(),
        });
    }
    let values: Vec<i64> = sys
        .vectors()
        .iter()
        .map(|v| v.ones_iter().map(|i| chi.signs[i] as i64).sum())
        .collect();
    let disc = values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    Ok(ColoringEval { values, disc })
}

/// Predicted size-sensitive discrepancy of a set of size `s` in the
/// halfspace system of `n` points in dimension `d` (logs base 2):
///
/// * even `d >= 4`: `s^(1/4) n^(1/4 - 1/(2d)) log^(1/(2d)) n`
/// * odd `d >= 5`: `s^(1/4 + 1/(4d)) n^(1/4 - 3/(4d)) log^(1/(2d)) n`
/// * `d = 3`: `s^(1/3) log^(7/6) n`
pub fn bound_disc_halfspaces(s: usize, n: usize, d: u32) -> Result<f64> {
    if d < 3 {
        return Err(Error::invalid(format!("predictor needs d >= 3, got {d}")));
    }
    if s > n || n < 2 {
        return Err(Error::invalid(format!("need s <= n and n >= 2, got s = {s}, n = {n}")));
    }
    let (s, nf, df) = (s as f64, n as f64, d as f64);
    let log = nf.log2();
    Ok(if d == 3 {
        s.powf(1.0 / 3.0) * log.powf(7.0 / 6.0)
    } else if d.is_multiple_of(2) {
        s.powf(0.25) * nf.powf(0.25 - 1.0 / (2.0 * df)) * log.powf(1.0 / (2.0 * df))
    } else {
        s.powf(0.25 + 1.0 / (4.0 * df)) * nf.powf(0.25 - 3.0 / (4.0 * df)) * log.powf(1.0 / (2.0 * df))
    })
}

/// `set_index,set_size,chi_value,predicted_bound` for every set.
pub fn coloring_csv(sys: &SetSystem, eval: &ColoringEval, d: u32) -> Result<String> {
    let mut out = String::from("set_index,set_size,chi_value,predicted_bound\n");
    for (i, (v, chi)) in sys.vectors().iter().zip(&eval.values).enumerate() {
        let bound = bound_disc_halfspaces(v.len(), sys.n(), d)?;
        let _ = writeln!(out, "{i},{},{chi},{bound}", v.len());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsystem::{build_halfspaces, PointSet};
    use proptest::prelude::*;

    fn sys(rows: &[&str]) -> SetSystem {
        SetSystem::from_bit_strings(rows).unwrap()
    }

    #[test]
    fn eval_examples() {
        let s = sys(&["1100", "0111", "0000"]);
        let plus = Coloring::constant(4, 1).unwrap();
        let e = eval_coloring(&s, &plus).unwrap();
        assert_eq!(e.values, s.vectors().iter().map(|v| v.len() as i64).collect::<Vec<_>>());

        let balanced = Coloring::new(vec![1, -1, -1, 1]).unwrap();
        assert_eq!(eval_coloring(&sys(&["1111"]), &balanced).unwrap().disc, 0);

        let alt = Coloring::new(vec![1, -1, 1, -1]).unwrap();
        let e = eval_coloring(&sys(&["1100", "0011"]), &alt).unwrap();
        assert_eq!((e.values, e.disc), (vec![0, 0], 0));

        assert!(Coloring::new(vec![1, 0]).is_err());
        assert!(eval_coloring(&sys(&["11"]), &alt).is_err());
    }

    #[test]
    fn random_coloring_is_fair() {
        assert_eq!(random_coloring(0, 3).n(), 0);
        let plus: usize = (0..100u64)
            .map(|seed| random_coloring(100, seed).signs().iter().filter(|&&s| s == 1).count())
            .sum();
        assert!((plus as f64 / 1e4 - 0.5).abs() <= 0.02, "{plus}");
        assert_eq!(random_coloring(50, 7), random_coloring(50, 7));
    }

    #[test]
    fn random_disc_is_moderate_on_shallow_halfplanes() {
        // max |chi(S)| concentrates around sqrt(k log m)
        let p = PointSet::uniform(60, 2, 4).unwrap();
        let h = crate::packing::shallow_filter(&build_halfspaces(&p).unwrap(), 16);
        let scale = (16.0 * (h.len() as f64).ln()).sqrt();
        let discs: Vec<u64> = (0..100).map(|s| eval_coloring(&h, &random_coloring(60, s)).unwrap().disc).collect();
        let mean = discs.iter().sum::<u64>() as f64 / 100.0;
        assert!(mean <= 2.0 * scale && mean >= 0.25 * scale, "{mean} vs {scale}");
    }

    #[test]
    fn bound_examples() {
        let v = bound_disc_halfspaces(16, 256, 4).unwrap();
        assert!((v - 4.0 * 8f64.powf(0.125)).abs() < 1e-12);
        let v = bound_disc_halfspaces(8, 8, 3).unwrap();
        assert!((v - 2.0 * 3f64.powf(7.0 / 6.0)).abs() < 1e-12);
        let v = bound_disc_halfspaces(32, 1024, 5).unwrap();
        let expected = 32f64.powf(0.3) * 1024f64.powf(0.1) * 10f64.powf(0.1);
        assert!((v - expected).abs() < 1e-9);
        assert!(bound_disc_halfspaces(4, 16, 2).is_err());
        assert!(bound_disc_halfspaces(17, 16, 4).is_err());
    }

    #[test]
    fn csv_rows() {
        let s = sys(&["1100", "0111"]);
        let e = eval_coloring(&s, &Coloring::constant(4, -1).unwrap()).unwrap();
        let text = coloring_csv(&s, &e, 3).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "set_index,set_size,chi_value,predicted_bound");
        assert!(lines[1].starts_with("0,3,-3,"));
        assert!(lines[2].starts_with("1,2,-2,"));
    }

    proptest! {
        #[test]
        fn coloring_properties(rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 7), 1..12), seed in 0u64..1000) {
            let s = SetSystem::new(7, rows.iter().map(|r| crate::IncidenceVector::from_bools(r))).unwrap();
            let chi = random_coloring(7, seed);
            let a = eval_coloring(&s, &chi).unwrap();
            let b = eval_coloring(&s, &chi.negated()).unwrap();
            prop_assert_eq!(a.values.iter().map(|v| -v).collect::<Vec<_>>(), b.values);
            prop_assert_eq!(a.disc, b.disc);
            prop_assert!(a.disc as usize <= s.max_length());
            if s.len() == 1 && s.max_length() % 2 == 1 {
                prop_assert!(a.disc >= 1);
            }
        }

        #[test]
        fn predictor_monotone_in_size(n in 2usize..5000, d in 3u32..9, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let s1 = (lo * n as f64) as usize;
            let s2 = (hi * n as f64) as usize;
            prop_assert!(bound_disc_halfspaces(s1, n, d).unwrap() <= bound_disc_halfspaces(s2, n, d).unwrap());
        }
    }
}
