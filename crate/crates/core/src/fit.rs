//! Ordinary least squares on log-log data.

use serde::Serialize;

use crate::error::{Error, Result};

/// A fitted line `log y = intercept + slope * log x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; 0 when exactly three or more points lie
    /// on the line.
    pub slope_se: f64,
    pub points: usize,
}

/// Fits `log y` against `log x` (natural logs). Needs at least three points,
/// all coordinates positive, and at least two distinct `x`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() {
        return Err(Error::invalid("x and y must have equal length"));
    }
    if xs.len() < 3 {
        return Err(Error::invalid(format!("need at least 3 points, got {}", xs.len())));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("log-log fit needs positive finite values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return Err(Error::invalid("x values must not all be equal"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let slope_se = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(LogLogFit {
        slope,
        intercept,
        slope_se,
        points: xs.len(),
    })
}
