//! Growth-exponent estimation by log-log least squares.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point ({0}, {1}) is not positive")]
    NonPositive(f64, f64),
    #[error("all n values coincide")]
    Degenerate,
}

/// Slope of `log(mean)` against `log(n)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<f64, FitError> {
    if points.len() < 3 {
        return Err(FitError::TooFewPoints(points.len()));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(FitError::NonPositive(x, y));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(FitError::Degenerate);
    }
    Ok(sxy / sxx)
}

/// Fits on the largest half of the grid (by `n`), but never fewer than 3 points.
pub fn fit_exponent_tail(points: &[(f64, f64)]) -> Result<f64, FitError> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let keep = sorted.len().div_ceil(2).max(3).min(sorted.len());
    fit_exponent(&sorted[sorted.len() - keep..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_powers() {
        let quad: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0].iter().map(|&n| (n, 7.0 * n * n)).collect();
        assert!((fit_exponent(&quad).unwrap() - 2.0).abs() < 1e-12);
        let lin: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0].iter().map(|&n| (n, 3.0 * n)).collect();
        assert!((fit_exponent(&lin).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(fit_exponent(&[(1.0, 1.0), (2.0, 2.0)]), Err(FitError::TooFewPoints(2)));
        assert!(matches!(fit_exponent(&[(1.0, 0.0), (2.0, 1.0), (3.0, 1.0)]), Err(FitError::NonPositive(..))));
        assert_eq!(fit_exponent(&[(2.0, 1.0), (2.0, 3.0), (2.0, 5.0)]), Err(FitError::Degenerate));
    }

    #[test]
    fn tail_uses_largest_points() {
        // small-n transient: first two points are off the n^2 line
        let pts = vec![(1.0, 100.0), (2.0, 100.0), (4.0, 16.0), (8.0, 64.0), (16.0, 256.0)];
        assert!((fit_exponent_tail(&pts).unwrap() - 2.0).abs() < 1e-12);
    }
}
