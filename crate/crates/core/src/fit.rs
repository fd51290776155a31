//! Ordinary least squares on a single regressor.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1 for a perfect fit, NaN with fewer than two points.
    pub r_squared: f64,
    pub points: usize,
}

/// Fits `y ≈ slope · x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return LinearFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            r_squared: f64::NAN,
            points: n,
        };
    }
    let nf = n as f64;
    let mx = xs[..n].iter().sum::<f64>() / nf;
    let my = ys[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys).take(n) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    LinearFit {
        slope,
        intercept,
        r_squared,
        points: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = linear_fit(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]);
        assert_eq!((f.slope, f.intercept, f.r_squared), (2.0, 1.0, 1.0));
    }

    #[test]
    fn noisy_line_matches_hand_computation() {
        // Means are 1 and 1; sxx = 2, sxy = 4/3, syy = 14/9.
        let f = linear_fit(&[0.0, 1.0, 2.0], &[0.0, 5.0 / 3.0, 4.0 / 3.0]);
        assert!((f.slope - 2.0 / 3.0).abs() < 1e-15);
        assert!((f.intercept - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.r_squared - 4.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn too_few_points() {
        assert!(linear_fit(&[1.0], &[2.0]).r_squared.is_nan());
    }
}
