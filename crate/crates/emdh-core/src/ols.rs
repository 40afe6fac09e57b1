//! Ordinary least squares via Householder QR.
//!
//! QR is used instead of normal equations because the break-test design
//! matrix carries a time trend next to a shifted trend dummy, which is
//! nearly collinear when the candidate break sits close to either sample
//! end. Rank is checked explicitly from the R diagonal.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OlsError {
    #[error("{nobs} observations cannot identify {nparams} parameters")]
    TooFewObservations { nobs: usize, nparams: usize },
    #[error("design matrix is rank deficient at column {column}")]
    RankDeficient { column: usize },
}

/// A fitted least-squares regression.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coeffs: Vec<f64>,
    /// Standard error per coefficient from the OLS covariance
    /// `sigma2 * (X'X)^-1`.
    pub stderr: Vec<f64>,
    pub tstats: Vec<f64>,
    /// Residual variance, SSR / (nobs - nparams).
    pub sigma2: f64,
    pub rss: f64,
    pub r_squared: f64,
    pub nobs: usize,
    pub nparams: usize,
}

/// Fit `y ~ X` where `x` is row-major with `nobs` rows of `nparams`
/// columns. Requires `nobs > nparams` so the residual variance exists.
pub fn least_squares(
    x: &[f64],
    nobs: usize,
    nparams: usize,
    y: &[f64],
) -> Result<OlsFit, OlsError> {
    assert_eq!(x.len(), nobs * nparams, "design shape mismatch");
    assert_eq!(y.len(), nobs, "target length mismatch");
    if nobs <= nparams || nparams == 0 {
        return Err(OlsError::TooFewObservations { nobs, nparams });
    }

    // Column-major working copy; qty starts as y and is transformed along.
    let mut a = vec![0.0f64; nobs * nparams];
    for i in 0..nobs {
        for j in 0..nparams {
            a[j * nobs + i] = x[i * nparams + j];
        }
    }
    let mut qty = y.to_vec();

    // Householder factorization, applying each reflector to the remaining
    // columns and to y.
    let mut diag = vec![0.0f64; nparams];
    for k in 0..nparams {
        let (head, tail) = a.split_at_mut((k + 1) * nobs);
        let col = &mut head[k * nobs..];

        let norm = {
            let mut s = 0.0;
            for &v in &col[k..] {
                s += v * v;
            }
            s.sqrt()
        };
        let alpha = if col[k] >= 0.0 { -norm } else { norm };
        diag[k] = alpha;
        if norm == 0.0 {
            continue; // flagged by the rank check below
        }
        col[k] -= alpha;
        let vnorm2: f64 = col[k..].iter().map(|v| v * v).sum();
        if vnorm2 == 0.0 {
            continue;
        }

        for rest in tail.chunks_exact_mut(nobs) {
            let dot: f64 =
                col[k..].iter().zip(&rest[k..]).map(|(v, w)| v * w).sum();
            let f = 2.0 * dot / vnorm2;
            for (v, w) in col[k..].iter().zip(rest[k..].iter_mut()) {
                *w -= f * v;
            }
        }
        let dot: f64 = col[k..].iter().zip(&qty[k..]).map(|(v, w)| v * w).sum();
        let f = 2.0 * dot / vnorm2;
        for (v, w) in col[k..].iter().zip(qty[k..].iter_mut()) {
            *w -= f * v;
        }
    }

    // R is upper triangular: r[j][j] = diag[j], r[j][l] = a[l*nobs + j] for
    // l > j. Rank check against the largest diagonal magnitude.
    let max_diag = diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = f64::EPSILON * (nobs as f64) * max_diag;
    for (j, d) in diag.iter().enumerate() {
        if d.abs() <= tol {
            return Err(OlsError::RankDeficient { column: j });
        }
    }

    let r = |j: usize, l: usize| -> f64 {
        if j == l {
            diag[j]
        } else {
            a[l * nobs + j]
        }
    };

    // Back-substitution for the coefficients.
    let mut coeffs = vec![0.0f64; nparams];
    for j in (0..nparams).rev() {
        let mut acc = qty[j];
        #[allow(clippy::needless_range_loop)]
        for l in j + 1..nparams {
            acc -= r(j, l) * coeffs[l];
        }
        coeffs[j] = acc / diag[j];
    }

    // Residual sum of squares is the energy in the trailing rotated target.
    let rss: f64 = qty[nparams..].iter().map(|v| v * v).sum();
    let sigma2 = rss / (nobs - nparams) as f64;

    // (X'X)^-1 = R^-1 R^-T; diagonal entries come from the rows of R^-1.
    let mut rinv = vec![0.0f64; nparams * nparams];
    for col in 0..nparams {
        for j in (0..=col).rev() {
            let mut acc = if j == col { 1.0 } else { 0.0 };
            for l in j + 1..=col {
                acc -= r(j, l) * rinv[l * nparams + col];
            }
            rinv[j * nparams + col] = acc / diag[j];
        }
    }
    let mut stderr = Vec::with_capacity(nparams);
    let mut tstats = Vec::with_capacity(nparams);
    for j in 0..nparams {
        let cov_jj: f64 = (j..nparams).map(|l| rinv[j * nparams + l].powi(2)).sum();
        let se = (sigma2 * cov_jj).sqrt();
        stderr.push(se);
        tstats.push(coeffs[j] / se);
    }

    let mean_y = y.iter().sum::<f64>() / nobs as f64;
    let tss: f64 = y.iter().map(|v| (v - mean_y) * (v - mean_y)).sum();
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };

    Ok(OlsFit { coeffs, stderr, tstats, sigma2, rss, r_squared, nobs, nparams })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_line_is_recovered() {
        let nobs = 20;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..nobs {
            x.extend_from_slice(&[1.0, i as f64]);
            y.push(3.0 + 2.0 * i as f64);
        }
        let fit = least_squares(&x, nobs, 2, &y).unwrap();
        assert_abs_diff_eq!(fit.coeffs[0], 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(fit.coeffs[1], 2.0, epsilon = 1e-12);
        assert!(fit.rss < 1e-18);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn simple_regression_matches_closed_form() {
        // y on [1, x] has closed-form slope and slope variance.
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let ys = [1.2, 0.7, 2.9, 2.1, 4.4, 4.0, 5.9, 6.6];
        let n = xs.len();
        let mut design = Vec::new();
        for &x in &xs {
            design.extend_from_slice(&[1.0, x]);
        }
        let fit = least_squares(&design, n, 2, &ys).unwrap();

        let mx = xs.iter().sum::<f64>() / n as f64;
        let my = ys.iter().sum::<f64>() / n as f64;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let rss: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        let se_slope = (rss / (n - 2) as f64 / sxx).sqrt();

        assert_abs_diff_eq!(fit.coeffs[1], slope, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.coeffs[0], intercept, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.stderr[1], se_slope, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.tstats[1], slope / se_slope, epsilon = 1e-10);
    }

    #[test]
    fn duplicate_column_is_rank_deficient() {
        let nobs = 12;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..nobs {
            let v = (i as f64 * 0.7).sin();
            x.extend_from_slice(&[1.0, v, v]);
            y.push(v * 2.0 + 1.0);
        }
        assert!(matches!(
            least_squares(&x, nobs, 3, &y),
            Err(OlsError::RankDeficient { .. })
        ));
    }

    #[test]
    fn underdetermined_system_is_rejected() {
        let x = vec![1.0, 2.0, 1.0, 3.0];
        let y = vec![1.0, 2.0];
        assert!(matches!(
            least_squares(&x, 2, 2, &y),
            Err(OlsError::TooFewObservations { .. })
        ));
    }
}
