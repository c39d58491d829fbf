//! Ordinary least squares with full inference statistics.
//!
//! The solver is a Householder QR decomposition with column pivoting.
//! Numerically rank-deficient systems drop the pivoted-out columns, record
//! them on the model and proceed. The rank tolerance is
//! `n * machine_epsilon * max column norm`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::calendar::SegmentKey;
use crate::error::{Error, Result};
use crate::features::{ColumnDescriptor, DesignMatrix, LagSpec, ScenarioLevel};
use crate::stats;

/// A fitted segment model: coefficients with their inference statistics,
/// goodness-of-fit summary and full provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedModel {
    pub segment: SegmentKey,
    pub scenario: ScenarioLevel,
    pub spec: LagSpec,
    /// Retained columns, aligned with the coefficient vectors.
    pub columns: Vec<ColumnDescriptor>,
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// `coef / se`; infinite when the fit is exact (zero standard error).
    #[serde(with = "crate::serde_f64::vec")]
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    /// Observation count.
    pub n: usize,
    /// Retained column count, intercept included.
    pub k: usize,
    pub rss: f64,
    /// `RSS / (n - k)`.
    pub sigma2: f64,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    #[serde(with = "crate::serde_f64")]
    pub f_statistic: f64,
    #[serde(with = "crate::serde_f64")]
    pub prob_f: f64,
    #[serde(with = "crate::serde_f64")]
    pub aic: f64,
    #[serde(with = "crate::serde_f64")]
    pub bic: f64,
    pub residuals: Vec<f64>,
    /// Columns removed because the system was numerically rank deficient.
    pub dropped_columns: Vec<ColumnDescriptor>,
}

impl FittedModel {
    /// The fitted coefficient of a column, if retained.
    pub fn coefficient(&self, descriptor: &ColumnDescriptor) -> Option<f64> {
        self.columns
            .iter()
            .position(|c| c == descriptor)
            .map(|j| self.coefficients[j])
    }

    /// Calendar dummies retained by the model, in column order.
    pub fn dummy_hours(&self) -> Vec<crate::calendar::HourOfWeek> {
        self.columns
            .iter()
            .filter_map(|c| match c {
                ColumnDescriptor::CalendarDummy(h) => Some(*h),
                _ => None,
            })
            .collect()
    }

    /// In-sample style prediction over a design matrix that contains at
    /// least the model's columns (matched by descriptor).
    pub fn predict(&self, matrix: &DesignMatrix) -> Result<Vec<f64>> {
        let index: Vec<usize> = self
            .columns
            .iter()
            .map(|c| {
                matrix.column_index(c).ok_or_else(|| {
                    Error::InvalidInput(format!("design matrix lacks model column {c}"))
                })
            })
            .collect::<Result<_>>()?;
        Ok((0..matrix.rows())
            .map(|i| {
                index
                    .iter()
                    .zip(&self.coefficients)
                    .map(|(&j, &b)| matrix.x[(i, j)] * b)
                    .sum()
            })
            .collect())
    }
}

/// Pivoted least-squares solution on retained columns.
pub(crate) struct Lstsq {
    /// Original column indices kept, ascending.
    pub retained: Vec<usize>,
    /// Original column indices dropped by rank detection, ascending.
    pub dropped: Vec<usize>,
    /// Coefficients aligned with `retained`.
    pub beta: Vec<f64>,
    /// Diagonal of `(X_retained^T X_retained)^{-1}`, aligned with `retained`.
    pub xtx_inv_diag: Vec<f64>,
    pub rss: f64,
}

/// Least squares via column-pivoted Householder QR. Requires `x.nrows() >=
/// x.ncols()` and finite entries; detects numerical rank and re-solves on the
/// retained columns when deficient.
pub(crate) fn solve_lstsq(x: &DMatrix<f64>, y: &DVector<f64>) -> Lstsq {
    let n = x.nrows();
    let k = x.ncols();
    debug_assert!(n >= k && k > 0);

    let max_col_norm = (0..k)
        .map(|j| x.column(j).norm())
        .fold(0.0f64, f64::max);
    let tol = n as f64 * f64::EPSILON * max_col_norm;

    let cqr = x.clone().col_piv_qr();
    let r = cqr.r();

    // piv[slot] = original column held at that pivot slot.
    let mut piv = DVector::from_iterator(k, 0..k);
    cqr.p().permute_rows(&mut piv);

    // Pivoting places the largest remaining element first, so the first tiny
    // diagonal entry marks the numerical rank.
    let mut rank = k;
    for j in 0..k {
        if r[(j, j)].abs() < tol {
            rank = j;
            break;
        }
    }

    if rank < k {
        let mut retained: Vec<usize> = (0..rank).map(|j| piv[j]).collect();
        retained.sort_unstable();
        let dropped: Vec<usize> = (0..k).filter(|j| !retained.contains(j)).collect();
        if retained.is_empty() {
            // Completely degenerate system: zero coefficients, full residual.
            return Lstsq {
                retained,
                dropped,
                beta: Vec::new(),
                xtx_inv_diag: Vec::new(),
                rss: y.iter().map(|v| v * v).sum(),
            };
        }
        let x_sub = DMatrix::from_fn(n, retained.len(), |i, j| x[(i, retained[j])]);
        let sub = solve_lstsq(&x_sub, y);
        // Compose index maps; the sub-solve may in principle drop more.
        let mut final_retained: Vec<usize> = sub.retained.iter().map(|&j| retained[j]).collect();
        let extra_dropped: Vec<usize> = sub.dropped.iter().map(|&j| retained[j]).collect();
        let mut final_dropped = dropped;
        final_dropped.extend(extra_dropped);
        final_dropped.sort_unstable();
        final_retained.sort_unstable();
        return Lstsq {
            retained: final_retained,
            dropped: final_dropped,
            beta: sub.beta,
            xtx_inv_diag: sub.xtx_inv_diag,
            rss: sub.rss,
        };
    }

    // Full rank: solve R z = (Q^T y)[..k], then un-permute.
    let mut qty = y.clone();
    cqr.q_tr_mul(&mut qty);
    let mut z = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = qty[i];
        for j in i + 1..k {
            s -= r[(i, j)] * z[j];
        }
        z[i] = s / r[(i, i)];
    }

    // U = R^{-1} (upper triangular), built column by column by back substitution.
    let mut u = DMatrix::zeros(k, k);
    for col in 0..k {
        for i in (0..=col).rev() {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for j in i + 1..=col {
                s -= r[(i, j)] * u[(j, col)];
            }
            u[(i, col)] = s / r[(i, i)];
        }
    }

    let mut beta = vec![0.0; k];
    let mut xtx_inv_diag = vec![0.0; k];
    for slot in 0..k {
        let orig = piv[slot];
        beta[orig] = z[slot];
        // [(X^T X)^{-1}]_{orig,orig} = row `slot` of R^{-1} squared and summed.
        xtx_inv_diag[orig] = (slot..k).map(|m| u[(slot, m)] * u[(slot, m)]).sum();
    }

    let rss = (k..n).map(|i| qty[i] * qty[i]).sum::<f64>();

    Lstsq {
        retained: (0..k).collect(),
        dropped: Vec::new(),
        beta,
        xtx_inv_diag,
        rss,
    }
}

/// Inference statistics for a least-squares system. `rss_base` adds residual
/// sum of squares living outside the supplied system (used when fitting in a
/// reduced space), `n_obs` is the real observation count and `tss` the total
/// sum of squares of the real target about its mean.
pub(crate) struct FitCore {
    pub columns: Vec<ColumnDescriptor>,
    pub dropped: Vec<ColumnDescriptor>,
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub t_values: Vec<f64>,
    pub p_values: Vec<f64>,
    pub n: usize,
    pub k: usize,
    pub rss: f64,
    pub sigma2: f64,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub f_statistic: f64,
    pub prob_f: f64,
    pub aic: f64,
    pub bic: f64,
    pub retained_indices: Vec<usize>,
}

pub(crate) fn fit_system(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    rss_base: f64,
    n_obs: usize,
    tss: f64,
    columns: &[ColumnDescriptor],
) -> Result<FitCore> {
    debug_assert_eq!(x.ncols(), columns.len());
    if n_obs <= columns.len() {
        return Err(Error::InsufficientData {
            rows: n_obs,
            columns: columns.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "design matrix contains non-finite values".into(),
        ));
    }

    let solution = solve_lstsq(x, y);
    let k = solution.retained.len();
    if k == 0 {
        return Err(Error::InsufficientData { rows: n_obs, columns: 0 });
    }
    let rss = solution.rss + rss_base;
    let df = n_obs - k;
    let sigma2 = rss / df as f64;

    let mut standard_errors = Vec::with_capacity(k);
    let mut t_values = Vec::with_capacity(k);
    let mut p_values = Vec::with_capacity(k);
    for j in 0..k {
        let se = (sigma2 * solution.xtx_inv_diag[j]).sqrt();
        let coef = solution.beta[j];
        let (t, p) = if se > 0.0 {
            let t = coef / se;
            (t, stats::t_pvalue(t, df)?)
        } else if coef == 0.0 {
            (0.0, 1.0)
        } else {
            (coef.signum() * f64::INFINITY, 0.0)
        };
        standard_errors.push(se);
        t_values.push(t);
        p_values.push(p);
    }

    let r_squared = if tss > 0.0 {
        1.0 - rss / tss
    } else if rss <= f64::EPSILON * n_obs as f64 {
        1.0
    } else {
        0.0
    };
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (n_obs as f64 - 1.0) / df as f64;

    let (f_statistic, prob_f) = if k >= 2 {
        let f = (r_squared / (k as f64 - 1.0)) / ((1.0 - r_squared) / df as f64);
        let prob = stats::f_survival(f, k - 1, df)?;
        (f, prob)
    } else {
        (f64::NAN, f64::NAN)
    };

    let (aic, bic) = stats::information_criteria(rss, n_obs, k)?;

    Ok(FitCore {
        columns: solution.retained.iter().map(|&j| columns[j]).collect(),
        dropped: solution.dropped.iter().map(|&j| columns[j]).collect(),
        coefficients: solution.beta,
        standard_errors,
        t_values,
        p_values,
        n: n_obs,
        k,
        rss,
        sigma2,
        r_squared,
        adj_r_squared,
        f_statistic,
        prob_f,
        aic,
        bic,
        retained_indices: solution.retained,
    })
}

/// Fits ordinary least squares on a design matrix and attaches provenance.
pub fn fit_ols(
    matrix: &DesignMatrix,
    segment: SegmentKey,
    scenario: ScenarioLevel,
    spec: LagSpec,
) -> Result<FittedModel> {
    let n = matrix.rows();
    let y_mean = matrix.y.mean();
    let tss: f64 = matrix.y.iter().map(|v| (v - y_mean) * (v - y_mean)).sum();
    let core = fit_system(&matrix.x, &matrix.y, 0.0, n, tss, &matrix.columns)?;

    let mut residuals = Vec::with_capacity(n);
    for i in 0..n {
        let pred: f64 = core
            .retained_indices
            .iter()
            .zip(&core.coefficients)
            .map(|(&j, &b)| matrix.x[(i, j)] * b)
            .sum();
        residuals.push(matrix.y[i] - pred);
    }

    Ok(FittedModel {
        segment,
        scenario,
        spec,
        columns: core.columns,
        coefficients: core.coefficients,
        standard_errors: core.standard_errors,
        t_values: core.t_values,
        p_values: core.p_values,
        n: core.n,
        k: core.k,
        rss: core.rss,
        sigma2: core.sigma2,
        r_squared: core.r_squared,
        adj_r_squared: core.adj_r_squared,
        f_statistic: core.f_statistic,
        prob_f: core.prob_f,
        aic: core.aic,
        bic: core.bic,
        residuals,
        dropped_columns: core.dropped,
    })
}
