//! Distribution tails, information criteria and the quantile rule shared by
//! the cleaning and evaluation stages.
//!
//! Tail probabilities are computed directly through the regularized
//! incomplete beta function rather than as `1 - CDF`, which keeps extreme
//! tails accurate down to the f64 underflow limit (values below ~1e-300
//! underflow to 0).

use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Two-sided p-value of a Student-t statistic with `df` degrees of freedom:
/// `P(|T| >= |t|) = I_x(df/2, 1/2)` with `x = df / (df + t^2)`.
pub fn t_pvalue(t: f64, df: usize) -> Result<f64> {
    if df < 1 {
        return Err(Error::InvalidInput(format!(
            "t distribution needs df >= 1, got {df}"
        )));
    }
    if t.is_nan() {
        return Err(Error::InvalidInput("t statistic is NaN".into()));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let v = df as f64;
    let x = v / (v + t * t);
    Ok(beta_reg(v / 2.0, 0.5, x))
}

/// Upper tail of the F distribution with `(df1, df2)` degrees of freedom:
/// `P(F > f) = I_x(df2/2, df1/2)` with `x = df2 / (df2 + df1 * f)`.
pub fn f_survival(f: f64, df1: usize, df2: usize) -> Result<f64> {
    if df1 < 1 || df2 < 1 {
        return Err(Error::InvalidInput(format!(
            "F distribution needs df >= 1, got ({df1}, {df2})"
        )));
    }
    if f.is_nan() {
        return Err(Error::InvalidInput("F statistic is NaN".into()));
    }
    if f <= 0.0 {
        return Ok(1.0);
    }
    if f.is_infinite() {
        return Ok(0.0);
    }
    let (d1, d2) = (df1 as f64, df2 as f64);
    let x = d2 / (d2 + d1 * f);
    Ok(beta_reg(d2 / 2.0, d1 / 2.0, x))
}

/// Gaussian-likelihood information criteria:
/// `AIC = n ln(RSS/n) + 2k`, `BIC = n ln(RSS/n) + k ln(n)`.
///
/// An exact fit (`rss == 0`) is the defined limit of both formulas; it is
/// reported as negative infinity so that criterion comparisons treat it as
/// the best attainable value.
pub fn information_criteria(rss: f64, n: usize, k: usize) -> Result<(f64, f64)> {
    if k < 1 || n <= k {
        return Err(Error::InsufficientData { rows: n, columns: k });
    }
    if !(rss >= 0.0) {
        return Err(Error::InvalidInput(format!("RSS must be >= 0, got {rss}")));
    }
    if rss == 0.0 {
        return Ok((f64::NEG_INFINITY, f64::NEG_INFINITY));
    }
    let nf = n as f64;
    let kf = k as f64;
    let base = nf * (rss / nf).ln();
    Ok((base + 2.0 * kf, base + kf * nf.ln()))
}

/// Quantile by linear interpolation of order statistics at rank `(n-1) * p`,
/// over an already sorted slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let rank = (sorted.len() - 1) as f64 * p;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = rank - lo as f64;
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Quantile of an unsorted sample; errors on empty input or `p` outside [0, 1].
pub fn quantile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidInput("quantile of an empty sample".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("probability {p} outside [0, 1]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, p))
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance; zero for fewer than two values.
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn t_pvalue_at_zero_is_one() {
        for df in [1, 5, 30, 1000] {
            assert_eq!(t_pvalue(0.0, df).unwrap(), 1.0);
        }
    }

    #[test]
    fn t_pvalue_classic_table_value() {
        // t = 2.228 is the 5% two-sided critical value at df = 10.
        let p = t_pvalue(2.228, 10).unwrap();
        assert_abs_diff_eq!(p, 0.0500, epsilon = 5e-4);
    }

    #[test]
    fn t_pvalue_extreme_tail() {
        assert!(t_pvalue(100.0, 30).unwrap() < 1e-12);
        assert_eq!(t_pvalue(f64::INFINITY, 5).unwrap(), 0.0);
    }

    #[test]
    fn t_pvalue_is_symmetric_and_monotone() {
        let df = 7;
        let mut last = 1.0;
        for i in 1..=100 {
            let t = i as f64 * 0.1;
            let p = t_pvalue(t, df).unwrap();
            assert_eq!(p, t_pvalue(-t, df).unwrap());
            assert!(p < last, "p must decrease with |t|");
            last = p;
        }
    }

    #[test]
    fn t_pvalue_rejects_bad_df() {
        assert!(t_pvalue(1.0, 0).is_err());
    }

    #[test]
    fn f_survival_boundaries() {
        assert_eq!(f_survival(0.0, 3, 10).unwrap(), 1.0);
        assert_eq!(f_survival(-1.0, 3, 10).unwrap(), 1.0);
        assert!(f_survival(1e6, 3, 10).unwrap() < 1e-9);
    }

    #[test]
    fn f_survival_median_of_f11_is_at_one() {
        // F(1,1) has median 1: P(F > 1) = 0.5.
        assert_abs_diff_eq!(f_survival(1.0, 1, 1).unwrap(), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn information_criteria_examples() {
        let (aic, bic) = information_criteria(100.0, 100, 2).unwrap();
        assert_abs_diff_eq!(aic, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bic, 2.0 * 100f64.ln(), epsilon = 1e-12);

        let (aic, _) = information_criteria(50.0, 200, 3).unwrap();
        assert_abs_diff_eq!(aic, 200.0 * 0.25f64.ln() + 6.0, epsilon = 1e-9);
        assert_abs_diff_eq!(aic, -271.2588722239781, epsilon = 1e-9);
    }

    #[test]
    fn information_criteria_penalty_is_monotone_in_k() {
        let (aic1, bic1) = information_criteria(80.0, 100, 2).unwrap();
        let (aic2, bic2) = information_criteria(80.0, 100, 4).unwrap();
        assert!(aic2 > aic1);
        assert!(bic2 > bic1);
    }

    #[test]
    fn information_criteria_exact_fit_sentinel() {
        let (aic, bic) = information_criteria(0.0, 100, 2).unwrap();
        assert_eq!(aic, f64::NEG_INFINITY);
        assert_eq!(bic, f64::NEG_INFINITY);
    }

    #[test]
    fn information_criteria_input_errors() {
        assert!(information_criteria(1.0, 5, 5).is_err());
        assert!(information_criteria(1.0, 5, 0).is_err());
        assert!(information_criteria(-1.0, 5, 2).is_err());
    }

    #[test]
    fn quantile_examples() {
        let e = [-2.0, -1.0, 0.0, 1.0, 2.0];
        assert_eq!(quantile(&e, 0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(quantile(&e, 0.1).unwrap(), -1.6, epsilon = 1e-12);
        assert_eq!(quantile(&e, 0.0).unwrap(), -2.0);
        assert_eq!(quantile(&e, 1.0).unwrap(), 2.0);
        assert!(quantile(&[], 0.5).is_err());
        assert!(quantile(&e, 1.5).is_err());
    }

    #[test]
    fn quantile_is_monotone_in_p() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(1..40);
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
            let mut last = f64::NEG_INFINITY;
            for i in 0..=20 {
                let q = quantile(&values, i as f64 / 20.0).unwrap();
                assert!(q >= last);
                last = q;
            }
        }
    }
}
