//! Empirical distribution checks: Kolmogorov-Smirnov, means, correlation and
//! the pass/fail rules used by the experiments.

use serde::Serialize;

use crate::error::{LabError, Result};

/// One-sample KS statistic `sup |F_m - F|` and its asymptotic p-value.
///
/// `sample` need not be sorted; the supremum is evaluated on both sides of
/// every jump of the empirical CDF.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let values: Vec<f64> = sorted.iter().map(|&x| cdf(x)).collect();
    ks_sorted(&values)
}

/// KS statistic when the reference CDF has already been evaluated at the
/// sorted sample points.
pub fn ks_sorted(cdf_at_sorted: &[f64]) -> Result<(f64, f64)> {
    let m = cdf_at_sorted.len();
    if m == 0 {
        return Err(LabError::SampleTooSmall { needed: 1, got: 0 });
    }
    let mf = m as f64;
    let mut d = 0.0f64;
    for (i, &f) in cdf_at_sorted.iter().enumerate() {
        let f = f.clamp(0.0, 1.0);
        d = d.max((i as f64 + 1.0) / mf - f).max(f - i as f64 / mf);
    }
    let d = d.min(1.0);
    Ok((d, kolmogorov_q(mf.sqrt() * d)))
}

/// `Q(t) = P(sup |B| > t) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 t^2}`.
pub fn kolmogorov_q(t: f64) -> f64 {
    if t < 0.2 {
        return 1.0;
    }
    let mut acc = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * t * t).exp();
        acc += if k % 2 == 1 { term } else { -term };
        if term < 1e-10 {
            break;
        }
    }
    (2.0 * acc).clamp(0.0, 1.0)
}

/// Mean and standard error `s / sqrt(m)` with the unbiased variance.
pub fn mean_ci(sample: &[f64]) -> Result<(f64, f64)> {
    let m = sample.len();
    if m < 2 {
        return Err(LabError::SampleTooSmall { needed: 2, got: m });
    }
    let mean = sample.iter().sum::<f64>() / m as f64;
    let var = sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    Ok((mean, (var / m as f64).sqrt()))
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(LabError::InvalidArgument(format!("lengths {} and {} differ", x.len(), y.len())));
    }
    let m = x.len();
    if m < 3 {
        return Err(LabError::SampleTooSmall { needed: 3, got: m });
    }
    let mx = x.iter().sum::<f64>() / m as f64;
    let my = y.iter().sum::<f64>() / m as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(LabError::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len();
    if m % 2 == 1 {
        s[m / 2]
    } else {
        0.5 * (s[m / 2 - 1] + s[m / 2])
    }
}

/// Pearson chi-square of the 2x2 table obtained by splitting both samples at
/// their medians (1 degree of freedom), with its p-value.
pub fn quadrant_chi_square(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(LabError::InvalidArgument(format!("lengths {} and {} differ", x.len(), y.len())));
    }
    if x.len() < 4 {
        return Err(LabError::SampleTooSmall { needed: 4, got: x.len() });
    }
    let (mx, my) = (median(x), median(y));
    let mut table = [[0.0f64; 2]; 2];
    for (a, b) in x.iter().zip(y) {
        table[(*a > mx) as usize][(*b > my) as usize] += 1.0;
    }
    let total = x.len() as f64;
    let rows = [table[0][0] + table[0][1], table[1][0] + table[1][1]];
    let cols = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
    if rows.contains(&0.0) || cols.contains(&0.0) {
        return Err(LabError::ZeroVariance);
    }
    let mut chi = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let e = rows[i] * cols[j] / total;
            chi += (table[i][j] - e).powi(2) / e;
        }
    }
    // chi-square with one degree of freedom: P(X > c) = erfc(sqrt(c / 2))
    Ok((chi, crate::special::erfc((chi / 2.0).sqrt())))
}

/// Asymptotic 1% critical value of `sqrt(m) D`.
pub const KS_CRITICAL: f64 = 1.63;

/// Pass/fail settings shared by all experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    /// Floor on the KS threshold absorbing finite-n and finite-p bias.
    pub allowance: f64,
    /// Floor on the correlation threshold.
    pub corr_allowance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { allowance: 0.05, corr_allowance: 0.05 }
    }
}

impl Tolerances {
    pub fn ks_threshold(&self, m: usize) -> f64 {
        (KS_CRITICAL / (m as f64).sqrt()).max(self.allowance)
    }

    pub fn corr_threshold(&self, m: usize) -> f64 {
        (4.0 / (m as f64).sqrt()).max(self.corr_allowance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// One line of an experiment report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StatReport {
    pub name: String,
    pub sample_size: usize,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub mean: Option<f64>,
    pub std_err: Option<f64>,
    pub threshold: f64,
    pub verdict: Verdict,
    pub notes: String,
}

impl StatReport {
    /// KS of `sample` against `cdf`; passes if `D <= tol.ks_threshold(m)`.
    pub fn ks(name: impl Into<String>, sample: &[f64], cdf: impl Fn(f64) -> f64, tol: &Tolerances) -> Result<Self> {
        let (d, p) = ks_statistic(sample, cdf)?;
        Ok(Self::ks_from(name, sample, d, p, tol))
    }

    pub fn ks_from(name: impl Into<String>, sample: &[f64], d: f64, p: f64, tol: &Tolerances) -> Self {
        let threshold = tol.ks_threshold(sample.len());
        let (mean, std_err) = mean_ci(sample).map_or((None, None), |(a, b)| (Some(a), Some(b)));
        Self {
            name: name.into(),
            sample_size: sample.len(),
            statistic: d,
            p_value: Some(p),
            mean,
            std_err,
            threshold,
            verdict: Verdict::from_bool(d <= threshold),
            notes: String::new(),
        }
    }

    /// Pearson correlation; passes if `|r| <= tol.corr_threshold(m)`. The
    /// quadrant chi-square p-value is reported alongside.
    pub fn correlation(name: impl Into<String>, x: &[f64], y: &[f64], tol: &Tolerances) -> Result<Self> {
        let r = pearson(x, y)?;
        let threshold = tol.corr_threshold(x.len());
        let quadrant = quadrant_chi_square(x, y).ok();
        Ok(Self {
            name: name.into(),
            sample_size: x.len(),
            statistic: r,
            p_value: quadrant.map(|(_, p)| p),
            mean: None,
            std_err: None,
            threshold,
            verdict: Verdict::from_bool(r.abs() <= threshold),
            notes: quadrant.map_or("quadrant chi-square undefined".into(), |(c, _)| format!("quadrant chi-square {c:.4}")),
        })
    }

    /// Mean of `sample` against `target`; passes if the difference is within
    /// `max(sigmas * stderr, rel * |target|)`.
    pub fn mean_against(
        name: impl Into<String>,
        sample: &[f64],
        target: f64,
        sigmas: f64,
        rel: f64,
    ) -> Result<Self> {
        let (mean, se) = mean_ci(sample)?;
        let threshold = (sigmas * se).max(rel * target.abs());
        let diff = (mean - target).abs();
        Ok(Self {
            name: name.into(),
            sample_size: sample.len(),
            statistic: diff,
            p_value: None,
            mean: Some(mean),
            std_err: Some(se),
            threshold,
            verdict: Verdict::from_bool(diff <= threshold),
            notes: format!("target {target}"),
        })
    }

    /// `value <= bound` (or `>=` when `at_least`), for fractions and estimates.
    pub fn bound(name: impl Into<String>, sample_size: usize, value: f64, bound: f64, at_least: bool) -> Self {
        let ok = if at_least { value >= bound } else { value <= bound };
        Self {
            name: name.into(),
            sample_size,
            statistic: value,
            p_value: None,
            mean: Some(value),
            std_err: None,
            threshold: bound,
            verdict: Verdict::from_bool(ok),
            notes: String::new(),
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        let notes = notes.into();
        if self.notes.is_empty() {
            self.notes = notes;
        } else {
            self.notes = format!("{}; {notes}", self.notes);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn single_point_against_uniform() {
        let (d, _) = ks_statistic(&[0.5], |x| x.clamp(0.0, 1.0)).unwrap();
        assert_eq!(d, 0.5);
        assert!(ks_statistic(&[], |x| x).is_err());
    }

    #[test]
    fn null_samples_stay_below_critical_value() {
        let m = 10_000;
        let mut worst = 0.0f64;
        for rep in 0..20 {
            let mut rng = substream(99, rep, Purpose::LimitLaw);
            let u: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            let (d, p) = ks_statistic(&u, |x| x.clamp(0.0, 1.0)).unwrap();
            assert!((0.0..=1.0).contains(&d) && (0.0..=1.0).contains(&p));
            worst = worst.max(d);
        }
        assert!(worst < 1.95 / (m as f64).sqrt());
    }

    #[test]
    fn kolmogorov_tail_values() {
        // reference values of the Kolmogorov distribution
        assert!((kolmogorov_q(1.36) - 0.0494).abs() < 5e-4);
        assert!((kolmogorov_q(1.63) - 0.0098).abs() < 5e-4);
        assert_eq!(kolmogorov_q(0.0), 1.0);
    }

    #[test]
    fn mean_ci_examples() {
        assert_eq!(mean_ci(&[1.0, 1.0, 1.0]).unwrap(), (1.0, 0.0));
        assert_eq!(mean_ci(&[0.0, 2.0]).unwrap(), (1.0, 1.0));
        assert_eq!(mean_ci(&[2.0, 0.0]).unwrap(), mean_ci(&[0.0, 2.0]).unwrap());
        assert!(mean_ci(&[1.0]).is_err());
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&x, &[1.0; 4]).unwrap_err(), LabError::ZeroVariance);

        let mut rng = substream(5, 0, Purpose::LimitLaw);
        let mut draw = || -> f64 { let z: f64 = StandardNormal.sample(&mut rng); z.abs() };
        let a: Vec<f64> = (0..10_000).map(|_| draw()).collect();
        let b: Vec<f64> = (0..10_000).map(|_| draw()).collect();
        assert!(pearson(&a, &b).unwrap().abs() < 0.04);
        let (_, p) = quadrant_chi_square(&a, &b).unwrap();
        assert!(p > 0.001);
        let (_, p) = quadrant_chi_square(&a, &a).unwrap();
        assert!(p < 1e-10);
    }

    #[test]
    fn verdict_rules() {
        let tol = Tolerances::default();
        assert!((tol.ks_threshold(100) - 0.163).abs() < 1e-15);
        assert_eq!(tol.ks_threshold(1_000_000), 0.05);
        let r = StatReport::mean_against("m", &[0.0, 2.0], 1.5, 3.0, 0.0).unwrap();
        assert!(r.passed());
        let r = StatReport::bound("frac", 10, 0.9, 0.95, true);
        assert!(!r.passed());
    }

    proptest! {
        #[test]
        fn ks_invariant_under_monotone_transform(
            raw in proptest::collection::vec(0.001f64..0.999, 1..200)
        ) {
            let (d1, _) = ks_statistic(&raw, |x| x.clamp(0.0, 1.0)).unwrap();
            // x -> x^3 is strictly increasing on (0, 1); push the CDF through it
            let moved: Vec<f64> = raw.iter().map(|x| x.powi(3)).collect();
            let (d2, _) = ks_statistic(&moved, |y| y.clamp(0.0, 1.0).cbrt()).unwrap();
            prop_assert!((d1 - d2).abs() < 1e-12);
        }
    }
}
