use super::ExperimentError;
use crate::randmodel::NormalizedCycleLaw;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistBin {
    pub center: f64,
    pub empirical: f64,
    pub model: f64,
}

pub fn mean(values: &[f64]) -> Result<f64, ExperimentError> {
    if values.is_empty() {
        return Err(ExperimentError::EmptyInput);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Density-normalised histogram with bins `[k w, (k+1) w)`, from the lowest
/// to the highest occupied bin, with the law's density at each center.
pub fn histogram(values: &[f64], width: f64, law: &NormalizedCycleLaw) -> Result<Vec<HistBin>, ExperimentError> {
    if values.is_empty() {
        return Err(ExperimentError::EmptyInput);
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(ExperimentError::Config(format!("bin width {width} must be positive")));
    }
    let keys: Vec<i64> = values.iter().map(|v| (v / width).floor() as i64).collect();
    let lo = *keys.iter().min().unwrap();
    let hi = *keys.iter().max().unwrap();
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for k in keys {
        counts[(k - lo) as usize] += 1;
    }
    let n = values.len() as f64;
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let center = ((lo + i as i64) as f64 + 0.5) * width;
            HistBin {
                center,
                empirical: c as f64 / (n * width),
                model: law.density(center.max(0.0)).unwrap_or(f64::NAN),
            }
        })
        .collect())
}

/// Kolmogorov-Smirnov distance `sup |F_n - F|`.
pub fn ks_statistic<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> Result<f64, ExperimentError> {
    if values.is_empty() {
        return Err(ExperimentError::EmptyInput);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < v.len() {
        // ties jump the empirical cdf in one step
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[i] {
            j += 1;
        }
        let f = cdf(v[i]);
        d = d.max((f - i as f64 / n).abs()).max(((j + 1) as f64 / n - f).abs());
        i = j + 1;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values_single_bin() {
        let h = histogram(&[0.42; 7], 0.1, &NormalizedCycleLaw).unwrap();
        assert_eq!(h.len(), 1);
        assert!((h[0].empirical - 10.0).abs() < 1e-12);
        assert!((h[0].center - 0.45).abs() < 1e-12);
    }

    #[test]
    fn model_column_at_one() {
        let h = histogram(&[0.95, 1.04], 0.1, &NormalizedCycleLaw).unwrap();
        let at_one = h.iter().find(|b| (b.center - 1.05).abs() < 1e-9).unwrap();
        assert!(at_one.model > 0.0);
        let h = histogram(&[0.99], 0.02, &NormalizedCycleLaw).unwrap();
        assert!((h[0].center - 0.99).abs() < 1e-12);
        let h = histogram(&[1.0], 2.0, &NormalizedCycleLaw).unwrap();
        // sqrt(pi) * erfc(1)
        assert!((h[0].model - 0.278_805_585_280_661_96).abs() < 1e-12);
    }

    #[test]
    fn histogram_area_is_one() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.7317).fract() * 2.0).collect();
        let h = histogram(&v, 0.05, &NormalizedCycleLaw).unwrap();
        let area: f64 = h.iter().map(|b| b.empirical * 0.05).sum();
        assert!((area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_trivial_cases() {
        let uniform = |x: f64| x.clamp(0.0, 1.0);
        assert!((ks_statistic(&[0.5], uniform).unwrap() - 0.5).abs() < 1e-15);
        assert!((ks_statistic(&[0.0; 5], |_| 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(ks_statistic(&[], uniform).is_err());
        assert!(mean(&[]).is_err());
    }
}
