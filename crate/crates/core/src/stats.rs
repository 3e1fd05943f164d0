//! Group-comparison statistics over simulation outcomes.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Significance level used for [`GroupComparison::significant`].
pub const ALPHA: f64 = 0.05;

fn check_finite(name: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidSample(format!(
            "{name} contains non-finite values"
        )))
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sum of squared deviations from the mean.
fn sum_sq_dev(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m) * (x - m)).sum()
}

/// Magnitude of Cohen's d with the pooled standard deviation.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidSample(format!(
            "cohen's d needs at least 2 values per group, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    check_finite("first sample", a)?;
    check_finite("second sample", b)?;
    let (ma, mb) = (mean(a), mean(b));
    let dof = (a.len() + b.len() - 2) as f64;
    let pooled = ((sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) / dof).sqrt();
    let diff = (ma - mb).abs();
    if pooled == 0.0 {
        return if diff == 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Undefined(
                "zero pooled standard deviation with unequal means",
            ))
        };
    }
    Ok(diff / pooled)
}

/// Ranks with ties replaced by their average rank (1-based), plus the tie
/// correction term `Σ (t³ − t)` over tie groups.
fn average_ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        let t = (end - start) as f64;
        ties += t * t * t - t;
        start = end;
    }
    (ranks, ties)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KruskalWallis {
    pub h: f64,
    pub p: f64,
    pub df: usize,
}

/// Kruskal-Wallis H with tie correction; p from the chi-square survival
/// function with `groups − 1` degrees of freedom.
pub fn kruskal_wallis(groups: &[&[f64]]) -> Result<KruskalWallis> {
    if groups.len() < 2 {
        return Err(Error::InvalidSample(
            "kruskal-wallis needs at least 2 groups".into(),
        ));
    }
    if groups.iter().any(|g| g.is_empty()) {
        return Err(Error::InvalidSample(
            "kruskal-wallis groups must be non-empty".into(),
        ));
    }
    for g in groups {
        check_finite("group", g)?;
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let n = pooled.len() as f64;
    let df = groups.len() - 1;
    let (ranks, ties) = average_ranks(&pooled);
    let correction = 1.0 - ties / (n * n * n - n);
    if correction <= 0.0 {
        // Every value identical.
        return Ok(KruskalWallis { h: 0.0, p: 1.0, df });
    }
    let mut offset = 0;
    let mut weighted = 0.0;
    for g in groups {
        let rank_sum: f64 = ranks[offset..offset + g.len()].iter().sum();
        weighted += rank_sum * rank_sum / g.len() as f64;
        offset += g.len();
    }
    let h = (12.0 / (n * (n + 1.0)) * weighted - 3.0 * (n + 1.0)) / correction;
    let h = h.max(0.0);
    let chi2 = ChiSquared::new(df as f64).expect("df >= 1");
    let p = chi2.sf(h).clamp(0.0, 1.0);
    Ok(KruskalWallis { h, p, df })
}

fn sign(a: f64, b: f64) -> i64 {
    match a.partial_cmp(&b) {
        Some(std::cmp::Ordering::Less) => -1,
        Some(std::cmp::Ordering::Greater) => 1,
        _ => 0,
    }
}

/// Kendall tau-b.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidSample(format!(
            "kendall tau needs paired samples, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InvalidSample(
            "kendall tau needs at least 2 pairs".into(),
        ));
    }
    check_finite("x", x)?;
    check_finite("y", y)?;
    let n = x.len();
    let (mut score, mut tied_x, mut tied_y) = (0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = sign(x[i], x[j]);
            let dy = sign(y[i], y[j]);
            if dx == 0 {
                tied_x += 1;
            }
            if dy == 0 {
                tied_y += 1;
            }
            score += dx * dy;
        }
    }
    let pairs = (n * (n - 1) / 2) as i64;
    let denom = (((pairs - tied_x) as f64) * ((pairs - tied_y) as f64)).sqrt();
    if denom == 0.0 {
        return Err(Error::Undefined("kendall tau with a constant vector"));
    }
    Ok((score as f64 / denom).clamp(-1.0, 1.0))
}

/// Pairwise comparison of two labelled samples.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupComparison {
    pub group_a: String,
    pub group_b: String,
    pub cohens_d: f64,
    pub kw_h: f64,
    pub kw_p: f64,
    pub significant: bool,
}

impl GroupComparison {
    pub fn new(group_a: &str, a: &[f64], group_b: &str, b: &[f64]) -> Result<Self> {
        let d = cohens_d(a, b)?;
        let kw = kruskal_wallis(&[a, b])?;
        Ok(GroupComparison {
            group_a: group_a.to_string(),
            group_b: group_b.to_string(),
            cohens_d: d,
            kw_h: kw.h,
            kw_p: kw.p,
            significant: kw.p < ALPHA,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cohens_d_examples() {
        assert_eq!(cohens_d(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert!((cohens_d(&[1.0, 2.0, 3.0], &[3.0, 4.0, 5.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(
            cohens_d(&[0.0, 0.0], &[1.0, 1.0]),
            Err(Error::Undefined(_))
        ));
        assert_eq!(cohens_d(&[4.0, 4.0], &[4.0, 4.0]).unwrap(), 0.0);
        assert!(cohens_d(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn kruskal_wallis_worked_example() {
        let kw = kruskal_wallis(&[&[1.0, 2.0, 3.0], &[10.0, 11.0, 12.0]]).unwrap();
        assert!((kw.h - 27.0 / 7.0).abs() < 1e-12);
        assert!((kw.p - 0.049534613435626915).abs() < 1e-9);
        assert_eq!(kw.df, 1);
    }

    #[test]
    fn kruskal_wallis_identical_values() {
        let kw = kruskal_wallis(&[&[2.0, 2.0], &[2.0, 2.0, 2.0]]).unwrap();
        assert_eq!((kw.h, kw.p), (0.0, 1.0));
        let kw = kruskal_wallis(&[&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]]).unwrap();
        assert!(kw.p > 0.99);
        assert!(kruskal_wallis(&[&[1.0]]).is_err());
        assert!(kruskal_wallis(&[&[1.0], &[]]).is_err());
    }

    #[test]
    fn kendall_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((kendall_tau(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((kendall_tau(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!((kendall_tau(&x, &[1.0, 3.0, 2.0, 4.0]).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            kendall_tau(&x, &[1.0, 1.0, 1.0, 1.0]),
            Err(Error::Undefined(_))
        ));
        assert!(kendall_tau(&x, &[1.0]).is_err());
    }

    #[test]
    fn comparison_flags_significance() {
        let c =
            GroupComparison::new("easy", &[1.0, 2.0, 3.0], "hard", &[10.0, 11.0, 12.0]).unwrap();
        assert!(c.significant);
        let c = GroupComparison::new("easy", &[1.0, 1.0], "hard", &[1.0, 1.0]).unwrap();
        assert_eq!(c.cohens_d, 0.0);
        assert!(!c.significant);
    }
}
