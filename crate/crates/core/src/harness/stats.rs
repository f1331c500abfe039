use serde::Serialize;

/// Bin `k` in `1..=bins` holding `p`, for intervals `((k-1)/bins, k/bins]`.
/// Zero goes to bin 1.
pub fn bin_index(p: f64, bins: usize) -> usize {
    let k = (p * bins as f64).ceil();
    if k.is_nan() || k < 1.0 {
        1
    } else {
        (k as usize).min(bins)
    }
}

pub fn bin_bounds(k: usize, bins: usize) -> (f64, f64) {
    ((k - 1) as f64 / bins as f64, k as f64 / bins as f64)
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    Some(xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64)
}

/// Population standard deviation.
pub fn population_stddev(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    Some((xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt())
}

/// Ranks starting at 1, ties share their average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = r;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let (mx, my) = (mean(x)?, mean(y)?);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation; `None` with fewer than two points or a
/// constant input.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    if x.len() < 2 {
        return None;
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Successes out of a total, with the fraction left empty when nothing was
/// observed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Tally {
    pub hits: usize,
    pub total: usize,
}

impl Tally {
    pub fn record(&mut self, hit: bool) {
        self.total += 1;
        self.hits += hit as usize;
    }

    pub fn fraction(&self) -> Option<f64> {
        (self.total > 0).then(|| self.hits as f64 / self.total as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_are_half_open() {
        assert_eq!(bin_index(0.0, 20), 1);
        assert_eq!(bin_index(0.05, 20), 1);
        assert_eq!(bin_index(0.050001, 20), 2);
        assert_eq!(bin_index(0.6, 20), 12);
        assert_eq!(bin_index(1.0, 20), 20);
        assert_eq!(bin_index(0.37, 1), 1);
    }

    #[test]
    fn rank_correlation() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!((spearman(&x, &[2.0, 4.0, 9.0, 16.0, 30.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman(&x, &[5.0, 4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!(spearman(&x, &[1.0; 5]).is_none());
        // scipy.stats.spearmanr([1,2,3,4,5],[1,3,2,5,4]) = 0.8
        assert!((spearman(&x, &[1.0, 3.0, 2.0, 5.0, 4.0]).unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn moments() {
        assert_eq!(sample_variance(&[1.0, 2.0, 3.0]), Some(1.0));
        assert_eq!(population_stddev(&[0.0, 1.0]), Some(0.5));
        assert_eq!(mean(&[]), None);
        let mut t = Tally::default();
        assert_eq!(t.fraction(), None);
        t.record(true);
        t.record(false);
        assert_eq!(t.fraction(), Some(0.5));
    }
}
