/// Ranks starting at 1, with tied values sharing their average rank.
pub fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Pearson correlation; `NaN` if either input is constant or the lengths
/// differ.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    if x.len() != y.len() || x.len() < 2 {
        return f64::NAN;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&ranks(x), &ranks(y))
}

/// Root-mean-square difference.
pub fn rms_difference(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    (sum / a.len() as f64).sqrt()
}

/// Abscissae where `y` changes sign, by linear interpolation. Samples
/// within `zero_tol` of zero are treated as exact zeros: a run of them counts
/// as one crossing, at its midpoint, if the values on either side have
/// opposite signs, and a zero that is merely touched is not a crossing.
pub fn zero_crossings(x: &[f64], y: &[f64], zero_tol: f64) -> Vec<f64> {
    let n = x.len().min(y.len());
    let mut out = Vec::new();
    let mut prev: Option<usize> = None;
    let mut i = 0;
    while i < n {
        if y[i].abs() <= zero_tol {
            let start = i;
            while i < n && y[i].abs() <= zero_tol {
                i += 1;
            }
            if let (Some(p), true) = (prev, i < n) {
                if y[p].signum() != y[i].signum() {
                    out.push(0.5 * (x[start] + x[i - 1]));
                }
            }
            prev = (i < n).then_some(i);
        } else {
            if let Some(p) = prev {
                if p + 1 == i && y[p].signum() != y[i].signum() {
                    out.push(x[p] - y[p] * (x[i] - x[p]) / (y[i] - y[p]));
                }
            }
            prev = Some(i);
        }
        i += 1;
    }
    out
}
