use super::MetricsError;

/// Sample Pearson correlation.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, MetricsError> {
    if xs.len() != ys.len() {
        return Err(MetricsError::DegenerateInput(format!("lengths {} and {} differ", xs.len(), ys.len())));
    }
    let n = xs.len();
    if n < 2 {
        return Err(MetricsError::DegenerateInput(format!("need at least 2 points, got {n}")));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(xs), mean(ys));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MetricsError::DegenerateInput("zero variance".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks by descending score; tied scores share their mean rank.
pub fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[b].total_cmp(&xs[a]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let mean_rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = mean_rank;
        }
        i = j + 1;
    }
    out
}

/// Pearson correlation of the two rankings and the mean absolute rank
/// difference.
pub fn rank_compare(xs: &[f64], ys: &[f64]) -> Result<(f64, f64), MetricsError> {
    let (rx, ry) = (ranks(xs), ranks(ys));
    let r = pearson(&rx, &ry)?;
    let diff = rx.iter().zip(&ry).map(|(a, b)| (a - b).abs()).sum::<f64>() / rx.len() as f64;
    Ok((r, diff))
}
