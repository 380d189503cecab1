//! Least-squares fits used to read rates and convergence orders off runs.

/// Ordinary least-squares slope of `y` against `x`.
pub fn linear_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "fit needs paired samples");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    sxy / sxx
}

/// Exponential rate of `|y|`: the slope of `ln |y|` against `t`.
///
/// Samples with `y = 0` are skipped.
pub fn log_slope(t: &[f64], y: &[f64]) -> f64 {
    let (ts, ls): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(y)
        .filter(|(_, v)| **v != 0.0)
        .map(|(&a, &b)| (a, b.abs().ln()))
        .unzip();
    linear_slope(&ts, &ls)
}

/// Exponential rate of the envelope of `y`: fitted through the local maxima
/// of `|y|` when the signal oscillates, through all samples otherwise.
pub fn envelope_rate(t: &[f64], y: &[f64]) -> f64 {
    let mut pt = Vec::new();
    let mut py = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        let (a, b, c) = (y[i - 1].abs(), y[i].abs(), y[i + 1].abs());
        if b > a && b >= c {
            pt.push(t[i]);
            py.push(b);
        }
    }
    if pt.len() >= 3 {
        log_slope(&pt, &py)
    } else {
        log_slope(t, y)
    }
}

/// Observed convergence order: slope of `ln err` against `ln h`.
pub fn order_fit(h: &[f64], err: &[f64]) -> f64 {
    let lh: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let le: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    linear_slope(&lh, &le)
}

/// Orders between consecutive refinement levels, `ln(e_k / e_{k+1}) / ln(h_k / h_{k+1})`.
pub fn pairwise_orders(h: &[f64], err: &[f64]) -> Vec<f64> {
    h.windows(2)
        .zip(err.windows(2))
        .map(|(hw, ew)| (ew[0] / ew[1]).ln() / (hw[0] / hw[1]).ln())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_rate_and_order() {
        let t: Vec<f64> = (0..50).map(|k| k as f64 * 0.1).collect();
        let y: Vec<f64> = t.iter().map(|&s| -3.0 * (0.7 * s).exp()).collect();
        assert!((log_slope(&t, &y) - 0.7).abs() < 1e-12);

        let w: Vec<f64> = t
            .iter()
            .map(|&s| (-0.3 * s).exp() * (4.0 * s).cos())
            .collect();
        assert!((envelope_rate(&t, &w) + 0.3).abs() < 0.05);

        let h = [0.1, 0.05, 0.025];
        let e: Vec<f64> = h.iter().map(|v: &f64| 2.0 * v.powi(4)).collect();
        assert!((order_fit(&h, &e) - 4.0).abs() < 1e-12);
        for o in pairwise_orders(&h, &e) {
            assert!((o - 4.0).abs() < 1e-12);
        }
    }
}
