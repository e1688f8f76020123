//! Combinatorial helpers.

use std::ops::ControlFlow;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Visits every strictly increasing `k`-tuple of `0..n` in lexicographic
/// order until the callback breaks.
pub fn for_each_combination<B>(
    n: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> Option<B> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let ControlFlow::Break(b) = f(&idx) {
            return Some(b);
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Visits every ordered `k`-tuple of distinct elements of `0..n`
/// (lexicographic order over tuples).
pub fn for_each_arrangement(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, k, cur, used, f);
                cur.pop();
                used[i] = false;
            }
        }
    }
    if k > n {
        return;
    }
    let mut used = vec![false; n];
    rec(n, k, &mut Vec::with_capacity(k), &mut used, &mut f);
}

/// All ordered `k`-tuples of distinct elements of `0..n`, lexicographic.
pub fn arrangements(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_arrangement(n, k, |t| out.push(t.to_vec()));
    out
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than
/// two distinct sizes or a non-positive value.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
