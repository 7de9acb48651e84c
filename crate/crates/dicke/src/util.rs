//! Small combinatorial helpers.

/// Exact binomial coefficient; `C(s, t) = 0` when `t > s`.
pub fn binom(s: usize, t: usize) -> u128 {
    if t > s {
        return 0;
    }
    let t = t.min(s - t);
    let mut acc: u128 = 1;
    for i in 0..t {
        acc = acc * (s - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Natural log of `C(s, t)`, computed in log space so large arguments do not
/// overflow. Returns `-inf` when `t > s`.
pub fn ln_binom(s: usize, t: usize) -> f64 {
    if t > s {
        return f64::NEG_INFINITY;
    }
    let t = t.min(s - t);
    (1..=t).map(|i| ((s - t + i) as f64 / i as f64).ln()).sum()
}

/// `C(s, t)` as a float: exact integers for small arguments, log space otherwise.
pub fn binom_f64(s: usize, t: usize) -> f64 {
    if s <= 100 {
        binom(s, t) as f64
    } else {
        ln_binom(s, t).exp()
    }
}

/// Number of bits needed to write every value in `0..=k`.
pub fn bits_for(k: usize) -> usize {
    (usize::BITS - k.leading_zeros()) as usize
}

pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

pub fn all_distinct(idx: &[usize]) -> bool {
    let mut v = idx.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}
