use num_bigint::BigUint;

/// log*_q(n): how many times log_q must be applied before the value drops to
/// at most 1. Exact, via the tower q, q^q, q^(q^q), ...
pub fn log_star(q: u64, n: &BigUint) -> u32 {
    let one = BigUint::from(1u32);
    let mut k = 0;
    // threshold_k = q↑↑k, the largest n with log* ≤ k
    let mut threshold = one.clone();
    while n > &threshold {
        k += 1;
        match u32::try_from(&threshold) {
            Ok(e) if e <= 1 << 20 => threshold = BigUint::from(q).pow(e),
            _ => return k, // the next threshold has more than a million digits
        }
    }
    k
}

/// (2q)^{log*_q(n)}.
pub fn log_star_factor(q: u64, n: &BigUint) -> BigUint {
    BigUint::from(2 * q).pow(log_star(q, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let b = |n: u64| BigUint::from(n);
        assert_eq!(log_star(2, &b(1)), 0);
        assert_eq!(log_star(2, &b(2)), 1);
        assert_eq!(log_star(2, &b(3)), 2);
        assert_eq!(log_star(2, &b(16)), 3);
        assert_eq!(log_star(2, &b(17)), 4);
        assert_eq!(log_star(2, &b(65536)), 4);
        assert_eq!(log_star(2, &b(65537)), 5);
        assert_eq!(log_star_factor(2, &b(16)), b(64));
    }
}
