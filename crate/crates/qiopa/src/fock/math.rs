//! Small numeric helpers shared across the Fock-space code.

/// Natural log of n! via the log-gamma function.
pub(crate) fn ln_factorial(n: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// Compensated (Kahan) accumulator for long probability sums.
///
/// Tail deficits are differences of numbers close to 1; naive summation of
/// 10⁴–10⁵ grid cells loses exactly the digits those deficits live in.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum
    }
}

/// Kahan-compensated sum of a slice.
pub(crate) fn kahan_total(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_matches_direct_products() {
        let mut direct = 0.0f64;
        for n in 1..=30u64 {
            direct += (n as f64).ln();
            assert!((ln_factorial(n) - direct).abs() < 1e-10 * direct.max(1.0));
        }
        assert_eq!(ln_factorial(0), 0.0);
    }

    #[test]
    fn kahan_recovers_small_residual() {
        // 1 - sum of 1e6 equal pieces of (1 - 1e-12)/1e6 should be 1e-12.
        let n = 1_000_000;
        let piece = (1.0 - 1e-12) / n as f64;
        let total = kahan_total(std::iter::repeat(piece).take(n));
        assert!(((1.0 - total) - 1e-12).abs() < 1e-15);
    }
}
