//! Fixtures shared by the benchmarks.

use ncomplex::{NComplex, Variant};

/// Deterministic number with components spread over `[-1, 1]`.
pub fn sample(variant: Variant, n: usize, salt: u32) -> NComplex {
    let x = (0..n)
        .map(|i| ((i as u32 + 1).wrapping_mul(2_654_435_761u32.wrapping_add(salt)) as f64 / u32::MAX as f64) * 2.0 - 1.0)
        .collect();
    NComplex::new(variant, x).expect("n >= 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_bounded_and_distinct() {
        let a = sample(Variant::Polar, 6, 1);
        let b = sample(Variant::Polar, 6, 2);
        assert!(a.components().iter().all(|v| v.abs() <= 1.0));
        assert_ne!(a, b);
    }
}
