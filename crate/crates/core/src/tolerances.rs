use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the algebra, series and factorization code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// A spectral coordinate is vanishing when `|c| <= node_eps * max(d, 1)`.
    pub node_eps: f64,
    /// Comparison tolerance used by round-trip checks.
    pub cmp_eps: f64,
    /// Series terms are summed until `|term| < series_eps * max(1, |sum|)`.
    pub series_eps: f64,
    /// Root residual tolerance, relative to the coefficient scale.
    pub factor_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            node_eps: 1e-10,
            cmp_eps: 1e-9,
            series_eps: 1e-20,
            factor_tol: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn new(node_eps: f64, cmp_eps: f64, series_eps: f64, factor_tol: f64) -> Result<Self> {
        let t = Tolerances {
            node_eps,
            cmp_eps,
            series_eps,
            factor_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            ("node_eps", self.node_eps),
            ("cmp_eps", self.cmp_eps),
            ("series_eps", self.series_eps),
            ("factor_tol", self.factor_tol),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if self.node_eps > 1e-6 || self.cmp_eps > 1e-6 {
            return Err(Error::domain("node_eps and cmp_eps must not exceed 1e-6"));
        }
        Ok(())
    }

    /// Threshold below which a spectral coordinate of a number with modulus `d` counts as zero.
    pub fn node_threshold(&self, d: f64) -> f64 {
        self.node_eps * d.max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn rejects_non_positive_and_loose() {
        assert!(Tolerances::new(0.0, 1e-9, 1e-20, 1e-9).is_err());
        assert!(Tolerances::new(1e-10, -1.0, 1e-20, 1e-9).is_err());
        assert!(Tolerances::new(1e-3, 1e-9, 1e-20, 1e-9).is_err());
        assert!(Tolerances::new(1e-10, 1e-9, f64::NAN, 1e-9).is_err());
    }
}
