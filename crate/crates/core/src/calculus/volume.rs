//! Busemann–Hausdorff volume density and distortion.

use crate::error::Result;
use crate::finsler::{fundamental_tensor, TensorMode};
use crate::point::{DiscPoint, TangentVector};

use super::RandersEngine;

impl RandersEngine {
    /// `σ_BH = (1 − ‖β‖²_α)^{3/2} √det a`.
    pub fn bh_density(&self, x: &DiscPoint) -> f64 {
        let w = self.beta_weight;
        let gap = x.gap();
        (1.0 - w * w * x.norm_sq()).powf(1.5) / (gap * gap)
    }
}

/// Busemann–Hausdorff density of the Apollonian norm, `(1 − |x|²)^{−1/2}`.
pub fn bh_density(x: &DiscPoint) -> f64 {
    1.0 / x.gap().sqrt()
}

/// `log(√det g(x, ξ) / σ_BH(x))`.
pub fn distortion(x: &DiscPoint, xi: TangentVector) -> Result<f64> {
    let g = fundamental_tensor(x, xi, TensorMode::Closed)?;
    Ok(0.5 * g.det().ln() - bh_density(x).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        assert_eq!(bh_density(&DiscPoint::ORIGIN), 1.0);
        let x = DiscPoint::new(0.5, 0.0).unwrap();
        assert!((bh_density(&x) - 0.75f64.powf(-0.5)).abs() < 1e-15);
        assert!((RandersEngine::APOLLONIAN.bh_density(&x) - bh_density(&x)).abs() < 1e-14);
        let mut last = 0.0;
        for r in [0.1, 0.5, 0.9, 0.99, 0.999] {
            let v = bh_density(&DiscPoint::new(r, 0.0).unwrap());
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn distortion_examples() {
        let d = distortion(&DiscPoint::ORIGIN, TangentVector::new(0.3, -2.0)).unwrap();
        assert!(d.abs() < 1e-15);

        let x = DiscPoint::new(0.5, 0.0).unwrap();
        let a = distortion(&x, TangentVector::new(1.0, 0.0)).unwrap();
        let b = distortion(&x, TangentVector::new(2.0, 0.0)).unwrap();
        assert!((a - b).abs() < 1e-14);

        let xi = TangentVector::new(0.0, 1.0);
        let numeric = fundamental_tensor(&x, xi, TensorMode::Numeric).unwrap();
        let expected = 0.5 * numeric.det().ln() - bh_density(&x).ln();
        assert!((distortion(&x, xi).unwrap() - expected).abs() < 1e-6);
        assert!(distortion(&x, TangentVector::ZERO).is_err());
    }
}
