use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::complexes::PointCloud;
use crate::error::{invalid, Result};

/// `n` evenly spaced points on the circle of radius `radius`.
pub fn circle_points(n: usize, radius: f64) -> Result<PointCloud> {
    if n == 0 {
        return invalid("need at least one point");
    }
    PointCloud::new(
        (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                vec![radius * a.cos(), radius * a.sin()]
            })
            .collect(),
    )
}

/// `n` points at uniform random angles on the unit circle, each perturbed by
/// isotropic Gaussian noise of standard deviation `sigma`. Points are sorted
/// by angle so that index order follows the circle.
pub fn noisy_circle(n: usize, sigma: f64, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return invalid("need at least one point");
    }
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return invalid(format!("noise level must be finite and non-negative, got {sigma}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma.max(f64::MIN_POSITIVE)).expect("valid normal");
    let mut angles: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    let points = angles
        .into_iter()
        .map(|a| {
            let (dx, dy) = if sigma == 0.0 { (0.0, 0.0) } else { (noise.sample(&mut rng), noise.sample(&mut rng)) };
            vec![a.cos() + dx, a.sin() + dy]
        })
        .collect();
    PointCloud::new(points)
}

/// Point on the trefoil knot `(sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t)`.
pub fn trefoil_point(t: f64) -> Vec<f64> {
    vec![t.sin() + 2.0 * (2.0 * t).sin(), t.cos() - 2.0 * (2.0 * t).cos(), -(3.0 * t).sin()]
}

/// `n` trefoil samples at uniform random parameters.
pub fn trefoil(n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return invalid("need at least one point");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointCloud::new((0..n).map(|_| trefoil_point(rng.random_range(0.0..2.0 * PI))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let a = noisy_circle(60, 0.05, 3).unwrap();
        let b = noisy_circle(60, 0.05, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 60);
        assert_eq!(trefoil(500, 1).unwrap().ambient_dim(), 3);
    }

    #[test]
    fn exact_circle_has_unit_radius() {
        let c = circle_points(10, 1.0).unwrap();
        for p in c.points() {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-12);
        }
    }
}
