//! Seeded standard-normal stream.
//!
//! Generator: xoshiro256** seeded from a `u64` through SplitMix64 (the
//! `rand_xoshiro` `seed_from_u64` convention). Each normal consumes two
//! 64-bit outputs `a`, `b`:
//!
//! ```text
//! u1 = ((a >> 11) + 1) * 2^-53        in (0, 1]
//! u2 =  (b >> 11)      * 2^-53        in [0, 1)
//! z  = sqrt(-2 ln u1) * cos(2π u2)
//! ```
//!
//! The sine half of the Box–Muller pair is discarded so every draw maps to
//! exactly two generator outputs, which keeps streams easy to reproduce in
//! other languages.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct NormalStream {
    rng: Xoshiro256StarStar,
}

impl NormalStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn next_normal(&mut self) -> f64 {
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * TWO_POW_MINUS_53;
        let u2 = (self.rng.next_u64() >> 11) as f64 * TWO_POW_MINUS_53;
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = NormalStream::new(42);
        let mut b = NormalStream::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_normal().to_bits(), b.next_normal().to_bits());
        }
        assert_ne!(
            NormalStream::new(1).next_u64(),
            NormalStream::new(2).next_u64()
        );
    }

    #[test]
    fn first_outputs_are_pinned() {
        // xoshiro256** after SplitMix64 seeding with 0; guards against a
        // silent generator change in a dependency bump.
        let mut s = NormalStream::new(0);
        let first = s.next_u64();
        let mut again = NormalStream::new(0);
        assert_eq!(first, again.next_u64());
        assert_eq!(first, 0x99ec5f36cb75f2b4);
        // Outputs 2 and 3 through the documented transform.
        let z = s.next_normal();
        assert!((z - 0.6082094966374778).abs() < 1e-14, "{z}");
    }

    #[test]
    fn moments_look_standard() {
        let mut s = NormalStream::new(7);
        let n = 200_000;
        let draws: Vec<f64> = (0..n).map(|_| s.next_normal()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.015, "var {var}");
        assert!(draws.iter().all(|z| z.is_finite()));
    }
}
