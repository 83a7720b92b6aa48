//! Seeded sampling of rational test points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Rational;

/// Reproducible stream of small rationals `n/d` with `|n| <= 97`,
/// `1 <= d <= 97`.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Rational {
        let n: i64 = self.rng.gen_range(-97..=97);
        let d: i64 = self.rng.gen_range(1..=97);
        Rational::new(n.into(), d.into())
    }

    /// Rational `n/d` in `[-1, 1]` with `1 <= d <= 97`.
    pub fn unit_rational(&mut self) -> Rational {
        let d: i64 = self.rng.gen_range(1..=97);
        let n: i64 = self.rng.gen_range(-d..=d);
        Rational::new(n.into(), d.into())
    }

    /// Nonzero small integer in `[-bound, bound]`.
    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        loop {
            let v = self.rng.gen_range(-bound..=bound);
            if v != 0 {
                return v;
            }
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn point(&mut self) -> (Rational, Rational) {
        (self.rational(), self.rational())
    }

    /// Point in the square `[-1, 1]²`, where floating-point evaluation of
    /// high-degree coefficients stays well conditioned.
    pub fn unit_point(&mut self) -> (Rational, Rational) {
        (self.unit_rational(), self.unit_rational())
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn deterministic_and_bounded() {
        let a: Vec<Rational> = (0..50).map({
            let mut s = Sampler::new(7);
            move |_| s.rational()
        }).collect();
        let mut s = Sampler::new(7);
        for r in &a {
            assert_eq!(*r, s.rational());
            assert!(r.numer().abs() <= 97.into() && *r.denom() <= 97.into());
        }
    }
}
