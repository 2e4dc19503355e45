//! Seeded rational probe points for pointwise qualifiers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Rational, ScalarExpr};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_PROBES: usize = 8;

/// Base point followed by seeded random points.
///
/// Random coordinates are nonzero rationals p/q with 1 <= q <= 16 and
/// |p/q| <= 2, so chart-domain exclusions such as {x != 0} are avoided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeSet {
    points: Vec<Vec<Rational>>,
}

impl ProbeSet {
    pub fn new(base_point: Vec<Rational>, seed: u64, count: usize) -> Self {
        let n = base_point.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = vec![base_point];
        for _ in 0..count {
            points.push((0..n).map(|_| random_rational(&mut rng)).collect());
        }
        ProbeSet { points }
    }

    pub fn from_points(points: Vec<Vec<Rational>>) -> Self {
        ProbeSet { points }
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn base_point(&self) -> &[Rational] {
        &self.points[0]
    }

    /// Points other than the base point.
    pub fn random_points(&self) -> &[Vec<Rational>] {
        &self.points[1..]
    }

    /// Points where every expression is finite and some expression is zero.
    pub fn vanishing_points(&self, exprs: &[ScalarExpr]) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| {
                let vals: Result<Vec<_>, _> = exprs.iter().map(|e| e.eval(p)).collect();
                matches!(vals, Ok(v) if v.iter().all(num_traits::Zero::is_zero))
            })
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let q: i64 = rng.gen_range(1..=16);
    loop {
        let p: i64 = rng.gen_range(-2 * q..=2 * q);
        if p != 0 {
            return Rational::new(p.into(), q.into());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn probes_are_seeded_and_nonzero() {
        let a = ProbeSet::new(vec![Rational::zero(); 3], 1, 8);
        let b = ProbeSet::new(vec![Rational::zero(); 3], 1, 8);
        assert_eq!(a, b);
        assert_eq!(a.points().len(), 9);
        for p in a.random_points() {
            for x in p {
                assert!(!x.is_zero());
                assert!(x.denom() <= &16.into());
            }
        }
        assert_ne!(a, ProbeSet::new(vec![Rational::zero(); 3], 2, 8));
    }
}
