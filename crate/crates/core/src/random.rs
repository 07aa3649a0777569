//! Seeded sampling of exact test inputs.
//!
//! All randomness goes through ChaCha8 seeded from a `u64`, so every sample
//! (and every reported witness) is reproducible from the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;
use num_traits::Zero;

use crate::ring::{ratio, Rational};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn int(&mut self, magnitude: i64) -> i64 {
        self.rng.gen_range(-magnitude..=magnitude)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.gen_range(lo..=hi_inclusive)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn next_seed(&mut self) -> u64 {
        self.rng.gen()
    }

    /// Rational with numerator in `[-magnitude, magnitude]` and denominator in `{1, 2, 3}`.
    pub fn rational(&mut self, magnitude: i64) -> Rational {
        let num = self.int(magnitude);
        let den = self.rng.gen_range(1..=3);
        ratio(num, den)
    }

    pub fn nonzero_rational(&mut self, magnitude: i64) -> Rational {
        loop {
            let q = self.rational(magnitude.max(1));
            if !q.is_zero() {
                return q;
            }
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, magnitude: i64) -> Matrix<Rational> {
        Matrix::from_fn(rows, cols, |_, _| self.rational(magnitude))
    }

    pub fn integer_matrix(&mut self, rows: usize, cols: usize, magnitude: i64) -> Matrix<Rational> {
        Matrix::from_fn(rows, cols, |_, _| crate::ring::rat(self.int(magnitude)))
    }

    /// Random `A` with `Aᵀ = −A`.
    pub fn alternating(&mut self, n: usize, magnitude: i64) -> Matrix<Rational> {
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = self.rational(magnitude);
                a.set(j, i, -v.clone());
                a.set(i, j, v);
            }
        }
        a
    }

    pub fn symmetric(&mut self, n: usize, magnitude: i64) -> Matrix<Rational> {
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.rational(magnitude);
                a.set(j, i, v.clone());
                a.set(i, j, v);
            }
        }
        a
    }

    pub fn invertible(&mut self, n: usize, magnitude: i64) -> Matrix<Rational> {
        loop {
            let m = self.matrix(n, n, magnitude);
            if !m.det_bareiss().is_zero() {
                return m;
            }
        }
    }
}
