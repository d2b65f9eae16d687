//! Seedable randomness shared by the generators and both algorithms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic pseudo-random stream. Identical seeds give identical
/// streams.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed for trial `index` of an experiment keyed by `master_seed`.
    /// A pure function of its arguments, so trials can run in any order.
    pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
        splitmix64(master_seed ^ splitmix64(index.wrapping_add(0x632B_E59B_D9B4_E019)))
    }

    pub fn for_trial(master_seed: u64, index: u64) -> Self {
        Self::new(Self::trial_seed(master_seed, index))
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// `+1` or `-1` with equal probability.
    pub fn sign(&mut self) -> i8 {
        if self.rng.random::<bool>() {
            1
        } else {
            -1
        }
    }

    pub fn normal_vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }

    /// Uniform point on the unit sphere in `n` dimensions.
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let mut v = self.normal_vector(n);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-300 {
                v.iter_mut().for_each(|x| *x /= norm);
                return v;
            }
        }
    }

    /// `k` distinct indices drawn uniformly from `0..n` (partial Fisher-Yates).
    pub fn distinct_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot draw {k} distinct indices from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.index(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
