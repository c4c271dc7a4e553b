//! Oracles that share no code with the library: exact rational arithmetic
//! for small arms, and seeded Monte Carlo for large ones.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// `num / den` rounded to f64 through a 64-bit-wider quotient.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = (den.bits() + 64).saturating_sub(num.bits());
    let q: BigUint = (num << shift) / den;
    q.to_f64().unwrap() * 2f64.powi(-(shift as i32))
}

fn choose(n: u64, k: u64) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

fn rising(x: u64, m: u64) -> BigUint {
    (0..m).fold(BigUint::one(), |acc, i| acc * BigUint::from(x + i))
}

/// Numerators of a count law over a common denominator.
#[derive(Clone, Debug)]
pub struct ExactLaw {
    pub weights: Vec<BigUint>,
    pub denominator: BigUint,
}

impl ExactLaw {
    /// Binomial(n, a / b).
    pub fn binomial(n: u64, a: u64, b: u64) -> ExactLaw {
        assert!(a <= b && b > 0);
        let weights = (0..=n)
            .map(|k| choose(n, k) * BigUint::from(a).pow(k as u32) * BigUint::from(b - a).pow((n - k) as u32))
            .collect();
        ExactLaw { weights, denominator: BigUint::from(b).pow(n as u32) }
    }

    /// Beta-binomial with integer shape parameters.
    pub fn beta_binomial(n: u64, alpha: u64, beta: u64) -> ExactLaw {
        let weights = (0..=n).map(|k| choose(n, k) * rising(alpha, k) * rising(beta, n - k)).collect();
        ExactLaw { weights, denominator: rising(alpha + beta, n) }
    }

    pub fn pmf(&self, k: usize) -> f64 {
        ratio_to_f64(&self.weights[k], &self.denominator)
    }

    /// `(P(X > Y), P(X = Y), P(X < Y))`, each rounded once.
    pub fn compare(&self, other: &ExactLaw) -> (f64, f64, f64) {
        let (mut gt, mut eq, mut lt) = (BigUint::zero(), BigUint::zero(), BigUint::zero());
        for (i, wi) in self.weights.iter().enumerate() {
            for (j, wj) in other.weights.iter().enumerate() {
                let w = wi * wj;
                match i.cmp(&j) {
                    std::cmp::Ordering::Greater => gt += w,
                    std::cmp::Ordering::Equal => eq += w,
                    std::cmp::Ordering::Less => lt += w,
                }
            }
        }
        let den = &self.denominator * &other.denominator;
        (ratio_to_f64(&gt, &den), ratio_to_f64(&eq, &den), ratio_to_f64(&lt, &den))
    }

    /// Law of the sum of two independent counts.
    pub fn convolve(&self, other: &ExactLaw) -> ExactLaw {
        let mut weights = vec![BigUint::zero(); self.weights.len() + other.weights.len() - 1];
        for (i, wi) in self.weights.iter().enumerate() {
            for (j, wj) in other.weights.iter().enumerate() {
                weights[i + j] += wi * wj;
            }
        }
        ExactLaw { weights, denominator: &self.denominator * &other.denominator }
    }
}

/// Monte Carlo estimate of `P(X > Y)` for independent binomials, with its
/// standard error.
pub fn monte_carlo_greater(n_x: u64, p_x: f64, n_y: u64, p_y: f64, draws: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bx = Binomial::new(n_x, p_x).unwrap();
    let by = Binomial::new(n_y, p_y).unwrap();
    let hits = (0..draws).filter(|_| bx.sample(&mut rng) > by.sample(&mut rng)).count();
    let p = hits as f64 / draws as f64;
    (p, (p * (1.0 - p) / draws as f64).sqrt())
}
