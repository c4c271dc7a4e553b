mod common;

use common::ExactLaw;
use predrisk::comparison::exceedance;
use predrisk::distributions::{beta_binomial_distribution, binomial_distribution, convolve, DEFAULT_EPS};
use predrisk::{BetaParams, Probability};
use proptest::prelude::*;

const TOL: f64 = 1e-12;
const EPS: f64 = DEFAULT_EPS;

fn binom(n: u64, a: u64, b: u64) -> predrisk::distributions::CountDistribution {
    binomial_distribution(n, Probability::new(a as f64 / b as f64).unwrap(), EPS).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn binomial_comparisons_match_enumeration(
        n1 in 1u64..=25, n2 in 1u64..=25, a1 in 0u64..=1000, a2 in 0u64..=1000,
    ) {
        let (x, y) = (binom(n1, a1, 1000), binom(n2, a2, 1000));
        let ex = exceedance(&x, &y);
        let (gt, eq, lt) = ExactLaw::binomial(n1, a1, 1000).compare(&ExactLaw::binomial(n2, a2, 1000));
        prop_assert!((ex.greater - gt).abs() < TOL, "greater {} vs {}", ex.greater, gt);
        prop_assert!((ex.equal - eq).abs() < TOL, "equal {} vs {}", ex.equal, eq);
        prop_assert!((ex.less - lt).abs() < TOL, "less {} vs {}", ex.less, lt);
    }

    #[test]
    fn binomial_masses_match_enumeration(n in 1u64..=25, a in 0u64..=1000) {
        let d = binom(n, a, 1000);
        let exact = ExactLaw::binomial(n, a, 1000);
        for k in 0..=n {
            prop_assert!((d.mass(k) - exact.pmf(k as usize)).abs() < TOL);
        }
    }

    #[test]
    fn beta_binomial_matches_rising_factorials(n in 1u64..=25, alpha in 1u64..=40, beta in 1u64..=40) {
        let prior = BetaParams::new(alpha as f64, beta as f64).unwrap();
        let d = beta_binomial_distribution(n, prior, EPS).unwrap();
        let exact = ExactLaw::beta_binomial(n, alpha, beta);
        for k in 0..=n {
            prop_assert!((d.mass(k) - exact.pmf(k as usize)).abs() < TOL, "k = {k}");
        }
    }

    #[test]
    fn split_total_matches_exact_convolution(
        n1 in 1u64..=25, n2 in 1u64..=25, a1 in 0u64..=1000, a2 in 0u64..=1000,
    ) {
        let s = convolve(&binom(n1, a1, 1000), &binom(n2, a2, 1000), EPS).unwrap();
        let exact = ExactLaw::binomial(n1, a1, 1000).convolve(&ExactLaw::binomial(n2, a2, 1000));
        for k in 0..=(n1 + n2) {
            prop_assert!((s.mass(k) - exact.pmf(k as usize)).abs() < TOL);
        }
        let all_low = binom(n1 + n2, a2, 1000);
        let ex = exceedance(&s, &all_low);
        let (gt, eq, lt) = exact.compare(&ExactLaw::binomial(n1 + n2, a2, 1000));
        prop_assert!((ex.greater - gt).abs() < TOL);
        prop_assert!((ex.equal - eq).abs() < TOL);
        prop_assert!((ex.less - lt).abs() < TOL);
    }
}

#[test]
fn fair_coins_by_hand() {
    // X, Y ~ Bin(2, 1/2): P(X = Y) = (1 + 4 + 1) / 16
    let (gt, eq, lt) = ExactLaw::binomial(2, 1, 2).compare(&ExactLaw::binomial(2, 1, 2));
    assert_eq!((gt, eq, lt), (5.0 / 16.0, 6.0 / 16.0, 5.0 / 16.0));
    let ex = exceedance(&binom(2, 1, 2), &binom(2, 1, 2));
    assert!((ex.equal - 0.375).abs() < 1e-15);
}
