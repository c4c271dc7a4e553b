mod common;

use predrisk::comparison::exceedance;
use predrisk::distributions::DEFAULT_EPS;
use predrisk::scenario::bundled;

#[test]
fn rr106_exceedance_agrees_with_simulation() {
    let s = bundled("la_rr106").unwrap().exposure_scenario.unwrap();
    let (e, u) = s.arms(DEFAULT_EPS).unwrap();
    let analytic = exceedance(&e, &u).greater;
    let (mc, se) = common::monte_carlo_greater(
        s.n_exposed,
        s.p_exposed.value(),
        s.n_unexposed,
        s.p_unexposed.value(),
        1_000_000,
        20261014,
    );
    println!("analytic {analytic:.6}, monte carlo {mc:.6} (se {se:.6})");
    assert!((analytic - mc).abs() < 3.0 * se);
}

#[test]
fn la_rr2_exceedance_agrees_with_simulation() {
    let s = bundled("la_rr2").unwrap().exposure_scenario.unwrap();
    let (e, u) = s.arms(DEFAULT_EPS).unwrap();
    let analytic = exceedance(&e, &u).greater;
    let (mc, se) =
        common::monte_carlo_greater(s.n_exposed, s.p_exposed.value(), s.n_unexposed, s.p_unexposed.value(), 200_000, 3);
    assert!((analytic - mc).abs() < 3.0 * se, "{analytic} vs {mc} ± {se}");
}
