use fadestat::lcr::lcr;
use fadestat::oracles::{estimate_aod, estimate_cdf, estimate_per, simulate_sinr, Combining, SimulationPlan};
use fadestat::outage::{aod, analytic_mean_sinr, cdf};
use fadestat::fsmc_arq::per_at;
use fadestat::fsmc_arq::ArqScenario;
use fadestat::scenarios::{db_to_linear, diversity_system};

fn traces(seed: u64) -> (SimulationPlan, Vec<Vec<f64>>) {
    let plan = SimulationPlan::default_for(diversity_system(2, 2).unwrap(), seed).unwrap();
    let t = simulate_sinr(&plan).unwrap();
    (plan, t)
}

/// Dvoretzky-Kiefer-Wolfowitz half-width at confidence `1 - alpha` for an
/// effective sample size `n`.
fn dkw(n: f64, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n)).sqrt()
}

#[test]
fn empirical_cdf_within_dkw_band() {
    let (plan, t) = traces(21);
    let link = &plan.link;
    let ga = analytic_mean_sinr(link).unwrap();
    // Samples within a realization are correlated; one effective sample
    // per Doppler period of the slowest process is conservative.
    let n_eff = plan.realizations as f64 * plan.duration_sec * link.f_d_hz;
    let band = 3.0 * dkw(n_eff, 0.05);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let g = ga * db_to_linear(-20.0 + 1.5 * i as f64);
        let e = estimate_cdf(&t, g).unwrap().value;
        worst = worst.max((e - cdf(link, g).unwrap()).abs());
    }
    assert!(worst < band, "max deviation {worst} band {band}");
}

#[test]
fn fade_duration_at_minus_10_db() {
    let (plan, t) = traces(22);
    let g = analytic_mean_sinr(&plan.link).unwrap() * db_to_linear(-10.0);
    let theory = aod(&plan.link, g).unwrap();
    let mc = estimate_aod(&t, plan.sample_rate_hz, g).unwrap().value;
    assert!(((mc - theory) / theory).abs() < 0.10, "mc {mc} theory {theory}");
}

#[test]
fn fade_duration_at_minus_10_db_independent_envelopes() {
    let mut plan = SimulationPlan::default_for(diversity_system(2, 2).unwrap(), 22).unwrap();
    plan.combining = Combining::IndependentEnvelope;
    plan.sinusoid_count = 64;
    let t = simulate_sinr(&plan).unwrap();
    let g = analytic_mean_sinr(&plan.link).unwrap() * db_to_linear(-10.0);
    let theory = aod(&plan.link, g).unwrap();
    let mc = estimate_aod(&t, plan.sample_rate_hz, g).unwrap().value;
    assert!(((mc - theory) / theory).abs() < 0.10, "mc {mc} theory {theory}");
}

#[test]
fn packet_error_at_tenth_of_doppler_period() {
    let (plan, t) = traces(23);
    let link = plan.link.clone();
    let g = analytic_mean_sinr(&link).unwrap() * db_to_linear(-14.0);
    let t_pkt = 0.1 / link.f_d_hz;
    let s = ArqScenario::new(1e-5, 100.0, g, link.clone()).unwrap();
    let theory = per_at(&s.link_point().unwrap(), t_pkt).unwrap();
    let mc = estimate_per(&t, plan.sample_rate_hz, g, t_pkt).unwrap().value;
    assert!(((mc - theory) / theory).abs() < 0.15, "mc {mc} theory {theory}");
    assert!(lcr(&link, g).unwrap().crossings_per_sec > 0.0);
}
