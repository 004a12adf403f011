//! One PASS/FAIL line per acceptance criterion. Exits non-zero when any
//! criterion fails.

use std::time::Instant;

use fadestat::analysis;
use fadestat::error::Error;
use fadestat::fsmc_arq::{self, ArqScenario};
use fadestat::lcr::{self, lcr_exact, lcr_int_limited, lcr_single_antenna};
use fadestat::model::{canonical_order, validity_min_threshold, LinkConfig, Validity};
use fadestat::oracles::{self, quadrature_lcr, Combining, SimulationPlan};
use fadestat::outage::{analytic_mean_sinr, cdf};
use fadestat::scenarios::{self, db_to_linear};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("{} criterion {id:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }

    fn info(&self, id: u32, detail: String) {
        println!("INFO criterion {id:>2} {detail}");
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn random_link(rng: &mut ChaCha8Rng, l: usize, n: usize) -> LinkConfig {
    let p: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
    let f: Vec<f64> = (0..n).map(|_| rng.random_range(5.0..200.0)).collect();
    let p_d = rng.random_range(0.5..5.0);
    let f_d = rng.random_range(5.0..200.0);
    let no = 10f64.powf(rng.random_range(-2.0..0.0));
    LinkConfig::from_pairs(p_d, f_d, no, l, &p, &f).unwrap()
}

/// `k` log-spaced thresholds inside the exact formula's validity range,
/// centred on the mean SINR.
fn valid_thresholds(link: &LinkConfig, k: usize) -> Vec<f64> {
    let ga = analytic_mean_sinr(link).unwrap();
    let mut lo = 0.1 * ga;
    if let Validity::Above(b) = validity_min_threshold(link).unwrap() {
        lo = lo.max(1.05 * b);
    }
    let hi = (4.0 * ga).max(10.0 * lo);
    (0..k).map(|i| lo * (hi / lo).powf(i as f64 / (k - 1) as f64)).collect()
}

fn criterion_1(r: &mut Report) {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for i in 0..25 {
        let n = 2 + i % 2;
        let l = 1 + (i / 2) % 4;
        let link = canonical_order(&random_link(&mut rng, l, n)).unwrap();
        for g in valid_thresholds(&link, 5) {
            let e = lcr_exact(&link, g).unwrap().crossings_per_sec;
            let q = quadrature_lcr(&link, g).unwrap();
            worst = worst.max(rel(e, q));
            count += 1;
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    r.line(
        1,
        "quadrature exactness",
        worst <= 1e-6 && secs < 60.0,
        format!("{count} points, worst relative gap {worst:.2e} (tol 1e-6), {secs:.1} s (limit 60 s)"),
    );
}

fn criterion_2(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let link = canonical_order(&random_link(&mut rng, 1, 2 + i % 3)).unwrap();
        let g = valid_thresholds(&link, 3)[1];
        let e = lcr_exact(&link, g).unwrap().crossings_per_sec;
        let s = lcr_single_antenna(&link, g).unwrap().crossings_per_sec;
        worst = worst.max(rel(e, s));
    }
    r.line(2, "single-antenna identity", worst <= 1e-12, format!("100 configs, worst relative gap {worst:.2e} (tol 1e-12)"));
}

fn criterion_3(r: &mut Report) {
    let mut worst: f64 = 0.0;
    let mut masked = 0;
    let mut total = 0;
    for &(l, n, p_i, f_i) in &[(2usize, 2usize, 0.5, 50.0), (2, 3, 1.0, 162.0), (3, 2, 0.2, 20.0)] {
        let (p_d, f_d) = (1.0, 32.0);
        let link = LinkConfig::from_pairs(p_d, f_d, 1e-10 * p_i, l, &vec![p_i; n], &vec![f_i; n]).unwrap();
        let (perturbed, _) = lcr::perturb_eps_ties(&link);
        let perturbed = canonical_order(&perturbed).unwrap();
        let ga = analytic_mean_sinr(&link).unwrap();
        for i in 0..50 {
            let g = ga * db_to_linear(-25.0 + 35.0 * i as f64 / 49.0);
            total += 1;
            let want = lcr_int_limited(l, n, p_d, p_i, f_d, f_i, g).unwrap().crossings_per_sec;
            match lcr_exact(&perturbed, g) {
                Ok(v) => worst = worst.max(rel(v.crossings_per_sec, want)),
                Err(Error::ValidityRange { .. }) => masked += 1,
                Err(e) => panic!("{e}"),
            }
        }
    }
    r.line(
        3,
        "interference-limited limit",
        worst <= 1e-4 && masked == 0,
        format!("{total} points over 3 configs, worst relative gap {worst:.2e} (tol 1e-4), {masked} masked"),
    );
}

fn criterion_4(r: &mut Report) {
    let want = [11.4, 7.3, 3.7, 11.5, 19.9];
    let got: Vec<f64> = scenarios::FIG1_UPSILON_DB
        .iter()
        .map(|&u| 100.0 * analysis::mrg_normalized(&scenarios::fig1(u), -30.0, 10.0, 121).unwrap())
        .collect();
    let within = got.iter().zip(&want).all(|(g, w)| (g - w).abs() <= 3.0);
    let min_at_zero = got.iter().enumerate().all(|(i, &g)| i == 2 || g > got[2]);
    let shown: Vec<String> = got.iter().map(|g| format!("{g:.2}")).collect();
    r.line(
        4,
        "maximum relative gap table",
        within && min_at_zero,
        format!("[{}]% vs [11.4, 7.3, 3.7, 11.5, 19.9]% (tol 3 pp), equal-power minimum: {min_at_zero}", shown.join(", ")),
    );
}

struct McCheck {
    points: usize,
    outside: usize,
    worst_z: f64,
}

fn mc_lcr_check(link: &LinkConfig, plan: &SimulationPlan, ga: f64) -> McCheck {
    let traces = oracles::simulate_sinr(plan).unwrap();
    let mut c = McCheck { points: 0, outside: 0, worst_z: 0.0 };
    for g in analysis::db_grid(-30.0, 10.0, 121).iter().map(|&db| ga * db_to_linear(db)) {
        let Ok(e) = lcr::lcr(link, g) else { continue };
        let est = oracles::estimate_lcr(&traces, plan.sample_rate_hz, g).unwrap();
        if est.events < 100 {
            continue;
        }
        let z = (est.value - e.crossings_per_sec) / est.stderr;
        c.points += 1;
        if z.abs() > 3.0 {
            c.outside += 1;
        }
        if z.abs() > c.worst_z.abs() {
            c.worst_z = z;
        }
    }
    c
}

fn criterion_5(r: &mut Report) {
    let t0 = Instant::now();
    let mut all_ok = true;
    let mut parts = Vec::new();
    for &f_d in &scenarios::FIG2_DOPPLERS_HZ {
        let link = scenarios::fig2(f_d);
        let ga = analytic_mean_sinr(&link).unwrap();
        let plan = SimulationPlan::default_for(link.clone(), 5).unwrap();
        let c = mc_lcr_check(&link, &plan, ga);
        all_ok &= c.outside == 0;
        parts.push(format!("f_D {f_d} Hz: {}/{} outside, worst z {:+.2}", c.outside, c.points, c.worst_z));
    }
    let secs = t0.elapsed().as_secs_f64();
    r.line(5, "Monte Carlo LCR agreement", all_ok && secs < 600.0, format!("{}; {secs:.1} s (limit 600 s)", parts.join("; ")));
    for &f_d in &scenarios::FIG2_DOPPLERS_HZ {
        let link = scenarios::fig2(f_d);
        let ga = analytic_mean_sinr(&link).unwrap();
        let mut plan = SimulationPlan::default_for(link.clone(), 5).unwrap();
        plan.combining = Combining::IndependentEnvelope;
        plan.sinusoid_count = 64;
        let c = mc_lcr_check(&link, &plan, ga);
        r.info(
            5,
            format!(
                "diagnostic, independent interferer envelopes with 64 sinusoids, f_D {f_d} Hz: {}/{} outside, worst z {:+.2}",
                c.outside, c.points, c.worst_z
            ),
        );
    }
}

fn criterion_6(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut grid_ok = 0;
    let mut worst_double: f64 = 0.0;
    for _ in 0..50 {
        let l = rng.random_range(1..=4usize);
        let n = rng.random_range(1..=4usize);
        let p_d = rng.random_range(0.5..5.0);
        let p_i = rng.random_range(0.1..2.0);
        let f_d = rng.random_range(1.0..300.0);
        let f_i = rng.random_range(1.0..300.0);
        let gmax = lcr::gamma_max_int_limited(l, n, p_d, p_i, f_d, f_i).unwrap();
        let (lo, hi, k) = ((1e-4 * p_d / p_i).ln(), (1e4 * p_d / p_i).ln(), 4001);
        let grid: Vec<f64> = (0..k).map(|i| (lo + (hi - lo) * i as f64 / (k - 1) as f64).exp()).collect();
        let vals: Vec<f64> =
            grid.iter().map(|&g| lcr_int_limited(l, n, p_d, p_i, f_d, f_i, g).unwrap().crossings_per_sec).collect();
        let arg = (0..k).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
        let (below, above) = (grid[arg.saturating_sub(1)], grid[(arg + 1).min(k - 1)]);
        if gmax >= below && gmax <= above {
            grid_ok += 1;
        }
        let doubled = lcr::gamma_max_int_limited(l, n, p_d, p_i, 2.0 * f_d, 2.0 * f_i).unwrap();
        worst_double = worst_double.max(rel(doubled, gmax));
    }
    r.line(
        6,
        "peak threshold",
        grid_ok == 50 && worst_double <= 1e-12,
        format!("{grid_ok}/50 within one grid step, doubled-Doppler change {worst_double:.2e} (tol 1e-12)"),
    );
}

fn criterion_7(r: &mut Report) {
    let grid = analysis::db_grid(-30.0, 10.0, 121);
    let mut worst_id: f64 = 0.0;
    let mut monotone = true;
    let mut curves = Vec::new();
    for (l, n) in [(2, 2), (4, 4)] {
        let link = scenarios::diversity_system(l, n).unwrap();
        let ga = analytic_mean_sinr(&link).unwrap();
        let mut pts = Vec::new();
        for &db in &grid {
            let g = ga * db_to_linear(db);
            let Ok(v) = lcr::lcr(&link, g) else { continue };
            let f = cdf(&link, g).unwrap();
            let a = fadestat::outage::aod(&link, g).unwrap();
            worst_id = worst_id.max(rel(a * v.crossings_per_sec, f));
            pts.push((db, v.crossings_per_sec, a));
        }
        let peak = (0..pts.len()).max_by(|&a, &b| pts[a].1.total_cmp(&pts[b].1)).unwrap();
        monotone &= pts[peak..].windows(2).all(|w| w[1].2 > w[0].2);
        curves.push(pts);
    }
    let mut shared = 0;
    let mut ordered = 0;
    let mut last_below = None;
    for p4 in &curves[1] {
        if let Some(p2) = curves[0].iter().find(|p| p.0 == p4.0) {
            shared += 1;
            if p4.2 >= p2.2 {
                ordered += 1;
            } else {
                last_below = Some(p4.0);
            }
        }
    }
    let below = last_below.map_or(String::new(), |db| format!(", (4,4) lower up to {db:.2} dB"));
    r.line(
        7,
        "average outage duration",
        worst_id <= 1e-12 && monotone && shared > 0 && ordered == shared,
        format!(
            "worst |aod*lcr/cdf - 1| {worst_id:.2e} (tol 1e-12), increasing past peak: {monotone}, (4,4) >= (2,2) at {ordered}/{shared} thresholds{below}"
        ),
    );
}

fn criterion_8(r: &mut Report) {
    let link = scenarios::diversity_system(2, 2).unwrap();
    let ga = analytic_mean_sinr(&link).unwrap();
    let g = ga * db_to_linear(scenarios::ARQ_THRESHOLD_DB);
    let curve = analysis::per_curve(&link, g, &[0.0, 0.01, 0.1, 1.0], false).unwrap();
    let zero_ok = curve.rows[0].per == cdf(&link, g).unwrap();
    let plan = SimulationPlan::default_for(link.clone(), 8).unwrap();
    let traces = oracles::simulate_sinr(&plan).unwrap();
    let mut ok = zero_ok;
    let mut parts = Vec::new();
    for row in &curve.rows[1..] {
        let est = oracles::estimate_per(&traces, plan.sample_rate_hz, g, row.t_pkt_sec).unwrap();
        let d = rel(est.value, row.per);
        ok &= d <= 0.15;
        parts.push(format!("{}: theory {:.5} mc {:.5} ({:.1}%)", row.normalized_length, row.per, est.value, 100.0 * d));
    }
    r.line(8, "FSMC packet error rate", ok, format!("{} (tol 15%); PER(0) == CDF: {zero_ok}", parts.join(", ")));
}

/// Root of `1/m - 1/(m + m_o) - k` by bisection.
fn bisect_optimum(k: f64, m_o: f64) -> f64 {
    let g = |m: f64| 1.0 / m - 1.0 / (m + m_o) - k;
    let (mut lo, mut hi) = (1e-9, 1.0);
    while g(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_9(r: &mut Report) {
    let published = [((2, 2), 1e5, 1328.0), ((2, 2), 1e6, 4304.0), ((4, 4), 1e5, 6450.0), ((4, 4), 1e6, 20503.0)];
    let grid: Vec<f64> = (0..=800).map(|i| (10f64.ln() + (1e6f64 / 10.0).ln() * i as f64 / 800.0).exp()).collect();
    let mut root_worst: f64 = 0.0;
    let mut grid_ok = true;
    let mut pub_ok = true;
    let mut parts = Vec::new();
    for ((l, n), rs, want) in published {
        let s: ArqScenario = scenarios::arq_system(l, n, rs).unwrap();
        let point = s.link_point().unwrap();
        let opt = fsmc_arq::optimal_packet_length(&s).unwrap();
        let m = opt.real.unwrap();
        let k = point.n_c * s.t_s_sec / point.p_cf;
        root_worst = root_worst.max(rel(m, bisect_optimum(k, s.m_o)));
        let curve = analysis::throughput_curve(&s, &grid, false).unwrap();
        let a = curve.argmax;
        grid_ok &= m >= grid[a.saturating_sub(1)] && m <= grid[(a + 1).min(grid.len() - 1)];
        let d = rel(m, want);
        pub_ok &= d <= 0.15;
        parts.push(format!("({l},{n}) {rs:.0} sps: {m:.0} vs {want:.0} ({:+.1}%)", 100.0 * (m - want) / want));
    }
    r.line(
        9,
        "optimal packet length",
        root_worst <= 1e-6 && grid_ok && pub_ok,
        format!(
            "root-finder gap {root_worst:.2e} (tol 1e-6), grid argmax within one step: {grid_ok}, {} (tol 15%)",
            parts.join(", ")
        ),
    );
}

fn property_suites(r: &mut Report) {
    r.info(10, "property suites run as the `properties` and `channel` test targets".into());
    let link = scenarios::diversity_system(2, 3).unwrap();
    let ga = analytic_mean_sinr(&link).unwrap();
    let lo = lcr::lcr(&link, ga * 1e-6).map(|v| v.crossings_per_sec).unwrap_or(0.0);
    let hi = lcr::lcr(&link, ga * 1e6).unwrap().crossings_per_sec;
    let peak = valid_thresholds(&link, 30).iter().map(|&g| lcr::lcr(&link, g).unwrap().crossings_per_sec).fold(0.0, f64::max);
    let scaled = lcr::lcr(&link.scale_dopplers(3.0), ga).unwrap().crossings_per_sec;
    let base = lcr::lcr(&link, ga).unwrap().crossings_per_sec;
    let homog = rel(scaled, 3.0 * base);
    let mut plan = SimulationPlan::default_for(link.clone(), 10).unwrap();
    plan.realizations = 8;
    plan.duration_sec = 0.5;
    let det = oracles::simulate_sinr_with_threads(&plan, 1).unwrap() == oracles::simulate_sinr_with_threads(&plan, 4).unwrap();
    r.line(
        10,
        "property spot checks",
        lo < 1e-3 * peak && hi < 1e-6 * peak && homog <= 1e-12 && det,
        format!(
            "low/peak {:.1e}, high/peak {:.1e}, Doppler homogeneity {homog:.1e} (tol 1e-12), 1 vs 4 workers identical: {det}",
            lo / peak,
            hi / peak
        ),
    );
}

fn main() {
    let mut r = Report { failed: 0 };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    criterion_9(&mut r);
    property_suites(&mut r);
    println!("{} criteria failed", r.failed);
    if r.failed > 0 {
        std::process::exit(1);
    }
}
