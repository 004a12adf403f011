use fadestat::lcr::{lcr, FormulaId};
use fadestat::model::LinkConfig;
use fadestat::outage::{analytic_mean_sinr, cdf};
use fadestat::scenarios::{db_to_linear, diversity_system};

fn close(a: f64, b: f64, tol: f64) -> bool {
    ((a - b) / b).abs() <= tol
}

#[test]
fn sys22_at_minus_14_db() {
    let link = diversity_system(2, 2).unwrap();
    let ga = analytic_mean_sinr(&link).unwrap();
    assert!(close(ga, 2.7721667387152635, 1e-12), "{ga}");
    let g = ga * db_to_linear(-14.0);
    let v = lcr(&link, g).unwrap();
    assert_eq!(v.formula_id, FormulaId::Exact);
    assert!(close(v.crossings_per_sec, 5.913712076960765, 1e-10), "{}", v.crossings_per_sec);
    assert!(close(cdf(&link, g).unwrap(), 0.017023191811586836, 1e-10));
}

#[test]
fn sys44_frozen_points() {
    let link = diversity_system(4, 4).unwrap();
    let ga = analytic_mean_sinr(&link).unwrap();
    let at = |db: f64| lcr(&link, ga * db_to_linear(db)).unwrap().crossings_per_sec;
    assert!(close(at(-14.0), 0.13870357751208906, 1e-10));
    assert!(close(at(-10.0), 2.2068256799588615, 1e-10));
}

#[test]
fn unordered_two_interferer_link() {
    let link = LinkConfig::from_pairs(1.0, 32.0, 0.1, 2, &[1.0, 0.5], &[162.0, 32.0]).unwrap();
    assert!(close(lcr(&link, 1.0).unwrap().crossings_per_sec, 95.45294916526534, 1e-10));
    assert!(close(lcr(&link, 5.0).unwrap().crossings_per_sec, 53.637670040179, 1e-10));
}

#[test]
fn sweep_reports_the_bound_of_the_reordered_link() {
    use fadestat::analysis::{run_sweep, SweepSpec};
    use fadestat::model::{canonical_order, validity_min_threshold};
    let link = fadestat::scenarios::fig2(97.0);
    let r = run_sweep(&SweepSpec::new(link.clone())).unwrap();
    let want = validity_min_threshold(&canonical_order(&link).unwrap()).unwrap().bound().unwrap();
    assert_eq!(r.meta.validity_bound, Some(want));
    for row in &r.rows {
        assert_eq!(row.valid, row.gamma_linear > want, "{} dB", row.gamma_norm_db);
    }
}
