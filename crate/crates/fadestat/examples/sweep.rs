//! A threshold sweep with every formula the scenario supports, printed as
//! a table.

use fadestat::analysis::{run_sweep, Axis, Formula, SweepSpec};
use fadestat::scenarios::fig2;

fn main() -> fadestat::Result<()> {
    let mut spec = SweepSpec::new(fig2(97.0));
    spec.axis = Axis::NormalizedDb { start: -20.0, stop: 10.0, points: 7 };
    spec.which_formulas = vec![Formula::Exact, Formula::Approx, Formula::Mc];
    spec.mc.realizations = 20;
    let r = run_sweep(&spec)?;
    let bound = r.meta.validity_bound.map_or("none".into(), |b| format!("{b:.4}"));
    println!("formula {}, mean SINR {:.3}, exact valid above {bound}", r.meta.formula_id.as_str(), r.meta.gamma_avg);
    let cell = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3}"));
    for row in &r.rows {
        println!(
            "{:>6.1} dB  exact {:>9}  approx {:>9}  mc {:>9}  aod {:>9}",
            row.gamma_norm_db,
            cell(row.lcr_exact_hz),
            cell(row.lcr_approx_hz),
            cell(row.lcr_mc.map(|e| e.value)),
            cell(row.aod_sec.map(|a| 1e3 * a)),
        );
    }
    Ok(())
}
