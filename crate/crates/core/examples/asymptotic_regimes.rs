//! Exact per-k log values against the regime formulas.

use bellcord::asymptotics::{compare_exact_vs_asymptotic, estimate_bell, Family, Formula};

fn main() -> bellcord::Result<()> {
    for family in [Family::Bell, Family::Restricted] {
        for (k, x) in [(200, 1.0), (200, 200.0), (200, 20000.0)] {
            let c = compare_exact_vs_asymptotic(k, x, family)?;
            println!(
                "{} k={k} x={x}: regime {} (chi {:.3}), exact {:.6}",
                family.name(),
                c.regime.regime.name(),
                c.regime.chi,
                c.exact_log_per_k
            );
            for r in &c.rows {
                let mark = if r.in_regime { "*" } else { " " };
                println!("   {mark} {:<28} {:>12.6} gap {:.2e}", r.formula.id(), r.estimate, r.gap);
            }
        }
    }

    // the linear-regime gap shrinks like 1/k
    for k in [50, 100, 200, 400] {
        let c = compare_exact_vs_asymptotic(k, k as f64, Family::Bell)?;
        let e = estimate_bell(k, k as f64, Formula::BellLinear)?;
        println!("k={k}: gap {:.3e} ({})", c.gap(Formula::BellLinear).unwrap(), e.log_value_per_k);
    }
    Ok(())
}
