//! Roots of u·e^u = β and u·(e^u − 1) = β with their large-β expansions.

use bellcord::lambert::{h_of_u, lambert_expansion, restricted_exponent, solve_lambert, LambertKind, DEFAULT_TOL};

fn main() -> bellcord::Result<()> {
    for kind in [LambertKind::Classical, LambertKind::Modified] {
        println!("{} kind", kind.name());
        for beta in [1e-6, 0.5, 1.0, std::f64::consts::E, 100.0, 1e6, 1e100, 1e300] {
            let s = solve_lambert(beta, kind, DEFAULT_TOL)?;
            let approx = lambert_expansion(beta, kind).map(|a| format!("{a:.10}")).unwrap_or_else(|_| "-".into());
            println!(
                "  beta={beta:<10e} u={:<22.16} residual={:<10.2e} iters={:<3} expansion={approx}",
                s.u, s.residual, s.iterations
            );
        }
    }
    for u in [0.1, 1.0, 5.0] {
        println!("u={u}: h(u) = {:.12}, restricted exponent = {:.12}", h_of_u(u)?, restricted_exponent(u)?);
    }
    Ok(())
}
