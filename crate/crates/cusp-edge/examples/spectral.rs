//! Cusp Dirac spectrum with an antiperiodic circle fiber, its heat
//! supertrace, the Weyl ratio of the scalar cusp Laplacian and the model
//! domain ODE.

use cusp_edge::blowup::GeometryParams;
use cusp_edge::spectral::{
    build_grid, domain_ode_check, laplace_weyl, run_dirac_scenario, torus_weyl_ratio, DiracScenario, GridScheme,
};

fn main() -> cusp_edge::Result<()> {
    let scenario = DiracScenario { grid: 2000, ..DiracScenario::default() };
    let report = run_dirac_scenario(&scenario)?;
    println!("{:>6} {:>12} {:>12}", "mu", "gap", "rel change");
    for m in &report.modes {
        println!("{:>6} {:>12.6} {:>12.2e}", m.mu, m.gap, m.max_rel_change);
    }
    println!("min gap {:.6}, gaps grow with |mu|: {}", report.min_gap, report.gap_grows);
    for (t, v) in report.supertrace.t.iter().zip(&report.supertrace.values) {
        println!("Str exp(-{t:.2} D^2) = {v:+.3e}");
    }

    let g = GeometryParams::new(3, 1, 0)?;
    let weyl = laplace_weyl(&g, 1.0, 2000, &[1000.0, 2000.0, 4000.0])?;
    for (l, r) in weyl.lambdas.iter().zip(&weyl.ratios) {
        println!("Weyl ratio at lambda = {l}: {r:.4}");
    }
    println!("flat torus at lambda = 4000: {:.4}", torus_weyl_ratio(4000.0));

    let grid = build_grid(GridScheme::Graded(2.0), 200, 1.0, &g)?;
    for lambda in [-2.0, 2.0] {
        let r = domain_ode_check(lambda, &g, &|y: f64| y.sqrt(), &grid)?;
        println!(
            "lambda = {lambda}: weighted norms {:?}, converged {}, second solution diverges {:?}",
            r.weighted_norms, r.norm_converged, r.second_solution_diverges
        );
    }
    Ok(())
}
