//! Lifts of vector fields to the cusp edge double and heat spaces, checked
//! against a finite-difference Jacobian of the blow-down map.

use cusp_edge::blowup::{heat_lift_check, verify_lifts, GeometryParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cusp_edge::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in [2, 3] {
        let g = GeometryParams::new(k, 1, 1)?;
        println!("k = {k}");
        for c in verify_lifts(&g, 100, 1e-8, &mut rng)? {
            println!("  {:<12} {:<70} {:.2e}", c.chart, c.name, c.max_rel_error);
        }
        let h = heat_lift_check(&g)?;
        println!("  heat operator: error exponent {:.3} (need {:.3}), pass {}", h.exponent, h.required, h.pass);
    }
    Ok(())
}
