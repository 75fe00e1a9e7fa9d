//! Supertraces in the complexified Clifford algebra, computed through the
//! symbol map and checked against the spinor representation.

use cusp_edge::clifford::{
    random_element, spinor_rep, GaussRat, split_trace, supertrace_even, trace_odd, volume_element, TraceConvention,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cusp_edge::Result<()> {
    for k in 1..=5 {
        println!("str(gamma_{}) = {}", 2 * k, supertrace_even(&volume_element(2 * k)?)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rep = spinor_rep(6)?;
    let a = random_element(&mut rng, 6, 12).add(&volume_element(6)?.scale(GaussRat::from_ints(2, 1)))?;
    println!("random element of Cl(6): {} terms", a.len());
    println!("  symbol supertrace {}", supertrace_even(&a)?);
    println!("  matrix supertrace {}", rep.matrix_supertrace(&a)?);

    let b = random_element(&mut rng, 5, 10);
    let direct = trace_odd(&b, TraceConvention::PositiveHalf)?;
    for n in 0..=5 {
        let split = split_trace(&b, n, TraceConvention::PositiveHalf)?;
        println!("Cl(5) trace split after {n} generators: {split} (direct {direct})");
    }
    Ok(())
}
