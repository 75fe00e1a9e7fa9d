//! Model heat kernels: flat kernels, the Bessel kernels of the signature
//! model operators and the back-face supertrace.

use cusp_edge::kernels::{
    bkf_pointwise_supertrace, model_heat_residual, nu_from_ab, semigroup_error, BesselOrder, GradingExponents,
    KernelConvention, ModelKernel,
};

fn main() -> cusp_edge::Result<()> {
    for m in [ModelKernel::Euclid, ModelKernel::Circle] {
        println!("{} residual {:.2e}", m.name(), model_heat_residual(&m)?);
    }
    for (k, f) in [(2, 1), (3, 1), (2, 3), (3, 3)] {
        for n in 0..=f {
            let Ok(e) = GradingExponents::new(k, f, n) else { continue };
            for (a, b) in [e.beta_pair(), e.gamma_pair()] {
                let p = nu_from_ab(a, b, KernelConvention::Consistent)?;
                match p.nu {
                    BesselOrder::Real(nu) => println!(
                        "k={k} f={f} N={n} (A,B)=({a},{b}): nu={nu:.4} residual {:.1e} semigroup {:.1e}",
                        p.residual.unwrap_or(f64::NAN),
                        semigroup_error(&p, 1.0, 1.3, 0.3, 0.4)?
                    ),
                    BesselOrder::Imaginary(v) => println!("k={k} f={f} N={n} (A,B)=({a},{b}): nu={v:.4}i, no kernel"),
                }
            }
        }
    }
    match nu_from_ab(-3.0, 0.0, KernelConvention::AsPrinted) {
        Err(e) => println!("flipped drift convention: {e}"),
        Ok(_) => println!("flipped drift convention certified"),
    }
    // degrees N and f − N carry the same Bessel block, so the supertrace vanishes
    for tb in [0.3, 1.0, 3.0] {
        println!("back-face supertrace k=2 f=3 N=0 at T={tb}: {:.3e}", bkf_pointwise_supertrace(2, 3, 0, tb)?);
    }
    Ok(())
}
