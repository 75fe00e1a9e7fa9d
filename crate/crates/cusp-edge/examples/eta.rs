//! Eta invariants of twisted circles and the index and signature
//! predictions assembled from them.

use cusp_edge::blowup::GeometryParams;
use cusp_edge::charforms::{
    circle_spectrum, eta_heat, eta_zeta_circle, index_prediction, signature_prediction, EtaInput, FiberSpin,
    IndexGeometry,
};

fn main() -> cusp_edge::Result<()> {
    for a in [0.1, 0.25, 0.4, 0.5] {
        let heat = eta_heat(&circle_spectrum(a, 2000))?;
        println!("a = {a}: heat {:.8} zeta {:.8}", heat.value, eta_zeta_circle(a).value);
    }
    let params = GeometryParams::new(3, 1, 0)?;
    for (spin, twist) in [(FiberSpin::Antiperiodic, 0.0), (FiberSpin::Periodic, 0.25)] {
        let p = index_prediction(&IndexGeometry { params, spin, twist, interior: None })?;
        println!("{spin:?} twist {twist}: index prediction {:.6}", p.prediction);
        for t in &p.terms {
            println!("  {} = {:.6}", t.name, t.value);
        }
    }
    let s = signature_prediction(1.0, &EtaInput::Spectrum(circle_spectrum(0.3, 2000)))?;
    println!("signature with interior L = 1, twist 0.3: {:.6}", s.prediction);
    Ok(())
}
