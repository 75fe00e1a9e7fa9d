//! Index families of the double space: composition and the action on
//! functions, read from the text format used by `cusp-edge indexsets compose`.

use cusp_edge::indexsets::{action_on_function, compose_double, parse_families};

const FAMILIES: &str = "
k = 2
b = 0
cutoff = 4
E.ff = N
E.lf = N+1/2
E.rf = (1,0) (2,1)
E.bkf = empty
F.ff = N
F.lf = (0,0) (1/2,1)
F.rf = empty
F.bkf = empty
u.bdy = N+1/3
";

fn main() -> cusp_edge::Result<()> {
    let file = parse_families(FAMILIES)?;
    let (e, f) = (file.family("E")?, file.family("F")?);
    let g = compose_double(e, f, file.k.unwrap_or(2), file.b.unwrap_or(0))?;
    println!("E o F:\n{g}");
    let u = file.family("u")?.get("bdy")?;
    println!("E acting on a function with boundary index set {u}:");
    println!("  {}", action_on_function(e, u, 0)?);
    Ok(())
}
