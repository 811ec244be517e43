//! Kummer-type model at a rational point b, the double cover over the line
//! lambda0 and the genus-2 curve y^2 = a (t - b) P(t).
//!
//! cargo run --example kummer_model

use dp4::canon::{branch_form, genus2_model, kummer_model, DeltaPrime};
use dp4::exact::{rat, RatPoly};

fn main() -> dp4::Result<()> {
    let p = RatPoly::parse("t^5 - 5*t + 12")?;
    let delta = DeltaPrime::one();
    let b = rat(3);
    let k = kummer_model(&p, &delta, &b)?;
    for (i, eq) in k.equations().iter().enumerate() {
        println!("Q{} = {eq}", i + 1);
    }
    let cover = k.lambda0_cover();
    println!("restriction to lambda0 has rank {}; splits into two lines: {}", cover.rank, cover.splits());
    if let Some([r, s]) = &cover.root {
        println!("  x = +-({r} r + {s} s)");
    }
    println!("branch form at b is singular only at roots: {}", branch_form(&p, &delta, &rat(1)).is_ok());
    let g = genus2_model(&p, &b, &rat(-1))?;
    println!("{}", g.equation());
    println!("discriminant d_b = {}", g.d_b);
    Ok(())
}
