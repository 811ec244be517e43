//! Canonical pair of quadrics for (P, delta'), the pencil identity and the
//! round trip back to the invariants.
//!
//! cargo run --example canonical_models ["t^5 - 2" ["delta'"]]

use dp4::canon::{canonical_quadrics, euler_traces, roundtrip_invariants, DeltaPrime};
use dp4::exact::RatPoly;

fn main() -> dp4::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let p = RatPoly::parse(args.first().map_or("t^5 - 2", String::as_str))?;
    let delta = match args.get(1) {
        Some(d) => DeltaPrime::Global(RatPoly::parse(d)?),
        None => DeltaPrime::one(),
    };
    let traces: Vec<String> = euler_traces(&p, 6)?.iter().map(|t| t.to_string()).collect();
    println!("traces of theta^k / P'(theta), k = 0..5: {}", traces.join(", "));
    let m = canonical_quadrics(&p, &delta)?;
    for (i, eq) in m.equations().iter().enumerate() {
        println!("Q{} = {eq}", i + 1);
    }
    println!("det(t Q1 - Q2) = {}", m.pencil_determinant());
    println!("equals a square times P: {}", m.pencil_identity_holds());
    println!("contains the line u = r + s theta: {}", m.contains_lambda0());
    let rt = roundtrip_invariants(&p, &delta)?;
    println!("round trip: P recovered {}, flags {:?}, ok {}", rt.p_matches, rt.recovered_flags, rt.ok());
    Ok(())
}
