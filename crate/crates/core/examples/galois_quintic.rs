//! Galois groups of quintics with their Frobenius cycle-type evidence.
//!
//! cargo run --example galois_quintic ["t^5 - t + 1"]

use dp4::exact::RatPoly;
use dp4::galois::galois_group_quintic;

fn main() -> dp4::Result<()> {
    let inputs: Vec<String> = match std::env::args().nth(1) {
        Some(p) => vec![p],
        None => [
            "t^5 - 110*t^3 - 55*t^2 + 2310*t + 979",
            "t^5 - 5*t + 12",
            "t^5 - 2",
            "t^5 + 20*t + 16",
            "t^5 - t + 1",
            "t^5 - 5*t^3 + 4*t",
        ]
        .map(String::from)
        .to_vec(),
    };
    for s in inputs {
        let p = RatPoly::parse(&s)?;
        let g = galois_group_quintic(&p)?;
        let first: Vec<String> = g.evidence.iter().take(6).map(|(q, t)| format!("{q}:{t:?}")).collect();
        let note = if g.is_probabilistic() { " (no 221 class below the bound)" } else { "" };
        println!("{s:<40} {:<10} square disc {:<5} {}{note}", g.label.to_string(), g.disc_is_square, first.join(" "));
    }
    Ok(())
}
