//! Characteristic quintic, delta square classes and the Brauer quotient of a pencil.
//!
//! cargo run --example pencil_invariants [path/to/pencil.json]

use dp4::galois::galois_group_quintic;
use dp4::pencil::{b_delta_group, delta_invariant, diagonal_pencil, hasse_class, verify_norm_square, Pencil};

fn main() -> dp4::Result<()> {
    let pencil = match std::env::args().nth(1) {
        Some(path) => Pencil::from_json(&std::fs::read_to_string(path).expect("readable file"))?,
        None => diagonal_pencil(&[1, 2, 3, 5, 7]),
    };
    println!("det(Phi1 - t Phi2) = {}", pencil.det_poly());
    let inv = delta_invariant(&pencil)?;
    println!("chart {}", inv.chart.to_value());
    println!("P = {}", inv.p);
    for ((f, d), flag) in inv.factors.iter().zip(&inv.delta_reps).zip(&inv.square_flags) {
        println!("  factor {f:<24} delta = {d:<20} {flag:?}");
    }
    println!("norm of delta is a square: {}", verify_norm_square(&inv));
    let b = b_delta_group(&inv)?;
    println!("Brauer quotient dimension {} over support {:?}", b.dimension, b.support);
    let class = hasse_class(&inv, &galois_group_quintic(&inv.p)?)?;
    println!("classification {:?}", class.kind);
    Ok(())
}
