//! Synthetic Selmer systems: duality, twist laws and a greedy descent.
//!
//! cargo run --example selmer_descent [seed]

use dp4::selmersim::{
    descent_driver, make_system, make_system_with_selmer, selmer, transverse_lagrangians, twist_at,
    verify_pt_duality, DriverMode,
};

fn main() -> dp4::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let sys = make_system(seed, &[2, 2, 1, 2]);
    println!("Selmer dimension {}", selmer(&sys).dim());
    for v in 0..sys.places.len() {
        println!("  place {v}: duality {}", verify_pt_duality(&sys, v));
    }
    let c = sys.places[0].condition.clone();
    for t in transverse_lagrangians(2, &c).iter().take(3) {
        let (_, step) = twist_at(&sys, 0, t)?;
        println!("  twist at 0: n1 {} n2 {} r {} dim {} -> {}", step.n1, step.n2, step.r, step.old_dim, step.new_dim);
    }
    for s in seed..seed + 64 {
        let Ok(start) = make_system_with_selmer(s, &[2, 2, 2, 2, 2, 2], 5) else { continue };
        if let Ok(trace) = descent_driver(&start, 0, DriverMode::A, s) {
            println!("descent from seed {s}: dimensions {:?}, delta_hat {}", trace.dims, trace.delta_hat);
            break;
        }
    }
    Ok(())
}
