//! Real and p-adic solubility certificates at the bad places of a pencil.
//!
//! cargo run --example local_solubility

use dp4::canon::DeltaPrime;
use dp4::exact::{rat, LocalPlace, QMatrix};
use dp4::localarith::{bad_set_s0, padic_soluble, real_soluble, DEFAULT_EFFORT};
use dp4::pencil::{normalize_pencil, Pencil};

fn diag(e: [i64; 5]) -> QMatrix {
    QMatrix::diagonal(&e.map(rat))
}

fn main() -> dp4::Result<()> {
    // the first pencil has the definite member Phi1; the second has none
    for (a, b) in [([1, 1, 1, 1, 1], [1, -2, 3, -5, 7]), ([1, -1, 1, -1, 1], [1, 2, -3, -4, 5])] {
        let pencil = Pencil::new(diag(a), diag(b))?;
        let norm = normalize_pencil(&pencil)?;
        let s0 = bad_set_s0(&norm.p, &DeltaPrime::one(), 20)?;
        println!("Phi1 = diag{a:?}, Phi2 = diag{b:?}, P = {}", norm.p);
        let model = [pencil.phi1().clone(), pencil.phi2().clone()];
        for v in s0.places() {
            let c = match v {
                LocalPlace::Real => real_soluble(&pencil),
                LocalPlace::Prime(p) => padic_soluble(&model, p, DEFAULT_EFFORT),
            };
            println!("  {:<12} {:?}  {}", format!("{v:?}"), c.verdict, serde_json::to_string(&c.witness).unwrap());
        }
    }
    Ok(())
}
