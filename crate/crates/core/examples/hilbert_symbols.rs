//! Hilbert symbols, the product formula and Clifford invariants of diagonal forms.
//!
//! cargo run --example hilbert_symbols

use dp4::exact::{hilbert_symbol, rat, LocalPlace};
use dp4::localarith::clifford_invariant;

fn main() -> dp4::Result<()> {
    let pairs = [(-1, -1), (2, 3), (-3, 5), (7, -14), (6, 10)];
    for (a, b) in pairs {
        let (a, b) = (rat(a), rat(b));
        let places = [LocalPlace::Real, LocalPlace::Prime(2), LocalPlace::Prime(3), LocalPlace::Prime(5), LocalPlace::Prime(7)];
        let symbols: Vec<i32> = places.iter().map(|&v| hilbert_symbol(&a, &b, v)).collect::<dp4::Result<_>>()?;
        let product: i32 = symbols.iter().product();
        println!("({a}, {b}) at R,2,3,5,7: {symbols:?}  product {product}");
    }
    let diag = [rat(1), rat(1), rat(1), rat(1), rat(-1)];
    for v in [LocalPlace::Real, LocalPlace::Prime(2), LocalPlace::Prime(3)] {
        println!("Clifford invariant of x1^2 + x2^2 + x3^2 + x4^2 - x5^2 at {v:?}: {}", clifford_invariant(&diag, v)?);
    }
    Ok(())
}
