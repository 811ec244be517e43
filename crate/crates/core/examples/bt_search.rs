//! Search for b and primes v with val_v(P(b)) = 1 and prescribed signed
//! Frobenius types, then show the parity ledger of a quadratic twist.
//!
//! cargo run --release --example bt_search

use dp4::canon::DeltaPrime;
use dp4::exact::{rat, RatPoly};
use dp4::localarith::{bad_set_s0, delta_residue_at, find_bt, parity_ledger, DEFAULT_MARGIN};

fn main() -> dp4::Result<()> {
    let p = RatPoly::parse("t^5 - 5*t + 12")?;
    let delta = DeltaPrime::Global(RatPoly::parse("-12*t")?);
    let s0 = bad_set_s0(&p, &delta, DEFAULT_MARGIN)?;
    for classes in [vec!["2'2'1", "221"], vec!["221"]] {
        let classes: Vec<String> = classes.into_iter().map(String::from).collect();
        let w = find_bt(&p, &delta, &classes, &s0, 100_000)?;
        println!("classes {classes:?}: b = {}", w.b);
        for q in &w.primes {
            let r = delta_residue_at(&p, &delta, q.p)?;
            println!("  v = {:<6} type {:<6} val {} residue {} (zero: {})", q.p, q.class, q.valuation, r.class, q.residue_zero);
        }
        let semistable: Vec<u64> = w.primes.iter().filter(|q| q.residue_zero).map(|q| q.p).collect();
        let ledger = parity_ledger(&p, &w.b_value, &rat(-1), &s0, &semistable)?;
        println!(
            "  twist by sqrt(-1): resolved product {}, unresolved places {}",
            ledger.resolved_product,
            ledger.unknown.len()
        );
    }
    Ok(())
}
