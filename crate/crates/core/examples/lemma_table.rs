//! H^1 of the transitive subgroups of S5 on the zero-sum module and the
//! degree of its centralizer field.
//!
//! cargo run --example lemma_table

use dp4::groupmod::lemma_table;

fn main() -> dp4::Result<()> {
    println!("{:<6} {:>5} {:>4} {:>3} {:>7}", "group", "order", "H1", "r", "simple");
    for row in lemma_table()? {
        println!("{:<6} {:>5} {:>4} {:>3} {:>7}", row.group, row.order, row.h1_dim, row.r, row.simple);
        assert!(row.pass, "{} disagrees with the expected values", row.group);
    }
    Ok(())
}
