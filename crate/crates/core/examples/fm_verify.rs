//! Project the two-receiver encoding/decoding constraints onto the rate and
//! compare with the published bounds, then repeat for K = 1 and K = 3.

use compound_capacity::fm::{verify_thm2, verify_thm2_variant, verify_thmk, Thm2Variant};

fn main() {
    let full = verify_thm2();
    println!("== two receivers ==\n{full}");

    let dropped = verify_thm2_variant(Thm2Variant::WithoutMartonSum);
    println!("== without the S1 + S2 constraint ==");
    for r in &dropped.essential {
        println!("  {r}");
    }

    let collapsed = verify_thm2_variant(Thm2Variant::CollapsedAuxiliaries);
    println!("== V1 = V2 = U ==");
    for r in &collapsed.essential {
        println!("  {r}");
    }

    for k in [1, 3] {
        let c = verify_thmk(k).expect("k in range");
        println!(
            "== K = {k}: {} essential rows, exact = {} ==",
            c.essential.len(),
            c.exact()
        );
        for r in &c.essential {
            println!("  {r}");
        }
    }
}
