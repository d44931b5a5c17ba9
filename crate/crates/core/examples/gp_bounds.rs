//! Evaluate the discrete bounds on the compound binary mod pair
//! Y = X ⊕ S ⊕ Z with Z ~ Bern(0) for one component and Bern(0.11) for the other.

use compound_capacity::gp::{thm1_lower_bound, thm2_rate, thm3_rate, thm4_rate, DegradedCheck};
use compound_capacity::prob::{Channel, CompoundDmc, Dist};
use compound_capacity::{CodingLaw, DegradedChainLaw};

fn mod_channel(z: f64) -> Result<Channel, compound_capacity::prob::ProbError> {
    Channel::from_fn(vec![2, 2], 2, |i| {
        let mut row = vec![z; 2];
        row[i[0] ^ i[1]] = 1.0 - z;
        row
    })
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dmc = CompoundDmc::new(
        vec![mod_channel(0.0)?, mod_channel(0.11)?],
        Dist::uniform(2)?,
    )?;

    // U uniform and independent of S, X = U ⊕ S
    let u = Channel::constant(vec![2], &Dist::uniform(2)?)?;
    let x = Channel::deterministic(vec![2, 2], 2, |i| i[0] ^ i[1])?;
    let law = CodingLaw::u_only(u, x)?;
    print!("{}", thm1_lower_bound(&dmc, &law)?);

    // both satellites copy U: the superposition bounds collapse onto the one above
    let copied = law.with_copied_auxiliaries(2)?;
    let t2 = thm2_rate(&dmc, &copied)?;
    print!("{}", t2.report);
    println!(
        "pair term, two forms: {:.9} / {:.9}",
        t2.pair_split_bits, t2.pair_conditional_bits
    );
    print!("{}", thm3_rate(&dmc, &copied)?);

    // the noisy component is a degraded version of the clean one
    let v_last = Channel::constant(vec![2], &Dist::uniform(2)?)?;
    let link = Channel::deterministic(vec![2, 2], 2, |i| i[1])?;
    let x_chain = Channel::deterministic(vec![2, 2], 2, |i| i[0] ^ i[1])?;
    let chain = DegradedChainLaw::new(v_last, vec![link], x_chain)?;
    print!("{}", thm4_rate(&dmc, &chain, DegradedCheck::Verify)?);
    Ok(())
}
