//! Build a joint table S → U → X → Y by attaching channels, then read off
//! entropies and (conditional) mutual informations.

use compound_capacity::prob::{
    conditional_mutual_information, mutual_information, Channel, Dist, JointTable,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = Dist::bernoulli(0.11)?.entropy();
    println!("h(0.11) = {h:.6} bits, 1 - h(0.11) = {:.6}", 1.0 - h);

    let s = Dist::uniform(2)?;
    let u_given_s = Channel::from_fn(vec![2], 2, |i| {
        if i[0] == 0 {
            vec![0.8, 0.2]
        } else {
            vec![0.3, 0.7]
        }
    })?;
    let x_given_us = Channel::deterministic(vec![2, 2], 2, |i| i[0] ^ i[1])?;
    let w = Channel::from_fn(vec![2, 2], 2, |i| {
        let clean = i[0] ^ i[1];
        let mut row = vec![0.11; 2];
        row[clean] = 0.89;
        row
    })?;

    let joint = JointTable::product(&[("S", &s)])?
        .attach(&["S"], &u_given_s, "U")?
        .attach(&["U", "S"], &x_given_us, "X")?
        .attach(&["X", "S"], &w, "Y")?;

    println!("H(S,U,X,Y) = {:.6}", joint.entropy(&["S", "U", "X", "Y"])?);
    println!(
        "I(U;S)     = {:.6}",
        mutual_information(&joint, &["U"], &["S"])?
    );
    println!(
        "I(U;Y)     = {:.6}",
        mutual_information(&joint, &["U"], &["Y"])?
    );
    println!(
        "I(X;Y|S)   = {:.6}",
        conditional_mutual_information(&joint, &["X"], &["Y"], &["S"])?
    );
    let gp =
        mutual_information(&joint, &["U"], &["Y"])? - mutual_information(&joint, &["U"], &["S"])?;
    println!("Gel'fand-Pinsker rate of this law: {gp:.6} bits");
    Ok(())
}
