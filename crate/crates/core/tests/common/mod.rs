#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use compound_capacity::prob::{Channel, CompoundDmc, Dist};
use compound_capacity::CodingLaw;

pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// `Y = X ⊕ S ⊕ Z`, `Z ~ Bern(z)`.
pub fn mod_channel(z: f64) -> Channel {
    Channel::from_fn(vec![2, 2], 2, |i| {
        let mut row = vec![z; 2];
        row[i[0] ^ i[1]] = 1.0 - z;
        row
    })
    .unwrap()
}

pub fn mod_pair() -> CompoundDmc {
    CompoundDmc::new(
        vec![mod_channel(0.0), mod_channel(0.11)],
        Dist::uniform(2).unwrap(),
    )
    .unwrap()
}

/// U uniform and independent of S, X = U ⊕ S.
pub fn xor_law() -> CodingLaw {
    CodingLaw::u_only(
        Channel::constant(vec![2], &Dist::uniform(2).unwrap()).unwrap(),
        Channel::deterministic(vec![2, 2], 2, |i| i[0] ^ i[1]).unwrap(),
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_probs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let t: f64 = raw.iter().sum();
    raw.iter().map(|r| r / t).collect()
}

pub fn random_channel(rng: &mut ChaCha8Rng, inputs: Vec<usize>, out: usize) -> Channel {
    let rows: usize = inputs.iter().product();
    let data: Vec<f64> = (0..rows).flat_map(|_| random_probs(rng, out)).collect();
    Channel::new(inputs, out, data).unwrap()
}

pub fn random_dmc(rng: &mut ChaCha8Rng, k: usize, x: usize, s: usize, y: usize) -> CompoundDmc {
    let chans = (0..k).map(|_| random_channel(rng, vec![x, s], y)).collect();
    CompoundDmc::new(chans, Dist::new(random_probs(rng, s)).unwrap()).unwrap()
}

/// Random law with `aux` auxiliaries of size `v`.
pub fn random_law(
    rng: &mut ChaCha8Rng,
    s: usize,
    u: usize,
    v: usize,
    aux: usize,
    x: usize,
) -> CodingLaw {
    let u_given_s = random_channel(rng, vec![s], u);
    let vs = (0..aux)
        .map(|_| random_channel(rng, vec![u, s], v))
        .collect();
    let mut shape = vec![u];
    shape.extend(std::iter::repeat_n(v, aux));
    shape.push(s);
    let x_given = random_channel(rng, shape, x);
    CodingLaw::new(u_given_s, vs, x_given).unwrap()
}

/// Explicit list of `(outcome, probability)` with named coordinates.
pub struct Explicit {
    pub names: Vec<String>,
    pub cells: Vec<(Vec<usize>, f64)>,
}

impl Explicit {
    fn pos(&self, n: &str) -> usize {
        self.names.iter().position(|x| x == n).unwrap()
    }

    pub fn h(&self, group: &[&str]) -> f64 {
        let idx: Vec<usize> = group.iter().map(|g| self.pos(g)).collect();
        let mut m: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (o, p) in &self.cells {
            *m.entry(idx.iter().map(|&i| o[i]).collect()).or_default() += p;
        }
        m.values()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }

    pub fn mi(&self, a: &[&str], b: &[&str]) -> f64 {
        let ab: Vec<&str> = a.iter().chain(b).copied().collect();
        self.h(a) + self.h(b) - self.h(&ab)
    }

    pub fn cmi(&self, a: &[&str], b: &[&str], c: &[&str]) -> f64 {
        let ac: Vec<&str> = a.iter().chain(c).copied().collect();
        let bc: Vec<&str> = b.iter().chain(c).copied().collect();
        let abc: Vec<&str> = a.iter().chain(b).chain(c).copied().collect();
        self.h(&ac) + self.h(&bc) - self.h(&abc) - self.h(c)
    }
}

/// Joint of `S, U, V1..VK, X, Y1..YΘ` written out cell by cell.
pub fn explicit_joint(dmc: &CompoundDmc, law: &CodingLaw) -> Explicit {
    let k = law.num_auxiliaries();
    let ns = dmc.s_size();
    let nu = law.u_size();
    let nx = dmc.x_size();
    let ny = dmc.y_size();
    let nv: Vec<usize> = law.v_given_us().iter().map(|c| c.output_size()).collect();
    let t = dmc.num_components();
    let mut names = vec!["S".to_string(), "U".to_string()];
    names.extend((1..=k).map(|i| format!("V{i}")));
    names.push("X".into());
    names.extend((1..=t).map(|i| format!("Y{i}")));
    let mut cells = Vec::new();
    let mut vs = vec![0usize; k];
    for s in 0..ns {
        for u in 0..nu {
            let base = dmc.state_law().probs()[s] * law.u_given_s().prob(&[s], u);
            loop {
                let mut p = base;
                for (i, &v) in vs.iter().enumerate() {
                    p *= law.v_given_us()[i].prob(&[u, s], v);
                }
                for x in 0..nx {
                    let mut input = vec![u];
                    input.extend(&vs);
                    input.push(s);
                    let px = p * law.x_given_all().prob(&input, x);
                    let mut ys = vec![0usize; t];
                    loop {
                        let mut q = px;
                        for (th, &y) in ys.iter().enumerate() {
                            q *= dmc.channels()[th].prob(&[x, s], y);
                        }
                        let mut o = vec![s, u];
                        o.extend(&vs);
                        o.push(x);
                        o.extend(&ys);
                        cells.push((o, q));
                        if !bump(&mut ys, &vec![ny; t]) {
                            break;
                        }
                    }
                }
                if !bump(&mut vs, &nv) {
                    break;
                }
            }
        }
    }
    Explicit { names, cells }
}

fn bump(idx: &mut [usize], sizes: &[usize]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < sizes[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Theorem-1 style terms from the explicit joint.
pub fn oracle_thm1(j: &Explicit, t: usize) -> Vec<f64> {
    let ius = j.mi(&["U"], &["S"]);
    (1..=t)
        .map(|i| j.mi(&["U"], &[&format!("Y{i}")]) - ius)
        .collect()
}

/// `[t1, t2, pair]` of the two-component superposition bound.
pub fn oracle_thm2(j: &Explicit) -> [f64; 3] {
    let ius = j.mi(&["U"], &["S"]);
    let i1 = j.mi(&["U", "V1"], &["Y1"]);
    let i2 = j.mi(&["U", "V2"], &["Y2"]);
    let s1 = j.cmi(&["V1"], &["S"], &["U"]);
    let s2 = j.cmi(&["V2"], &["S"], &["U"]);
    let v12 = j.cmi(&["V1"], &["V2"], &["U"]);
    let v12s = j.cmi(&["V1", "V2"], &["S"], &["U"]);
    [
        i1 - ius - s1,
        i2 - ius - s2,
        0.5 * (i1 + i2 - 2.0 * ius - v12 - v12s),
    ]
}
