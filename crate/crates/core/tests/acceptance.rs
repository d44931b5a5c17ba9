//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Every criterion also emits a CSV artifact; the last criterion regenerates
//! all of them and compares bytes. Artifacts are written under
//! `$CARGO_TARGET_TMPDIR/acceptance/`.

mod common;

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use common::*;

use compound_capacity::degraded::test_degraded;
use compound_capacity::fm::{verify_thm2_variant, verify_thmk, Thm2Variant};
use compound_capacity::gdp::{
    awgn_capacity, rate_lower_opt, rate_lower_opt_numeric, rate_upper, sweep, sweep_csv, GdpParams,
    LowerRegime, SweepSpec,
};
use compound_capacity::gp::{
    feedback_capacity, maximize_bound, thm1_lower_bound, thm2_rate, thm3_rate, Bound,
};
use compound_capacity::prob::{compose, Channel};
use compound_capacity::{Degradedness, LawShape, SearchConfig};

const SEED: u64 = 20_241_014;

struct Outcome {
    ok: bool,
    detail: String,
    csv: String,
}

fn outcome(failures: Vec<String>, detail: String, csv: String) -> Outcome {
    let ok = failures.is_empty();
    let detail = if ok {
        detail
    } else {
        format!("{detail}; {}", failures.join("; "))
    };
    Outcome { ok, detail, csv }
}

fn timed(limit: Duration, started: Instant, failures: &mut Vec<String>) -> String {
    let t = started.elapsed();
    if t > limit {
        failures.push(format!("took {t:.2?}, limit {limit:?}"));
    }
    format!("{t:.2?}")
}

fn figure1_sweep() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let base = GdpParams::new(1.0, 0.1, 1.0, &[-1.0, 1.0]).unwrap();
    let rows = sweep(&base, &SweepSpec::default()).unwrap();
    if rows.len() != 200 {
        fails.push(format!("{} rows", rows.len()));
    }
    let bad = rows
        .iter()
        .filter(|r| r.lower.bits > r.upper.bits + 1e-9)
        .count();
    if bad > 0 {
        fails.push(format!("{bad} rows with lower > upper"));
    }
    let lower = rate_lower_opt(&base).bits;
    let upper = rate_upper(&base).unwrap().bits;
    for (name, v) in [("lower", lower), ("upper", upper)] {
        if (v - 0.86569).abs() > 1e-3 {
            fails.push(format!("{name} at Q = 1 is {v}"));
        }
    }
    let t = timed(Duration::from_secs(5), start, &mut fails);
    let detail = format!("200 points, lower {lower:.6} / upper {upper:.6} at Q = 1, {t}");
    outcome(fails, detail, sweep_csv(&rows))
}

fn closed_form_vs_lattice() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let theta_sets: [&[f64]; 7] = [
        &[-1.0, 1.0],
        &[-0.5, 0.5],
        &[0.5, 1.0],
        &[0.5, 2.0],
        &[-0.5, 1.0],
        &[0.2, 0.6, 1.0],
        &[1.0, 3.0],
    ];
    let qs = [0.01, 0.1, 1.0, 10.0, 100.0];
    let mut csv = String::from("thetas,Q,branch,regime,closed_bits,lattice_bits,diff\n");
    let mut seen = std::collections::BTreeSet::new();
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for thetas in theta_sets {
        for q in qs {
            let p = GdpParams::new(1.0, 0.1, q, thetas).unwrap();
            let closed = rate_lower_opt(&p);
            let lattice = rate_lower_opt_numeric(&p, 1e-3).unwrap();
            let diff = (closed.bits - lattice.bits).abs();
            worst = worst.max(diff);
            if diff > 2e-3 {
                fails.push(format!("Θ = {thetas:?}, Q = {q}: diff {diff:.2e}"));
            }
            let branch = if p.is_symmetric() {
                "symmetric"
            } else {
                "asymmetric"
            };
            seen.insert((branch, closed.regime.name()));
            count += 1;
            let _ = writeln!(
                csv,
                "\"{thetas:?}\",{q},{branch},{},{:.9},{:.9},{diff:.3e}",
                closed.regime, closed.bits, lattice.bits
            );
        }
    }
    for regime in [
        LowerRegime::DirtyPaper,
        LowerRegime::Superposition,
        LowerRegime::TimeSharing,
    ] {
        for branch in ["symmetric", "asymmetric"] {
            if !seen.contains(&(branch, regime.name())) {
                fails.push(format!("no {branch} set in the {regime} regime"));
            }
        }
    }

    // continuity across every regime change found along Q
    let mut jumps: f64 = 0.0;
    let mut boundaries = 0;
    for thetas in theta_sets {
        let regime_at = |q: f64| rate_lower_opt(&GdpParams::new(1.0, 0.1, q, thetas).unwrap());
        let grid: Vec<f64> = (0..=120)
            .map(|i| 10f64.powf(-3.0 + i as f64 / 20.0))
            .collect();
        for w in grid.windows(2) {
            let (mut a, mut b) = (w[0], w[1]);
            if regime_at(a).regime == regime_at(b).regime {
                continue;
            }
            let ra = regime_at(a).regime;
            while b - a > 1e-12 * b {
                let m = 0.5 * (a + b);
                if regime_at(m).regime == ra {
                    a = m;
                } else {
                    b = m;
                }
            }
            boundaries += 1;
            let jump = (regime_at(a).bits - regime_at(b).bits).abs();
            jumps = jumps.max(jump);
            let _ = writeln!(csv, "\"{thetas:?}\",{a:.12},boundary,{ra},,,{jump:.3e}");
        }
    }
    if boundaries == 0 {
        fails.push("no regime boundary found".into());
    }
    if jumps > 1e-6 {
        fails.push(format!("jump of {jumps:.2e} bits at a regime boundary"));
    }
    if count < 30 {
        fails.push(format!("only {count} parameter sets"));
    }
    let t = timed(Duration::from_secs(60), start, &mut fails);
    let detail = format!(
        "{count} sets, max diff {worst:.2e}, {boundaries} boundaries with max jump {jumps:.2e}, {t}"
    );
    outcome(fails, detail, csv)
}

fn anchors() -> Outcome {
    let mut fails = Vec::new();
    let mut csv = String::from("case,P,N,thetas,bits,reference,diff\n");
    let mut worst_q0: f64 = 0.0;
    for (p, n) in [(1.0, 0.1), (10.0, 1.0), (0.3, 2.0)] {
        for thetas in [[-1.0, 1.0], [0.5, 1.0], [1.0, 3.0]] {
            let params = GdpParams::new(p, n, 0.0, &thetas).unwrap();
            let r = rate_lower_opt(&params).bits;
            let d = (r - awgn_capacity(p, n)).abs();
            worst_q0 = worst_q0.max(d);
            let _ = writeln!(
                csv,
                "Q=0,{p},{n},\"{thetas:?}\",{r:.12},{:.12},{d:.3e}",
                awgn_capacity(p, n)
            );
        }
    }
    if worst_q0 > 1e-12 {
        fails.push(format!("Q = 0 off by {worst_q0:.2e}"));
    }
    // the stated high-SNR case, with the compound upper bound alongside
    let thetas = [0.5, 2.0];
    let params = GdpParams::new(1e6, 0.1, 1.0, &thetas).unwrap();
    let r = rate_lower_opt(&params).bits;
    let upper = rate_upper(&params).unwrap().bits;
    let reference = awgn_capacity(1e6, 0.1);
    let gap = reference - r;
    let _ = writeln!(
        csv,
        "P=1e6,1e6,0.1,\"{thetas:?}\",{r:.9},{reference:.9},{gap:.3e}"
    );
    let _ = writeln!(
        csv,
        "P=1e6 upper,1e6,0.1,\"{thetas:?}\",{upper:.9},{reference:.9},{:.3e}",
        reference - upper
    );
    if gap > 0.01 {
        fails.push(format!(
            "P = 1e6 lower bound {gap:.4} bits below ½log₂(1+P/N)"
        ));
    }
    let detail = format!(
        "Q = 0 max diff {worst_q0:.1e}; P = 1e6, Θ = {thetas:?}: lower {r:.4}, upper {upper:.4}, ½log₂(1+P/N) {reference:.4}"
    );
    outcome(fails, detail, csv)
}

fn reduction_identities() -> Outcome {
    let mut fails = Vec::new();
    let mut g = rng(SEED);
    let mut csv = String::from("law,u,v,thm1,thm2,thm3,thm2_copied,max_term_err\n");
    let (mut e32, mut e21, mut eterm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..100 {
        let u = 2 + i % 2;
        let v = 2 + (i / 2) % 2;
        let dmc = random_dmc(&mut g, 2, 2, 2, 2);
        let law = random_law(&mut g, 2, u, v, 2, 2);
        let u_only = random_law(&mut g, 2, u, v, 0, 2);
        let t1 = thm1_lower_bound(&dmc, &law).unwrap();
        let t2 = thm2_rate(&dmc, &law).unwrap();
        let t3 = thm3_rate(&dmc, &law).unwrap();
        let copied = u_only.with_copied_auxiliaries(2).unwrap();
        let t2c = thm2_rate(&dmc, &copied).unwrap();
        let t1c = thm1_lower_bound(&dmc, &copied).unwrap();
        e32 = e32.max((t3.raw_bits - t2.report.raw_bits).abs());
        e21 = e21.max((t2c.report.value_bits - t1c.value_bits).abs());
        let j = explicit_joint(&dmc, &law);
        let mut err: f64 = 0.0;
        for (t, w) in t2.report.terms.iter().zip(oracle_thm2(&j)) {
            err = err.max((t.bits - w).abs());
        }
        for (t, w) in t1.terms.iter().zip(oracle_thm1(&j, 2)) {
            err = err.max((t.bits - w).abs());
        }
        if t2.forms_differ {
            fails.push(format!("law {i}: the two pair forms differ"));
        }
        eterm = eterm.max(err);
        let _ = writeln!(
            csv,
            "{i},{u},{v},{:.12},{:.12},{:.12},{:.12},{err:.3e}",
            t1.raw_bits, t2.report.raw_bits, t3.raw_bits, t2c.report.raw_bits
        );
    }
    if e32 > 1e-9 {
        fails.push(format!("thm3 vs thm2 {e32:.2e}"));
    }
    if e21 > 1e-12 {
        fails.push(format!("copied thm2 vs thm1 {e21:.2e}"));
    }
    if eterm > 1e-9 {
        fails.push(format!("term recomputation {eterm:.2e}"));
    }
    outcome(
        fails,
        format!(
            "100 laws, |thm3-thm2| {e32:.1e}, |thm2(V=U)-thm1| {e21:.1e}, term error {eterm:.1e}"
        ),
        csv,
    )
}

fn mod_benchmark() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let dmc = mod_pair();
    let shape = LawShape::default_for(&dmc, 0);
    let cfg = SearchConfig {
        restarts: 32,
        seed: SEED,
        ..SearchConfig::default()
    };
    let (thm1, search) = maximize_bound(&dmc, Bound::CompoundGp, &shape, &cfg, &[]).unwrap();
    let warm = shape.law_from_point(&search.best_point).unwrap();
    let fb = feedback_capacity(&dmc, &shape, &cfg, &[warm]).unwrap();
    if thm1.value_bits < 0.49 {
        fails.push(format!("thm1 optimum {}", thm1.value_bits));
    }
    if fb.report.value_bits < thm1.value_bits - 1e-9 {
        fails.push(format!(
            "feedback {} below thm1 {}",
            fb.report.value_bits, thm1.value_bits
        ));
    }
    let t = timed(Duration::from_secs(120), start, &mut fails);
    let csv = format!(
        "{}{}",
        thm1.csv_header(),
        [thm1.csv_row(), fb.report.csv_row()].concat()
    ) + &search.trace_csv();
    let detail = format!(
        "|U| = {}, thm1 {:.6}, feedback {:.6}, {t}",
        shape.u, thm1.value_bits, fb.report.value_bits
    );
    outcome(fails, detail, csv)
}

fn fm_checks() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let full = verify_thm2_variant(Thm2Variant::Full);
    if !full.exact() {
        fails.push("two-receiver projection differs from the targets".into());
    }
    if full.essential.len() != 3 {
        fails.push(format!("{} essential rows", full.essential.len()));
    }
    let dropped = verify_thm2_variant(Thm2Variant::WithoutMartonSum);
    if dropped.implies(&full.targets[2]) {
        fails.push("pair bound survives without the joint-typicality row".into());
    }
    if !verify_thm2_variant(Thm2Variant::CollapsedAuxiliaries).exact() {
        fails.push("collapsed projection differs".into());
    }
    let k1 = verify_thmk(1).unwrap();
    let k3 = verify_thmk(3).unwrap();
    if !k1.exact() || !k3.exact() {
        fails.push("K = 1 or K = 3 projection differs".into());
    }
    let sources = [
        include_str!("../src/fm/mod.rs"),
        include_str!("../src/fm/lp.rs"),
        include_str!("../src/fm/parse.rs"),
        include_str!("../src/fm/derivation.rs"),
    ];
    let floats = sources
        .iter()
        .flat_map(|s| s.lines())
        .filter(|l| l.contains("f64") || l.contains("f32"))
        .count();
    if floats > 0 {
        fails.push(format!("{floats} lines mention floating-point types"));
    }
    let t = timed(Duration::from_secs(10), start, &mut fails);
    let mut csv = String::from("check,kind,inequality\n");
    for (name, c) in [("thm2", &full), ("k1", &k1), ("k3", &k3)] {
        for r in &c.essential {
            let _ = writeln!(csv, "{name},essential,\"{r}\"");
        }
    }
    for r in dropped.projection.rows() {
        let _ = writeln!(csv, "without-marton,projection,\"{r}\"");
    }
    let detail = format!(
        "3 bounds recovered, pair bound gone without the sum row, K = 1/3 exact ({} rows for K = 3), no floats, {t}",
        k3.essential.len()
    );
    outcome(fails, detail, csv)
}

fn degradedness() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut g = rng(SEED ^ 7);
    let mut csv = String::from("pair,x,s,y1,y2,verdict,residual\n");
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let (x, s, y1, y2) = (2 + i % 2, 1 + i % 3, 2 + i % 3, 2 + (i / 3) % 3);
        let w1 = random_channel(&mut g, vec![x, s], y1);
        let w2 = compose(&w1, &random_channel(&mut g, vec![y1], y2)).unwrap();
        let t = test_degraded(&w1, &w2).unwrap();
        worst = worst.max(t.residual);
        if t.verdict != Degradedness::Feasible {
            fails.push(format!("pair {i}: {:?}", t.verdict));
        }
        let _ = writeln!(
            csv,
            "{i},{x},{s},{y1},{y2},{:?},{:.3e}",
            t.verdict, t.residual
        );
    }
    if worst >= 1e-9 {
        fails.push(format!("residual {worst:.2e}"));
    }
    let anti = test_degraded(&Channel::bsc(0.3).unwrap(), &Channel::bsc(0.1).unwrap()).unwrap();
    if anti.verdict != Degradedness::Infeasible {
        fails.push(format!("BSC(0.3) → BSC(0.1) reported {:?}", anti.verdict));
    }
    let _ = writeln!(csv, "bsc,2,1,2,2,{:?},{:.3e}", anti.verdict, anti.residual);
    let t = timed(Duration::from_secs(30), start, &mut fails);
    let detail = format!(
        "50 feasible pairs, max residual {worst:.1e}, BSC(0.3)→BSC(0.1) {:?}, {t}",
        anti.verdict
    );
    outcome(fails, detail, csv)
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 7] = [
    ("figure-1 sweep", figure1_sweep),
    ("closed form vs lattice", closed_form_vs_lattice),
    ("interference-free and high-SNR anchors", anchors),
    ("discrete reduction identities", reduction_identities),
    ("mod-channel benchmark", mod_benchmark),
    ("Fourier-Motzkin verification", fm_checks),
    ("degradedness tester", degradedness),
];

fn write_artifacts(run: &str, csvs: &[String]) {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"))
        .join("acceptance")
        .join(run);
    std::fs::create_dir_all(&dir).unwrap();
    for (i, csv) in csvs.iter().enumerate() {
        std::fs::write(dir.join(format!("criterion{}.csv", i + 1)), csv).unwrap();
    }
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    let mut first = Vec::new();
    for (i, (name, f)) in CRITERIA.iter().enumerate() {
        let o = f();
        lines.push((
            o.ok,
            format!(
                "{} {}. {name}: {}",
                if o.ok { "PASS" } else { "FAIL" },
                i + 1,
                o.detail
            ),
        ));
        println!("{}", lines.last().unwrap().1);
        first.push(o.csv);
    }
    write_artifacts("run1", &first);

    let second: Vec<String> = CRITERIA.iter().map(|(_, f)| f().csv).collect();
    write_artifacts("run2", &second);
    let differing: Vec<usize> = (0..first.len())
        .filter(|&i| first[i] != second[i])
        .map(|i| i + 1)
        .collect();
    let bytes: usize = first.iter().map(String::len).sum();
    let ok = differing.is_empty();
    let line = if ok {
        format!(
            "PASS 8. determinism: {} artifacts ({bytes} bytes) byte-identical across two runs",
            first.len()
        )
    } else {
        format!("FAIL 8. determinism: artifacts {differing:?} differ between runs")
    };
    println!("{line}");
    lines.push((ok, line));

    let failed: Vec<&String> = lines.iter().filter(|(ok, _)| !ok).map(|(_, l)| l).collect();
    assert!(
        failed.is_empty(),
        "failed criteria:\n{}",
        failed
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    );
}
