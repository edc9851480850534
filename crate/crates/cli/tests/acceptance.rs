//! Acceptance gate. Each test checks one criterion and prints a single
//! `criterion N: PASS|FAIL ...` line. Run with `--nocapture` to see all lines.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zgunits_core::free::{certify_freeness, certify_hydra};
use zgunits_core::group::{find_witnesses, witness_for, CATALOG};
use zgunits_core::poly::{big_f, sweep_nonvanishing, sweep_power_identity};
use zgunits_core::units::{
    check_power_identity, classify_order, make_family, make_syllables, order_oracle,
    trace_certificate, OracleVerdict, OrderCase, PredictedOrder, SyllableName,
};
use zgunits_core::{CoeffRing, GroupRing, GroupSpec, GroupTable};

fn group(name: &str) -> GroupTable {
    GroupSpec::parse(name).unwrap().build().unwrap()
}

fn report(n: u32, failures: &[String], detail: String) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n}: {verdict} ({detail})");
    for f in failures.iter().take(20) {
        println!("  {f}");
    }
    assert!(
        failures.is_empty(),
        "criterion {n} failed: {} failures",
        failures.len()
    );
}

#[test]
fn criterion_1_classifier_matches_oracle() {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for name in CATALOG {
        let g = group(name);
        let ring = GroupRing::integral(&g);
        for w in find_witnesses(&g, false) {
            for k in 1..=w.order_a {
                let fam = make_family(ring, &w, k).unwrap();
                let predicted = classify_order(w.order_a, k, w.m).unwrap().order;
                let oracle = order_oracle(&fam).unwrap();
                checked += 1;
                if !oracle.agrees_with(predicted) {
                    failures.push(format!(
                        "{name} a={} b={} k={k}: predicted {predicted:?}, oracle {oracle:?}",
                        g.label(w.a),
                        g.label(w.b)
                    ));
                }
            }
        }
    }
    report(
        1,
        &failures,
        format!(
            "{checked} (witness, k) pairs, {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_case_coverage() {
    let mut seen = BTreeSet::new();
    for name in CATALOG {
        let g = group(name);
        for w in find_witnesses(&g, false) {
            for k in 1..=w.order_a {
                seen.insert(format!(
                    "{:?}",
                    classify_order(w.order_a, k, w.m).unwrap().case
                ));
            }
        }
    }
    let mut failures = Vec::new();
    for case in [
        OrderCase::CoprimeStep,
        OrderCase::SubgroupStep,
        OrderCase::Unbounded,
    ] {
        if !seen.contains(&format!("{case:?}")) {
            failures.push(format!("no record of class {case:?}"));
        }
    }

    let check = |name: &str,
                 a: &str,
                 b: &str,
                 k: usize,
                 want: PredictedOrder,
                 oracle_want: OracleVerdict| {
        let g = group(name);
        let w = witness_for(&g, g.find(a).unwrap(), g.find(b).unwrap()).unwrap();
        let fam = make_family(GroupRing::integral(&g), &w, k).unwrap();
        let got = classify_order(w.order_a, k, w.m).unwrap().order;
        let oracle = order_oracle(&fam).unwrap();
        let mut out = Vec::new();
        if got != want || oracle != oracle_want {
            out.push(format!("{name} a={a} b={b} k={k}: {got:?} / {oracle:?}"));
        }
        if want == PredictedOrder::Infinite {
            let t = trace_certificate(&fam).unwrap();
            if t.to_string() != "1" {
                out.push(format!("{name} trace certificate {t}"));
            }
        }
        out
    };
    failures.extend(check(
        "S3",
        "(1 2)",
        "(1 2 3)",
        1,
        PredictedOrder::Finite(2),
        OracleVerdict::Finite(2),
    ));
    failures.extend(check(
        "S3xS3",
        "(1 2 3)(4 5)",
        "(1 2)(4 6)",
        3,
        PredictedOrder::Finite(2),
        OracleVerdict::Finite(2),
    ));
    failures.extend(check(
        "S4",
        "(1 2 3 4)",
        "(1 2)",
        2,
        PredictedOrder::Infinite,
        OracleVerdict::CertifiedInfinite,
    ));
    report(
        2,
        &failures,
        format!(
            "classes seen: {}",
            seen.into_iter().collect::<Vec<_>>().join(", ")
        ),
    );
}

#[test]
fn criterion_3_bounded_freeness() {
    let start = Instant::now();
    let cases = [
        ("S3", "(1 2)", "(1 2 3)", 1, 10, 3),
        ("A4", "(1 2 3)", "(1 2)(3 4)", 1, 8, 3),
        ("A4", "(1 2 3)", "(1 2)(3 4)", 2, 8, 3),
        ("S4", "(1 2 3 4)", "(1 2)", 2, 6, 3),
    ];
    let mut failures = Vec::new();
    let mut words = 0;
    for (name, a, b, k, l, e) in cases {
        let g = group(name);
        let w = witness_for(&g, g.find(a).unwrap(), g.find(b).unwrap()).unwrap();
        let fam = make_family(GroupRing::integral(&g), &w, k).unwrap();
        let rep = certify_freeness(&fam, l, e).unwrap();
        words += rep.words_checked;
        let status = match &rep.counterexample {
            None => "no relation".to_string(),
            Some(word) => {
                failures.push(format!(
                    "{name} a={a} b={b} k={k} L={l} E={e}: {word} = 1 ({})",
                    rep.claimed
                ));
                format!("relation {word}")
            }
        };
        println!(
            "  {name} k={k} L={l} E={e} claimed {}: {} words, {status}",
            rep.claimed, rep.words_checked
        );
    }
    report(
        3,
        &failures,
        format!("{words} words, {:.1}s", start.elapsed().as_secs_f64()),
    );
}

#[test]
fn criterion_4_hydra_relations() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for coeffs in [CoeffRing::Integers, CoeffRing::prime_field(5).unwrap()] {
        for name in CATALOG {
            let g = group(name);
            let ring = GroupRing::new(&g, coeffs);
            for w in find_witnesses(&g, false) {
                for &k in &w.valid_k {
                    let fam = make_family(ring, &w, k).unwrap();
                    let h = certify_hydra(&fam).unwrap();
                    checked += 1;
                    if !h.passed() {
                        failures.push(format!(
                            "{coeffs} {name} a={} b={} k={k}: {h:?}",
                            g.label(w.a),
                            g.label(w.b)
                        ));
                    }
                }
            }
        }
    }
    report(
        4,
        &failures,
        format!("{checked} instances over int and gf:5"),
    );
}

#[test]
fn criterion_5_polynomial_identities() {
    let start = Instant::now();
    let power = sweep_power_identity(24, big_f);
    let nonvanishing = sweep_nonvanishing(16, 3);
    let failures: Vec<String> = power
        .failures
        .iter()
        .chain(&nonvanishing.failures)
        .cloned()
        .collect();
    report(
        5,
        &failures,
        format!(
            "{} power-identity and {} non-vanishing cases, {:.1}s",
            power.checked,
            nonvanishing.checked,
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_6_closed_forms() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for name in CATALOG {
        let g = group(name);
        let ring = GroupRing::integral(&g);
        let bound = 2 * g.exponent();
        for w in find_witnesses(&g, false) {
            for k in 1..=w.order_a {
                let fam = make_family(ring, &w, k).unwrap();
                let mut power = ring.one();
                for i in 0..=bound {
                    checked += 1;
                    if fam.pow_u_closed(i as u64).unwrap() != power {
                        failures.push(format!(
                            "{name} a={} b={} k={k} u^{i}",
                            g.label(w.a),
                            g.label(w.b)
                        ));
                    }
                    power = ring.mul(&power, &fam.u).unwrap();
                }
                if !w.is_valid_k(k) {
                    continue;
                }
                let syl = make_syllables(&fam).unwrap();
                for s in SyllableName::ALL {
                    for m in 1..=bound {
                        checked += 1;
                        if !check_power_identity(&fam, &syl, s, m).unwrap() {
                            failures.push(format!(
                                "{name} a={} b={} k={k} (1 + {s:?})^{m}",
                                g.label(w.a),
                                g.label(w.b)
                            ));
                        }
                    }
                }
            }
        }
    }
    report(
        6,
        &failures,
        format!(
            "{checked} identities, {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_7_annihilator_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    let (mut samples, mut positives) = (0, 0);
    for name in CATALOG {
        let g = group(name);
        if g.order() > 24 {
            continue;
        }
        let ring = GroupRing::integral(&g);
        let n = g.order();
        let mut subgroups = BTreeSet::new();
        for a in 0..n {
            let members: Vec<usize> = g.cyclic_subgroup(a).ones().collect();
            if !subgroups.insert(members) {
                continue;
            }
            let hat = ring.hat(a);
            for _ in 0..1000 {
                let random = |len: usize, rng: &mut ChaCha8Rng| {
                    ring.element((0..len).map(|_| (rng.gen_range(0..n), rng.gen_range(-5i64..=5))))
                };
                let y = random(rng.gen_range(0..4), &mut rng);
                let x = match rng.gen_range(0..4) {
                    0 | 1 => ring.mul(&y, &hat).unwrap(),
                    2 => ring
                        .add(&ring.mul(&y, &hat).unwrap(), &random(1, &mut rng))
                        .unwrap(),
                    _ => random(rng.gen_range(1..6), &mut rng),
                };
                let c = ring.check_annihilator(a, &x).unwrap();
                samples += 1;
                positives += c.annihilates as usize;
                if c.annihilates != c.is_hat_multiple {
                    failures.push(format!("{name} a={}: {}", g.label(a), ring.display(&x)));
                }
            }
        }
    }
    if positives == 0 || positives == samples {
        failures.push("sampler produced only one class".into());
    }
    report(
        7,
        &failures,
        format!("{samples} samples, {positives} annihilators"),
    );
}

#[test]
fn criterion_8_negative_controls() {
    let mut failures = Vec::new();
    for (name, kind) in [("Q8", "non-abelian"), ("C12", "abelian")] {
        let out = Command::new(env!("CARGO_BIN_EXE_zgunits"))
            .args(["scan", "--group", name, "--jobs", "1"])
            .output()
            .unwrap();
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let records = report["records"].as_array().unwrap().len();
        let notes = report["summary"]["notes"].to_string();
        let witnesses = find_witnesses(&group(name), false).len();
        if out.status.code() != Some(0)
            || records != 0
            || witnesses != 0
            || !notes.contains("Dedekind: no non-normal cyclic subgroup")
            || !notes.contains(kind)
        {
            failures.push(format!(
                "{name}: exit {:?}, {records} records, {witnesses} witnesses, notes {notes}",
                out.status.code()
            ));
        }
    }
    report(8, &failures, "Q8 and C12 scans".into());
}
