//! Acceptance suite. Each test prints one pass/fail line for its criterion;
//! all tolerances are exact (no floating point anywhere in the engine).

mod common;

use pilift::builtins;
use pilift::chartab::{character_table, induce_between, inner_product, irreducibles, restrict_between};
use pilift::pi_theory::ipi;
use pilift::primes::PrimeSet;
use pilift::series::enumerate_normal_pi_series;
use pilift::verification::{run_corpus, SuiteReport};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

const CAP: usize = 5000;

fn pset(ps: &[u64]) -> PrimeSet {
    PrimeSet::new(ps.iter().copied()).unwrap()
}

/// One full corpus run shared by the criteria that consume it.
fn corpus_report() -> &'static SuiteReport {
    static REPORT: OnceLock<SuiteReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let names: Vec<String> = pilift::verification::default_corpus_names()
            .into_iter()
            .map(|s| s.to_string())
            .collect();
        run_corpus(&names, None, 1, pilift::verification::DEFAULT_SERIES_CAP, CAP).unwrap()
    })
}

fn failures_of(report: &SuiteReport, names: &[&str]) -> Vec<String> {
    report
        .entries
        .iter()
        .flat_map(|e| {
            e.checks
                .iter()
                .filter(|c| names.contains(&c.name.as_str()))
                .flat_map(move |c| {
                    c.failures
                        .iter()
                        .map(move |f| format!("{} pi={:?} [{}] {}", e.group, e.pi, c.name, f))
                })
        })
        .collect()
}

fn checked_of(report: &SuiteReport, names: &[&str]) -> usize {
    report
        .entries
        .iter()
        .flat_map(|e| e.checks.iter())
        .filter(|c| names.contains(&c.name.as_str()))
        .map(|c| c.checked)
        .sum()
}

#[test]
fn criterion_1_case_study_reproduction() {
    let start = std::time::Instant::now();
    let report = pilift::verification::section4_report().unwrap();
    let elapsed = start.elapsed();

    assert_eq!(report.group_order, 1323);
    assert_eq!(report.class_count, 59);
    assert_eq!(report.degree_histogram, vec![(1, 9), (3, 38), (9, 12)]);
    assert_eq!(report.lift_rows.len(), 13);
    assert_eq!(report.family1_rows.len(), 7);
    assert_eq!(report.family2_rows.len(), 7);
    for claim in &report.claims {
        assert!(claim.pass, "claim {} failed: {}", claim.name, claim.detail);
    }
    assert!(report.all_pass);
    assert!(
        elapsed < std::time::Duration::from_secs(300),
        "case study took {elapsed:?}"
    );
    println!(
        "acceptance 1: PASS - case-study reproduction, {} claims exact, {elapsed:?}",
        report.claims.len()
    );
}

#[test]
fn criterion_2_equivalence_zero_anomalies() {
    let report = corpus_report();
    let failures = failures_of(report, &["equivalence-verdict", "engine-errors"]);
    let checked = checked_of(report, &["equivalence-verdict"]);
    assert!(checked > 0);
    assert!(failures.is_empty(), "{failures:?}");
    println!(
        "acceptance 2: PASS - three-way equivalence agreed on {checked} (group, pi, series, chi) cases"
    );
}

#[test]
fn criterion_3_lift_bound_zero_anomalies() {
    let report = corpus_report();
    let failures = failures_of(report, &["lift-bound"]);
    let checked = checked_of(report, &["lift-bound"]);
    assert!(checked > 0);
    assert!(failures.is_empty(), "{failures:?}");

    // exact equality cases, frozen by hand: S3 at pi = {3} over the unique
    // series, and A4 at pi = {2}
    let s3 = builtins::builtin("s3", CAP).unwrap();
    let (series, _) = enumerate_normal_pi_series(&s3, &pset(&[3]), 64).unwrap();
    let r = pilift::lift_analysis::lift_count_bound(0, &series[0]).unwrap();
    assert_eq!((r.bound, r.lift_count), (2, 2));
    let a4 = builtins::builtin("a4", CAP).unwrap();
    let (series, _) = enumerate_normal_pi_series(&a4, &pset(&[2]), 64).unwrap();
    let r = pilift::lift_analysis::lift_count_bound(0, &series[0]).unwrap();
    assert_eq!((r.bound, r.lift_count), (3, 3));
    println!(
        "acceptance 3: PASS - injection bound held on {checked} (group, pi, series, phi) cases; equality on s3 (2=2) and a4 (3=3)"
    );
}

#[test]
fn criterion_4_orthogonality_and_reciprocity() {
    // exact row/column orthogonality and the degree-square sum, per group
    for name in pilift::verification::default_corpus_names() {
        let g = builtins::builtin(name, CAP).unwrap();
        let table = character_table(&g).unwrap();
        table.verify().unwrap();
    }

    // Frobenius reciprocity on >= 100 seeded random (H, theta, chi) triples
    let mut rng = ChaCha8Rng::seed_from_u64(0x70b1_a5ce);
    let pool = ["s4", "a4", "d12", "c12", "sl23", "c7c3", "d10", "es27"];
    let mut triples = 0;
    while triples < 100 {
        let name = pool[rng.gen_range(0..pool.len())];
        let g = builtins::builtin(name, CAP).unwrap();
        let full = g.full_subgroup();
        let seeds: Vec<usize> = (0..rng.gen_range(1..=2))
            .map(|_| rng.gen_range(0..g.order()))
            .collect();
        let h = g.subgroup_generated(&seeds);
        let h_table = h.table().unwrap();
        let g_table = character_table(&g).unwrap();
        let theta = irreducibles(&h_table)
            .into_iter()
            .nth(rng.gen_range(0..h_table.len()))
            .unwrap();
        let chi = irreducibles(&g_table)
            .into_iter()
            .nth(rng.gen_range(0..g_table.len()))
            .unwrap();
        let lhs = inner_product(&induce_between(&h, &full, &theta.cf()).unwrap(), &chi.cf()).unwrap();
        let rhs = inner_product(&theta.cf(), &restrict_between(&h, &full, &chi.cf()).unwrap()).unwrap();
        assert!(lhs.equals(&rhs), "{name}: reciprocity failed");
        triples += 1;
    }
    println!("acceptance 4: PASS - exact orthogonality on all corpus tables; reciprocity exact on {triples} random triples");
}

#[test]
fn criterion_5_ipi_counts_and_oracle() {
    // |Ipi(G)| equals the number of pi-classes for every corpus (G, pi)
    let mut count_checks = 0;
    for name in pilift::verification::default_corpus_names() {
        let g = builtins::builtin(name, CAP).unwrap();
        for p in pilift::primes::prime_divisors(g.order() as u64) {
            let pi = pset(&[p]);
            let table = ipi(&g, &pi).unwrap();
            let classes = pilift::pi_theory::pi_classes(&g, &pi);
            assert_eq!(table.members.len(), classes.class_ids.len(), "{name} at {p}");
            count_checks += 1;
        }
    }

    // greedy Ipi equals the exhaustive-combination oracle for order <= 48
    let mut oracle_checks = 0;
    for name in pilift::verification::default_corpus_names() {
        let g = builtins::builtin(name, CAP).unwrap();
        if g.order() > 48 {
            continue;
        }
        for p in pilift::primes::prime_divisors(g.order() as u64) {
            let pi = pset(&[p]);
            let engine = ipi(&g, &pi).unwrap();
            let brute = common::ipi_brute(&g, &pi);
            assert_eq!(engine.members.len(), brute.len(), "{name} at {p}");
            for member in &engine.members {
                assert!(
                    brute
                        .iter()
                        .any(|b| b.iter().zip(member.values.iter()).all(|(x, y)| x.equals(y))),
                    "{name} at {p}: greedy member missing from oracle"
                );
            }
            oracle_checks += 1;
        }
    }
    println!(
        "acceptance 5: PASS - |Ipi| = pi-class count on {count_checks} cases; greedy = brute force on {oracle_checks} cases"
    );
}

#[test]
fn criterion_6_lemma_suites_zero_anomalies() {
    let report = corpus_report();
    let lemma_checks = [
        "lift-set-bijection",
        "lift-set-restriction-closure",
        "lift-set-conjugation-closure",
        "stabilizer-equality",
        "degree-pi-number",
        "common-chains-stabilizer",
        "self-stabilizing-inductive",
        "product-self-stabilizing",
        "inductive-pair-induces",
        "factored-equivalence",
        "containment",
        "engine-errors",
    ];
    let failures = failures_of(report, &lemma_checks);
    assert!(failures.is_empty(), "{failures:?}");
    let checked = checked_of(report, &lemma_checks);
    assert!(checked > 0);
    println!("acceptance 6: PASS - lemma-level suites clean on {checked} checks");
}

#[test]
fn criterion_7_verify_reports_are_byte_identical() {
    let bin = env!("CARGO_BIN_EXE_pilift");
    let run = |args: &[&str]| -> Vec<u8> {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let verify_args = [
        "verify",
        "--corpus",
        "c6,s3,s4,a4,d10,sl23,es27",
        "--format",
        "json",
    ];
    let first = run(&verify_args);
    let second = run(&verify_args);
    assert_eq!(first, second, "verify reports differ between runs");
    assert!(!first.is_empty());
    let s4_first = run(&["section4", "--format", "json"]);
    let s4_second = run(&["section4", "--format", "json"]);
    assert_eq!(s4_first, s4_second, "case-study reports differ between runs");
    let parsed: serde_json::Value = serde_json::from_slice(&s4_first).unwrap();
    assert_eq!(parsed["lift_count"], 13);
    assert_eq!(parsed["all_pass"], true);
    println!(
        "acceptance 7: PASS - byte-identical JSON across consecutive runs ({} and {} bytes)",
        first.len(),
        s4_first.len()
    );
}
