//! Structural invariants cross-checked against independent brute-force
//! oracles, plus sampled algebraic identities of the table toolkit.

mod common;

use pilift::builtins;
use pilift::chartab::{
    character_table, find_row, induce_between, inner_product, irreducibles, restrict_between,
};
use pilift::pi_theory::ipi;
use pilift::primes::PrimeSet;
use pilift::series::enumerate_normal_pi_series;

const CAP: usize = 5000;

fn pset(ps: &[u64]) -> PrimeSet {
    PrimeSet::new(ps.iter().copied()).unwrap()
}

#[test]
fn normal_subgroups_match_brute_force() {
    for name in ["s3", "s4", "a4", "d8", "d12", "c12", "sl23", "es27", "c7c3"] {
        let g = builtins::builtin(name, CAP).unwrap();
        let engine: Vec<Vec<usize>> = g
            .normal_subgroups()
            .iter()
            .map(|n| n.members().to_vec())
            .collect();
        let brute = common::normal_subgroups_brute(&g);
        assert_eq!(engine, brute, "normal subgroups of {name}");
    }
}

#[test]
fn subnormal_subgroups_match_brute_force() {
    for name in ["s3", "s4", "a4", "d8", "d12", "sl23", "es27"] {
        let g = builtins::builtin(name, CAP).unwrap();
        let engine: Vec<Vec<usize>> = g
            .subnormal_subgroups()
            .iter()
            .map(|n| n.members().to_vec())
            .collect();
        let brute = common::subnormal_subgroups_brute(&g);
        assert_eq!(engine, brute, "subnormal subgroups of {name}");
    }
}

#[test]
fn subnormals_contain_normals() {
    for name in ["s3", "s4", "a4", "d12", "sl23", "es27", "c7c3"] {
        let g = builtins::builtin(name, CAP).unwrap();
        let subnormals = g.subnormal_subgroups();
        for n in g.normal_subgroups() {
            assert!(subnormals.contains(n), "{name}");
        }
    }
}

#[test]
fn series_enumeration_matches_expected_counts() {
    // frozen counts computed with the brute-force normal-subgroup oracle and
    // a hand check of the pure-factor condition
    let s3 = builtins::builtin("s3", CAP).unwrap();
    let (list, _) = enumerate_normal_pi_series(&s3, &pset(&[3]), 64).unwrap();
    assert_eq!(list.len(), 1);
    assert_eq!(list[0].orders(), vec![1, 3, 6]);

    let c6 = builtins::builtin("c6", CAP).unwrap();
    let (list, _) = enumerate_normal_pi_series(&c6, &pset(&[3]), 64).unwrap();
    let orders: Vec<Vec<usize>> = list.iter().map(|s| s.orders()).collect();
    assert_eq!(orders, vec![vec![1, 2, 6], vec![1, 3, 6]]);

    let a4 = builtins::builtin("a4", CAP).unwrap();
    let (list, _) = enumerate_normal_pi_series(&a4, &pset(&[2]), 64).unwrap();
    assert_eq!(list.len(), 1);
    assert_eq!(list[0].orders(), vec![1, 4, 12]);
}

#[test]
fn series_set_closed_under_insertion() {
    // inserting any compatible normal subgroup into an enumerated series
    // yields another enumerated series
    for (name, pi) in [("s4", vec![2]), ("d12", vec![2]), ("sl23", vec![2]), ("c12", vec![3])] {
        let g = builtins::builtin(name, CAP).unwrap();
        let pi = pset(&pi);
        let (list, truncated) = enumerate_normal_pi_series(&g, &pi, 64).unwrap();
        assert!(!truncated);
        let orders_set: std::collections::BTreeSet<Vec<usize>> =
            list.iter().map(|s| s.orders()).collect();
        for series in &list {
            for w in 0..series.chain.len() - 1 {
                let low = &series.chain[w];
                let high = &series.chain[w + 1];
                for m in g.normal_subgroups() {
                    if m.order() <= low.order()
                        || m.order() >= high.order()
                        || !m.contains_subgroup(low)
                        || !high.contains_subgroup(m)
                    {
                        continue;
                    }
                    let f1 = (m.order() / low.order()) as u64;
                    let f2 = (high.order() / m.order()) as u64;
                    let pure = |f: u64| pi.is_pi_number(f) || pi.is_pi_prime_number(f);
                    if pure(f1) && pure(f2) {
                        let mut inserted: Vec<usize> = series.orders();
                        inserted.insert(w + 1, m.order());
                        assert!(
                            orders_set.contains(&inserted),
                            "{name}: inserting order {} into {:?}",
                            m.order(),
                            series.orders()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn is_pi_separable_examples() {
    use pilift::series::is_pi_separable;
    let s3 = builtins::builtin("s3", CAP).unwrap();
    for pi in [pset(&[2]), pset(&[3]), pset(&[5])] {
        let witness = is_pi_separable(&s3, &pi).unwrap();
        assert_eq!(witness.last().unwrap().order(), 6);
    }
    // A5 is simple non-abelian: not 2-separable
    let a5 = builtins::builtin("a5", CAP).unwrap();
    assert!(is_pi_separable(&a5, &pset(&[2])).is_none());
    // all solvable corpus members are pi-separable for every pi
    for name in ["s4", "a4", "sl23", "d12", "c7c3", "es27"] {
        let g = builtins::builtin(name, CAP).unwrap();
        for p in pilift::primes::prime_divisors(g.order() as u64) {
            assert!(is_pi_separable(&g, &pset(&[p])).is_some(), "{name} at {p}");
        }
    }
}

#[test]
fn induction_transitivity_sampled() {
    // (theta^K)^G = theta^G for H <= K <= G
    let s4 = builtins::builtin("s4", CAP).unwrap();
    let d8_members = common::all_subgroups_brute(&s4)
        .into_iter()
        .find(|m| {
            m.len() == 8 && m.contains(&s4.element_id(&pilift::perm::Perm::parse_cycles(4, "(1 2)").unwrap()).unwrap())
        })
        .unwrap();
    let k = s4.subgroup(d8_members).unwrap();
    let t_elem = s4
        .element_id(&pilift::perm::Perm::parse_cycles(4, "(1 2)").unwrap())
        .unwrap();
    let h = s4.subgroup_generated(&[t_elem]);
    let full = s4.full_subgroup();
    let h_table = h.table().unwrap();
    for theta in irreducibles(&h_table) {
        let via_k = {
            let up = induce_between(&h, &k, &theta.cf()).unwrap();
            induce_between(&k, &full, &up).unwrap()
        };
        let direct = induce_between(&h, &full, &theta.cf()).unwrap();
        assert!(via_k == direct);
    }
}

#[test]
fn restriction_reconstructs_character() {
    // multiplicities are non-negative integers and rebuild chi exactly
    let s4 = builtins::builtin("s4", CAP).unwrap();
    let table = character_table(&s4).unwrap();
    let v4 = s4.normal_subgroups()[1].clone();
    assert_eq!(v4.order(), 4);
    let sub_table = v4.table().unwrap();
    let full = s4.full_subgroup();
    for chi in irreducibles(&table) {
        let restricted = restrict_between(&v4, &full, &chi.cf()).unwrap();
        let rows = pilift::chartab::decompose_character(&restricted, &sub_table).unwrap();
        // rebuild
        let mut rebuilt = vec![pilift::cyclotomic::Cyc::zero(); v4.realize().group.conjugacy_classes().len()];
        for (row, mult) in rows {
            for (i, v) in sub_table.row_values(row).iter().enumerate() {
                let m = pilift::cyclotomic::Cyc::from_integer(mult as i64);
                rebuilt[i] = rebuilt[i].add(&v.mul(&m));
            }
        }
        for (a, b) in rebuilt.iter().zip(restricted.values.iter()) {
            assert!(a.equals(b));
        }
    }
}

#[test]
fn determinant_order_divides_exponent() {
    for name in ["s3", "s4", "a4", "c12", "d12", "sl23", "es27", "c7c3"] {
        let g = builtins::builtin(name, CAP).unwrap();
        let t = character_table(&g).unwrap();
        for chi in irreducibles(&t) {
            let d = pilift::chartab::determinant_order(&chi).unwrap();
            assert_eq!(g.exponent() % d, 0, "{name} row {}", chi.row());
        }
    }
}

#[test]
fn ipi_counts_equal_pi_class_counts() {
    for name in ["s3", "s4", "a4", "c12", "d10", "d12", "sl23", "es27", "c7c3"] {
        let g = builtins::builtin(name, CAP).unwrap();
        let primes = pilift::primes::prime_divisors(g.order() as u64);
        for &p in &primes {
            let pi = pset(&[p]);
            let table = ipi(&g, &pi).unwrap();
            let classes = pilift::pi_theory::pi_classes(&g, &pi);
            assert_eq!(table.members.len(), classes.class_ids.len(), "{name} at {p}");
        }
    }
}

#[test]
fn frobenius_reciprocity_spot_checks() {
    // <theta^G, chi> = <theta, chi_H> on a couple of fixed cases; the
    // randomized sweep lives in the acceptance suite
    let s3 = builtins::builtin("s3", CAP).unwrap();
    let a3 = s3.normal_subgroups()[1].clone();
    let full = s3.full_subgroup();
    let ts3 = character_table(&s3).unwrap();
    let ta3 = a3.table().unwrap();
    for theta in irreducibles(&ta3) {
        for chi in irreducibles(&ts3) {
            let up = induce_between(&a3, &full, &theta.cf()).unwrap();
            let lhs = inner_product(&up, &chi.cf()).unwrap();
            let down = restrict_between(&a3, &full, &chi.cf()).unwrap();
            let rhs = inner_product(&theta.cf(), &down).unwrap();
            assert!(lhs.equals(&rhs));
        }
    }
    // find_row identifies inductions that happen to be irreducible
    let omega = irreducibles(&ta3).into_iter().nth(1).unwrap();
    let up = induce_between(&a3, &full, &omega.cf()).unwrap();
    assert!(find_row(&up, &ts3).unwrap().is_some());
}

#[test]
fn perm_format_round_trips_the_case_study_group() {
    // the 58-point generators survive a text round trip
    let s4g = builtins::section4_group(CAP).unwrap();
    let text = builtins::group_to_perm_str(&s4g.g);
    let re = builtins::group_from_perm_str(&text, CAP).unwrap();
    assert_eq!(re.degree(), 58);
    assert_eq!(re.order(), 1323);
}

#[test]
fn abelianization_index_parts() {
    use pilift::series::pi_prime_index_of_abelianization;
    let s3 = builtins::builtin("s3", CAP).unwrap();
    assert_eq!(pi_prime_index_of_abelianization(&s3.full_subgroup(), &pset(&[3])), 2);
    let c3 = builtins::builtin("c3", CAP).unwrap();
    assert_eq!(pi_prime_index_of_abelianization(&c3.full_subgroup(), &pset(&[3])), 1);
}

#[test]
fn quotient_projection_is_a_homomorphism() {
    for name in ["s4", "a4", "d12"] {
        let g = builtins::builtin(name, CAP).unwrap();
        for n in g.normal_subgroups() {
            let (q, proj) = g.quotient(n).unwrap();
            assert_eq!(q.order() * n.order(), g.order());
            for a in 0..g.order() {
                for b in 0..g.order() {
                    assert_eq!(proj[g.mul(a, b)], q.mul(proj[a], proj[b]), "{name}");
                }
            }
        }
    }
}
