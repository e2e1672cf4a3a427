//! Independent oracles used by the integration tests. These reimplement the
//! quantities under test by brute force and must stay independent of the
//! engine's computation paths.

use pilift::chartab::{character_table, irreducibles};
use pilift::cyclotomic::Cyc;
use pilift::group::Group;
use pilift::pi_theory::restrict_character_to_pi;
use pilift::primes::PrimeSet;

/// All subgroups of a small group, as sorted member lists, found by closing
/// every extension of every known subgroup by one element.
pub fn all_subgroups_brute(group: &Group) -> Vec<Vec<usize>> {
    let mut known: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    known.insert(vec![0]);
    let mut frontier = vec![vec![0usize]];
    while let Some(members) = frontier.pop() {
        for extra in 0..group.order() {
            if members.binary_search(&extra).is_ok() {
                continue;
            }
            let mut seed = members.clone();
            seed.push(extra);
            let closed = group.closure(&seed);
            if !known.contains(&closed) {
                known.insert(closed.clone());
                frontier.push(closed);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = known.into_iter().collect();
    out.sort_by_key(|m| (m.len(), m.clone()));
    out
}

/// Normal subgroups by brute force: subgroups stable under conjugation by
/// every element.
pub fn normal_subgroups_brute(group: &Group) -> Vec<Vec<usize>> {
    all_subgroups_brute(group)
        .into_iter()
        .filter(|members| {
            members.iter().all(|&m| {
                (0..group.order()).all(|g| members.binary_search(&group.conj(m, g)).is_ok())
            })
        })
        .collect()
}

/// Subnormal subgroups by brute force: the normal-closure descent from the
/// whole group terminates at the subgroup.
pub fn subnormal_subgroups_brute(group: &Group) -> Vec<Vec<usize>> {
    let normal_closure_in = |members: &[usize], ambient: &[usize]| -> Vec<usize> {
        let mut seed: Vec<usize> = members.to_vec();
        loop {
            let closed = group.closure(&seed);
            let mut grew = false;
            for &m in &closed {
                for &g in ambient {
                    let c = group.conj(m, g);
                    if closed.binary_search(&c).is_err() {
                        seed.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                return closed;
            }
            seed.sort_unstable();
            seed.dedup();
        }
    };
    all_subgroups_brute(group)
        .into_iter()
        .filter(|members| {
            let mut current: Vec<usize> = (0..group.order()).collect();
            loop {
                let next = normal_closure_in(members, &current);
                if next == *members {
                    return true;
                }
                if next == current {
                    return false;
                }
                current = next;
            }
        })
        .collect()
}

fn values_equal(a: &[Cyc], b: &[Cyc]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x.equals(y))
}

/// Can `target` be written as a sum of at least `need` candidates, with
/// repetition, drawing from index `from` onwards? Exact arithmetic, bounded
/// by the degree at the identity class.
fn decomposes(target: &[Cyc], candidates: &[Vec<Cyc>], from: usize, picked: u64, need: u64) -> bool {
    if target.iter().all(|v| v.is_zero()) {
        return picked >= need;
    }
    let Some(remaining) = target[0].as_u64() else {
        return false;
    };
    if remaining == 0 {
        return false;
    }
    for (i, cand) in candidates.iter().enumerate().skip(from) {
        if cand[0].as_u64().unwrap() > remaining {
            continue;
        }
        let diff: Vec<Cyc> = target
            .iter()
            .zip(cand.iter())
            .map(|(t, c)| t.sub(c))
            .collect();
        if decomposes(&diff, candidates, i, picked + 1, need) {
            return true;
        }
    }
    false
}

/// The irreducible pi-partial characters by exhaustive search: a distinct
/// restriction is reducible exactly when it is a sum of at least two
/// partial characters, i.e. of at least two restrictions with multiplicity.
pub fn ipi_brute(group: &Group, pi: &PrimeSet) -> Vec<Vec<Cyc>> {
    let table = character_table(group).unwrap();
    let mut restrictions: Vec<Vec<Cyc>> = Vec::new();
    for chi in irreducibles(&table) {
        let values = restrict_character_to_pi(&chi, pi).values.to_vec();
        if !restrictions.iter().any(|v| values_equal(v, &values)) {
            restrictions.push(values);
        }
    }
    restrictions
        .iter()
        .filter(|r| !decomposes(r, &restrictions, 0, 0, 2))
        .cloned()
        .collect()
}
