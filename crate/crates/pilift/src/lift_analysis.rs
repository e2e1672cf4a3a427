//! Decision procedures on lifts: pi-lifts, chain pi-lifts, inductive pairs,
//! inductive sources, the three-condition equivalence report, and the
//! injection-based lower bound on the number of chain pi-lifts.

use crate::chartab::{
    character_table, decompose_character, find_row, induce_between, irreducibles,
    pointwise_product, restrict_between, Character,
};
use crate::group::Subgroup;
use crate::pi_theory::{ipi, restrict_character_to_pi, restrict_to_pi};
use crate::primes::PrimeSet;
use crate::series::{pi_prime_index_of_abelianization, NormalPiSeries};
use crate::towers::{self_stabilizing_pair, CharacterPair, SelfStabilizingPair};
use crate::{Error, Result};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// chi is a pi-lift when its restriction to pi-elements is irreducible.
pub fn is_pi_lift(chi: &Character, pi: &PrimeSet) -> Result<bool> {
    let table = ipi(chi.group(), pi)?;
    let phi = restrict_character_to_pi(chi, pi);
    Ok(table.member_index(&phi).is_some())
}

/// Per-level record of the chain pi-lift test.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainLiftLevel {
    pub level: usize,
    pub constituent_rows: Vec<usize>,
    pub all_pi_lifts: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainLiftReport {
    pub chi_row: usize,
    pub holds: bool,
    pub levels: Vec<ChainLiftLevel>,
}

type ChainKey = (u64, Vec<Vec<usize>>, PrimeSet, usize);
static CHAIN_CACHE: Lazy<Mutex<HashMap<ChainKey, Arc<ChainLiftReport>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// chi is a chain pi-lift for the series when, for every member N, all
/// irreducible constituents of the restriction to N are pi-lifts.
pub fn is_chain_pi_lift(chi: &Character, series: &NormalPiSeries) -> Result<Arc<ChainLiftReport>> {
    let ambient = series.ambient();
    if chi.group().id() != ambient.id() {
        return Err(Error::GroupMismatch);
    }
    let key: ChainKey = (
        ambient.id(),
        series.chain.iter().map(|s| s.members().to_vec()).collect(),
        series.pi.clone(),
        chi.row(),
    );
    if let Some(hit) = CHAIN_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let pi = &series.pi;
    let full = ambient.full_subgroup();
    let mut levels = Vec::new();
    let mut holds = true;
    for (i, sub) in series.chain.iter().enumerate() {
        let table = sub.table()?;
        let partial = ipi(&sub.realize().group, pi)?;
        let rows = crate::chartab::decompose_restriction_cached(chi, sub, &full)?;
        let mut all = true;
        for &(row, _) in rows.iter() {
            let eta = Character::new(table.clone(), row);
            let phi = restrict_character_to_pi(&eta, pi);
            if partial.member_index(&phi).is_none() {
                all = false;
            }
        }
        holds &= all;
        levels.push(ChainLiftLevel {
            level: i,
            constituent_rows: rows.iter().map(|&(r, _)| r).collect(),
            all_pi_lifts: all,
        });
    }
    let out = Arc::new(ChainLiftReport {
        chi_row: chi.row(),
        holds,
        levels,
    });
    let mut cache = CHAIN_CACHE.lock().unwrap();
    Ok(cache.entry(key).or_insert(out).clone())
}

/// Witness data for an inductive pair, one entry per series member.
#[derive(Clone)]
pub struct InductiveLevel {
    pub level: usize,
    pub multiplicity: u64,
    /// the homogeneous constituent on (V cap N)
    pub eta: Character,
    /// row of eta^N in the member's table (always present: its partial
    /// restriction is irreducible, hence eta^N is irreducible)
    pub induced_row: usize,
    /// index of (eta^N)^0 in Ipi(N)
    pub ipi_index: usize,
}

pub struct InductiveWitness {
    pub pair: CharacterPair,
    pub levels: Vec<InductiveLevel>,
}

/// Why a pair failed to be inductive at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum InductiveFailure {
    NotHomogeneous,
    PartialNotIrreducible,
}

pub enum InductiveOutcome {
    Witness(Box<InductiveWitness>),
    FailsAt(usize, InductiveFailure),
}

impl InductiveOutcome {
    pub fn is_inductive(&self) -> bool {
        matches!(self, InductiveOutcome::Witness(_))
    }
}

/// Test the inductive-pair conditions: at every member N, the restriction of
/// gamma to V cap N is homogeneous with constituent eta, and (eta^N)^0 is an
/// irreducible partial character of N.
pub fn is_inductive_pair(pair: &CharacterPair, series: &NormalPiSeries) -> Result<InductiveOutcome> {
    let ambient = series.ambient();
    if pair.subgroup.ambient().id() != ambient.id() {
        return Err(Error::GroupMismatch);
    }
    let pi = &series.pi;
    let v = &pair.subgroup;
    let mut levels = Vec::new();
    for (i, n_sub) in series.chain.iter().enumerate() {
        let meet = v.intersection(n_sub);
        let meet_table = meet.table()?;
        let rows = crate::chartab::decompose_restriction_cached(&pair.character, &meet, v)?;
        if rows.len() != 1 {
            return Ok(InductiveOutcome::FailsAt(i, InductiveFailure::NotHomogeneous));
        }
        let eta = Character::new(meet_table.clone(), rows[0].0);
        let induced = crate::chartab::induce_row_cached(&meet, n_sub, &eta)?;
        let n_group = n_sub.realize().group.clone();
        let partial_table = ipi(&n_group, pi)?;
        let partial = restrict_to_pi(&induced, pi, None);
        let Some(ipi_index) = partial_table.member_index(&partial) else {
            return Ok(InductiveOutcome::FailsAt(
                i,
                InductiveFailure::PartialNotIrreducible,
            ));
        };
        // derived invariant: the full induced character is irreducible
        let n_table = character_table(&n_group)?;
        let induced_row = find_row(&induced, &n_table)?
            .ok_or_else(|| {
                Error::Internal("induced character with irreducible partial is reducible".into())
            })?
            .row();
        levels.push(InductiveLevel {
            level: i,
            multiplicity: rows[0].1,
            eta,
            induced_row,
            ipi_index,
        });
    }
    Ok(InductiveOutcome::Witness(Box::new(InductiveWitness {
        pair: pair.clone(),
        levels,
    })))
}

/// Stabilizer of a character pair (H, theta) in the ambient group:
/// elements normalizing H and fixing theta.
pub fn pair_stabilizer(pair: &CharacterPair) -> Result<Subgroup> {
    let amb = pair.subgroup.ambient().clone();
    let h = &pair.subgroup;
    let std = h.realize();
    if pair.character.group().id() != std.group.id() {
        return Err(Error::GroupMismatch);
    }
    let classes = std.group.conjugacy_classes();
    let mut members = Vec::new();
    let mut seen = vec![false; amb.order()];
    for g in 0..amb.order() {
        if seen[g] {
            continue;
        }
        let coset: Vec<usize> = h.members().iter().map(|&m| amb.mul(m, g)).collect();
        for &c in &coset {
            seen[c] = true;
        }
        if h.conjugate(g) != *h {
            continue;
        }
        let fixes = classes.classes.iter().enumerate().all(|(c, class)| {
            let t = std.to_ambient[class.rep];
            let conj = amb.mul(amb.mul(g, t), amb.inv(g));
            match std.from_ambient.get(&conj) {
                Some(&sid) => pair
                    .character
                    .value(std.group.class_of(sid))
                    .equals(pair.character.value(c)),
                None => false,
            }
        });
        if fixes {
            members.extend(coset);
        }
    }
    members.sort_unstable();
    amb.subgroup(members)
}

/// A pair (H, theta) is an inductive source when induction from the
/// stabilizer T of the pair is injective on Irr(T | theta): every member is
/// induced to the ambient group and the images are pairwise distinct.
pub fn is_inductive_source(pair: &CharacterPair) -> Result<bool> {
    let amb = pair.subgroup.ambient().clone();
    let t_sub = pair_stabilizer(pair)?;
    let t_table = t_sub.table()?;
    let full = amb.full_subgroup();
    let mut images: Vec<crate::chartab::ClassFunction> = Vec::new();
    for xi in irreducibles(&t_table) {
        // lies over theta?
        let down = restrict_between(&pair.subgroup, &t_sub, &xi.cf())?;
        let rows = decompose_character(&down, &pair.character.table().clone())?;
        if !rows.iter().any(|&(r, _)| r == pair.character.row()) {
            continue;
        }
        let up = induce_between(&t_sub, &full, &xi.cf())?;
        if images.iter().any(|prev| *prev == up) {
            return Ok(false);
        }
        images.push(up);
    }
    Ok(true)
}

/// The three equivalent conditions evaluated independently.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EquivalenceReport {
    pub chi_row: usize,
    /// condition 1: chi is a chain pi-lift
    pub chain_lift: bool,
    /// condition 2: the self-stabilizing pair (V, gamma) is inductive
    pub pair_inductive: bool,
    /// condition 3: (V, alpha) is inductive and beta is linear, for the
    /// special factorization gamma = alpha * beta
    pub special_part_inductive_and_linear: bool,
    /// all three conditions agree
    pub verdict: bool,
}

/// Evaluate the equivalence conditions for one character and series.
pub fn check_lift_equivalence(
    chi: &Character,
    series: &NormalPiSeries,
) -> Result<(EquivalenceReport, Arc<SelfStabilizingPair>)> {
    let ssp = self_stabilizing_pair(chi, series)?;
    let chain = is_chain_pi_lift(chi, series)?;
    let cond2 = is_inductive_pair(&ssp.pair, series)?.is_inductive();
    let fact = ssp.factorization.as_ref().ok_or_else(|| {
        Error::Internal("self-stabilizing character is not pi-factored".into())
    })?;
    let alpha_pair = CharacterPair {
        subgroup: ssp.pair.subgroup.clone(),
        character: fact.alpha.clone(),
    };
    let cond3 = fact.beta.is_linear() && is_inductive_pair(&alpha_pair, series)?.is_inductive();
    let report = EquivalenceReport {
        chi_row: chi.row(),
        chain_lift: chain.holds,
        pair_inductive: cond2,
        special_part_inductive_and_linear: cond3,
        verdict: chain.holds == cond2 && cond2 == cond3,
    };
    Ok((report, ssp))
}

/// The injection beta -> (gamma beta)^G and the resulting lower bound.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LiftBoundReport {
    pub phi_index: usize,
    pub chi_row: usize,
    pub pair_subgroup_order: usize,
    pub pair_char_row: usize,
    /// |V : V'| restricted to primes outside pi
    pub bound: u64,
    /// rows of the injected characters (one per pi'-order linear beta)
    pub image_rows: Vec<usize>,
    pub lift_count: u64,
    pub images_distinct: bool,
    pub images_irreducible: bool,
    pub images_are_lifts: bool,
    pub images_are_chain_lifts: bool,
    pub bound_holds: bool,
}

impl LiftBoundReport {
    pub fn all_good(&self) -> bool {
        self.images_distinct
            && self.images_irreducible
            && self.images_are_lifts
            && self.images_are_chain_lifts
            && self.bound_holds
    }
}

/// Build the family (gamma beta)^G over the pi'-order linear characters of
/// V, verify it injects into the chain pi-lifts of phi, and compare the
/// bound with the exhaustive count.
pub fn lift_count_bound(phi_index: usize, series: &NormalPiSeries) -> Result<LiftBoundReport> {
    let group = series.ambient().clone();
    let pi = &series.pi;
    let partial_table = ipi(&group, pi)?;
    if phi_index >= partial_table.members.len() {
        return Err(Error::InvalidArg(format!("no Ipi member {phi_index}")));
    }
    let phi = partial_table.members[phi_index].clone();
    let bset = crate::towers::bpi_chain(&group, series)?;
    let pos = bset
        .to_ipi
        .iter()
        .position(|&i| i == phi_index)
        .ok_or_else(|| Error::Internal("no canonical lift restricts to phi".into()))?;
    let chi_row = bset.rows[pos];
    let table = character_table(&group)?;
    let chi = Character::new(table.clone(), chi_row);
    let ssp = self_stabilizing_pair(&chi, series)?;
    let v = ssp.pair.subgroup.clone();
    let gamma = ssp.pair.character.clone();
    let v_table = v.table()?;
    let bound = pi_prime_index_of_abelianization(&v, pi);
    // linear characters of V with pi'-order, i.e. trivial on V'
    let betas: Vec<Character> = irreducibles(&v_table)
        .into_iter()
        .filter(|c| c.is_linear())
        .filter(|c| {
            pi.is_pi_prime_number(c.multiplicative_order().expect("linear character order"))
        })
        .collect();
    if betas.len() as u64 != bound {
        return Err(Error::Internal(format!(
            "{} pi'-order linear characters but |V:V'|_pi' = {bound}",
            betas.len()
        )));
    }
    let full = group.full_subgroup();
    let mut image_rows = Vec::new();
    let mut images_irreducible = true;
    let mut images_are_lifts = true;
    let mut images_are_chain_lifts = true;
    for beta in &betas {
        let product = pointwise_product(&gamma.cf(), &beta.cf())?;
        let induced = induce_between(&v, &full, &product)?;
        match find_row(&induced, &table)? {
            Some(c) => {
                let lift = restrict_character_to_pi(&c, pi).equals(&phi);
                images_are_lifts &= lift;
                images_are_chain_lifts &= is_chain_pi_lift(&c, series)?.holds;
                image_rows.push(c.row());
            }
            None => {
                images_irreducible = false;
            }
        }
    }
    let mut dedup = image_rows.clone();
    dedup.sort_unstable();
    dedup.dedup();
    let images_distinct = dedup.len() as u64 == bound && images_irreducible;
    // exhaustive chain pi-lift count for phi
    let mut lift_count = 0u64;
    for cand in irreducibles(&table) {
        if restrict_character_to_pi(&cand, pi).equals(&phi)
            && is_chain_pi_lift(&cand, series)?.holds
        {
            lift_count += 1;
        }
    }
    let report = LiftBoundReport {
        phi_index,
        chi_row,
        pair_subgroup_order: v.order(),
        pair_char_row: gamma.row(),
        bound,
        image_rows,
        lift_count,
        images_distinct,
        images_irreducible,
        images_are_lifts,
        images_are_chain_lifts,
        bound_holds: bound <= lift_count,
    };
    Ok(report)
}

/// An inductive pair induces irreducibly; the induced character has a
/// self-stabilizing pair whose subgroup contains V up to conjugacy.
pub fn containment_holds(pair: &CharacterPair, series: &NormalPiSeries) -> Result<bool> {
    let group = series.ambient().clone();
    let full = group.full_subgroup();
    let table = character_table(&group)?;
    let induced = induce_between(&pair.subgroup, &full, &pair.character.cf())?;
    let Some(chi) = find_row(&induced, &table)? else {
        return Ok(false);
    };
    let ssp = self_stabilizing_pair(&chi, series)?;
    let u = &ssp.pair.subgroup;
    if u.order() % pair.subgroup.order() != 0 {
        return Ok(false);
    }
    for g in 0..group.order() {
        let conj = pair.subgroup.conjugate(g);
        if u.contains_subgroup(&conj) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::series::enumerate_normal_pi_series;

    const CAP: usize = 5000;

    fn pset(ps: &[u64]) -> PrimeSet {
        PrimeSet::new(ps.iter().copied()).unwrap()
    }

    fn s3_setup() -> (crate::group::Group, NormalPiSeries, Arc<crate::chartab::CharTable>) {
        let s3 = builtins::symmetric(3, CAP).unwrap();
        let (series, _) = enumerate_normal_pi_series(&s3, &pset(&[3]), 64).unwrap();
        let t = character_table(&s3).unwrap();
        (s3.clone(), series.into_iter().next().unwrap(), t)
    }

    #[test]
    fn pi_lift_basics() {
        let (_, _, t) = s3_setup();
        let pi3 = pset(&[3]);
        let pi2 = pset(&[2]);
        let sgn = Character::new(t.clone(), 1);
        assert!(is_pi_lift(&sgn, &pi3).unwrap());
        let chi2 = Character::new(t.clone(), 2);
        assert!(!is_pi_lift(&chi2, &pi2).unwrap());
        // linear characters are always pi-lifts
        for row in [0usize, 1] {
            for pi in [&pi3, &pi2] {
                assert!(is_pi_lift(&Character::new(t.clone(), row), pi).unwrap());
            }
        }
    }

    #[test]
    fn chain_lift_on_s3() {
        let (_, series, t) = s3_setup();
        let sgn = Character::new(t.clone(), 1);
        let report = is_chain_pi_lift(&sgn, &series).unwrap();
        assert!(report.holds);
        assert_eq!(report.levels.len(), 3);
        let chi2 = Character::new(t.clone(), 2);
        assert!(is_chain_pi_lift(&chi2, &series).unwrap().holds);
    }

    #[test]
    fn inductive_pair_a3_omega() {
        let (s3, series, _) = s3_setup();
        let a3 = s3.normal_subgroups()[1].clone();
        let ta3 = a3.table().unwrap();
        let omega = Character::new(ta3.clone(), 1);
        let pair = CharacterPair {
            subgroup: a3,
            character: omega,
        };
        let outcome = is_inductive_pair(&pair, &series).unwrap();
        assert!(outcome.is_inductive());
        if let InductiveOutcome::Witness(w) = outcome {
            // top level: omega^{S3} = chi2 with irreducible partial
            assert_eq!(w.levels.len(), 3);
            assert_eq!(w.levels[2].induced_row, 2);
        }
    }

    #[test]
    fn inductive_sources() {
        let (s3, _, t) = s3_setup();
        // (A3, omega): normal subgroup pairs are inductive sources
        let a3 = s3.normal_subgroups()[1].clone();
        let ta3 = a3.table().unwrap();
        let pair = CharacterPair {
            subgroup: a3,
            character: Character::new(ta3, 1),
        };
        assert!(is_inductive_source(&pair).unwrap());
        // pair whose stabilizer is the whole group
        let full = s3.full_subgroup();
        let pair = CharacterPair {
            subgroup: full,
            character: Character::new(t.clone(), 2),
        };
        assert!(is_inductive_source(&pair).unwrap());
        // pair with T = H: a non-normal C2
        let t_elem = s3
            .element_id(&crate::perm::Perm::parse_cycles(3, "(1 2)").unwrap())
            .unwrap();
        let c2 = s3.subgroup_generated(&[t_elem]);
        let tc2 = c2.table().unwrap();
        let pair = CharacterPair {
            subgroup: c2,
            character: Character::new(tc2, 1),
        };
        assert!(is_inductive_source(&pair).unwrap());
    }

    #[test]
    fn equivalence_on_s3() {
        let (_, series, t) = s3_setup();
        for row in 0..3 {
            let chi = Character::new(t.clone(), row);
            let (report, _) = check_lift_equivalence(&chi, &series).unwrap();
            assert!(report.verdict, "row {row}: {report:?}");
            assert!(report.chain_lift);
        }
    }

    #[test]
    fn bound_on_s3() {
        let (_, series, _) = s3_setup();
        // phi = 1^0 is the degree-1 member of Ipi
        let report = lift_count_bound(0, &series).unwrap();
        assert_eq!(report.pair_subgroup_order, 6);
        assert_eq!(report.bound, 2);
        assert_eq!(report.lift_count, 2);
        assert!(report.all_good());
        // the degree-2 member: bound from (A3, omega) is |A3|_{3'} = 1
        let report = lift_count_bound(1, &series).unwrap();
        assert_eq!(report.bound, 1);
        assert_eq!(report.lift_count, 1);
        assert!(report.all_good());
    }

    #[test]
    fn bound_on_a4() {
        let a4 = builtins::alternating(4, CAP).unwrap();
        let pi = pset(&[2]);
        let (series, _) = enumerate_normal_pi_series(&a4, &pi, 64).unwrap();
        let series = &series[0];
        // phi = 1^0: V = A4, bound |A4 : V4|_{2'} = 3, and the three linear
        // characters are exactly the chain pi-lifts
        let report = lift_count_bound(0, series).unwrap();
        assert_eq!(report.bound, 3);
        assert_eq!(report.lift_count, 3);
        assert!(report.all_good());
    }

    #[test]
    fn containment_on_s3() {
        let (s3, series, _) = s3_setup();
        let a3 = s3.normal_subgroups()[1].clone();
        let ta3 = a3.table().unwrap();
        let pair = CharacterPair {
            subgroup: a3,
            character: Character::new(ta3, 1),
        };
        assert!(containment_holds(&pair, &series).unwrap());
    }
}
