//! Character towers along a normal pi-series, self-stabilizing pairs, the
//! canonical sets built from them, and compatible lift systems.

use crate::chartab::{
    character_table, decompose_character, irreducibles, restrict_between,
    Character, ClassFunction,
};
use crate::group::{Group, Subgroup};
use crate::pi_theory::{
    ipi, is_pi_special, restrict_character_to_pi, restrict_to_pi, pi_factorize,
    SpecialFactorization,
};
use crate::primes::PrimeSet;
use crate::series::NormalPiSeries;
use crate::{Error, Result};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A chain of irreducible characters along the series, each lying under the
/// next: levels[i] is a constituent of the restriction of levels[i+1].
#[derive(Clone)]
pub struct CharacterTower {
    pub series: NormalPiSeries,
    pub levels: Vec<Character>,
}

impl std::fmt::Debug for CharacterTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<usize> = self.levels.iter().map(|c| c.row()).collect();
        write!(f, "Tower(rows={rows:?})")
    }
}

/// A subgroup together with one of its irreducible characters.
#[derive(Clone, Debug)]
pub struct CharacterPair {
    pub subgroup: Subgroup,
    pub character: Character,
}

impl PartialEq for CharacterPair {
    fn eq(&self, other: &Self) -> bool {
        self.subgroup == other.subgroup && self.character == other.character
    }
}
impl Eq for CharacterPair {}

/// Per-level data of a self-stabilizing pair: tau restricted to T cap N_i
/// is multiplicity * tau_i, and tau_i induces to the tower member.
#[derive(Clone, Debug)]
pub struct LevelData {
    pub multiplicity: u64,
    pub tau_i: Character,
}

/// The self-stabilizing pair (T, tau) of a character with respect to a
/// series: T stabilizes the canonical tower and tau is the unique character
/// of T inducing the top while staying homogeneous along the chain.
pub struct SelfStabilizingPair {
    pub chi: Character,
    pub pair: CharacterPair,
    pub tower: CharacterTower,
    pub levels: Vec<LevelData>,
    /// factorization of tau into special parts w.r.t. the series primes
    pub factorization: Option<SpecialFactorization>,
    /// number of candidate tau per tower scanned (canonical tower first)
    pub tower_outcomes: Vec<usize>,
}

/// All character towers for `chi` with respect to the series, sorted by the
/// row indices from the bottom level up.
pub fn character_towers(chi: &Character, series: &NormalPiSeries) -> Result<Vec<CharacterTower>> {
    let ambient = series.ambient();
    if chi.group().id() != ambient.id() {
        return Err(Error::GroupMismatch);
    }
    let n = series.len() - 1;
    // chains of rows, built top-down
    let mut partial: Vec<Vec<Character>> = vec![vec![chi.clone()]];
    for i in (0..n).rev() {
        let small = &series.chain[i];
        let big = &series.chain[i + 1];
        let table = small.table()?;
        let mut next = Vec::new();
        for chain in partial {
            let top = chain.last().unwrap();
            let rows = crate::chartab::decompose_restriction_cached(top, small, big)?;
            for &(row, _mult) in rows.iter() {
                let mut longer = chain.clone();
                longer.push(Character::new(table.clone(), row));
                next.push(longer);
            }
        }
        partial = next;
    }
    let mut towers: Vec<CharacterTower> = partial
        .into_iter()
        .map(|mut chain| {
            chain.reverse();
            CharacterTower {
                series: series.clone(),
                levels: chain,
            }
        })
        .collect();
    towers.sort_by(|a, b| {
        let ra: Vec<usize> = a.levels.iter().map(|c| c.row()).collect();
        let rb: Vec<usize> = b.levels.iter().map(|c| c.row()).collect();
        ra.cmp(&rb)
    });
    Ok(towers)
}

type StabKey = (u64, Vec<usize>, usize);
static STAB_CACHE: Lazy<Mutex<HashMap<StabKey, Arc<Vec<usize>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Stabilizer in the ambient group of a character of a normal subgroup,
/// under chi^g(x) = chi(g x g^-1). Computed on coset representatives since
/// the subgroup itself always stabilizes.
pub fn character_stabilizer(sub: &Subgroup, chi: &Character) -> Result<Arc<Vec<usize>>> {
    let key: StabKey = (sub.ambient().id(), sub.members().to_vec(), chi.row());
    if let Some(hit) = STAB_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let amb = sub.ambient().clone();
    let std = sub.realize();
    if chi.group().id() != std.group.id() {
        return Err(Error::GroupMismatch);
    }
    let classes = std.group.conjugacy_classes();
    let reps: Vec<usize> = classes.classes.iter().map(|c| std.to_ambient[c.rep]).collect();
    let mut stab: Vec<usize> = Vec::new();
    let mut seen_coset = vec![false; amb.order()];
    for g in 0..amb.order() {
        if seen_coset[g] {
            continue;
        }
        // mark the coset N*g
        let coset: Vec<usize> = sub.members().iter().map(|&m| amb.mul(m, g)).collect();
        for &c in &coset {
            seen_coset[c] = true;
        }
        let fixes = reps.iter().enumerate().all(|(c, &t)| {
            let conj = amb.mul(amb.mul(g, t), amb.inv(g));
            match std.from_ambient.get(&conj) {
                Some(&sid) => chi.value(std.group.class_of(sid)).equals(chi.value(c)),
                None => false,
            }
        });
        if fixes {
            stab.extend(coset);
        }
    }
    stab.sort_unstable();
    let out = Arc::new(stab);
    let mut cache = STAB_CACHE.lock().unwrap();
    Ok(cache.entry(key).or_insert(out).clone())
}

/// Stabilizer of the whole tower: intersection of the level stabilizers.
pub fn tower_stabilizer(tower: &CharacterTower) -> Result<Subgroup> {
    let amb = tower.series.ambient().clone();
    let mut members: Vec<usize> = (0..amb.order()).collect();
    for (i, level) in tower.levels.iter().enumerate() {
        if tower.series.chain[i].is_full() {
            continue;
        }
        let stab = character_stabilizer(&tower.series.chain[i], level)?;
        members.retain(|m| stab.binary_search(m).is_ok());
    }
    amb.subgroup(members)
}

/// Does g carry pair1 = (H, theta) to pair2, i.e. H^g = K and theta^g = eta?
fn conjugate_carries(
    pair1: &CharacterPair,
    pair2: &CharacterPair,
    g: usize,
) -> bool {
    let amb = pair1.subgroup.ambient();
    if pair1.subgroup.conjugate(g) != pair2.subgroup {
        return false;
    }
    let std1 = pair1.subgroup.realize();
    let std2 = pair2.subgroup.realize();
    let classes2 = std2.group.conjugacy_classes();
    classes2.classes.iter().enumerate().all(|(c, class)| {
        let x = std2.to_ambient[class.rep];
        let back = amb.mul(amb.mul(g, x), amb.inv(g));
        match std1.from_ambient.get(&back) {
            Some(&sid) => pair1
                .character
                .value(std1.group.class_of(sid))
                .equals(pair2.character.value(c)),
            None => false,
        }
    })
}

/// Are the two pairs conjugate in the ambient group?
pub fn pairs_conjugate(pair1: &CharacterPair, pair2: &CharacterPair) -> bool {
    let amb = pair1.subgroup.ambient();
    if pair1.subgroup.order() != pair2.subgroup.order() {
        return false;
    }
    // g and h*g act identically on the pair for h in the subgroup
    let mut seen = vec![false; amb.order()];
    for g in 0..amb.order() {
        if seen[g] {
            continue;
        }
        for &m in pair1.subgroup.members() {
            seen[amb.mul(m, g)] = true;
        }
        if conjugate_carries(pair1, pair2, g) {
            return true;
        }
    }
    false
}

/// Scan Irr(T) for characters satisfying all the pair conditions for the
/// given tower with stabilizer subgroup `t_sub`.
fn find_pair_candidates(
    tower: &CharacterTower,
    t_sub: &Subgroup,
) -> Result<Vec<(Character, Vec<LevelData>)>> {
    let series = &tower.series;
    let chi = tower.levels.last().unwrap();
    let t_table = t_sub.table()?;
    let index = (series.ambient().order() / t_sub.order()) as u64;
    // per-level intersection subgroups and their tables, shared by all
    // candidates
    let mut meets = Vec::with_capacity(series.len());
    for ni in &series.chain {
        let meet = t_sub.intersection(ni);
        let table = meet.table()?;
        meets.push((meet, table));
    }
    let mut out = Vec::new();
    'cand: for tau in irreducibles(&t_table) {
        if tau.degree() * index != chi.degree() {
            continue;
        }
        let mut levels = Vec::new();
        for (i, nu) in tower.levels.iter().enumerate() {
            let ni = &series.chain[i];
            let (meet, meet_table) = &meets[i];
            let rows = crate::chartab::decompose_restriction_cached(&tau, meet, t_sub)?;
            if rows.len() != 1 {
                continue 'cand; // not homogeneous
            }
            let tau_i = Character::new(meet_table.clone(), rows[0].0);
            let induced = crate::chartab::induce_row_cached(meet, ni, &tau_i)?;
            if !class_functions_equal(&induced, &nu.cf()) {
                continue 'cand;
            }
            levels.push(LevelData {
                multiplicity: rows[0].1,
                tau_i,
            });
        }
        out.push((tau, levels));
    }
    Ok(out)
}

fn class_functions_equal(a: &ClassFunction, b: &ClassFunction) -> bool {
    a.group.id() == b.group.id()
        && a.values
            .iter()
            .zip(b.values.iter())
            .all(|(x, y)| x.equals(y))
}

type SspKey = (u64, Vec<Vec<usize>>, PrimeSet, usize);
static SSP_CACHE: Lazy<Mutex<HashMap<SspKey, Arc<SelfStabilizingPair>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The self-stabilizing pair of `chi` with respect to the series, from the
/// canonical (lexicographically first) tower. Verifies uniqueness of tau and
/// conjugacy of the pairs arising from all towers (when at most 32).
pub fn self_stabilizing_pair(
    chi: &Character,
    series: &NormalPiSeries,
) -> Result<Arc<SelfStabilizingPair>> {
    let key: SspKey = (
        series.ambient().id(),
        series.chain.iter().map(|s| s.members().to_vec()).collect(),
        series.pi.clone(),
        chi.row(),
    );
    if let Some(hit) = SSP_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let towers = character_towers(chi, series)?;
    if towers.is_empty() {
        return Err(Error::Internal("character has no tower".into()));
    }
    let canonical = &towers[0];
    let t_sub = tower_stabilizer(canonical)?;
    let candidates = find_pair_candidates(canonical, &t_sub)?;
    let mut tower_outcomes = vec![candidates.len()];
    if candidates.len() != 1 {
        return Err(Error::Internal(format!(
            "self-stabilizing pair search found {} candidates for row {} (expected exactly 1)",
            candidates.len(),
            chi.row()
        )));
    }
    let (tau, levels) = candidates.into_iter().next().unwrap();
    let pair = CharacterPair {
        subgroup: t_sub,
        character: tau.clone(),
    };
    // all towers must yield conjugate pairs
    if towers.len() <= 32 {
        for other in towers.iter().skip(1) {
            let o_sub = tower_stabilizer(other)?;
            let o_candidates = find_pair_candidates(other, &o_sub)?;
            tower_outcomes.push(o_candidates.len());
            if o_candidates.len() != 1 {
                return Err(Error::Internal(format!(
                    "tower yields {} pair candidates (expected exactly 1)",
                    o_candidates.len()
                )));
            }
            let o_pair = CharacterPair {
                subgroup: o_sub,
                character: o_candidates[0].0.clone(),
            };
            if !pairs_conjugate(&pair, &o_pair) {
                return Err(Error::Internal(
                    "towers yield non-conjugate self-stabilizing pairs".into(),
                ));
            }
        }
    }
    let factorization = pi_factorize(&tau, &series.pi)?;
    let out = Arc::new(SelfStabilizingPair {
        chi: chi.clone(),
        pair,
        tower: towers.into_iter().next().unwrap(),
        levels,
        factorization,
        tower_outcomes,
    });
    let mut cache = SSP_CACHE.lock().unwrap();
    Ok(cache.entry(key).or_insert(out).clone())
}

/// The canonical lift set along a series: the characters whose
/// self-stabilizing pair carries a pi-special character, together with the
/// (verified) bijection onto Ipi.
pub struct BpiSet {
    pub group: Group,
    pub series: NormalPiSeries,
    /// rows of the group's table that belong to the set
    pub rows: Vec<usize>,
    /// Ipi member index of each row's restriction
    pub to_ipi: Vec<usize>,
}

type BpiKey = (u64, Vec<Vec<usize>>, PrimeSet);
static BPI_CACHE: Lazy<Mutex<HashMap<BpiKey, Arc<BpiSet>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn bpi_chain(group: &Group, series: &NormalPiSeries) -> Result<Arc<BpiSet>> {
    if series.ambient().id() != group.id() {
        return Err(Error::GroupMismatch);
    }
    let key: BpiKey = (
        group.id(),
        series.chain.iter().map(|s| s.members().to_vec()).collect(),
        series.pi.clone(),
    );
    if let Some(hit) = BPI_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let table = character_table(group)?;
    let pi = &series.pi;
    let partial = ipi(group, pi)?;
    // pair computations are independent per row
    use rayon::prelude::*;
    let specials: Vec<Result<bool>> = irreducibles(&table)
        .into_par_iter()
        .map(|chi| {
            let ssp = self_stabilizing_pair(&chi, series)?;
            is_pi_special(&ssp.pair.character, pi)
        })
        .collect();
    let mut rows = Vec::new();
    let mut to_ipi = Vec::new();
    for (chi, special) in irreducibles(&table).into_iter().zip(specials) {
        if special? {
            let phi = restrict_character_to_pi(&chi, pi);
            let idx = partial.member_index(&phi).ok_or_else(|| {
                Error::Internal("member of the canonical set is not a pi-lift".into())
            })?;
            rows.push(chi.row());
            to_ipi.push(idx);
        }
    }
    // restriction must be a bijection onto Ipi
    let mut seen = to_ipi.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != to_ipi.len() || to_ipi.len() != partial.members.len() {
        return Err(Error::Internal(format!(
            "restriction is not a bijection onto Ipi: {} rows onto {} of {} members",
            rows.len(),
            seen.len(),
            partial.members.len()
        )));
    }
    let out = Arc::new(BpiSet {
        group: group.clone(),
        series: series.clone(),
        rows,
        to_ipi,
    });
    let mut cache = BPI_CACHE.lock().unwrap();
    Ok(cache.entry(key).or_insert(out).clone())
}

/// A compatible system of lifts: one canonical set per series member, built
/// from the truncated series.
pub struct LiftSystem {
    pub series: NormalPiSeries,
    /// per chain index: the canonical set of the truncated series
    pub sets: Vec<Arc<BpiSet>>,
}

pub fn lift_system_bpi(group: &Group, series: &NormalPiSeries) -> Result<LiftSystem> {
    if series.ambient().id() != group.id() {
        return Err(Error::GroupMismatch);
    }
    let mut sets = Vec::new();
    for i in 0..series.len() {
        let truncated = series.truncate_at(i)?;
        let sub_group = series.chain[i].realize().group.clone();
        sets.push(bpi_chain(&sub_group, &truncated)?);
    }
    Ok(LiftSystem {
        series: series.clone(),
        sets,
    })
}

/// One verified property within a report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckItem {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckItem {
    pub fn new(name: &str) -> CheckItem {
        CheckItem {
            name: name.to_string(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, witness: String) {
        self.checked += 1;
        self.failures.push(witness);
    }

    pub fn record(&mut self, ok: bool, witness: impl Fn() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(witness())
        }
    }
}

/// Check the compatible-lift-set axioms and the conjugation / stabilizer
/// properties for every member. Failures are recorded, never raised.
pub fn check_compatible_lift_set(system: &LiftSystem) -> Result<Vec<CheckItem>> {
    let series = &system.series;
    let pi = &series.pi;
    let mut axiom1 = CheckItem::new("lift-set-bijection");
    let mut axiom2 = CheckItem::new("lift-set-restriction-closure");
    let mut conjugacy = CheckItem::new("lift-set-conjugation-closure");
    let mut stab_eq = CheckItem::new("stabilizer-equality");

    for (i, set) in system.sets.iter().enumerate() {
        let sub = &series.chain[i];
        let std = sub.realize();
        let table = character_table(&std.group)?;
        let partial = ipi(&std.group, pi)?;
        // axiom 1: restriction is a bijection from the set onto Ipi
        let mut hit = vec![false; partial.members.len()];
        let mut ok = set.rows.len() == partial.members.len();
        for (&row, &idx) in set.rows.iter().zip(set.to_ipi.iter()) {
            let chi = Character::new(table.clone(), row);
            let phi = restrict_character_to_pi(&chi, pi);
            if partial.member_index(&phi) != Some(idx) || hit[idx] {
                ok = false;
            }
            hit[idx] = true;
        }
        axiom1.record(ok && hit.iter().all(|&h| h), || {
            format!("level {i}: restriction not a bijection onto Ipi")
        });

        // axiom 2: constituents of restrictions land in the lower sets
        for j in 0..i {
            let low = &series.chain[j];
            let low_table = character_table(&low.realize().group)?;
            let low_rows = &system.sets[j].rows;
            for &row in &set.rows {
                let alpha = Character::new(table.clone(), row);
                let restricted = restrict_between(low, sub, &alpha.cf())?;
                let rows = decompose_character(&restricted, &low_table)?;
                let all_in = rows.iter().all(|(r, _)| low_rows.contains(r));
                axiom2.record(all_in, || {
                    format!("levels {j}<{i}: constituent of row {row} escapes the lift set")
                });
            }
        }

        // conjugation closure and stabilizer equality
        for &row in &set.rows {
            let alpha = Character::new(table.clone(), row);
            let profile = conjugation_profile(sub, &alpha, pi)?;
            let closure_ok = profile.conj_rows.iter().all(|r| set.rows.contains(r));
            conjugacy.record(closure_ok, || {
                format!("level {i} row {row}: conjugate leaves the lift set")
            });
            stab_eq.record(profile.char_stab == profile.partial_stab, || {
                format!("level {i} row {row}: stab(alpha) != stab(alpha^0)")
            });
        }
    }
    Ok(vec![axiom1, axiom2, conjugacy, stab_eq])
}

/// Conjugate a character of a subgroup by an ambient element, returning the
/// values as a class function on the subgroup's realization.
pub fn conjugate_on_subgroup(
    chi: &Character,
    sub: &Subgroup,
    g: usize,
) -> Result<ClassFunction> {
    let std = sub.realize();
    if chi.group().id() != std.group.id() {
        return Err(Error::GroupMismatch);
    }
    let amb = sub.ambient();
    let classes = std.group.conjugacy_classes();
    let values = classes
        .classes
        .iter()
        .map(|c| {
            let t = std.to_ambient[c.rep];
            let conj = amb.mul(amb.mul(g, t), amb.inv(g));
            let sid = std.from_ambient.get(&conj).ok_or(Error::NotNormal)?;
            Ok(chi.value(std.group.class_of(*sid)).clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassFunction {
        group: std.group.clone(),
        values: Arc::new(values),
    })
}


/// Series-independent conjugation data for a character of a normal subgroup:
/// the set of rows hit by conjugation, the stabilizer of the character, and
/// the stabilizer of its partial restriction.
pub struct ConjProfile {
    pub conj_rows: Vec<usize>,
    pub char_stab: Vec<usize>,
    pub partial_stab: Vec<usize>,
}

type ProfileKey = (u64, Vec<usize>, usize, PrimeSet);
static PROFILE_CACHE: Lazy<Mutex<HashMap<ProfileKey, Arc<ConjProfile>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn conjugation_profile(
    sub: &Subgroup,
    chi: &Character,
    pi: &PrimeSet,
) -> Result<Arc<ConjProfile>> {
    let amb = sub.ambient().clone();
    let key: ProfileKey = (amb.id(), sub.members().to_vec(), chi.row(), pi.clone());
    if let Some(hit) = PROFILE_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let table = chi.table().clone();
    let base_partial = restrict_character_to_pi(chi, pi);
    let mut conj_rows = Vec::new();
    let mut char_stab = Vec::new();
    let mut partial_stab = Vec::new();
    let mut seen = vec![false; amb.order()];
    for g in 0..amb.order() {
        if seen[g] {
            continue;
        }
        let coset: Vec<usize> = sub.members().iter().map(|&m| amb.mul(m, g)).collect();
        for &c in &coset {
            seen[c] = true;
        }
        let conj = conjugate_on_subgroup(chi, sub, g)?;
        let row = crate::chartab::find_row(&conj, &table)?
            .ok_or_else(|| Error::Internal("conjugate of a row is not a row".into()))?
            .row();
        conj_rows.push(row);
        if row == chi.row() {
            char_stab.extend(coset.iter().copied());
        }
        let conj_partial = restrict_to_pi(&conj, pi, None);
        if conj_partial.equals(&base_partial) {
            partial_stab.extend(coset);
        }
    }
    conj_rows.sort_unstable();
    conj_rows.dedup();
    char_stab.sort_unstable();
    partial_stab.sort_unstable();
    let out = Arc::new(ConjProfile {
        conj_rows,
        char_stab,
        partial_stab,
    });
    let mut cache = PROFILE_CACHE.lock().unwrap();
    Ok(cache.entry(key).or_insert(out).clone())
}
