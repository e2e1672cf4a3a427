//! pi-partial characters: restrictions to pi-elements, the irreducible
//! partial character table Ipi(G), lifts, pi-special characters, and
//! factorization into special parts.

use crate::chartab::{
    character_table, determinant_order, irreducibles, pointwise_product, restrict_constituents,
    CharTable, Character, ClassFunction,
};
use crate::cyclotomic::Cyc;
use crate::group::Group;
use crate::primes::PrimeSet;
use crate::{Error, Result};
use num::{BigRational, One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// The pi-classes of a group: classes whose representative order only
/// involves primes in pi. The identity class is always index 0.
#[derive(Debug, Clone)]
pub struct PiClassSet {
    pub pi: PrimeSet,
    pub class_ids: Vec<usize>,
}

pub fn pi_classes(group: &Group, pi: &PrimeSet) -> PiClassSet {
    let classes = group.conjugacy_classes();
    let class_ids = (0..classes.len())
        .filter(|&c| pi.is_pi_number(classes.classes[c].rep_order))
        .collect();
    PiClassSet {
        pi: pi.clone(),
        class_ids,
    }
}

/// A class function on pi-classes only.
#[derive(Clone)]
pub struct PartialCharacter {
    pub group: Group,
    pub pi: PrimeSet,
    pub class_ids: Arc<Vec<usize>>,
    pub values: Arc<Vec<Cyc>>,
    /// a witnessing table row whose restriction this is, when known
    pub origin: Option<usize>,
}

impl std::fmt::Debug for PartialCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PartialCharacter(group={}, pi={}, degree={:?})",
            self.group.id(),
            self.pi,
            self.degree()
        )
    }
}

impl PartialCharacter {
    pub fn degree(&self) -> u64 {
        self.values[0].as_u64().unwrap_or(0)
    }

    pub fn equals(&self, other: &PartialCharacter) -> bool {
        self.group.id() == other.group.id()
            && self.pi == other.pi
            && self
                .values
                .iter()
                .zip(other.values.iter())
                .all(|(a, b)| a.equals(b))
    }
}

/// Restriction of a class function to the pi-classes.
pub fn restrict_to_pi(f: &ClassFunction, pi: &PrimeSet, origin: Option<usize>) -> PartialCharacter {
    let pcs = pi_classes(&f.group, pi);
    let values: Vec<Cyc> = pcs.class_ids.iter().map(|&c| f.values[c].clone()).collect();
    PartialCharacter {
        group: f.group.clone(),
        pi: pi.clone(),
        class_ids: Arc::new(pcs.class_ids),
        values: Arc::new(values),
        origin,
    }
}

pub fn restrict_character_to_pi(chi: &Character, pi: &PrimeSet) -> PartialCharacter {
    let mut p = restrict_to_pi(&chi.cf(), pi, Some(chi.row()));
    p.origin = Some(chi.row());
    p
}

/// The set Ipi(G) with the decomposition matrix of all restrictions.
pub struct PartialTable {
    pub group: Group,
    pub pi: PrimeSet,
    pub pi_classes: PiClassSet,
    pub members: Vec<PartialCharacter>,
    /// for each row of Irr(G), its coordinates over `members`
    pub decomposition: Vec<Vec<u64>>,
}

impl PartialTable {
    /// Index of a member with the given values, if any.
    pub fn member_index(&self, phi: &PartialCharacter) -> Option<usize> {
        self.members.iter().position(|m| m.equals(phi))
    }

    /// All irreducible characters restricting to the given member.
    pub fn lifts_of(&self, index: usize) -> Result<Vec<Character>> {
        let table = character_table(&self.group)?;
        let target = &self.members[index];
        Ok(irreducibles(&table)
            .into_iter()
            .filter(|chi| restrict_character_to_pi(chi, &self.pi).equals(target))
            .collect())
    }
}

type PiKey = (u64, PrimeSet);
static IPI_CACHE: Lazy<Mutex<HashMap<PiKey, Arc<PartialTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Compute Ipi(G): collect the distinct restrictions of the irreducible
/// characters, then accept an element as irreducible exactly when it is not
/// a non-negative integer combination of already-accepted strictly smaller
/// degree members.
pub fn ipi(group: &Group, pi: &PrimeSet) -> Result<Arc<PartialTable>> {
    let key = (group.id(), pi.clone());
    if let Some(hit) = IPI_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let table = character_table(group)?;
    let pcs = pi_classes(group, pi);
    let all: Vec<PartialCharacter> = irreducibles(&table)
        .iter()
        .map(|chi| restrict_character_to_pi(chi, pi))
        .collect();
    // dedup by values, keeping the first origin, then sort by degree
    let mut candidates: Vec<PartialCharacter> = Vec::new();
    for p in &all {
        if !candidates.iter().any(|q| q.equals(p)) {
            candidates.push(p.clone());
        }
    }
    candidates.sort_by(|a, b| {
        a.degree().cmp(&b.degree()).then_with(|| {
            for (x, y) in a.values.iter().zip(b.values.iter()) {
                let c = x.cmp_key(y);
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let mut members: Vec<PartialCharacter> = Vec::new();
    for cand in &candidates {
        let smaller: Vec<&PartialCharacter> = members
            .iter()
            .filter(|m| m.degree() < cand.degree())
            .collect();
        let expressible = match solve_nonneg_integer(&smaller, cand)? {
            Some(_) => true,
            None => false,
        };
        if !expressible {
            members.push(cand.clone());
        }
    }

    // engine-level assertions
    if members.len() != pcs.class_ids.len() {
        return Err(Error::Internal(format!(
            "|Ipi| = {} but there are {} pi-classes",
            members.len(),
            pcs.class_ids.len()
        )));
    }
    let member_refs: Vec<&PartialCharacter> = members.iter().collect();
    let mut decomposition = Vec::with_capacity(all.len());
    for p in &all {
        let coords = solve_nonneg_integer(&member_refs, p)?
            .ok_or_else(|| Error::Internal("restriction does not decompose over Ipi".into()))?;
        decomposition.push(coords);
    }
    let out = Arc::new(PartialTable {
        group: group.clone(),
        pi: pi.clone(),
        pi_classes: pcs,
        members,
        decomposition,
    });
    let mut cache = IPI_CACHE.lock().unwrap();
    Ok(cache.entry(key).or_insert(out).clone())
}

/// Solve psi = sum c_i basis_i with non-negative integer c_i, exactly. The
/// cyclotomic values are flattened to rational vectors, so this is a plain
/// rational linear solve. Errors if the basis is linearly dependent.
fn solve_nonneg_integer(
    basis: &[&PartialCharacter],
    psi: &PartialCharacter,
) -> Result<Option<Vec<u64>>> {
    if basis.is_empty() {
        return Ok(if psi.values.iter().all(|v| v.is_zero()) {
            Some(vec![])
        } else {
            None
        });
    }
    let conductor = basis
        .iter()
        .flat_map(|b| b.values.iter())
        .chain(psi.values.iter())
        .fold(1u64, |acc, v| crate::primes::lcm(acc, v.conductor()));
    let flatten = |p: &PartialCharacter| -> Vec<BigRational> {
        p.values
            .iter()
            .flat_map(|v| v.lift_to(conductor).coeffs().to_vec())
            .collect()
    };
    let cols: Vec<Vec<BigRational>> = basis.iter().map(|b| flatten(b)).collect();
    let rhs = flatten(psi);
    let rows = rhs.len();
    let k = cols.len();
    // augmented matrix [A | b]
    let mut aug: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0;
    for col in 0..k {
        let Some(sel) = (row..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(row, sel);
        let inv = aug[row][col].clone();
        for c in col..=k {
            let v = &aug[row][c] / &inv;
            aug[row][c] = v;
        }
        for r in 0..rows {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=k {
                    let v = &aug[r][c] - &f * &aug[row][c];
                    aug[r][c] = v;
                }
            }
        }
        pivot_rows.push((row, col));
        row += 1;
    }
    if pivot_rows.len() < k {
        return Err(Error::Internal(
            "partial character basis is linearly dependent".into(),
        ));
    }
    // inconsistent rows?
    for r in row..rows {
        if !aug[r][k].is_zero() {
            return Ok(None);
        }
    }
    let mut coords = vec![BigRational::zero(); k];
    for &(r, c) in &pivot_rows {
        coords[c] = aug[r][k].clone();
    }
    let mut out = Vec::with_capacity(k);
    for c in coords {
        if !c.denom().is_one() || c.is_negative() {
            return Ok(None);
        }
        use num::ToPrimitive;
        match c.numer().to_u64() {
            Some(v) => out.push(v),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Exact coordinates of a partial character over Ipi(G).
pub fn decompose_partial(
    psi: &PartialCharacter,
    table: &PartialTable,
) -> Result<Vec<(usize, u64)>> {
    if psi.group.id() != table.group.id() || psi.pi != table.pi {
        return Err(Error::GroupMismatch);
    }
    let refs: Vec<&PartialCharacter> = table.members.iter().collect();
    let coords = solve_nonneg_integer(&refs, psi)?.ok_or_else(|| {
        Error::InvalidArg("input is not a non-negative integer combination of Ipi".into())
    })?;
    Ok(coords
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .collect())
}

/// Which side of the special dichotomy a test refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecialSide {
    Pi,
    PiPrime,
}

type SpecialKey = (u64, PrimeSet, SpecialSide);
static SPECIAL_CACHE: Lazy<Mutex<HashMap<SpecialKey, Arc<Vec<bool>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Rows of the table that are pi-special (or pi'-special): the degree is a
/// pi-number and every irreducible constituent on every subnormal subgroup
/// has pi-number determinantal order.
pub fn special_rows(
    table: &Arc<CharTable>,
    pi: &PrimeSet,
    side: SpecialSide,
) -> Result<Arc<Vec<bool>>> {
    let key = (table.group().id(), pi.clone(), side);
    if let Some(hit) = SPECIAL_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let allowed = |n: u64| match side {
        SpecialSide::Pi => pi.is_pi_number(n),
        SpecialSide::PiPrime => pi.is_pi_prime_number(n),
    };
    let group = table.group().clone();
    let subnormals = group.subnormal_subgroups().to_vec();
    let mut flags = Vec::with_capacity(table.len());
    'rows: for chi in irreducibles(table) {
        if !allowed(chi.degree()) {
            flags.push(false);
            continue;
        }
        for sub in &subnormals {
            let r = restrict_constituents(&chi, sub)?;
            for (eta, _) in &r.constituents {
                if !allowed(determinant_order(eta)?) {
                    flags.push(false);
                    continue 'rows;
                }
            }
        }
        flags.push(true);
    }
    let out = Arc::new(flags);
    let mut cache = SPECIAL_CACHE.lock().unwrap();
    Ok(cache.entry(key).or_insert(out).clone())
}

pub fn is_pi_special(chi: &Character, pi: &PrimeSet) -> Result<bool> {
    Ok(special_rows(chi.table(), pi, SpecialSide::Pi)?[chi.row()])
}

pub fn is_pi_prime_special(chi: &Character, pi: &PrimeSet) -> Result<bool> {
    Ok(special_rows(chi.table(), pi, SpecialSide::PiPrime)?[chi.row()])
}

/// A factorization chi = alpha * beta with alpha pi-special and beta
/// pi'-special.
#[derive(Clone, Debug)]
pub struct SpecialFactorization {
    pub alpha: Character,
    pub beta: Character,
}

/// Scan (pi-special) x (pi'-special) pairs for a factorization of chi.
/// Errors if two distinct factorizations are found.
pub fn pi_factorize(chi: &Character, pi: &PrimeSet) -> Result<Option<SpecialFactorization>> {
    let table = chi.table();
    let pi_rows = special_rows(table, pi, SpecialSide::Pi)?;
    let prime_rows = special_rows(table, pi, SpecialSide::PiPrime)?;
    let rows = irreducibles(table);
    let mut found: Option<SpecialFactorization> = None;
    for alpha in rows.iter().filter(|c| pi_rows[c.row()]) {
        for beta in rows.iter().filter(|c| prime_rows[c.row()]) {
            if alpha.degree() * beta.degree() != chi.degree() {
                continue;
            }
            let matches = chi
                .values()
                .iter()
                .enumerate()
                .all(|(c, v)| alpha.value(c).mul(beta.value(c)).equals(v));
            if matches {
                if let Some(prev) = &found {
                    if prev.alpha != *alpha || prev.beta != *beta {
                        return Err(Error::Internal(
                            "two distinct special factorizations found".into(),
                        ));
                    }
                } else {
                    found = Some(SpecialFactorization {
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                    });
                }
            }
        }
    }
    Ok(found)
}

/// Product of the two special parts, for checking.
pub fn factorization_product(f: &SpecialFactorization) -> Result<ClassFunction> {
    pointwise_product(&f.alpha.cf(), &f.beta.cf())
}
