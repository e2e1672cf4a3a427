//! Normal pi-series: chains of normal subgroups with pi- or pi'-factors,
//! pi-separability, and chain enumeration.

use crate::group::{Group, Subgroup};
use crate::primes::PrimeSet;
use crate::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FactorKind {
    Pi,
    PiPrime,
}

/// A chain 1 = N_0 < N_1 < ... < N_n = G of normal subgroups whose
/// consecutive factors are pi-groups or pi'-groups.
#[derive(Clone)]
pub struct NormalPiSeries {
    pub pi: PrimeSet,
    pub chain: Vec<Subgroup>,
    pub kinds: Vec<FactorKind>,
}

impl std::fmt::Debug for NormalPiSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let orders: Vec<usize> = self.chain.iter().map(|s| s.order()).collect();
        write!(f, "NormalPiSeries(pi={}, orders={:?})", self.pi, orders)
    }
}

impl NormalPiSeries {
    /// Validate and build from a chain of subgroups of one ambient group.
    pub fn new(pi: PrimeSet, chain: Vec<Subgroup>) -> Result<NormalPiSeries> {
        if chain.is_empty() {
            return Err(Error::InvalidArg("series chain is empty".into()));
        }
        let ambient = chain[0].ambient().clone();
        if !chain[0].is_trivial() {
            return Err(Error::InvalidArg("series must start at the trivial subgroup".into()));
        }
        if !chain.last().unwrap().is_full() {
            return Err(Error::InvalidArg("series must end at the whole group".into()));
        }
        let mut kinds = Vec::new();
        for w in chain.windows(2) {
            if w[0].ambient().id() != ambient.id() || w[1].ambient().id() != ambient.id() {
                return Err(Error::GroupMismatch);
            }
            if !w[1].contains_subgroup(&w[0]) || w[1].order() == w[0].order() {
                return Err(Error::InvalidArg("series members must strictly increase".into()));
            }
            let factor = (w[1].order() / w[0].order()) as u64;
            if pi.is_pi_number(factor) {
                kinds.push(FactorKind::Pi);
            } else if pi.is_pi_prime_number(factor) {
                kinds.push(FactorKind::PiPrime);
            } else {
                return Err(Error::InvalidArg(format!(
                    "factor of order {factor} is neither a pi-group nor a pi'-group"
                )));
            }
        }
        for sub in &chain {
            if !sub.is_normal() {
                return Err(Error::NotNormal);
            }
        }
        Ok(NormalPiSeries { pi, chain, kinds })
    }

    pub fn ambient(&self) -> &Group {
        self.chain[0].ambient()
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Stable identity for caching: ambient group plus member sets.
    pub fn key(&self) -> SeriesKey {
        SeriesKey {
            group: self.ambient().id(),
            members: self.chain.iter().map(|s| s.members().to_vec()).collect(),
        }
    }

    pub fn orders(&self) -> Vec<usize> {
        self.chain.iter().map(|s| s.order()).collect()
    }

    /// The series truncated at chain index i, re-expressed inside the
    /// standalone realization of N_i.
    pub fn truncate_at(&self, i: usize) -> Result<NormalPiSeries> {
        let top = &self.chain[i];
        if top.is_full() {
            return NormalPiSeries::new(self.pi.clone(), self.chain[..=i].to_vec());
        }
        let std = top.realize();
        let mut chain = Vec::new();
        for sub in &self.chain[..=i] {
            let members: Vec<usize> = sub
                .members()
                .iter()
                .map(|m| {
                    std.from_ambient
                        .get(m)
                        .copied()
                        .ok_or_else(|| Error::Internal("series member not inside truncation point".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            chain.push(std.group.subgroup(members)?);
        }
        NormalPiSeries::new(self.pi.clone(), chain)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesKey {
    pub group: u64,
    pub members: Vec<Vec<usize>>,
}

/// Chief series test: pi-separable iff every chief factor is a pi-group or a
/// pi'-group. Returns a witness chief series on success.
pub fn is_pi_separable(group: &Group, pi: &PrimeSet) -> Option<Vec<Subgroup>> {
    let normals = group.normal_subgroups();
    let mut chain = vec![group.trivial_subgroup()];
    loop {
        let current = chain.last().unwrap().clone();
        if current.is_full() {
            break;
        }
        // minimal normal subgroup of G strictly above `current`
        let above: Vec<&Subgroup> = normals
            .iter()
            .filter(|n| n.order() > current.order() && n.contains_subgroup(&current))
            .collect();
        let minimal = above
            .iter()
            .find(|n| {
                !above
                    .iter()
                    .any(|m| m.order() > current.order() && m.order() < n.order() && n.contains_subgroup(m))
            })
            .expect("normal lattice always reaches the whole group");
        let factor = (minimal.order() / current.order()) as u64;
        if !pi.is_pi_number(factor) && !pi.is_pi_prime_number(factor) {
            return None;
        }
        chain.push((*minimal).clone());
    }
    Some(chain)
}

/// All normal pi-series, in lexicographic order over the deterministic
/// normal subgroup list. The boolean reports cap truncation.
pub fn enumerate_normal_pi_series(
    group: &Group,
    pi: &PrimeSet,
    cap: usize,
) -> Result<(Vec<NormalPiSeries>, bool)> {
    if is_pi_separable(group, pi).is_none() {
        return Err(Error::NotPiSeparable(pi.to_string()));
    }
    let normals = group.normal_subgroups();
    let mut out = Vec::new();
    let mut truncated = false;
    let mut stack: Vec<Vec<usize>> = vec![vec![0]]; // indices into normals; 0 is trivial
    while let Some(prefix) = stack.pop() {
        if out.len() >= cap {
            truncated = true;
            break;
        }
        let last = &normals[*prefix.last().unwrap()];
        if last.is_full() {
            let chain: Vec<Subgroup> = prefix.iter().map(|&i| normals[i].clone()).collect();
            out.push(NormalPiSeries::new(pi.clone(), chain)?);
            continue;
        }
        // extend by any strictly larger normal subgroup with a pure factor;
        // push in reverse so the smallest extension is explored first
        for i in (0..normals.len()).rev() {
            let cand = &normals[i];
            if cand.order() <= last.order() || !cand.contains_subgroup(last) {
                continue;
            }
            let factor = (cand.order() / last.order()) as u64;
            if pi.is_pi_number(factor) || pi.is_pi_prime_number(factor) {
                let mut next = prefix.clone();
                next.push(i);
                stack.push(next);
            }
        }
    }
    Ok((out, truncated))
}

/// The pi'-part of |V : V'|.
pub fn pi_prime_index_of_abelianization(v: &Subgroup, pi: &PrimeSet) -> u64 {
    let derived = v.derived_subgroup();
    let index = (v.order() / derived.order()) as u64;
    pi.pi_prime_part(index)
}
