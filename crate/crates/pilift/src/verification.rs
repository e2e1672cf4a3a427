//! The verification harness: property suites for the lemma-level claims,
//! the bundled order-1323 case-study report, and batched corpus runs.

use crate::builtins::{self, Section4Group};
use crate::chartab::{
    character_table, decompose_restriction_cached, find_row, induce_between, irreducibles,
    pointwise_product, restrict_constituents, Character,
};
use crate::group::Group;
use crate::lift_analysis::{
    check_lift_equivalence, containment_holds, is_chain_pi_lift, is_inductive_pair,
    lift_count_bound,
};
use crate::pi_theory::{
    ipi, is_pi_special, pi_factorize, restrict_character_to_pi, special_rows, SpecialSide,
};
use crate::primes::PrimeSet;
use crate::series::{enumerate_normal_pi_series, NormalPiSeries};
use crate::towers::{
    bpi_chain, character_towers, check_compatible_lift_set, lift_system_bpi,
    pairs_conjugate, self_stabilizing_pair, tower_stabilizer, CharacterPair, CheckItem,
    SelfStabilizingPair,
};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// How to pick the series for a suite run.
#[derive(Clone)]
pub enum SeriesSelection {
    /// All enumerated normal pi-series, up to the cap.
    Enumerate { cap: usize },
    /// An explicit list.
    Named(Vec<NormalPiSeries>),
}

pub const DEFAULT_SERIES_CAP: usize = 64;

/// Aggregated result of one (group, pi) suite run.
#[derive(Serialize)]
pub struct SuiteEntry {
    pub group: String,
    pub order: usize,
    pub pi: Vec<u64>,
    pub series_orders: Vec<Vec<usize>>,
    pub truncated: bool,
    pub checks: Vec<CheckItem>,
    #[serde(skip)]
    pub elapsed: std::time::Duration,
}

impl SuiteEntry {
    pub fn total_checked(&self) -> usize {
        self.checks.iter().map(|c| c.checked).sum()
    }

    pub fn anomalies(&self) -> Vec<String> {
        self.checks
            .iter()
            .flat_map(|c| c.failures.iter().map(move |f| format!("[{}] {}", c.name, f)))
            .collect()
    }
}

/// Whole-corpus report.
#[derive(Serialize)]
pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
    pub total_checked: usize,
    pub total_anomalies: usize,
}

impl SuiteReport {
    pub fn from_entries(entries: Vec<SuiteEntry>) -> SuiteReport {
        let total_checked = entries.iter().map(|e| e.total_checked()).sum();
        let total_anomalies = entries.iter().map(|e| e.anomalies().len()).sum();
        SuiteReport {
            entries,
            total_checked,
            total_anomalies,
        }
    }
}

struct SuiteChecks {
    bijection: CheckItem,
    restriction_closure: CheckItem,
    conjugation_closure: CheckItem,
    stabilizer_equality: CheckItem,
    equivalence: CheckItem,
    lift_bound: CheckItem,
    degree: CheckItem,
    common_chains: CheckItem,
    self_stabilizing_inductive: CheckItem,
    product_self_stabilizing: CheckItem,
    inductive_induces: CheckItem,
    factored_equivalence: CheckItem,
    containment: CheckItem,
    engine: CheckItem,
}

impl SuiteChecks {
    fn new() -> SuiteChecks {
        SuiteChecks {
            bijection: CheckItem::new("lift-set-bijection"),
            restriction_closure: CheckItem::new("lift-set-restriction-closure"),
            conjugation_closure: CheckItem::new("lift-set-conjugation-closure"),
            stabilizer_equality: CheckItem::new("stabilizer-equality"),
            equivalence: CheckItem::new("equivalence-verdict"),
            lift_bound: CheckItem::new("lift-bound"),
            degree: CheckItem::new("degree-pi-number"),
            common_chains: CheckItem::new("common-chains-stabilizer"),
            self_stabilizing_inductive: CheckItem::new("self-stabilizing-inductive"),
            product_self_stabilizing: CheckItem::new("product-self-stabilizing"),
            inductive_induces: CheckItem::new("inductive-pair-induces"),
            factored_equivalence: CheckItem::new("factored-equivalence"),
            containment: CheckItem::new("containment"),
            engine: CheckItem::new("engine-errors"),
        }
    }

    fn into_vec(self) -> Vec<CheckItem> {
        vec![
            self.bijection,
            self.restriction_closure,
            self.conjugation_closure,
            self.stabilizer_equality,
            self.equivalence,
            self.lift_bound,
            self.degree,
            self.common_chains,
            self.self_stabilizing_inductive,
            self.product_self_stabilizing,
            self.inductive_induces,
            self.factored_equivalence,
            self.containment,
            self.engine,
        ]
    }
}

/// Run every lemma-level suite for one group, one pi, and the selected
/// series. Failures are recorded as check items; engine errors are caught
/// into the "engine-errors" item so a batch run always completes.
pub fn run_property_suite(
    group: &Group,
    label: &str,
    pi: &PrimeSet,
    selection: &SeriesSelection,
) -> Result<SuiteEntry> {
    let start = std::time::Instant::now();
    let (series_list, truncated) = match selection {
        SeriesSelection::Enumerate { cap } => enumerate_normal_pi_series(group, pi, *cap)?,
        SeriesSelection::Named(list) => (list.clone(), false),
    };
    let mut checks = SuiteChecks::new();
    for series in &series_list {
        run_one_series(group, pi, series, &mut checks);
    }
    Ok(SuiteEntry {
        group: label.to_string(),
        order: group.order(),
        pi: pi.iter().collect(),
        series_orders: series_list.iter().map(|s| s.orders()).collect(),
        truncated,
        checks: checks.into_vec(),
        elapsed: start.elapsed(),
    })
}

fn run_one_series(group: &Group, pi: &PrimeSet, series: &NormalPiSeries, checks: &mut SuiteChecks) {
    let label = format!("series {:?}", series.orders());
    let table = match character_table(group) {
        Ok(t) => t,
        Err(e) => {
            checks.engine.fail(format!("{label}: table: {e}"));
            return;
        }
    };

    // compatible lift system and its axioms
    match lift_system_bpi(group, series).and_then(|sys| check_compatible_lift_set(&sys)) {
        Ok(items) => {
            for item in items {
                let target = match item.name.as_str() {
                    "lift-set-bijection" => &mut checks.bijection,
                    "lift-set-restriction-closure" => &mut checks.restriction_closure,
                    "lift-set-conjugation-closure" => &mut checks.conjugation_closure,
                    _ => &mut checks.stabilizer_equality,
                };
                target.checked += item.checked;
                target
                    .failures
                    .extend(item.failures.into_iter().map(|f| format!("{label}: {f}")));
            }
        }
        Err(e) => checks.engine.fail(format!("{label}: lift system: {e}")),
    }

    // three-way equivalence for every character (parallel over rows)
    type EquivOut = Result<(crate::lift_analysis::EquivalenceReport, Arc<SelfStabilizingPair>)>;
    let equiv: Vec<(usize, EquivOut)> = (0..table.len())
        .into_par_iter()
        .map(|row| {
            let chi = Character::new(table.clone(), row);
            (row, check_lift_equivalence(&chi, series))
        })
        .collect();
    let mut ssps: Vec<Option<Arc<SelfStabilizingPair>>> = vec![None; table.len()];
    let mut conds: Vec<Option<(bool, bool, bool)>> = vec![None; table.len()];
    for (row, outcome) in equiv {
        match outcome {
            Ok((report, ssp)) => {
                checks.equivalence.record(report.verdict, || {
                    format!(
                        "{label}: row {row}: conditions ({}, {}, {})",
                        report.chain_lift,
                        report.pair_inductive,
                        report.special_part_inductive_and_linear
                    )
                });
                checks
                    .factored_equivalence
                    .record(report.pair_inductive == report.special_part_inductive_and_linear, || {
                        format!("{label}: row {row}: factored equivalence fails")
                    });
                conds[row] = Some((
                    report.chain_lift,
                    report.pair_inductive,
                    report.special_part_inductive_and_linear,
                ));
                ssps[row] = Some(ssp);
            }
            Err(e) => checks.engine.fail(format!("{label}: row {row}: {e}")),
        }
    }

    // the canonical lift set of the full series
    let bpi = match bpi_chain(group, series) {
        Ok(b) => b,
        Err(e) => {
            checks.engine.fail(format!("{label}: canonical set: {e}"));
            return;
        }
    };

    // lower bound report for every irreducible partial character
    let phi_count = match ipi(group, pi) {
        Ok(t) => t.members.len(),
        Err(e) => {
            checks.engine.fail(format!("{label}: ipi: {e}"));
            return;
        }
    };
    let bounds: Vec<(usize, Result<crate::lift_analysis::LiftBoundReport>)> = (0..phi_count)
        .into_par_iter()
        .map(|idx| (idx, lift_count_bound(idx, series)))
        .collect();
    for (idx, outcome) in bounds {
        match outcome {
            Ok(report) => checks.lift_bound.record(report.all_good(), || {
                format!(
                    "{label}: phi {idx}: bound {} count {} flags d={} i={} l={} c={}",
                    report.bound,
                    report.lift_count,
                    report.images_distinct,
                    report.images_irreducible,
                    report.images_are_lifts,
                    report.images_are_chain_lifts
                )
            }),
            Err(e) => checks.engine.fail(format!("{label}: phi {idx}: {e}")),
        }
    }

    // degree lemma on the members of the canonical set
    for &row in &bpi.rows {
        let Some(ssp) = ssps[row].clone() else { continue };
        let tau = &ssp.pair.character;
        let t_sub = &ssp.pair.subgroup;
        let pi_number = pi.is_pi_number(tau.degree());
        let sigma_exists = (|| -> Result<bool> {
            let t_table = t_sub.table()?;
            let specials = special_rows(&t_table, pi, SpecialSide::Pi)?;
            let chi = Character::new(table.clone(), row);
            let phi = restrict_character_to_pi(&chi, pi);
            let full = group.full_subgroup();
            for sigma in irreducibles(&t_table) {
                if !specials[sigma.row()] {
                    continue;
                }
                let induced = induce_between(t_sub, &full, &sigma.cf())?;
                let partial = crate::pi_theory::restrict_to_pi(&induced, pi, None);
                if partial.equals(&phi) {
                    return Ok(true);
                }
            }
            Ok(false)
        })();
        match sigma_exists {
            Ok(found) => checks.degree.record(pi_number && found, || {
                format!("{label}: row {row}: tau degree pi-number={pi_number} sigma found={found}")
            }),
            Err(e) => checks.engine.fail(format!("{label}: degree lemma row {row}: {e}")),
        }
    }

    // common chains: stabilizers of matching towers are comparable
    if let Err(e) = check_common_chains(group, pi, series, &bpi.rows, &table, checks, &label) {
        checks.engine.fail(format!("{label}: common chains: {e}"));
    }

    // self-stabilizing pairs with pi-special character are inductive, and
    // products with homogeneous pi'-special characters stay self-stabilizing
    for row in 0..table.len() {
        let Some(ssp) = ssps[row].clone() else { continue };
        let special = match is_pi_special(&ssp.pair.character, pi) {
            Ok(s) => s,
            Err(e) => {
                checks.engine.fail(format!("{label}: special test row {row}: {e}"));
                continue;
            }
        };
        if !special {
            continue;
        }
        if let Some((_, cond2, _)) = conds[row] {
            checks.self_stabilizing_inductive.record(cond2, || {
                format!("{label}: row {row}: pi-special pair is not inductive")
            });
        }
        if let Err(e) = check_indself(group, pi, series, &ssp, checks, &label, row) {
            checks.engine.fail(format!("{label}: product pairs row {row}: {e}"));
        }
    }

    // every pair discovered inductive: induces an irreducible chain lift,
    // carries a factored character, and sits under a self-stabilizing pair
    for row in 0..table.len() {
        let Some(ssp) = ssps[row].clone() else { continue };
        let Some((_, cond2, _)) = conds[row] else { continue };
        let mut discovered: Vec<CharacterPair> = Vec::new();
        if cond2 {
            discovered.push(ssp.pair.clone());
        }
        if let Some(fact) = &ssp.factorization {
            let alpha_pair = CharacterPair {
                subgroup: ssp.pair.subgroup.clone(),
                character: fact.alpha.clone(),
            };
            match is_inductive_pair(&alpha_pair, series) {
                Ok(out) if out.is_inductive() => discovered.push(alpha_pair),
                Ok(_) => {}
                Err(e) => checks
                    .engine
                    .fail(format!("{label}: alpha pair row {row}: {e}")),
            }
        }
        for pair in discovered {
            match check_inductive_lemma(group, pi, series, &pair) {
                Ok(ok) => checks.inductive_induces.record(ok, || {
                    format!("{label}: row {row}: inductive pair fails the induction lemma")
                }),
                Err(e) => checks.engine.fail(format!("{label}: inductive lemma row {row}: {e}")),
            }
            match containment_holds(&pair, series) {
                Ok(ok) => checks.containment.record(ok, || {
                    format!("{label}: row {row}: inductive pair not under a self-stabilizing pair")
                }),
                Err(e) => checks.engine.fail(format!("{label}: containment row {row}: {e}")),
            }
        }
    }
}

/// An inductive pair induces an irreducible chain pi-lift with factored
/// character.
fn check_inductive_lemma(
    group: &Group,
    pi: &PrimeSet,
    series: &NormalPiSeries,
    pair: &CharacterPair,
) -> Result<bool> {
    let table = character_table(group)?;
    let full = group.full_subgroup();
    let induced = induce_between(&pair.subgroup, &full, &pair.character.cf())?;
    let Some(chi) = find_row(&induced, &table)? else {
        return Ok(false);
    };
    if !is_chain_pi_lift(&chi, series)?.holds {
        return Ok(false);
    }
    Ok(pi_factorize(&pair.character, pi)?.is_some())
}

/// For a self-stabilizing (V, alpha) with alpha pi-special and a pi'-special
/// beta with homogeneous restrictions along the chain, (V, alpha*beta) must
/// again be a self-stabilizing pair (of its induced character).
fn check_indself(
    group: &Group,
    pi: &PrimeSet,
    series: &NormalPiSeries,
    ssp: &SelfStabilizingPair,
    checks: &mut SuiteChecks,
    label: &str,
    row: usize,
) -> Result<()> {
    let v = &ssp.pair.subgroup;
    let alpha = &ssp.pair.character;
    let v_table = v.table()?;
    let prime_special = special_rows(&v_table, pi, SpecialSide::PiPrime)?;
    let table = character_table(group)?;
    let full = group.full_subgroup();
    'beta: for beta in irreducibles(&v_table) {
        if !prime_special[beta.row()] {
            continue;
        }
        for n_sub in &series.chain {
            let meet = v.intersection(n_sub);
            let rows = decompose_restriction_cached(&beta, &meet, v)?;
            if rows.len() != 1 {
                continue 'beta;
            }
        }
        // the product must be an irreducible character of V
        let product = pointwise_product(&alpha.cf(), &beta.cf())?;
        let Some(prod_char) = find_row(&product, &v_table)? else {
            checks.product_self_stabilizing.fail(format!(
                "{label}: row {row} beta {}: product is not irreducible",
                beta.row()
            ));
            continue;
        };
        let induced = induce_between(v, &full, &product)?;
        let Some(xi) = find_row(&induced, &table)? else {
            checks.product_self_stabilizing.fail(format!(
                "{label}: row {row} beta {}: induced product is not irreducible",
                beta.row()
            ));
            continue;
        };
        let target = self_stabilizing_pair(&xi, series)?;
        let candidate = CharacterPair {
            subgroup: v.clone(),
            character: prod_char,
        };
        let ok = pairs_conjugate(&target.pair, &candidate);
        checks.product_self_stabilizing.record(ok, || {
            format!(
                "{label}: row {row} beta {}: product pair is not self-stabilizing",
                beta.row()
            )
        });
    }
    Ok(())
}

/// Matching towers of a canonical lift and a chain pi-lift with the same
/// partial character have comparable stabilizers.
fn check_common_chains(
    _group: &Group,
    pi: &PrimeSet,
    series: &NormalPiSeries,
    canonical_rows: &[usize],
    table: &Arc<crate::chartab::CharTable>,
    checks: &mut SuiteChecks,
    label: &str,
) -> Result<()> {
    for &psi_row in canonical_rows {
        let psi = Character::new(table.clone(), psi_row);
        let phi = restrict_character_to_pi(&psi, pi);
        let psi_towers = character_towers(&psi, series)?;
        if psi_towers.len() > 32 {
            continue;
        }
        for chi_row in 0..table.len() {
            let chi = Character::new(table.clone(), chi_row);
            if !restrict_character_to_pi(&chi, pi).equals(&phi) {
                continue;
            }
            if !is_chain_pi_lift(&chi, series)?.holds {
                continue;
            }
            let chi_towers = character_towers(&chi, series)?;
            if chi_towers.len() > 32 {
                continue;
            }
            for t_tower in &psi_towers {
                for u_tower in &chi_towers {
                    // towers must match level by level on pi-elements
                    let matching = t_tower
                        .levels
                        .iter()
                        .zip(u_tower.levels.iter())
                        .all(|(tau_i, nu_i)| {
                            restrict_character_to_pi(tau_i, pi)
                                .equals(&restrict_character_to_pi(nu_i, pi))
                        });
                    if !matching {
                        continue;
                    }
                    let stab_t = tower_stabilizer(t_tower)?;
                    let stab_u = tower_stabilizer(u_tower)?;
                    checks.common_chains.record(
                        stab_t.contains_subgroup(&stab_u),
                        || {
                            format!(
                                "{label}: psi {psi_row} chi {chi_row}: stab(U) not under stab(T)"
                            )
                        },
                    );
                }
            }
        }
    }
    Ok(())
}

/// Default corpus: small solvable groups across several pi-sets, plus the
/// bundled order-1323 case study.
pub fn default_corpus_names() -> Vec<&'static str> {
    vec![
        "c4", "c6", "c12", "d8", "d10", "d12", "s3", "s4", "a4", "c7c3", "sl23", "es27", "sec4",
    ]
}

/// Applicable pi-sets for a corpus group: every non-empty subset of the
/// prime divisors. The large case-study group runs the singleton sets only.
fn corpus_pi_sets(group: &Group, name: &str) -> Vec<PrimeSet> {
    let primes = crate::primes::prime_divisors(group.order() as u64);
    let mut sets = Vec::new();
    if name == "sec4" {
        for &p in &primes {
            sets.push(PrimeSet::new([p]).unwrap());
        }
        return sets;
    }
    let n = primes.len();
    for mask in 1..(1u32 << n) {
        let subset: Vec<u64> = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| primes[i])
            .collect();
        sets.push(PrimeSet::new(subset).unwrap());
    }
    sets
}

/// Run the property suites over the corpus. Entries are evaluated
/// concurrently; the aggregate is deterministic in corpus order.
pub fn run_corpus(
    names: &[String],
    pi_override: Option<&PrimeSet>,
    parallelism: usize,
    series_cap: usize,
    order_cap: usize,
) -> Result<SuiteReport> {
    let mut jobs: Vec<(String, Group, PrimeSet)> = Vec::new();
    for name in names {
        let group = builtins::builtin(name, order_cap)?;
        let pis = match pi_override {
            Some(pi) => vec![pi.clone()],
            None => corpus_pi_sets(&group, name),
        };
        for pi in pis {
            jobs.push((name.clone(), group.clone(), pi));
        }
    }
    let selection = SeriesSelection::Enumerate { cap: series_cap };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let entries: Vec<Result<SuiteEntry>> = pool.install(|| {
        jobs.par_iter()
            .map(|(name, group, pi)| run_property_suite(group, name, pi, &selection))
            .collect()
    });
    let mut out = Vec::new();
    for entry in entries {
        out.push(entry?);
    }
    Ok(SuiteReport::from_entries(out))
}

/// One verified claim of the case-study report.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimFlag {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl ClaimFlag {
    fn new(name: &str, pass: bool, detail: String) -> ClaimFlag {
        ClaimFlag {
            name: name.to_string(),
            pass,
            detail,
        }
    }
}

/// Report for the bundled order-1323 case study.
#[derive(Serialize)]
pub struct Section4Report {
    pub group_order: usize,
    pub class_count: usize,
    pub degree_histogram: Vec<(u64, usize)>,
    pub chi_row: usize,
    pub phi_index: usize,
    pub lift_count: usize,
    pub lift_rows: Vec<usize>,
    pub family1_rows: Vec<usize>,
    pub family2_rows: Vec<usize>,
    pub claims: Vec<ClaimFlag>,
    pub all_pass: bool,
}

/// Build the case-study group and evaluate every claim of the worked
/// example at pi = {3}.
pub fn section4_report() -> Result<Section4Report> {
    let cap = crate::group::order_cap_from_env().max(2000);
    let s4g = builtins::section4_group(cap)?;
    let pi = PrimeSet::new([3]).unwrap();
    let g = &s4g.g;
    let table = character_table(g)?;
    let mut claims: Vec<ClaimFlag> = Vec::new();

    claims.push(ClaimFlag::new(
        "group-order-1323",
        g.order() == 1323,
        format!("|G| = {}", g.order()),
    ));
    let class_count = g.conjugacy_classes().len();
    claims.push(ClaimFlag::new(
        "class-count-59",
        class_count == 59,
        format!("{class_count} classes"),
    ));
    let hist = table.degree_histogram();
    claims.push(ClaimFlag::new(
        "degree-histogram-9-38-12",
        hist == vec![(1, 9), (3, 38), (9, 12)],
        format!("{hist:?}"),
    ));

    // quotient by V is extraspecial of order 27 and exponent 3
    let (quotient, _) = g.quotient(&s4g.v)?;
    let extraspecial = quotient.order() == 27
        && quotient.exponent() == 3
        && quotient.center().order() == 3
        && quotient.derived_subgroup().order() == 3;
    claims.push(ClaimFlag::new(
        "quotient-by-v-extraspecial-27",
        extraspecial,
        format!(
            "order {} exponent {} center {}",
            quotient.order(),
            quotient.exponent(),
            quotient.center().order()
        ),
    ));

    // X = Z x V
    let zv = s4g.z.product(&s4g.v)?;
    claims.push(ClaimFlag::new(
        "x-is-z-times-v",
        zv == s4g.x && s4g.z.intersection(&s4g.v).order() == 1,
        format!("|X| = {}", s4g.x.order()),
    ));

    // orbit structure of the nontrivial characters of V
    let orbit_hist = dual_orbit_sizes(&s4g)?;
    claims.push(ClaimFlag::new(
        "v-dual-orbits-4x3-4x9",
        orbit_hist == vec![(3, 4), (9, 4)],
        format!("{orbit_hist:?}"),
    ));

    // the inflations from G/V restrict bijectively onto Ipi(G)
    let partial_table = ipi(g, &pi)?;
    let inflation_rows: Vec<usize> = irreducibles(&table)
        .iter()
        .filter(|chi| {
            s4g.v
                .members()
                .iter()
                .all(|&m| chi.value(g.class_of(m)).as_u64() == Some(chi.degree()))
        })
        .map(|chi| chi.row())
        .collect();
    let mut hit = vec![false; partial_table.members.len()];
    let mut biject = inflation_rows.len() == partial_table.members.len();
    for &row in &inflation_rows {
        let chi = Character::new(table.clone(), row);
        match partial_table.member_index(&restrict_character_to_pi(&chi, &pi)) {
            Some(idx) if !hit[idx] => hit[idx] = true,
            _ => biject = false,
        }
    }
    biject &= hit.iter().all(|&h| h);
    claims.push(ClaimFlag::new(
        "inflations-biject-onto-ipi",
        biject,
        format!(
            "{} inflations onto {} partial characters",
            inflation_rows.len(),
            partial_table.members.len()
        ),
    ));

    // fix chi: the first degree-3 character with V in its kernel
    let chi_row = *inflation_rows
        .iter()
        .find(|&&row| table.degrees()[row] == 3)
        .ok_or_else(|| Error::Internal("no degree-3 inflation".into()))?;
    let chi = Character::new(table.clone(), chi_row);
    let phi = restrict_character_to_pi(&chi, &pi);
    let phi_index = partial_table
        .member_index(&phi)
        .ok_or_else(|| Error::Internal("chosen character is not a pi-lift".into()))?;

    // the 13 lifts
    let lift_rows: Vec<usize> = irreducibles(&table)
        .iter()
        .filter(|c| restrict_character_to_pi(c, &pi).equals(&phi))
        .map(|c| c.row())
        .collect();
    claims.push(ClaimFlag::new(
        "phi-has-13-lifts",
        lift_rows.len() == 13,
        format!("{} lifts", lift_rows.len()),
    ));
    claims.push(ClaimFlag::new(
        "13-does-not-divide-group-order",
        g.order() % 13 != 0,
        format!("|G| mod 13 = {}", g.order() % 13),
    ));

    let series_n = s4g.series_n(&pi)?;
    let series_n1 = s4g.series_n1(&pi)?;
    let series_n2 = s4g.series_n2(&pi)?;

    // every lift is a chain pi-lift for {1 < V < G}
    let mut all_chain = true;
    for &row in &lift_rows {
        let c = Character::new(table.clone(), row);
        all_chain &= is_chain_pi_lift(&c, &series_n)?.holds;
    }
    claims.push(ClaimFlag::new(
        "all-lifts-are-chain-lifts-for-n",
        all_chain,
        format!("{} lifts checked", lift_rows.len()),
    ));

    // self-stabilizing pairs: (G, chi) for N, (M_iV, delta_i) for N_i
    let ssp_n = self_stabilizing_pair(&chi, &series_n)?;
    claims.push(ClaimFlag::new(
        "ssp-for-n-is-whole-group-pair",
        ssp_n.pair.subgroup.is_full() && ssp_n.pair.character == chi,
        format!(
            "subgroup order {}, character row {}",
            ssp_n.pair.subgroup.order(),
            ssp_n.pair.character.row()
        ),
    ));

    // lambda-hat: the unique constituent of chi on X, with multiplicity 3
    let ramified = restrict_constituents(&chi, &s4g.x)?;
    let lambda_hat = match &ramified.homogeneous {
        Some((3, eta)) => Some(eta.clone()),
        _ => None,
    };
    claims.push(ClaimFlag::new(
        "chi-fully-ramified-over-x",
        lambda_hat.is_some(),
        format!(
            "{} constituents",
            ramified.constituents.len()
        ),
    ));

    let ssp_n1 = self_stabilizing_pair(&chi, &series_n1)?;
    let ssp_n2 = self_stabilizing_pair(&chi, &series_n2)?;
    let delta_extends = |ssp: &SelfStabilizingPair, miv: &crate::group::Subgroup| -> Result<bool> {
        if ssp.pair.subgroup != *miv || !ssp.pair.character.is_linear() {
            return Ok(false);
        }
        // the pair character restricts to lambda-hat on X
        let Some(lh) = &lambda_hat else { return Ok(false) };
        let restricted = crate::chartab::restrict_between(&s4g.x, miv, &ssp.pair.character.cf())?;
        Ok(restricted
            .values
            .iter()
            .zip(lh.values().iter())
            .all(|(a, b)| a.equals(b)))
    };
    claims.push(ClaimFlag::new(
        "ssp-for-n1-is-m1v-extension",
        delta_extends(&ssp_n1, &s4g.m1v)?,
        format!("subgroup order {}", ssp_n1.pair.subgroup.order()),
    ));
    claims.push(ClaimFlag::new(
        "ssp-for-n2-is-m2v-extension",
        delta_extends(&ssp_n2, &s4g.m2v)?,
        format!("subgroup order {}", ssp_n2.pair.subgroup.order()),
    ));

    // derived subgroup and abelianization of M1V
    let m1v_derived = s4g.m1v.derived_subgroup();
    claims.push(ClaimFlag::new(
        "m1v-derived-subgroup-is-v2",
        m1v_derived == s4g.v2,
        format!("derived subgroup order {}", m1v_derived.order()),
    ));
    let idx7 = crate::series::pi_prime_index_of_abelianization(&s4g.m1v, &pi);
    claims.push(ClaimFlag::new(
        "m1v-abelianization-pi-prime-part-7",
        idx7 == 7,
        format!("index part {idx7}"),
    ));

    // inductive behaviour of the two pairs across the three series
    let pair1 = ssp_n1.pair.clone();
    let pair2 = ssp_n2.pair.clone();
    let inductive = |pair: &CharacterPair, series: &NormalPiSeries| -> Result<bool> {
        Ok(is_inductive_pair(pair, series)?.is_inductive())
    };
    let matrix_ok = inductive(&pair1, &series_n)?
        && inductive(&pair1, &series_n1)?
        && !inductive(&pair1, &series_n2)?
        && inductive(&pair2, &series_n)?
        && inductive(&pair2, &series_n2)?
        && !inductive(&pair2, &series_n1)?;
    claims.push(ClaimFlag::new(
        "pairs-inductive-for-n-and-own-series-only",
        matrix_ok,
        "pair i inductive for N and N_i, not for the other".to_string(),
    ));
    claims.push(ClaimFlag::new(
        "inductive-pairs-not-self-stabilizing-for-n",
        pair1.subgroup.order() != ssp_n.pair.subgroup.order()
            && pair2.subgroup.order() != ssp_n.pair.subgroup.order(),
        format!(
            "pair subgroups of order {} vs {}",
            pair1.subgroup.order(),
            ssp_n.pair.subgroup.order()
        ),
    ));

    // the two families of induced lifts
    let report1 = lift_count_bound(phi_index, &series_n1)?;
    let report2 = lift_count_bound(phi_index, &series_n2)?;
    claims.push(ClaimFlag::new(
        "bound-reports-clean",
        report1.all_good() && report2.all_good(),
        format!(
            "bounds {} and {}, counts {} and {}",
            report1.bound, report2.bound, report1.lift_count, report2.lift_count
        ),
    ));
    claims.push(ClaimFlag::new(
        "family-sizes-7-7",
        report1.image_rows.len() == 7 && report2.image_rows.len() == 7,
        format!(
            "{} and {}",
            report1.image_rows.len(),
            report2.image_rows.len()
        ),
    ));
    let family1: std::collections::BTreeSet<usize> = report1.image_rows.iter().copied().collect();
    let family2: std::collections::BTreeSet<usize> = report2.image_rows.iter().copied().collect();
    let meet: Vec<usize> = family1.intersection(&family2).copied().collect();
    claims.push(ClaimFlag::new(
        "families-meet-exactly-in-chi",
        meet == vec![chi_row],
        format!("intersection {meet:?}"),
    ));
    let union: std::collections::BTreeSet<usize> = family1.union(&family2).copied().collect();
    let lifts_sorted: std::collections::BTreeSet<usize> = lift_rows.iter().copied().collect();
    claims.push(ClaimFlag::new(
        "families-cover-all-13-lifts",
        union == lifts_sorted && union.len() == 13,
        format!("union size {}", union.len()),
    ));

    // members of one family other than chi fail the other series
    let mut cross_ok = true;
    for (&row, other_series) in family1
        .iter()
        .map(|r| (r, &series_n2))
        .chain(family2.iter().map(|r| (r, &series_n1)))
    {
        if row == chi_row {
            continue;
        }
        let c = Character::new(table.clone(), row);
        if is_chain_pi_lift(&c, other_series)?.holds {
            cross_ok = false;
        }
    }
    claims.push(ClaimFlag::new(
        "cross-family-members-fail-other-series",
        cross_ok,
        "12 non-canonical lifts checked against the opposite series".to_string(),
    ));

    let all_pass = claims.iter().all(|c| c.pass);
    Ok(Section4Report {
        group_order: g.order(),
        class_count,
        degree_histogram: hist,
        chi_row,
        phi_index,
        lift_count: lift_rows.len(),
        lift_rows,
        family1_rows: report1.image_rows,
        family2_rows: report2.image_rows,
        claims,
        all_pass,
    })
}

/// Orbit size histogram of the nontrivial irreducible characters of V under
/// conjugation by the whole group, as (size, count) ascending.
fn dual_orbit_sizes(s4g: &Section4Group) -> Result<Vec<(u64, usize)>> {
    let v_table = s4g.v.table()?;
    let g = &s4g.g;
    let gen_ids: Vec<usize> = g
        .generators()
        .iter()
        .map(|p| g.element_id(p).unwrap())
        .collect();
    let n = v_table.len();
    let mut orbit_of = vec![usize::MAX; n];
    let mut sizes: Vec<u64> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let oid = sizes.len();
        let mut frontier = vec![start];
        orbit_of[start] = oid;
        let mut size = 1u64;
        while let Some(row) = frontier.pop() {
            let chi = Character::new(v_table.clone(), row);
            for &gid in &gen_ids {
                let conj = conjugation_image_row(&s4g.v, &chi, gid)?;
                if orbit_of[conj] == usize::MAX {
                    orbit_of[conj] = oid;
                    size += 1;
                    frontier.push(conj);
                }
            }
        }
        sizes.push(size);
    }
    // drop the trivial character's orbit (size 1, row 0)
    let mut hist: Vec<(u64, usize)> = Vec::new();
    for (oid, &s) in sizes.iter().enumerate() {
        if oid == orbit_of[0] {
            continue;
        }
        match hist.iter_mut().find(|(sz, _)| *sz == s) {
            Some((_, c)) => *c += 1,
            None => hist.push((s, 1)),
        }
    }
    hist.sort();
    Ok(hist)
}

fn conjugation_image_row(
    sub: &crate::group::Subgroup,
    chi: &Character,
    g: usize,
) -> Result<usize> {
    let conj = crate::towers::conjugate_on_subgroup(chi, sub, g)?;
    Ok(find_row(&conj, chi.table())?
        .ok_or_else(|| Error::Internal("conjugate is not a table row".into()))?
        .row())
}
