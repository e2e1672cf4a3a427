//! Command-line front end.
//!
//! Exit status: 0 on success with no anomalies, 1 when anomalies or engine
//! failures occur, 2 on usage errors.

use crate::builtins;
use crate::chartab::{character_table, CharTable, Character};
use crate::cyclotomic::Cyc;
use crate::group::{order_cap_from_env, Group};
use crate::lift_analysis::{check_lift_equivalence, is_inductive_pair, lift_count_bound, InductiveOutcome};
use crate::pi_theory::{ipi, PartialTable};
use crate::primes::PrimeSet;
use crate::series::{enumerate_normal_pi_series, NormalPiSeries};
use crate::towers::{self_stabilizing_pair, CharacterPair};
use crate::verification::{run_corpus, section4_report};
use crate::{Error, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "pilift", version, about = "Exact character theory for small pi-separable groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GroupArg {
    /// Group source: "builtin:NAME" (s3, s4, a4, cN, dN, c7c3, sl23, es27,
    /// sec4) or a path to a .perm file
    #[arg(long)]
    group: String,
    /// Override the group order cap (default 5000, or PILIFT_ORDER_CAP)
    #[arg(long)]
    order_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact irreducible character table
    Chartab {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Print the irreducible pi-partial characters and the decomposition matrix
    Ipi {
        #[command(flatten)]
        group: GroupArg,
        /// Comma-separated primes, e.g. "3" or "2,3"
        #[arg(long)]
        pi: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// List the lifts of a chosen irreducible partial character
    Lifts {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        pi: String,
        /// Index into the partial character table
        #[arg(long)]
        phi: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Enumerate the normal pi-series
    Series {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        pi: String,
        /// Enumeration cap
        #[arg(long, default_value_t = crate::verification::DEFAULT_SERIES_CAP)]
        cap: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Self-stabilizing pair of a character with respect to one series
    Pair {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        pi: String,
        /// Series selector: an index into the enumeration, or "orders:1,49,..."
        #[arg(long)]
        series: String,
        /// Character row index
        #[arg(long)]
        chi: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Test whether a pair (normal subgroup, character) is inductive
    Inductive {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        pi: String,
        #[arg(long)]
        series: String,
        /// Index into the normal subgroup list
        #[arg(long)]
        subgroup: usize,
        /// Row index in the subgroup's character table
        #[arg(long = "char")]
        char_row: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Three-way equivalence report for one character and series
    Main1 {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        pi: String,
        #[arg(long)]
        series: String,
        #[arg(long)]
        chi: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Injection family and lift-count lower bound for one partial character
    Main2 {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        pi: String,
        #[arg(long)]
        series: String,
        #[arg(long)]
        phi: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the verification suites over the corpus or one group
    Verify {
        /// Restrict to one group (otherwise the whole builtin corpus runs)
        #[arg(long)]
        group: Option<String>,
        /// Restrict to one pi-set
        #[arg(long)]
        pi: Option<String>,
        /// Comma-separated corpus names (defaults to the builtin corpus)
        #[arg(long)]
        corpus: Option<String>,
        /// Worker threads (1 = sequential)
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Cap on enumerated series per group
        #[arg(long, default_value_t = crate::verification::DEFAULT_SERIES_CAP)]
        series_cap: usize,
        #[arg(long)]
        order_cap: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Report on the bundled order-1323 case study
    Section4 {
        #[command(flatten)]
        out: OutputArgs,
    },
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArg(_)
                | Error::BadPerm(_)
                | Error::Io(_)
                | Error::OrderCap { .. }
                | Error::NotPiSeparable(_) => 2,
                _ => 1,
            }
        }
    }
}

fn load_group(arg: &GroupArg) -> Result<Group> {
    let cap = arg.order_cap.unwrap_or_else(order_cap_from_env);
    if let Some(name) = arg.group.strip_prefix("builtin:") {
        builtins::builtin(name, cap)
    } else {
        builtins::group_from_perm_file(std::path::Path::new(&arg.group), cap)
    }
}

fn emit(out: &OutputArgs, text: String) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_pi(text: &str) -> Result<PrimeSet> {
    PrimeSet::parse(text)
}

/// Resolve a series selector against the enumerated list.
fn resolve_series(group: &Group, pi: &PrimeSet, selector: &str) -> Result<NormalPiSeries> {
    let (all, _) = enumerate_normal_pi_series(group, pi, crate::verification::DEFAULT_SERIES_CAP)?;
    if let Some(orders_text) = selector.strip_prefix("orders:") {
        let want: Vec<usize> = orders_text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::InvalidArg(format!("bad order '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        let matches: Vec<NormalPiSeries> = all
            .into_iter()
            .filter(|s| s.orders() == want)
            .collect();
        match matches.len() {
            0 => Err(Error::InvalidArg(format!("no series with orders {want:?}"))),
            1 => Ok(matches.into_iter().next().unwrap()),
            n => Err(Error::InvalidArg(format!(
                "orders {want:?} match {n} series; use an index selector"
            ))),
        }
    } else {
        let idx: usize = selector
            .parse()
            .map_err(|_| Error::InvalidArg(format!("bad series selector '{selector}'")))?;
        all.into_iter()
            .nth(idx)
            .ok_or_else(|| Error::InvalidArg(format!("no series with index {idx}")))
    }
}

// ---- JSON shapes --------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct TableJson {
    pub group: GroupJson,
    pub exponent: u64,
    pub classes: Vec<ClassJson>,
    pub rows: Vec<RowJson>,
}

#[derive(Serialize, Deserialize)]
pub struct GroupJson {
    pub name: Option<String>,
    pub degree: usize,
    pub order: usize,
}

#[derive(Serialize, Deserialize)]
pub struct ClassJson {
    pub rep: String,
    pub rep_order: u64,
    pub size: usize,
}

#[derive(Serialize, Deserialize)]
pub struct RowJson {
    pub degree: u64,
    pub values: Vec<Cyc>,
}

pub fn table_to_json(table: &Arc<CharTable>) -> TableJson {
    let group = table.group();
    let classes = group.conjugacy_classes();
    TableJson {
        group: GroupJson {
            name: group.name().map(|s| s.to_string()),
            degree: group.degree(),
            order: group.order(),
        },
        exponent: table.exponent(),
        classes: classes
            .classes
            .iter()
            .map(|c| ClassJson {
                rep: group.perm(c.rep).to_string(),
                rep_order: c.rep_order,
                size: c.size(),
            })
            .collect(),
        rows: (0..table.len())
            .map(|row| RowJson {
                degree: table.degrees()[row],
                values: table.row_values(row).to_vec(),
            })
            .collect(),
    }
}

fn table_to_text(table: &Arc<CharTable>) -> String {
    let group = table.group();
    let classes = group.conjugacy_classes();
    let mut out = format!(
        "group {} (degree {}, order {}, exponent {})\n",
        group.name().unwrap_or("?"),
        group.degree(),
        group.order(),
        table.exponent()
    );
    out.push_str("classes:\n");
    for (i, c) in classes.classes.iter().enumerate() {
        out.push_str(&format!(
            "  [{i}] rep {} order {} size {}\n",
            group.perm(c.rep),
            c.rep_order,
            c.size()
        ));
    }
    out.push_str("characters:\n");
    for row in 0..table.len() {
        let values: Vec<String> = table.row_values(row).iter().map(|v| v.to_string()).collect();
        out.push_str(&format!(
            "  chi[{row}] degree {}: {}\n",
            table.degrees()[row],
            values.join(" | ")
        ));
    }
    out
}

#[derive(Serialize)]
struct IpiJson {
    pi: Vec<u64>,
    pi_class_reps: Vec<String>,
    members: Vec<RowJson>,
    decomposition: Vec<Vec<u64>>,
}

fn ipi_to_json(table: &PartialTable) -> IpiJson {
    let group = &table.group;
    IpiJson {
        pi: table.pi.iter().collect(),
        pi_class_reps: table
            .pi_classes
            .class_ids
            .iter()
            .map(|&c| group.perm(group.conjugacy_classes().classes[c].rep).to_string())
            .collect(),
        members: table
            .members
            .iter()
            .map(|m| RowJson {
                degree: m.degree(),
                values: m.values.to_vec(),
            })
            .collect(),
        decomposition: table.decomposition.clone(),
    }
}

fn ipi_to_text(table: &PartialTable) -> String {
    let mut out = format!(
        "Ipi for pi = {} ({} members over {} pi-classes)\n",
        table.pi,
        table.members.len(),
        table.pi_classes.class_ids.len()
    );
    for (i, m) in table.members.iter().enumerate() {
        let values: Vec<String> = m.values.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("  phi[{i}] degree {}: {}\n", m.degree(), values.join(" | ")));
    }
    out.push_str("decomposition matrix (rows of Irr over the members):\n");
    for (row, coords) in table.decomposition.iter().enumerate() {
        out.push_str(&format!("  chi[{row}]: {coords:?}\n"));
    }
    out
}

#[derive(Serialize)]
struct SeriesJson {
    index: usize,
    orders: Vec<usize>,
    kinds: Vec<crate::series::FactorKind>,
    members: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct PairJson {
    chi_row: usize,
    subgroup_order: usize,
    subgroup_members: Vec<usize>,
    character_row: usize,
    character_degree: u64,
    levels: Vec<LevelJson>,
    factored: bool,
    tower_count: usize,
}

#[derive(Serialize)]
struct LevelJson {
    multiplicity: u64,
    tau_row: usize,
    tower_row: usize,
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Chartab { group, out } => {
            let g = load_group(&group)?;
            let table = character_table(&g)?;
            let text = match out.format {
                Format::Json => serde_json::to_string_pretty(&table_to_json(&table))? + "\n",
                Format::Text => table_to_text(&table),
            };
            emit(&out, text)?;
            Ok(0)
        }
        Command::Ipi { group, pi, out } => {
            let g = load_group(&group)?;
            let pi = parse_pi(&pi)?;
            let table = ipi(&g, &pi)?;
            let text = match out.format {
                Format::Json => serde_json::to_string_pretty(&ipi_to_json(&table))? + "\n",
                Format::Text => ipi_to_text(&table),
            };
            emit(&out, text)?;
            Ok(0)
        }
        Command::Lifts { group, pi, phi, out } => {
            let g = load_group(&group)?;
            let pi = parse_pi(&pi)?;
            let table = ipi(&g, &pi)?;
            if phi >= table.members.len() {
                return Err(Error::InvalidArg(format!(
                    "phi index {phi} out of range (have {})",
                    table.members.len()
                )));
            }
            let lifts = table.lifts_of(phi)?;
            let rows: Vec<usize> = lifts.iter().map(|c| c.row()).collect();
            let text = match out.format {
                Format::Json => {
                    serde_json::to_string_pretty(&serde_json::json!({
                        "phi_index": phi,
                        "lift_rows": rows,
                        "count": rows.len(),
                    }))? + "\n"
                }
                Format::Text => {
                    let mut t = format!("{} lifts of phi[{phi}]\n", rows.len());
                    for c in &lifts {
                        t.push_str(&format!("  chi[{}] degree {}\n", c.row(), c.degree()));
                    }
                    t
                }
            };
            emit(&out, text)?;
            Ok(0)
        }
        Command::Series { group, pi, cap, out } => {
            let g = load_group(&group)?;
            let pi = parse_pi(&pi)?;
            let (list, truncated) = enumerate_normal_pi_series(&g, &pi, cap)?;
            let text = match out.format {
                Format::Json => {
                    let items: Vec<SeriesJson> = list
                        .iter()
                        .enumerate()
                        .map(|(index, s)| SeriesJson {
                            index,
                            orders: s.orders(),
                            kinds: s.kinds.clone(),
                            members: s.chain.iter().map(|m| m.members().to_vec()).collect(),
                        })
                        .collect();
                    serde_json::to_string_pretty(&serde_json::json!({
                        "series": items,
                        "truncated": truncated,
                    }))? + "\n"
                }
                Format::Text => {
                    let mut t = format!("{} normal pi-series for pi = {pi}", list.len());
                    if truncated {
                        t.push_str(" (truncated)");
                    }
                    t.push('\n');
                    for (i, s) in list.iter().enumerate() {
                        t.push_str(&format!("  [{i}] orders {:?} kinds {:?}\n", s.orders(), s.kinds));
                    }
                    t
                }
            };
            emit(&out, text)?;
            Ok(0)
        }
        Command::Pair { group, pi, series, chi, out } => {
            let g = load_group(&group)?;
            let pi = parse_pi(&pi)?;
            let series = resolve_series(&g, &pi, &series)?;
            let table = character_table(&g)?;
            if chi >= table.len() {
                return Err(Error::InvalidArg(format!("chi row {chi} out of range")));
            }
            let character = Character::new(table.clone(), chi);
            let ssp = self_stabilizing_pair(&character, &series)?;
            let json = PairJson {
                chi_row: chi,
                subgroup_order: ssp.pair.subgroup.order(),
                subgroup_members: ssp.pair.subgroup.members().to_vec(),
                character_row: ssp.pair.character.row(),
                character_degree: ssp.pair.character.degree(),
                levels: ssp
                    .levels
                    .iter()
                    .zip(ssp.tower.levels.iter())
                    .map(|(l, t)| LevelJson {
                        multiplicity: l.multiplicity,
                        tau_row: l.tau_i.row(),
                        tower_row: t.row(),
                    })
                    .collect(),
                factored: ssp.factorization.is_some(),
                tower_count: ssp.tower_outcomes.len(),
            };
            let text = match out.format {
                Format::Json => serde_json::to_string_pretty(&json)? + "\n",
                Format::Text => format!(
                    "self-stabilizing pair of chi[{chi}]: subgroup of order {} with character row {} (degree {}), factored: {}\n",
                    json.subgroup_order, json.character_row, json.character_degree, json.factored
                ),
            };
            emit(&out, text)?;
            Ok(0)
        }
        Command::Inductive { group, pi, series, subgroup, char_row, out } => {
            let g = load_group(&group)?;
            let pi = parse_pi(&pi)?;
            let series = resolve_series(&g, &pi, &series)?;
            let normals = g.normal_subgroups();
            let sub = normals
                .get(subgroup)
                .ok_or_else(|| Error::InvalidArg(format!("no normal subgroup {subgroup} (have {})", normals.len())))?
                .clone();
            let table = sub.table()?;
            if char_row >= table.len() {
                return Err(Error::InvalidArg(format!("char row {char_row} out of range")));
            }
            let pair = CharacterPair {
                subgroup: sub,
                character: Character::new(table, char_row),
            };
            let outcome = is_inductive_pair(&pair, &series)?;
            let (inductive, failing) = match &outcome {
                InductiveOutcome::Witness(_) => (true, None),
                InductiveOutcome::FailsAt(level, why) => (false, Some((*level, *why))),
            };
            let text = match out.format {
                Format::Json => {
                    serde_json::to_string_pretty(&serde_json::json!({
                        "subgroup_index": subgroup,
                        "subgroup_order": pair.subgroup.order(),
                        "char_row": char_row,
                        "inductive": inductive,
                        "failing_level": failing.map(|(l, _)| l),
                        "failure": failing.map(|(_, w)| format!("{w:?}")),
                    }))? + "\n"
                }
                Format::Text => match failing {
                    None => format!("pair is inductive for series {:?}\n", series.orders()),
                    Some((l, w)) => format!("pair is NOT inductive: fails at level {l} ({w:?})\n"),
                },
            };
            emit(&out, text)?;
            Ok(0)
        }
        Command::Main1 { group, pi, series, chi, out } => {
            let g = load_group(&group)?;
            let pi = parse_pi(&pi)?;
            let series = resolve_series(&g, &pi, &series)?;
            let table = character_table(&g)?;
            if chi >= table.len() {
                return Err(Error::InvalidArg(format!("chi row {chi} out of range")));
            }
            let character = Character::new(table.clone(), chi);
            let (report, _) = check_lift_equivalence(&character, &series)?;
            let text = match out.format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Text => format!(
                    "chi[{chi}]: chain lift {}, pair inductive {}, special factor inductive+linear {} => verdict {}\n",
                    report.chain_lift,
                    report.pair_inductive,
                    report.special_part_inductive_and_linear,
                    report.verdict
                ),
            };
            emit(&out, text)?;
            Ok(if report.verdict { 0 } else { 1 })
        }
        Command::Main2 { group, pi, series, phi, out } => {
            let g = load_group(&group)?;
            let pi = parse_pi(&pi)?;
            let series = resolve_series(&g, &pi, &series)?;
            let report = lift_count_bound(phi, &series)?;
            let ok = report.all_good();
            let text = match out.format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Text => format!(
                    "phi[{phi}]: bound {} via subgroup of order {}, images {:?}, chain-lift count {} => {}\n",
                    report.bound,
                    report.pair_subgroup_order,
                    report.image_rows,
                    report.lift_count,
                    if ok { "ok" } else { "ANOMALY" }
                ),
            };
            emit(&out, text)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Verify { group, pi, corpus, parallelism, series_cap, order_cap, out } => {
            let cap = order_cap.unwrap_or_else(order_cap_from_env);
            let pi_set = pi.map(|t| parse_pi(&t)).transpose()?;
            let names: Vec<String> = match (&group, &corpus) {
                (Some(g), _) => vec![g.strip_prefix("builtin:").unwrap_or(g).to_string()],
                (None, Some(list)) => list.split(',').map(|s| s.trim().to_string()).collect(),
                (None, None) => crate::verification::default_corpus_names()
                    .into_iter()
                    .map(|s| s.to_string())
                    .collect(),
            };
            let report = run_corpus(&names, pi_set.as_ref(), parallelism, series_cap, cap)?;
            let text = match out.format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Text => {
                    let mut t = String::new();
                    for entry in &report.entries {
                        let anomalies = entry.anomalies();
                        t.push_str(&format!(
                            "{} (order {}) pi={:?}: {} series, {} checks, {} anomalies [{:?}]\n",
                            entry.group,
                            entry.order,
                            entry.pi,
                            entry.series_orders.len(),
                            entry.total_checked(),
                            anomalies.len(),
                            entry.elapsed,
                        ));
                        for a in anomalies.iter().take(10) {
                            t.push_str(&format!("  ANOMALY {a}\n"));
                        }
                    }
                    t.push_str(&format!(
                        "total: {} checks, {} anomalies\n",
                        report.total_checked, report.total_anomalies
                    ));
                    t
                }
            };
            emit(&out, text)?;
            Ok(if report.total_anomalies == 0 { 0 } else { 1 })
        }
        Command::Section4 { out } => {
            let report = section4_report()?;
            let text = match out.format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Text => {
                    let mut t = format!(
                        "order {} group, {} classes, degrees {:?}\n",
                        report.group_order, report.class_count, report.degree_histogram
                    );
                    t.push_str(&format!(
                        "chi row {}, phi index {}, lifts {:?}\n",
                        report.chi_row, report.phi_index, report.lift_rows
                    ));
                    for claim in &report.claims {
                        t.push_str(&format!(
                            "  {} {} ({})\n",
                            if claim.pass { "PASS" } else { "FAIL" },
                            claim.name,
                            claim.detail
                        ));
                    }
                    t.push_str(&format!("all claims pass: {}\n", report.all_pass));
                    t
                }
            };
            emit(&out, text)?;
            Ok(if report.all_pass { 0 } else { 1 })
        }
    }
}
