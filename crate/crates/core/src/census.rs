//! The census pipeline: generalised wreath seeding, universal-group
//! quotient enumeration, coset-digraph construction, validity filtering,
//! isomorphism dedup, record computation, and derivation of the underlying
//! 4-valent families.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::altinv::{
    alter_invariants, alternating_cycles, consistent_cycles, AttachmentType,
};
use crate::canon::{automorphism_group, canonical_form, certificate_bytes};
use crate::classify::{
    cayley_type, classify_graph, max_s_arc_transitivity, maximal_hat_stab_orders,
    verify_two_atd_with_group, CayleyType, GraphClass,
};
use crate::constructions::{coset_digraph, gw_catalogue, CosetSpec, GwParams};
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::fp::{
    normal_quotients_of_index, quotient_search_in_group, universal_catalogue, FpPresentation,
    QuotientSearchOptions,
};
use crate::perm::{core_info, overgroups_up_to, Permutation, PermutationGroup};

/// Configuration of a census run.
#[derive(Clone, Debug)]
pub struct CensusConfig {
    /// Largest digraph order to enumerate.
    pub max_order: u64,
    /// s-arc-transitivity levels of the quotient search; `None` selects
    /// `1..=max(4, t)` where t is the largest integer with
    /// `max_order > t * 2^(t+2)`.
    pub s_range: Option<Vec<usize>>,
    /// Cap on the quotient index per presentation; the run aborts rather
    /// than silently truncating when `2^s * max_order` exceeds it.
    pub index_cap: u64,
    /// Node budget per (presentation, index) search cell.
    pub node_budget: u64,
    /// Seed the output with the generalised wreath family.
    pub include_gw: bool,
    /// Skip the quotient search entirely.
    pub gw_only: bool,
    /// Orders above this use closed-form records for wreath-family entries
    /// and omit certificates.
    pub detail_limit: u64,
    /// Worker threads for the cell-parallel quotient search (0 = default).
    pub jobs: usize,
}

impl CensusConfig {
    pub fn new(max_order: u64) -> CensusConfig {
        CensusConfig {
            max_order,
            s_range: None,
            index_cap: 512,
            node_budget: 1_000_000_000,
            include_gw: true,
            gw_only: false,
            detail_limit: 512,
            jobs: 0,
        }
    }

    /// Largest integer t with `max_order > t * 2^(t+2)`.
    pub fn t_bound(max_order: u64) -> usize {
        let mut t = 0u64;
        while max_order > (t + 1) * (1 << (t + 3)) {
            t += 1;
        }
        t as usize
    }

    pub fn effective_s_range(&self) -> Vec<usize> {
        match &self.s_range {
            Some(r) => r.clone(),
            None => (1..=Self::t_bound(self.max_order).max(4)).collect(),
        }
    }
}

/// Where an entry came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    GeneralisedWreath { n: u32, r: u32 },
    Quotient { type_name: String, index: usize },
    Catalog { group_name: String },
}

/// The per-digraph invariant bundle backing one row of the digraph table.
#[derive(Clone, Debug)]
pub struct AtdRecord {
    pub order: u64,
    pub self_opposite: bool,
    pub underlying_arc_transitive: bool,
    pub s_level: usize,
    pub stab_order: Option<u128>,
    pub stab_abelian: bool,
    pub solvable: bool,
    /// `Some(0)` means no arc-transitive overgroup; `None` renders as "?".
    pub index_to_at_overgroup: Option<u128>,
    pub index_in_graph_aut: Option<u128>,
    pub radius: usize,
    pub attachment: usize,
    pub attachment_type: AttachmentType,
    pub alt_cycle_count: usize,
    pub alter_exponent: usize,
    pub alter_perimeter: usize,
    pub alter_sequence: Vec<usize>,
    pub is_gw: bool,
}

/// One census digraph with its name, provenance and record.
#[derive(Clone, Debug)]
pub struct AtdEntry {
    pub order: u64,
    pub serial: usize,
    pub name: String,
    pub digraph: Option<Digraph>,
    pub certificate: Option<Vec<u8>>,
    pub provenance: Provenance,
    pub record: Option<AtdRecord>,
    pub opposite_name: String,
    pub underlying_name: String,
}

/// Diagnostic outcome of the 2-valent arc-transitive asymmetric check.
#[derive(Clone, Copy, Debug)]
pub struct TwoAtdCheck {
    pub connected: bool,
    pub asymmetric: bool,
    pub two_valent: bool,
    pub arc_transitive: bool,
}

impl TwoAtdCheck {
    pub fn is_two_atd(&self) -> bool {
        self.connected && self.asymmetric && self.two_valent && self.arc_transitive
    }
}

pub fn verify_two_atd(d: &Digraph) -> Result<TwoAtdCheck> {
    let connected = d.is_connected();
    let asymmetric = d.is_asymmetric();
    let two_valent = d.is_regular_of_valence(2);
    let arc_transitive = if connected && two_valent {
        let aut = automorphism_group(d)?;
        verify_two_atd_with_group(d, &aut).is_ok()
    } else {
        false
    };
    Ok(TwoAtdCheck {
        connected,
        asymmetric,
        two_valent,
        arc_transitive,
    })
}

/// Status report of a census run.
#[derive(Clone, Debug, Default)]
pub struct CensusReport {
    pub cells: Vec<String>,
    pub warnings: Vec<String>,
    /// The run enumerated every required cell, so the output is complete
    /// for all orders up to the configured maximum (relative to a catalog
    /// when one was used).
    pub complete: bool,
}

pub struct CensusOutcome {
    pub entries: Vec<AtdEntry>,
    pub report: CensusReport,
}

const OVERGROUP_CAP: u64 = 4096;
const STAB_ELEMENT_CAP: u64 = 1 << 22;
const CAYLEY_BUDGET: u64 = 1_000_000;

/// Runs the census: wreath-family seeding plus, for every level `s` and
/// every reduced-class presentation, all normal quotients of index up to
/// `2^s * max_order`, filtered through the subgroup guards, realised as
/// coset digraphs, deduplicated by canonical form, and measured.
pub fn run_census(cfg: &CensusConfig) -> Result<CensusOutcome> {
    let mut report = CensusReport::default();
    if cfg.max_order >= 8100 {
        report.warnings.push(
            "orders of 8100 and above include an exceptional digraph that this \
             pipeline does not construct; the output is incomplete there"
                .to_string(),
        );
    }

    let mut raw: Vec<(Provenance, Digraph)> = Vec::new();

    if cfg.include_gw || cfg.gw_only {
        for (params, digraph) in gw_catalogue(cfg.max_order.max(6))? {
            if params.vertex_count() > cfg.max_order {
                continue;
            }
            raw.push((
                Provenance::GeneralisedWreath {
                    n: params.n,
                    r: params.r,
                },
                match digraph {
                    Some(d) => d,
                    None => {
                        return Err(Error::Census(
                            "wreath family member too large to materialise".into(),
                        ))
                    }
                },
            ));
        }
        report
            .cells
            .push(format!("wreath family seeded up to order {}", cfg.max_order));
    }

    if !cfg.gw_only {
        if cfg.max_order > cfg.detail_limit {
            return Err(Error::Census(format!(
                "full enumeration needs max_order <= detail_limit ({} > {})",
                cfg.max_order, cfg.detail_limit
            )));
        }
        let quotient_digraphs = enumerate_quotient_digraphs(cfg, &mut report)?;
        raw.extend(quotient_digraphs);
    } else {
        report.cells.push("quotient search skipped (wreath-only run)".into());
    }

    report.complete = !cfg.gw_only && cfg.max_order < 8100 || cfg.gw_only;
    assemble_entries(cfg, raw, report)
}

/// The (s, presentation, index) work grid, run cell-parallel.
fn enumerate_quotient_digraphs(
    cfg: &CensusConfig,
    report: &mut CensusReport,
) -> Result<Vec<(Provenance, Digraph)>> {
    let s_range = cfg.effective_s_range();
    let max_s = *s_range.iter().max().unwrap_or(&1);
    if max_s > 5 {
        return Err(Error::Census(format!(
            "quotient search supports s <= 5; requested {max_s}"
        )));
    }
    let catalogue = universal_catalogue(max_s)?;

    struct Cell {
        s: usize,
        type_name: String,
        presentation: FpPresentation,
        index: usize,
    }
    let mut cells = Vec::new();
    for &s in &s_range {
        let bound = (1u64 << s) * cfg.max_order;
        if bound > cfg.index_cap {
            return Err(Error::Census(format!(
                "index cap {} is below the 2^s*m bound {} needed at s={}",
                cfg.index_cap, bound, s
            )));
        }
        for (t, p) in catalogue.iter().filter(|(t, _)| t.s == s) {
            // Valid digraphs force the quotient order to be a multiple of
            // the stabiliser order 2^s.
            for v in 1..=cfg.max_order as usize {
                cells.push(Cell {
                    s,
                    type_name: t.name.clone().unwrap_or_default(),
                    presentation: p.clone(),
                    index: (1usize << s) * v,
                });
            }
        }
    }

    type CellQuotients = Vec<(String, usize, Vec<Permutation>)>;
    let run_cell = |cell: &Cell| -> Result<CellQuotients> {
        let opts = QuotientSearchOptions {
            node_budget: cfg.node_budget,
            shunt: Some((cell.s, (cell.index >> cell.s) as u64)),
            nontrivial_generators: (0..cell.s).collect(),
        };
        let quotients = normal_quotients_of_index(&cell.presentation, cell.index, &opts)?;
        Ok(quotients
            .into_iter()
            .map(|q| (cell.type_name.clone(), cell.index, q.images))
            .collect())
    };

    let results: Vec<Result<CellQuotients>> = if cfg.jobs == 1 {
        cells.iter().map(run_cell).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Census(format!("thread pool: {e}")))?;
        pool.install(|| cells.par_iter().map(run_cell).collect())
    };

    let mut out = Vec::new();
    for (cell, result) in cells.iter().zip(results) {
        let quotients = result?;
        report.cells.push(format!(
            "{} index {}: {} quotients, complete",
            cell.type_name,
            cell.index,
            quotients.len()
        ));
        for (type_name, index, images) in quotients {
            if let Some(d) = quotient_to_digraph(cell.s, index, &images)? {
                out.push((Provenance::Quotient { type_name, index }, d));
            }
        }
    }
    Ok(out)
}

/// Applies the subgroup guards to one quotient and builds its coset
/// digraph: the point-stabiliser image must have full order `2^s`, be
/// core-free, and the shunt's inverse must avoid its double coset.
fn quotient_to_digraph(
    s: usize,
    index: usize,
    images: &[Permutation],
) -> Result<Option<Digraph>> {
    let group = PermutationGroup::from_generators(index, images.to_vec())?;
    let subgroup =
        PermutationGroup::from_generators(index, images[..s].to_vec())?;
    if subgroup.order()? != 1u128 << s {
        return Ok(None);
    }
    let (_, core_free) = core_info(&group, &subgroup, index as u64 + 1)?;
    if !core_free {
        return Ok(None);
    }
    let shunt = images[s].clone();
    let shunt_inv = shunt.inverse();
    let h_elements = subgroup.elements_capped(64)?;
    for h1 in &h_elements {
        let h2 = shunt_inv.then(&h1.inverse()).then(&shunt_inv);
        if subgroup.contains(&h2) {
            return Ok(None);
        }
    }
    let spec = CosetSpec {
        group,
        subgroup_gens: images[..s].to_vec(),
        shunt,
    };
    let (digraph, _) = coset_digraph(&spec, index as u64 + 1)?;
    Ok(Some(digraph))
}

/// Deduplicates raw digraphs (adding each with its opposite), assigns
/// serial names, resolves opposite names, and computes records.
fn assemble_entries(
    cfg: &CensusConfig,
    raw: Vec<(Provenance, Digraph)>,
    report: CensusReport,
) -> Result<CensusOutcome> {
    struct Pending {
        provenance: Provenance,
        digraph: Digraph,
        order: u64,
        certificate: Option<Vec<u8>>,
    }

    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut pending: Vec<Pending> = Vec::new();

    for (provenance, digraph) in raw {
        let order = digraph.order() as u64;
        let detailed = order <= cfg.detail_limit;
        let gw = matches!(provenance, Provenance::GeneralisedWreath { .. });
        if !detailed && !gw {
            return Err(Error::Census(
                "non-wreath digraph above the detail limit".into(),
            ));
        }
        if !detailed {
            // Wreath-family members are pairwise non-isomorphic and
            // self-opposite; no dedup is needed above the detail limit.
            pending.push(Pending {
                provenance,
                digraph,
                order,
                certificate: None,
            });
            continue;
        }
        let verdict = verify_two_atd(&digraph)?;
        if !verdict.is_two_atd() {
            return Err(Error::Census(format!(
                "constructed digraph fails the validity check: {verdict:?}"
            )));
        }
        for candidate in [digraph.clone(), digraph.opposite()] {
            let cert = canonical_form(&candidate)?;
            if seen.contains_key(&cert.bytes) {
                continue;
            }
            // Store in canonical labeling so equality of digraphs mirrors
            // equality of certificates downstream.
            let canonical = candidate.relabel(cert.relabeling.images())?;
            seen.insert(cert.bytes.clone(), pending.len());
            pending.push(Pending {
                provenance: provenance.clone(),
                digraph: canonical,
                order,
                certificate: Some(cert.bytes),
            });
        }
    }

    // Deterministic global order: by order, then certificate bytes, with
    // parameter-only entries (certificate-free) after, by provenance.
    pending.sort_by(|a, b| {
        (a.order, &a.certificate, gw_key(&a.provenance))
            .cmp(&(b.order, &b.certificate, gw_key(&b.provenance)))
    });

    // Serials within each order.
    let mut serial_counter: HashMap<u64, usize> = HashMap::new();
    let mut entries: Vec<AtdEntry> = Vec::new();
    for p in &pending {
        let serial = serial_counter.entry(p.order).or_insert(0);
        *serial += 1;
        entries.push(AtdEntry {
            order: p.order,
            serial: *serial,
            name: format!("ATD[{};{}]", p.order, *serial),
            digraph: Some(p.digraph.clone()),
            certificate: p.certificate.clone(),
            provenance: p.provenance.clone(),
            record: None,
            opposite_name: String::new(),
            underlying_name: String::new(),
        });
    }

    // Records, in parallel.
    let gw_cert_index = gw_underlying_certificates(cfg.max_order.min(cfg.detail_limit))?;
    let records: Vec<Result<AtdRecord>> = entries
        .par_iter()
        .map(|e| compute_record(e, cfg))
        .collect();
    for (e, r) in entries.iter_mut().zip(records) {
        e.record = Some(r?);
    }

    // Opposite names by certificate lookup.
    let by_cert: HashMap<Vec<u8>, String> = entries
        .iter()
        .filter_map(|e| e.certificate.clone().map(|c| (c, e.name.clone())))
        .collect();
    for e in &mut entries {
        let record = e.record.as_ref().unwrap();
        if record.self_opposite {
            e.opposite_name = e.name.clone();
        } else {
            let opp = e.digraph.as_ref().unwrap().opposite();
            let cert = canonical_form(&opp)?;
            e.opposite_name = by_cert
                .get(&cert.bytes)
                .cloned()
                .ok_or_else(|| Error::Census("opposite digraph missing from census".into()))?;
        }
    }

    // Underlying-graph names for wreath-underlying entries; the remaining
    // names are assigned by derive_families.
    for e in &mut entries {
        if let Provenance::GeneralisedWreath { n, r } = e.provenance {
            e.underlying_name = format!("GWD({n};{r})");
        } else {
            let u = e.digraph.as_ref().unwrap().underlying_graph()?;
            let cert = canonical_form(&u)?;
            if let Some(&(n, r)) = gw_cert_index.get(&cert.bytes) {
                e.underlying_name = format!("GWD({n};{r})");
            }
        }
    }

    Ok(CensusOutcome { entries, report })
}

fn gw_key(p: &Provenance) -> (u32, u32) {
    match p {
        Provenance::GeneralisedWreath { n, r } => (*n, *r),
        _ => (0, 0),
    }
}

/// Canonical certificates of the underlying graphs of the wreath family up
/// to the given order, for naming; collisions keep the least parameters.
fn gw_underlying_certificates(max_order: u64) -> Result<HashMap<Vec<u8>, (u32, u32)>> {
    let mut out: HashMap<Vec<u8>, (u32, u32)> = HashMap::new();
    if max_order < 6 {
        return Ok(out);
    }
    for (params, digraph) in gw_catalogue(max_order)? {
        let Some(d) = digraph else { continue };
        let cert = canonical_form(&d.underlying_graph()?)?;
        let entry = out.entry(cert.bytes).or_insert((params.n, params.r));
        if (params.n, params.r) < *entry {
            *entry = (params.n, params.r);
        }
    }
    Ok(out)
}

fn compute_record(entry: &AtdEntry, cfg: &CensusConfig) -> Result<AtdRecord> {
    let gw_params = match entry.provenance {
        Provenance::GeneralisedWreath { n, r } => Some(GwParams::new(n, r)?),
        _ => None,
    };
    if entry.order > cfg.detail_limit {
        let p = gw_params.expect("only wreath entries above the detail limit");
        return Ok(gw_formula_record(p));
    }
    let d = entry.digraph.as_ref().unwrap();
    let record = measured_record(d, gw_params, entry.order)?;
    Ok(record)
}

/// Record fields computed from the digraph itself.
fn measured_record(d: &Digraph, gw: Option<GwParams>, order: u64) -> Result<AtdRecord> {
    let aut = automorphism_group(d)?;
    verify_two_atd_with_group(d, &aut)?;
    let aut_order = aut.order()?;
    let stab_order = aut_order / order as u128;
    let stab = aut.point_stabilizer(0)?;

    // The s level: wreath members have s = n - r, which can exceed the
    // bound honored by non-wreath entries.
    let s_level = match gw {
        Some(p) => (p.n - p.r) as usize,
        None => {
            let (s, saturated) = max_s_arc_transitivity(d, &aut, crate::classify::DEFAULT_S_CAP)?;
            if saturated {
                return Err(Error::Census(
                    "s-arc-transitivity saturated its cap on a non-wreath entry".into(),
                ));
            }
            s
        }
    };
    if gw.is_none() {
        debug_assert!(stab_order <= 32);
        debug_assert_eq!(stab_order, 1u128 << s_level);
    }

    let underlying = d.underlying_graph()?;
    let graph_aut = automorphism_group(&underlying)?;
    let underlying_at = crate::classify::transitivity_flags(&underlying, &graph_aut)?.arc;
    let index_in_graph_aut = graph_aut.order()? / aut_order;
    let self_opposite = crate::canon::is_self_opposite(d)?;

    // A self-opposite digraph adjoins its opposite-witness to Aut(D) for an
    // index-2 arc-transitive overgroup, which is minimal. Only the rare
    // non-self-opposite entries with arc-transitive underlying graphs need
    // the overgroup enumeration.
    let index_to_at_overgroup = if !underlying_at {
        Some(0)
    } else if self_opposite {
        Some(2)
    } else {
        match overgroups_up_to(&graph_aut, &aut, OVERGROUP_CAP) {
            Ok(over) => {
                let mut best: Option<u128> = None;
                for t in over {
                    let t_order = t.order()?;
                    if t_order == aut_order {
                        continue;
                    }
                    if crate::classify::transitivity_flags(&underlying, &t)?.arc {
                        let index = t_order / aut_order;
                        if best.is_none_or(|b| index < b) {
                            best = Some(index);
                        }
                    }
                }
                Some(best.unwrap_or(0))
            }
            Err(Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    };

    let alt = alternating_cycles(d)?;
    let alter = alter_invariants(d, 0)?;

    Ok(AtdRecord {
        order,
        self_opposite,
        underlying_arc_transitive: underlying_at,
        s_level,
        stab_order: Some(stab_order),
        stab_abelian: stab.is_abelian(),
        solvable: aut.is_solvable()?,
        index_to_at_overgroup,
        index_in_graph_aut: Some(index_in_graph_aut),
        radius: alt.radius,
        attachment: alt.attachment,
        attachment_type: alt.attachment_type,
        alt_cycle_count: alt.cycle_count(),
        alter_exponent: alter.exponent,
        alter_perimeter: alter.perimeter,
        alter_sequence: alter.sequence,
        is_gw: gw.is_some(),
    })
}

/// Closed-form record for a wreath-family member too large to measure:
/// the overgroup indices are left unevaluated.
fn gw_formula_record(p: GwParams) -> AtdRecord {
    let r = p.r as usize;
    AtdRecord {
        order: p.vertex_count(),
        self_opposite: true,
        underlying_arc_transitive: true,
        s_level: (p.n - p.r) as usize,
        stab_order: if p.n - p.r < 128 {
            Some(1u128 << (p.n - p.r))
        } else {
            None
        },
        stab_abelian: true,
        solvable: true,
        index_to_at_overgroup: None,
        index_in_graph_aut: None,
        radius: 2,
        attachment: if r == 1 { 2 } else { 1 },
        attachment_type: if r == 1 {
            AttachmentType::Tight
        } else {
            AttachmentType::Loose
        },
        alt_cycle_count: (p.n as usize) << (r - 1),
        alter_exponent: r,
        alter_perimeter: p.n as usize,
        alter_sequence: (1..=r).map(|t| 1usize << t).collect(),
        is_gw: true,
    }
}

/// Census of coset digraphs over an explicit group catalog instead of the
/// quotient search; completeness is relative to the supplied catalog.
pub fn catalog_census(
    catalog: &[(String, PermutationGroup)],
    cfg: &CensusConfig,
) -> Result<CensusOutcome> {
    let mut report = CensusReport::default();
    report.warnings.push(
        "catalog run: completeness is relative to the supplied groups only".to_string(),
    );
    let s_range = cfg.effective_s_range();
    let max_s = *s_range.iter().max().unwrap_or(&1);
    let catalogue = universal_catalogue(max_s.min(5))?;

    let mut raw: Vec<(Provenance, Digraph)> = Vec::new();
    if cfg.include_gw {
        for (params, digraph) in gw_catalogue(cfg.max_order.max(6))? {
            if params.vertex_count() > cfg.max_order {
                continue;
            }
            if let Some(d) = digraph {
                raw.push((
                    Provenance::GeneralisedWreath {
                        n: params.n,
                        r: params.r,
                    },
                    d,
                ));
            }
        }
    }

    for (group_name, k) in catalog {
        let order = k.order()?;
        for &s in &s_range {
            let stab = 1u128 << s;
            if order % stab != 0 || order / stab > cfg.max_order as u128 {
                continue;
            }
            for (_, presentation) in catalogue.iter().filter(|(t, _)| t.s == s) {
                let epis = quotient_search_in_group(presentation, k, STAB_ELEMENT_CAP)?;
                for epi in epis {
                    let subgroup =
                        PermutationGroup::from_generators(k.degree(), epi.images[..s].to_vec())?;
                    if subgroup.order()? != stab {
                        continue;
                    }
                    let (_, core_free) = core_info(k, &subgroup, cfg.max_order + 1)?;
                    if !core_free {
                        continue;
                    }
                    let shunt = epi.images[s].clone();
                    let shunt_inv = shunt.inverse();
                    let mut excluded = false;
                    for h1 in subgroup.elements_capped(64)? {
                        let h2 = shunt_inv.then(&h1.inverse()).then(&shunt_inv);
                        if subgroup.contains(&h2) {
                            excluded = true;
                            break;
                        }
                    }
                    if excluded {
                        continue;
                    }
                    let spec = CosetSpec {
                        group: k.clone(),
                        subgroup_gens: epi.images[..s].to_vec(),
                        shunt,
                    };
                    let (digraph, _) = coset_digraph(&spec, cfg.max_order + 1)?;
                    raw.push((
                        Provenance::Catalog {
                            group_name: group_name.clone(),
                        },
                        digraph,
                    ));
                }
            }
        }
        report
            .cells
            .push(format!("catalog group {group_name} (order {order}) processed"));
    }
    report.complete = false;
    assemble_entries(cfg, raw, report)
}

/// A row of the arc-transitive underlying-graph table.
#[derive(Clone, Debug)]
pub struct GhatRecord {
    pub order: u64,
    pub serial: usize,
    pub name: String,
    pub graph: Digraph,
    pub girth: Option<usize>,
    pub bipartite: bool,
    pub cayley: CayleyType,
    pub graph_stab_order: u128,
    pub hat_stab_orders: Vec<u128>,
    pub solvable: bool,
    /// (length, chiral) per consistent-cycle orbit.
    pub consistent_profile: Vec<(usize, bool)>,
    pub member_names: Vec<String>,
}

/// A row of the half-arc-transitive graph table.
#[derive(Clone, Debug)]
pub struct HatRecord {
    pub order: u64,
    pub serial: usize,
    pub name: String,
    pub graph: Digraph,
    pub girth: Option<usize>,
    pub bipartite: bool,
    pub cayley: CayleyType,
    pub stab_order: u128,
    pub solvable: bool,
    pub radius: usize,
    pub attachment: usize,
    pub attachment_type: AttachmentType,
    pub alter_exponent: usize,
    pub alter_perimeter: usize,
    pub alter_sequence: Vec<usize>,
    pub shortest_consistent: usize,
    pub longest_consistent: usize,
    /// `Some("{I}")` for tightly attached graphs; `None` renders as "?".
    pub metacirculant_classes: Option<String>,
    pub member_names: Vec<String>,
}

/// Groups entries by their underlying graph and produces one record per
/// non-wreath graph, split into arc-transitive and half-arc-transitive
/// lists. Also fills each entry's underlying-graph name.
pub fn derive_families(
    entries: &mut [AtdEntry],
) -> Result<(Vec<GhatRecord>, Vec<HatRecord>)> {
    struct Family {
        graph: Digraph,
        cert: Vec<u8>,
        orientations: Vec<Digraph>,
        members: Vec<usize>,
    }
    let mut families: Vec<Family> = Vec::new();
    let mut by_cert: HashMap<Vec<u8>, usize> = HashMap::new();

    for (i, e) in entries.iter().enumerate() {
        if !e.underlying_name.is_empty() {
            continue; // wreath-underlying: no family row
        }
        let Some(d) = &e.digraph else { continue };
        let u = d.underlying_graph()?;
        let cert = canonical_form(&u)?;
        let canonical_graph = u.relabel(cert.relabeling.images())?;
        let transported = d.relabel(cert.relabeling.images())?;
        match by_cert.get(&cert.bytes) {
            Some(&f) => {
                families[f].orientations.push(transported);
                families[f].members.push(i);
            }
            None => {
                by_cert.insert(cert.bytes.clone(), families.len());
                families.push(Family {
                    graph: canonical_graph,
                    cert: cert.bytes,
                    orientations: vec![transported],
                    members: vec![i],
                });
            }
        }
    }

    families.sort_by(|a, b| (a.graph.order(), &a.cert).cmp(&(b.graph.order(), &b.cert)));

    let mut ghat: Vec<GhatRecord> = Vec::new();
    let mut hat: Vec<HatRecord> = Vec::new();
    let mut ghat_serial: HashMap<u64, usize> = HashMap::new();
    let mut hat_serial: HashMap<u64, usize> = HashMap::new();

    for family in &families {
        let gamma = &family.graph;
        let order = gamma.order() as u64;
        let class = classify_graph(gamma)?;
        let aut = automorphism_group(gamma)?;
        let aut_order = aut.order()?;
        let (girth, bipartite) = gamma.girth_and_bipartite()?;
        let solvable = aut.is_solvable()?;
        let cayley = cayley_type(gamma, CAYLEY_BUDGET)?;
        let cycles = consistent_cycles(gamma, &aut, STAB_ELEMENT_CAP)?;
        let member_names: Vec<String> = family
            .members
            .iter()
            .map(|&i| entries[i].name.clone())
            .collect();
        match class {
            GraphClass::ArcTransitive => {
                let stabs = maximal_hat_stab_orders(
                    gamma,
                    &family.orientations,
                    true,
                    STAB_ELEMENT_CAP,
                )?;
                let serial = ghat_serial.entry(order).or_insert(0);
                *serial += 1;
                let name = format!("GHAT[{order};{serial}]");
                for &i in &family.members {
                    entries[i].underlying_name = name.clone();
                }
                ghat.push(GhatRecord {
                    order,
                    serial: *serial,
                    name,
                    graph: gamma.clone(),
                    girth,
                    bipartite,
                    cayley,
                    graph_stab_order: aut_order / order as u128,
                    hat_stab_orders: stabs.orders,
                    solvable,
                    consistent_profile: cycles.iter().map(|c| (c.length, c.chiral)).collect(),
                    member_names,
                });
            }
            GraphClass::HalfArcTransitive => {
                let reference = entries[family.members[0]]
                    .record
                    .clone()
                    .ok_or_else(|| Error::Census("family member lacks a record".into()))?;
                let lengths: Vec<usize> = cycles.iter().map(|c| c.length).collect();
                let serial = hat_serial.entry(order).or_insert(0);
                *serial += 1;
                let name = format!("HAT[{order};{serial}]");
                for &i in &family.members {
                    entries[i].underlying_name = name.clone();
                }
                hat.push(HatRecord {
                    order,
                    serial: *serial,
                    name,
                    graph: gamma.clone(),
                    girth,
                    bipartite,
                    cayley,
                    stab_order: aut_order / order as u128,
                    solvable,
                    radius: reference.radius,
                    attachment: reference.attachment,
                    attachment_type: reference.attachment_type,
                    alter_exponent: reference.alter_exponent,
                    alter_perimeter: reference.alter_perimeter,
                    alter_sequence: reference.alter_sequence.clone(),
                    shortest_consistent: lengths.iter().copied().min().unwrap_or(0),
                    longest_consistent: lengths.iter().copied().max().unwrap_or(0),
                    metacirculant_classes: if reference.attachment_type == AttachmentType::Tight {
                        Some("{I}".to_string())
                    } else {
                        None
                    },
                    member_names,
                });
            }
            GraphClass::Other => {
                return Err(Error::Census(
                    "underlying graph of a census digraph is neither arc- nor \
                     half-arc-transitive"
                        .into(),
                ));
            }
        }
    }
    Ok((ghat, hat))
}

/// Rebuilds fully measured census entries from bare digraph documents:
/// recomputes certificates, serial names, records, and the opposite and
/// underlying-graph name resolution. Supports the validation path, so only
/// provenance-independent information is used.
pub fn entries_from_documents(
    documents: &HashMap<String, Digraph>,
) -> Result<Vec<AtdEntry>> {
    let max_order = documents.values().map(|d| d.order() as u64).max().unwrap_or(0);
    if max_order > 512 {
        return Err(Error::Census(
            "validation from documents supports orders up to 512".into(),
        ));
    }
    // Wreath-family membership by certificate.
    let mut gw_digraph_certs: HashMap<Vec<u8>, (u32, u32)> = HashMap::new();
    if max_order >= 6 {
        for (params, digraph) in gw_catalogue(max_order)? {
            if let Some(d) = digraph {
                gw_digraph_certs.insert(canonical_form(&d)?.bytes, (params.n, params.r));
            }
        }
    }
    let gw_underlying = gw_underlying_certificates(max_order)?;

    struct Doc {
        digraph: Digraph,
        cert: Vec<u8>,
        order: u64,
        gw: Option<(u32, u32)>,
    }
    let mut docs: Vec<Doc> = Vec::new();
    for d in documents.values() {
        let cert = canonical_form(d)?;
        let canonical = d.relabel(cert.relabeling.images())?;
        if docs.iter().any(|x| x.cert == cert.bytes) {
            return Err(Error::Census("duplicate digraph document".into()));
        }
        docs.push(Doc {
            order: d.order() as u64,
            gw: gw_digraph_certs.get(&cert.bytes).copied(),
            digraph: canonical,
            cert: cert.bytes,
        });
    }
    docs.sort_by(|a, b| (a.order, &a.cert).cmp(&(b.order, &b.cert)));

    let mut serial_counter: HashMap<u64, usize> = HashMap::new();
    let mut entries: Vec<AtdEntry> = Vec::new();
    for doc in &docs {
        let serial = serial_counter.entry(doc.order).or_insert(0);
        *serial += 1;
        entries.push(AtdEntry {
            order: doc.order,
            serial: *serial,
            name: format!("ATD[{};{}]", doc.order, *serial),
            digraph: Some(doc.digraph.clone()),
            certificate: Some(doc.cert.clone()),
            provenance: match doc.gw {
                Some((n, r)) => Provenance::GeneralisedWreath { n, r },
                None => Provenance::Quotient {
                    type_name: String::new(),
                    index: 0,
                },
            },
            record: None,
            opposite_name: String::new(),
            underlying_name: String::new(),
        });
    }

    let records: Vec<Result<AtdRecord>> = entries
        .par_iter()
        .map(|e| {
            let gw = match e.provenance {
                Provenance::GeneralisedWreath { n, r } => Some(GwParams::new(n, r)?),
                _ => None,
            };
            measured_record(e.digraph.as_ref().unwrap(), gw, e.order)
        })
        .collect();
    for (e, r) in entries.iter_mut().zip(records) {
        e.record = Some(r?);
    }

    let by_cert: HashMap<Vec<u8>, String> = entries
        .iter()
        .filter_map(|e| e.certificate.clone().map(|c| (c, e.name.clone())))
        .collect();
    for e in &mut entries {
        if e.record.as_ref().unwrap().self_opposite {
            e.opposite_name = e.name.clone();
        } else {
            let cert = canonical_form(&e.digraph.as_ref().unwrap().opposite())?;
            e.opposite_name = by_cert
                .get(&cert.bytes)
                .cloned()
                .ok_or_else(|| Error::Census("opposite digraph missing from documents".into()))?;
        }
        let u = e.digraph.as_ref().unwrap().underlying_graph()?;
        let cert = canonical_form(&u)?;
        if let Some(&(n, r)) = gw_underlying.get(&cert.bytes) {
            e.underlying_name = format!("GWD({n};{r})");
        }
    }
    Ok(entries)
}

/// Relabels the digraph into the canonical order of its certificate and
/// checks the frozen byte layout round-trips.
pub fn canonical_copy(d: &Digraph) -> Result<(Digraph, Vec<u8>)> {
    let cert = canonical_form(d)?;
    let canon = d.relabel(cert.relabeling.images())?;
    debug_assert_eq!(
        certificate_bytes(&canon, &Permutation::identity(d.order())),
        cert.bytes
    );
    Ok((canon, cert.bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_bound_values() {
        assert_eq!(CensusConfig::t_bound(32), 1);
        assert_eq!(CensusConfig::t_bound(33), 2);
        assert_eq!(CensusConfig::t_bound(1000), 5);
        assert_eq!(CensusConfig::t_bound(6), 0);
    }

    #[test]
    fn default_s_range_comes_from_the_bound() {
        let cfg = CensusConfig::new(32);
        assert_eq!(cfg.effective_s_range(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn verify_two_atd_diagnostics() {
        let w3 = crate::constructions::wreath(3).unwrap();
        assert!(verify_two_atd(&w3).unwrap().is_two_atd());
        let c6 = Digraph::from_arcs(6, &(0..6u32).map(|i| (i, (i + 1) % 6)).collect::<Vec<_>>())
            .unwrap();
        let check = verify_two_atd(&c6).unwrap();
        assert!(!check.is_two_atd());
        assert!(!check.two_valent);
    }

    #[test]
    fn gw_only_census_small() {
        let mut cfg = CensusConfig::new(10);
        cfg.gw_only = true;
        let outcome = run_census(&cfg).unwrap();
        assert_eq!(outcome.entries.len(), 3);
        for e in &outcome.entries {
            assert!(e.record.as_ref().unwrap().is_gw);
            assert_eq!(e.opposite_name, e.name);
            assert!(e.underlying_name.starts_with("GWD("));
        }
    }

    #[test]
    fn census_order_six_contains_the_wreath_digraph() {
        let mut cfg = CensusConfig::new(6);
        cfg.s_range = Some(vec![1, 2]);
        cfg.jobs = 1;
        let outcome = run_census(&cfg).unwrap();
        assert!(!outcome.entries.is_empty());
        // Exactly one digraph on six vertices.
        let six: Vec<_> = outcome.entries.iter().filter(|e| e.order == 6).collect();
        assert_eq!(six.len(), 1);
        let w3 = crate::constructions::wreath(3).unwrap();
        assert!(crate::canon::are_isomorphic(six[0].digraph.as_ref().unwrap(), &w3).unwrap());
        assert!(outcome.report.complete);
    }

    #[test]
    fn formula_record_matches_measured_record_on_small_members() {
        for (n, r) in [(3u32, 1u32), (4, 1), (3, 2), (5, 1), (4, 2), (4, 3)] {
            let d = crate::constructions::generalised_wreath(n, r).unwrap();
            let p = GwParams::new(n, r).unwrap();
            let formula = gw_formula_record(p);
            let measured = measured_record(&d, Some(p), d.order() as u64).unwrap();
            assert_eq!(formula.s_level, measured.s_level, "W({n},{r}) s");
            assert_eq!(formula.radius, measured.radius, "W({n},{r}) radius");
            assert_eq!(formula.attachment, measured.attachment, "W({n},{r}) attachment");
            assert_eq!(
                formula.attachment_type, measured.attachment_type,
                "W({n},{r}) type"
            );
            assert_eq!(
                formula.alt_cycle_count, measured.alt_cycle_count,
                "W({n},{r}) cycles"
            );
            assert_eq!(
                formula.alter_exponent, measured.alter_exponent,
                "W({n},{r}) exponent"
            );
            assert_eq!(
                formula.alter_perimeter, measured.alter_perimeter,
                "W({n},{r}) perimeter"
            );
            assert_eq!(
                formula.alter_sequence, measured.alter_sequence,
                "W({n},{r}) sequence"
            );
            assert_eq!(formula.self_opposite, measured.self_opposite);
            assert_eq!(formula.stab_order, measured.stab_order);
            assert_eq!(formula.stab_abelian, measured.stab_abelian);
            assert_eq!(formula.solvable, measured.solvable);
            assert_eq!(
                formula.underlying_arc_transitive,
                measured.underlying_arc_transitive
            );
        }
    }

    #[test]
    fn families_of_a_small_run() {
        let mut cfg = CensusConfig::new(9);
        cfg.s_range = Some(vec![1]);
        cfg.jobs = 1;
        cfg.include_gw = true;
        let mut outcome = run_census(&cfg).unwrap();
        let (ghat, hat) = derive_families(&mut outcome.entries).unwrap();
        // Order 9: the cycle-with-chords circulant underlying graph exists.
        for g in &ghat {
            assert!(g.graph.is_regular_of_valence(4));
        }
        for h in &hat {
            assert!(h.graph.is_regular_of_valence(4));
        }
        // Every non-wreath entry received an underlying name.
        for e in &outcome.entries {
            assert!(!e.underlying_name.is_empty());
        }
    }
}
