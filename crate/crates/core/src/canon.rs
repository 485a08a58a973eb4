//! Automorphism groups and canonical forms of digraphs.
//!
//! Individualization-refinement backtracking. The refinement invariant uses
//! both out- and in-neighborhood color multisets (plain degree refinement is
//! unsound for digraphs); the initial coloring is by (in-valence,
//! out-valence). The canonical labeling is the leaf minimising the pair
//! (refinement-invariant path, relabeled arc list), so the certificate is
//! label-invariant; automorphisms discovered from equal leaves prune the
//! search and are returned as generators of the full automorphism group.

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};

/// Default cap on search-tree nodes.
pub const DEFAULT_CANON_BUDGET: u64 = 10_000_000;

/// A label-invariant certificate plus the relabeling that produced it.
/// Two digraphs are isomorphic iff their certificate bytes agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
    pub relabeling: Permutation,
}

/// Certificate bytes of a digraph under a relabeling: vertex count, then
/// the sorted relabeled arc list, all little-endian 32-bit.
pub fn certificate_bytes(d: &Digraph, relabeling: &Permutation) -> Vec<u8> {
    let mut arcs: Vec<(u32, u32)> = d
        .arcs()
        .iter()
        .map(|&(u, v)| (relabeling.apply(u), relabeling.apply(v)))
        .collect();
    arcs.sort_unstable();
    let mut bytes = Vec::with_capacity(4 + 8 * arcs.len());
    bytes.extend_from_slice(&(d.order() as u32).to_le_bytes());
    for (u, v) in arcs {
        bytes.extend_from_slice(&u.to_le_bytes());
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    bytes
}

pub fn canonical_form(d: &Digraph) -> Result<CanonicalForm> {
    Ok(search(d, DEFAULT_CANON_BUDGET)?.1)
}

pub fn automorphism_group(d: &Digraph) -> Result<PermutationGroup> {
    Ok(search(d, DEFAULT_CANON_BUDGET)?.0)
}

/// Both outputs from one search.
pub fn automorphisms_and_canonical(
    d: &Digraph,
    budget: u64,
) -> Result<(PermutationGroup, CanonicalForm)> {
    search(d, budget)
}

pub fn are_isomorphic(d1: &Digraph, d2: &Digraph) -> Result<bool> {
    if d1.order() != d2.order() || d1.arc_count() != d2.arc_count() {
        return Ok(false);
    }
    Ok(canonical_form(d1)?.bytes == canonical_form(d2)?.bytes)
}

/// An isomorphism witness `d1 -> d2`, when one exists.
pub fn isomorphism_witness(d1: &Digraph, d2: &Digraph) -> Result<Option<Permutation>> {
    if d1.order() != d2.order() || d1.arc_count() != d2.arc_count() {
        return Ok(None);
    }
    let c1 = canonical_form(d1)?;
    let c2 = canonical_form(d2)?;
    if c1.bytes != c2.bytes {
        return Ok(None);
    }
    let witness = c1.relabeling.then(&c2.relabeling.inverse());
    debug_assert_eq!(&d1.relabel(witness.images()).unwrap(), d2);
    Ok(Some(witness))
}

pub fn is_self_opposite(d: &Digraph) -> Result<bool> {
    are_isomorphic(d, &d.opposite())
}

/// An ordered partition of the vertex set. Cells are contiguous runs of
/// `order`; a vertex's cell is identified by the run's start position.
#[derive(Clone)]
struct Partition {
    order: Vec<u32>,
    pos: Vec<u32>,
    cell_of: Vec<u32>,
    /// cell_len[start] = length of the cell starting there (0 elsewhere).
    cell_len: Vec<u32>,
}

impl Partition {
    fn initial(d: &Digraph) -> Partition {
        let n = d.order();
        let mut keyed: Vec<(u32, u32, u32)> = (0..n as u32)
            .map(|v| (d.in_neighbors(v).len() as u32, d.out_neighbors(v).len() as u32, v))
            .collect();
        keyed.sort_unstable();
        let order: Vec<u32> = keyed.iter().map(|&(_, _, v)| v).collect();
        let mut p = Partition {
            order,
            pos: vec![0; n],
            cell_of: vec![0; n],
            cell_len: vec![0; n],
        };
        for (i, &v) in p.order.iter().enumerate() {
            p.pos[v as usize] = i as u32;
        }
        let mut start = 0;
        for i in 0..n {
            let split = i + 1 == n
                || (keyed[i].0, keyed[i].1) != (keyed[i + 1].0, keyed[i + 1].1);
            p.cell_of[p.order[i] as usize] = start as u32;
            if split {
                p.cell_len[start] = (i + 1 - start) as u32;
                start = i + 1;
            }
        }
        p
    }

    /// Cell starts in order.
    fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.order.len() {
            out.push(i as u32);
            i += self.cell_len[i] as usize;
        }
        out
    }

    /// First smallest non-singleton cell, by (size, position).
    fn target_cell(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut i = 0;
        while i < self.order.len() {
            let len = self.cell_len[i] as usize;
            if len > 1 && best.is_none_or(|(_, blen)| len < blen) {
                best = Some((i, len));
            }
            i += len;
        }
        best
    }

    /// Splits `v` off the front of its cell.
    fn individualize(&mut self, v: u32) {
        let start = self.cell_of[v as usize] as usize;
        let len = self.cell_len[start] as usize;
        debug_assert!(len > 1);
        let vpos = self.pos[v as usize] as usize;
        let other = self.order[start];
        self.order.swap(start, vpos);
        self.pos[other as usize] = vpos as u32;
        self.pos[v as usize] = start as u32;
        self.cell_len[start] = 1;
        self.cell_len[start + 1] = (len - 1) as u32;
        self.cell_of[v as usize] = start as u32;
        for i in (start + 1)..(start + len) {
            self.cell_of[self.order[i] as usize] = (start + 1) as u32;
        }
    }

    /// Refines to the coarsest stable partition under the signature
    /// (own cell, out-neighbor cell multiset, in-neighbor cell multiset).
    fn refine(&mut self, d: &Digraph) {
        let n = self.order.len();
        loop {
            let mut signatures: Vec<(Vec<u32>, Vec<u32>)> = vec![(Vec::new(), Vec::new()); n];
            for v in 0..n as u32 {
                let mut outs: Vec<u32> = d
                    .out_neighbors(v)
                    .iter()
                    .map(|&w| self.cell_of[w as usize])
                    .collect();
                outs.sort_unstable();
                let mut ins: Vec<u32> = d
                    .in_neighbors(v)
                    .iter()
                    .map(|&w| self.cell_of[w as usize])
                    .collect();
                ins.sort_unstable();
                signatures[v as usize] = (outs, ins);
            }
            let mut changed = false;
            let mut i = 0;
            while i < n {
                let len = self.cell_len[i] as usize;
                if len > 1 {
                    let cell: &mut [u32] = &mut self.order[i..i + len];
                    cell.sort_by(|&a, &b| signatures[a as usize].cmp(&signatures[b as usize]));
                    // Rebuild positions and split at signature changes.
                    let mut boundaries = vec![i];
                    for j in 1..len {
                        if signatures[cell[j] as usize] != signatures[cell[j - 1] as usize] {
                            boundaries.push(i + j);
                        }
                    }
                    if boundaries.len() > 1 {
                        changed = true;
                        boundaries.push(i + len);
                        for w in 0..boundaries.len() - 1 {
                            let (s, e) = (boundaries[w], boundaries[w + 1]);
                            self.cell_len[s] = (e - s) as u32;
                            for j in s..e {
                                self.cell_of[self.order[j] as usize] = s as u32;
                            }
                        }
                    }
                    for j in i..i + len {
                        self.pos[self.order[j] as usize] = j as u32;
                    }
                }
                i += len;
            }
            if !changed {
                return;
            }
        }
    }

    /// The labeling sending each vertex to its position.
    fn labeling(&self) -> Permutation {
        Permutation::from_images(self.pos.clone()).expect("positions form a permutation")
    }
}

struct Leaf {
    invariants: Vec<Vec<u32>>,
    cert: Vec<u8>,
    labeling: Permutation,
}

struct SearchCtx<'a> {
    d: &'a Digraph,
    budget: u64,
    nodes: u64,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Permutation>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PathCmp {
    Equal,
    Less,
    Greater,
}

fn search(d: &Digraph, budget: u64) -> Result<(PermutationGroup, CanonicalForm)> {
    let mut ctx = SearchCtx {
        d,
        budget,
        nodes: 0,
        first: None,
        best: None,
        gens: Vec::new(),
    };
    let mut partition = Partition::initial(d);
    partition.refine(d);
    let mut invariants = Vec::new();
    let mut prefix = Vec::new();
    explore(
        &mut ctx,
        partition,
        &mut invariants,
        &mut prefix,
        PathCmp::Equal,
        PathCmp::Equal,
    )?;
    let best = ctx.best.expect("at least one leaf");
    let group = PermutationGroup::from_generators(d.order(), ctx.gens)?.reduced()?;
    Ok((
        group,
        CanonicalForm {
            bytes: best.cert,
            relabeling: best.labeling,
        },
    ))
}

fn explore(
    ctx: &mut SearchCtx,
    partition: Partition,
    invariants: &mut Vec<Vec<u32>>,
    prefix: &mut Vec<u32>,
    cmp_first_in: PathCmp,
    cmp_best_in: PathCmp,
) -> Result<()> {
    ctx.nodes += 1;
    if ctx.nodes > ctx.budget {
        return Err(Error::BudgetExceeded {
            what: "canonical labeling search".into(),
            budget: ctx.budget,
        });
    }
    let depth = invariants.len();
    let inv = partition.cell_starts();

    let cmp_against = |leaf: &Option<Leaf>, state: PathCmp| -> PathCmp {
        match (state, leaf) {
            (PathCmp::Equal, Some(l)) => match inv.cmp(&l.invariants[depth]) {
                std::cmp::Ordering::Less => PathCmp::Less,
                std::cmp::Ordering::Equal => PathCmp::Equal,
                std::cmp::Ordering::Greater => PathCmp::Greater,
            },
            (s, _) => s,
        }
    };
    let cmp_first = cmp_against(&ctx.first, cmp_first_in);
    let cmp_best = cmp_against(&ctx.best, cmp_best_in);

    // A subtree can be skipped unless it can still contain the canonical
    // (minimal) leaf or leaves matching the first path (which reveal
    // automorphisms).
    if cmp_first == PathCmp::Greater && cmp_best == PathCmp::Greater {
        return Ok(());
    }

    invariants.push(inv);
    let result = explore_inner(ctx, partition, invariants, prefix, cmp_first, cmp_best);
    invariants.pop();
    result
}

fn explore_inner(
    ctx: &mut SearchCtx,
    partition: Partition,
    invariants: &mut Vec<Vec<u32>>,
    prefix: &mut Vec<u32>,
    cmp_first: PathCmp,
    cmp_best: PathCmp,
) -> Result<()> {
    let target = match partition.target_cell() {
        None => {
            handle_leaf(ctx, &partition, invariants, cmp_first, cmp_best);
            return Ok(());
        }
        Some((start, len)) => (start, len),
    };

    let cell: Vec<u32> = partition.order[target.0..target.0 + target.1].to_vec();
    let mut candidates = cell.clone();
    candidates.sort_unstable();
    let mut explored: Vec<u32> = Vec::new();
    for &v in &candidates {
        if explored
            .iter()
            .any(|&u| same_orbit_fixing_prefix(ctx, prefix, u, v))
        {
            continue;
        }
        explored.push(v);
        let mut child = partition.clone();
        child.individualize(v);
        child.refine(ctx.d);
        prefix.push(v);
        let r = explore(ctx, child, invariants, prefix, cmp_first, cmp_best);
        prefix.pop();
        r?;
    }
    Ok(())
}

fn handle_leaf(
    ctx: &mut SearchCtx,
    partition: &Partition,
    invariants: &[Vec<u32>],
    cmp_first: PathCmp,
    cmp_best: PathCmp,
) {
    let labeling = partition.labeling();
    let cert = certificate_bytes(ctx.d, &labeling);

    if ctx.first.is_none() {
        let leaf = Leaf {
            invariants: invariants.to_vec(),
            cert,
            labeling,
        };
        ctx.best = Some(Leaf {
            invariants: leaf.invariants.clone(),
            cert: leaf.cert.clone(),
            labeling: leaf.labeling.clone(),
        });
        ctx.first = Some(leaf);
        return;
    }

    // A leaf whose certificate matches the first (or best) leaf's yields an
    // automorphism: equal certificates mean the two labelings carry the
    // digraph to the same arc list.
    let mut recorded = false;
    if cmp_first == PathCmp::Equal {
        let first = ctx.first.as_ref().unwrap();
        if first.cert == cert {
            let auto = labeling.then(&first.labeling.inverse());
            record_automorphism(ctx, auto);
            recorded = true;
        }
    }
    // The threaded comparison states can be stale once `best` has been
    // replaced inside this subtree, so the replacement decision compares
    // full keys directly.
    let _ = cmp_best;
    let replace = {
        let best = ctx.best.as_ref().unwrap();
        (invariants, &cert) < (best.invariants.as_slice(), &best.cert)
    };
    if replace {
        ctx.best = Some(Leaf {
            invariants: invariants.to_vec(),
            cert,
            labeling,
        });
    } else if !recorded {
        let auto = {
            let best = ctx.best.as_ref().unwrap();
            if cert == best.cert {
                Some(labeling.then(&best.labeling.inverse()))
            } else {
                None
            }
        };
        if let Some(auto) = auto {
            record_automorphism(ctx, auto);
        }
    }
}

fn record_automorphism(ctx: &mut SearchCtx, auto: Permutation) {
    if auto.is_identity() || ctx.gens.contains(&auto) {
        return;
    }
    debug_assert!(is_automorphism(ctx.d, &auto));
    ctx.gens.push(auto);
}

fn is_automorphism(d: &Digraph, p: &Permutation) -> bool {
    d.arcs()
        .iter()
        .all(|&(u, v)| d.has_arc(p.apply(u), p.apply(v)))
}

/// True when some product of the discovered generators fixing every prefix
/// vertex maps u to v (orbit test under the prefix stabiliser).
fn same_orbit_fixing_prefix(ctx: &SearchCtx, prefix: &[u32], u: u32, v: u32) -> bool {
    let fixing: Vec<&Permutation> = ctx
        .gens
        .iter()
        .filter(|g| prefix.iter().all(|&p| g.fixes(p)))
        .collect();
    if fixing.is_empty() {
        return false;
    }
    let n = ctx.d.order();
    let mut seen = vec![false; n];
    let mut stack = vec![u];
    seen[u as usize] = true;
    while let Some(p) = stack.pop() {
        for g in &fixing {
            let q = g.apply(p);
            if q == v {
                return true;
            }
            if !seen[q as usize] {
                seen[q as usize] = true;
                stack.push(q);
            }
        }
    }
    false
}
