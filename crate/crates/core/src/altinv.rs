//! Walk signatures and tolerances, alter-equivalence and its invariants,
//! alternating cycles with radius and attachment data, and consistent-cycle
//! orbits.

use std::collections::HashSet;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup, StabChain};

/// A walk with its signature (+1 forward, -1 backward arcs), partial sums,
/// and tolerance interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<u32>,
    pub signature: Vec<i8>,
    pub partial_sums: Vec<i64>,
    pub tolerance: (i64, i64),
}

/// Builds the walk along `vertices`, reading each step's direction off the
/// arc set. Requires an asymmetric digraph so directions are unambiguous.
pub fn walk_signature(d: &Digraph, vertices: &[u32]) -> Result<Walk> {
    if !d.is_asymmetric() {
        return Err(Error::NotAsymmetric);
    }
    if vertices.is_empty() {
        return Err(Error::Construction("walk needs at least one vertex".into()));
    }
    let mut signature = Vec::with_capacity(vertices.len() - 1);
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        if d.has_arc(a, b) {
            signature.push(1i8);
        } else if d.has_arc(b, a) {
            signature.push(-1i8);
        } else {
            return Err(Error::Construction(format!(
                "vertices {a} and {b} are not adjacent"
            )));
        }
    }
    let mut partial_sums = vec![0i64];
    for &e in &signature {
        partial_sums.push(partial_sums.last().unwrap() + e as i64);
    }
    let tolerance = (
        *partial_sums.iter().min().unwrap(),
        *partial_sums.iter().max().unwrap(),
    );
    Ok(Walk {
        vertices: vertices.to_vec(),
        signature,
        partial_sums,
        tolerance,
    })
}

/// How two intersecting alternating cycles meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttachmentType {
    Loose,
    Antipodal,
    Tight,
    Other,
}

impl AttachmentType {
    /// Chooses the label for attachment number `a` and the given radius;
    /// tight takes precedence over antipodal over loose when they coincide.
    fn classify(a: usize, radius: usize) -> AttachmentType {
        if a == radius {
            AttachmentType::Tight
        } else if a == 2 {
            AttachmentType::Antipodal
        } else if a == 1 {
            AttachmentType::Loose
        } else {
            AttachmentType::Other
        }
    }
}

/// All alternating cycles of a 2-valent asymmetric digraph, with radius and
/// attachment data.
#[derive(Clone, Debug)]
pub struct AlternatingStructure {
    /// Vertex sequences; each cycle's arc directions strictly alternate.
    pub cycles: Vec<Vec<u32>>,
    pub radius: usize,
    pub attachment: usize,
    pub attachment_type: AttachmentType,
    /// Set when the two cycles through each vertex coincide; the attachment
    /// is then the whole cycle length.
    pub degenerate: bool,
}

impl AlternatingStructure {
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }
}

/// Traces every alternating cycle by switching between "the other in-arc of
/// the head" and "the other out-arc of the tail".
pub fn alternating_cycles(d: &Digraph) -> Result<AlternatingStructure> {
    if !d.is_asymmetric() {
        return Err(Error::NotAsymmetric);
    }
    if !d.is_connected() {
        return Err(Error::NotConnected);
    }
    if !d.is_regular_of_valence(2) {
        return Err(Error::NotRegular { expected: 2 });
    }

    let arcs = d.arcs();
    let arc_index = |a: u32, b: u32| arcs.binary_search(&(a, b)).expect("arc exists");
    let mut visited = vec![false; arcs.len()];
    let mut cycles: Vec<Vec<u32>> = Vec::new();

    for start in 0..arcs.len() {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        // State: current arc and whether we traverse it forward.
        let mut arc = start;
        let mut forward = true;
        loop {
            visited[arc] = true;
            let (tail, head) = arcs[arc];
            if forward {
                cycle.push(tail);
                // Continue backward along the other in-arc of the head.
                let ins = d.in_neighbors(head);
                debug_assert_eq!(ins.len(), 2);
                let other = if ins[0] == tail { ins[1] } else { ins[0] };
                arc = arc_index(other, head);
                forward = false;
            } else {
                cycle.push(head);
                // Continue forward along the other out-arc of the tail.
                let outs = d.out_neighbors(tail);
                debug_assert_eq!(outs.len(), 2);
                let other = if outs[0] == head { outs[1] } else { outs[0] };
                arc = arc_index(tail, other);
                forward = true;
            }
            if arc == start && forward {
                break;
            }
        }
        cycles.push(cycle);
    }

    let len = cycles[0].len();
    if cycles.iter().any(|c| c.len() != len) || !len.is_multiple_of(2) {
        return Err(Error::Construction(
            "alternating cycles have unequal lengths (input is not arc-transitive)".into(),
        ));
    }
    let radius = len / 2;

    // Every vertex lies on exactly two cycles, counting multiplicity.
    let mut incidence = vec![0u32; d.order()];
    for c in &cycles {
        for &v in c {
            incidence[v as usize] += 1;
        }
    }
    if incidence.iter().any(|&c| c != 2) {
        return Err(Error::Construction(
            "a vertex does not lie on exactly two alternating cycles".into(),
        ));
    }

    // Attachment: common vertex count of intersecting distinct cycles.
    let vertex_sets: Vec<Vec<u32>> = cycles
        .iter()
        .map(|c| {
            let mut s = c.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let mut attachments: HashSet<usize> = HashSet::new();
    for i in 0..cycles.len() {
        for j in (i + 1)..cycles.len() {
            let common = intersection_size(&vertex_sets[i], &vertex_sets[j]);
            if common > 0 {
                attachments.insert(common);
            }
        }
    }
    let (attachment, degenerate) = match attachments.len() {
        0 => (len, true),
        1 => (*attachments.iter().next().unwrap(), false),
        _ => {
            return Err(Error::Construction(
                "attachment number is not constant (input is not vertex-transitive)".into(),
            ))
        }
    };
    if !(2 * radius).is_multiple_of(attachment) {
        return Err(Error::Construction(
            "attachment number does not divide the alternating cycle length".into(),
        ));
    }
    let attachment_type = if degenerate {
        AttachmentType::Other
    } else {
        AttachmentType::classify(attachment, radius)
    };
    Ok(AlternatingStructure {
        cycles,
        radius,
        attachment,
        attachment_type,
        degenerate,
    })
}

fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let mut i = 0;
    let mut j = 0;
    let mut count = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Radius, attachment number and attachment type.
pub fn radius_attachment(d: &Digraph) -> Result<(usize, usize, AttachmentType)> {
    let s = alternating_cycles(d)?;
    Ok((s.radius, s.attachment, s.attachment_type))
}

/// The partition of the vertex set by alter-equivalence with tolerance `t`:
/// reachability by sum-zero walks whose partial sums stay within `[0, t]`.
/// Computed as components of the layered graph on `V x {0..t}`.
pub fn alter_classes(d: &Digraph, t: usize) -> Vec<Vec<u32>> {
    let n = d.order();
    let levels = t + 1;
    let mut uf = UnionFind::new(n * levels);
    for &(v, w) in d.arcs() {
        for k in 0..t {
            uf.union(v as usize + k * n, w as usize + (k + 1) * n);
        }
    }
    let mut classes: Vec<Vec<u32>> = Vec::new();
    let mut class_of_root: Vec<Option<usize>> = vec![None; n * levels];
    for v in 0..n {
        let root = uf.find(v);
        let idx = match class_of_root[root] {
            Some(i) => i,
            None => {
                classes.push(Vec::new());
                class_of_root[root] = Some(classes.len() - 1);
                classes.len() - 1
            }
        };
        classes[idx].push(v as u32);
    }
    classes
}

/// Alter-exponent, alter-perimeter and alter-sequence at a base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlterData {
    pub exponent: usize,
    pub perimeter: usize,
    pub sequence: Vec<usize>,
}

/// Computes the stabilisation point of the alter-equivalence tower and the
/// class sizes of `v` on the way up. For inputs that are not
/// vertex-transitive the sequence depends on the choice of `v`.
pub fn alter_invariants(d: &Digraph, v: u32) -> Result<AlterData> {
    if !d.is_asymmetric() {
        return Err(Error::NotAsymmetric);
    }
    if !d.is_connected() {
        return Err(Error::NotConnected);
    }
    let class_key = |classes: &[Vec<u32>]| {
        let mut key = vec![0u32; d.order()];
        for c in classes {
            let min = *c.iter().min().unwrap();
            for &w in c {
                key[w as usize] = min;
            }
        }
        key
    };
    let mut exponent = 0;
    let mut classes = alter_classes(d, 0);
    let mut sizes = Vec::new();
    loop {
        let next = alter_classes(d, exponent + 1);
        if class_key(&classes) == class_key(&next) {
            break;
        }
        exponent += 1;
        sizes.push(
            next.iter()
                .find(|c| c.contains(&v))
                .map(|c| c.len())
                .unwrap(),
        );
        classes = next;
        if exponent > d.order() {
            return Err(Error::Construction(
                "alter-equivalence failed to stabilise".into(),
            ));
        }
    }
    Ok(AlterData {
        exponent,
        perimeter: classes.len(),
        sequence: sizes,
    })
}

/// One orbit of consistent oriented cycles: a representative, its length,
/// whether the orbit is chiral, the orbit size, and a certifying rotation.
#[derive(Clone, Debug)]
pub struct ConsistentCycleOrbit {
    pub representative: Vec<u32>,
    pub length: usize,
    pub chiral: bool,
    pub orbit_size: usize,
    pub witness: Permutation,
}

/// The complete set of orbits of consistent oriented cycles of a graph
/// under a vertex-transitive group: cycles admitting a group element acting
/// on them as a one-step rotation.
pub fn consistent_cycles(
    gamma: &Digraph,
    group: &PermutationGroup,
    stabilizer_cap: u64,
) -> Result<Vec<ConsistentCycleOrbit>> {
    if !gamma.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !group.is_transitive() {
        return Err(Error::GroupArgument(
            "consistent cycles need a vertex-transitive group".into(),
        ));
    }
    let base = 0u32;
    let chain = StabChain::build(gamma.order(), group.generators(), &[base])?;
    let stab = PermutationGroup::from_generators(
        gamma.order(),
        chain.strong_generators_from_level(1),
    )?;
    let stab_elements = stab.elements_capped(stabilizer_cap)?;

    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut orbits: Vec<ConsistentCycleOrbit> = Vec::new();

    for &w in gamma.out_neighbors(base) {
        let (orbit_pts, _) = chain.level_orbit(0);
        if !orbit_pts.contains(&w) {
            continue;
        }
        let to_w = chain.level_transversal_element(0, w);
        for h in &stab_elements {
            let g = h.then(&to_w);
            debug_assert_eq!(g.apply(base), w);
            let Some(cycle) = trace_consistent_cycle(gamma, &g, base) else {
                continue;
            };
            let rep = normalize_rotation(&cycle);
            if seen.contains(&rep) {
                continue;
            }
            // Close the orbit under the group generators.
            let mut orbit_members: Vec<Vec<u32>> = vec![rep.clone()];
            let mut member_set: HashSet<Vec<u32>> = orbit_members.iter().cloned().collect();
            let mut cursor = 0;
            while cursor < orbit_members.len() {
                let current = orbit_members[cursor].clone();
                cursor += 1;
                for gen in group.generators() {
                    let image: Vec<u32> = current.iter().map(|&v| gen.apply(v)).collect();
                    let image = normalize_rotation(&image);
                    if member_set.insert(image.clone()) {
                        orbit_members.push(image);
                    }
                }
            }
            for m in &orbit_members {
                seen.insert(m.clone());
            }
            let inverse = normalize_rotation(&invert_cycle(&rep));
            let chiral = !member_set.contains(&inverse);
            orbits.push(ConsistentCycleOrbit {
                length: rep.len(),
                representative: rep,
                chiral,
                orbit_size: orbit_members.len(),
                witness: g,
            });
        }
    }
    orbits.sort_by(|a, b| {
        (a.length, a.chiral, &a.representative).cmp(&(b.length, b.chiral, &b.representative))
    });
    Ok(orbits)
}

/// Follows `base, base^g, base^{g^2}, ...`; returns the oriented cycle when
/// the trace closes simply with length at least 3.
fn trace_consistent_cycle(gamma: &Digraph, g: &Permutation, base: u32) -> Option<Vec<u32>> {
    let mut cycle = vec![base];
    let mut current = base;
    loop {
        let next = g.apply(current);
        if next == base {
            break;
        }
        if cycle.contains(&next) || cycle.len() > gamma.order() {
            return None;
        }
        cycle.push(next);
        current = next;
    }
    if cycle.len() < 3 {
        return None;
    }
    // Consecutive members must be adjacent (g is an automorphism, so this
    // holds as soon as base is adjacent to its image, and for the closure).
    debug_assert!(gamma.has_arc(*cycle.last().unwrap(), base));
    Some(cycle)
}

fn normalize_rotation(cycle: &[u32]) -> Vec<u32> {
    let min_pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap();
    let mut out = Vec::with_capacity(cycle.len());
    out.extend_from_slice(&cycle[min_pos..]);
    out.extend_from_slice(&cycle[..min_pos]);
    out
}

fn invert_cycle(cycle: &[u32]) -> Vec<u32> {
    let mut out = vec![cycle[0]];
    out.extend(cycle[1..].iter().rev());
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != cur {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
