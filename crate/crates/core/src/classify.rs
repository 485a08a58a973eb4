//! Transitivity classification: s-arc-transitivity level, vertex/edge/arc
//! transitivity, half-arc-transitivity, arc-orbit splitting, stabiliser
//! reports and Cayley typing.

use crate::canon::automorphism_group;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::perm::{
    overgroups_up_to, regular_subgroup_search, Permutation, PermutationGroup, RegularFlavor,
    RegularSearchOutcome,
};

/// Default cap on the s-arc-transitivity level probed by the census:
/// stabiliser orders are bounded by 32 = 2^5, so level 6 is never reached
/// by a non-wreath entry.
pub const DEFAULT_S_CAP: usize = 6;

fn check_is_automorphism_group(d: &Digraph, g: &PermutationGroup) -> Result<()> {
    if g.degree() != d.order() {
        return Err(Error::DegreeMismatch(g.degree(), d.order()));
    }
    for p in g.generators() {
        if !d.arcs().iter().all(|&(u, v)| d.has_arc(p.apply(u), p.apply(v))) {
            return Err(Error::GroupArgument(
                "group does not preserve the arc set".into(),
            ));
        }
    }
    Ok(())
}

/// The lexicographically least s-arc, if any.
fn first_s_arc(d: &Digraph, s: usize) -> Option<Vec<u32>> {
    fn extend(d: &Digraph, walk: &mut Vec<u32>, s: usize) -> bool {
        if walk.len() == s + 1 {
            return true;
        }
        let last = *walk.last().unwrap();
        let prev = walk.len().checked_sub(2).map(|i| walk[i]);
        for &w in d.out_neighbors(last) {
            if Some(w) == prev {
                continue;
            }
            walk.push(w);
            if extend(d, walk, s) {
                return true;
            }
            walk.pop();
        }
        false
    }
    for v in 0..d.order() as u32 {
        let mut walk = vec![v];
        if extend(d, &mut walk, s) {
            return Some(walk);
        }
    }
    None
}

/// The largest `s <= s_cap` such that the group acts transitively on the
/// s-arcs, with a flag marking saturation at the cap. Transitivity is
/// decided by comparing the orbit size of one s-arc (group order over
/// tuple-stabiliser order) with the total s-arc count; one stabiliser
/// chain along a maximal probe walk serves every level at once.
pub fn max_s_arc_transitivity(
    d: &Digraph,
    g: &PermutationGroup,
    s_cap: usize,
) -> Result<(usize, bool)> {
    check_is_automorphism_group(d, g)?;
    let order = g.order()?;
    let probe = match first_s_arc(d, s_cap) {
        Some(walk) => walk,
        // No walk reaches the cap; probe the longest extendable one.
        None => {
            let mut best = Vec::new();
            for s in (0..s_cap).rev() {
                if let Some(walk) = first_s_arc(d, s) {
                    best = walk;
                    break;
                }
            }
            best
        }
    };
    if probe.len() <= 1 {
        return Ok((0, false));
    }
    let chain = crate::perm::StabChain::build(g.degree(), g.generators(), &probe)?;
    let mut level = 0;
    for s in 1..=s_cap {
        if s + 1 > probe.len() {
            return Ok((level, false));
        }
        let total = d.s_arc_count(s)?;
        if total == 0 {
            return Ok((level, false));
        }
        let stab = chain.order_from_level(s + 1)?;
        let orbit = order / stab;
        debug_assert!(orbit <= total);
        if orbit != total {
            return Ok((level, false));
        }
        level = s;
    }
    Ok((level, true))
}

/// Vertex/edge/arc transitivity flags of a group action; half-arc-transitive
/// means vertex- and edge- but not arc-transitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransitivityFlags {
    pub vertex: bool,
    pub edge: bool,
    pub arc: bool,
    pub half_arc: bool,
}

pub fn transitivity_flags(x: &Digraph, g: &PermutationGroup) -> Result<TransitivityFlags> {
    check_is_automorphism_group(x, g)?;
    let vertex = g.is_transitive();
    let arc = orbit_count_on_pairs(g, x.arcs(), false) == 1;
    let underlying = x.underlying_graph()?;
    let edges: Vec<(u32, u32)> = underlying
        .arcs()
        .iter()
        .copied()
        .filter(|&(u, v)| u < v)
        .collect();
    let edge = orbit_count_on_pairs(g, &edges, true) == 1;
    Ok(TransitivityFlags {
        vertex,
        edge,
        arc,
        half_arc: vertex && edge && !arc,
    })
}

/// Orbit count of a group acting on a list of vertex pairs; with
/// `unordered` the pair is sorted after applying a generator.
fn orbit_count_on_pairs(g: &PermutationGroup, pairs: &[(u32, u32)], unordered: bool) -> usize {
    if pairs.is_empty() {
        return 0;
    }
    let index_of = |pair: (u32, u32)| pairs.binary_search(&pair).expect("image stays in set");
    let mut seen = vec![false; pairs.len()];
    let mut orbits = 0;
    for start in 0..pairs.len() {
        if seen[start] {
            continue;
        }
        orbits += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (u, v) = pairs[i];
            for gen in g.generators() {
                let (mut a, mut b) = (gen.apply(u), gen.apply(v));
                if unordered && a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                let j = index_of((a, b));
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    orbits
}

/// Classification of a connected graph under its full automorphism group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphClass {
    ArcTransitive,
    HalfArcTransitive,
    Other,
}

pub fn classify_graph(gamma: &Digraph) -> Result<GraphClass> {
    if !gamma.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !gamma.is_connected() {
        return Err(Error::NotConnected);
    }
    let aut = automorphism_group(gamma)?;
    let flags = transitivity_flags(gamma, &aut)?;
    Ok(if flags.arc && flags.vertex {
        GraphClass::ArcTransitive
    } else if flags.half_arc {
        GraphClass::HalfArcTransitive
    } else {
        GraphClass::Other
    })
}

/// Splits the arcs of a 4-valent graph into the two orbits of a
/// half-arc-transitively acting group, returning the two mutually opposite
/// 2-valent asymmetric orientations.
pub fn split_arc_orbits(gamma: &Digraph, g: &PermutationGroup) -> Result<(Digraph, Digraph)> {
    if !gamma.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !gamma.is_connected() {
        return Err(Error::NotConnected);
    }
    if !gamma.is_regular_of_valence(4) {
        return Err(Error::NotRegular { expected: 4 });
    }
    let flags = transitivity_flags(gamma, g)?;
    if !flags.half_arc {
        return Err(Error::GroupArgument(if flags.arc {
            "group is arc-transitive: the arc set does not split".into()
        } else {
            "group is not vertex- and edge-transitive".into()
        }));
    }
    // Orbit of the least arc.
    let arcs = gamma.arcs();
    let mut in_first = vec![false; arcs.len()];
    in_first[0] = true;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        let (u, v) = arcs[i];
        for gen in g.generators() {
            let j = arcs
                .binary_search(&(gen.apply(u), gen.apply(v)))
                .expect("automorphism");
            if !in_first[j] {
                in_first[j] = true;
                stack.push(j);
            }
        }
    }
    let first: Vec<(u32, u32)> = arcs
        .iter()
        .copied()
        .enumerate()
        .filter(|&(i, _)| in_first[i])
        .map(|(_, a)| a)
        .collect();
    let second: Vec<(u32, u32)> = arcs
        .iter()
        .copied()
        .enumerate()
        .filter(|&(i, _)| !in_first[i])
        .map(|(_, a)| a)
        .collect();
    let d = Digraph::from_arcs(gamma.order(), &first)?;
    let opp = Digraph::from_arcs(gamma.order(), &second)?;
    debug_assert_eq!(d.opposite(), opp);
    debug_assert_eq!(&d.underlying_graph()?, gamma);
    debug_assert!(d.is_asymmetric());
    Ok((d, opp))
}

/// Stabiliser data of a verified 2-valent arc-transitive asymmetric digraph.
#[derive(Clone, Debug)]
pub struct StabilizerReport {
    pub stab_order: u128,
    pub stab_abelian: bool,
    pub aut_solvable: bool,
    /// Index of Aut(D) in the automorphism group of the underlying graph.
    pub index_in_graph_aut: u128,
    /// Index of Aut(D) in the smallest arc-transitive overgroup inside the
    /// graph's automorphism group; 0 when no such overgroup exists.
    pub index_to_smallest_at_overgroup: u128,
}

/// Checks the digraph is a 2-valent arc-transitive asymmetric connected
/// digraph and reports its stabiliser data.
pub fn stabilizer_report(d: &Digraph, overgroup_cap: u64) -> Result<StabilizerReport> {
    let aut = automorphism_group(d)?;
    verify_two_atd_with_group(d, &aut)?;
    let n = d.order() as u128;
    let order = aut.order()?;
    let stab_order = order / n;
    debug_assert!(stab_order.is_power_of_two());
    let stab = aut.point_stabilizer(0)?;
    let stab_abelian = stab.is_abelian();
    let aut_solvable = aut.is_solvable()?;

    let underlying = d.underlying_graph()?;
    let graph_aut = automorphism_group(&underlying)?;
    let graph_order = graph_aut.order()?;
    let index_in_graph_aut = graph_order / order;

    let mut best: Option<u128> = None;
    for t in overgroups_up_to(&graph_aut, &aut, overgroup_cap)? {
        let t_order = t.order()?;
        if t_order == order {
            continue; // Aut(D) itself preserves the orientation.
        }
        if orbit_count_on_pairs(&t, underlying.arcs(), false) == 1 {
            let index = t_order / order;
            if best.is_none_or(|b| index < b) {
                best = Some(index);
            }
        }
    }
    Ok(StabilizerReport {
        stab_order,
        stab_abelian,
        aut_solvable,
        index_in_graph_aut,
        index_to_smallest_at_overgroup: best.unwrap_or(0),
    })
}

/// Connected + asymmetric + 2-valent regular + arc-transitive, under the
/// supplied automorphism group.
pub fn verify_two_atd_with_group(d: &Digraph, aut: &PermutationGroup) -> Result<()> {
    if !d.is_connected() {
        return Err(Error::NotConnected);
    }
    if !d.is_asymmetric() {
        return Err(Error::NotAsymmetric);
    }
    if !d.is_regular_of_valence(2) {
        return Err(Error::NotRegular { expected: 2 });
    }
    if orbit_count_on_pairs(aut, d.arcs(), false) != 1 {
        return Err(Error::GroupArgument("digraph is not arc-transitive".into()));
    }
    Ok(())
}

/// Cayley typing of a vertex-transitive graph, refined along the tiers
/// circulant / abelian Cayley / Cayley / non-Cayley; `Unknown` when a search
/// budget ran out before the relevant tier was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CayleyType {
    Circulant,
    AbelianCayley,
    Cayley,
    NonCayley,
    Unknown,
}

pub fn cayley_type(gamma: &Digraph, budget: u64) -> Result<CayleyType> {
    if !gamma.is_connected() {
        return Err(Error::NotConnected);
    }
    let aut = automorphism_group(gamma)?;
    if !aut.is_transitive() {
        return Err(Error::GroupArgument(
            "Cayley typing requires a vertex-transitive graph".into(),
        ));
    }
    let tiers = [
        (RegularFlavor::Cyclic, CayleyType::Circulant),
        (RegularFlavor::Abelian, CayleyType::AbelianCayley),
        (RegularFlavor::Any, CayleyType::Cayley),
    ];
    for (flavor, answer) in tiers {
        match regular_subgroup_search(&aut, flavor, budget)? {
            RegularSearchOutcome::Found(_) => return Ok(answer),
            RegularSearchOutcome::None => {}
            RegularSearchOutcome::Unknown => return Ok(CayleyType::Unknown),
        }
    }
    Ok(CayleyType::NonCayley)
}

/// Vertex-stabiliser orders of the maximal orientation-preserving groups of
/// a 4-valent graph, one per orientation pair up to conjugacy in the
/// graph's automorphism group. `orientations` must all have `gamma` as
/// their literal underlying graph; the `family_complete` flag is passed
/// through to the output.
pub struct HatStabOrders {
    pub orders: Vec<u128>,
    pub complete: bool,
}

pub fn maximal_hat_stab_orders(
    gamma: &Digraph,
    orientations: &[Digraph],
    family_complete: bool,
    element_cap: u64,
) -> Result<HatStabOrders> {
    for d in orientations {
        if &d.underlying_graph()? != gamma {
            return Err(Error::Construction(
                "orientation does not lie on the given underlying graph".into(),
            ));
        }
    }
    let graph_aut = automorphism_group(gamma)?;
    let elements = graph_aut.elements_capped(element_cap)?;

    let mut classes: Vec<&Digraph> = Vec::new();
    'outer: for d in orientations {
        for rep in &classes {
            if conjugate_orientations(d, rep, &elements) {
                continue 'outer;
            }
        }
        classes.push(d);
    }
    let n = gamma.order() as u128;
    let mut orders: Vec<u128> = classes
        .iter()
        .map(|d| Ok(automorphism_group(d)?.order()? / n))
        .collect::<Result<_>>()?;
    orders.sort_unstable();
    Ok(HatStabOrders {
        orders,
        complete: family_complete,
    })
}

/// True when a listed graph automorphism maps the arc set of `a` onto the
/// arc set of `b` or of its opposite.
fn conjugate_orientations(a: &Digraph, b: &Digraph, elements: &[Permutation]) -> bool {
    let b_opp = b.opposite();
    for alpha in elements {
        let image = a.relabel(alpha.images()).unwrap();
        if &image == b || image == b_opp {
            return true;
        }
    }
    false
}

/// Index-2 descent: half-arc-transitive subgroups reachable from the full
/// automorphism group by repeatedly passing to index-2 subgroups. May miss
/// maximal groups of larger index, so the result is flagged incomplete.
pub fn hat_stab_orders_by_descent(gamma: &Digraph, depth: usize) -> Result<HatStabOrders> {
    if !gamma.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let aut = automorphism_group(gamma)?;
    let mut layer = vec![aut];
    let mut orientations: Vec<Digraph> = Vec::new();
    let n = gamma.order() as u128;
    for _ in 0..depth {
        let mut next = Vec::new();
        for g in &layer {
            for k in index_two_subgroups(g)? {
                let flags = transitivity_flags(gamma, &k)?;
                if flags.half_arc {
                    let (d, _) = split_arc_orbits(gamma, &k)?;
                    if !orientations.contains(&d) && !orientations.contains(&d.opposite()) {
                        orientations.push(d);
                    }
                }
                if flags.vertex && flags.edge {
                    next.push(k);
                }
            }
        }
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    let mut orders: Vec<u128> = Vec::new();
    for d in &orientations {
        orders.push(automorphism_group(d)?.order()? / n);
    }
    orders.sort_unstable();
    Ok(HatStabOrders {
        orders,
        complete: false,
    })
}

/// All index-2 subgroups, via sign assignments on the generators that
/// extend to homomorphisms onto the 2-element group.
fn index_two_subgroups(g: &PermutationGroup) -> Result<Vec<PermutationGroup>> {
    let gens = g.generators();
    let k = gens.len();
    if k == 0 || k > 20 {
        return Ok(Vec::new());
    }
    let order = g.order()?;
    let mut out: Vec<PermutationGroup> = Vec::new();
    for mask in 1u32..(1 << k) {
        let negative: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let y = &gens[negative[0]];
        let mut sub_gens: Vec<Permutation> = Vec::new();
        for (i, gen) in gens.iter().enumerate() {
            if mask & (1 << i) == 0 {
                sub_gens.push(gen.clone());
                sub_gens.push(gen.conjugate_by(y));
            } else {
                sub_gens.push(gen.then(&y.inverse()));
                sub_gens.push(y.then(gen));
            }
        }
        let candidate = PermutationGroup::from_generators(g.degree(), sub_gens)?;
        if candidate.order()? * 2 != order || candidate.contains(y) {
            continue;
        }
        if !out.iter().any(|existing| candidate.is_subgroup_of(existing)) {
            out.push(candidate);
        }
    }
    Ok(out)
}
