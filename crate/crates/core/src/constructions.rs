//! Constructive families: wreath digraphs, partial line digraphs,
//! generalised wreath digraphs and their catalogue, coset digraphs, and
//! shunt recovery.

use crate::digraph::{Digraph, DEFAULT_SARC_CAP};
use crate::error::{Error, Result};
use crate::perm::{core_info, coset_action, Permutation, PermutationGroup, StabChain};

/// Parameters of a generalised wreath digraph: cycle length `n >= 3` and
/// depth `1 <= r <= n-1`; it has `n * 2^r` vertices and is arc-transitive
/// iff `n >= r + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GwParams {
    pub n: u32,
    pub r: u32,
}

impl GwParams {
    pub fn new(n: u32, r: u32) -> Result<GwParams> {
        if n < 3 || r < 1 || r > n - 1 {
            return Err(Error::Construction(format!(
                "generalised wreath parameters need n >= 3 and 1 <= r <= n-1, got ({n}, {r})"
            )));
        }
        Ok(GwParams { n, r })
    }

    pub fn vertex_count(&self) -> u64 {
        self.n as u64 * (1u64 << self.r)
    }

    pub fn is_arc_transitive(&self) -> bool {
        self.n > self.r
    }
}

/// The wreath digraph on `Z_n x Z_2`: every vertex of a layer sends arcs to
/// both vertices of the next layer. Vertex `(i, a)` is encoded as `2i + a`.
pub fn wreath(n: u32) -> Result<Digraph> {
    if n < 3 {
        return Err(Error::Construction(format!(
            "wreath digraph needs n >= 3, got {n}"
        )));
    }
    let mut arcs = Vec::with_capacity(4 * n as usize);
    for i in 0..n {
        let next = (i + 1) % n;
        for a in 0..2 {
            for b in 0..2 {
                arcs.push((2 * i + a, 2 * next + b));
            }
        }
    }
    Digraph::from_arcs(2 * n as usize, &arcs)
}

/// The r-th partial line digraph: vertices are the r-arcs in lexicographic
/// order, arcs join each r-arc to its successors. `r = 0` returns the
/// digraph itself.
pub fn partial_line(d: &Digraph, r: usize) -> Result<Digraph> {
    if r == 0 {
        return Ok(d.clone());
    }
    let mut walks = d.s_arcs(r, DEFAULT_SARC_CAP)?;
    walks.sort_unstable();
    let index_of = |w: &[u32]| walks.binary_search_by(|probe| probe.as_slice().cmp(w)).ok();
    let mut arcs = Vec::new();
    for (i, w) in walks.iter().enumerate() {
        let last = *w.last().unwrap();
        let before_last = w[w.len() - 2];
        for &succ in d.out_neighbors(last) {
            if succ == before_last {
                continue;
            }
            let mut next = w[1..].to_vec();
            next.push(succ);
            let j = index_of(&next).expect("successor is an r-arc");
            arcs.push((i as u32, j as u32));
        }
    }
    Digraph::from_arcs(walks.len(), &arcs)
}

/// The generalised wreath digraph with the given parameters.
pub fn generalised_wreath(n: u32, r: u32) -> Result<Digraph> {
    let params = GwParams::new(n, r)?;
    let base = wreath(params.n)?;
    if params.r == 1 {
        return Ok(base);
    }
    partial_line(&base, params.r as usize - 1)
}

/// Above this vertex count the catalogue describes members by parameters
/// only instead of materialising them.
pub const GW_MATERIALIZE_LIMIT: u64 = 100_000;

/// All arc-transitive generalised wreath digraphs on at most `max_order`
/// vertices, sorted by (vertex count, n, r). Digraphs larger than
/// [`GW_MATERIALIZE_LIMIT`] are left unconstructed.
pub fn gw_catalogue(max_order: u64) -> Result<Vec<(GwParams, Option<Digraph>)>> {
    if max_order < 6 {
        return Err(Error::Construction(
            "catalogue bound must be at least 6".into(),
        ));
    }
    let mut params = Vec::new();
    for r in 1u32.. {
        let smallest = (r + 1).max(3) as u64 * (1u64 << r);
        if smallest > max_order {
            break;
        }
        for n in (r + 1).max(3).. {
            let p = GwParams::new(n, r)?;
            if p.vertex_count() > max_order {
                break;
            }
            debug_assert!(p.is_arc_transitive());
            params.push(p);
        }
    }
    params.sort_by_key(|p| (p.vertex_count(), p.n, p.r));
    params
        .into_iter()
        .map(|p| {
            let d = if p.vertex_count() <= GW_MATERIALIZE_LIMIT {
                let digraph = generalised_wreath(p.n, p.r)?;
                debug_assert_eq!(digraph.order() as u64, p.vertex_count());
                Some(digraph)
            } else {
                None
            };
            Ok((p, d))
        })
        .collect()
}

/// Input to the coset digraph construction: a group, generators of a
/// subgroup, and a shunt element.
#[derive(Clone, Debug)]
pub struct CosetSpec {
    pub group: PermutationGroup,
    pub subgroup_gens: Vec<Permutation>,
    pub shunt: Permutation,
}

/// Builds the digraph on the right cosets of the subgroup with arcs given
/// by the double coset of the shunt. Validates connectedness
/// (`<H, g> = G`), core-freeness of `H`, and asymmetry
/// (`g^-1` outside `HgH`). Returns the digraph together with one coset
/// representative per vertex.
pub fn coset_digraph(spec: &CosetSpec, index_cap: u64) -> Result<(Digraph, Vec<Permutation>)> {
    let g = &spec.group;
    let degree = g.degree();
    let subgroup = PermutationGroup::from_generators(degree, spec.subgroup_gens.clone())?;
    if !subgroup.is_subgroup_of(g) || !g.contains(&spec.shunt) {
        return Err(Error::GroupArgument(
            "subgroup generators and shunt must lie in the group".into(),
        ));
    }

    // <H, g> = G (connectedness).
    let mut span_gens = spec.subgroup_gens.clone();
    span_gens.push(spec.shunt.clone());
    let span = PermutationGroup::from_generators(degree, span_gens)?;
    if span.order()? != g.order()? {
        return Err(Error::GroupArgument(
            "subgroup and shunt do not generate the group".into(),
        ));
    }

    let (_, core_free) = core_info(g, &subgroup, index_cap)?;
    if !core_free {
        return Err(Error::GroupArgument(
            "subgroup has a non-trivial core".into(),
        ));
    }

    let action = coset_action(g, &subgroup, index_cap)?;
    let index = action.index();

    // The cosets {H g h : h in H} are the closure of Hg under right
    // multiplication by the subgroup generators; no element enumeration.
    let shunt_coset = action
        .coset_index(&spec.shunt)
        .expect("shunt lies in the group");
    let mut double_coset = vec![shunt_coset];
    let mut cursor = 0;
    while cursor < double_coset.len() {
        let i = double_coset[cursor];
        cursor += 1;
        for h in subgroup.generators() {
            let j = action
                .coset_index(&action.transversal()[i].then(h))
                .expect("closed under the subgroup");
            if !double_coset.contains(&j) {
                double_coset.push(j);
            }
        }
    }
    // g^-1 in HgH iff the coset of g^-1 is one of them.
    let inverse_coset = action
        .coset_index(&spec.shunt.inverse())
        .expect("inverse lies in the group");
    if double_coset.contains(&inverse_coset) {
        return Err(Error::GroupArgument(
            "the inverse of the shunt lies in its double coset".into(),
        ));
    }

    let mut arcs = Vec::new();
    for (i, rep) in action.transversal().iter().enumerate() {
        for &s in &double_coset {
            let z = action.transversal()[s].then(rep);
            let j = action
                .coset_index(&z)
                .expect("product stays in the coset space");
            arcs.push((i as u32, j as u32));
        }
    }
    let digraph = Digraph::from_arcs(index, &arcs)?;
    debug_assert!(digraph.is_connected());
    debug_assert!(digraph.is_asymmetric());
    Ok((digraph, action.transversal().to_vec()))
}

/// Finds an element of the group mapping `v` to one of its out-neighbors,
/// checking the group consists of automorphisms and the shunt order does
/// not exceed the digraph order.
pub fn shunt_recover(d: &Digraph, group: &PermutationGroup, v: u32) -> Result<Permutation> {
    if group.degree() != d.order() {
        return Err(Error::DegreeMismatch(group.degree(), d.order()));
    }
    for p in group.generators() {
        if !d.arcs().iter().all(|&(a, b)| d.has_arc(p.apply(a), p.apply(b))) {
            return Err(Error::GroupArgument(
                "group is not a group of automorphisms of the digraph".into(),
            ));
        }
    }
    let chain = StabChain::build(d.order(), group.generators(), &[v])?;
    for &w in d.out_neighbors(v) {
        let (orbit, _) = chain.level_orbit(0);
        if orbit.contains(&w) {
            let g = chain.level_transversal_element(0, w);
            let order = g
                .order_capped(d.order() as u64)
                .ok_or_else(|| Error::Construction("shunt order exceeds digraph order".into()))?;
            debug_assert!(order <= d.order() as u64);
            return Ok(g);
        }
    }
    Err(Error::Construction(format!(
        "no group element maps {v} to an out-neighbor"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{are_isomorphic, automorphism_group};

    #[test]
    fn wreath_basics() {
        let w3 = wreath(3).unwrap();
        assert_eq!(w3.order(), 6);
        assert_eq!(w3.arc_count(), 12);
        assert!(w3.is_asymmetric());
        assert!(w3.is_connected());
        assert!(w3.is_regular_of_valence(2));
        assert!(wreath(4).unwrap().is_regular_of_valence(2));
        assert!(wreath(2).is_err());
    }

    #[test]
    fn wreath_underlying_graph_of_w3_is_octahedron() {
        // The complete tripartite graph on pairs {0,1},{2,3},{4,5}.
        let mut arcs = Vec::new();
        for u in 0..6u32 {
            for v in 0..6u32 {
                if u != v && u / 2 != v / 2 {
                    arcs.push((u, v));
                }
            }
        }
        let octahedron = Digraph::from_arcs(6, &arcs).unwrap();
        let under = wreath(3).unwrap().underlying_graph().unwrap();
        assert_eq!(under.edge_count().unwrap(), 12);
        assert!(are_isomorphic(&under, &octahedron).unwrap());
    }

    #[test]
    fn partial_line_zero_is_identity() {
        let w3 = wreath(3).unwrap();
        assert_eq!(partial_line(&w3, 0).unwrap(), w3);
    }

    #[test]
    fn partial_line_vertex_counts() {
        let w3 = wreath(3).unwrap();
        let pl = partial_line(&w3, 1).unwrap();
        assert_eq!(pl.order(), 12);
        // Directed triangle is its own line digraph.
        let c3 = Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(are_isomorphic(&partial_line(&c3, 1).unwrap(), &c3).unwrap());
    }

    #[test]
    fn partial_line_telescopes() {
        let w3 = wreath(3).unwrap();
        let two_step = partial_line(&w3, 2).unwrap();
        let iterated = partial_line(&partial_line(&w3, 1).unwrap(), 1).unwrap();
        assert!(are_isomorphic(&two_step, &iterated).unwrap());
    }

    #[test]
    fn generalised_wreath_parameters() {
        assert!(are_isomorphic(&generalised_wreath(3, 1).unwrap(), &wreath(3).unwrap()).unwrap());
        assert_eq!(generalised_wreath(3, 2).unwrap().order(), 12);
        assert!(generalised_wreath(3, 3).is_err());
    }

    #[test]
    fn gw_catalogue_small_counts() {
        let ten = gw_catalogue(10).unwrap();
        let params: Vec<(u32, u32)> = ten.iter().map(|(p, _)| (p.n, p.r)).collect();
        assert_eq!(params, vec![(3, 1), (4, 1), (5, 1)]);
        let six = gw_catalogue(6).unwrap();
        assert_eq!(six.len(), 1);
        assert_eq!((six[0].0.n, six[0].0.r), (3, 1));
    }

    #[test]
    fn gw_catalogue_members_are_valid() {
        for (p, d) in gw_catalogue(64).unwrap() {
            let d = d.unwrap();
            assert_eq!(d.order() as u64, p.vertex_count());
            assert!(d.is_regular_of_valence(2));
            assert!(d.is_connected());
            assert!(d.is_asymmetric());
        }
    }

    #[test]
    fn coset_digraph_of_cyclic_rotation() {
        let rot = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let g = PermutationGroup::from_generators(3, vec![rot.clone()]).unwrap();
        let spec = CosetSpec {
            group: g,
            subgroup_gens: vec![],
            shunt: rot,
        };
        let (d, labels) = coset_digraph(&spec, 1000).unwrap();
        assert_eq!(d.order(), 3);
        assert_eq!(labels.len(), 3);
        let triangle = Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(are_isomorphic(&d, &triangle).unwrap());
    }

    #[test]
    fn coset_digraph_rejects_involution_shunt() {
        let s3 = PermutationGroup::from_generators(
            3,
            vec![
                Permutation::from_cycles(3, &[vec![0, 1]]).unwrap(),
                Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap(),
            ],
        )
        .unwrap();
        let spec = CosetSpec {
            group: s3.clone(),
            subgroup_gens: vec![],
            shunt: Permutation::from_cycles(3, &[vec![0, 1]]).unwrap(),
        };
        assert!(coset_digraph(&spec, 1000).is_err());
    }

    #[test]
    fn coset_digraph_round_trip_through_wreath() {
        let w3 = wreath(3).unwrap();
        let aut = automorphism_group(&w3).unwrap();
        assert_eq!(aut.order().unwrap(), 24);
        let stab = aut.point_stabilizer(0).unwrap();
        assert_eq!(stab.order().unwrap(), 4);
        let shunt = shunt_recover(&w3, &aut, 0).unwrap();
        let spec = CosetSpec {
            group: aut,
            subgroup_gens: stab.generators().to_vec(),
            shunt,
        };
        let (d, _) = coset_digraph(&spec, 1000).unwrap();
        assert!(are_isomorphic(&d, &w3).unwrap());
    }

    #[test]
    fn coset_digraph_action_embeds_in_automorphisms() {
        let w4 = wreath(4).unwrap();
        let aut = automorphism_group(&w4).unwrap();
        let stab = aut.point_stabilizer(0).unwrap();
        let shunt = shunt_recover(&w4, &aut, 0).unwrap();
        let spec = CosetSpec {
            group: aut.clone(),
            subgroup_gens: stab.generators().to_vec(),
            shunt,
        };
        let (d, _) = coset_digraph(&spec, 1000).unwrap();
        // Out-valence |HgH|/|H| = 2 and the right action preserves arcs.
        assert!(d.is_regular_of_valence(2));
        let action = crate::perm::coset_action(&aut, &stab, 1000).unwrap();
        for gen in aut.generators() {
            let perm = action.act(gen).unwrap();
            for &(u, v) in d.arcs() {
                assert!(d.has_arc(perm.apply(u), perm.apply(v)));
            }
        }
    }

    #[test]
    fn shunt_recovery_on_directed_cycle() {
        let c5 = Digraph::from_arcs(5, &(0..5u32).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>())
            .unwrap();
        let rot = Permutation::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        let g = PermutationGroup::from_generators(5, vec![rot.clone()]).unwrap();
        assert_eq!(shunt_recover(&c5, &g, 0).unwrap(), rot);
        // Trivial group has no shunt.
        assert!(shunt_recover(&c5, &PermutationGroup::trivial(5), 0).is_err());
    }

    #[test]
    fn shunt_order_is_bounded_for_wreath() {
        let w3 = wreath(3).unwrap();
        let aut = automorphism_group(&w3).unwrap();
        for v in 0..6 {
            let g = shunt_recover(&w3, &aut, v).unwrap();
            assert!(w3.out_neighbors(v).contains(&g.apply(v)));
            assert!(g.order_capped(6).is_some());
        }
    }
}
