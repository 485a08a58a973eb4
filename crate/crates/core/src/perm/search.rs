use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::perm::{PermutationGroup, Permutation, StabChain};

/// Default cap on coset-space sizes.
pub const DEFAULT_COSET_INDEX_CAP: u64 = 100_000;
/// Default cap on the index of an overgroup enumeration.
pub const DEFAULT_OVERGROUP_INDEX_CAP: u64 = 1024;
/// Default node budget for the regular-subgroup search.
pub const DEFAULT_REGULAR_SEARCH_BUDGET: u64 = 1_000_000;

/// The right-multiplication action of a group on the right cosets of a
/// subgroup. Coset 0 is the subgroup itself; `transversal[0]` is the
/// identity. Every coset is keyed by its canonical representative (the
/// lexicographically least image vector in the coset).
pub struct CosetAction {
    index: usize,
    transversal: Vec<Permutation>,
    lookup: HashMap<Permutation, usize>,
    subgroup_chain: StabChain,
}

impl CosetAction {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn transversal(&self) -> &[Permutation] {
        &self.transversal
    }

    /// Index of the coset containing `elem`, if it lies in the coset space.
    pub fn coset_index(&self, elem: &Permutation) -> Option<usize> {
        let canon = min_coset_rep(&self.subgroup_chain, elem);
        self.lookup.get(&canon).copied()
    }

    /// The permutation induced on cosets by right multiplication with `g`.
    pub fn act(&self, g: &Permutation) -> Result<Permutation> {
        let mut images = Vec::with_capacity(self.index);
        for rep in &self.transversal {
            let canon = min_coset_rep(&self.subgroup_chain, &rep.then(g));
            let idx = self
                .lookup
                .get(&canon)
                .copied()
                .ok_or_else(|| Error::GroupArgument("element leaves the coset space".into()))?;
            images.push(idx as u32);
        }
        Permutation::from_images(images)
    }
}

/// Canonical representative of the coset `H * x`: the element with the
/// lexicographically least image vector. `chain` must be a chain for `H`
/// whose base is the full domain `0..degree` in order.
fn min_coset_rep(chain: &StabChain, x: &Permutation) -> Permutation {
    let mut rep = x.clone();
    for level in 0..chain.level_count() {
        let (orbit, _) = chain.level_orbit(level);
        if orbit.len() == 1 {
            continue;
        }
        let mut best = orbit[0];
        let mut best_img = rep.apply(orbit[0]);
        for &o in &orbit[1..] {
            let img = rep.apply(o);
            if img < best_img {
                best = o;
                best_img = img;
            }
        }
        let t = chain.level_transversal_element(level, best);
        rep = t.then(&rep);
    }
    rep
}

/// Builds the coset action of `group` on the right cosets of `subgroup`.
pub fn coset_action(
    group: &PermutationGroup,
    subgroup: &PermutationGroup,
    cap: u64,
) -> Result<CosetAction> {
    if !subgroup.is_subgroup_of(group) {
        return Err(Error::GroupArgument(
            "subgroup generators are not members of the group".into(),
        ));
    }
    let degree = group.degree();
    let full_base: Vec<u32> = (0..degree as u32).collect();
    let subgroup_chain = StabChain::build(degree, subgroup.generators(), &full_base)?;

    let identity = Permutation::identity(degree);
    let mut transversal = vec![identity.clone()];
    let mut lookup = HashMap::new();
    lookup.insert(min_coset_rep(&subgroup_chain, &identity), 0usize);

    let mut cursor = 0;
    while cursor < transversal.len() {
        let rep = transversal[cursor].clone();
        cursor += 1;
        for g in group.generators() {
            let z = rep.then(g);
            let canon = min_coset_rep(&subgroup_chain, &z);
            if !lookup.contains_key(&canon) {
                if transversal.len() as u64 >= cap {
                    return Err(Error::CapExceeded {
                        what: "coset action index",
                        cap,
                    });
                }
                lookup.insert(canon.clone(), transversal.len());
                transversal.push(canon);
            }
        }
    }

    let index = transversal.len();
    debug_assert_eq!(
        group.order()?,
        index as u128 * subgroup.order()?,
        "Lagrange: |G| = |G:H| * |H|"
    );
    Ok(CosetAction {
        index,
        transversal,
        lookup,
        subgroup_chain,
    })
}

/// Order of the core of `subgroup` in `group` (the largest normal subgroup
/// of `group` contained in `subgroup`), and whether it is trivial.
pub fn core_info(
    group: &PermutationGroup,
    subgroup: &PermutationGroup,
    cap: u64,
) -> Result<(u128, bool)> {
    let action = coset_action(group, subgroup, cap)?;
    let image_gens: Vec<Permutation> = group
        .generators()
        .iter()
        .map(|g| action.act(g))
        .collect::<Result<_>>()?;
    let image = PermutationGroup::from_generators(action.index(), image_gens)?;
    let order = group.order()?;
    let image_order = image.order()?;
    debug_assert_eq!(order % image_order, 0);
    let core_order = order / image_order;
    Ok((core_order, core_order == 1))
}

/// Generators of the core of `subgroup` in `group`, via the kernel of the
/// coset action.
pub fn core_subgroup(
    group: &PermutationGroup,
    subgroup: &PermutationGroup,
    cap: u64,
) -> Result<PermutationGroup> {
    let action = coset_action(group, subgroup, cap)?;
    let degree = group.degree();
    let combined_degree = degree + action.index();
    // Combined permutations: original action on 0..degree, coset action above.
    let mut combined = Vec::new();
    for g in group.generators() {
        let act = action.act(g)?;
        let mut images: Vec<u32> = g.images().to_vec();
        images.extend(act.images().iter().map(|&i| i + degree as u32));
        combined.push(Permutation::from_images(images)?);
    }
    let coset_points: Vec<u32> = (degree as u32..combined_degree as u32).collect();
    let chain = StabChain::build(combined_degree, &combined, &coset_points)?;
    let kernel_gens: Vec<Permutation> = chain
        .strong_generators_from_level(coset_points.len())
        .into_iter()
        .map(|g| {
            Permutation::from_images(g.images()[..degree].to_vec()).expect("restriction is a permutation")
        })
        .collect();
    PermutationGroup::from_generators(degree, kernel_gens)
}

/// All subgroups of `ambient` containing `group`, found by closing with
/// coset representatives. Includes both endpoints.
pub fn overgroups_up_to(
    ambient: &PermutationGroup,
    group: &PermutationGroup,
    index_cap: u64,
) -> Result<Vec<PermutationGroup>> {
    let action = coset_action(ambient, group, index_cap)?;
    let reps: Vec<Permutation> = action.transversal()[1..].to_vec();
    let mut found: Vec<PermutationGroup> = vec![group.clone()];
    let mut orders: Vec<u128> = vec![group.order()?];
    let mut cursor = 0;
    while cursor < found.len() {
        for r in &reps {
            if found[cursor].contains(r) {
                continue;
            }
            let mut gens = found[cursor].generators().to_vec();
            gens.push(r.clone());
            let candidate = PermutationGroup::from_generators(ambient.degree(), gens)?;
            let order = candidate.order()?;
            let duplicate = found
                .iter()
                .zip(&orders)
                .any(|(k, &o)| o == order && candidate.is_subgroup_of(k));
            if !duplicate {
                found.push(candidate);
                orders.push(order);
            }
        }
        cursor += 1;
    }
    Ok(found)
}

/// Requested shape of a regular subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularFlavor {
    Cyclic,
    Abelian,
    Any,
}

/// Outcome of a regular-subgroup search: a witness, a completed search with
/// no witness, or an exhausted budget.
#[derive(Debug)]
pub enum RegularSearchOutcome {
    Found(PermutationGroup),
    None,
    Unknown,
}

/// Searches for a regular subgroup of a transitive group, of the requested
/// flavor, by backtracking over the elements extending the subgroup towards
/// the smallest uncovered point. `budget` bounds the number of candidate
/// elements examined.
pub fn regular_subgroup_search(
    group: &PermutationGroup,
    flavor: RegularFlavor,
    budget: u64,
) -> Result<RegularSearchOutcome> {
    let n = group.degree();
    if n == 0 || !group.is_transitive() {
        return Err(Error::GroupArgument(
            "regular subgroup search requires a transitive group".into(),
        ));
    }
    if n == 1 {
        return Ok(RegularSearchOutcome::Found(PermutationGroup::trivial(1)));
    }

    let chain0 = StabChain::build(n, group.generators(), &[0])?;
    let stab0 = PermutationGroup::from_generators(n, chain0.strong_generators_from_level(1))?;
    let stab_elements = match stab0.elements_capped(budget) {
        Ok(e) => e,
        Err(_) => return Ok(RegularSearchOutcome::Unknown),
    };
    // Transversal element mapping 0 to each point.
    let mut to_point: Vec<Option<Permutation>> = vec![None; n];
    for (p, t) in chain0.top_transversal() {
        to_point[p as usize] = Some(t);
    }

    struct Ctx<'a> {
        n: usize,
        flavor: RegularFlavor,
        stab_elements: &'a [Permutation],
        to_point: &'a [Option<Permutation>],
        budget: u64,
        used: u64,
    }

    fn extend(ctx: &mut Ctx, gens: &[Permutation]) -> Result<RegularSearchOutcome> {
        let current = PermutationGroup::from_generators(ctx.n, gens.to_vec())?;
        let orbit = current.orbit_of(0);
        if orbit.len() == ctx.n {
            let order = current.order()?;
            if order != ctx.n as u128 {
                return Ok(RegularSearchOutcome::None);
            }
            let ok = match ctx.flavor {
                RegularFlavor::Any => true,
                RegularFlavor::Abelian => current.is_abelian(),
                RegularFlavor::Cyclic => current
                    .elements_capped(ctx.n as u64)?
                    .iter()
                    .any(|e| e.cycles().len() == 1 && e.cycles()[0].len() == ctx.n),
            };
            return Ok(if ok {
                RegularSearchOutcome::Found(current)
            } else {
                RegularSearchOutcome::None
            });
        }
        let mut covered = vec![false; ctx.n];
        for &p in &orbit {
            covered[p as usize] = true;
        }
        let target = (0..ctx.n as u32).find(|&p| !covered[p as usize]).unwrap();
        let t = ctx.to_point[target as usize].clone().unwrap();

        let mut exhausted = true;
        for h in ctx.stab_elements {
            if ctx.used >= ctx.budget {
                return Ok(RegularSearchOutcome::Unknown);
            }
            ctx.used += 1;
            let cand = h.then(&t);
            // Elements of a regular group are semiregular with cycle length
            // dividing the degree.
            if !cand.is_semiregular() {
                continue;
            }
            let clen = cand.cycles()[0].len();
            if !ctx.n.is_multiple_of(clen) {
                continue;
            }
            if matches!(ctx.flavor, RegularFlavor::Abelian | RegularFlavor::Cyclic)
                && gens.iter().any(|g| g.then(&cand) != cand.then(g))
            {
                continue;
            }
            let mut next = gens.to_vec();
            next.push(cand);
            let extended = PermutationGroup::from_generators(ctx.n, next.clone())?;
            let order = extended.order()?;
            if order > ctx.n as u128 || !(ctx.n as u128).is_multiple_of(order) {
                continue;
            }
            if extended.tuple_stabilizer_order(&[0])? != 1 {
                continue;
            }
            match extend(ctx, &next)? {
                RegularSearchOutcome::Found(w) => return Ok(RegularSearchOutcome::Found(w)),
                RegularSearchOutcome::Unknown => exhausted = false,
                RegularSearchOutcome::None => {}
            }
        }
        Ok(if exhausted {
            RegularSearchOutcome::None
        } else {
            RegularSearchOutcome::Unknown
        })
    }

    let mut ctx = Ctx {
        n,
        flavor,
        stab_elements: &stab_elements,
        to_point: &to_point,
        budget,
        used: 0,
    };
    extend(&mut ctx, &[])
}
