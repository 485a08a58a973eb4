use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One level of a stabiliser chain: a base point, the strong generators
/// fixing all earlier base points, and a transversal of the orbit of the
/// base point under those generators.
#[derive(Debug, Clone)]
struct Level {
    base: u32,
    gens: Vec<Permutation>,
    /// Orbit points in discovery order; `orbit[0] == base`.
    orbit: Vec<u32>,
    /// Per point: element mapping `base` to that point.
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base as usize] = Some(Permutation::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
        }
    }
}

/// A base and strong generating set, built with the deterministic
/// Schreier–Sims procedure (base points: smallest moved point first,
/// unless a base prefix is requested).
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn build(degree: usize, gens: &[Permutation], base_hint: &[u32]) -> Result<StabChain> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let mut chain = StabChain {
            degree,
            levels: base_hint.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        for g in gens {
            // Skipping generators the chain already proves members keeps the
            // strong generating sets small when the input is redundant.
            if !chain.contains(g) {
                chain.sift_in(g.clone(), 0);
            }
        }
        Ok(chain)
    }

    /// Sifts `g` (which fixes the bases of all levels before `from_level`)
    /// through the chain. Where it stops stripping, the residue becomes a
    /// strong generator: it fixes every base down to the stall level, so it
    /// is installed at each level from `from_level` to the stall level.
    fn sift_in(&mut self, g: Permutation, from_level: usize) {
        let mut h = g;
        let mut level = from_level;
        loop {
            if h.is_identity() {
                return;
            }
            if level == self.levels.len() {
                let base = h.smallest_moved_point().expect("non-identity");
                self.levels.push(Level::new(base, self.degree));
            }
            let img = h.apply(self.levels[level].base);
            match &self.levels[level].transversal[img as usize] {
                Some(rep) => {
                    h = h.then(&rep.inverse());
                    level += 1;
                }
                None => {
                    for l in from_level..=level {
                        self.add_generator_at(l, h.clone());
                    }
                    return;
                }
            }
        }
    }

    /// Adds a strong generator at `level` and restores the orbit/transversal
    /// invariant, sifting every new Schreier generator deeper.
    fn add_generator_at(&mut self, level: usize, g: Permutation) {
        if self.levels[level].gens.contains(&g) {
            return;
        }
        self.levels[level].gens.push(g);
        let new_gen = self.levels[level].gens.len() - 1;
        // Pairs (orbit position, generator index) still to process.
        let mut work: Vec<(usize, usize)> = (0..self.levels[level].orbit.len())
            .map(|i| (i, new_gen))
            .collect();
        let mut cursor = 0;
        while cursor < work.len() {
            let (pos, gi) = work[cursor];
            cursor += 1;
            let q = self.levels[level].orbit[pos];
            let gen = self.levels[level].gens[gi].clone();
            let p = gen.apply(q);
            let t_q = self.levels[level].transversal[q as usize]
                .clone()
                .expect("orbit point has a transversal element");
            match &self.levels[level].transversal[p as usize] {
                None => {
                    let rep = t_q.then(&gen);
                    self.levels[level].transversal[p as usize] = Some(rep);
                    self.levels[level].orbit.push(p);
                    let new_pos = self.levels[level].orbit.len() - 1;
                    for gj in 0..self.levels[level].gens.len() {
                        work.push((new_pos, gj));
                    }
                }
                Some(t_p) => {
                    let schreier = t_q.then(&gen).then(&t_p.inverse());
                    if !schreier.is_identity() {
                        self.sift_in(schreier, level + 1);
                    }
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// The orbit of a level's base point, and the base point itself.
    pub fn level_orbit(&self, level: usize) -> (&[u32], u32) {
        (&self.levels[level].orbit, self.levels[level].base)
    }

    /// Transversal element mapping the level's base point to `point`.
    pub fn level_transversal_element(&self, level: usize, point: u32) -> Permutation {
        self.levels[level].transversal[point as usize]
            .clone()
            .expect("point lies in the level orbit")
    }

    pub fn order(&self) -> Result<u128> {
        self.order_from_level(0)
    }

    /// Order of the stabiliser of the first `level` base points.
    pub fn order_from_level(&self, level: usize) -> Result<u128> {
        let mut order: u128 = 1;
        for l in &self.levels[level.min(self.levels.len())..] {
            order = order
                .checked_mul(l.orbit.len() as u128)
                .ok_or(Error::OrderOverflow)?;
        }
        Ok(order)
    }

    /// Strong generators for the stabiliser of the first `level` base points.
    pub fn strong_generators_from_level(&self, level: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        for l in &self.levels[level.min(self.levels.len())..] {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        self.residue(g).is_identity()
    }

    /// Extends the chain with one more generator.
    pub fn sift_in_public(&mut self, g: Permutation) {
        self.sift_in(g, 0);
    }

    /// Sifts `g` and returns the residue (identity iff `g` is a member).
    pub fn residue(&self, g: &Permutation) -> Permutation {
        let mut h = g.clone();
        for level in &self.levels {
            let img = h.apply(level.base);
            match &level.transversal[img as usize] {
                Some(rep) => h = h.then(&rep.inverse()),
                None => return h,
            }
        }
        h
    }

    /// Transversal of the top-level orbit: for each orbit point, an element
    /// mapping the first base point to it.
    pub fn top_transversal(&self) -> Vec<(u32, Permutation)> {
        match self.levels.first() {
            None => Vec::new(),
            Some(l) => l
                .orbit
                .iter()
                .map(|&p| (p, l.transversal[p as usize].clone().unwrap()))
                .collect(),
        }
    }

    pub fn top_orbit(&self) -> Vec<u32> {
        self.levels.first().map(|l| l.orbit.clone()).unwrap_or_default()
    }

    /// All group elements, in a deterministic order, provided the order does
    /// not exceed `cap`.
    pub fn elements_capped(&self, cap: u64) -> Result<Vec<Permutation>> {
        let order = self.order()?;
        if order > cap as u128 {
            return Err(Error::CapExceeded {
                what: "group element enumeration",
                cap,
            });
        }
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &p in &level.orbit {
                let rep = level.transversal[p as usize].as_ref().unwrap();
                for e in &out {
                    // Stabiliser element first, then the coset representative.
                    next.push(e.then(rep));
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// A permutation group given by generators, with a lazily built stabiliser
/// chain certifying order and membership.
#[derive(Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermutationGroup {
    fn clone(&self) -> Self {
        PermutationGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain: match self.chain.get() {
                Some(c) => OnceLock::from(c.clone()),
                None => OnceLock::new(),
            },
        }
    }
}

impl PermutationGroup {
    pub fn trivial(degree: usize) -> Self {
        PermutationGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    pub fn from_generators(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        let generators: Vec<Permutation> =
            generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(PermutationGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators, &[]).unwrap())
    }

    pub fn order(&self) -> Result<u128> {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Orbit of a point under the group, in discovery order.
    pub fn orbit_of(&self, v: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![v];
        seen[v as usize] = true;
        let mut cursor = 0;
        while cursor < orbit.len() {
            let p = orbit[cursor];
            cursor += 1;
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    orbit.push(q);
                }
            }
        }
        orbit
    }

    /// The orbit partition, each class sorted, classes ordered by minimum.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for v in 0..self.degree as u32 {
            if seen[v as usize] {
                continue;
            }
            let mut orbit = self.orbit_of(v);
            for &p in &orbit {
                seen[p as usize] = true;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit_of(0).len() == self.degree
    }

    /// Orbit partition together with the point stabiliser, with the Lagrange
    /// identity `|G| = |orbit(v)| * |G_v|` checked.
    pub fn orbits_and_stabilizer(&self, v: u32) -> Result<(Vec<Vec<u32>>, PermutationGroup)> {
        if (v as usize) >= self.degree {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.degree,
            });
        }
        let stab = self.point_stabilizer(v)?;
        let orbits = self.orbits();
        let orbit_len = self.orbit_of(v).len() as u128;
        debug_assert_eq!(self.order()?, orbit_len * stab.order()?);
        let _ = orbit_len;
        Ok((orbits, stab))
    }

    pub fn point_stabilizer(&self, v: u32) -> Result<PermutationGroup> {
        let chain = StabChain::build(self.degree, &self.generators, &[v])?;
        PermutationGroup::from_generators(self.degree, chain.strong_generators_from_level(1))
    }

    /// Order of the pointwise stabiliser of a tuple of points.
    pub fn tuple_stabilizer_order(&self, points: &[u32]) -> Result<u128> {
        let chain = StabChain::build(self.degree, &self.generators, points)?;
        chain.order_from_level(points.len())
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if a.then(b) != b.then(a) {
                    return false;
                }
            }
        }
        true
    }

    /// Normal closure of the subgroup generated by `seeds` in this group.
    pub fn normal_closure(&self, seeds: Vec<Permutation>) -> Result<PermutationGroup> {
        let mut gens: Vec<Permutation> = seeds.into_iter().filter(|g| !g.is_identity()).collect();
        let mut chain = StabChain::build(self.degree, &gens, &[])?;
        let mut frontier: Vec<Permutation> = gens.clone();
        while let Some(x) = frontier.pop() {
            for g in &self.generators {
                let c = x.conjugate_by(g);
                if !chain.contains(&c) {
                    gens.push(c.clone());
                    chain.sift_in(c.clone(), 0);
                    frontier.push(c);
                }
            }
        }
        PermutationGroup::from_generators(self.degree, gens)
    }

    pub fn derived_subgroup(&self) -> Result<PermutationGroup> {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(comms)
    }

    /// True when the derived series reaches the trivial group.
    pub fn is_solvable(&self) -> Result<bool> {
        let mut current = self.clone();
        let mut order = current.order()?;
        loop {
            if order == 1 {
                return Ok(true);
            }
            let next = current.derived_subgroup()?;
            let next_order = next.order()?;
            if next_order == order {
                return Ok(false);
            }
            debug_assert!(next_order < order);
            current = next;
            order = next_order;
        }
    }

    pub fn elements_capped(&self, cap: u64) -> Result<Vec<Permutation>> {
        self.chain().elements_capped(cap)
    }

    /// An equivalent group over a non-redundant generating subset: each
    /// kept generator enlarges the group generated by its predecessors.
    pub fn reduced(&self) -> Result<PermutationGroup> {
        let mut kept: Vec<Permutation> = Vec::new();
        let mut chain = StabChain::build(self.degree, &[], &[])?;
        for g in &self.generators {
            if !chain.contains(g) {
                chain.sift_in_public(g.clone());
                kept.push(g.clone());
            }
        }
        PermutationGroup::from_generators(self.degree, kept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(degree: usize, cycles: &[&[Vec<u32>]]) -> PermutationGroup {
        let gens = cycles
            .iter()
            .map(|c| Permutation::from_cycles(degree, c).unwrap())
            .collect();
        PermutationGroup::from_generators(degree, gens).unwrap()
    }

    #[test]
    fn symmetric_group_order() {
        let s4 = group(4, &[&[vec![0, 1]], &[vec![0, 1, 2, 3]]]);
        assert_eq!(s4.order().unwrap(), 24);
    }

    #[test]
    fn trivial_group_order() {
        let g = PermutationGroup::trivial(5);
        assert_eq!(g.order().unwrap(), 1);
        assert!(g.is_solvable().unwrap());
    }

    #[test]
    fn alternating_group_a5() {
        let a5 = group(5, &[&[vec![0, 1, 2, 3, 4]], &[vec![2, 3, 4]]]);
        assert_eq!(a5.order().unwrap(), 60);
        assert!(!a5.is_solvable().unwrap());
    }

    #[test]
    fn s4_is_solvable_a5_not() {
        let s4 = group(4, &[&[vec![0, 1]], &[vec![0, 1, 2, 3]]]);
        assert!(s4.is_solvable().unwrap());
    }

    #[test]
    fn membership_oracle() {
        let s3 = group(4, &[&[vec![0, 1]], &[vec![0, 1, 2]]]);
        assert!(s3.contains(&Permutation::from_cycles(4, &[vec![1, 2]]).unwrap()));
        assert!(!s3.contains(&Permutation::from_cycles(4, &[vec![2, 3]]).unwrap()));
    }

    #[test]
    fn point_stabilizer_of_s4() {
        let s4 = group(4, &[&[vec![0, 1]], &[vec![0, 1, 2, 3]]]);
        let (orbits, stab) = s4.orbits_and_stabilizer(0).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].len(), 4);
        assert_eq!(stab.order().unwrap(), 6);
        assert!(stab.generators().iter().all(|g| g.fixes(0)));
    }

    #[test]
    fn stabilizer_of_fixed_point_is_whole_group() {
        let g = group(4, &[&[vec![0, 1]]]);
        let stab = g.point_stabilizer(3).unwrap();
        assert_eq!(stab.order().unwrap(), 2);
    }

    #[test]
    fn abelian_detection() {
        let g = group(4, &[&[vec![0, 1]], &[vec![2, 3]]]);
        assert!(g.is_abelian());
        let s3 = group(3, &[&[vec![0, 1]], &[vec![0, 1, 2]]]);
        assert!(!s3.is_abelian());
        assert!(PermutationGroup::trivial(3).is_abelian());
    }

    #[test]
    fn element_enumeration_matches_order() {
        let s4 = group(4, &[&[vec![0, 1]], &[vec![0, 1, 2, 3]]]);
        let elements = s4.elements_capped(100).unwrap();
        assert_eq!(elements.len(), 24);
        let mut unique = elements.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), 24);
    }

    #[test]
    fn random_words_are_members() {
        // Membership soundness on generator words: deterministic sampling.
        let g = group(7, &[&[vec![0, 1, 2, 3, 4, 5, 6]], &[vec![0, 1]]]);
        let gens = g.generators().to_vec();
        let mut word = Permutation::identity(7);
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let pick = (state >> 33) as usize % gens.len();
            word = word.then(&gens[pick]);
            assert!(g.contains(&word));
        }
    }

    #[test]
    fn tuple_stabilizer_orders() {
        let s4 = group(4, &[&[vec![0, 1]], &[vec![0, 1, 2, 3]]]);
        assert_eq!(s4.tuple_stabilizer_order(&[0]).unwrap(), 6);
        assert_eq!(s4.tuple_stabilizer_order(&[0, 1]).unwrap(), 2);
        assert_eq!(s4.tuple_stabilizer_order(&[0, 1, 2]).unwrap(), 1);
    }

    #[test]
    fn derived_series_strictly_decreases() {
        let s4 = group(4, &[&[vec![0, 1]], &[vec![0, 1, 2, 3]]]);
        let d1 = s4.derived_subgroup().unwrap();
        assert_eq!(d1.order().unwrap(), 12);
        let d2 = d1.derived_subgroup().unwrap();
        assert_eq!(d2.order().unwrap(), 4);
        let d3 = d2.derived_subgroup().unwrap();
        assert_eq!(d3.order().unwrap(), 1);
    }
}
