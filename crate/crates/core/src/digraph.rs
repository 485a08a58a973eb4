//! Core digraph type and elementary structural operations.

use crate::error::{Error, Result};

/// Default cap on the number of s-arc tuples materialised at once.
pub const DEFAULT_SARC_CAP: u64 = 10_000_000;

/// A finite digraph on the vertex set `0..n`. Graphs are represented as
/// symmetric digraphs. Values are immutable after construction; adjacency
/// lists and symmetry flags are derived once and cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(u32, u32)>,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
    asymmetric: bool,
    symmetric: bool,
    irreflexive: bool,
}

impl Digraph {
    /// Builds a digraph from an arc list. Duplicate arcs collapse; all
    /// endpoints must lie in `0..n` and `n` must be positive.
    pub fn from_arcs(n: usize, arc_list: &[(u32, u32)]) -> Result<Digraph> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        let mut arcs = Vec::with_capacity(arc_list.len());
        for &(u, v) in arc_list {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, order: n });
                }
            }
            arcs.push((u, v));
        }
        arcs.sort_unstable();
        arcs.dedup();

        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(u, v) in &arcs {
            out_adj[u as usize].push(v);
            in_adj[v as usize].push(u);
        }
        for adj in in_adj.iter_mut() {
            adj.sort_unstable();
        }

        let mut asymmetric = true;
        let mut symmetric = true;
        let mut irreflexive = true;
        for &(u, v) in &arcs {
            if u == v {
                irreflexive = false;
                asymmetric = false;
            }
            let reverse = out_adj[v as usize].binary_search(&u).is_ok();
            if reverse && u != v {
                asymmetric = false;
            }
            if !reverse {
                symmetric = false;
            }
        }

        Ok(Digraph {
            n,
            arcs,
            out_adj,
            in_adj,
            asymmetric,
            symmetric,
            irreflexive,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(u32, u32)] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, u: u32, v: u32) -> bool {
        self.arcs.binary_search(&(u, v)).is_ok()
    }

    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.out_adj[v as usize]
    }

    pub fn in_neighbors(&self, v: u32) -> &[u32] {
        &self.in_adj[v as usize]
    }

    pub fn is_asymmetric(&self) -> bool {
        self.asymmetric
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_irreflexive(&self) -> bool {
        self.irreflexive
    }

    /// The digraph with every arc reversed.
    pub fn opposite(&self) -> Digraph {
        let arcs: Vec<(u32, u32)> = self.arcs.iter().map(|&(u, v)| (v, u)).collect();
        Digraph::from_arcs(self.n, &arcs).expect("reversal preserves validity")
    }

    /// The symmetrisation of the arc relation. Requires an irreflexive
    /// input, since the result is a graph.
    pub fn underlying_graph(&self) -> Result<Digraph> {
        if let Some(&(u, _)) = self.arcs.iter().find(|&&(u, v)| u == v) {
            return Err(Error::LoopPresent(u));
        }
        let mut arcs = self.arcs.clone();
        arcs.extend(self.arcs.iter().map(|&(u, v)| (v, u)));
        Digraph::from_arcs(self.n, &arcs)
    }

    /// Number of unordered edges of the underlying graph.
    pub fn edge_count(&self) -> Result<usize> {
        let g = self.underlying_graph()?;
        Ok(g.arc_count() / 2)
    }

    /// Connectivity of the underlying graph.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.out_adj[v as usize].iter().chain(&self.in_adj[v as usize]) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// In- and out-valence multisets (sorted) and, when every vertex has
    /// equal in- and out-valence `r`, that common valence.
    pub fn valence_profile(&self) -> (Vec<u32>, Vec<u32>, Option<u32>) {
        let mut ins: Vec<u32> = self.in_adj.iter().map(|a| a.len() as u32).collect();
        let mut outs: Vec<u32> = self.out_adj.iter().map(|a| a.len() as u32).collect();
        let regular = match outs.first() {
            Some(&r)
                if outs.iter().all(|&x| x == r) && ins.iter().all(|&x| x == r) =>
            {
                Some(r)
            }
            _ => None,
        };
        ins.sort_unstable();
        outs.sort_unstable();
        (ins, outs, regular)
    }

    pub fn is_regular_of_valence(&self, r: u32) -> bool {
        self.valence_profile().2 == Some(r)
    }

    /// Exhaustive list of s-arcs: directed walks of length `s` without
    /// immediate backtracking. `s = 0` yields one tuple per vertex.
    pub fn s_arcs(&self, s: usize, cap: u64) -> Result<Vec<Vec<u32>>> {
        let mut current: Vec<Vec<u32>> = (0..self.n as u32).map(|v| vec![v]).collect();
        for _ in 0..s {
            let mut next = Vec::new();
            for walk in &current {
                let last = *walk.last().unwrap();
                let prev = if walk.len() >= 2 {
                    Some(walk[walk.len() - 2])
                } else {
                    None
                };
                for &w in &self.out_adj[last as usize] {
                    if Some(w) == prev {
                        continue;
                    }
                    if next.len() as u64 >= cap {
                        return Err(Error::CapExceeded {
                            what: "s-arc enumeration",
                            cap,
                        });
                    }
                    let mut extended = walk.clone();
                    extended.push(w);
                    next.push(extended);
                }
            }
            current = next;
        }
        Ok(current)
    }

    /// Number of s-arcs, computed by dynamic programming over arcs without
    /// materialising the tuples.
    pub fn s_arc_count(&self, s: usize) -> Result<u128> {
        if s == 0 {
            return Ok(self.n as u128);
        }
        // counts[i] = number of walks so far ending with arc i.
        let mut counts: Vec<u128> = vec![1; self.arcs.len()];
        for _ in 1..s {
            let mut next: Vec<u128> = vec![0; self.arcs.len()];
            // Extend every walk ending at arc (u, v) by the out-arcs of v
            // avoiding u.
            for (i, &(u, v)) in self.arcs.iter().enumerate() {
                if counts[i] == 0 {
                    continue;
                }
                for &w in &self.out_adj[v as usize] {
                    if w == u {
                        continue;
                    }
                    let j = self.arcs.binary_search(&(v, w)).unwrap();
                    next[j] = next[j]
                        .checked_add(counts[i])
                        .ok_or(Error::OrderOverflow)?;
                }
            }
            counts = next;
        }
        let mut total: u128 = 0;
        for c in counts {
            total = total.checked_add(c).ok_or(Error::OrderOverflow)?;
        }
        Ok(total)
    }

    /// Girth and bipartiteness of a connected graph (symmetric digraph).
    /// The girth is `None` for forests.
    pub fn girth_and_bipartite(&self) -> Result<(Option<usize>, bool)> {
        if !self.symmetric {
            return Err(Error::NotSymmetric);
        }
        if !self.irreflexive {
            return Err(Error::LoopPresent(
                self.arcs.iter().find(|&&(u, v)| u == v).unwrap().0,
            ));
        }
        // Girth: BFS from every vertex; shortest cycle through the root is
        // detected at the first non-tree edge closing two branches.
        let mut girth: Option<usize> = None;
        for root in 0..self.n as u32 {
            let mut dist = vec![u32::MAX; self.n];
            let mut parent = vec![u32::MAX; self.n];
            let mut queue = std::collections::VecDeque::new();
            dist[root as usize] = 0;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                if let Some(g) = girth {
                    if (2 * dist[v as usize] as usize) >= g {
                        break;
                    }
                }
                for &w in &self.out_adj[v as usize] {
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = dist[v as usize] + 1;
                        parent[w as usize] = v;
                        queue.push_back(w);
                    } else if parent[v as usize] != w {
                        let len = (dist[v as usize] + dist[w as usize] + 1) as usize;
                        if girth.is_none_or(|g| len < g) {
                            girth = Some(len);
                        }
                    }
                }
            }
        }
        // Bipartiteness by 2-coloring.
        let mut color = vec![u8::MAX; self.n];
        let mut bipartite = true;
        'outer: for root in 0..self.n as u32 {
            if color[root as usize] != u8::MAX {
                continue;
            }
            color[root as usize] = 0;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &w in &self.out_adj[v as usize] {
                    if color[w as usize] == u8::MAX {
                        color[w as usize] = 1 - color[v as usize];
                        stack.push(w);
                    } else if color[w as usize] == color[v as usize] {
                        bipartite = false;
                        break 'outer;
                    }
                }
            }
        }
        Ok((girth, bipartite))
    }

    /// Relabels vertices: vertex `v` becomes `relabeling[v]`.
    pub fn relabel(&self, relabeling: &[u32]) -> Result<Digraph> {
        if relabeling.len() != self.n {
            return Err(Error::DegreeMismatch(relabeling.len(), self.n));
        }
        let arcs: Vec<(u32, u32)> = self
            .arcs
            .iter()
            .map(|&(u, v)| (relabeling[u as usize], relabeling[v as usize]))
            .collect();
        Digraph::from_arcs(self.n, &arcs)
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn directed_cycle(n: usize) -> Digraph {
        let arcs: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Digraph::from_arcs(n, &arcs).unwrap()
    }

    fn undirected_cycle(n: usize) -> Digraph {
        directed_cycle(n).underlying_graph().unwrap()
    }

    #[test]
    fn build_directed_triangle() {
        let d = directed_cycle(3);
        assert!(d.is_asymmetric());
        assert!(!d.is_symmetric());
        assert!(d.is_irreflexive());
        assert_eq!(d.arc_count(), 3);
    }

    #[test]
    fn build_symmetric_pair() {
        let d = Digraph::from_arcs(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(d.is_symmetric());
        assert!(!d.is_asymmetric());
    }

    #[test]
    fn loops_are_representable() {
        let d = Digraph::from_arcs(1, &[(0, 0)]).unwrap();
        assert!(!d.is_irreflexive());
        assert!(d.underlying_graph().is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Digraph::from_arcs(0, &[]).is_err());
        assert!(Digraph::from_arcs(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn duplicate_arcs_collapse() {
        let d = Digraph::from_arcs(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(d.arc_count(), 1);
    }

    #[test]
    fn opposite_is_involutive() {
        let d = directed_cycle(5);
        assert_eq!(d.opposite().opposite(), d);
        let sym = undirected_cycle(4);
        assert_eq!(sym.opposite(), sym);
    }

    #[test]
    fn opposite_of_triangle() {
        let d = directed_cycle(3);
        let o = d.opposite();
        assert!(o.has_arc(1, 0));
        assert!(o.has_arc(2, 1));
        assert!(o.has_arc(0, 2));
    }

    #[test]
    fn underlying_of_directed_cycle() {
        let d = directed_cycle(5);
        let g = d.underlying_graph().unwrap();
        assert!(g.is_symmetric());
        assert_eq!(g.edge_count().unwrap(), 5);
        // Idempotent on symmetric digraphs.
        assert_eq!(g.underlying_graph().unwrap(), g);
    }

    #[test]
    fn connectivity() {
        assert!(directed_cycle(4).is_connected());
        let two_triangles = Digraph::from_arcs(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
        )
        .unwrap();
        assert!(!two_triangles.is_connected());
        let singleton = Digraph::from_arcs(1, &[]).unwrap();
        assert!(singleton.is_connected());
    }

    #[test]
    fn valence_profiles() {
        let d = directed_cycle(4);
        assert_eq!(d.valence_profile().2, Some(1));
        let star = Digraph::from_arcs(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(star.valence_profile().2, None);
    }

    #[test]
    fn s_arcs_of_directed_cycle() {
        let d = directed_cycle(3);
        assert_eq!(d.s_arcs(0, 1000).unwrap().len(), 3);
        assert_eq!(d.s_arcs(1, 1000).unwrap().len(), 3);
        // One s-arc per start vertex at every length.
        assert_eq!(d.s_arcs(5, 1000).unwrap().len(), 3);
        assert_eq!(d.s_arc_count(5).unwrap(), 3);
    }

    #[test]
    fn s_arc_cap_is_enforced() {
        let d = directed_cycle(10);
        assert!(matches!(
            d.s_arcs(2, 5),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn s_arc_count_matches_enumeration() {
        let d = Digraph::from_arcs(
            4,
            &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0), (2, 0)],
        )
        .unwrap();
        for s in 0..6 {
            assert_eq!(
                d.s_arc_count(s).unwrap(),
                d.s_arcs(s, 1_000_000).unwrap().len() as u128,
                "s = {s}"
            );
        }
    }

    #[test]
    fn s_arcs_no_backtracking() {
        let path = Digraph::from_arcs(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        let two_arcs = path.s_arcs(2, 1000).unwrap();
        assert!(two_arcs.iter().all(|w| w[0] != w[2]));
    }

    #[test]
    fn successor_structure_of_s_arcs() {
        let d = Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0)]).unwrap();
        for s in 1..4 {
            let shorter = d.s_arcs(s - 1, 100_000).unwrap();
            let longer = d.s_arcs(s, 100_000).unwrap();
            // Each s-arc's prefix is an (s-1)-arc.
            for w in &longer {
                assert!(shorter.contains(&w[..s].to_vec()));
            }
        }
    }

    #[test]
    fn girth_of_cycles() {
        assert_eq!(undirected_cycle(6).girth_and_bipartite().unwrap(), (Some(6), true));
        assert_eq!(undirected_cycle(5).girth_and_bipartite().unwrap(), (Some(5), false));
    }

    #[test]
    fn cube_graph_girth() {
        // 3-cube: vertices are bit triples, edges flip one bit.
        let mut arcs = Vec::new();
        for v in 0..8u32 {
            for b in 0..3 {
                arcs.push((v, v ^ (1 << b)));
            }
        }
        let cube = Digraph::from_arcs(8, &arcs).unwrap();
        assert_eq!(cube.girth_and_bipartite().unwrap(), (Some(4), true));
    }

    #[test]
    fn forest_has_no_girth() {
        let path = Digraph::from_arcs(3, &[(0, 1), (1, 0), (1, 2), (2, 1)]).unwrap();
        assert_eq!(path.girth_and_bipartite().unwrap(), (None, true));
    }

    #[test]
    fn girth_requires_symmetric_input() {
        assert!(directed_cycle(4).girth_and_bipartite().is_err());
    }
}
