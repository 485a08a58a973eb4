//! Independent oracle implementations used by the integration tests. These
//! deliberately avoid the library's search machinery: subgroup enumeration
//! is a plain coset-table backtrack, group orders come from brute-force
//! closure, and walk searches run over explicit state spaces.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use atdcensus::digraph::Digraph;
use atdcensus::fp::FpPresentation;
use atdcensus::perm::Permutation;

const UNDEF: u32 = u32::MAX;

/// All subgroups of index at most `max_index`, one standard-form coset
/// table per subgroup, as the generator actions on the cosets.
pub fn classic_low_index_tables(
    presentation: &FpPresentation,
    max_index: usize,
) -> Vec<(usize, Vec<Permutation>)> {
    let k = presentation.generator_count();
    let relators: Vec<Vec<usize>> = presentation
        .normalized_relators()
        .iter()
        .map(|w| {
            w.letters()
                .map(|(g, inv)| 2 * g + usize::from(inv))
                .collect()
        })
        .collect();
    let mut search = Classic {
        ncols: 2 * k,
        max_index,
        cols: vec![vec![UNDEF; max_index]; 2 * k],
        used: 1,
        relators,
        out: Vec::new(),
    };
    search.dfs();
    search.out
}

struct Classic {
    ncols: usize,
    max_index: usize,
    cols: Vec<Vec<u32>>,
    used: usize,
    relators: Vec<Vec<usize>>,
    out: Vec<(usize, Vec<Permutation>)>,
}

impl Classic {
    fn dfs(&mut self) {
        // First undefined cell in scan order.
        let mut cell = None;
        'scan: for p in 0..self.used {
            for c in 0..self.ncols {
                if self.cols[c][p] == UNDEF {
                    cell = Some((p as u32, c));
                    break 'scan;
                }
            }
        }
        let Some((p, c)) = cell else {
            // Complete table: verify every relator closes at every coset.
            if self.fully_consistent() {
                let images = (0..self.ncols / 2)
                    .map(|g| {
                        Permutation::from_images(self.cols[2 * g][..self.used].to_vec()).unwrap()
                    })
                    .collect();
                self.out.push((self.used, images));
            }
            return;
        };
        for r in 0..self.used as u32 {
            if self.cols[c ^ 1][r as usize] != UNDEF {
                continue;
            }
            self.assign_and_recurse(c, p, r, false);
        }
        if self.used < self.max_index {
            let fresh = self.used as u32;
            self.assign_and_recurse(c, p, fresh, true);
        }
    }

    fn assign_and_recurse(&mut self, c: usize, p: u32, r: u32, fresh: bool) {
        if fresh {
            self.used += 1;
        }
        self.cols[c][p as usize] = r;
        self.cols[c ^ 1][r as usize] = p;
        if self.partially_consistent() {
            self.dfs();
        }
        self.cols[c][p as usize] = UNDEF;
        self.cols[c ^ 1][r as usize] = UNDEF;
        if fresh {
            self.used -= 1;
        }
    }

    /// No fully traced relator cycle may close incorrectly.
    fn partially_consistent(&self) -> bool {
        for rel in &self.relators {
            for start in 0..self.used as u32 {
                let mut cur = start;
                let mut complete = true;
                for &col in rel {
                    let next = self.cols[col][cur as usize];
                    if next == UNDEF {
                        complete = false;
                        break;
                    }
                    cur = next;
                }
                if complete && cur != start {
                    return false;
                }
            }
        }
        true
    }

    fn fully_consistent(&self) -> bool {
        for rel in &self.relators {
            for start in 0..self.used as u32 {
                let mut cur = start;
                for &col in rel {
                    let next = self.cols[col][cur as usize];
                    if next == UNDEF {
                        return false;
                    }
                    cur = next;
                }
                if cur != start {
                    return false;
                }
            }
        }
        true
    }
}

/// Order of the group generated by permutations, by plain closure, bailing
/// out once the order exceeds `cap`.
pub fn brute_group_order(gens: &[Permutation], cap: usize) -> usize {
    let degree = gens.first().map(|g| g.degree()).unwrap_or(1);
    let mut elements: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::new();
    let id = Permutation::identity(degree);
    elements.insert(id.clone());
    queue.push_back(id);
    while let Some(e) = queue.pop_front() {
        for g in gens {
            let next = e.then(g);
            if elements.insert(next.clone()) {
                if elements.len() > cap {
                    return elements.len();
                }
                queue.push_back(next);
            }
        }
    }
    elements.len()
}

/// BFS-normalised table bytes; an independent twin of the library's
/// canonical regular-table serialisation.
pub fn regular_table_bytes(index: usize, images: &[Permutation]) -> Vec<u8> {
    let mut label = vec![UNDEF; index];
    let mut order = vec![0u32];
    label[0] = 0;
    let mut cursor = 0;
    while cursor < order.len() {
        let p = order[cursor];
        cursor += 1;
        for g in images {
            for q in [g.apply(p), g.inverse().apply(p)] {
                if label[q as usize] == UNDEF {
                    label[q as usize] = order.len() as u32;
                    order.push(q);
                }
            }
        }
    }
    assert_eq!(order.len(), index, "table must be transitive");
    let mut bytes = Vec::new();
    bytes.extend_from_slice(&(index as u32).to_le_bytes());
    for g in images {
        for &p in &order {
            bytes.extend_from_slice(&label[g.apply(p) as usize].to_le_bytes());
        }
    }
    bytes
}

/// Alter-equivalence classes by explicit search over (vertex, partial sum)
/// states with sums confined to `[0, t]`.
pub fn state_space_alter_classes(d: &Digraph, t: usize) -> Vec<Vec<u32>> {
    let n = d.order();
    let reachable = |start: u32| -> Vec<u32> {
        let mut seen = vec![false; n * (t + 1)];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        seen[start as usize] = true;
        queue.push_back((start, 0usize));
        while let Some((v, sum)) = queue.pop_front() {
            if sum == 0 {
                out.push(v);
            }
            if sum < t {
                for &w in d.out_neighbors(v) {
                    if !seen[w as usize + (sum + 1) * n] {
                        seen[w as usize + (sum + 1) * n] = true;
                        queue.push_back((w, sum + 1));
                    }
                }
            }
            if sum > 0 {
                for &w in d.in_neighbors(v) {
                    if !seen[w as usize + (sum - 1) * n] {
                        seen[w as usize + (sum - 1) * n] = true;
                        queue.push_back((w, sum - 1));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    };
    // Walks with sum zero and tolerance in [0, t] generate a symmetric
    // relation; reachability from each vertex gives its class directly.
    let mut classes: Vec<Vec<u32>> = Vec::new();
    let mut assigned = vec![false; n];
    for v in 0..n as u32 {
        if assigned[v as usize] {
            continue;
        }
        let class = reachable(v);
        for &w in &class {
            assigned[w as usize] = true;
        }
        classes.push(class);
    }
    classes
}

/// Partition equality up to ordering.
pub fn same_partition(mut a: Vec<Vec<u32>>, mut b: Vec<Vec<u32>>) -> bool {
    for c in a.iter_mut().chain(b.iter_mut()) {
        c.sort_unstable();
    }
    a.sort();
    b.sort();
    a == b
}

/// All alternating cycles by exhaustive search over closed simple
/// alternating walks, each normalised up to rotation and reflection.
pub fn brute_alternating_cycles(d: &Digraph) -> Vec<Vec<u32>> {
    let mut found: HashSet<Vec<u32>> = HashSet::new();
    // A cycle alternates tail/head roles; enumerate starting at a forward
    // arc (u, v) and extend backward/forward alternately, keeping vertices
    // distinct.
    for &(u, v) in d.arcs() {
        let mut walk = vec![u, v];
        extend_alternating(d, &mut walk, false, &mut found);
    }
    let mut out: Vec<Vec<u32>> = found.into_iter().collect();
    out.sort();
    out
}

fn extend_alternating(
    d: &Digraph,
    walk: &mut Vec<u32>,
    forward_next: bool,
    found: &mut HashSet<Vec<u32>>,
) {
    let last = *walk.last().unwrap();
    let candidates: Vec<u32> = if forward_next {
        d.out_neighbors(last).to_vec()
    } else {
        // Walk arrived along an arc into `last`; continue against another
        // arc into `last`... the alternation swaps roles at each step.
        d.in_neighbors(last).to_vec()
    };
    for w in candidates {
        if w == walk[0] {
            // Cycles have even length and close with the opposite parity of
            // the first step (the first step was forward from walk[0]).
            if walk.len() >= 4 && walk.len().is_multiple_of(2) && !forward_next {
                found.insert(normalize_cycle(walk));
            }
            continue;
        }
        if walk.contains(&w) {
            continue;
        }
        walk.push(w);
        extend_alternating(d, walk, !forward_next, found);
        walk.pop();
    }
}

/// Rotation+reflection normal form of a cyclic vertex sequence.
pub fn normalize_cycle(cycle: &[u32]) -> Vec<u32> {
    let n = cycle.len();
    let mut best: Option<Vec<u32>> = None;
    for reflect in [false, true] {
        let seq: Vec<u32> = if reflect {
            cycle.iter().rev().copied().collect()
        } else {
            cycle.to_vec()
        };
        for shift in 0..n {
            let mut rotated = Vec::with_capacity(n);
            rotated.extend_from_slice(&seq[shift..]);
            rotated.extend_from_slice(&seq[..shift]);
            if best.as_ref().is_none_or(|b| &rotated < b) {
                best = Some(rotated);
            }
        }
    }
    best.unwrap()
}

/// All asymmetric orientations of a graph picking one direction per edge.
pub fn all_orientations(graph: &Digraph) -> Vec<Digraph> {
    let edges: Vec<(u32, u32)> = graph
        .arcs()
        .iter()
        .copied()
        .filter(|&(u, v)| u < v)
        .collect();
    let m = edges.len();
    assert!(m <= 20, "orientation enumeration is exponential");
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0u32..(1 << m) {
        let arcs: Vec<(u32, u32)> = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| if mask & (1 << i) != 0 { (v, u) } else { (u, v) })
            .collect();
        out.push(Digraph::from_arcs(graph.order(), &arcs).unwrap());
    }
    out
}

/// Isomorphism by plain backtracking over degree-compatible vertex maps.
pub fn brute_isomorphic(a: &Digraph, b: &Digraph) -> bool {
    if a.order() != b.order() || a.arc_count() != b.arc_count() {
        return false;
    }
    fn extend(a: &Digraph, b: &Digraph, v: usize, map: &mut Vec<u32>, used: &mut Vec<bool>) -> bool {
        let n = a.order();
        if v == n {
            return true;
        }
        'cand: for w in 0..n as u32 {
            if used[w as usize] {
                continue;
            }
            if a.out_neighbors(v as u32).len() != b.out_neighbors(w).len()
                || a.in_neighbors(v as u32).len() != b.in_neighbors(w).len()
            {
                continue;
            }
            for u in 0..v as u32 {
                let mu = map[u as usize];
                if a.has_arc(u, v as u32) != b.has_arc(mu, w) {
                    continue 'cand;
                }
                if a.has_arc(v as u32, u) != b.has_arc(w, mu) {
                    continue 'cand;
                }
            }
            map[v as usize] = w;
            used[w as usize] = true;
            if extend(a, b, v + 1, map, used) {
                return true;
            }
            map[v as usize] = u32::MAX;
            used[w as usize] = false;
        }
        false
    }
    let n = a.order();
    extend(a, b, 0, &mut vec![u32::MAX; n], &mut vec![false; n])
}

/// Deterministic pseudo-random stream for test data.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}
