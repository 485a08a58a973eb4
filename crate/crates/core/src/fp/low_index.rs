//! Normal subgroups of bounded index in a finitely presented group.
//!
//! A normal subgroup of index n corresponds to the regular action of the
//! quotient on its own n elements. The search builds that action directly:
//! one partial permutation per generator on the points `0..n` (point 0 the
//! identity), a partial multiplication table `mul[p][q] = p*q` whose closure
//! rules encode regularity, relator-closure propagation, and canonical
//! extension (fresh points only at the smallest undefined cell), so every
//! kernel is produced exactly once, in a canonical (BFS-standard) table.

use crate::error::{Error, Result};
use crate::fp::FpPresentation;
use crate::perm::Permutation;

const UNDEF: u32 = u32::MAX;

/// A finite quotient of a finitely presented group: the images of the
/// generators in the regular action on the quotient's elements. The kernel
/// is the normal subgroup `{w : images(w) = identity}`.
#[derive(Clone, Debug)]
pub struct QuotientRecord {
    pub index: usize,
    pub images: Vec<Permutation>,
    /// Canonical table bytes: one kernel, one certificate.
    pub certificate: Vec<u8>,
}

/// Search controls. The shunt cap and non-trivial generator constraints are
/// sound only for callers that discard the pruned quotients anyway (the
/// census pipeline does); plain enumeration must leave them unset.
#[derive(Clone, Debug)]
pub struct QuotientSearchOptions {
    pub node_budget: u64,
    /// Cap on the image order of one distinguished generator.
    pub shunt: Option<(usize, u64)>,
    /// Generators whose image must not collapse to the identity.
    pub nontrivial_generators: Vec<usize>,
}

impl Default for QuotientSearchOptions {
    fn default() -> Self {
        QuotientSearchOptions {
            node_budget: 1_000_000_000,
            shunt: None,
            nontrivial_generators: Vec::new(),
        }
    }
}

/// All normal subgroups of index exactly `n`, as quotient records in
/// canonical-table order.
pub fn normal_quotients_of_index(
    presentation: &FpPresentation,
    n: usize,
    options: &QuotientSearchOptions,
) -> Result<Vec<QuotientRecord>> {
    if n == 0 {
        return Err(Error::GroupArgument("index must be positive".into()));
    }
    let mut search = Search::new(presentation, n, options);
    search.run()?;
    Ok(search.solutions)
}

/// All normal subgroups of index at most `max_index`, ordered by index and
/// then by canonical table certificate.
pub fn low_index_normal_quotients(
    presentation: &FpPresentation,
    max_index: usize,
    options: &QuotientSearchOptions,
) -> Result<Vec<QuotientRecord>> {
    let mut out = Vec::new();
    for n in 1..=max_index {
        out.extend(normal_quotients_of_index(presentation, n, options)?);
    }
    Ok(out)
}

/// Serialises a regular table in BFS-canonical labeling: the label-invariant
/// certificate of the kernel.
pub fn canonical_regular_table_bytes(index: usize, images: &[Permutation]) -> Vec<u8> {
    // BFS relabeling from point 0, applying generator then inverse columns.
    let mut label = vec![UNDEF; index];
    let mut order = Vec::with_capacity(index);
    label[0] = 0;
    order.push(0u32);
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
    debug_assert_eq!(order.len(), index, "table must be transitive");
    let mut bytes = Vec::with_capacity(4 + images.len() * index * 4);
    bytes.extend_from_slice(&(index as u32).to_le_bytes());
    for g in images {
        for &p in &order {
            bytes.extend_from_slice(&label[g.apply(p) as usize].to_le_bytes());
        }
    }
    bytes
}

enum Trail {
    Edge { col: usize, from: u32, to: u32 },
    Mul { p: u32, q: u32, t: u32 },
    Fresh,
}

enum Event {
    Edge { col: usize, from: u32, to: u32 },
    Mul { p: u32, q: u32, t: u32 },
}

struct Search<'a> {
    n: usize,
    ncols: usize,
    /// cols[c][p]: column 2g is generator g, column 2g+1 its inverse.
    cols: Vec<Vec<u32>>,
    /// mul[p*n+q] = p*q; UNDEF when unknown.
    mul: Vec<u32>,
    /// row_inv[p*n+t] = q with mul[p*n+q] = t.
    row_inv: Vec<u32>,
    /// col_inv[q*n+t] = p with mul[p*n+q] = t.
    col_inv: Vec<u32>,
    /// Relators as column-id sequences.
    relators: Vec<Vec<usize>>,
    /// Per column: (relator, position) pairs using that column.
    occurrences: Vec<Vec<(usize, usize)>>,
    trail: Vec<Trail>,
    events: Vec<Event>,
    next_fresh: u32,
    nodes: u64,
    options: &'a QuotientSearchOptions,
    presentation_name: String,
    solutions: Vec<QuotientRecord>,
}

impl<'a> Search<'a> {
    fn new(presentation: &FpPresentation, n: usize, options: &'a QuotientSearchOptions) -> Self {
        let k = presentation.generator_count();
        let ncols = 2 * k;
        let relators: Vec<Vec<usize>> = presentation
            .normalized_relators()
            .iter()
            .map(|w| {
                w.letters()
                    .map(|(g, inv)| 2 * g + usize::from(inv))
                    .collect()
            })
            .collect();
        let mut occurrences = vec![Vec::new(); ncols];
        for (ri, r) in relators.iter().enumerate() {
            for (pos, &c) in r.iter().enumerate() {
                occurrences[c].push((ri, pos));
            }
        }
        let mut search = Search {
            n,
            ncols,
            cols: vec![vec![UNDEF; n]; ncols],
            mul: vec![UNDEF; n * n],
            row_inv: vec![UNDEF; n * n],
            col_inv: vec![UNDEF; n * n],
            relators,
            occurrences,
            trail: Vec::new(),
            events: Vec::new(),
            next_fresh: 1,
            nodes: 0,
            options,
            presentation_name: presentation.display(),
            solutions: Vec::new(),
        };
        // Point 0 is the identity: 0 * 0 = 0.
        let ok = search.set_mul(0, 0, 0);
        debug_assert!(ok);
        search
    }

    #[inline]
    fn mul_at(&self, p: u32, q: u32) -> u32 {
        self.mul[p as usize * self.n + q as usize]
    }

    fn run(&mut self) -> Result<()> {
        if !self.drain_events() {
            return Ok(());
        }
        self.dfs(0)
    }

    fn dfs(&mut self, cell_hint: usize) -> Result<()> {
        // Frontier: first undefined cell in scan order (point-major).
        let total_cells = self.next_fresh as usize * self.ncols;
        let mut cell = cell_hint;
        while cell < total_cells {
            let (p, c) = (cell / self.ncols, cell % self.ncols);
            if self.cols[c][p] == UNDEF {
                break;
            }
            cell += 1;
        }
        if cell >= total_cells {
            if self.next_fresh as usize == self.n {
                self.record_solution();
            }
            return Ok(());
        }
        let (p, c) = ((cell / self.ncols) as u32, cell % self.ncols);

        self.nodes += 1;
        if self.nodes > self.options.node_budget {
            return Err(Error::BudgetExceeded {
                what: format!(
                    "normal quotient search for `{}` at index {}",
                    self.presentation_name, self.n
                ),
                budget: self.options.node_budget,
            });
        }

        let candidate_count = self.next_fresh;
        for r in 0..candidate_count {
            if self.cols[c ^ 1][r as usize] != UNDEF {
                continue;
            }
            let mark = self.trail.len();
            if self.try_assign(c, p, r) {
                self.dfs(cell)?;
            }
            self.undo_to(mark);
        }
        if (self.next_fresh as usize) < self.n {
            let mark = self.trail.len();
            let fresh = self.next_fresh;
            self.next_fresh += 1;
            self.trail.push(Trail::Fresh);
            let ok = self.set_mul(0, fresh, fresh)
                && self.set_mul(fresh, 0, fresh)
                && self.try_assign(c, p, fresh);
            if ok {
                self.dfs(cell)?;
            }
            self.undo_to(mark);
        }
        Ok(())
    }

    fn try_assign(&mut self, c: usize, p: u32, r: u32) -> bool {
        self.set_edge(c, p, r) && self.drain_events()
    }

    fn record_solution(&mut self) {
        debug_assert!(self.mul.iter().take(self.n * self.n).all(|&x| x != UNDEF));
        let images: Vec<Permutation> = (0..self.ncols / 2)
            .map(|g| Permutation::from_images(self.cols[2 * g].clone()).expect("closed column"))
            .collect();
        let certificate = canonical_regular_table_bytes(self.n, &images);
        self.solutions.push(QuotientRecord {
            index: self.n,
            images,
            certificate,
        });
    }

    fn undo_to(&mut self, mark: usize) {
        self.events.clear();
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Trail::Edge { col, from, to } => {
                    self.cols[col][from as usize] = UNDEF;
                    self.cols[col ^ 1][to as usize] = UNDEF;
                }
                Trail::Mul { p, q, t } => {
                    self.mul[p as usize * self.n + q as usize] = UNDEF;
                    self.row_inv[p as usize * self.n + t as usize] = UNDEF;
                    self.col_inv[q as usize * self.n + t as usize] = UNDEF;
                }
                Trail::Fresh => {
                    self.next_fresh -= 1;
                }
            }
        }
    }

    fn set_edge(&mut self, c: usize, p: u32, r: u32) -> bool {
        let existing = self.cols[c][p as usize];
        if existing != UNDEF {
            return existing == r;
        }
        if self.cols[c ^ 1][r as usize] != UNDEF {
            return false;
        }
        if !self.options.nontrivial_generators.is_empty()
            && p == r
            && self.options.nontrivial_generators.contains(&(c / 2))
        {
            return false;
        }
        self.cols[c][p as usize] = r;
        self.cols[c ^ 1][r as usize] = p;
        self.trail.push(Trail::Edge { col: c, from: p, to: r });
        self.events.push(Event::Edge { col: c, from: p, to: r });
        if let Some((shunt_gen, cap)) = self.options.shunt {
            if c / 2 == shunt_gen && !self.shunt_cycles_ok(2 * shunt_gen, cap) {
                return false;
            }
        }
        true
    }

    /// After a new edge on the shunt generator's column: every closed cycle
    /// must have length at most `cap`, and all closed cycles equal length.
    fn shunt_cycles_ok(&self, col: usize, cap: u64) -> bool {
        let mut closed_len: Option<u64> = None;
        let mut seen = vec![false; self.next_fresh as usize];
        for start in 0..self.next_fresh {
            if seen[start as usize] {
                continue;
            }
            let mut p = start;
            let mut len = 0u64;
            loop {
                seen[p as usize] = true;
                let q = self.cols[col][p as usize];
                if q == UNDEF {
                    break;
                }
                len += 1;
                p = q;
                if p == start {
                    if len > cap {
                        return false;
                    }
                    match closed_len {
                        None => closed_len = Some(len),
                        Some(l) if l != len => return false,
                        _ => {}
                    }
                    break;
                }
                if seen[p as usize] {
                    break;
                }
            }
        }
        true
    }

    fn set_mul(&mut self, p: u32, q: u32, t: u32) -> bool {
        let n = self.n;
        let existing = self.mul[p as usize * n + q as usize];
        if existing != UNDEF {
            return existing == t;
        }
        // Left and right cancellation.
        if self.row_inv[p as usize * n + t as usize] != UNDEF {
            return false;
        }
        if self.col_inv[q as usize * n + t as usize] != UNDEF {
            return false;
        }
        self.mul[p as usize * n + q as usize] = t;
        self.row_inv[p as usize * n + t as usize] = q;
        self.col_inv[q as usize * n + t as usize] = p;
        self.trail.push(Trail::Mul { p, q, t });
        self.events.push(Event::Mul { p, q, t });
        true
    }

    fn drain_events(&mut self) -> bool {
        while let Some(event) = self.events.pop() {
            let ok = match event {
                Event::Edge { col, from, to } => {
                    self.process_edge(col, from, to) && self.process_edge(col ^ 1, to, from)
                }
                Event::Mul { p, q, t } => self.process_mul(p, q, t),
            };
            if !ok {
                self.events.clear();
                return false;
            }
        }
        true
    }

    fn process_edge(&mut self, c: usize, p: u32, r: u32) -> bool {
        // Relator traces through the new transition.
        for oi in 0..self.occurrences[c].len() {
            let (ri, pos) = self.occurrences[c][oi];
            if !self.trace_relator(ri, pos, p, r) {
                return false;
            }
        }
        // Multiplication closure: mul[x][pi_c(q)] = pi_c(mul[x][q]).
        let n = self.n;
        for x in 0..self.next_fresh {
            // Instances with q = p: mul[x][r] = pi_c(mul[x][p]).
            let t = self.mul_at(x, p);
            if t != UNDEF {
                let tt = self.cols[c][t as usize];
                if tt != UNDEF {
                    if !self.set_mul(x, r, tt) {
                        return false;
                    }
                } else {
                    let v = self.mul_at(x, r);
                    if v != UNDEF && !self.set_edge(c, t, v) {
                        return false;
                    }
                }
            }
            // Instances with mul[x][q] = p: mul[x][pi_c(q)] = r.
            let q = self.row_inv[x as usize * n + p as usize];
            if q != UNDEF {
                let qq = self.cols[c][q as usize];
                if qq != UNDEF {
                    if !self.set_mul(x, qq, r) {
                        return false;
                    }
                } else {
                    let q2 = self.row_inv[x as usize * n + r as usize];
                    if q2 != UNDEF && !self.set_edge(c, q, q2) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn process_mul(&mut self, p: u32, q: u32, t: u32) -> bool {
        let n = self.n;
        for c in 0..self.ncols {
            let qq = self.cols[c][q as usize];
            let tt = self.cols[c][t as usize];
            match (qq, tt) {
                (UNDEF, UNDEF) => {}
                (qq, UNDEF) => {
                    let v = self.mul_at(p, qq);
                    if v != UNDEF && !self.set_edge(c, t, v) {
                        return false;
                    }
                }
                (UNDEF, tt) => {
                    let v = self.row_inv[p as usize * n + tt as usize];
                    if v != UNDEF && !self.set_edge(c, q, v) {
                        return false;
                    }
                }
                (qq, tt) => {
                    if !self.set_mul(p, qq, tt) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Scans relator `ri` around the cycle through the transition
    /// `p --R[pos]--> r`; closes the cycle or deduces a single missing edge.
    fn trace_relator(&mut self, ri: usize, pos: usize, p: u32, r: u32) -> bool {
        let len = self.relators[ri].len();
        // Forward from position pos+1 at point r.
        let mut fwd_point = r;
        let mut i = pos + 1;
        while i < pos + len {
            let col = self.relators[ri][i % len];
            let next = self.cols[col][fwd_point as usize];
            if next == UNDEF {
                break;
            }
            fwd_point = next;
            i += 1;
        }
        if i == pos + len {
            // Complete cycle: must close up.
            return fwd_point == p;
        }
        // Backward from position pos at point p.
        let mut bwd_point = p;
        let mut j = pos + len;
        while j > i + 1 {
            let col = self.relators[ri][(j - 1) % len];
            let prev = self.cols[col ^ 1][bwd_point as usize];
            if prev == UNDEF {
                break;
            }
            bwd_point = prev;
            j -= 1;
        }
        if j == i + 1 {
            // One missing edge at position i: fwd_point -> bwd_point.
            return self.set_edge(self.relators[ri][i % len], fwd_point, bwd_point);
        }
        true
    }
}
