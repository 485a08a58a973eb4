//! Coset enumeration for a subgroup of a finitely presented group
//! (HLT strategy with coincidence handling).

use crate::error::{Error, Result};
use crate::fp::{FpPresentation, Word};
use crate::perm::Permutation;

const UNDEF: u32 = u32::MAX;

/// A closed coset table: the number of cosets and the action of each
/// generator on them. Coset 0 is the subgroup.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub index: usize,
    pub actions: Vec<Permutation>,
}

/// Enumerates the cosets of the subgroup generated by `subgroup` words.
/// Fails with a cap error when more than `coset_cap` cosets would be
/// allocated (the enumeration need not terminate for infinite index).
pub fn todd_coxeter(
    presentation: &FpPresentation,
    subgroup: &[Word],
    coset_cap: usize,
) -> Result<CosetTable> {
    let k = presentation.generator_count();
    let ncols = 2 * k;
    let relators: Vec<Vec<usize>> = presentation
        .normalized_relators()
        .iter()
        .map(word_cols)
        .collect();
    let subgroup_words: Vec<Vec<usize>> = subgroup.iter().map(word_cols).collect();

    let mut table = Table {
        cols: vec![vec![UNDEF]; ncols],
        parent: vec![0],
        live: vec![true],
        cap: coset_cap,
        pending: Vec::new(),
    };

    // Subgroup generators fix coset 0.
    for w in &subgroup_words {
        table.scan_and_fill(0, w)?;
        table.process_coincidences()?;
    }

    let mut coset = 0usize;
    loop {
        let total = table.parent.len();
        if coset >= total {
            break;
        }
        if !table.live[coset] {
            coset += 1;
            continue;
        }
        for r in &relators {
            if !table.live[coset] {
                break;
            }
            table.scan_and_fill(coset as u32, r)?;
            table.process_coincidences()?;
        }
        // Row filling: generators absent from the relators still need total
        // columns, and the enumeration must keep defining cosets to make
        // progress towards closure.
        for col in 0..ncols {
            if !table.live[coset] {
                break;
            }
            if table.cols[col][coset] == UNDEF {
                let fresh = table.new_coset()?;
                table.set(col, coset as u32, fresh);
                table.process_coincidences()?;
            }
        }
        coset += 1;
    }

    // Compress live cosets to 0..index.
    let mut remap = vec![UNDEF; table.parent.len()];
    let mut live_order = Vec::new();
    for (i, slot) in remap.iter_mut().enumerate() {
        if table.live[i] {
            *slot = live_order.len() as u32;
            live_order.push(i);
        }
    }
    let index = live_order.len();
    let mut actions = Vec::with_capacity(k);
    for g in 0..k {
        let images: Vec<u32> = live_order
            .iter()
            .map(|&i| {
                let t = table.cols[2 * g][i];
                debug_assert_ne!(t, UNDEF, "closed table");
                remap[table.rep(t) as usize]
            })
            .collect();
        actions.push(Permutation::from_images(images)?);
    }
    Ok(CosetTable { index, actions })
}

fn word_cols(w: &Word) -> Vec<usize> {
    w.letters().map(|(g, inv)| 2 * g + usize::from(inv)).collect()
}

struct Table {
    cols: Vec<Vec<u32>>,
    /// Union-find over cosets for coincidence merging.
    parent: Vec<u32>,
    live: Vec<bool>,
    cap: usize,
    pending: Vec<(u32, u32)>,
}

impl Table {
    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = c;
        while self.parent[cur as usize] != cur {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn new_coset(&mut self) -> Result<u32> {
        if self.parent.len() >= self.cap {
            return Err(Error::CapExceeded {
                what: "coset enumeration",
                cap: self.cap as u64,
            });
        }
        let id = self.parent.len() as u32;
        self.parent.push(id);
        self.live.push(true);
        for col in self.cols.iter_mut() {
            col.push(UNDEF);
        }
        Ok(id)
    }

    fn set(&mut self, col: usize, from: u32, to: u32) {
        // Record a coincidence instead of overwriting.
        let existing = self.cols[col][from as usize];
        if existing != UNDEF {
            if self.rep(existing) != self.rep(to) {
                self.pending.push((existing, to));
            }
            return;
        }
        self.cols[col][from as usize] = to;
        let back = self.cols[col ^ 1][to as usize];
        if back == UNDEF {
            self.cols[col ^ 1][to as usize] = from;
        } else if self.rep(back) != self.rep(from) {
            self.pending.push((back, from));
        }
    }

    /// Scans `word` from `start`, requiring the walk to return to `start`;
    /// allocates cosets to fill every gap (HLT).
    fn scan_and_fill(&mut self, start: u32, word: &[usize]) -> Result<()> {
        if word.is_empty() {
            return Ok(());
        }
        let start = self.rep(start);
        // Forward as far as defined.
        let mut f = start;
        let mut i = 0;
        while i < word.len() {
            let next = self.cols[word[i]][f as usize];
            if next == UNDEF {
                break;
            }
            f = self.rep(next);
            i += 1;
        }
        if i == word.len() {
            if f != start {
                self.pending.push((f, start));
            }
            return Ok(());
        }
        // Backward as far as defined.
        let mut b = start;
        let mut j = word.len();
        while j > i + 1 {
            let prev = self.cols[word[j - 1] ^ 1][b as usize];
            if prev == UNDEF {
                break;
            }
            b = self.rep(prev);
            j -= 1;
        }
        if j == i + 1 {
            // Single gap: deduction.
            self.set(word[i], f, b);
            return Ok(());
        }
        // Fill the first gap with a new coset and continue.
        let fresh = self.new_coset()?;
        self.set(word[i], f, fresh);
        self.scan_and_fill(start, word)
    }

    fn process_coincidences(&mut self) -> Result<()> {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.rep(a);
            let b = self.rep(b);
            if a == b {
                continue;
            }
            // Keep the smaller representative.
            let (keep, drop) = if a < b { (a, b) } else { (b, a) };
            self.parent[drop as usize] = keep;
            self.live[drop as usize] = false;
            for col in 0..self.cols.len() {
                let t = self.cols[col][drop as usize];
                if t != UNDEF {
                    self.cols[col][drop as usize] = UNDEF;
                    let target = self.rep(t);
                    self.set(col, keep, target);
                }
            }
        }
        Ok(())
    }
}
