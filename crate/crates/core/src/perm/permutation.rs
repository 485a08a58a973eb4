use std::fmt;

use crate::error::Error;

/// A permutation of the points `0..degree`, stored as its image vector.
///
/// Permutations act on the right: `p^g = g.apply(p)`, and `(g * h)` means
/// "apply `g`, then `h`".
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from an image vector, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if (x as usize) >= n || seen[x as usize] {
                return Err(Error::InvalidPermutation);
            }
            seen[x as usize] = true;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// Builds the permutation of `0..degree` given by disjoint cycles.
    /// Points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, Error> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for i in 0..cycle.len() {
                let from = cycle[i] as usize;
                let to = cycle[(i + 1) % cycle.len()];
                if from >= degree || (to as usize) >= degree || moved[from] {
                    return Err(Error::InvalidPermutation);
                }
                moved[from] = true;
                images[from] = to;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    /// Conjugate `self^other = other^-1 * self * other`.
    pub fn conjugate_by(&self, other: &Permutation) -> Permutation {
        other.inverse().then(self).then(other)
    }

    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    /// The cycles of the permutation, each rotated so its minimum comes
    /// first, sorted by that minimum. Fixed points are omitted.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n as u32 {
            if seen[start as usize] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p as usize] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }

    /// Order of the permutation, or `None` if it exceeds `cap`.
    pub fn order_capped(&self, cap: u64) -> Option<u64> {
        let mut order: u64 = 1;
        for cycle in self.cycles() {
            let len = cycle.len() as u64;
            let g = gcd(order, len);
            order = order.checked_mul(len / g)?;
            if order > cap {
                return None;
            }
        }
        Some(order)
    }

    /// True when all cycles (fixed points excluded) share one length.
    /// A fixed-point-free permutation with this property is semiregular.
    pub fn is_semiregular(&self) -> bool {
        let mut len = None;
        for cycle in self.cycles() {
            match len {
                None => len = Some(cycle.len()),
                Some(l) if l != cycle.len() => return false,
                _ => {}
            }
        }
        true
    }

    pub fn moves_any_point(&self) -> bool {
        !self.is_identity()
    }

    pub fn smallest_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    pub fn fixes(&self, point: u32) -> bool {
        self.apply(point) == point
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
