use std::fmt;

/// A word in the generators of a finitely presented group. Letters are
/// `+(g+1)` for generator `g` and `-(g+1)` for its inverse; words are kept
/// freely reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn generator(g: usize) -> Word {
        Word {
            letters: vec![g as i32 + 1],
        }
    }

    pub fn from_letters(letters: Vec<i32>) -> Word {
        let mut w = Word { letters };
        w.reduce();
        w
    }

    /// Letters as (generator index, is_inverse) pairs.
    pub fn letters(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.letters
            .iter()
            .map(|&l| ((l.unsigned_abs() - 1) as usize, l < 0))
    }

    pub fn raw(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters
            .iter()
            .map(|&l| (l.unsigned_abs() - 1) as usize)
            .max()
    }

    fn reduce(&mut self) {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&(-l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        self.letters = out;
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::from_letters(letters)
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `self^g = g^-1 * self * g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        g.inverse().concat(self).concat(g)
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.inverse().concat(&other.inverse()).concat(self).concat(other)
    }

    /// Cyclic reduction: strips matching first/last letters.
    pub fn cyclically_reduced(&self) -> Word {
        let mut letters = self.letters.clone();
        while letters.len() >= 2 && letters.first() == letters.last().map(|&l| -l).as_ref() {
            letters.pop();
            letters.remove(0);
        }
        Word { letters }
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            let gen = &names[(l.unsigned_abs() - 1) as usize];
            let exp = if l < 0 { -(run as i64) } else { run as i64 };
            if exp == 1 {
                out.push_str(gen);
            } else {
                out.push_str(&format!("{}^{}", gen, exp));
            }
            i += run;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        let w = Word::from_letters(vec![1, -1, 2]);
        assert_eq!(w.raw(), &[2]);
        let w = Word::from_letters(vec![1, 2, -2, -1]);
        assert!(w.is_empty());
    }

    #[test]
    fn inverse_and_concat() {
        let w = Word::from_letters(vec![1, 2]);
        assert!(w.concat(&w.inverse()).is_empty());
        assert_eq!(w.inverse().raw(), &[-2, -1]);
    }

    #[test]
    fn powers_and_commutators() {
        let a = Word::generator(0);
        assert_eq!(a.pow(3).raw(), &[1, 1, 1]);
        assert_eq!(a.pow(-2).raw(), &[-1, -1]);
        let b = Word::generator(1);
        assert_eq!(a.commutator(&b).raw(), &[-1, -2, 1, 2]);
        assert_eq!(a.conjugate(&b).raw(), &[-2, 1, 2]);
    }

    #[test]
    fn cyclic_reduction() {
        let w = Word::from_letters(vec![-2, 1, 1, 2]);
        assert_eq!(w.cyclically_reduced().raw(), &[1, 1]);
    }
}
