//! The parameterised family of finitely presented groups whose finite
//! quotients are exactly the arc-transitive symmetry groups of 2-valent
//! arc-transitive asymmetric digraphs, one family member per
//! s-arc-transitivity level `s`, abelianness degree `alpha`, and bit matrix
//! `c`; together with the reduced catalogue used by the census.

use crate::error::{Error, Result};
use crate::fp::{FpPresentation, Word};

/// Parameters `(s, alpha, c)` of a universal group. Row `j - alpha` of
/// `rows` holds the bits `c_{1,j} .. c_{2*alpha-2*s+j+1, j}` for
/// `alpha <= j <= s-1`; when `alpha == s` there are no rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalType {
    pub s: usize,
    pub alpha: usize,
    pub rows: Vec<Vec<u8>>,
    pub name: Option<String>,
}

impl UniversalType {
    pub fn new(s: usize, alpha: usize, rows: Vec<Vec<u8>>) -> Result<UniversalType> {
        if s == 0 || alpha == 0 {
            return Err(Error::UniversalType("s and alpha must be positive".into()));
        }
        if 3 * alpha < 2 * s || alpha > s {
            return Err(Error::UniversalType(format!(
                "alpha = {alpha} outside [ceil(2s/3), s] for s = {s}"
            )));
        }
        if rows.len() != s - alpha {
            return Err(Error::UniversalType(format!(
                "expected {} bit rows, got {}",
                s - alpha,
                rows.len()
            )));
        }
        for (off, row) in rows.iter().enumerate() {
            let j = alpha + off;
            let expected = 2 * alpha + j + 1 - 2 * s;
            if row.len() != expected {
                return Err(Error::UniversalType(format!(
                    "row for j = {j} must have {expected} bits, got {}",
                    row.len()
                )));
            }
            if row.iter().any(|&b| b > 1) {
                return Err(Error::UniversalType("bits must be 0 or 1".into()));
            }
        }
        Ok(UniversalType {
            s,
            alpha,
            rows,
            name: None,
        })
    }

    fn named(mut self, name: String) -> UniversalType {
        self.name = Some(name);
        self
    }

    /// The reverse type: every bit row reversed. An involution.
    pub fn reverse(&self) -> UniversalType {
        UniversalType {
            s: self.s,
            alpha: self.alpha,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().rev().copied().collect())
                .collect(),
            name: None,
        }
    }
}

fn generator_names(s: usize) -> Vec<String> {
    let letters = ["a", "b", "c", "d", "e"];
    let mut names: Vec<String> = (0..s)
        .map(|i| {
            if i < letters.len() {
                letters[i].to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect();
    names.push("g".to_string());
    names
}

/// The defining presentation of the universal group of a type: the point
/// generators are involutions, conjugation by the shunt generator shifts
/// them, low commutators vanish, and high commutators equal the bit-selected
/// involution products.
pub fn universal_group(t: &UniversalType) -> Result<FpPresentation> {
    let t = UniversalType::new(t.s, t.alpha, t.rows.clone())?; // revalidate
    let s = t.s;
    let names = generator_names(s);
    let shunt = Word::generator(s);
    let x = |i: usize| Word::generator(i);

    let mut relators = Vec::new();
    for i in 0..s {
        relators.push(x(i).pow(2));
    }
    for i in 0..s.saturating_sub(1) {
        relators.push(x(i).conjugate(&shunt).concat(&x(i + 1)));
    }
    for j in 1..s {
        let comm = x(0).commutator(&x(j));
        if j < t.alpha {
            relators.push(comm);
        } else {
            let row = &t.rows[j - t.alpha];
            let mut rhs = Word::empty();
            for (i, &bit) in row.iter().enumerate() {
                if bit == 1 {
                    rhs = rhs.concat(&x(s - t.alpha + i));
                }
            }
            relators.push(comm.concat(&rhs));
        }
    }
    FpPresentation::new(names, relators)
}

/// Reduced catalogue of universal types with stabiliser order at most 32:
/// one representative per reverse-type pair, excluding bit matrices that
/// collapse to a larger `alpha`, named `A_s^i` with larger `alpha` first.
pub fn universal_catalogue(s_max: usize) -> Result<Vec<(UniversalType, FpPresentation)>> {
    if s_max == 0 || s_max > 5 {
        return Err(Error::UniversalType(
            "catalogue covers 1 <= s <= 5".into(),
        ));
    }
    let mut out = Vec::new();
    for s in 1..=s_max {
        let alpha_min = (2 * s).div_ceil(3);
        let mut serial = 1usize;
        for alpha in (alpha_min..=s).rev() {
            if alpha == s {
                let t = UniversalType::new(s, alpha, Vec::new())?
                    .named(format!("A_{s}^{serial}"));
                let p = universal_group(&t)?;
                out.push((t, p));
                serial += 1;
                continue;
            }
            // For s <= 5 only alpha = s - 1 occurs here: a single bit row.
            debug_assert_eq!(s - alpha, 1);
            let j = alpha;
            let len = 2 * alpha + j + 1 - 2 * s;
            let mut reps: Vec<Vec<u8>> = Vec::new();
            for mask in 1u32..(1 << len) {
                let row: Vec<u8> = (0..len).map(|i| ((mask >> i) & 1) as u8).collect();
                let reversed: Vec<u8> = row.iter().rev().copied().collect();
                // Keep the member of the pair whose involution word is
                // lexicographically smaller (earlier letters first).
                if row_word(&row) <= row_word(&reversed) {
                    reps.push(row);
                }
            }
            reps.sort_by_key(|r| (r.iter().filter(|&&b| b == 1).count(), row_word(r)));
            for row in reps {
                let t = UniversalType::new(s, alpha, vec![row])?
                    .named(format!("A_{s}^{serial}"));
                let p = universal_group(&t)?;
                out.push((t, p));
                serial += 1;
            }
        }
    }
    Ok(out)
}

/// Positions of the set bits, i.e. the letter sequence of the involution
/// product selected by a bit row.
fn row_word(row: &[u8]) -> Vec<usize> {
    row.iter()
        .enumerate()
        .filter(|&(_, &b)| b == 1)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::parse_presentation;

    fn relator_multiset(p: &FpPresentation) -> Vec<Word> {
        let mut rels = p.normalized_relators();
        rels.sort();
        rels
    }

    #[test]
    fn smallest_type_is_free_product() {
        let t = UniversalType::new(1, 1, vec![]).unwrap();
        let p = universal_group(&t).unwrap();
        let expected = parse_presentation("a,g | a^2").unwrap();
        assert_eq!(relator_multiset(&p), relator_multiset(&expected));
    }

    #[test]
    fn type_with_bit_row_has_commutator_relator() {
        let t = UniversalType::new(3, 2, vec![vec![1]]).unwrap();
        let p = universal_group(&t).unwrap();
        let expected =
            parse_presentation("a,b,c,g | a^2,b^2,c^2,a^gb,b^gc,[a,b],[a,c]b").unwrap();
        assert_eq!(relator_multiset(&p), relator_multiset(&expected));
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(UniversalType::new(3, 1, vec![]).is_err());
        assert!(UniversalType::new(0, 1, vec![]).is_err());
        assert!(UniversalType::new(3, 2, vec![]).is_err());
        assert!(UniversalType::new(3, 2, vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn reverse_is_involutive() {
        let t = UniversalType::new(5, 4, vec![vec![1, 0, 0]]).unwrap();
        let r = t.reverse();
        assert_eq!(r.rows, vec![vec![0, 0, 1]]);
        assert_eq!(r.reverse().rows, t.rows);
        let palindrome = UniversalType::new(5, 4, vec![vec![1, 0, 1]]).unwrap();
        assert_eq!(palindrome.reverse().rows, palindrome.rows);
    }

    #[test]
    fn catalogue_sizes() {
        assert_eq!(universal_catalogue(1).unwrap().len(), 1);
        assert_eq!(universal_catalogue(2).unwrap().len(), 2);
        assert_eq!(universal_catalogue(3).unwrap().len(), 4);
        assert_eq!(universal_catalogue(4).unwrap().len(), 7);
        assert_eq!(universal_catalogue(5).unwrap().len(), 13);
        assert!(universal_catalogue(6).is_err());
    }

    #[test]
    fn catalogue_names_follow_alpha_order() {
        let cat = universal_catalogue(5).unwrap();
        let names: Vec<&str> = cat
            .iter()
            .map(|(t, _)| t.name.as_deref().unwrap())
            .collect();
        assert_eq!(
            names,
            vec![
                "A_1^1", "A_2^1", "A_3^1", "A_3^2", "A_4^1", "A_4^2", "A_4^3", "A_5^1",
                "A_5^2", "A_5^3", "A_5^4", "A_5^5", "A_5^6"
            ]
        );
    }
}
