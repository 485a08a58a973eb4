use crate::error::{Error, Result};
use crate::fp::Word;

/// A finite presentation: named generators and relator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl FpPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<FpPresentation> {
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= generators.len() {
                    return Err(Error::Parse {
                        position: 0,
                        message: format!("relator references undeclared generator #{g}"),
                    });
                }
            }
        }
        Ok(FpPresentation { generators, relators })
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Relators cyclically reduced, deduplicated, empty words dropped.
    pub fn normalized_relators(&self) -> Vec<Word> {
        let mut out: Vec<Word> = Vec::new();
        for r in &self.relators {
            let c = r.cyclically_reduced();
            if !c.is_empty() && !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    pub fn display(&self) -> String {
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.display(&self.generators))
            .collect();
        format!("{} | {}", self.generators.join(","), rels.join(","))
    }
}

/// Parses a presentation of the form `a,b,g | a^2, b^2, a^gb, [a,b]`.
///
/// Grammar: generator names before `|`; relators after, comma-separated.
/// Juxtaposition multiplies, `^k` is an integer power, `w^g` conjugation by
/// an atom, `[u,v]` the commutator, parentheses group.
pub fn parse_presentation(text: &str) -> Result<FpPresentation> {
    let bar = text.find('|').ok_or_else(|| Error::Parse {
        position: 0,
        message: "expected `gens | relators`".into(),
    })?;
    let gen_part = &text[..bar];
    let rel_part = &text[bar + 1..];

    let mut generators = Vec::new();
    for name in gen_part.split(',') {
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::Parse {
                position: 0,
                message: "empty generator name".into(),
            });
        }
        if !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::Parse {
                position: 0,
                message: format!("invalid generator name `{name}`"),
            });
        }
        if generators.contains(&name.to_string()) {
            return Err(Error::Parse {
                position: 0,
                message: format!("duplicate generator `{name}`"),
            });
        }
        generators.push(name.to_string());
    }

    let mut relators = Vec::new();
    for chunk in split_top_level(rel_part) {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let mut parser = WordParser {
            input: chunk.as_bytes(),
            pos: 0,
            offset: bar + 1,
            generators: &generators,
        };
        let w = parser.parse_word()?;
        parser.skip_ws();
        if parser.pos < parser.input.len() {
            return Err(parser.error("trailing input"));
        }
        relators.push(w);
    }
    FpPresentation::new(generators, relators)
}

/// Splits on commas that are not nested inside brackets or parentheses.
fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in text.chars() {
        match c {
            '[' | '(' => {
                depth += 1;
                current.push(c);
            }
            ']' | ')' => {
                depth -= 1;
                current.push(c);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut current));
            }
            _ => current.push(c),
        }
    }
    out.push(current);
    out
}

struct WordParser<'a> {
    input: &'a [u8],
    pos: usize,
    offset: usize,
    generators: &'a [String],
}

impl<'a> WordParser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.offset + self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    /// word := factor+
    fn parse_word(&mut self) -> Result<Word> {
        let mut out = Word::empty();
        let mut any = false;
        while let Some(c) = self.peek() {
            if c == b']' || c == b')' || c == b',' {
                break;
            }
            out = out.concat(&self.parse_factor()?);
            any = true;
        }
        if !any {
            return Err(self.error("expected a word"));
        }
        Ok(out)
    }

    /// factor := atom ('^' (integer | atom))*
    fn parse_factor(&mut self) -> Result<Word> {
        let mut base = self.parse_atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if c == b'-' || c.is_ascii_digit() => {
                    let k = self.parse_integer()?;
                    base = base.pow(k);
                }
                _ => {
                    let exp = self.parse_atom()?;
                    base = base.conjugate(&exp);
                }
            }
        }
        Ok(base)
    }

    /// atom := name | '(' word ')' | '[' word ',' word ']'
    fn parse_atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.parse_word()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.parse_word()?;
                if self.peek() != Some(b',') {
                    return Err(self.error("expected `,` in commutator"));
                }
                self.pos += 1;
                let v = self.parse_word()?;
                if self.peek() != Some(b']') {
                    return Err(self.error("expected `]`"));
                }
                self.pos += 1;
                Ok(u.commutator(&v))
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                // Longest declared generator name starting here; names may
                // be juxtaposed without separators (e.g. `ab` = a then b).
                let start = self.pos;
                let rest = &self.input[start..];
                let mut best: Option<usize> = None;
                for (idx, name) in self.generators.iter().enumerate() {
                    if rest.starts_with(name.as_bytes())
                        && best.is_none_or(|b: usize| {
                            name.len() > self.generators[b].len()
                        })
                    {
                        best = Some(idx);
                    }
                }
                match best {
                    Some(idx) => {
                        self.pos += self.generators[idx].len();
                        Ok(Word::generator(idx))
                    }
                    None => {
                        let mut end = start;
                        while end < self.input.len()
                            && (self.input[end].is_ascii_alphanumeric() || self.input[end] == b'_')
                        {
                            end += 1;
                        }
                        let name = std::str::from_utf8(&self.input[start..end]).unwrap();
                        Err(Error::Parse {
                            position: self.offset + start,
                            message: format!("undeclared generator `{name}`"),
                        })
                    }
                }
            }
            _ => Err(self.error("expected an atom")),
        }
    }

    fn parse_integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.input.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("expected an integer"))
    }
}
