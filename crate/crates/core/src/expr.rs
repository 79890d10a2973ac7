//! Trace expressions over Gaussian letters and spectator `Y` factors, and the
//! canonical cyclic trace monomials they produce.

use std::fmt;

use thiserror::Error;

/// Random-matrix ensembles a Gaussian letter can belong to.  `Wishart` is a
/// surface form only: the compiler rewrites `W ↦ XᵀX` into `Rect` letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaussKind {
    Ginibre,
    Goe,
    Rect,
    Wishart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LetterKind {
    Gaussian { kind: GaussKind, instance: u32 },
    Spectator { label: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub kind: LetterKind,
    pub transpose: bool,
}

impl Letter {
    pub fn gaussian(kind: GaussKind, instance: u32, transpose: bool) -> Letter {
        Letter {
            kind: LetterKind::Gaussian { kind, instance },
            transpose,
        }
    }

    pub fn spectator(label: u32, transpose: bool) -> Letter {
        Letter {
            kind: LetterKind::Spectator { label },
            transpose,
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.kind, LetterKind::Gaussian { .. })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LetterKind::Gaussian { kind, instance } => {
                let c = match kind {
                    GaussKind::Ginibre => 'Z',
                    GaussKind::Goe => 'T',
                    GaussKind::Rect => 'X',
                    GaussKind::Wishart => 'W',
                };
                write!(f, "{c}")?;
                if instance != 1 {
                    write!(f, "{instance}")?;
                }
            }
            LetterKind::Spectator { label } => write!(f, "Y{label}")?,
        }
        if self.transpose {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// One trace: an ordered (cyclic) word of letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TraceWord(pub Vec<Letter>);

impl TraceWord {
    /// The word read backwards with every transpose flag toggled; same matrix
    /// under the transpose of the product.
    pub fn reversed_transposed(&self) -> TraceWord {
        TraceWord(
            self.0
                .iter()
                .rev()
                .map(|l| Letter {
                    kind: l.kind,
                    transpose: !l.transpose,
                })
                .collect(),
        )
    }

    pub fn concat(words: &[&TraceWord]) -> TraceWord {
        TraceWord(words.iter().flat_map(|w| w.0.iter().copied()).collect())
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tr(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A product of traces.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expression(pub Vec<TraceWord>);

impl Expression {
    pub fn single(word: TraceWord) -> Expression {
        Expression(vec![word])
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// A cyclic word of `(Y-label, transpose)` entries, stored in canonical form:
/// the lexicographic minimum over all rotations of the word and of the
/// reversed word with all flags toggled (`tr(M) = tr(Mᵀ)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceMonomial(Vec<(u32, bool)>);

impl TraceMonomial {
    pub fn identity() -> TraceMonomial {
        TraceMonomial(Vec::new())
    }

    pub fn new(entries: Vec<(u32, bool)>) -> TraceMonomial {
        if entries.is_empty() {
            return TraceMonomial(entries);
        }
        let mut best: Option<Vec<(u32, bool)>> = None;
        let rev: Vec<(u32, bool)> = entries.iter().rev().map(|&(l, t)| (l, !t)).collect();
        for word in [&entries, &rev] {
            for r in 0..word.len() {
                let mut rot = word[r..].to_vec();
                rot.extend_from_slice(&word[..r]);
                if best.as_ref().map_or(true, |b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        TraceMonomial(best.unwrap())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[(u32, bool)] {
        &self.0
    }
}

impl fmt::Display for TraceMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (label, t)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "Y{label}")?;
            if *t {
                write!(f, "t")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character `{0}` at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("expected `{expected}` at byte {at}")]
    Expected { expected: String, at: usize },
    #[error("spectator Y needs a label in 1..=99, got `{0}`")]
    BadSpectator(String),
    #[error("empty expression")]
    Empty,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_whitespace() || self.src[self.pos] == b'*')
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos])
                .ok()?
                .parse()
                .ok()
        }
    }

    fn letter(&mut self) -> Result<Letter, ParseError> {
        let at = self.pos;
        let c = self.peek().ok_or(ParseError::Expected {
            expected: "letter".into(),
            at,
        })? as char;
        self.pos += 1;
        let kind = match c {
            'Z' => Some(GaussKind::Ginibre),
            'T' => Some(GaussKind::Goe),
            'X' => Some(GaussKind::Rect),
            'W' => Some(GaussKind::Wishart),
            'Y' => None,
            _ => return Err(ParseError::UnexpectedChar(c, at)),
        };
        let letter = match kind {
            Some(k) => {
                let instance = self.number().unwrap_or(1);
                let transpose = self.eat_quote();
                Letter::gaussian(k, instance, transpose)
            }
            None => {
                let label = self
                    .number()
                    .filter(|&l| (1..=99).contains(&l))
                    .ok_or_else(|| {
                        ParseError::BadSpectator(
                            String::from_utf8_lossy(
                                &self.src[at..(at + 3).min(self.src.len())],
                            )
                            .into_owned(),
                        )
                    })?;
                let transpose = self.eat_quote();
                Letter::spectator(label, transpose)
            }
        };
        Ok(letter)
    }

    fn eat_quote(&mut self) -> bool {
        if self.peek() == Some(b'\'') {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// A bare word: letters until the terminator (')', ';' or end).
    fn word(&mut self) -> Result<TraceWord, ParseError> {
        let mut letters = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b')') | Some(b';') => break,
                _ => letters.push(self.letter()?),
            }
        }
        Ok(TraceWord(letters))
    }
}

/// Parses an expression: one or more `tr(...)` factors, joined by whitespace
/// or `*`.
pub fn parse_expression(text: &str) -> Result<Expression, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut traces = Vec::new();
    loop {
        p.skip_ws();
        if p.peek().is_none() {
            break;
        }
        let at = p.pos;
        if !text[p.pos..].starts_with("tr") {
            return Err(ParseError::Expected {
                expected: "tr(".into(),
                at,
            });
        }
        p.pos += 2;
        p.skip_ws();
        if p.peek() != Some(b'(') {
            return Err(ParseError::Expected {
                expected: "(".into(),
                at: p.pos,
            });
        }
        p.pos += 1;
        let word = p.word()?;
        if p.peek() != Some(b')') {
            return Err(ParseError::Expected {
                expected: ")".into(),
                at: p.pos,
            });
        }
        p.pos += 1;
        traces.push(word);
    }
    if traces.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(Expression(traces))
}

/// Parses a bare word without the `tr(...)` wrapper, e.g. `"Z Z Z'"`.
pub fn parse_word(text: &str) -> Result<TraceWord, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let w = p.word()?;
    if p.peek().is_some() {
        return Err(ParseError::Expected {
            expected: "end of word".into(),
            at: p.pos,
        });
    }
    Ok(w)
}

/// Parses a list of words separated by `;`, e.g. `"Z Z Z'; T T; W W"`.
pub fn parse_word_list(text: &str) -> Result<Vec<TraceWord>, ParseError> {
    let mut out = Vec::new();
    for part in text.split(';') {
        out.push(parse_word(part)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_ginibre_example() {
        let e = parse_expression(
            "tr(Z Y1 Z Y2 Z' Y3 Z' Y4) tr(Z Y5 Z' Y6 Z Y7 Z' Y8)",
        )
        .unwrap();
        assert_eq!(e.0.len(), 2);
        assert_eq!(e.0[0].0.len(), 8);
        assert_eq!(e.0[0].0[0], Letter::gaussian(GaussKind::Ginibre, 1, false));
        assert_eq!(e.0[0].0[4], Letter::gaussian(GaussKind::Ginibre, 1, true));
        assert_eq!(e.0[0].0[1], Letter::spectator(1, false));
    }

    #[test]
    fn parse_juxtaposed_and_instances() {
        let e = parse_expression("tr(ZZ2T'W3)").unwrap();
        assert_eq!(
            e.0[0].0,
            vec![
                Letter::gaussian(GaussKind::Ginibre, 1, false),
                Letter::gaussian(GaussKind::Ginibre, 2, false),
                Letter::gaussian(GaussKind::Goe, 1, true),
                Letter::gaussian(GaussKind::Wishart, 3, false),
            ]
        );
    }

    #[test]
    fn parse_failures() {
        assert!(parse_expression("").is_err());
        assert!(parse_expression("tr(Q)").is_err());
        assert!(parse_expression("tr(Z").is_err());
        assert!(parse_expression("Z Z").is_err());
        assert!(parse_expression("tr(Y)").is_err());
    }

    #[test]
    fn monomial_canonicalization() {
        // tr(Y1 Y3' Y6 Y5' Y7') == tr(Y7 Y5 Y6' Y3 Y1')
        let a = TraceMonomial::new(vec![(1, false), (3, true), (6, false), (5, true), (7, true)]);
        let b = TraceMonomial::new(vec![(7, false), (5, false), (6, true), (3, false), (1, true)]);
        assert_eq!(a, b);
        // rotation invariance
        let c = TraceMonomial::new(vec![(3, true), (6, false), (5, true), (7, true), (1, false)]);
        assert_eq!(a, c);
        assert!(TraceMonomial::identity().is_identity());
    }

    #[test]
    fn word_list_roundtrip() {
        let ws = parse_word_list("Z Z Z'; T T; W W").unwrap();
        assert_eq!(ws.len(), 3);
        assert_eq!(ws[0].0.len(), 3);
        let rt = ws[0].reversed_transposed();
        assert_eq!(
            rt.0,
            vec![
                Letter::gaussian(GaussKind::Ginibre, 1, false),
                Letter::gaussian(GaussKind::Ginibre, 1, true),
                Letter::gaussian(GaussKind::Ginibre, 1, true),
            ]
        );
    }
}
