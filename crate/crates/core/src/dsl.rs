//! Line-oriented text format for reaction networks.
//!
//! ```text
//! # low-pass filter with gain
//! species Vin = 1
//! Vout ->{1} 0
//! Vin ->{1} Vin + Vout
//! ```
//!
//! `species NAME [= VALUE]` declares a species and its initial concentration
//! (default 0). A reaction is `[m]R + ... ->{rate} [n]P + ...`; `0` denotes an
//! empty side and `#` starts a comment. Species that appear only in reactions
//! are declared implicitly with concentration 0, in order of first use.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::network::{Multiset, Network, NetworkError, Reaction, Species, MAX_MULTIPLICITY};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("species `{0}` declared twice")]
    DuplicateSpecies(String),
    #[error("rate constant must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("initial concentration of `{0}` must be nonnegative, got {1}")]
    NegativeConcentration(String, f64),
    #[error("multiplicity must be in 1..={MAX_MULTIPLICITY}, got {0}")]
    BadMultiplicity(u64),
}

pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut net = Network::new();
    let mut declared: HashSet<String> = HashSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(line, lineno + 1);
        cur.skip_ws();
        if cur.at_end() {
            continue;
        }
        if cur.try_keyword("species") {
            parse_declaration(&mut cur, &mut net, &mut declared)?;
        } else {
            let r = parse_reaction(&mut cur)?;
            net.add_reaction(r)
                .map_err(|e| cur.error_here(from_network(e)))?;
        }
    }
    Ok(net)
}

fn parse_declaration(
    cur: &mut Cursor,
    net: &mut Network,
    declared: &mut HashSet<String>,
) -> Result<(), ParseError> {
    cur.skip_ws();
    let col = cur.column();
    let name = cur.ident()?;
    cur.skip_ws();
    let init = if cur.eat('=') {
        cur.skip_ws();
        let vcol = cur.column();
        let v = cur.number()?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(cur.error_at(vcol, ParseErrorKind::NegativeConcentration(name, v)));
        }
        v
    } else {
        0.0
    };
    cur.skip_ws();
    cur.expect_end()?;

    if !declared.insert(name.clone()) {
        return Err(cur.error_at(col, ParseErrorKind::DuplicateSpecies(name)));
    }
    // A reaction may have mentioned the species already.
    let result = if net.contains(&name) {
        net.set_init(&name, init).map(|_| ())
    } else {
        net.add_species(&name, init).map(|_| ())
    };
    result.map_err(|e| cur.error_at(col, from_network(e)))
}

fn parse_reaction(cur: &mut Cursor) -> Result<Reaction, ParseError> {
    let reactants = parse_side(cur)?;
    cur.skip_ws();
    if !cur.eat_str("->") {
        return Err(cur.error_here(ParseErrorKind::Syntax("expected `->{rate}`".into())));
    }
    if !cur.eat('{') {
        return Err(cur.error_here(ParseErrorKind::Syntax("expected `{` after `->`".into())));
    }
    cur.skip_ws();
    let rcol = cur.column();
    let rate = cur.number()?;
    cur.skip_ws();
    if !cur.eat('}') {
        return Err(cur.error_here(ParseErrorKind::Syntax("expected `}`".into())));
    }
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(cur.error_at(rcol, ParseErrorKind::NonPositiveRate(rate)));
    }
    let products = parse_side(cur)?;
    cur.skip_ws();
    cur.expect_end()?;
    Reaction::from_multisets(reactants, products, rate)
        .map_err(|e| cur.error_at(1, from_network(e)))
}

fn parse_side(cur: &mut Cursor) -> Result<Multiset, ParseError> {
    let mut side = Multiset::new();
    cur.skip_ws();
    let start = cur.column();
    let mut terms = 0usize;
    let mut saw_empty = false;
    loop {
        cur.skip_ws();
        let col = cur.column();
        let mult = if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let digits = cur.digits();
            let m: u64 = digits.parse().unwrap_or(u64::MAX);
            cur.skip_ws();
            if m == 0 && !cur.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                saw_empty = true;
                terms += 1;
                None
            } else {
                if m == 0 || m > u64::from(MAX_MULTIPLICITY) {
                    return Err(cur.error_at(col, ParseErrorKind::BadMultiplicity(m)));
                }
                Some(m as u32)
            }
        } else {
            Some(1)
        };
        if let Some(m) = mult {
            let name = cur.ident()?;
            let s = Species::new(name).map_err(|e| cur.error_at(col, from_network(e)))?;
            let entry = side.entry(s).or_insert(0);
            *entry += m;
            if *entry > MAX_MULTIPLICITY {
                return Err(cur.error_at(col, ParseErrorKind::BadMultiplicity(u64::from(*entry))));
            }
            terms += 1;
        }
        cur.skip_ws();
        if !cur.eat('+') {
            break;
        }
    }
    if saw_empty && terms > 1 {
        return Err(cur.error_at(
            start,
            ParseErrorKind::Syntax("`0` must stand alone for an empty side".into()),
        ));
    }
    Ok(side)
}

fn from_network(e: NetworkError) -> ParseErrorKind {
    match e {
        NetworkError::DuplicateSpecies(s) => ParseErrorKind::DuplicateSpecies(s),
        NetworkError::NonPositiveRate(r) => ParseErrorKind::NonPositiveRate(r),
        NetworkError::NegativeConcentration { name, value } => {
            ParseErrorKind::NegativeConcentration(name, value)
        }
        NetworkError::BadMultiplicity { mult, .. } => ParseErrorKind::BadMultiplicity(mult.into()),
        other => ParseErrorKind::Syntax(other.to_string()),
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars[self.pos..].iter().take(n).copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    /// Matches `word` only when followed by whitespace or end of line.
    fn try_keyword(&mut self, word: &str) -> bool {
        let save = self.pos;
        if self.eat_str(word) && self.peek().is_none_or(char::is_whitespace) {
            return true;
        }
        self.pos = save;
        false
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => {
                return Err(self.error_here(ParseErrorKind::Syntax(format!(
                    "expected species name, found `{c}`"
                ))))
            }
            None => {
                return Err(self.error_here(ParseErrorKind::Syntax(
                    "expected species name, found end of line".into(),
                )))
            }
        }
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let col = self.column();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'))
        {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>().map_err(|_| {
            self.error_at(
                col,
                ParseErrorKind::Syntax(format!("expected a number, found `{text}`")),
            )
        })
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error_here(ParseErrorKind::Syntax(format!("unexpected `{c}`")))),
        }
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.column(), kind)
    }

    fn error_at(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind,
        }
    }
}

/// Canonical text form: every species declared with its initial
/// concentration, then one reaction per line in network order.
pub fn serialize_network(n: &Network) -> String {
    let mut out = String::from("# species\n");
    for (s, init) in n.species().iter().zip(n.initial_concentrations()) {
        let _ = writeln!(out, "species {s} = {init}");
    }
    out.push_str("# reactions\n");
    for r in n.reactions() {
        let _ = writeln!(out, "{r}");
    }
    out
}
