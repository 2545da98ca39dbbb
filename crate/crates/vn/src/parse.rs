//! Text formats.
//!
//! - address: digit string, `e` for the root
//! - point: `pre(period)`, e.g. `10(01)`, `(0)`
//! - clopen set: `{a, b, c}` over addresses, `{}` for the empty set
//! - element: `V n : d1 d2 .. -> r1 r2 .. perm [i1 i2 ..]` where `perm`
//!   sends the k-th sorted domain leaf to the `i_k`-th sorted range leaf
//! - signed element: element followed by `signs [+ - ..]`
//! - word: whitespace-separated letters `a0 a1^-1 x010`, with integer
//!   exponents and `( .. )^k` groups expanded by the parser
//! - group file: one element per line; `#` starts a comment
//!
//! All errors carry 1-based line/column positions.

use crate::cantor::{Address, CantorPoint, ClopenSet};
use crate::element::TreePair;
use crate::vbar::{Sign, SignedTreePair};
use crate::words::{Gen, Letter, Word};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl fmt::Display) -> ParseError {
        ParseError {
            line,
            col,
            msg: msg.to_string(),
        }
    }
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, msg: impl fmt::Display) -> ParseError {
        ParseError::new(self.line, self.col, msg)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!(
                "expected '{c}', found {}",
                self.peek()
                    .map(|c| format!("'{c}'"))
                    .unwrap_or_else(|| "end of input".into())
            )))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        self.skip_ws();
        for c in w.chars() {
            self.expect(c)?;
        }
        Ok(())
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let neg = if self.peek() == Some('-') {
            self.bump();
            true
        } else {
            false
        };
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.err("expected an integer"));
        }
        let n: i64 = digits
            .parse()
            .map_err(|e| self.err(format!("integer out of range: {e}")))?;
        Ok(if neg { -n } else { n })
    }

    fn at_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek().is_some() {
            Err(self.err("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

fn scan_address(s: &mut Scanner, arity: u8) -> Result<Address, ParseError> {
    s.skip_ws();
    if s.peek() == Some('e') {
        s.bump();
        return Ok(Address::root(arity));
    }
    let digits = s.take_while(|c| c.is_ascii_digit());
    if digits.is_empty() {
        return Err(s.err("expected an address (digits or 'e')"));
    }
    let v: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
    Address::new(arity, v).map_err(|e| s.err(e))
}

pub fn parse_address(input: &str, arity: u8) -> Result<Address, ParseError> {
    let mut s = Scanner::new(input);
    let a = scan_address(&mut s, arity)?;
    s.at_end()?;
    Ok(a)
}

pub fn parse_point(input: &str, arity: u8) -> Result<CantorPoint, ParseError> {
    let mut s = Scanner::new(input);
    s.skip_ws();
    let pre = s.take_while(|c| c.is_ascii_digit());
    let pre: Vec<u8> = pre.bytes().map(|b| b - b'0').collect();
    s.expect('(')?;
    let per = s.take_while(|c| c.is_ascii_digit());
    if per.is_empty() {
        return Err(s.err("expected period digits"));
    }
    let per: Vec<u8> = per.bytes().map(|b| b - b'0').collect();
    s.expect(')')?;
    s.at_end()?;
    CantorPoint::new(arity, pre, per).map_err(|e| s.err(e))
}

pub fn parse_clopen(input: &str, arity: u8) -> Result<ClopenSet, ParseError> {
    let mut s = Scanner::new(input);
    s.skip_ws();
    s.expect('{')?;
    let mut intervals = Vec::new();
    s.skip_ws();
    if s.peek() != Some('}') {
        loop {
            intervals.push(scan_address(&mut s, arity)?);
            s.skip_ws();
            if s.peek() == Some(',') {
                s.bump();
            } else {
                break;
            }
        }
    }
    s.expect('}')?;
    s.at_end()?;
    ClopenSet::from_intervals(arity, intervals).map_err(|e| s.err(e))
}

fn scan_address_list(s: &mut Scanner, arity: u8, stop: &str) -> Result<Vec<Address>, ParseError> {
    let mut out = Vec::new();
    loop {
        s.skip_ws();
        let rest = &s.src[s.pos..];
        if rest.starts_with(stop) || s.peek().is_none() {
            break;
        }
        out.push(scan_address(s, arity)?);
    }
    Ok(out)
}

fn scan_element(s: &mut Scanner) -> Result<TreePair, ParseError> {
    s.expect_word("V")?;
    let n = s.integer()?;
    if !(2..=9).contains(&n) {
        return Err(s.err(format!("arity {n} out of range 2..=9")));
    }
    let arity = n as u8;
    s.expect_word(":")?;
    let domain = scan_address_list(s, arity, "->")?;
    s.expect_word("->")?;
    let range = scan_address_list(s, arity, "perm")?;
    s.expect_word("perm")?;
    s.expect_word("[")?;
    let mut perm = Vec::new();
    loop {
        s.skip_ws();
        if s.peek() == Some(']') {
            s.bump();
            break;
        }
        let i = s.integer()?;
        if i < 0 {
            return Err(s.err("perm entries must be nonnegative"));
        }
        perm.push(i as usize);
    }
    TreePair::new(arity, domain, range, perm).map_err(|e| s.err(e))
}

pub fn parse_element(input: &str) -> Result<TreePair, ParseError> {
    let mut s = Scanner::new(input);
    let e = scan_element(&mut s)?;
    s.at_end()?;
    Ok(e)
}

pub fn parse_signed_element(input: &str) -> Result<SignedTreePair, ParseError> {
    let mut s = Scanner::new(input);
    let pair = scan_element(&mut s)?;
    s.expect_word("signs")?;
    s.expect_word("[")?;
    let mut signs = Vec::new();
    loop {
        s.skip_ws();
        match s.peek() {
            Some(']') => {
                s.bump();
                break;
            }
            Some('+') => {
                s.bump();
                signs.push(Sign::Pos);
            }
            Some('-') => {
                s.bump();
                signs.push(Sign::Neg);
            }
            _ => return Err(s.err("expected '+', '-', or ']' in signs")),
        }
    }
    s.at_end()?;
    SignedTreePair::new(pair, signs).map_err(|e| s.err(e))
}

fn scan_letter_symbol(s: &mut Scanner) -> Result<Gen, ParseError> {
    let name = s.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
    if name.is_empty() {
        return Err(s.err("expected a letter"));
    }
    if let Some(rest) = name.strip_prefix('x') {
        if rest.chars().all(|c| c.is_ascii_digit()) {
            let ix: Vec<u8> = rest.bytes().map(|b| b - b'0').collect();
            return Gen::x(&ix).map_err(|e| s.err(e));
        }
    }
    Ok(Gen::Sym(name.to_string()))
}

fn scan_exponent(s: &mut Scanner) -> Result<i64, ParseError> {
    if s.peek() == Some('^') {
        s.bump();
        s.integer()
    } else {
        Ok(1)
    }
}

fn raise(letters: Vec<Letter>, exp: i64) -> Vec<Letter> {
    let block: Vec<Letter> = if exp < 0 {
        letters.iter().rev().map(Letter::inverse).collect()
    } else {
        letters
    };
    let mut out = Vec::with_capacity(block.len() * exp.unsigned_abs() as usize);
    for _ in 0..exp.unsigned_abs() {
        out.extend(block.iter().cloned());
    }
    out
}

fn scan_word(s: &mut Scanner, depth: usize) -> Result<Vec<Letter>, ParseError> {
    if depth > 32 {
        return Err(s.err("parenthesis nesting too deep"));
    }
    let mut out = Vec::new();
    loop {
        s.skip_ws();
        match s.peek() {
            None => break,
            Some(')') => {
                if depth == 0 {
                    return Err(s.err("unmatched ')'"));
                }
                break;
            }
            Some('(') => {
                s.bump();
                let inner = scan_word(s, depth + 1)?;
                s.skip_ws();
                s.expect(')')?;
                let exp = scan_exponent(s)?;
                out.extend(raise(inner, exp));
            }
            Some('1') => {
                // the empty word
                s.bump();
            }
            _ => {
                let gen = scan_letter_symbol(s)?;
                let exp = scan_exponent(s)?;
                out.extend(raise(vec![Letter::new(gen, 1)], exp));
            }
        }
    }
    Ok(out)
}

pub fn parse_word(input: &str) -> Result<Word, ParseError> {
    let mut s = Scanner::new(input);
    let letters = scan_word(&mut s, 0)?;
    s.at_end()?;
    Ok(Word(letters))
}

/// One element per non-comment line; `#` comments run to end of line.
pub fn parse_group(input: &str) -> Result<Vec<TreePair>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let e = parse_element(line).map_err(|e| ParseError {
            line: i + 1,
            col: e.col,
            msg: e.msg,
        })?;
        out.push(e);
    }
    Ok(out)
}
