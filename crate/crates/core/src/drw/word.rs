//! Formal words in [T^η], V, F, d, R and dlog, and their normalization to basis coordinates.

use std::fmt;

use super::basis::{DrwElement, DrwSpace};
use super::normal::{Rewriter, VdvForm};
use super::weight::{Base, Weight};
use super::forms::FormVec;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeWittWord {
    Scalar(i64),
    /// [T_1^{η_1} ... T_k^{η_k}]
    Teich(Vec<i64>),
    /// dlog [T_i], Laurent only.
    Dlog(usize),
    V(u32, Box<FreeWittWord>),
    F(u32, Box<FreeWittWord>),
    R(u32, Box<FreeWittWord>),
    D(Box<FreeWittWord>),
    Mul(Vec<FreeWittWord>),
    Sum(Vec<FreeWittWord>),
}

impl FreeWittWord {
    pub fn teich(eta: &[i64]) -> Self {
        FreeWittWord::Teich(eta.to_vec())
    }

    pub fn v(self) -> Self {
        FreeWittWord::V(1, Box::new(self))
    }

    pub fn f(self) -> Self {
        FreeWittWord::F(1, Box::new(self))
    }

    pub fn d(self) -> Self {
        FreeWittWord::D(Box::new(self))
    }

    pub fn times(self, other: FreeWittWord) -> Self {
        FreeWittWord::Mul(vec![self, other])
    }

    pub fn plus(self, other: FreeWittWord) -> Self {
        FreeWittWord::Sum(vec![self, other])
    }
}

impl fmt::Display for FreeWittWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = |s: u32| if s == 1 { String::new() } else { format!("^{s}") };
        match self {
            FreeWittWord::Scalar(c) => write!(f, "{c}"),
            FreeWittWord::Teich(eta) => {
                let parts: Vec<String> = eta
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e != 0)
                    .map(|(i, e)| if *e == 1 { format!("T{}", i + 1) } else { format!("T{}^{e}", i + 1) })
                    .collect();
                if parts.is_empty() {
                    write!(f, "[1]")
                } else {
                    write!(f, "[{}]", parts.join(" "))
                }
            }
            FreeWittWord::Dlog(i) => write!(f, "dlog[T{}]", i + 1),
            FreeWittWord::V(s, w) => write!(f, "V{}({w})", pow(*s)),
            FreeWittWord::F(s, w) => write!(f, "F{}({w})", pow(*s)),
            FreeWittWord::R(s, w) => write!(f, "R{}({w})", pow(*s)),
            FreeWittWord::D(w) => write!(f, "d({w})"),
            FreeWittWord::Mul(ws) => write!(f, "{}", ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" * ")),
            FreeWittWord::Sum(ws) => {
                write!(f, "({})", ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" + "))
            }
        }
    }
}

fn constant(space: &DrwSpace, level: u32, degree: usize, mask: u32, c: i128) -> VdvForm {
    let mut out = VdvForm::zero(*space, level, degree);
    let m = (space.p as i128).pow(level);
    let c = c.rem_euclid(m);
    if c != 0 {
        out.pieces.entry(Weight::zero(space.p, space.k)).or_default().v = FormVec::from([(mask, c)]);
    }
    out
}

/// Evaluate a word at level r into the V^u/dV^u normal form.
pub fn eval_word(word: &FreeWittWord, space: &DrwSpace, r: u32, rw: &mut Rewriter) -> Result<VdvForm> {
    if r == 0 {
        return Err(Error::Depth("level 0".into()));
    }
    rw.tick("linearity")?;
    match word {
        FreeWittWord::Scalar(c) => Ok(constant(space, r, 0, 0, *c as i128)),
        FreeWittWord::Teich(eta) => {
            if eta.len() != space.k {
                return Err(Error::Invalid(format!("monomial with {} exponents in {} variables", eta.len(), space.k)));
            }
            let w = Weight::integral(space.p, eta.clone());
            space.check_weight(&w)?;
            let mut out = VdvForm::zero(*space, r, 0);
            out.insert_v(rw, 0, &w, &FormVec::from([(0, 1)]))?;
            Ok(out)
        }
        FreeWittWord::Dlog(i) => {
            if space.base != Base::Laurent || *i >= space.k {
                return Err(Error::Invalid(format!("dlog[T{}] needs a Laurent variable", i + 1)));
            }
            Ok(constant(space, r, 1, 1 << i, 1))
        }
        FreeWittWord::V(s, w) => {
            if r <= *s {
                return Err(Error::Depth(format!("V^{s} into level {r}")));
            }
            let mut x = eval_word(w, space, r - s, rw)?;
            for _ in 0..*s {
                x = x.verschiebung(rw)?;
            }
            Ok(x)
        }
        FreeWittWord::F(s, w) => {
            let mut x = eval_word(w, space, r + s, rw)?;
            for _ in 0..*s {
                x = x.frobenius(rw)?;
            }
            Ok(x)
        }
        FreeWittWord::R(s, w) => {
            let mut x = eval_word(w, space, r + s, rw)?;
            for _ in 0..*s {
                x = x.restriction(rw)?;
            }
            Ok(x)
        }
        FreeWittWord::D(w) => eval_word(w, space, r, rw)?.d(rw),
        FreeWittWord::Mul(ws) => {
            let mut acc = constant(space, r, 0, 0, 1);
            for w in ws {
                acc = acc.mul(&eval_word(w, space, r, rw)?, rw)?;
            }
            Ok(acc)
        }
        FreeWittWord::Sum(ws) => {
            let mut parts = ws.iter().map(|w| eval_word(w, space, r, rw));
            let mut acc = parts.next().ok_or_else(|| Error::Invalid("empty sum".into()))??;
            for x in parts {
                let x = x?;
                acc = if acc.pieces.is_empty() && x.degree != acc.degree {
                    x
                } else if x.pieces.is_empty() && x.degree != acc.degree {
                    acc
                } else {
                    acc.add(&x)?
                };
            }
            Ok(acc)
        }
    }
}

/// Normal form of a word in the basis of W_rΩ, with the rule counts used.
pub fn drw_normalize(word: &FreeWittWord, space: &DrwSpace, r: u32) -> Result<DrwElement> {
    drw_normalize_with(word, space, r, &mut Rewriter::from_env())
}

pub fn drw_normalize_with(word: &FreeWittWord, space: &DrwSpace, r: u32, rw: &mut Rewriter) -> Result<DrwElement> {
    eval_word(word, space, r, rw)?.to_element(rw)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    k: usize,
}

/// Parse words such as `F d V [T1]`, `d V [T1^2 T2] * V[T2]`, `3 * [T1] - dlog[T2]`.
pub fn parse_word(src: &str, k: usize) -> Result<FreeWittWord> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, k };
    let w = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(w)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok().and_then(|t| t.parse().ok()).ok_or_else(|| self.err("expected an integer"))
    }

    fn expr(&mut self) -> Result<FreeWittWord> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(FreeWittWord::Mul(vec![FreeWittWord::Scalar(-1), self.term()?]));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { FreeWittWord::Sum(terms) })
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || b"[(dVFR".contains(&c))
    }

    fn term(&mut self) -> Result<FreeWittWord> {
        let mut fs = vec![self.factor()?];
        loop {
            if self.eat(b'*') || self.starts_factor() {
                fs.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap() } else { FreeWittWord::Mul(fs) })
    }

    fn power(&mut self) -> Result<u32> {
        if self.eat(b'^') {
            u32::try_from(self.int()?).map_err(|_| self.err("negative power"))
        } else {
            Ok(1)
        }
    }

    fn var(&mut self) -> Result<usize> {
        if !self.eat(b'T') {
            return Err(self.err("expected T<i>"));
        }
        let i = self.int()?;
        if i < 1 || i as usize > self.k {
            return Err(self.err("variable index out of range"));
        }
        Ok(i as usize - 1)
    }

    fn factor(&mut self) -> Result<FreeWittWord> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut eta = vec![0i64; self.k];
                if self.peek() == Some(b'1') {
                    self.pos += 1;
                } else {
                    while self.peek() == Some(b'T') {
                        let i = self.var()?;
                        eta[i] += if self.eat(b'^') { self.int()? } else { 1 };
                    }
                }
                if !self.eat(b']') {
                    return Err(self.err("expected ']'"));
                }
                Ok(FreeWittWord::Teich(eta))
            }
            Some(b'd') => {
                self.pos += 1;
                if self.s[self.pos..].starts_with(b"log") {
                    self.pos += 3;
                    if !self.eat(b'[') {
                        return Err(self.err("expected '[' after dlog"));
                    }
                    let i = self.var()?;
                    if !self.eat(b']') {
                        return Err(self.err("expected ']'"));
                    }
                    return Ok(FreeWittWord::Dlog(i));
                }
                Ok(FreeWittWord::D(Box::new(self.factor()?)))
            }
            Some(c @ (b'V' | b'F' | b'R')) => {
                self.pos += 1;
                let s = self.power()?;
                let inner = Box::new(self.factor()?);
                Ok(match c {
                    b'V' => FreeWittWord::V(s, inner),
                    b'F' => FreeWittWord::F(s, inner),
                    _ => FreeWittWord::R(s, inner),
                })
            }
            Some(c) if c.is_ascii_digit() || c == b'-' => Ok(FreeWittWord::Scalar(self.int()?)),
            _ => Err(self.err("expected a factor")),
        }
    }
}
