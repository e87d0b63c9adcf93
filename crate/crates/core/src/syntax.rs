//! Concrete syntax for formulas, λc-terms, stacks and processes.
//!
//! ```text
//! term     ::= 0 | 1 | x | ~term | term /\ term | term \/ term | (term)
//! formula  ::= term != term | term == term | _|_ | formula -> formula
//!            | formula & formula | formula | formula
//!            | forall x y. formula | exists x. formula | (formula)
//! lc       ::= x | lc lc | \x y. lc | cc | k[lc, ...] | g{formula}
//!            | zeta<n> | eta<n> | (lc)
//! stack    ::= [] | lc . stack
//! process  ::= lc * stack
//! ```
//!
//! `~` binds tightest, then `/\`, then `\/`. Among connectives `&` binds
//! tighter than `|`, which binds tighter than `->`; `->` is right associative
//! and a quantifier body extends as far right as possible. A λ-body is an
//! application and stops at the `.` that separates stack entries.

use std::fmt;

use thiserror::Error;

use crate::formula::{bot, conj, disj, eq, exists, BTerm, Formula, Ident};
use crate::lambda::{LcTerm, Process, Stack};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Bot,
    Not,
    And,
    Or,
    Neq,
    EqEq,
    Arrow,
    Amp,
    Bar,
    Dot,
    Backslash,
    Star,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    KontOpen,
    GammaOpen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Zero => "0",
            Tok::One => "1",
            Tok::Bot => "_|_",
            Tok::Not => "~",
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Neq => "!=",
            Tok::EqEq => "==",
            Tok::Arrow => "->",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Dot => ".",
            Tok::Backslash => "\\",
            Tok::Star => "*",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::KontOpen => "k[",
            Tok::GammaOpen => "g{",
        };
        write!(f, "`{s}`")
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest = &src[i..];
        let two = |s: &str| rest.starts_with(s);
        let (tok, len) = if two("_|_") {
            (Tok::Bot, 3)
        } else if two("/\\") {
            (Tok::And, 2)
        } else if two("\\/") {
            (Tok::Or, 2)
        } else if two("!=") {
            (Tok::Neq, 2)
        } else if two("==") {
            (Tok::EqEq, 2)
        } else if two("->") {
            (Tok::Arrow, 2)
        } else if two("k[") && !rest[1..].is_empty() && !prev_is_ident_char(src, i) {
            (Tok::KontOpen, 2)
        } else if two("g{") && !prev_is_ident_char(src, i) {
            (Tok::GammaOpen, 2)
        } else {
            match c {
                '~' => (Tok::Not, 1),
                '&' => (Tok::Amp, 1),
                '|' => (Tok::Bar, 1),
                '.' => (Tok::Dot, 1),
                '\\' => (Tok::Backslash, 1),
                '*' => (Tok::Star, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '[' => (Tok::LBrack, 1),
                ']' => (Tok::RBrack, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                ',' => (Tok::Comma, 1),
                '0' if !rest[1..].starts_with(|d: char| d.is_ascii_digit()) => (Tok::Zero, 1),
                '1' if !rest[1..].starts_with(|d: char| d.is_ascii_digit()) => (Tok::One, 1),
                c if is_ident_start(c) => {
                    let len = rest.find(|ch: char| !is_ident_char(ch)).unwrap_or(rest.len());
                    (Tok::Ident(rest[..len].to_string()), len)
                }
                _ => {
                    return Err(ParseError { pos: i, message: format!("unexpected character `{c}`") });
                }
            }
        };
        out.push((i, tok));
        i += len;
    }
    Ok(out)
}

fn prev_is_ident_char(src: &str, i: usize) -> bool {
    src[..i].chars().next_back().is_some_and(is_ident_char)
}

const KEYWORDS: [&str; 3] = ["forall", "exists", "cc"];

fn numbered(name: &str, prefix: &str) -> Option<u32> {
    let digits = name.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, end: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.offset(), message: message.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected {t}, found {found}")),
                None => self.err(format!("expected {t}, found end of input")),
            }
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.err(format!("unexpected trailing {t}")),
        }
    }

    fn variable(&mut self) -> Result<Ident, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) if !KEYWORDS.contains(&name.as_str()) => {
                let id = Ident::new(name);
                self.pos += 1;
                Ok(id)
            }
            Some(t) => self.err(format!("expected a variable, found {t}")),
            None => self.err("expected a variable, found end of input"),
        }
    }

    fn at_variable(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(n)) if !KEYWORDS.contains(&n.as_str()))
    }

    // Boolean terms.

    fn bterm(&mut self) -> Result<BTerm, ParseError> {
        let mut acc = self.bterm_and()?;
        while self.eat(&Tok::Or) {
            acc = BTerm::or(acc, self.bterm_and()?);
        }
        Ok(acc)
    }

    fn bterm_and(&mut self) -> Result<BTerm, ParseError> {
        let mut acc = self.bterm_not()?;
        while self.eat(&Tok::And) {
            acc = BTerm::and(acc, self.bterm_not()?);
        }
        Ok(acc)
    }

    fn bterm_not(&mut self) -> Result<BTerm, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(BTerm::not(self.bterm_not()?));
        }
        match self.peek() {
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(BTerm::Zero)
            }
            Some(Tok::One) => {
                self.pos += 1;
                Ok(BTerm::One)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.bterm()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => Ok(BTerm::Var(self.variable()?)),
        }
    }

    // Formulas.

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.formula_disj()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::imp(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn formula_disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.formula_conj()?;
        while self.eat(&Tok::Bar) {
            acc = disj(acc, self.formula_conj()?);
        }
        Ok(acc)
    }

    fn formula_conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.formula_unary()?;
        while self.eat(&Tok::Amp) {
            acc = conj(acc, self.formula_unary()?);
        }
        Ok(acc)
    }

    fn binders(&mut self) -> Result<Vec<Ident>, ParseError> {
        let mut vars = vec![self.variable()?];
        while self.at_variable() {
            vars.push(self.variable()?);
        }
        self.expect(&Tok::Dot)?;
        Ok(vars)
    }

    fn formula_unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(k)) if k == "forall" => {
                self.pos += 1;
                let vars = self.binders()?;
                Ok(Formula::forall_all(&vars, self.formula()?))
            }
            Some(Tok::Ident(k)) if k == "exists" => {
                self.pos += 1;
                let vars = self.binders()?;
                let body = self.formula()?;
                Ok(vars.into_iter().rev().fold(body, |acc, z| exists(z, acc)))
            }
            _ => self.formula_atom(),
        }
    }

    fn formula_atom(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Bot) {
            return Ok(bot());
        }
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            if let Ok(f) = self.comparison() {
                return Ok(f);
            }
            self.pos = save;
            self.pos += 1;
            let f = self.formula()?;
            self.expect(&Tok::RParen)?;
            return Ok(f);
        }
        self.comparison()
    }

    fn comparison(&mut self) -> Result<Formula, ParseError> {
        let a = self.bterm()?;
        if self.eat(&Tok::Neq) {
            Ok(Formula::neq(a, self.bterm()?))
        } else if self.eat(&Tok::EqEq) {
            Ok(eq(a, self.bterm()?))
        } else {
            self.err("expected `!=` or `==`")
        }
    }

    // λc-terms.

    fn lc_term(&mut self) -> Result<LcTerm, ParseError> {
        let mut acc = self.lc_atom()?;
        while self.starts_lc_atom() {
            let arg = self.lc_atom()?;
            acc = LcTerm::app(acc, arg);
        }
        Ok(acc)
    }

    fn starts_lc_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_) | Tok::LParen | Tok::Backslash | Tok::KontOpen | Tok::GammaOpen)
        )
    }

    fn lc_atom(&mut self) -> Result<LcTerm, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Backslash) => {
                self.pos += 1;
                let vars = self.binders()?;
                let body = self.lc_term()?;
                Ok(vars.into_iter().rev().fold(body, |acc, x| LcTerm::lam(x, acc)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.lc_term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::KontOpen) => {
                let at = self.offset();
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat(&Tok::RBrack) {
                    loop {
                        items.push(self.lc_term()?);
                        if self.eat(&Tok::RBrack) {
                            break;
                        }
                        self.expect(&Tok::Comma)?;
                    }
                }
                let stack = Stack::from_terms(items)
                    .map_err(|e| ParseError { pos: at, message: e.to_string() })?;
                Ok(LcTerm::Kont(stack))
            }
            Some(Tok::GammaOpen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(&Tok::RBrace)?;
                Ok(LcTerm::gamma(f))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "cc" {
                    Ok(LcTerm::Cc)
                } else if let Some(n) = numbered(&name, "zeta") {
                    Ok(LcTerm::Zeta(n))
                } else if let Some(n) = numbered(&name, "eta") {
                    Ok(LcTerm::Eta(n))
                } else if KEYWORDS.contains(&name.as_str()) {
                    self.pos -= 1;
                    self.err(format!("keyword `{name}` cannot be used as a variable"))
                } else {
                    Ok(LcTerm::Var(Ident::new(name)))
                }
            }
            Some(t) => self.err(format!("expected a term, found {t}")),
            None => self.err("expected a term, found end of input"),
        }
    }

    fn stack(&mut self) -> Result<Stack, ParseError> {
        let mut items = Vec::new();
        loop {
            if self.peek() == Some(&Tok::LBrack) && self.peek_at(1) == Some(&Tok::RBrack) {
                self.pos += 2;
                break;
            }
            let at = self.offset();
            let t = self.lc_term()?;
            if !t.is_closed() {
                return Err(ParseError { pos: at, message: "stack entries must be closed terms".into() });
            }
            items.push(t);
            self.expect(&Tok::Dot)?;
        }
        Stack::from_terms(items).map_err(|e| ParseError { pos: self.offset(), message: e.to_string() })
    }
}

pub fn parse_bterm(src: &str) -> Result<BTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.bterm()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(src: &str) -> Result<LcTerm, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.lc_term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_stack(src: &str) -> Result<Stack, ParseError> {
    let mut p = Parser::new(src)?;
    let s = p.stack()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_process(src: &str) -> Result<Process, ParseError> {
    let mut p = Parser::new(src)?;
    let at = p.offset();
    let t = p.lc_term()?;
    p.expect(&Tok::Star)?;
    let s = p.stack()?;
    p.finish()?;
    Process::new(t, s).map_err(|e| ParseError { pos: at, message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{alpha_eq, verum};

    #[test]
    fn formula_precedence() {
        let f = parse_formula("0 != 1 -> x != y -> _|_").unwrap();
        assert_eq!(
            f,
            Formula::imp(verum(), Formula::imp(Formula::neq(BTerm::var("x"), BTerm::var("y")), bot()))
        );
        let g = parse_formula("forall z w. z /\\ w == w /\\ z").unwrap();
        assert_eq!(
            g,
            Formula::forall(
                "z",
                Formula::forall(
                    "w",
                    eq(BTerm::and(BTerm::var("z"), BTerm::var("w")), BTerm::and(BTerm::var("w"), BTerm::var("z")))
                )
            )
        );
        let t = parse_bterm("~a /\\ b \\/ c").unwrap();
        assert_eq!(t, BTerm::or(BTerm::and(BTerm::not(BTerm::var("a")), BTerm::var("b")), BTerm::var("c")));
    }

    #[test]
    fn parenthesised_terms_and_formulas() {
        let a = parse_formula("(a \\/ b) != c").unwrap();
        assert_eq!(a, Formula::neq(BTerm::or(BTerm::var("a"), BTerm::var("b")), BTerm::var("c")));
        let b = parse_formula("(0 != 0 -> 0 != 0) -> 0 != 0").unwrap();
        assert_eq!(b, Formula::imp(Formula::imp(bot(), bot()), bot()));
    }

    #[test]
    fn sugar_expands() {
        let a = parse_formula("exists z. z != 0 & z != 1").unwrap();
        let z = || BTerm::var("z");
        let expected = exists(
            "z",
            conj(Formula::neq(z(), BTerm::Zero), Formula::neq(z(), BTerm::One)),
        );
        assert!(alpha_eq(&a, &expected));
        let b = parse_formula("forall z. z == 0 | z == 1").unwrap();
        assert_eq!(b, Formula::forall("z", disj(eq(z(), BTerm::Zero), eq(z(), BTerm::One))));
    }

    #[test]
    fn terms_and_processes() {
        let t = parse_term("\\x. x x").unwrap();
        let x = || LcTerm::var("x");
        assert_eq!(t, LcTerm::lam("x", LcTerm::app(x(), x())));
        let p = parse_process("(\\x. x) cc * g{_|_} . k[cc] . []").unwrap();
        assert_eq!(p.stack.len(), 2);
        assert_eq!(p.to_string(), "(\\x. x) cc * g{0 != 0} . k[cc] . []");
        assert!(parse_process("x * []").is_err());
        assert!(parse_term("zeta3 eta0").is_ok());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("0 != ").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse_formula("0 $ 1").unwrap_err();
        assert_eq!(e.pos, 2);
    }
}
