//! Text format for derivations: nested s-expressions, `;` starts a comment.
//!
//! ```text
//! (Abs
//!   (ctx)
//!   (term "\x. x")
//!   (type "0 != 1 -> 0 != 1")
//!   (Axiom (ctx (x "0 != 1")) (term "x") (type "0 != 1")))
//! ```
//!
//! `ForallElim` nodes carry `(inst "b")` and `NeqSubst` nodes
//! `(subst z "a" "b")`. Premises follow in order.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Derivation, Judgement, Rule, RuleData};
use crate::formula::{Formula, Ident};
use crate::syntax::{parse_bterm, parse_formula, parse_term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct TextError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug)]
enum Sexp {
    Atom(String, usize),
    Str(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn pos(&self) -> usize {
        match self {
            Sexp::Atom(_, p) | Sexp::Str(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, pos: usize, message: impl Into<String>) -> TextError {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
        TextError { line, column, message: message.into() }
    }

    fn skip(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b';' => {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, TextError> {
        self.skip();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Err(self.err(start, "unexpected end of input"));
        };
        match c {
            '(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip();
                    match self.src[self.pos..].chars().next() {
                        None => return Err(self.err(start, "unclosed parenthesis")),
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            ')' => Err(self.err(start, "unexpected `)`")),
            '"' => {
                let mut out = String::new();
                let mut chars = rest.char_indices().skip(1).peekable();
                while let Some((i, ch)) = chars.next() {
                    match ch {
                        '"' => {
                            self.pos += i + 1;
                            return Ok(Sexp::Str(out, start));
                        }
                        '\\' if matches!(chars.peek(), Some((_, '"' | '\\'))) => {
                            out.push(chars.next().expect("peeked").1);
                        }
                        _ => out.push(ch),
                    }
                }
                Err(self.err(start, "unterminated string"))
            }
            _ => {
                let len = rest.find(|ch: char| ch.is_whitespace() || "()\";".contains(ch)).unwrap_or(rest.len());
                self.pos += len;
                Ok(Sexp::Atom(rest[..len].to_string(), start))
            }
        }
    }
}

/// Reads one derivation.
pub fn parse_derivation(src: &str) -> Result<Derivation, TextError> {
    let mut r = Reader { src, pos: 0 };
    let s = r.read()?;
    r.skip();
    if r.pos < src.len() {
        return Err(r.err(r.pos, "trailing input after derivation"));
    }
    node(&r, &s)
}

fn string<'s>(r: &Reader, s: &'s Sexp, what: &str) -> Result<(&'s str, usize), TextError> {
    match s {
        Sexp::Str(v, p) => Ok((v, *p)),
        _ => Err(r.err(s.pos(), format!("expected a quoted {what}"))),
    }
}

fn formula(r: &Reader, s: &Sexp) -> Result<Formula, TextError> {
    let (v, p) = string(r, s, "formula")?;
    parse_formula(v).map_err(|e| r.err(p, format!("in formula: {e}")))
}

fn node(r: &Reader, s: &Sexp) -> Result<Derivation, TextError> {
    let Sexp::List(items, at) = s else {
        return Err(r.err(s.pos(), "expected a derivation node"));
    };
    let rule = match items.first() {
        Some(Sexp::Atom(name, p)) => Rule::from_name(name).ok_or_else(|| r.err(*p, format!("unknown rule `{name}`")))?,
        _ => return Err(r.err(*at, "a node starts with a rule name")),
    };
    let mut context = None;
    let mut subject = None;
    let mut ty = None;
    let mut data = RuleData::None;
    let mut premises = Vec::new();
    for item in &items[1..] {
        let Sexp::List(parts, p) = item else {
            return Err(r.err(item.pos(), "expected a parenthesised field"));
        };
        let head = match parts.first() {
            Some(Sexp::Atom(h, _)) => h.as_str(),
            _ => return Err(r.err(*p, "expected a field name")),
        };
        let args = &parts[1..];
        match head {
            "ctx" => {
                let mut ctx = Vec::new();
                for entry in args {
                    match entry {
                        Sexp::List(kv, _) if kv.len() == 2 => {
                            let Sexp::Atom(x, _) = &kv[0] else {
                                return Err(r.err(entry.pos(), "expected a variable name"));
                            };
                            ctx.push((Ident::new(x), formula(r, &kv[1])?));
                        }
                        _ => return Err(r.err(entry.pos(), "context entries look like (x \"formula\")")),
                    }
                }
                context = Some(ctx);
            }
            "term" if args.len() == 1 => {
                let (v, q) = string(r, &args[0], "term")?;
                subject = Some(parse_term(v).map_err(|e| r.err(q, format!("in term: {e}")))?);
            }
            "type" if args.len() == 1 => ty = Some(formula(r, &args[0])?),
            "inst" if args.len() == 1 => {
                let (v, q) = string(r, &args[0], "term")?;
                data = RuleData::Inst(parse_bterm(v).map_err(|e| r.err(q, format!("in term: {e}")))?);
            }
            "subst" if args.len() == 3 => {
                let Sexp::Atom(z, _) = &args[0] else {
                    return Err(r.err(args[0].pos(), "expected a variable name"));
                };
                let (a, qa) = string(r, &args[1], "term")?;
                let (b, qb) = string(r, &args[2], "term")?;
                data = RuleData::Subst {
                    z: Ident::new(z),
                    a: parse_bterm(a).map_err(|e| r.err(qa, format!("in term: {e}")))?,
                    b: parse_bterm(b).map_err(|e| r.err(qb, format!("in term: {e}")))?,
                };
            }
            h if Rule::from_name(h).is_some() => premises.push(node(r, item)?),
            h => return Err(r.err(*p, format!("unexpected field `{h}`"))),
        }
    }
    let missing = |what: &str| r.err(*at, format!("node has no `{what}` field"));
    let conclusion = Judgement {
        context: context.unwrap_or_default(),
        subject: subject.ok_or_else(|| missing("term"))?,
        ty: ty.ok_or_else(|| missing("type"))?,
    };
    Ok(Derivation { rule, data, premises, conclusion })
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Prints a derivation in the format read by [`parse_derivation`].
pub fn print_derivation(d: &Derivation) -> String {
    fn go(d: &Derivation, indent: usize, out: &mut String) {
        let pad = " ".repeat(indent);
        let _ = write!(out, "{pad}({}\n{pad}  (ctx", d.rule);
        for (x, a) in &d.conclusion.context {
            let _ = write!(out, " ({x} {})", quote(&a.to_string()));
        }
        let _ = write!(out, ")\n{pad}  (term {})\n{pad}  (type {})", quote(&d.conclusion.subject.to_string()), quote(&d.conclusion.ty.to_string()));
        match &d.data {
            RuleData::None => {}
            RuleData::Inst(b) => {
                let _ = write!(out, "\n{pad}  (inst {})", quote(&b.to_string()));
            }
            RuleData::Subst { z, a, b } => {
                let _ = write!(out, "\n{pad}  (subst {z} {} {})", quote(&a.to_string()), quote(&b.to_string()));
            }
        }
        for p in &d.premises {
            out.push('\n');
            go(p, indent + 2, out);
        }
        out.push(')');
    }
    let mut out = String::new();
    go(d, 0, &mut out);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typing::{check_derivation, identity_derivation, rewrite_derivation};

    const IDENTITY: &str = r#"
; identity on falsity
(Abs
  (ctx)
  (term "\x. x")
  (type "_|_ -> _|_")
  (Axiom (ctx (x "_|_")) (term "x") (type "_|_")))
"#;

    #[test]
    fn reads_and_checks() {
        let d = parse_derivation(IDENTITY).unwrap();
        assert_eq!(d.premises.len(), 1);
        assert!(check_derivation(&d).is_ok());
    }

    #[test]
    fn roundtrips() {
        let d = identity_derivation(&parse_formula("forall z. z != 1").unwrap());
        assert_eq!(parse_derivation(&print_derivation(&d)).unwrap(), d);
        let a = parse_formula("z != 0").unwrap();
        let ax = Derivation::leaf(Rule::Axiom, Judgement::new(vec![("y".into(), parse_formula("1 != 0").unwrap())], crate::lambda::LcTerm::var("y"), parse_formula("1 != 0").unwrap()));
        let l = rewrite_derivation(&ax, &"x".into(), &"z".into(), &a, &crate::formula::BTerm::One, &crate::formula::BTerm::var("w")).unwrap();
        let back = parse_derivation(&print_derivation(&l)).unwrap();
        assert_eq!(back, l);
        assert!(check_derivation(&back).is_ok());
    }

    #[test]
    fn positions_in_errors() {
        let e = parse_derivation("(Abs\n  (ctx)\n  (term \"\\x. x\")\n  (type \"_|_ ->\"))").unwrap_err();
        assert_eq!(e.line, 4);
        let e = parse_derivation("(Bogus (term \"x\") (type \"_|_\"))").unwrap_err();
        assert!(e.message.contains("unknown rule"));
    }
}
