//! The ideal file format.
//!
//! ```text
//! # comment
//! ring: x, y
//! order: grevlex            # or lex, or block(x:lex; y:grevlex)
//! ideal I:
//!   x^2*y + 3/2*x - 1
//!   x*y
//! ```
//!
//! Each line after an `ideal NAME:` header holds one generator.

use std::fmt;
use std::str::FromStr;

use moddiq_core::field::Rationals;
use moddiq_core::groebner::Ideal;
use moddiq_core::polycore::{BlockKind, Monomial, MonomialOrder, Poly, Ring, RingRef};
use num_bigint::BigInt;
use num_rational::BigRational;

/// A syntax or semantic error at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

/// A ring declaration and named ideals, names in file order.
#[derive(Debug, Clone)]
pub struct IdealFile {
    pub ring: RingRef<Rationals>,
    pub ideals: Vec<(String, Vec<Poly<Rationals>>)>,
}

impl IdealFile {
    pub fn get(&self, name: &str) -> Option<&[Poly<Rationals>]> {
        self.ideals.iter().find(|(n, _)| n == name).map(|(_, g)| g.as_slice())
    }

    /// The named ideal in `ring`, which must have the file's variables.
    pub fn ideal_in(&self, name: &str, ring: &RingRef<Rationals>) -> Option<Ideal<Rationals>> {
        let gens = self.get(name)?.iter().map(|p| p.reorder(ring)).collect();
        Ideal::new(ring, gens).ok()
    }
}

impl fmt::Display for IdealFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring: {}", self.ring.vars().join(", "))?;
        writeln!(f, "order: {}", order_to_string(self.ring.order(), self.ring.vars()))?;
        for (name, gens) in &self.ideals {
            writeln!(f, "ideal {name}:")?;
            for g in gens {
                writeln!(f, "  {g}")?;
            }
        }
        Ok(())
    }
}

/// Text form of an order, accepted by [`parse_order`].
pub fn order_to_string(order: &MonomialOrder, vars: &[String]) -> String {
    match order {
        MonomialOrder::Lex => "lex".into(),
        MonomialOrder::Grevlex => "grevlex".into(),
        MonomialOrder::Block(blocks) => {
            let parts: Vec<String> = blocks
                .iter()
                .map(|b| {
                    let names: Vec<&str> = b.vars.iter().map(|&v| vars[v].as_str()).collect();
                    let kind = match b.kind {
                        BlockKind::Lex => "lex",
                        BlockKind::Grevlex => "grevlex",
                    };
                    format!("{}:{kind}", names.join(","))
                })
                .collect();
            format!("block({})", parts.join("; "))
        }
    }
}

/// Character cursor over one line; columns are 1-based.
struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    /// Column of `chars[0]`.
    base: usize,
}

impl Cursor {
    fn new(text: &str, line: usize, base: usize) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line,
            base,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            line: self.line,
            col: self.base + self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn ident(&mut self) -> PResult<String> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == '_' => {}
            _ => return self.err("expected an identifier"),
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn digits(&mut self) -> PResult<String> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Parses `lex`, `grevlex` or `block(a,b:grevlex; c:lex)`.
pub fn parse_order(text: &str, vars: &[String]) -> PResult<MonomialOrder> {
    parse_order_at(&mut Cursor::new(text, 1, 1), vars)
}

fn parse_order_at(cur: &mut Cursor, vars: &[String]) -> PResult<MonomialOrder> {
    let word = cur.ident()?;
    let order = match word.as_str() {
        "lex" => MonomialOrder::Lex,
        "grevlex" => MonomialOrder::Grevlex,
        "block" => {
            if !cur.eat('(') {
                return cur.err("expected '(' after block");
            }
            let mut groups: Vec<(Vec<usize>, BlockKind)> = Vec::new();
            loop {
                let mut vs = Vec::new();
                loop {
                    let name = cur.ident()?;
                    match vars.iter().position(|v| *v == name) {
                        Some(i) => vs.push(i),
                        None => return cur.err(format!("unknown variable '{name}'")),
                    }
                    if !cur.eat(',') {
                        break;
                    }
                }
                if !cur.eat(':') {
                    return cur.err("expected ':' and a block order");
                }
                let kind = match cur.ident()?.as_str() {
                    "lex" => BlockKind::Lex,
                    "grevlex" => BlockKind::Grevlex,
                    other => return cur.err(format!("unknown block order '{other}'")),
                };
                groups.push((vs, kind));
                if cur.eat(')') {
                    break;
                }
                if !cur.eat(';') {
                    return cur.err("expected ';' or ')'");
                }
            }
            let refs: Vec<(&[usize], BlockKind)> = groups.iter().map(|(v, k)| (v.as_slice(), *k)).collect();
            let order = MonomialOrder::blocks(&refs);
            if let Err(e) = order.validate(vars.len()) {
                return cur.err(e.to_string());
            }
            order
        }
        other => return cur.err(format!("unknown order '{other}'")),
    };
    if !cur.at_end() {
        return cur.err("unexpected text after the order");
    }
    Ok(order)
}

fn parse_coef(cur: &mut Cursor) -> PResult<BigRational> {
    let num = BigInt::from_str(&cur.digits()?).expect("digits");
    if cur.eat('/') {
        let at = cur.pos;
        let den = BigInt::from_str(&cur.digits()?).expect("digits");
        if den == BigInt::from(0) {
            cur.pos = at;
            return cur.err("zero denominator");
        }
        return Ok(BigRational::new(num, den));
    }
    Ok(BigRational::from_integer(num))
}

fn parse_power(cur: &mut Cursor, ring: &RingRef<Rationals>, exps: &mut [u32]) -> PResult<()> {
    cur.skip_ws();
    let at = cur.pos;
    let name = cur.ident()?;
    let Some(v) = ring.var_index(&name) else {
        cur.pos = at;
        return cur.err(format!("unknown variable '{name}'"));
    };
    let mut e = 1u32;
    if cur.eat('^') {
        if cur.peek() == Some('-') {
            return cur.err("negative exponent");
        }
        let at = cur.pos;
        e = match cur.digits()?.parse() {
            Ok(e) => e,
            Err(_) => {
                cur.pos = at;
                return cur.err("exponent too large");
            }
        };
    }
    exps[v] = match exps[v].checked_add(e) {
        Some(x) => x,
        None => return cur.err("exponent too large"),
    };
    Ok(())
}

fn parse_term(cur: &mut Cursor, ring: &RingRef<Rationals>) -> PResult<(Monomial, BigRational)> {
    let mut exps = vec![0u32; ring.nvars()];
    let mut coef = BigRational::from_integer(BigInt::from(1));
    let mut need_power = true;
    if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        coef = parse_coef(cur)?;
        need_power = cur.eat('*');
        if !need_power && cur.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            need_power = true;
        }
    }
    if need_power {
        loop {
            parse_power(cur, ring, &mut exps)?;
            if !cur.eat('*') {
                break;
            }
        }
    }
    Ok((Monomial::new(&exps).expect("arity"), coef))
}

fn parse_poly_at(cur: &mut Cursor, ring: &RingRef<Rationals>) -> PResult<Poly<Rationals>> {
    let mut terms = Vec::new();
    let mut neg = cur.eat('-');
    if !neg {
        cur.eat('+');
    }
    loop {
        if cur.at_end() {
            return cur.err("expected a term");
        }
        let (m, c) = parse_term(cur, ring)?;
        terms.push((m, if neg { -c } else { c }));
        if cur.eat('+') {
            neg = false;
        } else if cur.eat('-') {
            neg = true;
        } else if cur.at_end() {
            break;
        } else {
            return cur.err("expected '+', '-' or end of line");
        }
    }
    Ok(Poly::from_terms(ring, terms).expect("arity"))
}

/// Parses one polynomial in `ring`.
pub fn parse_poly(text: &str, ring: &RingRef<Rationals>) -> PResult<Poly<Rationals>> {
    parse_poly_at(&mut Cursor::new(text, 1, 1), ring)
}

/// Parses a whole ideal file.
pub fn parse_ideal_file(text: &str) -> PResult<IdealFile> {
    let mut vars: Option<Vec<String>> = None;
    let mut ring: Option<RingRef<Rationals>> = None;
    let mut ideals: Vec<(String, Vec<Poly<Rationals>>)> = Vec::new();
    let mut last = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last = line;
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        let trimmed = body.trim();
        let base = indent + 1;
        if let Some(rest) = trimmed.strip_prefix("ring:") {
            if vars.is_some() {
                return Err(ParseError {
                    line,
                    col: base,
                    msg: "duplicate ring declaration".into(),
                });
            }
            let mut cur = Cursor::new(rest, line, base + 5);
            let mut vs: Vec<String> = Vec::new();
            loop {
                let v = cur.ident()?;
                if vs.contains(&v) {
                    return cur.err(format!("duplicate variable '{v}'"));
                }
                vs.push(v);
                if !cur.eat(',') {
                    break;
                }
            }
            if !cur.at_end() {
                return cur.err("expected ',' or end of line");
            }
            vars = Some(vs);
        } else if let Some(rest) = trimmed.strip_prefix("order:") {
            let Some(vs) = &vars else {
                return Err(ParseError {
                    line,
                    col: base,
                    msg: "order declared before ring".into(),
                });
            };
            if ring.is_some() {
                return Err(ParseError {
                    line,
                    col: base,
                    msg: "duplicate order declaration".into(),
                });
            }
            let order = parse_order_at(&mut Cursor::new(rest, line, base + 6), vs)?;
            ring = Some(Ring::new(Rationals, vs.clone(), order).map_err(|e| ParseError {
                line,
                col: base,
                msg: e.to_string(),
            })?);
        } else if let Some(rest) = trimmed.strip_prefix("ideal") {
            if ring.is_none() {
                return Err(ParseError {
                    line,
                    col: base,
                    msg: "ideal declared before ring and order".into(),
                });
            }
            let mut cur = Cursor::new(rest, line, base + 5);
            if !rest.starts_with(char::is_whitespace) {
                return cur.err("expected a space after 'ideal'");
            }
            let name = cur.ident()?;
            if ideals.iter().any(|(n, _)| *n == name) {
                return cur.err(format!("duplicate ideal '{name}'"));
            }
            if !cur.eat(':') || !cur.at_end() {
                return cur.err("expected ':' at the end of the ideal header");
            }
            ideals.push((name, Vec::new()));
        } else {
            let Some((_, gens)) = ideals.last_mut() else {
                return Err(ParseError {
                    line,
                    col: base,
                    msg: "expected 'ring:', 'order:' or 'ideal'".into(),
                });
            };
            let r = ring.as_ref().expect("ideal implies ring");
            gens.push(parse_poly_at(&mut Cursor::new(trimmed, line, base), r)?);
        }
    }
    let Some(ring) = ring else {
        return Err(ParseError {
            line: last.max(1),
            col: 1,
            msg: if vars.is_none() {
                "missing ring declaration".into()
            } else {
                "missing order declaration".into()
            },
        });
    };
    if ideals.is_empty() {
        return Err(ParseError {
            line: last.max(1),
            col: 1,
            msg: "no ideal declared".into(),
        });
    }
    if let Some((name, _)) = ideals.iter().find(|(_, g)| g.is_empty()) {
        return Err(ParseError {
            line: last.max(1),
            col: 1,
            msg: format!("ideal '{name}' has no generators"),
        });
    }
    Ok(IdealFile { ring, ideals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_file_parses() {
        let f = parse_ideal_file("ring: x,y\norder: grevlex\nideal I:\n  x^2*y + 3/2*x - 1").unwrap();
        assert_eq!(f.ideals.len(), 1);
        assert_eq!(f.get("I").unwrap().len(), 1);
        assert_eq!(f.get("I").unwrap()[0].to_string(), "x^2*y + 3/2*x - 1");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_ideal_file("ring: x\norder: lex\nideal I:\n  x^-1").unwrap_err();
        assert_eq!((e.line, e.msg.as_str()), (4, "negative exponent"));
        assert_eq!(e.col, 5);
        let e = parse_ideal_file("ring: x\norder: lex\nideal I:\n  1/0*x").unwrap_err();
        assert_eq!((e.line, e.col, e.msg.as_str()), (4, 5, "zero denominator"));
        let e = parse_ideal_file("ring: x\norder: lex\nideal I:\n  x + z").unwrap_err();
        assert_eq!((e.line, e.col), (4, 7));
        assert!(e.msg.contains("unknown variable 'z'"));
        let e = parse_ideal_file("ring: x\nideal I:\n x").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_ideal_file("ring: x\norder: lex\nideal I:\n  x x").unwrap_err();
        assert_eq!((e.line, e.col), (4, 5));
    }

    #[test]
    fn terms_coefficients_and_comments() {
        let f = parse_ideal_file(
            "# header\nring: x, y, z\norder: block(x:lex; y,z:grevlex)\nideal J:  # trailing\n  -2x*y^2 + z - 7/3\n  +x*x*y\n",
        )
        .unwrap();
        let g = f.get("J").unwrap();
        assert_eq!(g[0].to_string(), "-2*x*y^2 + z - 7/3");
        assert_eq!(g[1].to_string(), "x^2*y");
        assert_eq!(order_to_string(f.ring.order(), f.ring.vars()), "block(x:lex; y,z:grevlex)");
    }

    #[test]
    fn print_then_parse_is_stable() {
        let src = "ring: a, b\norder: lex\nideal P:\n  a^3 - 1/2*a*b + 4\n  b\nideal Q:\n  a*b - b^2\n";
        let f = parse_ideal_file(src).unwrap();
        let printed = f.to_string();
        let g = parse_ideal_file(&printed).unwrap();
        assert_eq!(g.to_string(), printed);
        assert_eq!(printed, "ring: a, b\norder: lex\nideal P:\n  a^3 - 1/2*a*b + 4\n  b\nideal Q:\n  a*b - b^2\n");
    }
}
