//! Small expression languages used by fixture files.
//!
//! Ideal expressions combine variables, named ideals and the builtin `m`
//! (the maximal ideal at the origin) with `^`, `*`, `+` (or `,`) and `:`,
//! binding in that order from tightest to loosest:
//!
//! ```text
//! x^6, x^5*y, x*y^5, y^6, (x,y)^7      J + x^3*y^3      K : (M*N)
//! ```
//!
//! Data expressions combine terms of the sequences under analysis: `I3` is
//! `ℐ_3`, `H1` is `ℋ_1`, `HL2` is `ℋ^ℓ_2`, `@k` twists by `σ^k`, and `*`
//! and `:` act slotwise.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::monomial::{var_name, Monomial, MonomialIdeal};
use crate::sequence::OrbitIdealData;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            let v = s[i..end].parse().map_err(|e| Error::Parse(format!("number in `{s}`: {e}")))?;
            out.push(Tok::Int(v));
        } else if c.is_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            out.push(Tok::Ident(s[i..end].to_string()));
        } else if "()+,*^:@-".contains(c) {
            out.push(Tok::Sym(c));
            chars.next();
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in `{s}`")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Result<Self> {
        Ok(Cursor { toks: tokenize(src)?, pos: 0, src })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn int(&mut self) -> Result<u64> {
        match self.next() {
            Some(Tok::Int(k)) => Ok(k),
            other => Err(self.error(&format!("expected a number, found {other:?}"))),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(&format!("unexpected trailing {t:?}"))),
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in `{}`", self.src))
    }
}

/// Named ideals with lazily evaluated, possibly interdependent definitions.
#[derive(Clone, Debug)]
pub struct IdealScope {
    vars: usize,
    defs: BTreeMap<String, String>,
    cache: BTreeMap<String, MonomialIdeal>,
}

impl IdealScope {
    pub fn new(vars: usize, defs: BTreeMap<String, String>) -> Result<Self> {
        if vars == 0 {
            return Err(Error::Input("at least one variable is required".into()));
        }
        let var_names: BTreeSet<String> = (0..vars).map(|i| var_name(vars, i)).collect();
        if let Some(bad) = defs.keys().find(|k| var_names.contains(*k)) {
            return Err(Error::Input(format!("ideal name `{bad}` shadows a variable")));
        }
        let mut scope = IdealScope { vars, defs, cache: BTreeMap::new() };
        let names: Vec<String> = scope.defs.keys().cloned().collect();
        for name in names {
            scope.resolve(&name, &mut Vec::new())?;
        }
        Ok(scope)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn get(&self, name: &str) -> Option<&MonomialIdeal> {
        self.cache.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.defs.keys()
    }

    /// Evaluates an ideal expression against the named definitions.
    pub fn eval(&self, src: &str) -> Result<MonomialIdeal> {
        let mut c = Cursor::new(src)?;
        let mut lookup = |name: &str| {
            self.cache.get(name).cloned().ok_or_else(|| Error::Parse(format!("unknown ideal `{name}` in `{src}`")))
        };
        let v = parse_colon(&mut c, self.vars, &mut lookup)?;
        c.finish()?;
        Ok(v)
    }

    pub fn monomial(&self, src: &str) -> Result<Monomial> {
        Monomial::parse(self.vars, src)
    }

    fn resolve(&mut self, name: &str, stack: &mut Vec<String>) -> Result<MonomialIdeal> {
        if let Some(v) = self.cache.get(name) {
            return Ok(v.clone());
        }
        let Some(src) = self.defs.get(name).cloned() else {
            return Err(Error::Parse(format!("unknown ideal `{name}`")));
        };
        if stack.iter().any(|s| s == name) {
            return Err(Error::Parse(format!("ideal `{name}` is defined in terms of itself")));
        }
        stack.push(name.to_string());
        let mut c = Cursor::new(&src)?;
        let vars = self.vars;
        let mut lookup = |n: &str| self.resolve(n, stack);
        let v = parse_colon(&mut c, vars, &mut lookup)
            .and_then(|v| c.finish().map(|_| v))
            .map_err(|e| Error::Parse(format!("ideal `{name}`: {e}")))?;
        stack.pop();
        self.cache.insert(name.to_string(), v.clone());
        Ok(v)
    }
}

type Lookup<'a> = dyn FnMut(&str) -> Result<MonomialIdeal> + 'a;

fn parse_colon(c: &mut Cursor, vars: usize, lookup: &mut Lookup) -> Result<MonomialIdeal> {
    let mut acc = parse_sum(c, vars, lookup)?;
    while c.eat(':') {
        let rhs = parse_sum(c, vars, lookup)?;
        acc = acc.colon(&rhs)?;
    }
    Ok(acc)
}

fn parse_sum(c: &mut Cursor, vars: usize, lookup: &mut Lookup) -> Result<MonomialIdeal> {
    let mut acc = parse_product(c, vars, lookup)?;
    while c.eat('+') || c.eat(',') {
        acc = acc.add(&parse_product(c, vars, lookup)?)?;
    }
    Ok(acc)
}

fn parse_product(c: &mut Cursor, vars: usize, lookup: &mut Lookup) -> Result<MonomialIdeal> {
    let mut acc = parse_power(c, vars, lookup)?;
    while c.eat('*') {
        acc = acc.multiply(&parse_power(c, vars, lookup)?)?;
    }
    Ok(acc)
}

fn parse_power(c: &mut Cursor, vars: usize, lookup: &mut Lookup) -> Result<MonomialIdeal> {
    let base = parse_atom(c, vars, lookup)?;
    if c.eat('^') {
        let k = c.int()?;
        let k = u32::try_from(k).map_err(|_| c.error("exponent too large"))?;
        return base.power(k);
    }
    Ok(base)
}

fn parse_atom(c: &mut Cursor, vars: usize, lookup: &mut Lookup) -> Result<MonomialIdeal> {
    match c.next() {
        Some(Tok::Sym('(')) => {
            let v = parse_colon(c, vars, lookup)?;
            c.expect(')')?;
            Ok(v)
        }
        Some(Tok::Int(1)) => Ok(MonomialIdeal::unit(vars)),
        Some(Tok::Ident(name)) => {
            if let Some(i) = (0..vars).find(|&i| var_name(vars, i) == name) {
                return MonomialIdeal::minimalize(vars, [Monomial::pure_power(vars, i, 1)]);
            }
            match lookup(&name) {
                Ok(v) => Ok(v),
                Err(_) if name == "m" => Ok(MonomialIdeal::maximal(vars)),
                Err(e) => Err(e),
            }
        }
        other => Err(c.error(&format!("expected an ideal, found {other:?}"))),
    }
}

/// Which sequence a data atom refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermSource {
    Input,
    Right,
    Left,
}

/// Evaluates a data expression; `term(source, n)` supplies the atoms.
pub fn eval_data(
    src: &str,
    term: &mut dyn FnMut(TermSource, usize) -> Result<OrbitIdealData>,
) -> Result<OrbitIdealData> {
    let mut c = Cursor::new(src)?;
    let v = data_colon(&mut c, term)?;
    c.finish()?;
    Ok(v)
}

type TermFn<'a> = dyn FnMut(TermSource, usize) -> Result<OrbitIdealData> + 'a;

fn data_colon(c: &mut Cursor, term: &mut TermFn) -> Result<OrbitIdealData> {
    let mut acc = data_product(c, term)?;
    while c.eat(':') {
        acc = acc.colon(&data_product(c, term)?)?;
    }
    Ok(acc)
}

fn data_product(c: &mut Cursor, term: &mut TermFn) -> Result<OrbitIdealData> {
    let mut acc = data_twisted(c, term)?;
    while c.eat('*') {
        acc = acc.multiply(&data_twisted(c, term)?)?;
    }
    Ok(acc)
}

fn data_twisted(c: &mut Cursor, term: &mut TermFn) -> Result<OrbitIdealData> {
    let mut acc = data_atom(c, term)?;
    while c.eat('@') {
        let negative = c.eat('-');
        let k = i64::try_from(c.int()?).map_err(|_| c.error("twist too large"))?;
        acc = acc.twist(if negative { -k } else { k });
    }
    Ok(acc)
}

fn data_atom(c: &mut Cursor, term: &mut TermFn) -> Result<OrbitIdealData> {
    match c.next() {
        Some(Tok::Sym('(')) => {
            let v = data_colon(c, term)?;
            c.expect(')')?;
            Ok(v)
        }
        Some(Tok::Ident(name)) => {
            let (source, digits) = if let Some(d) = name.strip_prefix("HL") {
                (TermSource::Left, d)
            } else if let Some(d) = name.strip_prefix('H') {
                (TermSource::Right, d)
            } else if let Some(d) = name.strip_prefix('I') {
                (TermSource::Input, d)
            } else {
                return Err(c.error(&format!("unknown term `{name}`; use I<n>, H<n> or HL<n>")));
            };
            let n = digits.parse::<usize>().map_err(|_| c.error(&format!("bad term index in `{name}`")))?;
            term(source, n)
        }
        other => Err(c.error(&format!("expected a term, found {other:?}"))),
    }
}
