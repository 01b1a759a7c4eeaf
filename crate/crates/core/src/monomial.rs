//! Monomials and monomial ideals in `v` commuting variables.
//!
//! A [`MonomialIdeal`] is stored as its minimal generating set: a
//! divisibility antichain in descending lexicographic order, so
//! two ideals are equal exactly when their generator lists are equal. The
//! unit ideal is `{1}` and the zero ideal is the empty set.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent vector `x1^e1 * ... * xv^ev`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::Input("monomial needs at least one variable".into()));
        }
        Ok(Monomial(exponents))
    }

    pub fn one(vars: usize) -> Self {
        Monomial(vec![0; vars])
    }

    /// `x_i^e` in `vars` variables.
    pub fn pure_power(vars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; vars];
        v[i] = e;
        Monomial(v)
    }

    pub fn vars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Index of the variable when `self` is a pure power `x_i^e` with `e > 0`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut nz = self.0.iter().enumerate().filter(|(_, &e)| e > 0);
        match (nz.next(), nz.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        check_vars(self.vars(), other.vars())?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// `self / gcd(self, other)`.
    pub fn quotient_by_gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a.saturating_sub(*b)).collect())
    }

    /// Parses `x^2*y`, `x1^3 x3`, or `1`.
    pub fn parse(vars: usize, s: &str) -> Result<Monomial> {
        let s = s.trim();
        let mut exps = vec![0u32; vars];
        if s == "1" {
            return Ok(Monomial(exps));
        }
        if s.is_empty() {
            return Err(Error::Parse("empty monomial".into()));
        }
        for factor in s.split(|c: char| c == '*' || c.is_whitespace()) {
            if factor.is_empty() {
                continue;
            }
            if factor == "1" {
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            let i = var_index(vars, name)?;
            exps[i] = exps[i].checked_add(exp).ok_or(Error::Overflow)?;
        }
        Ok(Monomial(exps))
    }
}

fn var_index(vars: usize, name: &str) -> Result<usize> {
    let idx = match (vars, name) {
        (1, "x") => Some(0),
        (2, "x") => Some(0),
        (2, "y") => Some(1),
        (_, n) if n.starts_with('x') => n[1..].parse::<usize>().ok().filter(|&k| k >= 1).map(|k| k - 1),
        _ => None,
    };
    match idx {
        Some(i) if i < vars => Ok(i),
        _ => Err(Error::Parse(format!("unknown variable `{name}` for {vars} variables"))),
    }
}

pub(crate) fn var_name(vars: usize, i: usize) -> String {
    match vars {
        1 => "x".to_string(),
        2 => ["x", "y"][i].to_string(),
        _ => format!("x{}", i + 1),
    }
}

fn check_vars(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::VarMismatch(a, b))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", var_name(self.0.len(), i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Number of standard monomials of an ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colength {
    Finite(u64),
    Infinite,
}

/// A monomial ideal given by its minimal generators, stored in descending
/// lexicographic order (`x^2` before `x*y` before `y^2`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialIdeal {
    vars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Minimal antichain generating the same ideal as `gens`, sorted lexicographically.
    pub fn minimalize(vars: usize, gens: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        if vars == 0 {
            return Err(Error::Input("ideal needs at least one variable".into()));
        }
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        for g in &all {
            check_vars(vars, g.vars())?;
        }
        all.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut kept: Vec<Monomial> = Vec::with_capacity(all.len());
        for g in all {
            if !kept.iter().any(|k| k.divides(&g)) {
                kept.push(g);
            }
        }
        kept.sort_by(|a, b| b.cmp(a));
        Ok(MonomialIdeal { vars, gens: kept })
    }

    pub fn unit(vars: usize) -> Self {
        MonomialIdeal { vars, gens: vec![Monomial::one(vars)] }
    }

    pub fn zero(vars: usize) -> Self {
        MonomialIdeal { vars, gens: Vec::new() }
    }

    /// `(x1, ..., xv)^k`.
    pub fn maximal_power(vars: usize, k: u32) -> Self {
        let mut gens = Vec::new();
        let mut cur = vec![0u32; vars];
        all_of_degree(vars, k, 0, &mut cur, &mut gens);
        // all_of_degree yields an antichain already
        gens.sort_by(|a, b| b.cmp(a));
        MonomialIdeal { vars, gens }
    }

    pub fn maximal(vars: usize) -> Self {
        Self::maximal_power(vars, 1)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Contains a pure power of every variable (finite colength).
    pub fn is_artinian(&self) -> bool {
        if self.is_unit() {
            return true;
        }
        let mut seen = vec![false; self.vars];
        for g in &self.gens {
            if let Some(i) = g.pure_power_var() {
                seen[i] = true;
            }
        }
        seen.into_iter().all(|b| b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_vars(self.vars, other.vars)?;
        Self::minimalize(self.vars, self.gens.iter().chain(&other.gens).cloned())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_vars(self.vars, other.vars)?;
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let mut prods = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                prods.push(a.checked_mul(b)?);
            }
        }
        Self::minimalize(self.vars, prods)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        check_vars(self.vars, other.vars)?;
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let mut lcms = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                lcms.push(a.lcm(b));
            }
        }
        Self::minimalize(self.vars, lcms)
    }

    /// `(self : other)`, the largest ideal `H` with `H * other ⊆ self`.
    pub fn colon(&self, other: &Self) -> Result<Self> {
        check_vars(self.vars, other.vars)?;
        if other.is_zero() {
            return Err(Error::ColonByZero);
        }
        if other.is_subset(self)? {
            return Ok(Self::unit(self.vars));
        }
        let mut acc = Self::unit(self.vars);
        for m in &other.gens {
            let quot = Self::minimalize(self.vars, self.gens.iter().map(|g| g.quotient_by_gcd(m)))?;
            acc = acc.intersect(&quot)?;
        }
        Ok(acc)
    }

    pub fn power(&self, k: u32) -> Result<Self> {
        let mut acc = Self::unit(self.vars);
        for _ in 0..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        check_vars(self.vars, m.vars())?;
        Ok(self.gens.iter().any(|g| g.divides(m)))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        check_vars(self.vars, other.vars)?;
        Ok(self.gens.iter().all(|g| other.gens.iter().any(|h| h.divides(g))))
    }

    /// Number of monomials outside the ideal, by a walk over the box cut
    /// out by the minimal pure powers.
    pub fn colength(&self) -> Colength {
        if self.is_zero() {
            return Colength::Infinite;
        }
        let mut bounds = vec![u32::MAX; self.vars];
        for g in &self.gens {
            if g.is_one() {
                return Colength::Finite(0);
            }
            if let Some(i) = g.pure_power_var() {
                bounds[i] = bounds[i].min(g.exponents()[i]);
            }
        }
        if bounds.contains(&u32::MAX) {
            return Colength::Infinite;
        }
        let mut count = 0u64;
        let mut cur = vec![0u32; self.vars];
        loop {
            let m = Monomial(cur.clone());
            if !self.gens.iter().any(|g| g.divides(&m)) {
                count += 1;
            }
            // odometer step
            let mut i = 0;
            loop {
                if i == self.vars {
                    return Colength::Finite(count);
                }
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Parses a comma-separated generator list such as `x^2, y^2`.
    ///
    /// An entry of the form `(x,y)^k` stands for every monomial of degree `k`;
    /// `0` alone is the zero ideal.
    pub fn parse(vars: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(vars));
        }
        let mut gens = Vec::new();
        for item in split_top_level(s) {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            if item.starts_with('(') {
                gens.extend(parse_maximal_power(vars, item)?.gens);
            } else {
                gens.push(Monomial::parse(vars, item)?);
            }
        }
        if gens.is_empty() {
            return Err(Error::Parse(format!("no generators in `{s}`")));
        }
        Self::minimalize(vars, gens)
    }

    /// Parses a list of generator strings, as stored in fixture files.
    pub fn parse_list<S: AsRef<str>>(vars: usize, items: &[S]) -> Result<Self> {
        let joined: Vec<&str> = items.iter().map(|s| s.as_ref()).collect();
        Self::parse(vars, &joined.join(", "))
    }
}

fn all_of_degree(vars: usize, k: u32, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if i == vars - 1 {
        cur[i] = k;
        out.push(Monomial(cur.clone()));
        cur[i] = 0;
        return;
    }
    for e in 0..=k {
        cur[i] = e;
        all_of_degree(vars, k - e, i + 1, cur, out);
    }
    cur[i] = 0;
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_maximal_power(vars: usize, item: &str) -> Result<MonomialIdeal> {
    let bad = || Error::Parse(format!("expected `(vars)^k`, got `{item}`"));
    let close = item.find(')').ok_or_else(bad)?;
    let inner = &item[1..close];
    let mut seen = vec![false; vars];
    for name in inner.split(',') {
        seen[var_index(vars, name.trim())?] = true;
    }
    if !seen.iter().all(|&b| b) {
        return Err(Error::Parse(format!("`{item}` must list every variable")));
    }
    let rest = item[close + 1..].trim();
    let k = match rest.strip_prefix('^') {
        Some(e) => e.trim().parse::<u32>().map_err(|_| bad())?,
        None if rest.is_empty() => 1,
        None => return Err(bad()),
    };
    Ok(MonomialIdeal::maximal_power(vars, k))
}

impl PartialOrd for MonomialIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonomialIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vars.cmp(&other.vars).then_with(|| self.gens.cmp(&other.gens))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for MonomialIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.gens.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonomialIdeal {
    /// The zero ideal serializes as `[]`, which carries no variable count;
    /// it deserializes with `vars = 0` and must be re-tagged by the caller.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let gens: Vec<Vec<u32>> = Vec::deserialize(d)?;
        let vars = gens.first().map_or(0, |g| g.len());
        if vars == 0 {
            return Ok(MonomialIdeal { vars: 0, gens: Vec::new() });
        }
        let gens = gens.into_iter().map(Monomial).collect::<Vec<_>>();
        MonomialIdeal::minimalize(vars, gens).map_err(serde::de::Error::custom)
    }
}
