//! Sparse subsets of ℕ on finite windows, and the bounding functions that
//! certify them.
//!
//! A set is sparse with bounding function `N` when `|S ∩ ℕ_n| ≤ n/m` for all
//! `m ≥ 1` and `n ≥ N(m)`, where `ℕ_n = {0, …, n-1}`. Sparseness is
//! asymptotic, so every check here runs on a declared window and reports the
//! values of `m` it could not reach.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set `S ⊆ ℕ` whose membership is known on `ℕ_H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseSetWindow {
    members: Vec<u64>,
    horizon: u64,
}

impl SparseSetWindow {
    pub fn new(members: impl IntoIterator<Item = u64>, horizon: u64) -> Result<Self> {
        let mut members: Vec<u64> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&s| s >= horizon) {
            return Err(Error::Input(format!("member {bad} lies outside the window [0, {horizon})")));
        }
        Ok(SparseSetWindow { members, horizon })
    }

    pub fn empty(horizon: u64) -> Self {
        SparseSetWindow { members: Vec::new(), horizon }
    }

    pub fn full(horizon: u64) -> Self {
        SparseSetWindow { members: (0..horizon).collect(), horizon }
    }

    pub fn squares(horizon: u64) -> Self {
        let members = (0u64..).map(|k| k * k).take_while(|&s| s < horizon).collect();
        SparseSetWindow { members, horizon }
    }

    /// `{1, b, b², …}`.
    pub fn powers(base: u64, horizon: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::Input(format!("power base must be at least 2, got {base}")));
        }
        let mut members = Vec::new();
        let mut p = 1u64;
        while p < horizon {
            members.push(p);
            match p.checked_mul(base) {
                Some(q) => p = q,
                None => break,
            }
        }
        Ok(SparseSetWindow { members, horizon })
    }

    /// `{start, start + step, …}`.
    pub fn arithmetic(start: u64, step: u64, horizon: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::Input("arithmetic step must be positive".into()));
        }
        let members = (0u64..)
            .map_while(|k| k.checked_mul(step).and_then(|x| x.checked_add(start)))
            .take_while(|&s| s < horizon)
            .collect();
        Ok(SparseSetWindow { members, horizon })
    }

    /// Parses whitespace- or comma-separated integers, or a JSON array.
    pub fn parse_members(text: &str, horizon: u64) -> Result<Self> {
        let trimmed = text.trim();
        let members: Vec<u64> = if trimmed.starts_with('[') {
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("set list: {e}")))?
        } else {
            trimmed
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u64>().map_err(|e| Error::Parse(format!("set member {t:?}: {e}"))))
                .collect::<Result<_>>()?
        };
        Self::new(members, horizon)
    }

    pub fn from_file(path: &Path, horizon: u64) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_members(&text, horizon)
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    /// `|S ∩ ℕ_n|`.
    pub fn prefix_count(&self, n: u64) -> Result<u64> {
        if n > self.horizon {
            return Err(Error::BeyondHorizon { n: n as usize, horizon: self.horizon as usize });
        }
        Ok(self.members.partition_point(|&s| s < n) as u64)
    }

    /// `|S ∩ ℕ_n|` for every `0 ≤ n ≤ H`.
    pub fn prefix_counts(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.horizon as usize + 1);
        let mut it = self.members.iter().peekable();
        let mut c = 0;
        for n in 0..=self.horizon {
            while it.next_if(|&&s| s < n).is_some() {
                c += 1;
            }
            out.push(c);
        }
        out
    }

    /// `S_d`: members with another member among the `d` integers just below.
    pub fn shifted_self(&self, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Input("shift d must be at least 1".into()));
        }
        let members = self.members.windows(2).filter(|w| w[1] - w[0] <= d).map(|w| w[1]).collect();
        Ok(SparseSetWindow { members, horizon: self.horizon })
    }

    pub fn union(&self, other: &Self) -> Self {
        let horizon = self.horizon.min(other.horizon);
        let members = self
            .members
            .iter()
            .chain(&other.members)
            .copied()
            .filter(|&s| s < horizon)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        SparseSetWindow { members, horizon }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let members = self.members.iter().copied().filter(|&s| !other.contains(s)).collect();
        SparseSetWindow { members, horizon: self.horizon }
    }
}

/// A monotone map `N: ℕ₊ → ℕ₊`, kept symbolic so reports can print it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundingFunction {
    /// `coeff · m^exp`.
    Poly { coeff: u64, exp: u32 },
    /// `N(1), N(2), …`; undefined past the end.
    Table { values: Vec<u64> },
    /// `max_i N_i(d·m)`, the bound for a union of `d` sets.
    Union { d: u64, parts: Vec<BoundingFunction> },
    /// `max(3m, N_{3m}(3m))` from bounds `N_k` of the shifted sets `S_k`.
    Derived { shifted: BTreeMap<u64, BoundingFunction> },
}

impl BoundingFunction {
    pub fn linear(coeff: u64) -> Self {
        BoundingFunction::Poly { coeff, exp: 1 }
    }

    /// `N(m) = |S|·m`, valid for any finite set.
    pub fn finite(s: &SparseSetWindow) -> Self {
        Self::linear((s.len() as u64).max(1))
    }

    /// `None` when undefined at `m` or too large to represent.
    pub fn eval(&self, m: u64) -> Option<u64> {
        match self {
            BoundingFunction::Poly { coeff, exp } => m.checked_pow(*exp)?.checked_mul(*coeff),
            BoundingFunction::Table { values } => values.get(usize::try_from(m).ok()?.checked_sub(1)?).copied(),
            BoundingFunction::Union { d, parts } => {
                let dm = m.checked_mul(*d)?;
                parts.iter().map(|p| p.eval(dm)).collect::<Option<Vec<_>>>()?.into_iter().max()
            }
            BoundingFunction::Derived { shifted } => {
                let k = m.checked_mul(3)?;
                Some(k.max(shifted.get(&k)?.eval(k)?))
            }
        }
    }

    /// First `m ≤ m_max` with `N(m) < N(m-1)`, if any.
    pub fn first_decrease(&self, m_max: u64) -> Option<u64> {
        let mut prev = None;
        for m in 1..=m_max {
            let v = self.eval(m)?;
            if prev.is_some_and(|p| v < p) {
                return Some(m);
            }
            prev = Some(v);
        }
        None
    }

    /// Parses `c*m`, `c*m^k`, `m^k`, `m`, a bare constant multiple like `4m`,
    /// or a comma-separated table `[N(1), N(2), …]`.
    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || Error::Parse(format!("bounding function {s:?}; expected e.g. 4*m^2 or [1,2,3]"));
        if let Some(body) = t.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let values = body
                .split(',')
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<u64>().map_err(|_| err()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(BoundingFunction::Table { values });
        }
        let (coeff, rest) = match t.find('m') {
            Some(0) => (1, &t[..]),
            Some(i) => {
                let c = t[..i].trim_end_matches('*');
                (c.parse::<u64>().map_err(|_| err())?, &t[i..])
            }
            None => return Err(err()),
        };
        let exp = match rest {
            "m" => 1,
            _ => rest.strip_prefix("m^").and_then(|e| e.parse::<u32>().ok()).ok_or_else(err)?,
        };
        if coeff == 0 {
            return Err(err());
        }
        Ok(BoundingFunction::Poly { coeff, exp })
    }
}

impl fmt::Display for BoundingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundingFunction::Poly { coeff, exp } => match (coeff, exp) {
                (1, 1) => write!(f, "m"),
                (c, 1) => write!(f, "{c}*m"),
                (1, e) => write!(f, "m^{e}"),
                (c, e) => write!(f, "{c}*m^{e}"),
            },
            BoundingFunction::Table { values } => {
                let v: Vec<String> = values.iter().map(u64::to_string).collect();
                write!(f, "[{}]", v.join(", "))
            }
            BoundingFunction::Union { d, parts } => {
                let p: Vec<String> = parts.iter().map(|p| format!("({p})")).collect();
                write!(f, "max over {} of N_i({d}m) with N_i in {}", parts.len(), p.join(", "))
            }
            BoundingFunction::Derived { shifted } => {
                write!(f, "max(3m, N_3m(3m)) with N_d given for d in {:?}", shifted.keys().collect::<Vec<_>>())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingReport {
    pub ok: bool,
    pub horizon: u64,
    pub m_max: u64,
    /// First `(m, n)` with `m·|S ∩ ℕ_n| > n` and `n ≥ N(m)`.
    pub first_failure: Option<(u64, u64)>,
    /// Values of `m` for which `N(m)` exceeds the window or is undefined.
    pub vacuous: Vec<u64>,
    /// First `m` at which `N` decreases, which disqualifies it.
    pub non_monotone_at: Option<u64>,
}

impl BoundingReport {
    pub fn is_vacuous(&self) -> bool {
        !self.vacuous.is_empty()
    }
}

/// Checks `m·|S ∩ ℕ_n| ≤ n` for `1 ≤ m ≤ m_max` and `N(m) ≤ n ≤ H`.
pub fn check_bounding(s: &SparseSetWindow, bound: &BoundingFunction, m_max: u64) -> BoundingReport {
    let h = s.horizon();
    let counts = s.prefix_counts();
    let mut first_failure = None;
    let mut vacuous = Vec::new();
    for m in 1..=m_max {
        let Some(start) = bound.eval(m).filter(|&n| n <= h) else {
            vacuous.push(m);
            continue;
        };
        if let Some(n) = (start..=h).find(|&n| counts[n as usize].saturating_mul(m) > n) {
            first_failure = Some((m, n));
            break;
        }
    }
    let non_monotone_at = bound.first_decrease(m_max);
    BoundingReport {
        ok: first_failure.is_none() && non_monotone_at.is_none(),
        horizon: h,
        m_max,
        first_failure,
        vacuous,
        non_monotone_at,
    }
}

/// The union of the parts together with `N(m) = max_i N_i(d·m)`, `d` the
/// number of parts, checked on the common window.
pub fn union_bound(
    parts: &[(SparseSetWindow, BoundingFunction)],
    m_max: u64,
) -> Result<(SparseSetWindow, BoundingFunction, BoundingReport)> {
    let (first, _) = parts.first().ok_or_else(|| Error::Input("union of no sets".into()))?;
    let d = parts.len() as u64;
    let union = parts[1..].iter().fold(first.clone(), |acc, (s, _)| acc.union(s));
    let bound = if d == 1 {
        parts[0].1.clone()
    } else {
        BoundingFunction::Union { d, parts: parts.iter().map(|(_, n)| n.clone()).collect() }
    };
    let report = check_bounding(&union, &bound, m_max);
    Ok((union, bound, report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedReport {
    pub bound: BoundingFunction,
    /// Shifts `d` whose supplied `N_d` does not bound `S_d` on the window.
    pub precondition_failures: Vec<(u64, BoundingReport)>,
    pub check: BoundingReport,
}

/// Bound for `S` from bounds for the shifted sets `S_{3m}`, `m ≤ m_max`.
///
/// Each supplied `N_d` is checked against `S_d` up to `m = d`, the only
/// argument at which the derived function reads it.
pub fn derived_bound(
    s: &SparseSetWindow,
    shifted: BTreeMap<u64, BoundingFunction>,
    m_max: u64,
) -> Result<DerivedReport> {
    let missing: Vec<u64> = (1..=m_max).map(|m| 3 * m).filter(|d| !shifted.contains_key(d)).collect();
    if !missing.is_empty() {
        return Err(Error::Input(format!("no bound supplied for S_d with d in {missing:?}")));
    }
    let mut precondition_failures = Vec::new();
    for (&d, n_d) in &shifted {
        let r = check_bounding(&s.shifted_self(d)?, n_d, d);
        if !r.ok {
            precondition_failures.push((d, r));
        }
    }
    let bound = BoundingFunction::Derived { shifted };
    let check = check_bounding(s, &bound, m_max);
    Ok(DerivedReport { bound, precondition_failures, check })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub d: u64,
    pub horizon: u64,
    /// `|S^c ∩ ℕ_n| ≥ d(|(S∖S_d) ∩ ℕ_n| − 1)` for all `1 ≤ n ≤ H`.
    pub ineq1_ok: bool,
    /// `(d+1)|S ∩ ℕ_n| ≤ n + d + d|S_d ∩ ℕ_n|` for all `1 ≤ n ≤ H`.
    pub ineq2_ok: bool,
    pub ineq1_failure: Option<u64>,
    pub ineq2_failure: Option<u64>,
}

/// Checks the two counting estimates relating `S`, its complement and `S_d`.
pub fn verify_estimates(s: &SparseSetWindow, d: u64) -> Result<EstimateReport> {
    let sd = s.shifted_self(d)?;
    let all = s.prefix_counts();
    let shifted = sd.prefix_counts();
    let di = d as i128;
    let mut ineq1_failure = None;
    let mut ineq2_failure = None;
    for n in 1..=s.horizon() {
        let (c, cd, ni) = (all[n as usize] as i128, shifted[n as usize] as i128, n as i128);
        if ineq1_failure.is_none() && ni - c < di * (c - cd - 1) {
            ineq1_failure = Some(n);
        }
        if ineq2_failure.is_none() && (di + 1) * c > ni + di + di * cd {
            ineq2_failure = Some(n);
        }
    }
    Ok(EstimateReport {
        d,
        horizon: s.horizon(),
        ineq1_ok: ineq1_failure.is_none(),
        ineq2_ok: ineq2_failure.is_none(),
        ineq1_failure,
        ineq2_failure,
    })
}
