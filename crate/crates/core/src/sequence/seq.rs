use serde::{Deserialize, Serialize};

use super::data::{OrbitId, OrbitIdealData};
use super::stable::StableDecomposition;
use crate::error::{Error, Result};

/// `ℐ_n = ℐ · ℐ^σ ⋯ ℐ^{σ^{n-1}}`; `n = 0` gives the unit datum.
pub fn naive_power(seed: &OrbitIdealData, n: usize) -> Result<OrbitIdealData> {
    let mut acc = OrbitIdealData::unit(seed.vars());
    for k in 0..n {
        acc = acc.multiply(&seed.twist(k as i64))?;
    }
    Ok(acc)
}

/// How the terms `ℐ_n` of a sequence are produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// Products of twists of a single seed.
    Naive { seed: OrbitIdealData },
    /// Explicit terms `ℐ_0 ..= ℐ_H` with a declared equality constant `t`.
    Table { entries: Vec<OrbitIdealData>, t: usize },
    /// Explicit terms below the stabilization threshold, then the stable
    /// form `A·B^{σ^w}⋯B^{σ^{n-1}}·C^{σ^n}` for every larger `n`.
    Stabilized { head: Vec<OrbitIdealData>, tail: StableDecomposition },
}

/// A sequence of orbit ideal data together with the window `0..=horizon`
/// on which its properties are checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSequence {
    vars: usize,
    kind: SequenceKind,
    horizon: usize,
}

impl IdealSequence {
    pub fn naive(seed: OrbitIdealData, horizon: usize) -> Result<Self> {
        check_horizon(horizon)?;
        Ok(IdealSequence { vars: seed.vars(), kind: SequenceKind::Naive { seed }, horizon })
    }

    /// A table `ℐ_0, …, ℐ_H`; the horizon is `entries.len() - 1`.
    pub fn table(entries: Vec<OrbitIdealData>, t: usize) -> Result<Self> {
        let first = entries.first().ok_or_else(|| Error::Input("table needs at least ℐ_0 and ℐ_1".into()))?;
        let vars = first.vars();
        if entries.len() < 2 {
            return Err(Error::Input("table needs at least ℐ_0 and ℐ_1".into()));
        }
        if t == 0 {
            return Err(Error::Input("the constant t must be at least 1".into()));
        }
        if let Some(e) = entries.iter().find(|e| e.vars() != vars) {
            return Err(Error::VarMismatch(vars, e.vars()));
        }
        let horizon = entries.len() - 1;
        Ok(IdealSequence { vars, kind: SequenceKind::Table { entries, t }, horizon })
    }

    pub fn stabilized(head: Vec<OrbitIdealData>, tail: StableDecomposition, horizon: usize) -> Result<Self> {
        check_horizon(horizon)?;
        if head.len() < tail.threshold {
            return Err(Error::Input(format!("stabilized sequence needs explicit terms below n = {}", tail.threshold)));
        }
        Ok(IdealSequence { vars: tail.vars, kind: SequenceKind::Stabilized { head, tail }, horizon })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        check_horizon(horizon)?;
        if let SequenceKind::Table { entries, .. } = &self.kind {
            if horizon + 1 > entries.len() {
                return Err(Error::BeyondHorizon { n: horizon, horizon: entries.len() - 1 });
            }
        }
        let mut s = self.clone();
        s.horizon = horizon;
        Ok(s)
    }

    /// The equality constant `t` the sequence is declared (or known) to satisfy.
    pub fn declared_t(&self) -> usize {
        match &self.kind {
            SequenceKind::Naive { .. } => 1,
            SequenceKind::Table { t, .. } => *t,
            SequenceKind::Stabilized { tail, .. } => tail.t,
        }
    }

    /// Largest index with a known term; `None` when every term is computable.
    pub fn last_index(&self) -> Option<usize> {
        match &self.kind {
            SequenceKind::Table { entries, .. } => Some(entries.len() - 1),
            _ => None,
        }
    }

    pub fn has_term(&self, n: usize) -> bool {
        self.last_index().is_none_or(|last| n <= last)
    }

    pub fn term(&self, n: usize) -> Result<OrbitIdealData> {
        match &self.kind {
            SequenceKind::Naive { seed } => naive_power(seed, n),
            SequenceKind::Table { entries, .. } => {
                entries.get(n).cloned().ok_or(Error::BeyondHorizon { n, horizon: entries.len() - 1 })
            }
            SequenceKind::Stabilized { head, tail } => match head.get(n) {
                Some(d) => Ok(d.clone()),
                None => tail.recompose(n),
            },
        }
    }

    /// Terms `ℐ_0 ..= ℐ_upto`.
    pub fn terms(&self, upto: usize) -> Result<Vec<OrbitIdealData>> {
        match &self.kind {
            SequenceKind::Naive { seed } => {
                let mut out = Vec::with_capacity(upto + 1);
                let mut acc = OrbitIdealData::unit(self.vars);
                out.push(acc.clone());
                for k in 0..upto {
                    acc = acc.multiply(&seed.twist(k as i64))?;
                    out.push(acc.clone());
                }
                Ok(out)
            }
            _ => (0..=upto).map(|n| self.term(n)).collect(),
        }
    }

    pub fn seed(&self) -> Result<OrbitIdealData> {
        self.term(1)
    }

    /// Agreement of every term on the common window.
    pub fn window_eq(&self, other: &Self) -> Result<bool> {
        let h = self.horizon.min(other.horizon);
        Ok(self.terms(h)? == other.terms(h)?)
    }

    /// First `n ≤ horizon` where the two sequences differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<usize>> {
        let h = self.horizon.min(other.horizon);
        let (a, b) = (self.terms(h)?, other.terms(h)?);
        Ok(a.iter().zip(&b).position(|(x, y)| x != y))
    }
}

fn check_horizon(horizon: usize) -> Result<()> {
    if horizon == 0 {
        Err(Error::Input("horizon must be positive".into()))
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// `ℐ_0` is not the unit datum.
    UnitTerm,
    /// `ℐ_m · ℐ_n^{σ^m} ⊄ ℐ_{m+n}`.
    Containment,
    /// `ℐ_m · ℐ_n^{σ^m} ≠ ℐ_{m+n}` for some `m, n ≥ t`.
    Equality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub m: usize,
    pub n: usize,
    pub orbit: Option<OrbitId>,
    pub slot: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub horizon: usize,
    pub t_declared: usize,
    /// Smallest `t` for which equality holds on the window, if any.
    pub t_effective: Option<usize>,
    pub first_violation: Option<Violation>,
}

/// Checks the generalized naive axioms on the window `m + n ≤ H`.
pub fn validate_gen_naive(seq: &IdealSequence) -> Result<ValidationReport> {
    validate_with_t(seq, seq.declared_t())
}

/// As [`validate_gen_naive`] with an explicit equality constant.
pub fn validate_with_t(seq: &IdealSequence, t: usize) -> Result<ValidationReport> {
    let h = seq.horizon();
    if t == 0 {
        return Err(Error::Input("t must be at least 1".into()));
    }
    if h < 2 * t {
        return Err(Error::Input(format!("horizon {h} is below 2t = {}", 2 * t)));
    }
    if seq.vars() < 2 {
        return Err(Error::Input("generalized naive sequences need at least 2 variables".into()));
    }
    let terms = seq.terms(h)?;
    if terms[1].is_unit() {
        if let Some(n) = terms.iter().position(|d| !d.is_unit()) {
            return Err(Error::InconsistentTable(format!("ℐ_1 is the unit ideal but ℐ_{n} is not")));
        }
    }

    let mut report = ValidationReport { ok: true, horizon: h, t_declared: t, t_effective: None, first_violation: None };
    if !terms[0].is_unit() {
        let (orbit, slot) = terms[0].first_difference(&OrbitIdealData::unit(seq.vars())).unzip();
        report.ok = false;
        report.first_violation = Some(Violation { kind: ViolationKind::UnitTerm, m: 0, n: 0, orbit, slot });
        return Ok(report);
    }

    // equal[m][n] for m, n >= 1, m + n <= h
    let mut equal = vec![vec![true; h + 1]; h + 1];
    let mut first_containment = None;
    for m in 1..h {
        for n in 1..=(h - m) {
            let prod = terms[m].multiply(&terms[n].twist(m as i64))?;
            let target = &terms[m + n];
            if first_containment.is_none() {
                if let Some((a, j)) = prod.first_non_contained(target)? {
                    first_containment =
                        Some(Violation { kind: ViolationKind::Containment, m, n, orbit: Some(a), slot: Some(j) });
                }
            }
            equal[m][n] = &prod == target;
        }
    }

    let holds_from = |t0: usize| (t0..h).all(|m| (t0..=h.saturating_sub(m)).all(|n| m + n > h || equal[m][n]));
    report.t_effective = (1..=h / 2).find(|&t0| holds_from(t0));

    if let Some(v) = first_containment {
        report.ok = false;
        report.first_violation = Some(v);
        return Ok(report);
    }
    'outer: for m in t..h {
        for n in t..=(h - m) {
            if !equal[m][n] {
                let prod = terms[m].multiply(&terms[n].twist(m as i64))?;
                let (orbit, slot) = prod.first_difference(&terms[m + n]).unzip();
                report.ok = false;
                report.first_violation = Some(Violation { kind: ViolationKind::Equality, m, n, orbit, slot });
                break 'outer;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeroneseReport {
    pub p: usize,
    /// `p` is below the declared constant `t`, so failure is possible.
    pub below_t: bool,
    /// `ℐ_{np}` for `np ≤ H`.
    pub terms: Vec<OrbitIdealData>,
    /// Every term equals `ℐ_p · ℐ_p^{σ^p} ⋯ ℐ_p^{σ^{(n-1)p}}`.
    pub naive: bool,
    pub first_failure: Option<usize>,
}

/// The Veronese subsequence `n ↦ ℐ_{np}` and whether it is naive with seed `ℐ_p`
/// for the twist step `p`.
pub fn veronese(seq: &IdealSequence, p: usize) -> Result<VeroneseReport> {
    if p == 0 {
        return Err(Error::Input("Veronese step must be positive".into()));
    }
    let h = seq.horizon();
    let all = seq.terms(h)?;
    let terms: Vec<OrbitIdealData> = (0..=h / p).map(|n| all[n * p].clone()).collect();
    let mut first_failure = None;
    if terms.len() > 1 {
        let seed = &terms[1];
        let mut acc = OrbitIdealData::unit(seq.vars());
        for (n, term) in terms.iter().enumerate() {
            if &acc != term {
                first_failure = Some(n);
                break;
            }
            acc = acc.multiply(&seed.twist((n * p) as i64))?;
        }
    }
    Ok(VeroneseReport { p, below_t: p < seq.declared_t(), terms, naive: first_failure.is_none(), first_failure })
}
