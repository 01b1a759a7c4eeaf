//! Fixture files: a sequence definition plus an optional manifest of
//! expected results, in TOML.
//!
//! ```toml
//! name = "eg1"
//! vars = 2
//! horizon = 10
//!
//! [ideals]
//! M = "x^2, y^2"
//!
//! [sequence]
//! kind = "naive"
//! seed.slots = { 0 = "m", 1 = "M" }
//!
//! [[expect]]
//! id = "right-seed"
//! kind = "term"
//! sequence = "right"
//! n = 1
//! slots = { 0 = "m", 1 = "m^2" }
//! ```
//!
//! Slot values and ideal definitions are ideal expressions (see
//! [`crate::expr`]). A table sequence lists `[[sequence.terms]]` from `ℐ_0`
//! on, each with its own `slots` (or `orbits` for several orbits).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::IdealScope;
use crate::sequence::{IdealSequence, OrbitId, OrbitIdealData};

/// Slot index (as written in TOML) to ideal expression.
pub type SlotMap = BTreeMap<String, String>;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    name: Option<String>,
    title: Option<String>,
    vars: usize,
    horizon: Option<usize>,
    #[serde(default = "yes")]
    saturating: bool,
    #[serde(default)]
    ideals: BTreeMap<String, String>,
    sequence: SequenceSpec,
    #[serde(default)]
    expect: Vec<Expectation>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceSpec {
    kind: String,
    t: Option<usize>,
    seed: Option<DataSpec>,
    terms: Option<Vec<DataSpec>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    /// Position in a table; checked when present.
    pub n: Option<usize>,
    #[serde(default)]
    pub orbit: OrbitId,
    #[serde(default)]
    pub slots: SlotMap,
    #[serde(default)]
    pub orbits: Vec<OrbitSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    pub id: OrbitId,
    pub slots: SlotMap,
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// Stated in a worked example.
    WorkedExample,
    /// Recomputed by an independent method (staircase or brute force).
    Oracle,
    /// Immediate from the definitions.
    #[default]
    Direct,
}

/// A sequence a check refers to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    #[default]
    Input,
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    #[default]
    Equal,
    Differ,
    Subset,
    StrictSubset,
}

/// One entry of a manifest.
#[derive(Clone, Debug, Deserialize)]
pub struct Expectation {
    pub id: String,
    #[serde(default)]
    pub basis: Basis,
    pub note: Option<String>,
    /// The expected value is known to disagree with a stated claim; the
    /// outcome is listed among the report's discrepancies.
    #[serde(default)]
    pub discrepancy: bool,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Check {
    /// `lhs relation rhs` for ideal expressions; `holds = false` expects the
    /// relation to fail.
    Ideal {
        lhs: String,
        rhs: String,
        #[serde(default)]
        relation: Relation,
        #[serde(default = "yes")]
        holds: bool,
    },
    NotMember {
        ideal: String,
        monomial: String,
    },
    /// A data expression over `I<n>`, `H<n>`, `HL<n>`, either in full
    /// (`slots`) or at one slot (`slot` with `equals`).
    Data {
        expr: String,
        #[serde(default)]
        orbit: OrbitId,
        slots: Option<SlotMap>,
        slot: Option<i64>,
        equals: Option<String>,
    },
    /// Term `n` of a sequence.
    Term {
        #[serde(default)]
        sequence: Source,
        n: usize,
        #[serde(default)]
        orbit: OrbitId,
        slots: SlotMap,
    },
    /// Torsion terms against input terms for `from ≤ n ≤ to`.
    Compare {
        sequence: Source,
        from: usize,
        to: usize,
        relation: Relation,
    },
    /// `ℋ_n · ℐ_r^{σ^n} = ℐ_{n+r}` for `n ≥ 0`, `r ≥ r_from`, `n + r ≤ H`.
    Absorbs {
        #[serde(default = "one")]
        r_from: usize,
    },
    /// Stable form of a sequence; with `from`/`to` also checks the terms in
    /// that range against the pattern built from the expected lists.
    Decomposition {
        #[serde(default)]
        sequence: Source,
        #[serde(default)]
        orbit: OrbitId,
        a: Vec<String>,
        b: String,
        c: Vec<String>,
        from: Option<usize>,
        to: Option<usize>,
    },
    Verdict {
        right_closed: bool,
        left_closed: bool,
    },
    Closure {
        fixed_points: usize,
        same_limit: bool,
        right_first_limit: Option<SlotMap>,
        left_first_limit: Option<SlotMap>,
    },
    Idealizer {
        n0: usize,
    },
    GenNaive {
        #[serde(default)]
        sequence: Source,
        t: usize,
        holds: bool,
    },
    Veronese {
        #[serde(default)]
        sequence: Source,
        p: usize,
        naive: bool,
    },
}

fn one() -> usize {
    1
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::Ideal { .. } => "ideal",
            Check::NotMember { .. } => "not-member",
            Check::Data { .. } => "data",
            Check::Term { .. } => "term",
            Check::Compare { .. } => "compare",
            Check::Absorbs { .. } => "absorbs",
            Check::Decomposition { .. } => "decomposition",
            Check::Verdict { .. } => "verdict",
            Check::Closure { .. } => "closure",
            Check::Idealizer { .. } => "idealizer",
            Check::GenNaive { .. } => "gen-naive",
            Check::Veronese { .. } => "veronese",
        }
    }
}

/// A parsed fixture with its named ideals resolved.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub title: Option<String>,
    pub horizon: Option<usize>,
    pub saturating: bool,
    pub scope: IdealScope,
    pub sequence: IdealSequence,
    pub expectations: Vec<Expectation>,
}

impl Fixture {
    pub fn parse(text: &str, fallback_name: &str) -> Result<Self> {
        let file: FixtureFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let scope = IdealScope::new(file.vars, file.ideals)?;
        let t = file.sequence.t.unwrap_or(1);
        let sequence = match file.sequence.kind.as_str() {
            "naive" => {
                if file.sequence.terms.is_some() {
                    return Err(Error::Parse("a naive sequence takes `seed`, not `terms`".into()));
                }
                if t != 1 {
                    return Err(Error::Parse("a naive sequence has t = 1".into()));
                }
                let seed = file
                    .sequence
                    .seed
                    .as_ref()
                    .ok_or_else(|| Error::Parse("naive sequence needs `sequence.seed`".into()))?;
                let seed = build_data(&scope, seed).map_err(|e| context(e, "sequence.seed"))?;
                // The horizon is fixed later by the pipeline.
                IdealSequence::naive(seed, file.horizon.unwrap_or(1).max(1))?
            }
            "table" => {
                if file.sequence.seed.is_some() {
                    return Err(Error::Parse("a table sequence takes `terms`, not `seed`".into()));
                }
                let specs = file
                    .sequence
                    .terms
                    .as_ref()
                    .ok_or_else(|| Error::Parse("table sequence needs `[[sequence.terms]]`".into()))?;
                let mut entries = Vec::with_capacity(specs.len());
                for (i, spec) in specs.iter().enumerate() {
                    if spec.n.is_some_and(|n| n != i) {
                        return Err(Error::Parse(format!(
                            "sequence.terms[{i}] is labelled n = {} but terms must be listed from n = 0",
                            spec.n.unwrap_or_default()
                        )));
                    }
                    entries.push(build_data(&scope, spec).map_err(|e| context(e, &format!("sequence.terms[{i}]")))?);
                }
                IdealSequence::table(entries, t)?
            }
            other => return Err(Error::Parse(format!("unknown sequence kind `{other}`; use naive or table"))),
        };
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = file.expect.iter().find(|e| !seen.insert(e.id.clone())) {
            return Err(Error::Parse(format!("duplicate expectation id `{}`", dup.id)));
        }
        Ok(Fixture {
            name: file.name.unwrap_or_else(|| fallback_name.to_string()),
            title: file.title,
            horizon: file.horizon,
            saturating: file.saturating,
            scope,
            sequence,
            expectations: file.expect,
        })
    }

    pub fn vars(&self) -> usize {
        self.scope.vars()
    }

    pub fn slots(&self, orbit: OrbitId, slots: &SlotMap) -> Result<OrbitIdealData> {
        build_data(&self.scope, &DataSpec { orbit, slots: slots.clone(), ..DataSpec::default() })
    }
}

fn context(e: Error, at: &str) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{at}: {msg}")),
        other => other,
    }
}

pub fn build_data(scope: &IdealScope, spec: &DataSpec) -> Result<OrbitIdealData> {
    let mut triples = Vec::new();
    let mut push = |orbit: OrbitId, slots: &SlotMap| -> Result<()> {
        for (j, src) in slots {
            let slot: i64 =
                j.trim().parse().map_err(|_| Error::Parse(format!("slot index `{j}` is not an integer")))?;
            triples.push((orbit, slot, scope.eval(src)?));
        }
        Ok(())
    };
    push(spec.orbit, &spec.slots)?;
    for o in &spec.orbits {
        push(o.id, &o.slots)?;
    }
    OrbitIdealData::from_slots(scope.vars(), triples)
}

/// The fixtures shipped with the library.
pub const CATALOG: [(&str, &str); 4] = [
    ("eg1", include_str!("../fixtures/eg1.toml")),
    ("eg2", include_str!("../fixtures/eg2.toml")),
    ("eg3", include_str!("../fixtures/eg3.toml")),
    ("not-naive", include_str!("../fixtures/not-naive.toml")),
];

pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(n, _)| *n).collect()
}

pub fn builtin(name: &str) -> Result<Fixture> {
    let (_, text) = CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Input(format!("unknown fixture `{name}`; available: {}", catalog_names().join(", "))))?;
    Fixture::parse(text, name)
}
