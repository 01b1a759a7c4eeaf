//! End-to-end analysis of a fixture and comparison with its manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{eval_data, TermSource};
use crate::fixture::{builtin, Basis, Check, Expectation, Fixture, Relation, SlotMap, Source};
use crate::monomial::MonomialIdeal;
use crate::sequence::{
    closure_orbit, idealizer_check, left_torsion, right_torsion, side_verdict, validate_gen_naive, validate_with_t,
    veronese, ClosureReport, IdealSequence, IdealizerReport, OrbitId, OrbitIdealData, OrbitStable, Side,
    StableDecomposition, TorsionResult, TorsionVerdict, ValidationReport,
};

/// Iteration cap for the alternating closure.
pub const CLOSURE_MAX_ITER: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionSummary {
    pub side: Side,
    /// `ℋ_1` (or `ℋ^ℓ_1`).
    pub seed: OrbitIdealData,
    /// `ℋ_0 ..= ℋ_H`.
    pub terms: Vec<OrbitIdealData>,
    /// `𝒟` (right) or `𝒟^ℓ` (left).
    pub d: BTreeMap<OrbitId, Vec<MonomialIdeal>>,
    pub stable: StableDecomposition,
    pub checked_m: Vec<usize>,
    pub direct_window: usize,
    pub validation: ValidationReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: String,
    pub kind: String,
    pub basis: Basis,
    pub passed: bool,
    pub expected: String,
    pub found: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// A manifest entry flagged as disagreeing with a stated value, with
/// what the recomputation found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub id: String,
    pub note: Option<String>,
    /// Whether the stated claim holds after recomputation.
    pub stated_claim_holds: bool,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub fixture: String,
    pub title: Option<String>,
    pub vars: usize,
    pub horizon: usize,
    pub saturating: bool,
    pub seed: OrbitIdealData,
    /// Per-orbit shift that moves the first occupied slot of `ℐ_1` to 0.
    pub seed_offsets: BTreeMap<OrbitId, i64>,
    /// `ℐ_0 ..= ℐ_H`.
    pub terms: Vec<OrbitIdealData>,
    pub validation: ValidationReport,
    pub decomposition: StableDecomposition,
    pub right: TorsionSummary,
    pub left: TorsionSummary,
    pub verdict: TorsionVerdict,
    pub closure: ClosureReport,
    pub idealizer: IdealizerReport,
    pub checks: Vec<CheckOutcome>,
    pub discrepancies: Vec<Discrepancy>,
    pub ok: bool,
}

impl Report {
    /// 0 when every manifest check agrees, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Exit code for an error: 2 for invalid input, 1 for a failed property.
pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_input() {
        2
    } else {
        1
    }
}

/// Horizon used when none is requested: `max(12, 4M)`.
pub fn default_horizon(seq: &IdealSequence) -> Result<usize> {
    let seed = seq.seed()?;
    let w = usize::try_from(seed.max_width()).unwrap_or(0);
    Ok(12.max(4 * w.max(seq.declared_t())))
}

fn resolve_horizon(fixture: &Fixture, requested: Option<usize>) -> Result<IdealSequence> {
    let seq = &fixture.sequence;
    match (requested.or(fixture.horizon), seq.last_index()) {
        (Some(h), _) => seq.with_horizon(h),
        (None, Some(_)) => Ok(seq.clone()),
        (None, None) => seq.with_horizon(default_horizon(seq)?),
    }
}

fn summarize(res: &TorsionResult, h: usize) -> Result<TorsionSummary> {
    Ok(TorsionSummary {
        side: res.side,
        seed: res.sequence.seed()?,
        terms: res.sequence.terms(h)?,
        d: res.d.clone(),
        stable: res.stable.clone(),
        checked_m: res.checked_m.clone(),
        direct_window: res.direct_window,
        validation: res.validation.clone(),
    })
}

/// Runs a built-in fixture.
pub fn run_example(name: &str, horizon: Option<usize>) -> Result<Report> {
    analyze(&builtin(name)?, horizon)
}

pub fn analyze_file(path: &Path, horizon: Option<usize>) -> Result<Report> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("fixture");
    let fixture = Fixture::parse(&text, stem).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })?;
    analyze(&fixture, horizon)
}

/// Validate, decompose, extend on both sides, compare, close up, and check
/// the manifest.
pub fn analyze(fixture: &Fixture, horizon: Option<usize>) -> Result<Report> {
    let seq = resolve_horizon(fixture, horizon)?;
    let h = seq.horizon();
    let validation = validate_gen_naive(&seq)?;
    if !validation.ok {
        let v = validation.first_violation.as_ref().expect("failed report carries a witness");
        return Err(Error::NotGenNaive(format!(
            "{}: {:?} fails at (m, n) = ({}, {}), orbit {}, slot {}",
            fixture.name,
            v.kind,
            v.m,
            v.n,
            v.orbit.map_or("-".into(), |o| o.to_string()),
            v.slot.map_or("-".into(), |s| s.to_string()),
        )));
    }
    let right = right_torsion(&seq)?;
    let left = left_torsion(&seq)?;
    let verdict = TorsionVerdict { right: side_verdict(&seq, &right)?, left: side_verdict(&seq, &left)? };
    let closure = closure_orbit(&seq, CLOSURE_MAX_ITER)?;
    let idealizer = idealizer_check(&seq, &right.sequence)?;
    let seed = seq.seed()?;
    let (_, seed_offsets) = seed.normalized();

    let ctx = Ctx {
        fixture,
        seq: &seq,
        right: &right,
        left: &left,
        verdict: &verdict,
        closure: &closure,
        idealizer: &idealizer,
    };
    let mut checks = Vec::with_capacity(fixture.expectations.len());
    let mut discrepancies = Vec::new();
    for e in &fixture.expectations {
        let (passed, expected, found, claim) =
            ctx.run(e).map_err(|err| annotate(err, &format!("expectation `{}`", e.id)))?;
        if e.discrepancy {
            discrepancies.push(Discrepancy {
                id: e.id.clone(),
                note: e.note.clone(),
                stated_claim_holds: claim,
                found: found.clone(),
            });
        }
        checks.push(CheckOutcome {
            id: e.id.clone(),
            kind: e.check.kind().to_string(),
            basis: e.basis,
            passed,
            expected,
            found,
            note: e.note.clone(),
        });
    }
    let ok = checks.iter().all(|c| c.passed);
    Ok(Report {
        fixture: fixture.name.clone(),
        title: fixture.title.clone(),
        vars: fixture.vars(),
        horizon: h,
        saturating: fixture.saturating,
        seed,
        seed_offsets,
        terms: seq.terms(h)?,
        validation,
        decomposition: right.source.clone(),
        right: summarize(&right, h)?,
        left: summarize(&left, h)?,
        verdict,
        closure,
        idealizer,
        checks,
        discrepancies,
        ok,
    })
}

fn annotate(e: Error, at: &str) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{at}: {m}")),
        Error::Input(m) => Error::Input(format!("{at}: {m}")),
        other => other,
    }
}

struct Ctx<'a> {
    fixture: &'a Fixture,
    seq: &'a IdealSequence,
    right: &'a TorsionResult,
    left: &'a TorsionResult,
    verdict: &'a TorsionVerdict,
    closure: &'a ClosureReport,
    idealizer: &'a IdealizerReport,
}

/// `(passed, expected, found, claim_holds)`.
type Outcome = (bool, String, String, bool);

impl Ctx<'_> {
    fn sequence(&self, s: Source) -> &IdealSequence {
        match s {
            Source::Input => self.seq,
            Source::Right => &self.right.sequence,
            Source::Left => &self.left.sequence,
        }
    }

    fn stable(&self, s: Source) -> &StableDecomposition {
        match s {
            Source::Input => &self.right.source,
            Source::Right => &self.right.stable,
            Source::Left => &self.left.stable,
        }
    }

    fn ideal(&self, src: &str) -> Result<MonomialIdeal> {
        self.fixture.scope.eval(src)
    }

    fn run(&self, e: &Expectation) -> Result<Outcome> {
        let h = self.seq.horizon();
        Ok(match &e.check {
            Check::Ideal { lhs, rhs, relation, holds } => {
                let (l, r) = (self.ideal(lhs)?, self.ideal(rhs)?);
                let truth = match relation {
                    Relation::Equal => l == r,
                    Relation::Differ => l != r,
                    Relation::Subset => l.is_subset(&r)?,
                    Relation::StrictSubset => l.is_subset(&r)? && l != r,
                };
                let rel = relation_symbol(*relation);
                let expected = if *holds { format!("{lhs} {rel} {rhs}") } else { format!("not ({lhs} {rel} {rhs})") };
                (truth == *holds, expected, format!("{lhs} = {l}; {rhs} = {r}"), truth)
            }
            Check::NotMember { ideal, monomial } => {
                let i = self.ideal(ideal)?;
                let m = self.fixture.scope.monomial(monomial)?;
                let member = i.contains(&m)?;
                (!member, format!("{monomial} not in {ideal}"), format!("member: {member}"), !member)
            }
            Check::Data { expr, orbit, slots, slot, equals } => {
                let mut term = |source: TermSource, n: usize| -> Result<OrbitIdealData> {
                    let s = match source {
                        TermSource::Input => Source::Input,
                        TermSource::Right => Source::Right,
                        TermSource::Left => Source::Left,
                    };
                    self.sequence(s).term(n)
                };
                let value = eval_data(expr, &mut term)?;
                match (slots, slot, equals) {
                    (Some(slots), None, None) => {
                        let want = self.fixture.slots(*orbit, slots)?;
                        let ok = value == want;
                        (ok, want.to_string(), value.to_string(), ok)
                    }
                    (None, Some(j), Some(eq)) => {
                        let want = self.ideal(eq)?;
                        let got = value.slot(*orbit, *j);
                        let ok = got == want;
                        (ok, format!("slot {j} = {want}"), format!("slot {j} = {got}"), ok)
                    }
                    _ => {
                        return Err(Error::Input(
                            "a data check needs either `slots` or both `slot` and `equals`".into(),
                        ))
                    }
                }
            }
            Check::Term { sequence, n, orbit, slots } => {
                let want = self.fixture.slots(*orbit, slots)?;
                let got = self.sequence(*sequence).term(*n)?;
                let ok = got == want;
                (ok, want.to_string(), got.to_string(), ok)
            }
            Check::Compare { sequence, from, to, relation } => {
                let to = &clip(*to, h);
                let other = self.sequence(*sequence);
                let mut bad = Vec::new();
                for n in *from..=*to {
                    let equal = other.term(n)? == self.seq.term(n)?;
                    let want_equal = match relation {
                        Relation::Equal => true,
                        Relation::Differ => false,
                        _ => return Err(Error::Input("compare takes relation equal or differ".into())),
                    };
                    if equal != want_equal {
                        bad.push(n);
                    }
                }
                let name = source_name(*sequence);
                let expected = format!("{name}_n {} I_n for {from} <= n <= {to}", relation_symbol(*relation));
                let found = if bad.is_empty() { "holds throughout".into() } else { format!("fails at n in {bad:?}") };
                (bad.is_empty(), expected, found, bad.is_empty())
            }
            Check::Absorbs { r_from } => {
                let terms = self.seq.terms(h)?;
                let mut failure = None;
                'outer: for n in 0..=h {
                    let hn = self.right.sequence.term(n)?;
                    for r in *r_from..=h - n {
                        if hn.multiply(&terms[r].twist(n as i64))? != terms[n + r] {
                            failure = Some((n, r));
                            break 'outer;
                        }
                    }
                }
                let expected = format!("H_n * I_r@n = I_(n+r) for n >= 0, r >= {r_from}, n + r <= {h}");
                let found = match failure {
                    None => "holds throughout".into(),
                    Some((n, r)) => format!("fails at (n, r) = ({n}, {r})"),
                };
                (failure.is_none(), expected, found, failure.is_none())
            }
            Check::Decomposition { sequence, orbit, a, b, c, from, to } => {
                let want_a = a.iter().map(|s| self.ideal(s)).collect::<Result<Vec<_>>>()?;
                let want_b = self.ideal(b)?;
                let want_c = c.iter().map(|s| self.ideal(s)).collect::<Result<Vec<_>>>()?;
                let dec = self.stable(*sequence);
                let got = dec
                    .orbits
                    .get(orbit)
                    .ok_or_else(|| Error::Input(format!("orbit {orbit} is not in the stable form")))?;
                let mut ok = got.a == want_a && got.b == want_b && got.c == want_c;
                let mut found = format!("A = {}, B = {}, C = {}", list(&got.a), got.b, list(&got.c));
                if let (Some(from), Some(to)) = (from, to.map(|t| clip(t, h))) {
                    let to = &to;
                    let pattern = OrbitStable {
                        base: got.base,
                        width: want_a.len(),
                        a: want_a.clone(),
                        b: want_b.clone(),
                        c: want_c.clone(),
                    };
                    if *from < pattern.width || *to > h {
                        return Err(Error::Input(format!(
                            "term range {from}..={to} must lie in [{}, {h}]",
                            pattern.width
                        )));
                    }
                    for n in *from..=*to {
                        let term = self.sequence(*sequence).term(n)?.restrict(*orbit);
                        let mut built = OrbitIdealData::unit(term.vars());
                        for j in 0..n + pattern.width {
                            if let Some(id) = pattern.local(n, j) {
                                built.set_slot(*orbit, pattern.base + j as i64, id.clone())?;
                            }
                        }
                        if built != term {
                            ok = false;
                            let _ = write!(found, "; term n = {n} is {term}, not {built}");
                            break;
                        }
                    }
                }
                let mut expected = format!("A = {}, B = {}, C = {}", list(&want_a), want_b, list(&want_c));
                if let (Some(from), Some(to)) = (from, to.map(|t| clip(t, h))) {
                    let _ = write!(expected, ", matching terms {from}..={to}");
                }
                (ok, expected, found, ok)
            }
            Check::Verdict { right_closed, left_closed } => {
                let got = (self.verdict.right.closed, self.verdict.left.closed);
                let ok = got == (*right_closed, *left_closed);
                (
                    ok,
                    format!("right closed: {right_closed}, left closed: {left_closed}"),
                    format!("right closed: {}, left closed: {}", got.0, got.1),
                    ok,
                )
            }
            Check::Closure { fixed_points, same_limit, right_first_limit, left_first_limit } => {
                let cl = self.closure;
                let mut ok = cl.fixed_points == *fixed_points && cl.same_limit == *same_limit;
                let mut expected = format!("{fixed_points} fixed point(s), same limit: {same_limit}");
                let mut found = format!("{} fixed point(s), same limit: {}", cl.fixed_points, cl.same_limit);
                for (label, want, path) in [
                    ("right-first", right_first_limit, &cl.right_first),
                    ("left-first", left_first_limit, &cl.left_first),
                ] {
                    if let Some(slots) = want {
                        let want = self.fixture.slots(0, slots)?;
                        let _ = write!(expected, "; {label} limit {want}");
                        match &path.fixed_seed {
                            Some(got) => {
                                let _ = write!(found, "; {label} limit {got}");
                                ok &= *got == want;
                            }
                            None => {
                                let _ = write!(found, "; {label} did not converge");
                                ok = false;
                            }
                        }
                    }
                }
                (ok, expected, found, ok)
            }
            Check::Idealizer { n0 } => {
                let got = self.idealizer.n0;
                (got == *n0, format!("n0 = {n0}"), format!("n0 = {got}"), got == *n0)
            }
            Check::GenNaive { sequence, t, holds } => {
                let r = validate_with_t(self.sequence(*sequence), *t)?;
                let expected = format!("{}generalized naive with t = {t}", if *holds { "" } else { "not " });
                let found = match &r.first_violation {
                    None => "no violation".to_string(),
                    Some(v) => format!("{:?} fails at (m, n) = ({}, {})", v.kind, v.m, v.n),
                };
                (r.ok == *holds, expected, found, r.ok)
            }
            Check::Veronese { sequence, p, naive } => {
                let r = veronese(self.sequence(*sequence), *p)?;
                let found = match r.first_failure {
                    None => "naive with seed I_p".to_string(),
                    Some(n) => format!("differs from the naive product at n = {n}"),
                };
                (r.naive == *naive, format!("naive: {naive}"), found, r.naive)
            }
        })
    }
}

/// Manifest ranges are written for the fixture's own horizon; a smaller
/// requested window shortens them.
fn clip(to: usize, h: usize) -> usize {
    to.min(h)
}

fn relation_symbol(r: Relation) -> &'static str {
    match r {
        Relation::Equal => "=",
        Relation::Differ => "!=",
        Relation::Subset => "⊆",
        Relation::StrictSubset => "⊊",
    }
}

fn source_name(s: Source) -> &'static str {
    match s {
        Source::Input => "I",
        Source::Right => "H",
        Source::Left => "HL",
    }
}

fn list(ideals: &[MonomialIdeal]) -> String {
    let parts: Vec<String> = ideals.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn stable_line(dec: &StableDecomposition) -> String {
    let mut s = format!("M = {}", dec.threshold);
    for (a, o) in &dec.orbits {
        let _ = write!(
            s,
            "; orbit {a} (base {}, width {}): A = {}, B = {}, C = {}",
            o.base,
            o.width,
            list(&o.a),
            o.b,
            list(&o.c)
        );
    }
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Plain-text rendering of a report.
pub fn render_table(r: &Report) -> String {
    let mut out = String::new();
    let title = r.title.as_deref().map(|t| format!(" ({t})")).unwrap_or_default();
    let _ = writeln!(out, "fixture      {}{title}", r.fixture);
    let _ = writeln!(out, "window       0 <= n <= {}, {} variables", r.horizon, r.vars);
    let _ = writeln!(out, "seed         {}", r.seed);
    let _ = writeln!(
        out,
        "validation   generalized naive with t = {} (smallest working t: {})",
        r.validation.t_declared,
        r.validation.t_effective.map_or("none".into(), |t| t.to_string())
    );
    let _ = writeln!(out, "stable form  {}", stable_line(&r.decomposition));
    for s in [&r.right, &r.left] {
        let label = if s.side == Side::Right { "right" } else { "left " };
        let d: Vec<String> = s.d.iter().map(|(a, v)| format!("orbit {a}: {}", list(v))).collect();
        let _ = writeln!(out, "{label} H_1   {}   D = {}   (m checked: {:?})", s.seed, d.join("; "), s.checked_m);
    }
    let _ = writeln!(
        out,
        "verdict      right closed: {}, left closed: {}",
        yes_no(r.verdict.right.closed),
        yes_no(r.verdict.left.closed)
    );
    for p in [&r.closure.right_first, &r.closure.left_first] {
        let label = if p.start == Side::Right { "right-first" } else { "left-first " };
        let limit = p.fixed_seed.as_ref().map_or("did not converge".into(), |s| s.to_string());
        let _ = writeln!(out, "closure      {label}: {limit} after {} step(s)", p.applied.len());
    }
    let _ = writeln!(
        out,
        "             {} fixed point(s), same limit: {}",
        r.closure.fixed_points,
        yes_no(r.closure.same_limit)
    );
    let _ = writeln!(out, "idealizer    n0 = {} (H against its right torsion)", r.idealizer.n0);
    let passed = r.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "checks       {passed}/{} passed", r.checks.len());
    for c in &r.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "  [{mark}] {:<24} {}", c.id, c.expected);
        if !c.passed {
            let _ = writeln!(out, "         found: {}", c.found);
        }
    }
    if !r.discrepancies.is_empty() {
        let _ = writeln!(out, "discrepancies");
        for d in &r.discrepancies {
            let _ = writeln!(
                out,
                "  {}: stated claim {}; {}",
                d.id,
                if d.stated_claim_holds { "confirmed" } else { "does not hold" },
                d.found
            );
            if let Some(n) = &d.note {
                let _ = writeln!(out, "    {n}");
            }
        }
    }
    out
}

/// Convenience for callers that want the whole slot map of orbit 0.
pub fn slots_of(fixture: &Fixture, slots: &SlotMap) -> Result<OrbitIdealData> {
    fixture.slots(0, slots)
}
