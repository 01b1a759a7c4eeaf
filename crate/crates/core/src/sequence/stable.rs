use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::data::{OrbitId, OrbitIdealData};
use super::seq::IdealSequence;
use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;

/// Stable shape of one orbit: for `n ≥ M` the local ideals of `ℐ_n` are
/// `A_0 … A_{w-1}` at slots `base … base+w-1`, then `B` at every slot up to
/// `base+n-1`, then `C_0 … C_{w-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitStable {
    pub base: i64,
    pub width: usize,
    pub a: Vec<MonomialIdeal>,
    pub b: MonomialIdeal,
    pub c: Vec<MonomialIdeal>,
}

impl OrbitStable {
    /// Local ideal at offset `j` from the base in the `n`-th term (`n ≥ width`).
    pub fn local(&self, n: usize, j: usize) -> Option<&MonomialIdeal> {
        let w = self.width;
        if j < w {
            Some(&self.a[j])
        } else if j < n {
            Some(&self.b)
        } else if j < n + w {
            Some(&self.c[j - n])
        } else {
            None
        }
    }
}

/// Per-orbit stable decomposition of a generalized naive sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableDecomposition {
    pub vars: usize,
    pub t: usize,
    /// `M = max{w, t}`, with `w` the largest orbit width.
    pub threshold: usize,
    pub orbits: BTreeMap<OrbitId, OrbitStable>,
}

impl StableDecomposition {
    pub fn width(&self) -> usize {
        self.orbits.values().map(|o| o.width).max().unwrap_or(0)
    }

    /// `A·B^{σ^w}⋯B^{σ^{n-1}}·C^{σ^n}` on every orbit, for `n ≥ M`.
    pub fn recompose(&self, n: usize) -> Result<OrbitIdealData> {
        if n < self.threshold {
            return Err(Error::Input(format!("stable form only holds for n ≥ {}, asked for {n}", self.threshold)));
        }
        let mut out = OrbitIdealData::unit(self.vars);
        for (a, o) in &self.orbits {
            for j in 0..n + o.width {
                if let Some(ideal) = o.local(n, j) {
                    out.set_slot(*a, o.base + j as i64, ideal.clone())?;
                }
            }
        }
        Ok(out)
    }

    /// `A`-lists per orbit.
    pub fn a_lists(&self) -> BTreeMap<OrbitId, Vec<MonomialIdeal>> {
        self.orbits.iter().map(|(k, o)| (*k, o.a.clone())).collect()
    }

    /// `C`-lists per orbit.
    pub fn c_lists(&self) -> BTreeMap<OrbitId, Vec<MonomialIdeal>> {
        self.orbits.iter().map(|(k, o)| (*k, o.c.clone())).collect()
    }
}

/// Orbit geometry read off the first term: first occupied slot and width.
pub(crate) fn orbit_frames(seed: &OrbitIdealData) -> BTreeMap<OrbitId, (i64, usize)> {
    seed.orbit_ids()
        .filter_map(|a| {
            let (lo, hi) = seed.slot_range(a)?;
            Some((a, (lo, (hi - lo) as usize)))
        })
        .collect()
}

/// Reads `A`, `B`, `C` off the terms at `n = M` and `n = M + 1` using the
/// given frames, without verification.
pub(crate) fn extract(
    terms: &[OrbitIdealData],
    frames: &BTreeMap<OrbitId, (i64, usize)>,
    t: usize,
    threshold: usize,
) -> Result<StableDecomposition> {
    let vars = terms[0].vars();
    if terms.len() < threshold + 2 {
        return Err(Error::Input(format!("need terms up to n = {} to read off the stable form", threshold + 1)));
    }
    let at_m = &terms[threshold];
    let next = &terms[threshold + 1];
    let mut orbits = BTreeMap::new();
    for (&a, &(base, w)) in frames {
        let slot = |d: &OrbitIdealData, j: usize| d.slot(a, base + j as i64);
        orbits.insert(
            a,
            OrbitStable {
                base,
                width: w,
                a: (0..w).map(|j| slot(at_m, j)).collect(),
                b: slot(next, w),
                c: (0..w).map(|k| slot(at_m, threshold + k)).collect(),
            },
        );
    }
    Ok(StableDecomposition { vars, t, threshold, orbits })
}

/// Checks the recomposition against `terms[n]` for `from ≤ n < terms.len()`,
/// including that no slot outside the stable frame is occupied.
pub(crate) fn verify_recomposition(dec: &StableDecomposition, terms: &[OrbitIdealData], from: usize) -> Result<()> {
    for (n, term) in terms.iter().enumerate().skip(from) {
        let rec = dec.recompose(n)?;
        if let Some(stray) = term.orbit_ids().find(|a| !dec.orbits.contains_key(a)) {
            return Err(Error::NotStabilized(format!(
                "ℐ_{n} is cosupported on orbit {stray}, which the first term does not meet"
            )));
        }
        if let Some((a, j)) = rec.first_difference(term) {
            return Err(Error::NotStabilized(format!(
                "stable form disagrees with term n = {n} at orbit {a} slot {j}: expected {}, found {}",
                rec.slot(a, j),
                term.slot(a, j)
            )));
        }
    }
    Ok(())
}

/// Stable decomposition `ℐ_n = A·B^{σ^w}⋯B^{σ^{n-1}}·C^{σ^n}` for `n ≥ M`,
/// verified on `M ≤ n ≤ H`.
///
/// Each orbit is framed by the first term: its base is the first occupied
/// slot of `ℐ_1` and its width `w` the offset of the last one.
pub fn decompose_stable(seq: &IdealSequence) -> Result<StableDecomposition> {
    let h = seq.horizon();
    let t = seq.declared_t();
    let seed = seq.seed()?;
    let frames = orbit_frames(&seed);
    let w = frames.values().map(|f| f.1).max().unwrap_or(0);
    let threshold = w.max(t);
    if h < threshold + w + 2 {
        return Err(Error::Input(format!(
            "horizon {h} is below M + w + 2 = {} (M = {threshold}, w = {w})",
            threshold + w + 2
        )));
    }
    let terms = seq.terms(h)?;
    let dec = extract(&terms, &frames, t, threshold)?;
    verify_recomposition(&dec, &terms, threshold)?;
    Ok(dec)
}
