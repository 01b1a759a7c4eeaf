//! Idealizer containment between two sequences and the coherence test for
//! chains squeezed between `ℋ_i ℐ^{σ^i}` and `ℐ_{i+1}`.

use serde::{Deserialize, Serialize};

use super::data::{OrbitId, OrbitIdealData};
use super::seq::IdealSequence;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealizerFailure {
    pub r: usize,
    pub s: usize,
    pub orbit: OrbitId,
    pub slot: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealizerReport {
    /// Smallest `n₀` with `𝒯_r·𝒮_s^{σ^r} ⊆ 𝒮_{r+s}` whenever `s ≥ n₀`, `r+s ≤ H`.
    pub n0: usize,
    pub horizon: usize,
    /// `n₀ ≤ H/2`, so the containment is seen on a nontrivial range of `r`.
    pub ok: bool,
    /// Every failing `(r, s)` on the window, with its first bad slot.
    pub failures: Vec<IdealizerFailure>,
}

/// Finds how far `𝒮` must be truncated before `𝒯` multiplies it into itself.
pub fn idealizer_check(s_seq: &IdealSequence, t_seq: &IdealSequence) -> Result<IdealizerReport> {
    if s_seq.vars() != t_seq.vars() {
        return Err(Error::VarMismatch(s_seq.vars(), t_seq.vars()));
    }
    let h = s_seq.horizon().min(t_seq.horizon());
    let s_terms = s_seq.terms(h)?;
    let t_terms = t_seq.terms(h)?;
    for (n, (s, t)) in s_terms.iter().zip(&t_terms).enumerate() {
        if let Some((a, j)) = s.first_non_contained(t)? {
            return Err(Error::Input(format!("𝒮_{n} is not contained in 𝒯_{n} at orbit {a} slot {j}")));
        }
    }
    let mut failures = Vec::new();
    for s in 0..=h {
        for r in 0..=h - s {
            let prod = t_terms[r].multiply(&s_terms[s].twist(r as i64))?;
            if let Some((orbit, slot)) = prod.first_non_contained(&s_terms[r + s])? {
                failures.push(IdealizerFailure { r, s, orbit, slot });
            }
        }
    }
    let n0 = failures.iter().map(|f| f.s + 1).max().unwrap_or(0);
    Ok(IdealizerReport { n0, horizon: h, ok: 2 * n0 <= h, failures })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub coherent_in_window: bool,
    /// From this index on, `ℋ_{i+1} = ℋ_i·ℐ^{σ^i}` throughout the window.
    pub first_stable_index: usize,
    /// Largest `i` with `ℋ_i·ℐ^{σ^i} ⊊ ℋ_{i+1}`.
    pub last_strict_index: Option<usize>,
    pub strict_indices: Vec<usize>,
}

/// Checks whether a chain `ℋ_0, …, ℋ_K` with `ℋ_i·ℐ^{σ^i} ⊆ ℋ_{i+1} ⊆ ℐ_{i+1}`
/// stops growing strictly within the window.
///
/// The verdict is positive when the last strict step happens in the first
/// half of the window.
pub fn coherence_check(chain: &[OrbitIdealData], seed: &OrbitIdealData) -> Result<CoherenceReport> {
    if chain.len() < 2 {
        return Err(Error::Input("coherence needs a chain of at least two terms".into()));
    }
    let naive = IdealSequence::naive(seed.clone(), chain.len() - 1)?;
    let ideals = naive.terms(chain.len() - 1)?;
    let mut strict_indices = Vec::new();
    for (i, h) in chain.iter().enumerate() {
        if h.vars() != seed.vars() {
            return Err(Error::VarMismatch(seed.vars(), h.vars()));
        }
        if let Some((a, j)) = h.first_non_contained(&ideals[i])? {
            return Err(Error::Input(format!("ℋ_{i} ⊄ ℐ_{i} at orbit {a} slot {j}")));
        }
        if i + 1 == chain.len() {
            break;
        }
        let pushed = h.multiply(&seed.twist(i as i64))?;
        if let Some((a, j)) = pushed.first_non_contained(&chain[i + 1])? {
            return Err(Error::Input(format!("ℋ_{i}·ℐ^σ^{i} ⊄ ℋ_{} at orbit {a} slot {j}", i + 1)));
        }
        if pushed != chain[i + 1] {
            strict_indices.push(i);
        }
    }
    let last_strict_index = strict_indices.last().copied();
    let first_stable_index = last_strict_index.map_or(0, |i| i + 1);
    let k = chain.len() - 1;
    Ok(CoherenceReport {
        coherent_in_window: 2 * first_stable_index <= k,
        first_stable_index,
        last_strict_index,
        strict_indices,
    })
}
