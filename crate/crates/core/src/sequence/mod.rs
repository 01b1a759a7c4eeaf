//! Orbit-indexed ideal data and generalized naive sequences.

mod data;
mod idealizer;
mod seq;
mod stable;
mod torsion;

pub use data::{OrbitId, OrbitIdealData};
pub use idealizer::{coherence_check, idealizer_check, CoherenceReport, IdealizerFailure, IdealizerReport};
pub use seq::{
    naive_power, validate_gen_naive, validate_with_t, veronese, IdealSequence, SequenceKind, ValidationReport,
    VeroneseReport, Violation, ViolationKind,
};
pub use stable::{decompose_stable, OrbitStable, StableDecomposition};
pub use torsion::{
    closure_orbit, left_torsion, right_torsion, side_verdict, torsion, torsion_term, torsion_verdict, ClosurePath,
    ClosureReport, ClosureWitness, Side, SideVerdict, TorsionResult, TorsionVerdict,
};
