//! Fixed workloads for the benchmarks, built from the shipped fixtures so
//! timings track the inputs the CLI actually sees.

use nblow_core::fixture::builtin;
use nblow_core::geometry::{diagonal_fixture, orbit, Direction, ProjectivePoint};
use nblow_core::{IdealSequence, MonomialIdeal, Result};

/// The five ideals `J, Q, I, P, K` of the `eg3` fixture.
pub fn eg3_ideals() -> Result<[MonomialIdeal; 5]> {
    let f = builtin("eg3")?;
    let get = |n: &str| f.scope.get(n).cloned().expect("eg3 defines J, Q, I, P and K");
    Ok([get("J"), get("Q"), get("I"), get("P"), get("K")])
}

pub fn fixture_sequence(name: &str, horizon: usize) -> Result<IdealSequence> {
    builtin(name)?.sequence.with_horizon(horizon)
}

/// The first `n` points of the backward diagonal orbit used by `orbit separate --auto`.
pub fn diagonal_window(n: usize) -> Result<Vec<ProjectivePoint>> {
    let (x, sigma) = diagonal_fixture();
    Ok(orbit(&x, &sigma, n, Direction::Backward)?.points)
}
