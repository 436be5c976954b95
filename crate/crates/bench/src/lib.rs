//! Shared fixture builders for the benchmarks.

use qfrob_core::brackets::FlatCoordinateData;
use qfrob_core::deformations::PotentialFamily;
use qfrob_core::sample;
use qfrob_core::{rat, Polynomial, VarSet};

/// Dense-ish random polynomial over N coordinates.
pub fn bench_poly(nvars: usize, degree: u32, seed: u64) -> Polynomial {
    let vars = VarSet::coords(nvars);
    sample::random_polynomial(&mut sample::rng(seed), &vars, degree, 4)
}

/// Random degree-3 potential family over the identity flat metric.
pub fn bench_family(dim: usize, seed: u64) -> PotentialFamily {
    let flat = FlatCoordinateData::identity(dim);
    sample::random_family(&mut sample::rng(seed), &flat, rat(1), 3, 2)
}
