//! Deterministic sample generators for tests, acceptance suites, and
//! benchmarks. Everything here is a pure function of the seed.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brackets::FlatCoordinateData;
use crate::deformations::PotentialFamily;
use crate::polyring::matrix::invert_rational_matrix;
use crate::polyring::poly::{Polynomial, VarSet};
use crate::polyring::rational::{rat, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All exponent vectors over `nvars` variables with total degree in
/// `[min_degree, max_degree]`, lexicographic order.
pub fn exponent_vectors(nvars: usize, min_degree: u32, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        let d: u32 = cur.iter().sum();
        if d >= min_degree && d <= max_degree {
            out.push(cur.clone());
        }
        // odometer bounded by max_degree per slot
        let mut ax = nvars;
        loop {
            if ax == 0 {
                return out;
            }
            ax -= 1;
            if cur[ax] < max_degree {
                cur[ax] += 1;
                break;
            }
            cur[ax] = 0;
        }
    }
}

/// Random polynomial with integer coefficients in `[-bound, bound]` on every
/// monomial of total degree at most `max_degree`.
pub fn random_polynomial(
    rng: &mut ChaCha8Rng,
    vars: &VarSet,
    max_degree: u32,
    bound: i64,
) -> Polynomial {
    let terms = exponent_vectors(vars.len(), 0, max_degree)
        .into_iter()
        .map(|e| (e, rat(rng.gen_range(-bound..=bound))));
    Polynomial::from_terms(vars, terms)
}

/// Random homogeneous polynomial of exactly `degree`.
pub fn random_homogeneous(
    rng: &mut ChaCha8Rng,
    vars: &VarSet,
    degree: u32,
    bound: i64,
) -> Polynomial {
    let terms = exponent_vectors(vars.len(), degree, degree)
        .into_iter()
        .map(|e| (e, rat(rng.gen_range(-bound..=bound))));
    Polynomial::from_terms(vars, terms)
}

/// Random symmetric nondegenerate constant matrix with entries in
/// `[-bound, bound]`, by rejection.
pub fn random_flat_data(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> FlatCoordinateData {
    loop {
        let mut eta = vec![Rational::zero(); dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = rat(rng.gen_range(-bound..=bound));
                eta[i * dim + j] = v.clone();
                eta[j * dim + i] = v;
            }
        }
        if invert_rational_matrix(dim, &eta).is_some() {
            return FlatCoordinateData::new(dim, eta).expect("symmetric and invertible");
        }
    }
}

/// Random linear potential family `H^i = a^i_k u^k + a^i`.
pub fn random_linear_family(
    rng: &mut ChaCha8Rng,
    flat: &FlatCoordinateData,
    k1: Rational,
    bound: i64,
) -> PotentialFamily {
    let n = flat.dim();
    let vars = VarSet::coords(n);
    let components = (0..n)
        .map(|_| random_polynomial(rng, &vars, 1, bound))
        .collect();
    PotentialFamily::new(components, flat.clone(), k1).expect("components over u1..uN")
}

/// Random potential family of total degree at most `max_degree`.
pub fn random_family(
    rng: &mut ChaCha8Rng,
    flat: &FlatCoordinateData,
    k1: Rational,
    max_degree: u32,
    bound: i64,
) -> PotentialFamily {
    let n = flat.dim();
    let vars = VarSet::coords(n);
    let components = (0..n)
        .map(|_| random_polynomial(rng, &vars, max_degree, bound))
        .collect();
    PotentialFamily::new(components, flat.clone(), k1).expect("components over u1..uN")
}

/// Random homogeneous family of exactly `degree`.
pub fn random_homogeneous_family(
    rng: &mut ChaCha8Rng,
    flat: &FlatCoordinateData,
    k1: Rational,
    degree: u32,
    bound: i64,
) -> PotentialFamily {
    let n = flat.dim();
    let vars = VarSet::coords(n);
    let components = (0..n)
        .map(|_| random_homogeneous(rng, &vars, degree, bound))
        .collect();
    PotentialFamily::new(components, flat.clone(), k1).expect("components over u1..uN")
}
