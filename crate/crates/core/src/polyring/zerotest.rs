//! Symbolic and probabilistic identity testing.
//!
//! Symbolic mode inspects the canonical form: a polynomial is zero iff its
//! term map is empty, a rational function iff its numerator is. Probabilistic
//! mode evaluates at seeded random rational points (numerator and denominator
//! drawn uniformly from `[1, M]`) and is one-sided in the Schwartz–Zippel
//! sense: a zero function always tests zero; a nonzero function tests nonzero
//! except with probability at most (total degree)/M per trial.
//!
//! Determinism is per-component: every tested component derives its own RNG
//! stream from `(seed, component index)`, so results do not depend on
//! evaluation order or parallel scheduling.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use super::poly::Polynomial;
use super::ratfunc::RationalFunction;
use super::rational::Rational;
use super::tensor::Tensor;
use num_bigint::BigInt;

/// Attempts per trial at finding a sample point off the poles.
const MAX_RESAMPLES: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestMode {
    Symbolic,
    Probabilistic,
}

#[derive(Clone, Debug)]
pub struct IdentityTestConfig {
    pub mode: TestMode,
    pub trials: u32,
    pub seed: u64,
    /// Bound M for random rational numerators/denominators.
    pub sample_range: u64,
}

impl Default for IdentityTestConfig {
    fn default() -> Self {
        IdentityTestConfig {
            mode: TestMode::Symbolic,
            trials: 8,
            seed: 0,
            sample_range: 1_000_000,
        }
    }
}

impl IdentityTestConfig {
    pub fn symbolic() -> Self {
        IdentityTestConfig::default()
    }

    pub fn probabilistic(seed: u64) -> Self {
        IdentityTestConfig {
            mode: TestMode::Probabilistic,
            seed,
            ..IdentityTestConfig::default()
        }
    }
}

/// Probabilistic testing failed to sample a point where all denominators
/// are nonzero.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("could not sample a point off the denominator zero set (component {component})")]
pub struct Indeterminate {
    pub component: u64,
}

fn component_rng(seed: u64, component: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(component);
    rng
}

fn sample_point(rng: &mut ChaCha8Rng, nvars: usize, m: u64) -> Vec<Rational> {
    (0..nvars)
        .map(|_| {
            let num = rng.gen_range(1..=m);
            let den = rng.gen_range(1..=m);
            Rational::new(BigInt::from(num), BigInt::from(den))
        })
        .collect()
}

/// Is the polynomial identically zero under the given test mode.
pub fn poly_is_zero(
    p: &Polynomial,
    cfg: &IdentityTestConfig,
    component: u64,
) -> Result<bool, Indeterminate> {
    match cfg.mode {
        TestMode::Symbolic => Ok(p.is_zero()),
        TestMode::Probabilistic => {
            let mut rng = component_rng(cfg.seed, component);
            for _ in 0..cfg.trials {
                let pt = sample_point(&mut rng, p.vars().len(), cfg.sample_range);
                if !p.eval(&pt).is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Is the rational function identically zero under the given test mode.
pub fn rf_is_zero(
    f: &RationalFunction,
    cfg: &IdentityTestConfig,
    component: u64,
) -> Result<bool, Indeterminate> {
    match cfg.mode {
        TestMode::Symbolic => Ok(f.is_zero()),
        TestMode::Probabilistic => {
            let mut rng = component_rng(cfg.seed, component);
            let nvars = f.num().vars().len();
            'trials: for _ in 0..cfg.trials {
                for _ in 0..MAX_RESAMPLES {
                    let pt = sample_point(&mut rng, nvars, cfg.sample_range);
                    match f.eval(&pt) {
                        Some(v) if v.is_zero() => continue 'trials,
                        Some(_) => return Ok(false),
                        None => continue, // pole, resample
                    }
                }
                return Err(Indeterminate { component });
            }
            Ok(true)
        }
    }
}

/// Equality of rational functions: cross-multiplication in symbolic mode,
/// pointwise comparison (off both pole sets) in probabilistic mode.
pub fn rf_equal(
    a: &RationalFunction,
    b: &RationalFunction,
    cfg: &IdentityTestConfig,
    component: u64,
) -> Result<bool, Indeterminate> {
    match cfg.mode {
        TestMode::Symbolic => Ok(a.eq_symbolic(b)),
        TestMode::Probabilistic => {
            let vars = a.num().vars().union(b.num().vars());
            let (a, b) = (a.extend_to(&vars), b.extend_to(&vars));
            let mut rng = component_rng(cfg.seed, component);
            'trials: for _ in 0..cfg.trials {
                for _ in 0..MAX_RESAMPLES {
                    let pt = sample_point(&mut rng, vars.len(), cfg.sample_range);
                    match (a.eval(&pt), b.eval(&pt)) {
                        (Some(x), Some(y)) => {
                            if x != y {
                                return Ok(false);
                            }
                            continue 'trials;
                        }
                        _ => continue,
                    }
                }
                return Err(Indeterminate { component });
            }
            Ok(true)
        }
    }
}

/// One value testable for being identically zero.
pub trait ZeroTestable: Sync {
    fn test_zero(&self, cfg: &IdentityTestConfig, component: u64) -> Result<bool, Indeterminate>;
}

impl ZeroTestable for Polynomial {
    fn test_zero(&self, cfg: &IdentityTestConfig, component: u64) -> Result<bool, Indeterminate> {
        poly_is_zero(self, cfg, component)
    }
}

impl ZeroTestable for RationalFunction {
    fn test_zero(&self, cfg: &IdentityTestConfig, component: u64) -> Result<bool, Indeterminate> {
        rf_is_zero(self, cfg, component)
    }
}

/// Derive the seed stream for component `flat` of check family `family`.
pub fn stream(family: u32, flat: usize) -> u64 {
    ((family as u64) << 40) ^ flat as u64
}

/// Zero-test every component of a tensor; components run in parallel with
/// per-component derived streams, and the reported witness is always the
/// lexicographically first nonzero component. A definite nonzero verdict
/// takes precedence over an indeterminate one.
pub fn tensor_zero_witness<'t, T: ZeroTestable>(
    t: &'t Tensor<T>,
    cfg: &IdentityTestConfig,
    family: u32,
) -> Result<Option<(Vec<usize>, &'t T)>, Indeterminate> {
    let results: Vec<Result<bool, Indeterminate>> = t
        .flat()
        .par_iter()
        .enumerate()
        .map(|(flat, v)| v.test_zero(cfg, stream(family, flat)))
        .collect();
    let mut indeterminate: Option<Indeterminate> = None;
    for (flat, r) in results.into_iter().enumerate() {
        match r {
            Ok(true) => {}
            Ok(false) => return Ok(Some((t.multi_index(flat), &t.flat()[flat]))),
            Err(e) => {
                if indeterminate.is_none() {
                    indeterminate = Some(e);
                }
            }
        }
    }
    match indeterminate {
        Some(e) => Err(e),
        None => Ok(None),
    }
}
