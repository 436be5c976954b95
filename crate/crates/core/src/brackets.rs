//! Hydrodynamic-type bracket coefficients and their Poisson conditions.
//!
//! A bracket is represented purely by its coefficient data `(g, b, K)`:
//! a (possibly degenerate, possibly asymmetric) matrix g^{ij}(u), a
//! connection-shaped array b^{ij}_k(u), and the scalar K weighting the
//! nonlocal tail. Whether the data defines a Poisson bracket is a *check*
//! ([`check_poisson`], conditions s1–s5), never a construction invariant.
//!
//! Two brackets are compatible when every constant combination is again
//! Poisson; [`check_bracket_pencil`] verifies this as an identity in one
//! formal parameter `lam`, which suffices because the conditions are at most
//! quadratic in the coefficients.
//!
//! [`build_canonical`] produces the coefficient family generated by N
//! potentials H^i(u) in flat coordinates of a constant metric η:
//!
//! ```text
//! g^{ij} = η^{is} ∂H^j/∂u^s + η^{js} ∂H^i/∂u^s − K1 u^i u^j
//! b^{ij}_k = η^{is} ∂²H^j/∂u^s∂u^k − K1 δ^i_k u^j
//! ```
//!
//! and [`theorem1_form_check`] decides whether given coefficients are of
//! that shape, reconstructing the potentials when they are.

use thiserror::Error;

use crate::deformations::PotentialFamily;
use crate::geometry::curvature_obstruction_raw;
use crate::polyring::matrix::{invert_rational_matrix, PolyMatrix};
use crate::polyring::poly::{Polynomial, VarSet};
use crate::polyring::ratfunc::RationalFunction;
use crate::polyring::rational::{rat, Rational};
use crate::polyring::tensor::Tensor;
use crate::polyring::zerotest::{
    poly_is_zero, stream, tensor_zero_witness, IdentityTestConfig, Indeterminate,
};
use num_traits::Zero;

mod families {
    pub const S1: u32 = 0x21;
    pub const S2: u32 = 0x22;
    pub const S3: u32 = 0x23;
    pub const S4: u32 = 0x24;
    pub const S5: u32 = 0x25;
    pub const THEOREM1: u32 = 0x27;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("flat-coordinate data must be a symmetric matrix")]
    AsymmetricForm,
    #[error("flat-coordinate form is degenerate (det = 0)")]
    DegenerateForm,
    #[error("{which} input is not a Poisson bracket (condition {condition} fails)")]
    NotAPoissonBracket {
        which: PencilMember,
        condition: PoissonCondition,
    },
    #[error("coefficients are not of canonical potential form: {reason}")]
    NotCanonical { reason: String },
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error(transparent)]
    Indeterminate(#[from] Indeterminate),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PencilMember {
    First,
    Second,
}

impl std::fmt::Display for PencilMember {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PencilMember::First => write!(f, "first"),
            PencilMember::Second => write!(f, "second"),
        }
    }
}

/// Constant symmetric nondegenerate η^{ij} with its exact inverse η_{ij}.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatCoordinateData {
    dim: usize,
    eta: Vec<Rational>,
    eta_inv: Vec<Rational>,
}

impl FlatCoordinateData {
    pub fn new(dim: usize, eta: Vec<Rational>) -> Result<Self, BracketError> {
        if eta.len() != dim * dim {
            return Err(BracketError::DimensionMismatch);
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if eta[i * dim + j] != eta[j * dim + i] {
                    return Err(BracketError::AsymmetricForm);
                }
            }
        }
        let eta_inv = invert_rational_matrix(dim, &eta).ok_or(BracketError::DegenerateForm)?;
        Ok(FlatCoordinateData { dim, eta, eta_inv })
    }

    pub fn identity(dim: usize) -> Self {
        let mut eta = vec![Rational::zero(); dim * dim];
        for i in 0..dim {
            eta[i * dim + i] = rat(1);
        }
        FlatCoordinateData::new(dim, eta).expect("identity is symmetric and invertible")
    }

    pub fn antidiagonal_2d() -> Self {
        FlatCoordinateData::new(2, vec![rat(0), rat(1), rat(1), rat(0)]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// η^{ij}
    pub fn upper(&self, i: usize, j: usize) -> &Rational {
        &self.eta[i * self.dim + j]
    }

    /// η_{ij}
    pub fn lower(&self, i: usize, j: usize) -> &Rational {
        &self.eta_inv[i * self.dim + j]
    }

    pub fn upper_entries(&self) -> &[Rational] {
        &self.eta
    }

    pub fn to_matrix(&self, vars: &VarSet) -> PolyMatrix {
        PolyMatrix::from_rationals(self.dim, vars, &self.eta)
    }
}

/// Raw Mokhov–Ferapontov bracket coefficients `(g, b, K)`.
///
/// As with [`crate::geometry::Metric`], the first `dim` variables of the
/// entries are the coordinates; trailing variables are formal parameters.
#[derive(Clone, Debug)]
pub struct BracketCoefficients {
    dim: usize,
    g: PolyMatrix,
    b: Tensor<RationalFunction>,
    k: Rational,
}

impl BracketCoefficients {
    /// Only shape is enforced; validity is [`check_poisson`]'s business.
    pub fn new(g: PolyMatrix, b: Tensor<RationalFunction>, k: Rational) -> Self {
        let dim = g.dim();
        assert_eq!(b.dims(), &[dim, dim, dim], "connection shape mismatch");
        // bring everything over one variable set
        let vars = b.flat().iter().fold(g.get(0, 0).vars().clone(), |acc, e| {
            acc.union(e.num().vars())
        });
        let g = g.extend_to(&vars);
        let b = b.map(|e| e.extend_to(&vars));
        BracketCoefficients { dim, g, b, k }
    }

    /// The constant bracket `(η, 0, K)` in flat coordinates.
    pub fn constant(flat: &FlatCoordinateData, vars: &VarSet, k: Rational) -> Self {
        let g = flat.to_matrix(vars);
        let b = Tensor::from_fn(&[flat.dim(), flat.dim(), flat.dim()], |_| {
            RationalFunction::zero(vars)
        });
        BracketCoefficients::new(g, b, k)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn g(&self) -> &PolyMatrix {
        &self.g
    }

    pub fn b(&self) -> &Tensor<RationalFunction> {
        &self.b
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn vars(&self) -> &VarSet {
        self.g.get(0, 0).vars()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PoissonCondition {
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl std::fmt::Display for PoissonCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PoissonCondition::S1 => write!(f, "s1"),
            PoissonCondition::S2 => write!(f, "s2"),
            PoissonCondition::S3 => write!(f, "s3"),
            PoissonCondition::S4 => write!(f, "s4"),
            PoissonCondition::S5 => write!(f, "s5"),
        }
    }
}

/// First failing component of a condition: 1-based index tuple (matching the
/// coordinate names u1..uN) and the nonzero residual.
#[derive(Clone, Debug)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub residual: RationalFunction,
}

impl Witness {
    fn from_zero_based(indices: Vec<usize>, residual: &RationalFunction) -> Self {
        Witness {
            indices: indices.into_iter().map(|i| i + 1).collect(),
            residual: residual.clone(),
        }
    }
}

/// Verdicts for the five Poisson conditions, with one witness per failure.
#[derive(Clone, Debug)]
pub struct PoissonReport {
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
    pub s4: bool,
    pub s5: bool,
    pub witnesses: Vec<(PoissonCondition, Witness)>,
}

impl PoissonReport {
    pub fn is_poisson(&self) -> bool {
        self.s1 && self.s2 && self.s3 && self.s4 && self.s5
    }

    pub fn first_failure(&self) -> Option<PoissonCondition> {
        self.witnesses.first().map(|(c, _)| *c)
    }
}

/// Evaluate conditions s1–s5 on raw coefficients, with the curvature scalar
/// as a polynomial so the pencil combination `K1 + lam*K2` fits through.
fn check_poisson_raw(
    g: &PolyMatrix,
    b: &Tensor<RationalFunction>,
    k: &Polynomial,
    cfg: &IdentityTestConfig,
) -> Result<PoissonReport, Indeterminate> {
    let n = g.dim();
    let vars = g.get(0, 0).vars().clone();
    let k_rf = RationalFunction::from_poly(k.clone());

    // s1: g^{ij} = g^{ji}
    let s1_res = Tensor::from_fn(&[n, n], |idx| {
        RationalFunction::from_poly(g.get(idx[0], idx[1]) - g.get(idx[1], idx[0]))
    });

    // s2: ∂g^{ij}/∂u^k = b^{ij}_k + b^{ji}_k
    let s2_res = Tensor::from_fn(&[n, n, n], |idx| {
        let (i, j, k_idx) = (idx[0], idx[1], idx[2]);
        let dg = RationalFunction::from_poly(g.get(i, j).differentiate(k_idx));
        let sum = b.get(&[i, j, k_idx]) + b.get(&[j, i, k_idx]);
        &dg - &sum
    });

    // s3: g^{is} b^{jr}_s = g^{js} b^{ir}_s
    let s3_res = Tensor::from_fn(&[n, n, n], |idx| {
        let (i, j, r) = (idx[0], idx[1], idx[2]);
        let mut acc = RationalFunction::zero(&vars);
        for s in 0..n {
            acc = &acc + &(&RationalFunction::from_poly(g.get(i, s).clone()) * b.get(&[j, r, s]));
            acc = &acc - &(&RationalFunction::from_poly(g.get(j, s).clone()) * b.get(&[i, r, s]));
        }
        acc
    });

    // s4: the constant-curvature obstruction
    let s4_res = curvature_obstruction_raw(g, b, k);

    // s5: cyclic sum over (i,j,r); free indices [i,j,r,k,p]
    let db = Tensor::from_fn(&[n, n, n, n], |idx| {
        b.get(&[idx[0], idx[1], idx[2]]).differentiate(idx[3])
    });
    let s5_res = Tensor::from_fn(&[n, n, n, n, n], |idx| {
        let (i0, j0, r0, k_idx, p) = (idx[0], idx[1], idx[2], idx[3], idx[4]);
        let mut acc = RationalFunction::zero(&vars);
        for (i, j, r) in [(i0, j0, r0), (j0, r0, i0), (r0, i0, j0)] {
            for s in 0..n {
                let d1 = db.get(&[j, r, k_idx, s]) - db.get(&[j, r, s, k_idx]);
                acc = &acc + &(b.get(&[s, i, p]) * &d1);
                let d2 = db.get(&[j, r, p, s]) - db.get(&[j, r, s, p]);
                acc = &acc + &(b.get(&[s, i, k_idx]) * &d2);
            }
            if r == p {
                let skew = b.get(&[i, j, k_idx]) - b.get(&[j, i, k_idx]);
                acc = &acc + &(&k_rf * &skew);
            }
            if r == k_idx {
                let skew = b.get(&[i, j, p]) - b.get(&[j, i, p]);
                acc = &acc + &(&k_rf * &skew);
            }
        }
        acc
    });

    let mut witnesses = Vec::new();
    let s1 = collect(
        &s1_res,
        cfg,
        families::S1,
        PoissonCondition::S1,
        &mut witnesses,
    )?;
    let s2 = collect(
        &s2_res,
        cfg,
        families::S2,
        PoissonCondition::S2,
        &mut witnesses,
    )?;
    let s3 = collect(
        &s3_res,
        cfg,
        families::S3,
        PoissonCondition::S3,
        &mut witnesses,
    )?;
    let s4 = collect(
        &s4_res,
        cfg,
        families::S4,
        PoissonCondition::S4,
        &mut witnesses,
    )?;
    let s5 = collect(
        &s5_res,
        cfg,
        families::S5,
        PoissonCondition::S5,
        &mut witnesses,
    )?;
    Ok(PoissonReport {
        s1,
        s2,
        s3,
        s4,
        s5,
        witnesses,
    })
}

fn collect(
    res: &Tensor<RationalFunction>,
    cfg: &IdentityTestConfig,
    family: u32,
    cond: PoissonCondition,
    witnesses: &mut Vec<(PoissonCondition, Witness)>,
) -> Result<bool, Indeterminate> {
    match tensor_zero_witness(res, cfg, family)? {
        None => Ok(true),
        Some((idx, residual)) => {
            witnesses.push((cond, Witness::from_zero_based(idx, residual)));
            Ok(false)
        }
    }
}

/// Check conditions (s1)–(s5) exactly as written; degenerate g is legal input.
pub fn check_poisson(
    bc: &BracketCoefficients,
    cfg: &IdentityTestConfig,
) -> Result<PoissonReport, BracketError> {
    let k_poly = Polynomial::constant(bc.vars(), bc.k.clone());
    Ok(check_poisson_raw(&bc.g, &bc.b, &k_poly, cfg)?)
}

/// Compatibility of two Poisson brackets: the combination
/// `(g1 + lam*g2, b1 + lam*b2, K1 + lam*K2)` must satisfy (s1)–(s5)
/// identically in the formal parameter `lam`. Both inputs must individually
/// be Poisson brackets.
pub fn check_bracket_pencil(
    bc1: &BracketCoefficients,
    bc2: &BracketCoefficients,
    cfg: &IdentityTestConfig,
) -> Result<PoissonReport, BracketError> {
    if bc1.dim != bc2.dim {
        return Err(BracketError::DimensionMismatch);
    }
    for (which, bc) in [(PencilMember::First, bc1), (PencilMember::Second, bc2)] {
        let report = check_poisson(bc, cfg)?;
        if let Some(condition) = report.first_failure() {
            return Err(BracketError::NotAPoissonBracket { which, condition });
        }
    }

    let base = bc1.vars().union(bc2.vars());
    let ext = base.extended(&["lam"]);
    let lam = Polynomial::var_named(&ext, "lam");
    let lam_rf = RationalFunction::from_poly(lam.clone());

    let g = bc1
        .g
        .extend_to(&ext)
        .add(&bc2.g.extend_to(&ext).scale_poly(&lam));
    let dims = [bc1.dim, bc1.dim, bc1.dim];
    let b = Tensor::from_fn(&dims, |idx| {
        let e1 = bc1.b.get(idx).extend_to(&ext);
        let e2 = bc2.b.get(idx).extend_to(&ext);
        &e1 + &(&lam_rf * &e2)
    });
    let k_poly = &Polynomial::constant(&ext, bc1.k.clone()) + &lam.scale(&bc2.k);
    Ok(check_poisson_raw(&g, &b, &k_poly, cfg)?)
}

/// Coefficients `(λ'0, λ'1) ≠ (0,0)` with `λ'0 K0 + λ'1 K1 = 0`, so the
/// corresponding member of the pencil has no nonlocal tail. Convention:
/// `(K1, −K0)` when either constant is nonzero, `(1, 0)` when both vanish.
pub fn local_member(bc0: &BracketCoefficients, bc1: &BracketCoefficients) -> (Rational, Rational) {
    if bc0.k.is_zero() && bc1.k.is_zero() {
        (rat(1), rat(0))
    } else {
        (bc1.k.clone(), -bc0.k.clone())
    }
}

/// Bracket coefficients generated by a potential family (unconditionally;
/// whether the result is Poisson is decided by [`check_poisson`]).
pub fn build_canonical(h: &PotentialFamily) -> BracketCoefficients {
    let n = h.dim();
    let vars = h.vars().clone();
    let flat = h.flat();
    let k1 = h.k1();

    let grad: Vec<Vec<Polynomial>> = (0..n)
        .map(|j| (0..n).map(|s| h.component(j).differentiate(s)).collect())
        .collect();
    let hess: Vec<Vec<Vec<Polynomial>>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|s| (0..n).map(|k| grad[j][s].differentiate(k)).collect())
                .collect()
        })
        .collect();

    let g = PolyMatrix::from_fn(n, &vars, |i, j| {
        let mut acc = Polynomial::zero(&vars);
        for s in 0..n {
            acc = &acc + &grad[j][s].scale(flat.upper(i, s));
            acc = &acc + &grad[i][s].scale(flat.upper(j, s));
        }
        let uu = &Polynomial::var(&vars, i) * &Polynomial::var(&vars, j);
        &acc - &uu.scale(k1)
    });

    let b = Tensor::from_fn(&[n, n, n], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut acc = Polynomial::zero(&vars);
        for s in 0..n {
            acc = &acc + &hess[j][s][k].scale(flat.upper(i, s));
        }
        if i == k {
            acc = &acc - &Polynomial::var(&vars, j).scale(k1);
        }
        RationalFunction::from_poly(acc)
    });

    BracketCoefficients::new(g, b, k1.clone())
}

/// Decide whether `bc`, given in the flat coordinates of η, is of canonical
/// potential form, and reconstruct the potentials if so.
///
/// The affine part of each H^i is gauge (it never shows in b, and shifts g
/// by a constant symmetric matrix only), so reconstruction fixes it to zero
/// and the g-comparison accepts any constant symmetric discrepancy.
pub fn theorem1_form_check(
    bc: &BracketCoefficients,
    flat: &FlatCoordinateData,
    cfg: &IdentityTestConfig,
) -> Result<PotentialFamily, BracketError> {
    let n = bc.dim;
    if flat.dim() != n {
        return Err(BracketError::DimensionMismatch);
    }
    let vars = bc.vars().clone();
    let k1 = bc.k.clone();

    // connection entries must be polynomial for a polynomial potential
    let mut b_poly: Vec<Polynomial> = Vec::with_capacity(n * n * n);
    for (idx, e) in bc.b.iter() {
        match e.as_polynomial() {
            Some(p) => b_poly.push(p.clone()),
            None => {
                return Err(BracketError::NotCanonical {
                    reason: format!(
                        "connection entry b[{},{},{}] is not polynomial",
                        idx[0] + 1,
                        idx[1] + 1,
                        idx[2] + 1
                    ),
                })
            }
        }
    }
    let b_at = |i: usize, j: usize, k: usize| -> &Polynomial { &b_poly[(i * n + j) * n + k] };

    // Hessian candidate: C^j_{pk} = η_{pi} b^{ij}_k + K1 η_{pk} u^j
    let candidate = Tensor::from_fn(&[n, n, n], |idx| {
        let (j, p, k) = (idx[0], idx[1], idx[2]);
        let mut acc = Polynomial::zero(&vars);
        for i in 0..n {
            acc = &acc + &b_at(i, j, k).scale(flat.lower(p, i));
        }
        &acc + &Polynomial::var(&vars, j).scale(&(flat.lower(p, k) * &k1))
    });

    // Integrate twice by the homogeneous-degree rule: if ∂²H/∂u^p∂u^k = C_{pk}
    // then each degree-d part of H is the degree-d part of Σ C_{pk}u^p u^k
    // divided by d(d−1).
    let mut components = Vec::with_capacity(n);
    for j in 0..n {
        let mut q = Polynomial::zero(&vars);
        for p in 0..n {
            for k in 0..n {
                let uu = &Polynomial::var(&vars, p) * &Polynomial::var(&vars, k);
                q = &q + &(candidate.get(&[j, p, k]) * &uu);
            }
        }
        let h = Polynomial::from_terms(
            &vars,
            q.terms().map(|(e, c)| {
                let d: u32 = e.iter().sum();
                debug_assert!(d >= 2);
                (e.clone(), c / rat((d * (d - 1)) as i64))
            }),
        );
        components.push(h);
    }

    // verify the Hessians reproduce the candidate exactly
    for j in 0..n {
        for p in 0..n {
            for k in 0..n {
                let second = components[j].differentiate(p).differentiate(k);
                let diff = &second - candidate.get(&[j, p, k]);
                let flat_idx = (j * n + p) * n + k;
                if !poly_is_zero(&diff, cfg, stream(families::THEOREM1, flat_idx))? {
                    return Err(BracketError::NotCanonical {
                        reason: format!(
                            "no potential integrates the connection: obstruction at H[{}] second derivative ({},{})",
                            j + 1,
                            p + 1,
                            k + 1
                        ),
                    });
                }
            }
        }
    }

    // g must match the canonical formula up to a constant symmetric gauge
    let family = PotentialFamily::new(components, flat.clone(), k1)
        .expect("reconstructed components share the bracket's coordinates");
    let rebuilt = build_canonical(&family);
    let mut gauge: Vec<Polynomial> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            gauge.push(&bc.g.get(i, j).extend_to(&vars) - rebuilt.g.get(i, j));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !gauge[i * n + j].is_constant() {
                return Err(BracketError::NotCanonical {
                    reason: format!(
                        "g[{},{}] differs from the potential formula by a non-constant",
                        i + 1,
                        j + 1
                    ),
                });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if gauge[i * n + j] != gauge[j * n + i] {
                return Err(BracketError::NotCanonical {
                    reason: format!("constant gauge at g[{},{}] is not symmetric", i + 1, j + 1),
                });
            }
        }
    }
    Ok(family)
}
