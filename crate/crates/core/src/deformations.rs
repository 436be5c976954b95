//! The integrable deformation system on potential families H^i(u), its
//! quadratic and cubic structure-constant reductions, extraction of a scalar
//! potential in the commutative case, and the associativity (WDVV) equations.
//!
//! The two deformation equations on H, in flat coordinates of η with
//! deformation constant K1, are
//!
//! ```text
//! (ass1)  ∂²H^i/∂u^k∂u^s η^{sp} ∂²H^j/∂u^p∂u^l  −  (i ↔ j) = 0
//! (ass2)  (η^{ir} ∂H^s/∂u^r + η^{sr} ∂H^i/∂u^r − K1 u^i u^s) η^{jp} ∂²H^k/∂u^p∂u^s − (i ↔ j) = 0
//! ```
//!
//! Residuals are returned as full tensors so callers can inspect the failing
//! component; zero-testing is a separate pass.
//!
//! For homogeneous quadratic H (K1 = 0) the system reduces to two constant
//! relations on a^{ij}_k = η^{is} c^j_{sk}, equivalent to the Novikov-algebra
//! identities; for homogeneous cubic H it reduces to two constant relations
//! on a^{ij}_{kl} = η^{is} c^j_{skl} with the literal factor-3 and K1 terms
//! (the correspondence is exact because ∂²H^j/∂u^s∂u^k = 6 c^j_{skm} u^m and
//! ∂H^s/∂u^r = 3 c^s_{rmn} u^m u^n, so both residuals are η-contractions of
//! the relations times symmetric monomials).

use thiserror::Error;

use crate::algebras;
use crate::brackets::FlatCoordinateData;
use crate::polyring::poly::{Polynomial, VarSet};
use crate::polyring::rational::{rat, ratio, Rational};
use crate::polyring::tensor::Tensor;
use crate::polyring::zerotest::{
    poly_is_zero, stream, tensor_zero_witness, IdentityTestConfig, Indeterminate,
};
use num_traits::Zero;

mod families {
    pub const ASS1: u32 = 0x31;
    pub const ASS2: u32 = 0x32;
    pub const AS1: u32 = 0x33;
    pub const AS2: u32 = 0x34;
    pub const NOVIKOV1: u32 = 0x35;
    pub const NOVIKOV2: u32 = 0x36;
    pub const CUBIC1: u32 = 0x37;
    pub const CUBIC2: u32 = 0x38;
    pub const COMMUTATIVITY: u32 = 0x39;
    pub const GRADIENT: u32 = 0x3a;
    pub const REDUCTION: u32 = 0x3b;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformError {
    #[error("potential component count must equal the flat-coordinate dimension")]
    DimensionMismatch,
    #[error("potential components must be polynomials in u1..uN")]
    BadComponentVariables,
    #[error("not a homogeneous quadratic family: {reason}")]
    NotQuadratic { reason: String },
    #[error("not a homogeneous cubic family: {reason}")]
    NotCubic { reason: String },
    #[error("algebra multiplication is not commutative (witness i={i}, j={j}, k={k})")]
    NotCommutative { i: usize, j: usize, k: usize },
    #[error("gradient closedness failed while integrating the potential")]
    NotIntegrable,
    #[error("structure-relation route disagrees with the algebra-identity route ({which})")]
    EquivalenceViolation { which: String },
    #[error(transparent)]
    Indeterminate(#[from] Indeterminate),
}

/// N potentials H^i(u) in flat coordinates of η, with deformation constant K1.
#[derive(Clone, Debug)]
pub struct PotentialFamily {
    dim: usize,
    components: Vec<Polynomial>,
    flat: FlatCoordinateData,
    k1: Rational,
}

impl PotentialFamily {
    pub fn new(
        components: Vec<Polynomial>,
        flat: FlatCoordinateData,
        k1: Rational,
    ) -> Result<Self, DeformError> {
        let dim = flat.dim();
        if components.len() != dim {
            return Err(DeformError::DimensionMismatch);
        }
        let vars = VarSet::coords(dim);
        let components = components
            .into_iter()
            .map(|c| {
                if c.vars().names().iter().all(|n| vars.index_of(n).is_some()) {
                    Ok(c.extend_to(&vars))
                } else {
                    Err(DeformError::BadComponentVariables)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PotentialFamily {
            dim,
            components,
            flat,
            k1,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> &VarSet {
        self.components[0].vars()
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn flat(&self) -> &FlatCoordinateData {
        &self.flat
    }

    pub fn k1(&self) -> &Rational {
        &self.k1
    }

    pub fn gradient(&self, i: usize) -> Vec<Polynomial> {
        (0..self.dim)
            .map(|s| self.components[i].differentiate(s))
            .collect()
    }

    fn hessians(&self) -> Vec<Vec<Vec<Polynomial>>> {
        (0..self.dim)
            .map(|j| {
                (0..self.dim)
                    .map(|s| {
                        (0..self.dim)
                            .map(|k| self.components[j].differentiate(s).differentiate(k))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Scalar potential Φ(u) for the commutative reduction, with the constant
/// skew matrix c_{pl} relating gradients of H to the gradient of Φ.
#[derive(Clone, Debug)]
pub struct ScalarPotential {
    dim: usize,
    phi: Polynomial,
    skew: Vec<Rational>,
    flat: FlatCoordinateData,
    k1: Rational,
}

impl ScalarPotential {
    pub fn new(
        phi: Polynomial,
        skew: Vec<Rational>,
        flat: FlatCoordinateData,
        k1: Rational,
    ) -> Result<Self, DeformError> {
        let dim = flat.dim();
        if skew.len() != dim * dim {
            return Err(DeformError::DimensionMismatch);
        }
        let vars = VarSet::coords(dim);
        if !phi
            .vars()
            .names()
            .iter()
            .all(|n| vars.index_of(n).is_some())
        {
            return Err(DeformError::BadComponentVariables);
        }
        Ok(ScalarPotential {
            dim,
            phi: phi.extend_to(&vars),
            skew,
            flat,
            k1,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phi(&self) -> &Polynomial {
        &self.phi
    }

    pub fn skew(&self, p: usize, l: usize) -> &Rational {
        &self.skew[p * self.dim + l]
    }

    pub fn flat(&self) -> &FlatCoordinateData {
        &self.flat
    }

    pub fn k1(&self) -> &Rational {
        &self.k1
    }

    /// The potential family induced by Φ:
    /// `H^i = η^{is} (∂Φ/∂u^s − ½(c_{sk} − c_{ks}) u^k)`.
    pub fn induced_family(&self) -> PotentialFamily {
        let n = self.dim;
        let vars = self.phi.vars().clone();
        let half = ratio(1, 2);
        let mut components = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Polynomial::zero(&vars);
            for s in 0..n {
                let mut inner = self.phi.differentiate(s);
                for k in 0..n {
                    let skew_part = &half * &(self.skew(s, k) - self.skew(k, s));
                    inner = &inner - &Polynomial::var(&vars, k).scale(&skew_part);
                }
                acc = &acc + &inner.scale(self.flat.upper(i, s));
            }
            components.push(acc);
        }
        PotentialFamily::new(components, self.flat.clone(), self.k1.clone())
            .expect("induced components live in the same coordinates")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualKind {
    Ass1,
    Ass2,
    As1,
    As2,
}

impl ResidualKind {
    fn family(self) -> u32 {
        match self {
            ResidualKind::Ass1 => families::ASS1,
            ResidualKind::Ass2 => families::ASS2,
            ResidualKind::As1 => families::AS1,
            ResidualKind::As2 => families::AS2,
        }
    }
}

impl std::fmt::Display for ResidualKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResidualKind::Ass1 => write!(f, "ass1"),
            ResidualKind::Ass2 => write!(f, "ass2"),
            ResidualKind::As1 => write!(f, "as1"),
            ResidualKind::As2 => write!(f, "as2"),
        }
    }
}

/// Exact componentwise residual of one of the deformation / associativity
/// equation systems.
#[derive(Clone, Debug)]
pub struct ResidualTensor {
    kind: ResidualKind,
    components: Tensor<Polynomial>,
    max_degree: u32,
}

impl ResidualTensor {
    fn new(kind: ResidualKind, components: Tensor<Polynomial>) -> Self {
        let max_degree = components
            .flat()
            .iter()
            .filter_map(|p| p.total_degree())
            .max()
            .unwrap_or(0);
        ResidualTensor {
            kind,
            components,
            max_degree,
        }
    }

    pub fn kind(&self) -> ResidualKind {
        self.kind
    }

    pub fn tensor(&self) -> &Tensor<Polynomial> {
        &self.components
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn is_zero_all(&self, cfg: &IdentityTestConfig) -> Result<bool, Indeterminate> {
        Ok(self.witness(cfg)?.is_none())
    }

    /// Lexicographically first nonzero component: 1-based indices + residual.
    pub fn witness(
        &self,
        cfg: &IdentityTestConfig,
    ) -> Result<Option<(Vec<usize>, Polynomial)>, Indeterminate> {
        match tensor_zero_witness(&self.components, cfg, self.kind.family())? {
            None => Ok(None),
            Some((idx, p)) => Ok(Some((idx.into_iter().map(|i| i + 1).collect(), p.clone()))),
        }
    }
}

/// Residual of (ass1); indices `[i, j, k, l]`.
pub fn residual_ass1(h: &PotentialFamily) -> ResidualTensor {
    let n = h.dim();
    let eta = h.flat();
    let hess = h.hessians();
    // raised Hessian: R[j][s][l] = η^{sp} ∂²H^j/∂u^p∂u^l
    let raised: Vec<Vec<Vec<Polynomial>>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|s| {
                    (0..n)
                        .map(|l| {
                            let mut acc = Polynomial::zero(h.vars());
                            for p in 0..n {
                                acc = &acc + &hess[j][p][l].scale(eta.upper(s, p));
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let components = Tensor::from_fn(&[n, n, n, n], |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = Polynomial::zero(h.vars());
        for s in 0..n {
            acc = &acc + &(&hess[i][k][s] * &raised[j][s][l]);
            acc = &acc - &(&hess[j][k][s] * &raised[i][s][l]);
        }
        acc
    });
    ResidualTensor::new(ResidualKind::Ass1, components)
}

/// The bracketed metric factor of (ass2):
/// `G^{is} = η^{ir} ∂H^s/∂u^r + η^{sr} ∂H^i/∂u^r − K1 u^i u^s`.
pub(crate) fn deformed_metric(h: &PotentialFamily) -> Tensor<Polynomial> {
    let n = h.dim();
    let eta = h.flat();
    let vars = h.vars().clone();
    let grad: Vec<Vec<Polynomial>> = (0..n).map(|i| h.gradient(i)).collect();
    Tensor::from_fn(&[n, n], |idx| {
        let (i, s) = (idx[0], idx[1]);
        let mut acc = Polynomial::zero(&vars);
        for r in 0..n {
            acc = &acc + &grad[s][r].scale(eta.upper(i, r));
            acc = &acc + &grad[i][r].scale(eta.upper(s, r));
        }
        let uu = &Polynomial::var(&vars, i) * &Polynomial::var(&vars, s);
        &acc - &uu.scale(h.k1())
    })
}

/// Residual of (ass2) including the K1 terms; indices `[i, j, k]`.
pub fn residual_ass2(h: &PotentialFamily) -> ResidualTensor {
    let n = h.dim();
    let eta = h.flat();
    let hess = h.hessians();
    let g = deformed_metric(h);
    // W[j][k][s] = η^{jp} ∂²H^k/∂u^p∂u^s
    let w: Vec<Vec<Vec<Polynomial>>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    (0..n)
                        .map(|s| {
                            let mut acc = Polynomial::zero(h.vars());
                            for p in 0..n {
                                acc = &acc + &hess[k][p][s].scale(eta.upper(j, p));
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let components = Tensor::from_fn(&[n, n, n], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut acc = Polynomial::zero(h.vars());
        for s in 0..n {
            acc = &acc + &(g.get(&[i, s]) * &w[j][k][s]);
            acc = &acc - &(g.get(&[j, s]) * &w[i][k][s]);
        }
        acc
    });
    ResidualTensor::new(ResidualKind::Ass2, components)
}

/// Rank-3 constant structure array `a[i][j][k] = a^{ij}_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants3 {
    dim: usize,
    a: Tensor<Rational>,
}

impl StructureConstants3 {
    pub fn new(dim: usize, a: Tensor<Rational>) -> Self {
        assert_eq!(a.dims(), &[dim, dim, dim]);
        StructureConstants3 { dim, a }
    }

    pub fn from_entries(dim: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), dim * dim * dim);
        let t = Tensor::from_fn(&[dim, dim, dim], |idx| {
            entries[(idx[0] * dim + idx[1]) * dim + idx[2]].clone()
        });
        StructureConstants3 { dim, a: t }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        self.a.get(&[i, j, k])
    }

    /// The algebra `e^i · e^j = a^{ij}_k e^k` with constant entries.
    pub fn to_algebra(&self) -> algebras::FiniteAlgebra {
        let vars = VarSet::coords(self.dim);
        let mult = self.a.map(|c| Polynomial::constant(&vars, c.clone()));
        algebras::FiniteAlgebra::new(self.dim, mult)
    }
}

/// Rank-4 constant structure array `a[i][j][k][l] = a^{ij}_{kl}`, symmetric
/// in the last two indices.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants4 {
    dim: usize,
    a: Tensor<Rational>,
}

impl StructureConstants4 {
    pub fn new(dim: usize, a: Tensor<Rational>) -> Self {
        assert_eq!(a.dims(), &[dim, dim, dim, dim]);
        StructureConstants4 { dim, a }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        self.a.get(&[i, j, k, l])
    }
}

/// Structure constants `a^{ij}_k = η^{is} c^j_{sk}` of a homogeneous
/// quadratic family `H^i = c^i_{jk} u^j u^k` with K1 = 0.
pub fn quadratic_to_structure(h: &PotentialFamily) -> Result<StructureConstants3, DeformError> {
    if !h.k1().is_zero() {
        return Err(DeformError::NotQuadratic {
            reason: "K1 must be zero".to_string(),
        });
    }
    let n = h.dim();
    for (i, c) in h.components().iter().enumerate() {
        if c.terms().any(|(e, _)| e.iter().sum::<u32>() != 2) {
            return Err(DeformError::NotQuadratic {
                reason: format!("H[{}] has a non-quadratic term", i + 1),
            });
        }
    }
    // symmetric coefficients: c^i_{jk} with H^i = Σ c^i_{jk} u^j u^k
    let c = Tensor::from_fn(&[n, n, n], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut exps = vec![0u32; n];
        exps[j] += 1;
        exps[k] += 1;
        let orderings = if j == k { rat(1) } else { rat(2) };
        h.component(i).coeff(&exps) / orderings
    });
    let eta = h.flat();
    let a = Tensor::from_fn(&[n, n, n], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut acc = Rational::zero();
        for s in 0..n {
            acc += eta.upper(i, s) * c.get(&[j, s, k]);
        }
        acc
    });
    Ok(StructureConstants3::new(n, a))
}

/// Verdicts for the two quadratic structure-constant relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NovikovReport {
    /// `a^{ij}_s a^{sk}_l = a^{ik}_s a^{sj}_l` — right-commutativity.
    pub right_commutativity: bool,
    /// `(a^{is}_l + a^{si}_l) a^{jk}_s = (a^{js}_l + a^{sj}_l) a^{ik}_s` —
    /// the left-symmetry relation.
    pub left_symmetry: bool,
}

impl NovikovReport {
    pub fn is_novikov(&self) -> bool {
        self.right_commutativity && self.left_symmetry
    }
}

/// Evaluate both structure-constant relations exactly, and cross-check them
/// against the corresponding algebra identities on `e^i · e^j = a^{ij}_k e^k`:
/// the first relation is the identity `(ab)c = (ac)b` verbatim, and given the
/// first, the second is equivalent to left-symmetry. A disagreement between
/// the two routes is an internal error, not a verdict.
pub fn novikov_relations_check(
    a: &StructureConstants3,
    cfg: &IdentityTestConfig,
) -> Result<NovikovReport, DeformError> {
    let n = a.dim();
    let cvars = VarSet::empty();
    let rel1 = Tensor::from_fn(&[n, n, n, n], |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = Rational::zero();
        for s in 0..n {
            acc += a.get(i, j, s) * a.get(s, k, l);
            acc -= a.get(i, k, s) * a.get(s, j, l);
        }
        Polynomial::constant(&cvars, acc)
    });
    let rel2 = Tensor::from_fn(&[n, n, n, n], |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = Rational::zero();
        for s in 0..n {
            acc += &(a.get(i, s, l) + a.get(s, i, l)) * a.get(j, k, s);
            acc -= &(a.get(j, s, l) + a.get(s, j, l)) * a.get(i, k, s);
        }
        Polynomial::constant(&cvars, acc)
    });
    let right_commutativity = tensor_zero_witness(&rel1, cfg, families::NOVIKOV1)?.is_none();
    let left_symmetry = tensor_zero_witness(&rel2, cfg, families::NOVIKOV2)?.is_none();

    // independent route through the algebra identities
    let alg = a.to_algebra();
    let q1 = algebras::check_right_commutativity(&alg, cfg)?;
    if q1 != right_commutativity {
        return Err(DeformError::EquivalenceViolation {
            which: "first relation vs (ab)c = (ac)b".to_string(),
        });
    }
    if right_commutativity {
        let levo = algebras::check_left_symmetry(&alg, cfg)?;
        if levo != left_symmetry {
            return Err(DeformError::EquivalenceViolation {
                which: "second relation vs left-symmetry".to_string(),
            });
        }
    }
    Ok(NovikovReport {
        right_commutativity,
        left_symmetry,
    })
}

/// Structure constants `a^{ij}_{kl} = η^{is} c^j_{skl}` of a homogeneous
/// cubic family `H^i = c^i_{jkl} u^j u^k u^l`.
pub fn cubic_to_structure(h: &PotentialFamily) -> Result<StructureConstants4, DeformError> {
    let n = h.dim();
    for (i, comp) in h.components().iter().enumerate() {
        if comp.terms().any(|(e, _)| e.iter().sum::<u32>() != 3) {
            return Err(DeformError::NotCubic {
                reason: format!("H[{}] has a non-cubic term", i + 1),
            });
        }
    }
    // fully symmetric c^i_{jkl}: monomial coefficient divided by the number
    // of distinct orderings of the index multiset {j,k,l}
    let c = Tensor::from_fn(&[n, n, n, n], |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut exps = vec![0u32; n];
        exps[j] += 1;
        exps[k] += 1;
        exps[l] += 1;
        let orderings = if j == k && k == l {
            rat(1)
        } else if j == k || k == l || j == l {
            rat(3)
        } else {
            rat(6)
        };
        h.component(i).coeff(&exps) / orderings
    });
    let eta = h.flat();
    let a = Tensor::from_fn(&[n, n, n, n], |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = Rational::zero();
        for s in 0..n {
            acc += eta.upper(i, s) * c.get(&[j, s, k, l]);
        }
        acc
    });
    Ok(StructureConstants4::new(n, a))
}

/// Verdicts for the two cubic structure-constant relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubicReport {
    pub relation1: bool,
    pub relation2: bool,
}

impl CubicReport {
    pub fn holds(&self) -> bool {
        self.relation1 && self.relation2
    }
}

/// Evaluate the two cubic relations exactly: the first is
/// `a^{ki}_{ms} a^{sj}_{nl} − a^{kj}_{ns} a^{si}_{ml} + a^{ki}_{ns} a^{sj}_{ml} − a^{kj}_{ms} a^{si}_{nl} = 0`,
/// the second sums `(3a^{is}_{mn} + 3a^{si}_{mn} − K1 δ^i_m δ^s_n) a^{jk}_{ls} − (i ↔ j)`
/// over all six permutations of `(l, m, n)`.
pub fn cubic_relations_check(
    a: &StructureConstants4,
    k1: &Rational,
    cfg: &IdentityTestConfig,
) -> Result<CubicReport, DeformError> {
    let n = a.dim();
    let cvars = VarSet::empty();
    let rel1 = Tensor::from_fn(&[n, n, n, n, n, n], |idx| {
        let (k, i, j, m, nn, l) = (idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]);
        let mut acc = Rational::zero();
        for s in 0..n {
            acc += a.get(k, i, m, s) * a.get(s, j, nn, l);
            acc -= a.get(k, j, nn, s) * a.get(s, i, m, l);
            acc += a.get(k, i, nn, s) * a.get(s, j, m, l);
            acc -= a.get(k, j, m, s) * a.get(s, i, nn, l);
        }
        Polynomial::constant(&cvars, acc)
    });

    let three = rat(3);
    let perms = |x: usize, y: usize, z: usize| {
        [
            (x, y, z),
            (x, z, y),
            (y, x, z),
            (y, z, x),
            (z, x, y),
            (z, y, x),
        ]
    };
    let rel2 = Tensor::from_fn(&[n, n, n, n, n, n], |idx| {
        let (i, j, k, l0, m0, n0) = (idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]);
        let mut acc = Rational::zero();
        for (l, m, nn) in perms(l0, m0, n0) {
            for s in 0..n {
                let mut bracket_i = &three * &(a.get(i, s, m, nn) + a.get(s, i, m, nn));
                if i == m && s == nn {
                    bracket_i -= k1;
                }
                acc += &bracket_i * a.get(j, k, l, s);
                let mut bracket_j = &three * &(a.get(j, s, m, nn) + a.get(s, j, m, nn));
                if j == m && s == nn {
                    bracket_j -= k1;
                }
                acc -= &bracket_j * a.get(i, k, l, s);
            }
        }
        Polynomial::constant(&cvars, acc)
    });

    let relation1 = tensor_zero_witness(&rel1, cfg, families::CUBIC1)?.is_none();
    let relation2 = tensor_zero_witness(&rel2, cfg, families::CUBIC2)?.is_none();
    Ok(CubicReport {
        relation1,
        relation2,
    })
}

/// Extract the scalar potential of a commutative family: finds the constant
/// skew matrix c and Φ with `H^i = η^{is}(∂Φ/∂u^s − ½(c_{sk} − c_{ks})u^k)`,
/// Φ normalized to zero constant and linear parts.
///
/// Constant parts of the H^i are gauge here: they do not influence the
/// multiplication or the skew matrix, and drop out of the normalized Φ.
pub fn extract_potential(
    h: &PotentialFamily,
    cfg: &IdentityTestConfig,
) -> Result<ScalarPotential, DeformError> {
    let n = h.dim();
    let eta = h.flat();
    let vars = h.vars().clone();
    let hess = h.hessians();

    // commutativity: η^{is} ∂²H^j/∂u^s∂u^k symmetric in (i, j)
    for i in 0..n {
        for j in (i + 1)..n {
            for k_idx in 0..n {
                let mut diff = Polynomial::zero(&vars);
                for s in 0..n {
                    diff = &diff + &hess[j][s][k_idx].scale(eta.upper(i, s));
                    diff = &diff - &hess[i][s][k_idx].scale(eta.upper(j, s));
                }
                let flat_idx = (i * n + j) * n + k_idx;
                if !poly_is_zero(&diff, cfg, stream(families::COMMUTATIVITY, flat_idx))? {
                    return Err(DeformError::NotCommutative {
                        i: i + 1,
                        j: j + 1,
                        k: k_idx + 1,
                    });
                }
            }
        }
    }

    // T_{pl} = η_{ps} ∂H^s/∂u^l; its skew part is constant when commutative
    let grad: Vec<Vec<Polynomial>> = (0..n).map(|s| h.gradient(s)).collect();
    let t = Tensor::from_fn(&[n, n], |idx| {
        let (p, l) = (idx[0], idx[1]);
        let mut acc = Polynomial::zero(&vars);
        for s in 0..n {
            acc = &acc + &grad[s][l].scale(eta.lower(p, s));
        }
        acc
    });
    let half = ratio(1, 2);
    let mut skew = vec![Rational::zero(); n * n];
    for p in 0..n {
        for l in 0..n {
            let s_pl = t.get(&[p, l]) - t.get(&[l, p]);
            if !s_pl.is_constant() {
                return Err(DeformError::NotIntegrable);
            }
            // c_{pl} = ½ (T_{lp} − T_{pl})
            skew[p * n + l] = -(&half * &s_pl.constant_coeff());
        }
    }

    // gradient of Φ: ∂Φ/∂u^p = η_{ps} H^s + c_{ps} u^s
    let mut gradient_target = Vec::with_capacity(n);
    for p in 0..n {
        let mut acc = Polynomial::zero(&vars);
        for s in 0..n {
            acc = &acc + &h.component(s).scale(eta.lower(p, s));
            acc = &acc + &Polynomial::var(&vars, s).scale(&skew[p * n + s]);
        }
        gradient_target.push(acc);
    }

    // Euler integration: the degree-d part of Φ is the degree-d part of
    // Σ_p (∂Φ/∂u^p) u^p divided by d; constant/linear parts are dropped.
    let mut q = Polynomial::zero(&vars);
    for (p, gp) in gradient_target.iter().enumerate() {
        q = &q + &(gp * &Polynomial::var(&vars, p));
    }
    let phi = Polynomial::from_terms(
        &vars,
        q.terms().filter_map(|(e, c)| {
            let d: u32 = e.iter().sum();
            if d >= 2 {
                Some((e.clone(), c / rat(d as i64)))
            } else {
                None
            }
        }),
    );

    // internal consistency: ∂Φ/∂u^p must reproduce the target up to the
    // dropped constant part
    for (p, gp) in gradient_target.iter().enumerate() {
        let diff = (&phi.differentiate(p) - gp).truncate_below(1);
        if !poly_is_zero(&diff, cfg, stream(families::GRADIENT, p))? {
            return Err(DeformError::NotIntegrable);
        }
    }

    ScalarPotential::new(phi, skew, eta.clone(), h.k1().clone())
}

/// Residuals of the associativity equations (as1) and (as2) for a scalar
/// potential, including the K1-quadratic correction in (as2).
pub fn residual_wdvv(sp: &ScalarPotential) -> (ResidualTensor, ResidualTensor) {
    let n = sp.dim();
    let eta = sp.flat();
    let vars = sp.phi().vars().clone();
    let second: Vec<Vec<Polynomial>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| sp.phi().differentiate(a).differentiate(b))
                .collect()
        })
        .collect();
    let third: Vec<Vec<Vec<Polynomial>>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (0..n).map(|c| second[a][b].differentiate(c)).collect())
                .collect()
        })
        .collect();

    // X[s][j][l] = η^{sp} Φ_{pjl}
    let x: Vec<Vec<Vec<Polynomial>>> = (0..n)
        .map(|s| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|l| {
                            let mut acc = Polynomial::zero(&vars);
                            for p in 0..n {
                                acc = &acc + &third[p][j][l].scale(eta.upper(s, p));
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let as1 = Tensor::from_fn(&[n, n, n, n], |idx| {
        let (k, i, j, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = Polynomial::zero(&vars);
        for s in 0..n {
            acc = &acc + &(&third[k][i][s] * &x[s][j][l]);
            acc = &acc - &(&third[k][j][s] * &x[s][i][l]);
        }
        acc
    });

    // lowered coordinates w_i = η_{ir} u^r
    let lowered: Vec<Polynomial> = (0..n)
        .map(|i| {
            let mut acc = Polynomial::zero(&vars);
            for r in 0..n {
                acc = &acc + &Polynomial::var(&vars, r).scale(eta.lower(i, r));
            }
            acc
        })
        .collect();
    let half_k1 = sp.k1() / rat(2);
    // B_{is} = Φ_{is} − (K1/2) w_i w_s
    let b: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|s| &second[i][s] - &(&lowered[i] * &lowered[s]).scale(&half_k1))
                .collect()
        })
        .collect();

    let as2 = Tensor::from_fn(&[n, n, n], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut acc = Polynomial::zero(&vars);
        for s in 0..n {
            acc = &acc + &(&b[i][s] * &x[s][j][k]);
            acc = &acc - &(&b[j][s] * &x[s][i][k]);
        }
        acc
    });

    (
        ResidualTensor::new(ResidualKind::As1, as1),
        ResidualTensor::new(ResidualKind::As2, as2),
    )
}

/// Bridge between the potential-family residuals and the scalar-potential
/// residuals: for the induced family,
/// `ass1^{ij}_{kl} = η^{ia} η^{jb} as1_{kabl}` and
/// `ass2^{ijk} = 2 η^{ia} η^{jb} η^{kc} as2_{abc}` hold componentwise, which
/// makes the two zero-verdicts equivalent. Returns true iff both contraction
/// identities hold exactly.
pub fn reduction_consistency(
    sp: &ScalarPotential,
    cfg: &IdentityTestConfig,
) -> Result<bool, DeformError> {
    let n = sp.dim();
    let eta = sp.flat();
    let h = sp.induced_family();
    let ass1 = residual_ass1(&h);
    let ass2 = residual_ass2(&h);
    let (as1, as2) = residual_wdvv(sp);

    let mut flat_idx = 0usize;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut contracted = Polynomial::zero(h.vars());
                    for a in 0..n {
                        for bb in 0..n {
                            let c = eta.upper(i, a) * eta.upper(j, bb);
                            contracted = &contracted + &as1.tensor().get(&[k, a, bb, l]).scale(&c);
                        }
                    }
                    let diff = ass1.tensor().get(&[i, j, k, l]) - &contracted;
                    if !poly_is_zero(&diff, cfg, stream(families::REDUCTION, flat_idx))? {
                        return Ok(false);
                    }
                    flat_idx += 1;
                }
            }
        }
    }

    let two = rat(2);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut contracted = Polynomial::zero(h.vars());
                for a in 0..n {
                    for bb in 0..n {
                        for c in 0..n {
                            let w = &(eta.upper(i, a) * eta.upper(j, bb)) * eta.upper(k, c);
                            contracted =
                                &contracted + &as2.tensor().get(&[a, bb, c]).scale(&(&two * &w));
                        }
                    }
                }
                let diff = ass2.tensor().get(&[i, j, k]) - &contracted;
                if !poly_is_zero(&diff, cfg, stream(families::REDUCTION, flat_idx))? {
                    return Ok(false);
                }
                flat_idx += 1;
            }
        }
    }
    Ok(true)
}
