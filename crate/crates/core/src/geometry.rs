//! Contravariant metrics, Levi-Civita connections, the constant-curvature
//! obstruction, and compatibility of metric pencils.
//!
//! A metric is a symmetric nondegenerate matrix of polynomials g^{ij}(u).
//! Its connection is carried in raised form b^{ij}_k = −g^{is} Γ^j_{sk},
//! which is the shape the bracket conditions consume. Constant curvature K
//! means the obstruction
//!
//! ```text
//! g^{is}(∂b^{jr}_s/∂u^k − ∂b^{jr}_k/∂u^s) + b^{ij}_s b^{sr}_k − b^{ir}_s b^{sj}_k
//!     − K (g^{ir} δ^j_k − g^{ij} δ^r_k)
//! ```
//!
//! vanishes identically. Pencil compatibility quantifies over arbitrary
//! constant combinations λ1 g1 + λ2 g2 by treating λ1, λ2 as formal
//! polynomial variables.

use thiserror::Error;

use crate::polyring::matrix::{DegenerateMatrix, PolyMatrix};
use crate::polyring::poly::{Polynomial, VarSet};
use crate::polyring::ratfunc::RationalFunction;
use crate::polyring::rational::Rational;
use crate::polyring::tensor::Tensor;
use crate::polyring::zerotest::{
    rf_equal, stream, tensor_zero_witness, IdentityTestConfig, Indeterminate,
};

/// Seed-stream families for the checks in this module.
mod families {
    pub const CURVATURE: u32 = 0x11;
    pub const PENCIL_CONNECTION: u32 = 0x12;
    pub const PENCIL_CURVATURE: u32 = 0x13;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("metric entries must form a symmetric matrix (g^{{ij}} = g^{{ji}})")]
    AsymmetricMetric,
    #[error("metric is degenerate: det(g) is identically zero")]
    DegenerateMetric,
    #[error("pencil is degenerate: det(lam1*g1 + lam2*g2) is identically zero")]
    DegeneratePencil,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error(transparent)]
    Indeterminate(#[from] Indeterminate),
}

/// Contravariant metric with polynomial entries: symmetric and nondegenerate
/// by construction.
///
/// The first `dim` variables of the entries' variable set are the
/// coordinates the connection and curvature differentiate along; trailing
/// variables (formal pencil parameters) are inert.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    entries: PolyMatrix,
}

impl Metric {
    pub fn new(entries: PolyMatrix) -> Result<Self, GeometryError> {
        if !entries.is_symmetric() {
            return Err(GeometryError::AsymmetricMetric);
        }
        if entries.det().is_zero() {
            return Err(GeometryError::DegenerateMetric);
        }
        Ok(Metric { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn entries(&self) -> &PolyMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        self.entries.get(i, j)
    }

    /// Constant metric from a row-major rational matrix.
    pub fn constant(dim: usize, vars: &VarSet, vals: &[Rational]) -> Result<Self, GeometryError> {
        Metric::new(PolyMatrix::from_rationals(dim, vars, vals))
    }
}

/// Connection coefficients in raised form, `coeffs[i][j][k] = b^{ij}_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    coeffs: Tensor<RationalFunction>,
}

impl Connection {
    pub fn new(coeffs: Tensor<RationalFunction>) -> Self {
        assert_eq!(coeffs.dims().len(), 3);
        Connection { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.dims()[0]
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &RationalFunction {
        self.coeffs.get(&[i, j, k])
    }

    pub fn coeffs(&self) -> &Tensor<RationalFunction> {
        &self.coeffs
    }
}

/// Pencil of two constant-curvature metrics with curvatures `k1`, `k2`.
#[derive(Clone, Debug)]
pub struct MetricPencil {
    pub g1: Metric,
    pub g2: Metric,
    pub k1: Rational,
    pub k2: Rational,
}

/// Outcome of [`pencil_compatibility_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityReport {
    /// Levi-Civita of the combination is the combination of Levi-Civitas.
    pub connection_linear: bool,
    /// The combination has constant curvature `lam1*K1 + lam2*K2`.
    pub curvature_affine: bool,
}

impl CompatibilityReport {
    pub fn compatible(&self) -> bool {
        self.connection_linear && self.curvature_affine
    }
}

/// Levi-Civita connection of `g`, raised: `b^{ij}_k = −g^{is} Γ^j_{sk}` with
/// `Γ^j_{sk} = ½ g^{jm} (∂_s g_{mk} + ∂_k g_{ms} − ∂_m g_{sk})` built from the
/// covariant metric `g_{ij} = (g^{ij})⁻¹`.
pub fn levi_civita(g: &Metric) -> Result<Connection, GeometryError> {
    let n = g.dim();
    let lower = g
        .entries()
        .to_rf()
        .invert()
        .map_err(|DegenerateMatrix| GeometryError::DegenerateMetric)?;

    // ∂ g_{mk} / ∂u^s at [m, k, s]
    let dlower = Tensor::from_fn(&[n, n, n], |idx| {
        lower.get(idx[0], idx[1]).differentiate(idx[2])
    });

    let half = crate::polyring::rational::ratio(1, 2);
    // Γ^j_{sk} at [j, s, k]
    let gamma = Tensor::from_fn(&[n, n, n], |idx| {
        let (j, s, k) = (idx[0], idx[1], idx[2]);
        let vars = g.get(0, 0).vars();
        let mut acc = RationalFunction::zero(vars);
        for m in 0..n {
            let sum = dlower.get(&[m, k, s]) + dlower.get(&[m, s, k]);
            let sum = &sum - dlower.get(&[s, k, m]);
            acc = &acc + &(&RationalFunction::from_poly(g.get(j, m).clone()) * &sum);
        }
        acc.scale(&half)
    });

    let coeffs = Tensor::from_fn(&[n, n, n], |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let vars = g.get(0, 0).vars();
        let mut acc = RationalFunction::zero(vars);
        for s in 0..n {
            acc =
                &acc + &(&RationalFunction::from_poly(g.get(i, s).clone()) * gamma.get(&[j, s, k]));
        }
        -&acc
    });
    Ok(Connection::new(coeffs))
}

/// Componentwise residual of the constant-curvature condition for a metric
/// with a given (not necessarily Levi-Civita) connection; indices `[i,j,r,k]`.
pub fn curvature_obstruction(g: &Metric, b: &Connection, k: &Rational) -> Tensor<RationalFunction> {
    let vars = g.get(0, 0).vars().clone();
    let k_poly = Polynomial::constant(&vars, k.clone());
    curvature_obstruction_raw(g.entries(), b.coeffs(), &k_poly)
}

/// Same residual with the curvature scalar as a polynomial (the pencil case
/// feeds `lam1*K1 + lam2*K2` here).
pub(crate) fn curvature_obstruction_raw(
    g: &PolyMatrix,
    b: &Tensor<RationalFunction>,
    k: &Polynomial,
) -> Tensor<RationalFunction> {
    let n = g.dim();
    let vars = g.get(0, 0).vars().clone();
    let k_rf = RationalFunction::from_poly(k.clone());

    // ∂ b^{jr}_s / ∂u^k at [j, r, s, k]
    let db = Tensor::from_fn(&[n, n, n, n], |idx| {
        b.get(&[idx[0], idx[1], idx[2]]).differentiate(idx[3])
    });

    Tensor::from_fn(&[n, n, n, n], |idx| {
        let (i, j, r, k_idx) = (idx[0], idx[1], idx[2], idx[3]);
        let mut acc = RationalFunction::zero(&vars);
        for s in 0..n {
            let diff = db.get(&[j, r, s, k_idx]) - db.get(&[j, r, k_idx, s]);
            acc = &acc + &(&RationalFunction::from_poly(g.get(i, s).clone()) * &diff);
            acc = &acc + &(b.get(&[i, j, s]) * b.get(&[s, r, k_idx]));
            acc = &acc - &(b.get(&[i, r, s]) * b.get(&[s, j, k_idx]));
        }
        if j == k_idx {
            acc = &acc - &(&k_rf * &RationalFunction::from_poly(g.get(i, r).clone()));
        }
        if r == k_idx {
            acc = &acc + &(&k_rf * &RationalFunction::from_poly(g.get(i, j).clone()));
        }
        acc
    })
}

/// Does `g` have constant Riemannian curvature `k`.
pub fn constant_curvature_check(
    g: &Metric,
    k: &Rational,
    cfg: &IdentityTestConfig,
) -> Result<bool, GeometryError> {
    let b = levi_civita(g)?;
    let obstruction = curvature_obstruction(g, &b, k);
    let witness = tensor_zero_witness(&obstruction, cfg, families::CURVATURE)?;
    Ok(witness.is_none())
}

/// Compatibility of a constant-curvature metric pencil, verified as a
/// polynomial identity in the formal parameters `lam1`, `lam2`.
pub fn pencil_compatibility_check(
    p: &MetricPencil,
    cfg: &IdentityTestConfig,
) -> Result<CompatibilityReport, GeometryError> {
    let n = p.g1.dim();
    if p.g2.dim() != n {
        return Err(GeometryError::DimensionMismatch);
    }
    let base = p.g1.get(0, 0).vars().union(p.g2.get(0, 0).vars());
    let ext = base.extended(&["lam1", "lam2"]);
    let lam1 = Polynomial::var_named(&ext, "lam1");
    let lam2 = Polynomial::var_named(&ext, "lam2");

    let g1 = p.g1.entries().extend_to(&ext);
    let g2 = p.g2.entries().extend_to(&ext);
    let combo = g1.scale_poly(&lam1).add(&g2.scale_poly(&lam2));
    if combo.det().is_zero() {
        return Err(GeometryError::DegeneratePencil);
    }
    let combo_metric = Metric::new(combo)?;

    let lc_combo = levi_civita(&combo_metric)?;
    let lc1 = levi_civita(&p.g1)?;
    let lc2 = levi_civita(&p.g2)?;

    let lam1_rf = RationalFunction::from_poly(lam1.clone());
    let lam2_rf = RationalFunction::from_poly(lam2.clone());
    let mut connection_linear = true;
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let expected = &(&lam1_rf * &lc1.get(i, j, k).extend_to(&ext))
                    + &(&lam2_rf * &lc2.get(i, j, k).extend_to(&ext));
                let flat = (i * n + j) * n + k;
                if !rf_equal(
                    lc_combo.get(i, j, k),
                    &expected,
                    cfg,
                    stream(families::PENCIL_CONNECTION, flat),
                )? {
                    connection_linear = false;
                    break 'outer;
                }
            }
        }
    }

    let k_poly = &lam1.scale(&p.k1) + &lam2.scale(&p.k2);
    let obstruction = curvature_obstruction_raw(combo_metric.entries(), lc_combo.coeffs(), &k_poly);
    let witness = tensor_zero_witness(&obstruction, cfg, families::PENCIL_CURVATURE)?;
    let curvature_affine = witness.is_none();

    Ok(CompatibilityReport {
        connection_linear,
        curvature_affine,
    })
}

/// The stereographic-type conformal metric `(1 + (K/4)|u|²)² δ^{ij}` on ℝ²;
/// the standard constant-curvature-K model used by tests and fixtures.
pub fn conformal_metric_2d(k: &Rational) -> Metric {
    let vars = VarSet::coords(2);
    let quarter_k = k / crate::polyring::rational::rat(4);
    let norm2 = &Polynomial::var(&vars, 0).pow(2) + &Polynomial::var(&vars, 1).pow(2);
    let f = &Polynomial::one(&vars) + &norm2.scale(&quarter_k);
    let f2 = &f * &f;
    let zero = Polynomial::zero(&vars);
    Metric::new(PolyMatrix::from_entries(
        2,
        vec![f2.clone(), zero.clone(), zero, f2],
    ))
    .expect("conformal metric is symmetric and nondegenerate")
}
