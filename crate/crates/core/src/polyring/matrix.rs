//! Square matrices over the polynomial ring and its fraction field.

use thiserror::Error;

use super::poly::{Polynomial, VarSet};
use super::ratfunc::RationalFunction;
use super::rational::Rational;
use num_traits::Zero;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("matrix is degenerate: determinant is identically zero")]
pub struct DegenerateMatrix;

/// Square matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_entries(dim: usize, entries: Vec<Polynomial>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        PolyMatrix { dim, entries }
    }

    pub fn from_fn(
        dim: usize,
        vars: &VarSet,
        mut f: impl FnMut(usize, usize) -> Polynomial,
    ) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let e = f(i, j);
                debug_assert!(e.vars() == vars);
                entries.push(e);
            }
        }
        PolyMatrix { dim, entries }
    }

    pub fn zero(dim: usize, vars: &VarSet) -> Self {
        PolyMatrix {
            dim,
            entries: vec![Polynomial::zero(vars); dim * dim],
        }
    }

    pub fn identity(dim: usize, vars: &VarSet) -> Self {
        let mut m = PolyMatrix::zero(dim, vars);
        for i in 0..dim {
            *m.get_mut(i, i) = Polynomial::one(vars);
        }
        m
    }

    /// Constant matrix from a row-major rational slice.
    pub fn from_rationals(dim: usize, vars: &VarSet, vals: &[Rational]) -> Self {
        assert_eq!(vals.len(), dim * dim);
        let entries = vals
            .iter()
            .map(|c| Polynomial::constant(vars, c.clone()))
            .collect();
        PolyMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.dim + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Polynomial {
        &mut self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
        PolyMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn extend_to(&self, target: &VarSet) -> PolyMatrix {
        self.map(|p| p.extend_to(target))
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a + b)
            .collect();
        PolyMatrix {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale_poly(&self, s: &Polynomial) -> PolyMatrix {
        self.map(|p| p * s)
    }

    /// Cofactor-expansion determinant; fine for the small dimensions here.
    pub fn det(&self) -> Polynomial {
        det_generic(
            self.dim,
            |i, j| self.get(i, j).clone(),
            |a, b| &a + &b,
            |a, b| &a - &b,
            |a, b| &a * &b,
        )
    }

    pub fn to_rf(&self) -> RfMatrix {
        RfMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|p| RationalFunction::from_poly(p.clone()))
                .collect(),
        }
    }
}

/// Square matrix of rational functions, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RfMatrix {
    dim: usize,
    entries: Vec<RationalFunction>,
}

impl RfMatrix {
    pub fn from_entries(dim: usize, entries: Vec<RationalFunction>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        RfMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[RationalFunction] {
        &self.entries
    }

    pub fn det(&self) -> RationalFunction {
        det_generic(
            self.dim,
            |i, j| self.get(i, j).clone(),
            |a, b| &a + &b,
            |a, b| &a - &b,
            |a, b| &a * &b,
        )
    }

    /// `adjugate / det`. The product with the original is the identity as an
    /// exact rational-function identity.
    pub fn invert(&self) -> Result<RfMatrix, DegenerateMatrix> {
        let det = self.det();
        if det.is_zero() {
            return Err(DegenerateMatrix);
        }
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        if n == 1 {
            entries.push(&RationalFunction::one(self.entries[0].num().vars()) / &self.entries[0]);
            return Ok(RfMatrix { dim: 1, entries });
        }
        // inverse[i][j] = cofactor_{j,i} / det
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let mut c = minor.det();
                if (i + j) % 2 == 1 {
                    c = -&c;
                }
                entries.push(&c / &det);
            }
        }
        Ok(RfMatrix { dim: n, entries })
    }

    fn minor(&self, row: usize, col: usize) -> RfMatrix {
        let n = self.dim;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j == col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        RfMatrix {
            dim: n - 1,
            entries,
        }
    }

    pub fn mul(&self, other: &RfMatrix) -> RfMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.get(i, 0) * other.get(0, j);
                for k in 1..n {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                entries.push(acc);
            }
        }
        RfMatrix { dim: n, entries }
    }
}

fn det_generic<T: Clone>(
    dim: usize,
    get: impl Fn(usize, usize) -> T,
    add: impl Fn(T, T) -> T + Copy,
    sub: impl Fn(T, T) -> T + Copy,
    mul: impl Fn(T, T) -> T + Copy,
) -> T {
    // Leibniz over permutations; dimensions stay <= 6 in this engine.
    assert!(
        (1..=6).contains(&dim),
        "determinant restricted to small dimensions"
    );
    let mut perm: Vec<usize> = (0..dim).collect();
    let mut acc: Option<T> = None;
    permute(&mut perm, 0, &mut |perm, odd| {
        let mut prod = get(0, perm[0]);
        for (i, &p) in perm.iter().enumerate().skip(1) {
            prod = mul(prod, get(i, p));
        }
        acc = Some(match acc.take() {
            None => {
                if odd {
                    // leading permutation is identity, never odd
                    unreachable!()
                } else {
                    prod
                }
            }
            Some(a) => {
                if odd {
                    sub(a, prod)
                } else {
                    add(a, prod)
                }
            }
        });
    });
    acc.expect("dim >= 1")
}

/// Heap's-order enumeration with parity, identity first.
fn permute(perm: &mut Vec<usize>, _k: usize, visit: &mut impl FnMut(&[usize], bool)) {
    fn go(perm: &mut Vec<usize>, k: usize, odd: bool, visit: &mut impl FnMut(&[usize], bool)) {
        let n = perm.len();
        if k == n {
            visit(perm, odd);
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            go(perm, k + 1, odd ^ (i != k), visit);
            perm.swap(k, i);
        }
    }
    go(perm, 0, false, visit);
}

/// Exact inverse of a constant rational matrix (row-major), by Gauss-Jordan.
pub fn invert_rational_matrix(dim: usize, vals: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(vals.len(), dim * dim);
    let mut a: Vec<Rational> = vals.to_vec();
    let mut inv: Vec<Rational> = vec![Rational::zero(); dim * dim];
    for i in 0..dim {
        inv[i * dim + i] = crate::polyring::rational::rat(1);
    }
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| !a[r * dim + col].is_zero())?;
        if pivot != col {
            for j in 0..dim {
                a.swap(col * dim + j, pivot * dim + j);
                inv.swap(col * dim + j, pivot * dim + j);
            }
        }
        let p = a[col * dim + col].clone();
        for j in 0..dim {
            a[col * dim + j] /= &p;
            inv[col * dim + j] /= &p;
        }
        for r in 0..dim {
            if r == col || a[r * dim + col].is_zero() {
                continue;
            }
            let f = a[r * dim + col].clone();
            for j in 0..dim {
                let t = &a[col * dim + j] * &f;
                a[r * dim + j] -= t;
                let t = &inv[col * dim + j] * &f;
                inv[r * dim + j] -= t;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rational::rat;

    fn vars() -> VarSet {
        VarSet::coords(2)
    }

    #[test]
    fn identity_inverts_to_identity() {
        let id = PolyMatrix::identity(2, &vars()).to_rf();
        let inv = id.invert().unwrap();
        assert_eq!(inv, id);
    }

    #[test]
    fn diagonal_inverse() {
        let u1 = Polynomial::var(&vars(), 0);
        let mut m = PolyMatrix::identity(2, &vars());
        *m.get_mut(0, 0) = u1.clone();
        let inv = m.to_rf().invert().unwrap();
        assert_eq!(
            inv.get(0, 0),
            &RationalFunction::new(Polynomial::one(&vars()), u1)
        );
        assert_eq!(inv.get(1, 1), &RationalFunction::one(&vars()));
        assert!(inv.get(0, 1).is_zero());
    }

    #[test]
    fn antidiagonal_is_involutive() {
        let mut m = PolyMatrix::zero(2, &vars());
        *m.get_mut(0, 1) = Polynomial::one(&vars());
        *m.get_mut(1, 0) = Polynomial::one(&vars());
        let rf = m.to_rf();
        let inv = rf.invert().unwrap();
        assert_eq!(inv, rf);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let u1 = Polynomial::var(&vars(), 0);
        let u2 = Polynomial::var(&vars(), 1);
        let one = Polynomial::one(&vars());
        // [[1, u1], [u1, u2]] — degenerate pointwise at u2 = u1^2 but not identically
        let m = PolyMatrix::from_entries(2, vec![one.clone(), u1.clone(), u1.clone(), u2.clone()]);
        let rf = m.to_rf();
        let inv = rf.invert().unwrap();
        let id = PolyMatrix::identity(2, &vars()).to_rf();
        assert_eq!(rf.mul(&inv), id);
        assert_eq!(inv.mul(&rf), id);
    }

    #[test]
    fn degenerate_matrix_reports() {
        let u1 = Polynomial::var(&vars(), 0);
        let m = PolyMatrix::from_entries(2, vec![u1.clone(), u1.clone(), u1.clone(), u1.clone()]);
        assert_eq!(m.to_rf().invert().unwrap_err(), DegenerateMatrix);
    }

    #[test]
    fn det_of_three_by_three() {
        let v = VarSet::coords(3);
        let m = PolyMatrix::from_fn(3, &v, |i, j| {
            if i == j {
                Polynomial::var(&v, i)
            } else {
                Polynomial::zero(&v)
            }
        });
        let expect = &(&Polynomial::var(&v, 0) * &Polynomial::var(&v, 1)) * &Polynomial::var(&v, 2);
        assert_eq!(m.det(), expect);
    }

    #[test]
    fn rational_matrix_inverse() {
        let vals = vec![rat(0), rat(1), rat(1), rat(0)];
        let inv = invert_rational_matrix(2, &vals).unwrap();
        assert_eq!(inv, vals);
        let singular = vec![rat(1), rat(1), rat(1), rat(1)];
        assert!(invert_rational_matrix(2, &singular).is_none());
    }
}
