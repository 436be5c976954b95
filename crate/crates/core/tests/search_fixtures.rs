//! Exhaustively discovered fixtures over the small-entry grid at N = 2,
//! pinned so the searches stay reproducible.

use qfrob_core::algebras::{
    check_commutativity, check_quasi_frobenius, check_right_commutativity, BilinearForm,
    FiniteAlgebra,
};
use qfrob_core::polyring::matrix::PolyMatrix;
use qfrob_core::{rat, IdentityTestConfig, Polynomial, VarSet};

const GRID: [i64; 3] = [-1, 0, 1];

fn algebra_from(f: &[i64; 8]) -> FiniteAlgebra {
    let vars = VarSet::empty();
    let rats: Vec<_> = f.iter().map(|&v| rat(v)).collect();
    FiniteAlgebra::from_rationals(2, &vars, &rats)
}

fn form_from(b: &[i64; 3]) -> BilinearForm {
    let vars = VarSet::empty();
    let entries = vec![
        Polynomial::constant(&vars, rat(b[0])),
        Polynomial::constant(&vars, rat(b[1])),
        Polynomial::constant(&vars, rat(b[1])),
        Polynomial::constant(&vars, rat(b[2])),
    ];
    BilinearForm::new(PolyMatrix::from_entries(2, entries)).unwrap()
}

fn nth_algebra(a: usize) -> [i64; 8] {
    let mut f = [0i64; 8];
    for (slot, entry) in f.iter_mut().enumerate() {
        *entry = GRID[a / 3usize.pow(7 - slot as u32) % 3];
    }
    f
}

fn nth_form(fi: usize) -> [i64; 3] {
    [GRID[fi / 9], GRID[fi / 3 % 3], GRID[fi % 3]]
}

/// The lexicographically first noncommutative quasi-Frobenius pair over the
/// grid, rediscovered by the same search and pinned.
#[test]
fn pinned_noncommutative_quasi_frobenius_instance() {
    let cfg = IdentityTestConfig::symbolic();
    let mut first = None;
    'outer: for a in 0..6561usize {
        let f = nth_algebra(a);
        // skip commutative multiplication tables
        if f[2] == f[4] && f[3] == f[5] {
            continue;
        }
        let alg = algebra_from(&f);
        if !check_right_commutativity(&alg, &cfg).unwrap() {
            continue;
        }
        for fi in 0..27usize {
            let b = nth_form(fi);
            if b[0] * b[2] - b[1] * b[1] == 0 {
                continue;
            }
            if check_quasi_frobenius(&alg, &form_from(&b), &cfg).unwrap() {
                first = Some((f, b));
                break 'outer;
            }
        }
    }
    let (f, b) = first.expect("the grid contains noncommutative quasi-Frobenius pairs");
    assert_eq!(f, [-1, -1, -1, -1, -1, 0, -1, 0]);
    assert_eq!(b, [-1, -1, 0]);

    // sanity on the pinned instance itself
    let alg = algebra_from(&f);
    let form = form_from(&b);
    assert!(!check_commutativity(&alg, &cfg).unwrap());
    assert!(check_quasi_frobenius(&alg, &form, &cfg).unwrap());
}

/// Right-commutativity genuinely fails somewhere on the grid (the check is
/// not vacuous), pinned at the lexicographically first violator.
#[test]
fn pinned_right_commutativity_violation() {
    let cfg = IdentityTestConfig::symbolic();
    let mut first = None;
    for a in 0..6561usize {
        let f = nth_algebra(a);
        let alg = algebra_from(&f);
        if !check_right_commutativity(&alg, &cfg).unwrap() {
            first = Some(f);
            break;
        }
    }
    assert_eq!(first, Some([-1, -1, -1, -1, -1, -1, -1, 0]));
}
