//! Sparse multivariate polynomials over ℚ.
//!
//! A polynomial carries its own ordered variable list and a `BTreeMap` from
//! exponent vectors to nonzero coefficients. The map order (lexicographic on
//! exponent vectors) is the canonical term order used everywhere: equality,
//! display, witness selection, and zero-testing are all deterministic
//! because of it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::rational::{rat, Rational};

/// Ordered list of variable identifiers, shared cheaply between values.
#[derive(Clone, Debug, Eq)]
pub struct VarSet {
    names: Arc<Vec<String>>,
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        debug_assert!(
            names
                .iter()
                .collect::<std::collections::BTreeSet<_>>()
                .len()
                == names.len(),
            "duplicate variable name"
        );
        VarSet {
            names: Arc::new(names),
        }
    }

    /// The standard coordinates `u1..uN`.
    pub fn coords(n: usize) -> Self {
        VarSet::new((1..=n).map(|i| format!("u{i}")))
    }

    /// No variables at all: the ring of constants.
    pub fn empty() -> Self {
        VarSet::new(std::iter::empty::<String>())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// This set followed by any of `extra` not already present.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> VarSet {
        let mut names = (*self.names).clone();
        for e in extra {
            if !names.iter().any(|n| n == e.as_ref()) {
                names.push(e.as_ref().to_string());
            }
        }
        VarSet {
            names: Arc::new(names),
        }
    }

    /// Union preserving `self`'s order, then `other`'s leftovers in order.
    pub fn union(&self, other: &VarSet) -> VarSet {
        if self == other {
            return self.clone();
        }
        let refs: Vec<&str> = other.names.iter().map(String::as_str).collect();
        self.extended(&refs)
    }

    /// For each of `self`'s variables, its index in `target`.
    /// Returns `None` if some variable is missing from `target`.
    fn embedding(&self, target: &VarSet) -> Option<Vec<usize>> {
        self.names.iter().map(|n| target.index_of(n)).collect()
    }
}

/// Sparse multivariate polynomial in canonical form.
#[derive(Clone, Debug)]
pub struct Polynomial {
    vars: VarSet,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &VarSet) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Polynomial::constant(vars, rat(1))
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    /// The variable with the given index, as a polynomial.
    pub fn var(vars: &VarSet, index: usize) -> Self {
        assert!(index < vars.len(), "variable index out of range");
        let mut exps = vec![0; vars.len()];
        exps[index] = 1;
        Polynomial::monomial(vars, exps, rat(1))
    }

    pub fn var_named(vars: &VarSet, name: &str) -> Self {
        let index = vars.index_of(name).expect("unknown variable");
        Polynomial::var(vars, index)
    }

    pub fn monomial(vars: &VarSet, exps: Vec<u32>, coeff: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_terms<I>(vars: &VarSet, iter: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Polynomial::zero(vars);
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of the given exponent vector (zero if absent).
    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The constant-term coefficient.
    pub fn constant_coeff(&self) -> Rational {
        self.coeff(&vec![0; self.vars.len()])
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: Rational) {
        debug_assert_eq!(exps.len(), self.vars.len());
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Reinterpret over `target`, which must contain every variable of `self`.
    pub fn extend_to(&self, target: &VarSet) -> Polynomial {
        if &self.vars == target {
            return self.clone();
        }
        let emb = self
            .vars
            .embedding(target)
            .expect("target variable set does not contain all variables");
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; target.len()];
            for (i, &x) in e.iter().enumerate() {
                ne[emb[i]] = x;
            }
            terms.insert(ne, c.clone());
        }
        Polynomial {
            vars: target.clone(),
            terms,
        }
    }

    /// Bring two polynomials over the union of their variable sets.
    pub fn align(a: &Polynomial, b: &Polynomial) -> (Polynomial, Polynomial) {
        if a.vars == b.vars {
            (a.clone(), b.clone())
        } else {
            let u = a.vars.union(&b.vars);
            (a.extend_to(&u), b.extend_to(&u))
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(e, t)| (e.clone(), t * c)).collect();
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative with respect to the `var`-th variable.
    pub fn differentiate(&self, var: usize) -> Polynomial {
        assert!(var < self.vars.len(), "variable index out of range");
        let mut out = Polynomial::zero(&self.vars);
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] = k - 1;
            out.add_term(ne, c * rat(k as i64));
        }
        out
    }

    pub fn differentiate_named(&self, name: &str) -> Polynomial {
        let idx = self.vars.index_of(name).expect("unknown variable");
        self.differentiate(idx)
    }

    /// Evaluate at a rational point (one value per variable).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "point dimension mismatch");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m *= &point[i];
                }
            }
            acc += m;
        }
        acc
    }

    /// Substitute a polynomial for every variable. All replacement
    /// polynomials must share one variable set, which becomes the result's.
    pub fn substitute(&self, repl: &[Polynomial]) -> Polynomial {
        assert_eq!(repl.len(), self.vars.len(), "one replacement per variable");
        let target = if repl.is_empty() {
            self.vars.clone()
        } else {
            repl[0].vars().clone()
        };
        for r in repl {
            assert!(
                r.vars() == &target,
                "replacements over differing variable sets"
            );
        }
        // Memoize powers of each replacement.
        let mut powers: Vec<Vec<Polynomial>> = repl
            .iter()
            .map(|r| vec![Polynomial::one(&target), r.clone()])
            .collect();
        let mut out = Polynomial::zero(&target);
        for (e, c) in &self.terms {
            let mut m = Polynomial::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                m = &m * &powers[i][k as usize];
            }
            out = &out + &m;
        }
        out
    }

    /// Leading term in the canonical (lexicographic) order.
    pub fn lead(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact division: returns `q` with `self = q * d`, or `None` when no
    /// such polynomial exists. Single-divisor division in the canonical
    /// order; when the division is exact it takes one step per quotient
    /// term, and a non-divisible leading term aborts it.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(
            self.vars == *d.vars(),
            "div_exact over differing variable sets"
        );
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Polynomial::zero(&self.vars));
        }
        let (de, dc) = d.lead().expect("nonzero divisor has a lead");
        let mut rem = self.clone();
        let mut q = Polynomial::zero(&self.vars);
        let mut steps = 0usize;
        while let Some((re, rc)) = rem.lead() {
            if re.iter().zip(de.iter()).any(|(r, d)| r < d) {
                return None;
            }
            let qe: Vec<u32> = re.iter().zip(de.iter()).map(|(r, d)| r - d).collect();
            let qc = rc / dc;
            let qm = Polynomial::monomial(&self.vars, qe, qc);
            rem = &rem - &(&qm * d);
            q = &q + &qm;
            steps += 1;
            if steps > 100_000 {
                return None;
            }
        }
        Some(q)
    }

    /// Split into (part of total degree `deg`, rest).
    pub fn homogeneous_part(&self, deg: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == deg)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Drop all terms of total degree below `deg`.
    pub fn truncate_below(&self, deg: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() >= deg)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Full canonical expression string, parseable by the CLI grammar.
    pub fn to_expr_string(&self) -> String {
        self.render(usize::MAX)
    }

    /// Expression string truncated to at most `max_terms` monomials.
    pub fn render(&self, max_terms: usize) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i >= max_terms {
                out.push_str(" + ...");
                break;
            }
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || e.iter().all(|&x| x == 0) {
                parts.push(mag.to_string());
            }
            for (vi, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(self.vars.name(vi).to_string()),
                    _ => parts.push(format!("{}^{}", self.vars.name(vi), k)),
                }
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            self.terms == other.terms
        } else {
            let (a, b) = Polynomial::align(self, other);
            a.terms == b.terms
        }
    }
}

impl Eq for Polynomial {}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr_string())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut a, b) = Polynomial::align(self, rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let (mut a, b) = Polynomial::align(self, rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (a, b) = Polynomial::align(self, rhs);
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match terms.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += c;
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial {
            vars: a.vars,
            terms,
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }
}
