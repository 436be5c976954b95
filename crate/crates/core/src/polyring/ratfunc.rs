//! Rational functions p/q over the polynomial ring.
//!
//! Not gcd-reduced: equality is by cross-multiplication, `p/q = r/s` iff
//! `p·s − r·q ≡ 0`. Construction applies a cheap normalization pass —
//! constant denominators fold into the numerator, an exactly-dividing
//! denominator (either direction) cancels, and the denominator's leading
//! coefficient is made positive — which is enough to stop the determinant
//! denominators of curvature computations from compounding.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::poly::{Polynomial, VarSet};
use super::rational::Rational;

#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Build `num/den`. Panics if `den` is identically zero; the caller owns
    /// that check (matrix inversion reports degeneracy before dividing).
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = Polynomial::align(&num, &den);
        RationalFunction { num, den }.normalized()
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn zero(vars: &VarSet) -> Self {
        RationalFunction::from_poly(Polynomial::zero(vars))
    }

    pub fn one(vars: &VarSet) -> Self {
        RationalFunction::from_poly(Polynomial::one(vars))
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(vars, c))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// Identically zero iff the numerator is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The numerator, provided the denominator normalized away.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        if self.den.is_constant() && self.den.constant_coeff().is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    fn normalized(self) -> Self {
        let RationalFunction { num, den } = self;
        if num.is_zero() {
            return RationalFunction {
                den: Polynomial::one(num.vars()),
                num,
            };
        }
        if den.is_constant() {
            let c = den.constant_coeff();
            let num2 = num.scale(&c.recip());
            return RationalFunction {
                den: Polynomial::one(num2.vars()),
                num: num2,
            };
        }
        // Try to cancel the denominator outright, in either direction.
        const REDUCE_TERM_CAP: usize = 512;
        if num.num_terms() <= REDUCE_TERM_CAP && den.num_terms() <= REDUCE_TERM_CAP {
            if let Some(q) = num.div_exact(&den) {
                return RationalFunction {
                    den: Polynomial::one(q.vars()),
                    num: q,
                };
            }
            if let Some(q) = den.div_exact(&num) {
                // num/den = 1/q
                let one = Polynomial::one(q.vars());
                return RationalFunction { num: one, den: q }.sign_normalized();
            }
        }
        RationalFunction { num, den }.sign_normalized()
    }

    fn sign_normalized(self) -> Self {
        let lead_neg = self
            .den
            .lead()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        if lead_neg {
            RationalFunction {
                num: -&self.num,
                den: -&self.den,
            }
        } else {
            self
        }
    }

    pub fn extend_to(&self, target: &VarSet) -> RationalFunction {
        RationalFunction {
            num: self.num.extend_to(target),
            den: self.den.extend_to(target),
        }
    }

    fn aligned(a: &RationalFunction, b: &RationalFunction) -> (RationalFunction, RationalFunction) {
        if a.num.vars() == b.num.vars() {
            (a.clone(), b.clone())
        } else {
            let u = a.num.vars().union(b.num.vars());
            (a.extend_to(&u), b.extend_to(&u))
        }
    }

    /// Quotient-rule partial derivative.
    pub fn differentiate(&self, var: usize) -> RationalFunction {
        if self.is_polynomial() {
            return RationalFunction::from_poly(self.num.differentiate(var));
        }
        let dn = self.num.differentiate(var);
        let dd = self.den.differentiate(var);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        RationalFunction::new(num, den)
    }

    /// Evaluate at a rational point; `None` when the denominator vanishes.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    pub fn scale(&self, c: &Rational) -> RationalFunction {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .normalized()
    }

    /// Cross-multiplication equality test, exact.
    pub fn eq_symbolic(&self, other: &RationalFunction) -> bool {
        let (a, b) = RationalFunction::aligned(self, other);
        (&(&a.num * &b.den) - &(&b.num * &a.den)).is_zero()
    }

    pub fn render(&self, max_terms: usize) -> String {
        if self.is_polynomial() {
            self.num.render(max_terms)
        } else {
            format!(
                "({}) / ({})",
                self.num.render(max_terms),
                self.den.render(max_terms)
            )
        }
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.eq_symbolic(other)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(usize::MAX))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let (a, b) = RationalFunction::aligned(self, rhs);
        if a.den == b.den {
            return RationalFunction::new(&a.num + &b.num, a.den);
        }
        let num = &(&a.num * &b.den) + &(&b.num * &a.den);
        RationalFunction::new(num, &a.den * &b.den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        let (a, b) = RationalFunction::aligned(self, rhs);
        if a.den == b.den {
            return RationalFunction::new(&a.num - &b.num, a.den);
        }
        let num = &(&a.num * &b.den) - &(&b.num * &a.den);
        RationalFunction::new(num, &a.den * &b.den)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        let (a, b) = RationalFunction::aligned(self, rhs);
        RationalFunction::new(&a.num * &b.num, &a.den * &b.den)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "division by the zero function");
        let (a, b) = RationalFunction::aligned(self, rhs);
        RationalFunction::new(&a.num * &b.den, &a.den * &b.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}
