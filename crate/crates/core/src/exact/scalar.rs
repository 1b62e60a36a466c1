//! Reduced rational functions over Q in the deformation parameters.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

use super::gcd::{gcd, monic, QPoly};
use super::poly::{Coeff, Mono, Poly};
use super::rational::Q;
use super::var::Var;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

/// A rational function `num / den` in parameter variables.
///
/// Canonical: `gcd(num, den) = 1`, `den` has grlex-leading coefficient 1 and
/// the zero function is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: QPoly,
    den: QPoly,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn one() -> Scalar {
        Self::from_q(Q::one())
    }

    pub fn int(n: i64) -> Scalar {
        Self::from_q(Q::int(n))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Self::from_q(Q::frac(n, d))
    }

    pub fn from_q(q: Q) -> Scalar {
        Scalar { num: QPoly::constant(q), den: QPoly::one() }
    }

    pub fn var(v: Var) -> Scalar {
        Scalar { num: QPoly::var(v), den: QPoly::one() }
    }

    /// The parameter `k`.
    pub fn k() -> Scalar {
        Self::var(super::var::k())
    }

    pub fn param(name: &str) -> Scalar {
        Self::var(Var::param(name))
    }

    pub fn from_poly(p: QPoly) -> Scalar {
        Scalar { num: p, den: QPoly::one() }
    }

    /// Builds and normalizes `num / den`.
    pub fn new(num: QPoly, den: QPoly) -> Result<Scalar, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: QPoly, den: QPoly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.constant_value() {
            return Scalar { num: num.scale(&c.recip()), den: QPoly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.lead_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar { num: num.scale(&inv), den: monic(&den) }
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// The value as a plain rational, if it has no parameters.
    pub fn to_q(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.to_q().is_some()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.add(&o.num), den: QPoly::one() };
        }
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let da = self.den.div_exact(&g).unwrap();
        let db = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&db).add(&o.num.mul(&da));
        Self::reduce(num, self.den.mul(&db))
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.mul(&o.num), den: QPoly::one() };
        }
        // Cross-cancel before multiplying.
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.lead_coeff();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar { num: num.scale(&inv), den: monic(&den) }
        }
    }

    pub fn inv(&self) -> Result<Scalar, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let lc = self.num.lead_coeff();
        let inv = lc.recip();
        Ok(Scalar { num: self.den.scale(&inv), den: self.num.scale(&inv) })
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, ArithError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Scalar {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        Scalar { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }
    }

    /// Substitutes scalars for parameters.
    pub fn substitute(&self, bindings: &[(Var, Scalar)]) -> Result<Scalar, ArithError> {
        let num = subst_poly(&self.num, bindings);
        let den = subst_poly(&self.den, bindings);
        num.checked_div(&den)
    }

    /// Applies a variable renaming.
    pub fn rename(&self, f: impl Fn(Var) -> Var + Copy) -> Scalar {
        let ren = |p: &QPoly| p.map_monos(|m| Mono::from_pairs(m.pairs().iter().map(|&(v, e)| (f(v), e))));
        Self::reduce(ren(&self.num), ren(&self.den))
    }

    pub fn render(&self) -> String {
        if self.den.is_one() {
            self.num.render()
        } else {
            let n = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.render() };
            let d = self.den.render();
            if d.chars().all(|c| c.is_alphanumeric() || c == '_') {
                format!("{n}/{d}")
            } else {
                format!("{n}/({d})")
            }
        }
    }
}

/// Evaluates a polynomial with scalar bindings.
pub fn subst_poly(p: &QPoly, bindings: &[(Var, Scalar)]) -> Scalar {
    let mut acc = Scalar::zero();
    let mut cache: std::collections::HashMap<(Var, i32), Scalar> = std::collections::HashMap::new();
    for (m, c) in p.terms() {
        let mut t = Scalar::from_q(c.clone());
        let mut rest = Vec::new();
        for &(v, e) in m.pairs() {
            match bindings.iter().find(|b| b.0 == v) {
                Some((_, s)) => {
                    let pe = cache.entry((v, e)).or_insert_with(|| s.pow(e)).clone();
                    t = t.mul(&pe);
                }
                None => rest.push((v, e)),
            }
        }
        if !rest.is_empty() {
            t = t.mul(&Scalar::from_poly(QPoly::mono(Mono::from_pairs(rest))));
        }
        acc = acc.add(&t);
    }
    acc
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Self {
        Scalar::from_q(q)
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        Scalar::checked_div(self, o).expect("division by zero scalar")
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn from_q(q: Q) -> Self {
        Scalar::from_q(q)
    }
    fn render(&self) -> (String, bool) {
        if let Some(q) = self.to_q() {
            return (q.to_string(), false);
        }
        let single = self.den.is_one() && self.num.len() == 1;
        (self.render(), !single)
    }
}

macro_rules! scalar_ops {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                <&Scalar as $tr<&Scalar>>::$m(&self, &rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                <&Scalar as $tr<&Scalar>>::$m(&self, rhs)
            }
        }
    };
}

scalar_ops!(Add, add, |a, b| Scalar::add(a, b));
scalar_ops!(Sub, sub, |a, b| Scalar::sub(a, b));
scalar_ops!(Mul, mul, |a, b| Scalar::mul(a, b));
scalar_ops!(Div, div, |a, b| Scalar::checked_div(a, b).expect("division by zero scalar"));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// Polynomials with rational-function coefficients.
pub type SPoly = Poly<Scalar>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_over_k() {
        let k = Scalar::k();
        assert!(k.checked_div(&k).unwrap().is_one());
    }

    #[test]
    fn common_denominator() {
        let k = Scalar::k();
        let kp1 = &k + &Scalar::one();
        let a = Scalar::one().checked_div(&kp1).unwrap();
        let b = k.checked_div(&kp1).unwrap();
        assert!((a + b).is_one());
    }

    #[test]
    fn divide_by_zero_is_error() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(ArithError::DivisionByZero));
    }
}
