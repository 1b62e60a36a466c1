//! Multivariate gcd over Q by recursive primitive pseudo-remainder sequences.

use super::poly::{Mono, Poly};
use super::rational::Q;
use super::var::Var;

pub type QPoly = Poly<Q>;

/// Scales so the grlex-leading coefficient is 1.
pub fn monic(p: &QPoly) -> QPoly {
    if p.is_zero() {
        return p.clone();
    }
    let lc = p.lead_coeff();
    if lc.is_one() {
        p.clone()
    } else {
        p.scale(&lc.recip())
    }
}

/// Gcd of two polynomials (no negative exponents), monic.
pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_zero() {
        return monic(b);
    }
    if b.is_zero() {
        return monic(a);
    }
    if a.is_constant() || b.is_constant() {
        return QPoly::one();
    }
    if a == b {
        return monic(a);
    }
    // Monomial contents split off first.
    let ma = a.min_mono();
    let mb = b.min_mono();
    let mg = ma.meet(&mb);
    let a1 = if ma.is_one() { a.clone() } else { a.mul_mono(&ma.inv()) };
    let b1 = if mb.is_one() { b.clone() } else { b.mul_mono(&mb.inv()) };
    // The core may return a Laurent-unit multiple of the gcd.
    let (_, g) = split_mono(&gcd_core(&a1, &b1));
    monic(&g.mul_mono(&mg))
}

fn gcd_core(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_zero() {
        return monic(b);
    }
    if b.is_zero() {
        return monic(a);
    }
    if a.is_constant() || b.is_constant() {
        return QPoly::one();
    }
    // Cheap exact-division shortcuts.
    if a.len() <= b.len() {
        if pdiv(&b, a).is_some() {
            return monic(a);
        }
    } else if pdiv(&a, b).is_some() {
        return monic(b);
    }
    let va = a.vars();
    let vb = b.vars();
    // A variable present in only one argument: the gcd lives in its content.
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return content_gcd_with(a, v, b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return content_gcd_with(b, v, a);
    }
    // Main variable: the one with smallest max degree keeps PRS short.
    let v = *va.iter().min_by_key(|&&v| a.degree_in(v).max(b.degree_in(v))).unwrap();
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd_core(&ca, &cb);
    let mut p = integral_primitive(&pdiv(&a, &ca).expect("content divides"));
    let mut q = integral_primitive(&pdiv(&b, &cb).expect("content divides"));
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = p.prem(&q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = QPoly::one();
            break;
        }
        p = q;
        q = integral_primitive(&primitive(&r, v));
    }
    let g = primitive(&q, v);
    monic(&g.mul(&c))
}

/// Rescales to coprime integer coefficients, which keeps pseudo-remainder
/// sequences from growing their rational coefficients.
fn integral_primitive(p: &QPoly) -> QPoly {
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut den = num_bigint::BigInt::one();
    let mut num = num_bigint::BigInt::zero();
    for (_, c) in p.terms() {
        den = den.lcm(&c.denom());
        num = num.gcd(&c.numer());
    }
    if num.is_zero() {
        return p.clone();
    }
    let f = Q::from(num_rational::BigRational::new(den, num));
    if f.is_one() {
        p.clone()
    } else {
        p.scale(&f)
    }
}

/// Exact division in the polynomial ring. `div_exact` works up to monomial
/// units, which is too weak inside the gcd.
fn pdiv(a: &QPoly, b: &QPoly) -> Option<QPoly> {
    a.div_exact(b).filter(|q| q.terms().iter().all(|(m, _)| !m.has_negative()))
}

/// gcd(content of `a` in `v`, b) where `b` does not involve `v`.
fn content_gcd_with(a: &QPoly, v: Var, b: &QPoly) -> QPoly {
    let mut g = b.clone();
    for (_, c) in a.coeffs_in(v) {
        g = gcd_core(&g, &c);
        if g.is_constant() {
            return QPoly::one();
        }
    }
    monic(&g)
}

/// Content with respect to `v`: gcd of the coefficients as polynomials in the
/// remaining variables.
pub fn content(a: &QPoly, v: Var) -> QPoly {
    let cs = a.coeffs_in(v);
    let mut it = cs.into_iter().map(|(_, c)| c);
    let mut g = match it.next() {
        Some(c) => c,
        None => return QPoly::zero(),
    };
    // Smallest coefficient first tends to make the gcd cheap.
    let mut rest: Vec<QPoly> = it.collect();
    rest.sort_by_key(|c| c.len());
    for c in rest {
        if g.is_constant() {
            break;
        }
        g = gcd_core(&g, &c);
    }
    if g.is_constant() {
        QPoly::one()
    } else {
        monic(&g)
    }
}

pub fn primitive(a: &QPoly, v: Var) -> QPoly {
    let c = content(a, v);
    if c.is_one() {
        a.clone()
    } else {
        pdiv(&a, &c).expect("content divides")
    }
}

/// Content with respect to a set of main variables: the gcd of all
/// coefficients, each a polynomial in the complementary variables.
pub fn content_in(a: &QPoly, main: impl Fn(Var) -> bool + Copy) -> QPoly {
    let mut coeffs: Vec<QPoly> = a.collect_in(main).into_iter().map(|(_, c)| c).collect();
    coeffs.sort_by_key(|c| c.len());
    let mut it = coeffs.into_iter();
    let mut g = match it.next() {
        Some(c) => monic(&c),
        None => return QPoly::zero(),
    };
    for c in it {
        if g.is_constant() {
            return QPoly::one();
        }
        g = gcd(&g, &c);
    }
    if g.is_constant() {
        QPoly::one()
    } else {
        g
    }
}

/// Lcm of two polynomials, monic.
pub fn lcm(a: &QPoly, b: &QPoly) -> QPoly {
    let g = gcd(a, b);
    monic(&pdiv(&a, &g).expect("gcd divides").mul(b))
}

/// Strips the monomial content, returning `(content, rest)`.
pub fn split_mono(a: &QPoly) -> (Mono, QPoly) {
    let m = a.min_mono();
    if m.is_one() {
        (m, a.clone())
    } else {
        let r = a.mul_mono(&m.inv());
        (m, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> QPoly {
        QPoly::var(Var::param(n))
    }

    #[test]
    fn gcd_of_products() {
        let k = v("k");
        let q = v("q");
        let a = k.add(&QPoly::one()).mul(&q.sub(&k)).mul(&q);
        let b = k.add(&QPoly::one()).mul(&q.add(&k)).mul(&q.pow(2));
        let g = gcd(&a, &b);
        assert_eq!(g, monic(&k.add(&QPoly::one()).mul(&q)));
    }

    #[test]
    fn coprime() {
        let k = v("k");
        let a = k.pow(2).add(&QPoly::one());
        let b = k.sub(&QPoly::one());
        assert!(gcd(&a, &b).is_one());
    }
}
