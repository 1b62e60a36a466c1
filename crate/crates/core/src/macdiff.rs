//! Deformed Macdonald–Ruijsenaars difference operators D^{n,m}, their root
//! system form, the q↔t / x↔y duality and the m = 0 reduction.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{Frac, Mono, Poly, QPoly, Q, Scalar, Var};
use crate::lambda::{xvar, yvar};
use crate::rootsys::{Family, Form, GVec, GRS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MacError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("exponent {0} is not of the form a + b k with integers a, b")]
    Exponent(String),
}

pub fn qvar() -> Var {
    Var::param("q")
}

pub fn tvar() -> Var {
    Var::param("t")
}

/// q^a t^b as a Laurent monomial in parameters.
fn qt_mono(a: i32, b: i32) -> Mono {
    Mono::from_pairs([(qvar(), a), (tvar(), b)].into_iter().filter(|&(_, e)| e != 0))
}

/// A shift: each listed coordinate w is replaced by q^a t^b w.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShiftKey(Vec<(Var, i32, i32)>);

impl ShiftKey {
    pub fn new(mut entries: Vec<(Var, i32, i32)>) -> ShiftKey {
        entries.retain(|&(_, a, b)| a != 0 || b != 0);
        entries.sort();
        ShiftKey(entries)
    }

    pub fn entries(&self) -> &[(Var, i32, i32)] {
        &self.0
    }

    fn bindings(&self) -> Vec<(Var, QPoly)> {
        self.0.iter().map(|&(v, a, b)| (v, QPoly::mono(qt_mono(a, b).mul(&Mono::var(v))))).collect()
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(v, a, b)| format!("{v}->{}*{v}", Poly::<Q>::mono(qt_mono(a, b)).render()))
            .collect();
        format!("T[{}]", parts.join(","))
    }
}

/// A finite sum Σ c_key(x, y) T_key.
#[derive(Clone, Debug, Default)]
pub struct ShiftOp {
    terms: BTreeMap<ShiftKey, Frac>,
}

impl ShiftOp {
    pub fn zero() -> ShiftOp {
        ShiftOp::default()
    }

    pub fn add_term(&mut self, key: ShiftKey, c: Frac) {
        let e = self.terms.entry(key.clone()).or_insert_with(Frac::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<ShiftKey, Frac> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, o: &ShiftOp) -> ShiftOp {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), c.neg());
        }
        r
    }

    pub fn scale(&self, c: &Frac) -> ShiftOp {
        ShiftOp { terms: self.terms.iter().map(|(k, v)| (k.clone(), v.mul(c))).filter(|(_, v)| !v.is_zero()).collect() }
    }

    /// Applies the operator to a rational function of the coordinates.
    pub fn apply(&self, f: &Frac) -> Frac {
        Frac::sum(self.terms.iter().map(|(k, c)| c.mul(&f.subst_coords(&k.bindings()))))
    }

    pub fn subst_params(&self, bindings: &[(Var, Scalar)]) -> ShiftOp {
        let mut r = ShiftOp::zero();
        for (k, c) in &self.terms {
            r.add_term(k.clone(), c.subst_params(bindings));
        }
        r
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|(k, c)| format!("({})*{}", c.render(), k.render())).collect::<Vec<_>>().join(" + ")
    }
}

fn lin(a: Var, c: Option<Var>, b: Var) -> QPoly {
    // a − c·b, with c a parameter (or 1 when absent)
    let cb = match c {
        Some(c) => QPoly::mono(Mono::from_pairs([(c, 1), (b, 1)])),
        None => QPoly::var(b),
    };
    QPoly::var(a).sub(&cb)
}

fn inv_one_minus(a: i32, b: i32) -> Frac {
    let den = QPoly::one().sub(&QPoly::mono(qt_mono(a, b)));
    Frac::from_scalar(&Scalar::new(QPoly::one(), den).expect("nonzero"))
}

/// D^{n,m} = 1/(1−q) Σ A_i T_{q,x_i} + 1/(1−t) Σ B_j T_{t,y_j}.
pub fn build_def_mr(n: usize, m: usize) -> ShiftOp {
    let (q, t) = (qvar(), tvar());
    let mut op = ShiftOp::zero();
    for i in 0..n {
        let xi = xvar(i);
        let mut num = QPoly::one();
        let mut den = Vec::new();
        for k in (0..n).filter(|&k| k != i) {
            num = num.mul(&lin(xi, Some(t), xvar(k)));
            den.push((lin(xi, None, xvar(k)), crate::exact::frac::FactorKind::Other, 1));
        }
        for j in 0..m {
            num = num.mul(&lin(xi, Some(q), yvar(j)));
            den.push((lin(xi, None, yvar(j)), crate::exact::frac::FactorKind::Other, 1));
        }
        op.add_term(ShiftKey::new(vec![(xi, 1, 0)]), Frac::over(num, &den).mul(&inv_one_minus(1, 0)));
    }
    for j in 0..m {
        let yj = yvar(j);
        let mut num = QPoly::one();
        let mut den = Vec::new();
        for i in 0..n {
            num = num.mul(&lin(yj, Some(t), xvar(i)));
            den.push((lin(yj, None, xvar(i)), crate::exact::frac::FactorKind::Other, 1));
        }
        for l in (0..m).filter(|&l| l != j) {
            num = num.mul(&lin(yj, Some(q), yvar(l)));
            den.push((lin(yj, None, yvar(l)), crate::exact::frac::FactorKind::Other, 1));
        }
        op.add_term(ShiftKey::new(vec![(yj, 0, 1)]), Frac::over(num, &den).mul(&inv_one_minus(0, 1)));
    }
    op
}

/// The classical first Macdonald operator Σ_i Π_{j≠i} (t x_i − x_j)/(x_i − x_j) T_{q,x_i}.
pub fn classical_macdonald(n: usize) -> ShiftOp {
    let t = tvar();
    let mut op = ShiftOp::zero();
    for i in 0..n {
        let xi = xvar(i);
        let mut num = QPoly::one();
        let mut den = Vec::new();
        for j in (0..n).filter(|&j| j != i) {
            let txi = QPoly::mono(Mono::from_pairs([(t, 1), (xi, 1)]));
            num = num.mul(&txi.sub(&QPoly::var(xvar(j))));
            den.push((lin(xi, None, xvar(j)), crate::exact::frac::FactorKind::Other, 1));
        }
        op.add_term(ShiftKey::new(vec![(xi, 1, 0)]), Frac::over(num, &den));
    }
    op
}

/// D^{n,0}(q,t) = t^{n−1}/(1−q) · D_classical(q, 1/t).
pub fn m0_reduction_check(n: usize) -> bool {
    let t = Scalar::var(tvar());
    let classical = classical_macdonald(n).subst_params(&[(tvar(), t.inv().unwrap())]);
    let factor = Frac::from_scalar(&t.pow(n as i32 - 1)).mul(&inv_one_minus(1, 0));
    build_def_mr(n, 0).sub(&classical.scale(&factor)).is_empty()
}

/// Simultaneous q↔t and x_i↔y_i.
pub fn dual(op: &ShiftOp) -> ShiftOp {
    let swap_var = |v: Var| -> Var {
        let name = v.name();
        if let Some(i) = name.strip_prefix('x') {
            Var::coord(&format!("y{i}"))
        } else if let Some(i) = name.strip_prefix('y') {
            Var::coord(&format!("x{i}"))
        } else {
            v
        }
    };
    let mut coord_vars: Vec<Var> = Vec::new();
    for (k, c) in &op.terms {
        coord_vars.extend(k.entries().iter().map(|e| e.0));
        for v in c.num().vars() {
            if v.is_coord() {
                coord_vars.push(v);
            }
        }
        for (f, _) in c.den_factors() {
            coord_vars.extend(f.poly().vars().into_iter().filter(|v| v.is_coord()));
        }
    }
    coord_vars.sort();
    coord_vars.dedup();
    let bindings: Vec<(Var, QPoly)> = coord_vars.iter().map(|&v| (v, QPoly::var(swap_var(v)))).collect();
    let params = [(qvar(), Scalar::var(tvar())), (tvar(), Scalar::var(qvar()))];
    let mut r = ShiftOp::zero();
    for (k, c) in &op.terms {
        let key = ShiftKey::new(k.entries().iter().map(|&(v, a, b)| (swap_var(v), b, a)).collect());
        r.add_term(key, c.subst_coords(&bindings).subst_params(&params));
    }
    r
}

/// dual(D^{n,m}) = D^{m,n}.
pub fn duality_check(n: usize, m: usize) -> bool {
    dual(&build_def_mr(n, m)).sub(&build_def_mr(m, n)).is_empty()
}

/// q^{e} for e = a + b k, returned as (a, b).
fn q_power(e: &Scalar) -> Result<(i32, i32), MacError> {
    let err = || MacError::Exponent(e.render());
    if !e.den().is_one() {
        return Err(err());
    }
    let k = crate::exact::var::k();
    let mut a = 0;
    let mut b = 0;
    for (mono, c) in e.num().terms() {
        let c = c.to_i64().ok_or_else(err)? as i32;
        if mono.is_one() {
            a = c;
        } else if *mono == Mono::var(k) {
            b = c;
        } else {
            return Err(err());
        }
    }
    Ok((a, b))
}

fn coord_for(g: &GRS, idx: usize) -> Var {
    let before = g.blocks[..idx].iter().filter(|&&b| b == g.blocks[idx]).count();
    if g.blocks[idx] == 0 {
        xvar(before)
    } else {
        yvar(before)
    }
}

/// q^{α} as a Laurent monomial in the coordinates x_i = q^{e_i}, y_j = q^{e_{n+j}}.
fn q_root_mono(g: &GRS, alpha: &[Q]) -> Result<Mono, MacError> {
    let mut pairs = Vec::new();
    for (i, c) in alpha.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = c.to_i64().ok_or_else(|| MacError::Unsupported("non-integral root coordinates".into()))?;
        pairs.push((coord_for(g, i), e as i32));
    }
    Ok(Mono::from_pairs(pairs))
}

/// D^R = Σ_{v∈O} 1/(1−q^{(v,v)}) Π_{α∈R, (α,v)>0} (1 − t_α^{(α,v)} q^{−α})/(1 − q^{−α}) T_v,
/// with t_α = q^{m_α} and q^k written as t.
pub fn build_root_form(g: &GRS) -> Result<ShiftOp, MacError> {
    if matches!(g.family, Family::BC) {
        return Err(MacError::Unsupported("BC(n,m) has no difference analogue".into()));
    }
    // B and C multiplicities carry the parameters p, q; the latter would clash with
    // the shift parameter q, so only A and D are constructed.
    if !matches!(g.family, Family::A | Family::D) {
        return Err(MacError::Unsupported(format!("difference form for {} is not constructed", g.name())));
    }
    let orbit = g.homogeneous_orbit().map_err(|e| MacError::Unsupported(e.to_string()))?;
    let mut op = ShiftOp::zero();
    for v in &orbit {
        let vs = GVec::from_q(v);
        let (a, b) = q_power(&g.pairing(&vs, &vs, Form::Deformed))?;
        let mut coef = inv_one_minus(a, b);
        for root in &g.roots {
            let rs = GVec::from_q(&root.v);
            let av = g.pairing(&rs, &vs, Form::Deformed);
            // k is treated as a positive formal quantity.
            let (pa, pb) = q_power(&av)?;
            if pa * pb < 0 {
                return Err(MacError::Exponent(av.render()));
            }
            if pa + pb <= 0 {
                continue;
            }
            let (ea, eb) = q_power(&root.mult.mul(&av))?;
            let neg = q_root_mono(g, &root.v)?.inv();
            let num = QPoly::one().sub(&QPoly::mono(qt_mono(ea, eb).mul(&neg)));
            // 1/(1 − q^{−α}) = −1/(q^{−α} − 1)
            coef = coef.mul(&Frac::from_poly(num)).mul(&Frac::inv_binomial(&neg, false).neg());
        }
        let mut entries = Vec::new();
        for (i, _) in g.blocks.iter().enumerate() {
            let ei = GVec::basis(g.dim, i);
            let s = g.pairing(&ei, &vs, Form::Deformed);
            let (sa, sb) = q_power(&s)?;
            entries.push((coord_for(g, i), sa, sb));
        }
        op.add_term(ShiftKey::new(entries), coef);
    }
    Ok(op)
}

/// The root system form for blocks (n, m) equals D^{n,m}.
pub fn rootsystem_form_check(n: usize, m: usize) -> Result<bool, MacError> {
    let g = GRS::build(Family::A, n, m).map_err(|e| MacError::Unsupported(e.to_string()))?;
    Ok(build_root_form(&g)?.sub(&build_def_mr(n, m)).is_empty())
}

/// Finds the coefficient c making D^{n,m}(Σ x_i + c Σ y_j) a polynomial, if one exists.
pub fn polynomial_p1_coefficient(n: usize, m: usize) -> Option<Scalar> {
    let c = Var::param("c");
    let mut f = QPoly::zero();
    for i in 0..n {
        f = f.add(&QPoly::var(xvar(i)));
    }
    for j in 0..m {
        f = f.add(&QPoly::mono(Mono::from_pairs([(c, 1), (yvar(j), 1)])));
    }
    let image = build_def_mr(n, m).apply(&Frac::from_poly(f));
    let num = image.num().clone();
    // Polynomial iff the numerator vanishes on each hyperplane in the denominator.
    let mut value: Option<Scalar> = None;
    for (fac, _) in image.den_factors() {
        let p = fac.poly();
        let coords: Vec<Var> = p.vars().into_iter().filter(|v| v.is_coord()).collect();
        if coords.len() != 2 {
            return None;
        }
        let (u, w) = (coords[0], coords[1]);
        // p = a·u + b·w with a, b constants: restrict u = −(b/a) w.
        let a = p.coeff(&Mono::var(u));
        let b = p.coeff(&Mono::var(w));
        let sub = QPoly::var(w).scale(&(-&(&b * &a.recip())));
        let restricted = num.substitute(&[(u, sub)]);
        for (_, coeff) in restricted.collect_in(|v| v.is_coord()) {
            let parts = coeff.coeffs_in(c);
            let a0 = parts.iter().find(|(e, _)| *e == 0).map(|x| x.1.clone()).unwrap_or_else(QPoly::zero);
            let a1 = parts.iter().find(|(e, _)| *e == 1).map(|x| x.1.clone()).unwrap_or_else(QPoly::zero);
            if parts.iter().any(|(e, _)| *e > 1) {
                return None;
            }
            if a1.is_zero() {
                if !a0.is_zero() {
                    return None;
                }
                continue;
            }
            let sol = Scalar::new(a0.neg(), a1).ok()?;
            match &value {
                Some(v) if *v != sol => return None,
                _ => value = Some(sol),
            }
        }
    }
    value
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffLimitReport {
    pub n: usize,
    pub m: usize,
    /// Coefficient of ∂²/∂X_w² at order h, per coordinate w (x = e^X).
    pub symbol: Vec<(String, String)>,
    /// −½ times the kinetic coefficients of the deformed CMS operator.
    pub expected: Vec<(String, String)>,
    pub matches: bool,
}

/// q = e^h, t = e^{kh}: the order-h second-order symbol of D^{n,m}.
/// Only the pole of each coefficient at h = 0 contributes, so q = 1 + h and
/// t = 1 + k h are accurate enough.
pub fn differential_limit(n: usize, m: usize) -> DiffLimitReport {
    let h = Var::param("h");
    let hs = Scalar::var(h);
    let k = Scalar::k();
    let op = build_def_mr(n, m);
    let mut symbol = Vec::new();
    let mut expected = Vec::new();
    let mut matches = true;
    for (key, c) in op.terms() {
        let &[(w, a, b)] = key.entries() else {
            matches = false;
            continue;
        };
        let shifted = c.subst_params(&[
            (qvar(), Scalar::one().add(&hs)),
            (tvar(), Scalar::one().add(&k.mul(&hs))),
        ]);
        let residue = shifted.mul(&Frac::from_scalar(&hs)).subst_params(&[(h, Scalar::zero())]);
        let speed = Scalar::int(a as i64).add(&k.mul(&Scalar::int(b as i64)));
        let coef = residue.mul(&Frac::from_scalar(&speed.mul(&speed).mul(&Scalar::frac(1, 2))));
        let want = if w.name().starts_with('x') { Scalar::frac(-1, 2) } else { k.mul(&Scalar::frac(-1, 2)) };
        matches &= coef.to_scalar().as_ref() == Some(&want);
        symbol.push((w.name(), coef.render()));
        expected.push((w.name(), want.render()));
    }
    DiffLimitReport { n, m, symbol, expected, matches }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_operators() {
        let d10 = build_def_mr(1, 0);
        assert_eq!(d10.len(), 1);
        let x = Frac::var(xvar(0));
        let img = d10.apply(&x);
        let want = Frac::var(xvar(0)).mul(&Frac::from_scalar(&Scalar::new(QPoly::var(qvar()), QPoly::one().sub(&QPoly::var(qvar()))).unwrap()));
        assert!(img.sub(&want).is_zero());
        assert_eq!(build_def_mr(1, 1).len(), 2);
    }

    #[test]
    fn duality_and_root_form() {
        assert!(duality_check(1, 1));
        assert!(duality_check(2, 1));
        assert!(duality_check(2, 0));
        assert!(rootsystem_form_check(1, 0).unwrap());
        assert!(rootsystem_form_check(1, 1).unwrap());
        assert!(rootsystem_form_check(2, 1).unwrap());
        assert!(polynomial_p1_coefficient(1, 1).is_some());
    }

    #[test]
    fn m0_reduction() {
        for n in 1..=3 {
            assert!(m0_reduction_check(n));
        }
    }

    #[test]
    fn limit_symbol() {
        assert!(differential_limit(1, 1).matches);
    }
}
