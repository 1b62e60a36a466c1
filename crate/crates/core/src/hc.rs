//! Harish-Chandra images of the integrals, quasi-invariance, and the
//! Bernoulli generators for A systems.

use std::collections::HashMap;

use thiserror::Error;

use crate::exact::{Frac, Matrix, Mono, Q, QPoly, SPoly, Scalar, Var};
use crate::integrals::IntegralFamily;
use crate::rootsys::{Family, GVec, GRS};

/// Polynomials on weight space, in the variables `lam1..lamd`.
pub type PolyLambda = SPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HcError {
    #[error("only classical systems have Harish-Chandra images here")]
    Unsupported,
    #[error("Bernoulli generators are defined for A systems")]
    NotTypeA,
    #[error("vector is not in the homogeneous orbit")]
    NotInOrbit,
    #[error("operator coefficient has no limit at infinity")]
    NoLimit,
}

pub fn lam(i: usize) -> Var {
    Var::param(&format!("lam{}", i + 1))
}

/// The linear form `(lambda, v)` with the deformed pairing.
pub fn pair_lambda(g: &GRS, v: &GVec) -> PolyLambda {
    let mut terms = Vec::new();
    for i in 0..g.dim {
        let mut c = Scalar::zero();
        for j in 0..g.dim {
            if !g.form[i][j].is_zero() && !v.0[j].is_zero() {
                c = &c + &(&g.form[i][j] * &v.0[j]);
            }
        }
        if !c.is_zero() {
            terms.push((Mono::var(lam(i)), c));
        }
    }
    SPoly::from_terms(terms)
}

/// `rho = 1/2 sum_{R+} m_alpha alpha`, the shift in the Harish-Chandra map.
pub fn rho_hc(g: &GRS) -> GVec {
    g.rho().scale(&Scalar::frac(1, 2))
}

/// Substitutes `lambda -> lambda + s` for a constant vector `s`.
pub fn shift(p: &PolyLambda, s: &GVec) -> PolyLambda {
    let b: Vec<(Var, SPoly)> = s
        .0
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (lam(i), SPoly::var(lam(i)).add(&SPoly::constant(c.clone()))))
        .collect();
    p.substitute(&b)
}

/// Memo of the shifted functions `y_v^(p)`.
pub struct HcFamily {
    pub g: GRS,
    pub orbit: Vec<Vec<Q>>,
    refl: Vec<Vec<usize>>,
    /// `1/2 m_alpha (alpha, v)` per orbit vector and positive root.
    half_coef: Vec<Vec<Scalar>>,
    lin: Vec<PolyLambda>,
    levels: Vec<Vec<PolyLambda>>,
}

impl HcFamily {
    pub fn new(g: &GRS) -> Result<HcFamily, HcError> {
        if !g.family.is_classical() {
            return Err(HcError::Unsupported);
        }
        let orbit = g.homogeneous_orbit().map_err(|_| HcError::Unsupported)?;
        let roots: Vec<_> = g.positive_roots().cloned().collect();
        let refl = orbit
            .iter()
            .map(|v| {
                roots
                    .iter()
                    .map(|r| {
                        let img = GRS::reflect_euclid_q(&r.v, v);
                        orbit.iter().position(|w| *w == img).expect("orbit closed")
                    })
                    .collect()
            })
            .collect();
        let half_coef =
            orbit.iter().map(|v| roots.iter().map(|r| &(&r.mult * &g.b(&r.v, v)) * &Scalar::frac(1, 2)).collect()).collect();
        let lin = orbit.iter().map(|v| pair_lambda(g, &GVec::from_q(v))).collect();
        let ones = vec![SPoly::one(); orbit.len()];
        Ok(HcFamily { g: g.clone(), orbit, refl, half_coef, lin, levels: vec![ones] })
    }

    fn ensure(&mut self, p: usize) {
        while self.levels.len() <= p {
            let prev = self.levels.last().unwrap();
            let next: Vec<PolyLambda> = crate::par::map(&(0..self.orbit.len()).collect::<Vec<_>>(), |&vi| {
                let mut acc = self.lin[vi].mul(&prev[vi]);
                for (a, c) in self.half_coef[vi].iter().enumerate() {
                    let w = self.refl[vi][a];
                    if w == vi || c.is_zero() {
                        continue;
                    }
                    acc = acc.add(&prev[w].scale(c));
                }
                acc
            });
            self.levels.push(next);
        }
    }

    /// `y_v^(p)` with `y^(0) = 1`.
    pub fn y(&mut self, v: &[Q], p: usize) -> Result<PolyLambda, HcError> {
        let vi = self.orbit.iter().position(|w| w == v).ok_or(HcError::NotInOrbit)?;
        self.ensure(p);
        Ok(self.levels[p][vi].clone())
    }

    /// `Z_p = sum_{v in O} y_v^(p) / (v,v)`.
    pub fn hc_image(&mut self, p: usize) -> PolyLambda {
        self.ensure(p);
        let mut acc = SPoly::zero();
        for (vi, v) in self.orbit.iter().enumerate() {
            let vv = self.g.b(v, v).inv().expect("non-isotropic orbit");
            acc = acc.add(&self.levels[p][vi].scale(&vv));
        }
        acc
    }
}

/// Degree-`p` homogeneous part.
pub fn homogeneous_part(p: &PolyLambda, deg: i32) -> PolyLambda {
    SPoly::from_terms(p.terms().iter().filter(|(m, _)| m.degree() == deg).cloned())
}

/// `lam_1^r + .. + lam_n^r + k^{r-1} (lam_{n+1}^r + .. + lam_{n+m}^r)`.
pub fn summa(g: &GRS, r: u32) -> PolyLambda {
    let k = g.k();
    let kr = k.pow(r as i32 - 1);
    SPoly::from_terms((0..g.dim).map(|i| {
        let c = if g.blocks[i] == 0 { Scalar::one() } else { kr.clone() };
        (Mono::var_pow(lam(i), r as i32), c)
    }))
}

#[derive(Clone, Debug)]
pub struct QuasiInvariance {
    pub imaginary_ok: bool,
    pub w0_ok: bool,
}

impl QuasiInvariance {
    pub fn holds(&self) -> bool {
        self.imaginary_ok && self.w0_ok
    }
}

/// Restriction to the hyperplane `L = 0` for a linear form `L` in `lam`.
fn restrict_to_hyperplane(p: &PolyLambda, l: &PolyLambda) -> PolyLambda {
    let (m, c) = l.terms().iter().find(|(m, _)| m.degree() == 1).expect("nonzero linear form").clone();
    let v = m.pairs()[0].0;
    let inv = c.inv().unwrap();
    let rest = l.sub(&SPoly::term(m, c)).scale(&inv.neg());
    p.substitute(&[(v, rest)])
}

/// Quasi-invariance along imaginary roots (shift by `gamma/2`) and
/// invariance under the deformed reflections in real roots.
pub fn quasi_invariance_check(g: &GRS, p: &PolyLambda) -> QuasiInvariance {
    let mut imaginary_ok = true;
    let mut w0_ok = true;
    for r in g.positive_roots() {
        let gv = r.gvec();
        if r.imaginary {
            let half = gv.scale(&Scalar::frac(1, 2));
            let diff = shift(p, &half).sub(&shift(p, &half.neg()));
            let l = pair_lambda(g, &gv);
            if !restrict_to_hyperplane(&diff, &l).is_zero() {
                imaginary_ok = false;
            }
        } else {
            let aa = g.b(&r.v, &r.v);
            let lin = pair_lambda(g, &gv).scale(&(&Scalar::int(-2) / &aa));
            let b: Vec<(Var, SPoly)> = (0..g.dim)
                .filter(|&i| !r.v[i].is_zero())
                .map(|i| (lam(i), SPoly::var(lam(i)).add(&lin.scale(&Scalar::from_q(r.v[i].clone())))))
                .collect();
            if p.substitute(&b) != *p {
                w0_ok = false;
            }
        }
    }
    QuasiInvariance { imaginary_ok, w0_ok }
}

/// Infinitesimal version: `d_gamma p` vanishes on `(gamma, lambda) = 0`.
pub fn quasi_invariance_rational(g: &GRS, p: &PolyLambda) -> bool {
    g.positive_roots().filter(|r| r.imaginary).all(|r| {
        // d_gamma in the lam coordinates is the plain directional derivative
        // along gamma (lam are coordinates of V).
        let mut d = SPoly::zero();
        for i in 0..g.dim {
            if !r.v[i].is_zero() {
                d = d.add(&p.diff(lam(i)).scale(&Scalar::from_q(r.v[i].clone())));
            }
        }
        restrict_to_hyperplane(&d, &pair_lambda(g, &r.gvec())).is_zero()
    })
}

/// Bernoulli numbers `B_0..B_n` (with `B_1 = -1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<Q> {
    let mut b = vec![Q::one()];
    for m in 1..=n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut s = Q::zero();
        let mut c = Q::one();
        for (j, bj) in b.iter().enumerate() {
            s = &s + &(&c * bj);
            c = &(&c * &Q::int((m + 1 - j) as i64)) / &Q::int(j as i64 + 1);
        }
        b.push(&(-&s) / &Q::int(m as i64 + 1));
    }
    b
}

/// `B_r(x)` as a polynomial in `x`.
pub fn bernoulli_poly(r: usize, x: Var) -> QPoly {
    let b = bernoulli_numbers(r);
    let mut c = Q::one();
    let mut terms = Vec::new();
    for (j, bj) in b.iter().enumerate() {
        terms.push((Mono::var_pow(x, (r - j) as i32), &c * bj));
        c = &(&c * &Q::int((r - j) as i64)) / &Q::int(j as i64 + 1);
    }
    QPoly::from_terms(terms)
}

/// `Y_r = sum_i B_r(lam_i + 1/2) + k^{r-1} sum_j B_r(lam_{n+j} + 1/2)`.
pub fn bernoulli_generator(g: &GRS, r: usize) -> Result<PolyLambda, HcError> {
    if g.family != Family::A {
        return Err(HcError::NotTypeA);
    }
    let x = Var::param("u1");
    let br = bernoulli_poly(r, x);
    let kr = g.k().pow(r as i32 - 1);
    let mut acc = SPoly::zero();
    for i in 0..g.dim {
        let arg = SPoly::var(lam(i)).add(&SPoly::constant(Scalar::frac(1, 2)));
        let b = br.map_coeffs(|c| Scalar::from_q(c.clone())).substitute(&[(x, arg)]);
        let c = if g.blocks[i] == 0 { Scalar::one() } else { kr.clone() };
        acc = acc.add(&b.scale(&c));
    }
    Ok(acc)
}

/// Solves `target = sum c_a Y^a` over products of `Y_1..Y_p` of weighted
/// degree at most `p`. Returns the coefficients when solvable.
pub fn express_in_generators(g: &GRS, target: &PolyLambda, p: usize) -> Result<Option<Vec<(Vec<usize>, Scalar)>>, HcError> {
    let ys: Vec<PolyLambda> = (1..=p).map(|r| bernoulli_generator(g, r)).collect::<Result<_, _>>()?;
    // Exponent vectors a with sum_i (i+1) a_i <= p.
    let mut exps: Vec<Vec<usize>> = vec![vec![]];
    for (i, _) in ys.iter().enumerate() {
        let w = i + 1;
        let mut next = Vec::new();
        for e in &exps {
            let used: usize = e.iter().enumerate().map(|(j, a)| (j + 1) * a).sum();
            let mut a = 0;
            while used + a * w <= p {
                let mut e2 = e.clone();
                e2.push(a);
                next.push(e2);
                a += 1;
            }
        }
        exps = next;
    }
    let prods: Vec<PolyLambda> = exps
        .iter()
        .map(|e| {
            let mut acc = SPoly::one();
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    acc = acc.mul(&ys[i].pow(a as u32));
                }
            }
            acc
        })
        .collect();
    let mut monos: Vec<Mono> = Vec::new();
    let mut index: HashMap<Mono, usize> = HashMap::new();
    for poly in prods.iter().chain(std::iter::once(target)) {
        for (m, _) in poly.terms() {
            if !index.contains_key(m) {
                index.insert(m.clone(), monos.len());
                monos.push(m.clone());
            }
        }
    }
    let mut mat = Matrix::zeros(monos.len(), prods.len());
    for (j, poly) in prods.iter().enumerate() {
        for (m, c) in poly.terms() {
            mat.set(index[m], j, c.clone());
        }
    }
    let mut rhs = vec![Scalar::zero(); monos.len()];
    for (m, c) in target.terms() {
        rhs[index[m]] = c.clone();
    }
    Ok(mat.solve(&rhs).map(|x| exps.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).collect()))
}

/// Harish-Chandra image read off the operator `L_p` itself: coefficients are
/// replaced by their limits as all `e^{-alpha}` (positive `alpha`) tend to 0,
/// then `E_t` acts on `e^{(lambda + rho, x)}`.
pub fn hc_image_from_operator(fam: &IntegralFamily, p: usize) -> Result<PolyLambda, HcError> {
    let g = &fam.g;
    let op = fam.integral(p).map_err(|_| HcError::Unsupported)?;
    let d = g.dim;
    // Weights of z_t making every positive root large: lexicographic height.
    let weights: Vec<i64> = (0..d).map(|t| 1000i64.pow((d - 1 - t) as u32)).collect();
    let rho = rho_hc(g);
    // Lattice coordinates of lambda + rho (standard basis for classical systems).
    let mu: Vec<SPoly> = (0..d).map(|t| SPoly::var(lam(t)).add(&SPoly::constant(rho.0[t].clone()))).collect();
    let mut acc = SPoly::zero();
    for (idx, c) in op.terms() {
        let lim = limit_at_infinity(c, fam.model, &weights).ok_or(HcError::NoLimit)?;
        if lim.is_zero() {
            continue;
        }
        let mut t = SPoly::constant(lim);
        for (i, &e) in idx.iter().enumerate() {
            if e > 0 {
                t = t.mul(&mu[i].pow(e as u32));
            }
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

fn top_part(p: &QPoly, model: crate::diffop::Model, w: &[i64]) -> (i64, Scalar) {
    let coords: Vec<Var> = (0..w.len()).map(|t| model.var(t)).collect();
    let mut best: Option<i64> = None;
    let mut acc = QPoly::zero();
    for (m, c) in p.terms() {
        let h: i64 = m.pairs().iter().map(|&(v, e)| coords.iter().position(|&x| x == v).map_or(0, |t| w[t] * e as i64)).sum();
        let rest = QPoly::term(m.restrict(|v| !v.is_coord()), c.clone());
        match best {
            Some(b) if h < b => {}
            Some(b) if h == b => acc = acc.add(&rest),
            _ => {
                best = Some(h);
                acc = rest;
            }
        }
    }
    (best.unwrap_or(0), Scalar::from_poly(acc))
}

fn limit_at_infinity(f: &Frac, model: crate::diffop::Model, w: &[i64]) -> Option<Scalar> {
    if f.is_zero() {
        return Some(Scalar::zero());
    }
    let (hn, cn) = top_part(f.num(), model, w);
    let mut hd = 0;
    let mut cd = Scalar::from_poly(f.den_param().clone());
    for (fac, e) in f.den_factors() {
        let (h, c) = top_part(fac.poly(), model, w);
        hd += h * e as i64;
        cd = &cd * &c.pow(e as i32);
    }
    match hn.cmp(&hd) {
        std::cmp::Ordering::Less => Some(Scalar::zero()),
        std::cmp::Ordering::Equal => Some(&cn / &cd),
        std::cmp::Ordering::Greater => None,
    }
}

/// Convenience for reports: leading homogeneous part of `Z_p` equals `summa`.
pub fn highest_term_ok(g: &GRS, z: &PolyLambda, p: u32) -> bool {
    let scale = if g.family.is_bc_type() { Scalar::int(2) } else { Scalar::one() };
    homogeneous_part(z, p as i32) == summa(g, p).scale(&scale)
}

pub fn render(p: &PolyLambda) -> String {
    p.render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::Model;

    fn q(n: i64) -> Q {
        Q::int(n)
    }

    #[test]
    fn y_base_and_z1() {
        let g = GRS::build(Family::A, 1, 1).unwrap();
        let mut h = HcFamily::new(&g).unwrap();
        let y1 = h.y(&[q(1), q(0)], 1).unwrap();
        // (λ + ρ, e1) with ρ = ½(e1 − e2)
        assert_eq!(y1, SPoly::var(lam(0)).add(&SPoly::constant(Scalar::frac(1, 2))));
        let z1 = h.hc_image(1);
        assert_eq!(z1, SPoly::var(lam(0)).add(&SPoly::var(lam(1))));
    }

    #[test]
    fn y_two_steps() {
        let g = GRS::build(Family::A, 1, 1).unwrap();
        let mut h = HcFamily::new(&g).unwrap();
        let y2 = h.y(&[q(1), q(0)], 2).unwrap();
        let l1 = SPoly::var(lam(0));
        let l2k = SPoly::var(lam(1)).scale(&Scalar::k());
        // λ1(λ1 + ½) + ½(kλ2 − k/2)
        let want = l1
            .mul(&l1.add(&SPoly::constant(Scalar::frac(1, 2))))
            .add(&l2k.scale(&Scalar::frac(1, 2)))
            .sub(&SPoly::constant(Scalar::k().mul(&Scalar::frac(1, 4))));
        assert_eq!(y2, want);
    }

    #[test]
    fn bernoulli() {
        let b = bernoulli_numbers(4);
        assert_eq!(b[1], Q::frac(-1, 2));
        assert_eq!(b[2], Q::frac(1, 6));
        assert_eq!(b[3], Q::zero());
        assert_eq!(b[4], Q::frac(-1, 30));
        let g = GRS::build(Family::A, 2, 1).unwrap();
        let y1 = bernoulli_generator(&g, 1).unwrap();
        assert_eq!(y1, SPoly::from_terms((0..3).map(|i| (Mono::var(lam(i)), Scalar::one()))));
    }

    #[test]
    fn quasi_invariance_small() {
        let g = GRS::build(Family::A, 2, 2).unwrap();
        let mut h = HcFamily::new(&g).unwrap();
        for p in 1..=3 {
            let z = h.hc_image(p);
            assert!(quasi_invariance_check(&g, &z).holds(), "p={p}");
            assert!(highest_term_ok(&g, &z, p as u32));
        }
        let bad = SPoly::var(lam(0));
        assert!(!quasi_invariance_check(&g, &bad).w0_ok);
    }

    #[test]
    fn operator_route_agrees() {
        let g = GRS::build(Family::A, 1, 1).unwrap();
        let fam = IntegralFamily::new(&g, Model::Geometric).unwrap();
        let mut h = HcFamily::new(&g).unwrap();
        for p in 1..=3 {
            assert_eq!(hc_image_from_operator(&fam, p).unwrap(), h.hc_image(p), "p={p}");
        }
    }
}
