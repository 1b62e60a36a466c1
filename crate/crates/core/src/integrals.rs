//! Admissibility identity, the recurrence for `d_v^(p)` and the commuting
//! integrals `L_p` of classical systems.

use std::sync::RwLock;

use thiserror::Error;

use crate::diffop::{coth_alpha, directional_q, f_alpha, linear_form, phi_alpha, EulerOp, Model};
use crate::exact::{Frac, Matrix, Scalar, Var, Q};
use crate::par;
use crate::rootsys::{Root, RootError, GRS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegralError {
    #[error("integrals are only constructed for classical systems")]
    Unsupported,
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("order must be at least 1")]
    BadOrder,
}

/// Outcome of an identity check, with the residue when nonzero.
#[derive(Clone, Debug)]
pub struct Check {
    pub holds: bool,
    pub residue: Option<String>,
}

impl Check {
    fn from_frac(f: &Frac) -> Check {
        if f.is_zero() {
            Check { holds: true, residue: None }
        } else {
            Check { holds: false, residue: Some(f.render()) }
        }
    }

    fn from_op(op: &EulerOp) -> Check {
        if op.is_zero() {
            Check { holds: true, residue: None }
        } else {
            let s = op.render();
            let s = if s.len() > 2000 { format!("{}...", &s[..2000]) } else { s };
            Check { holds: false, residue: Some(s) }
        }
    }
}

fn proportional(a: &[Q], b: &[Q]) -> bool {
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

/// The residue of the main identity (hyperbolic form in the geometric model,
/// its rational limit in the affine model).
pub fn main_identity_residue(g: &GRS, model: Model) -> Frac {
    let roots: Vec<&Root> = g.positive_roots().collect();
    let cots: Vec<Frac> = roots.iter().map(|r| coth_alpha(model, &r.lattice)).collect();
    let mut pairs = Vec::new();
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            if !proportional(&roots[i].v, &roots[j].v) {
                pairs.push((i, j));
            }
        }
    }
    let terms = par::map(&pairs, |&(i, j)| {
        let c = &(&roots[i].mult * &roots[j].mult) * &g.b(&roots[i].v, &roots[j].v);
        if c.is_zero() {
            return Frac::zero();
        }
        let prod = cots[i].mul(&cots[j]);
        let base = match model {
            Model::Geometric => prod.sub(&Frac::one()),
            Model::Affine => prod,
        };
        base.mul(&Frac::from_scalar(&c))
    });
    Frac::sum(terms)
}

pub fn main_identity_check(g: &GRS, model: Model) -> Check {
    Check::from_frac(&main_identity_residue(g, model))
}

/// A single-class perturbation of the multiplicities.
#[derive(Clone, Debug)]
pub struct Perturbation {
    pub label: String,
    pub check: Check,
}

/// Adds a fresh symbol `c` to the multiplicity of one class of roots (all
/// positive roots sharing a multiplicity value and real/imaginary type) and
/// rechecks the identity.
pub fn perturbation_checks(g: &GRS, model: Model) -> Vec<Perturbation> {
    let mut classes: Vec<(bool, Scalar)> = Vec::new();
    for r in g.positive_roots() {
        let key = (r.imaginary, r.mult.clone());
        if !classes.contains(&key) {
            classes.push(key);
        }
    }
    let c = Scalar::param("c");
    par::map(&classes, |(imag, m)| {
        let mut h = g.clone();
        for r in h.roots.iter_mut() {
            if r.imaginary == *imag && r.mult == *m {
                r.mult = &r.mult + &c;
            }
        }
        let label = format!("{} m={} -> m+c", if *imag { "imaginary" } else { "real" }, m.render());
        Perturbation { label, check: main_identity_check(&h, model) }
    })
}

/// Memoized recurrence data for one system and model.
pub struct IntegralFamily {
    pub g: GRS,
    pub model: Model,
    pub orbit: Vec<Vec<Q>>,
    roots: Vec<Root>,
    /// `refl[v][a]`: index of `s_<alpha_a> v` in the orbit.
    refl: Vec<Vec<usize>>,
    /// `coef[v][a] = m_alpha (alpha, v) f_alpha`.
    coef: Vec<Vec<Frac>>,
    levels: RwLock<Vec<Vec<EulerOp>>>,
}

impl IntegralFamily {
    pub fn new(g: &GRS, model: Model) -> Result<IntegralFamily, IntegralError> {
        if !g.family.is_classical() {
            return Err(IntegralError::Unsupported);
        }
        let orbit = g.homogeneous_orbit()?;
        let roots: Vec<Root> = g.positive_roots().cloned().collect();
        let refl = orbit
            .iter()
            .map(|v| {
                roots
                    .iter()
                    .map(|r| {
                        let img = GRS::reflect_euclid_q(&r.v, v);
                        orbit.iter().position(|w| *w == img).expect("orbit closed under reflections")
                    })
                    .collect()
            })
            .collect();
        let fs: Vec<Frac> = roots.iter().map(|r| f_alpha(model, &r.lattice)).collect();
        let coef = orbit
            .iter()
            .map(|v| {
                roots.iter().zip(&fs).map(|(r, f)| f.mul(&Frac::from_scalar(&(&r.mult * &g.b(&r.v, v))))).collect()
            })
            .collect();
        let first: Vec<EulerOp> = orbit.iter().map(|v| directional_q(g, v, model)).collect();
        Ok(IntegralFamily { g: g.clone(), model, orbit, roots, refl, coef, levels: RwLock::new(vec![first]) })
    }

    pub fn dim(&self) -> usize {
        self.g.dim
    }

    fn ensure(&self, p: usize) {
        loop {
            let have = self.levels.read().unwrap().len();
            if have >= p {
                return;
            }
            let next = {
                let levels = self.levels.read().unwrap();
                let prev = &levels[have - 1];
                let idx: Vec<usize> = (0..self.orbit.len()).collect();
                par::map(&idx, |&vi| self.step(vi, prev))
            };
            self.levels.write().unwrap().push(next);
        }
    }

    /// `d_v o d_v^(p-1) - sum m (alpha,v) f_alpha (d_v^(p-1) - d_{s v}^(p-1))`.
    fn step(&self, vi: usize, prev: &[EulerOp]) -> EulerOp {
        let d1 = &self.levels_first()[vi];
        let lead = d1.compose(&prev[vi]).unwrap();
        let mut items: Vec<(Frac, &EulerOp)> = vec![(Frac::one(), &lead)];
        let mut own = Vec::new();
        for (a, c) in self.coef[vi].iter().enumerate() {
            let w = self.refl[vi][a];
            if w == vi || c.is_zero() {
                continue;
            }
            own.push(c.neg());
            items.push((c.clone(), &prev[w]));
        }
        let own_sum = Frac::sum(own);
        items.push((own_sum, &prev[vi]));
        EulerOp::combine(self.model, self.dim(), &items)
    }

    fn levels_first(&self) -> Vec<EulerOp> {
        self.levels.read().unwrap()[0].clone()
    }

    /// `d_v^(p)` for the orbit vector with index `vi`.
    pub fn nabla_idx(&self, vi: usize, p: usize) -> Result<EulerOp, IntegralError> {
        if p == 0 {
            return Err(IntegralError::BadOrder);
        }
        self.ensure(p);
        Ok(self.levels.read().unwrap()[p - 1][vi].clone())
    }

    pub fn nabla(&self, v: &[Q], p: usize) -> Result<EulerOp, IntegralError> {
        let vi = self.orbit.iter().position(|w| w == v).ok_or(RootError::NotInOrbit)?;
        self.nabla_idx(vi, p)
    }

    /// `L_p = sum_{v in O} d_v^(p) / (v,v)`.
    pub fn integral(&self, p: usize) -> Result<EulerOp, IntegralError> {
        if p == 0 {
            return Err(IntegralError::BadOrder);
        }
        self.ensure(p);
        let levels = self.levels.read().unwrap();
        let items: Vec<(Frac, &EulerOp)> = self
            .orbit
            .iter()
            .enumerate()
            .map(|(i, v)| (Frac::from_scalar(&self.g.b(v, v).inv().expect("non-isotropic")), &levels[p - 1][i]))
            .collect();
        Ok(EulerOp::combine(self.model, self.dim(), &items))
    }

    /// Right-hand side of the commutation relation with `L_2`.
    pub fn prop1_rhs(&self, vi: usize, p: usize) -> Result<EulerOp, IntegralError> {
        let v = &self.orbit[vi];
        let vv = self.g.b(v, v);
        let ev: Q = v.iter().fold(Q::zero(), |s, x| &s + &(x * x));
        self.ensure(p);
        let levels = self.levels.read().unwrap();
        let cur = &levels[p - 1];
        let mut items: Vec<(Frac, &EulerOp)> = Vec::new();
        let mut own = Vec::new();
        for (a, r) in self.roots.iter().enumerate() {
            let w = self.refl[vi][a];
            if w == vi {
                continue;
            }
            let ea: Q = r.v.iter().fold(Q::zero(), |s, x| &s + &(x * x));
            let s = &(&vv * &r.mult) * &Scalar::from_q(&ea / &ev);
            let c = phi_alpha(self.model, &r.lattice).mul(&Frac::from_scalar(&s));
            own.push(c.clone());
            items.push((c.neg(), &cur[w]));
        }
        let own_sum = Frac::sum(own);
        items.push((own_sum, &cur[vi]));
        Ok(EulerOp::combine(self.model, self.dim(), &items))
    }

    /// Checks `[L, d_v^(p)] = rhs` where `L` is the given second-order operator.
    pub fn prop1_check_with(&self, l2: &EulerOp, vi: usize, p: usize) -> Result<Check, IntegralError> {
        let lhs = l2.commutator(&self.nabla_idx(vi, p)?).unwrap();
        let rhs = self.prop1_rhs(vi, p)?;
        Ok(Check::from_op(&lhs.sub(&rhs).unwrap()))
    }

    pub fn commute_check(&self, p: usize, q: usize) -> Result<Check, IntegralError> {
        let a = self.integral(p)?;
        let b = self.integral(q)?;
        Ok(Check::from_op(&a.commutator(&b).unwrap()))
    }

    /// Runs several commutator checks, in parallel over the pairs.
    pub fn commute_checks(&self, pairs: &[(usize, usize)]) -> Result<Vec<Check>, IntegralError> {
        let maxp = pairs.iter().map(|&(p, q)| p.max(q)).max().unwrap_or(1);
        let ops: Vec<EulerOp> = (1..=maxp).map(|p| self.integral(p)).collect::<Result<_, _>>()?;
        Ok(par::map(pairs, |&(p, q)| Check::from_op(&ops[p - 1].commutator(&ops[q - 1]).unwrap())))
    }

    /// Orders of the integrals used for integrability: `1..=d` for A,
    /// `2,4,..,2d` for BC types.
    pub fn integrability_orders(&self) -> Vec<usize> {
        let d = self.dim();
        if self.g.family.is_bc_type() {
            (1..=d).map(|i| 2 * i).collect()
        } else {
            (1..=d).collect()
        }
    }

    /// Leading symbol of `L_p`: `sum_v (sum_t (b_t,v) xi_t)^p / (v,v)`.
    pub fn leading_symbol(&self, p: usize) -> crate::exact::SPoly {
        use crate::exact::{Mono, SPoly};
        let d = self.dim();
        let xi: Vec<Var> = (0..d).map(|t| Var::param(&format!("lam{}", t + 1))).collect();
        let mut acc = SPoly::zero();
        for v in &self.orbit {
            let dual = self.g.lattice_dual(&crate::rootsys::GVec::from_q(v));
            let lin = SPoly::from_terms(dual.iter().enumerate().map(|(t, c)| (Mono::var(xi[t]), c.clone())));
            let vv = self.g.b(v, v).inv().unwrap();
            acc = acc.add(&lin.pow(p as u32).scale(&vv));
        }
        acc
    }

    /// Independence of the leading symbols, certified by a nonvanishing
    /// Jacobian determinant.
    pub fn independence(&self) -> bool {
        let orders = self.integrability_orders();
        let d = self.dim();
        let xi: Vec<Var> = (0..d).map(|t| Var::param(&format!("lam{}", t + 1))).collect();
        let syms: Vec<crate::exact::SPoly> = orders.iter().map(|&p| self.leading_symbol(p)).collect();
        let jac: Vec<Vec<crate::exact::SPoly>> = syms.iter().map(|s| xi.iter().map(|&v| s.diff(v)).collect()).collect();
        // Evaluate at a generic integer point to keep the determinant small;
        // a nonzero value certifies independence.
        let point: Vec<(Var, Scalar)> = xi.iter().enumerate().map(|(i, &v)| (v, Scalar::int(2 + 3 * i as i64))).collect();
        let rows: Vec<Vec<Scalar>> = jac.iter().map(|row| row.iter().map(|p| eval_spoly(p, &point)).collect()).collect();
        Matrix::from_rows(rows, d).rank() == d
    }
}

fn eval_spoly(p: &crate::exact::SPoly, point: &[(Var, Scalar)]) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for &(v, e) in m.pairs() {
            let val = &point.iter().find(|b| b.0 == v).expect("point covers variables").1;
            t = &t * &val.pow(e);
        }
        acc = &acc + &t;
    }
    acc
}

/// `(alpha, x)` as a rendered linear form, for reports.
pub fn render_linear_form(model: Model, r: &Root) -> String {
    linear_form(model, &r.lattice).render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::build_l2_display;
    use crate::rootsys::Family;

    fn q(n: i64) -> Q {
        Q::int(n)
    }

    #[test]
    fn main_identity_small() {
        for (f, n, m) in [(Family::A, 1, 1), (Family::A, 2, 1), (Family::BC, 1, 1)] {
            let g = GRS::build(f, n, m).unwrap();
            for model in [Model::Geometric, Model::Affine] {
                assert!(main_identity_check(&g, model).holds, "{}", g.name());
            }
        }
    }

    #[test]
    fn perturbed_a11_fails() {
        let mut g = GRS::build(Family::A, 2, 2).unwrap();
        for r in g.roots.iter_mut() {
            if !r.imaginary && r.v[2] != q(0) {
                r.mult = Scalar::k();
            }
        }
        assert!(!main_identity_check(&g, Model::Geometric).holds);
    }

    #[test]
    fn nabla_base_and_unrolling() {
        let g = GRS::build(Family::A, 1, 1).unwrap();
        let fam = IntegralFamily::new(&g, Model::Geometric).unwrap();
        let e1 = [q(1), q(0)];
        let e2 = [q(0), q(1)];
        assert_eq!(fam.nabla(&e1, 1).unwrap(), directional_q(&g, &e1, Model::Geometric));
        let d1 = directional_q(&g, &e1, Model::Geometric);
        let d2 = directional_q(&g, &e2, Model::Geometric);
        let f = f_alpha(Model::Geometric, &[1, -1]);
        let expect = d1.compose(&d1).unwrap().sub(&d1.sub(&d2).unwrap().lmul(&f)).unwrap();
        assert_eq!(fam.nabla(&e1, 2).unwrap(), expect);
    }

    #[test]
    fn l1_is_total_momentum() {
        let g = GRS::build(Family::A, 2, 1).unwrap();
        let fam = IntegralFamily::new(&g, Model::Geometric).unwrap();
        let l1 = fam.integral(1).unwrap();
        let mut expect = EulerOp::zero(Model::Geometric, 3);
        for t in 0..3 {
            expect = expect.add(&EulerOp::derivation(Model::Geometric, 3, t)).unwrap();
        }
        assert_eq!(l1, expect);
    }

    #[test]
    fn l2_relations() {
        let g = GRS::build(Family::A, 2, 1).unwrap();
        let fam = IntegralFamily::new(&g, Model::Geometric).unwrap();
        assert_eq!(fam.integral(2).unwrap(), build_l2_display(&g, Model::Geometric));
        let g = GRS::build(Family::BC, 1, 1).unwrap();
        let fam = IntegralFamily::new(&g, Model::Geometric).unwrap();
        assert_eq!(fam.integral(2).unwrap(), build_l2_display(&g, Model::Geometric).scale(&Scalar::int(2)));
        assert!(fam.integral(3).unwrap().is_zero());
    }

    #[test]
    fn commute_a00() {
        let g = GRS::build(Family::A, 1, 1).unwrap();
        let fam = IntegralFamily::new(&g, Model::Geometric).unwrap();
        assert!(fam.commute_check(2, 3).unwrap().holds);
        assert!(fam.independence());
    }

    #[test]
    fn prop1_p1_p2() {
        let g = GRS::build(Family::A, 1, 1).unwrap();
        let fam = IntegralFamily::new(&g, Model::Geometric).unwrap();
        let l2 = build_l2_display(&g, Model::Geometric);
        for p in 1..=2 {
            assert!(fam.prop1_check_with(&l2, 0, p).unwrap().holds, "p={p}");
        }
        let g = GRS::build(Family::BC, 1, 1).unwrap();
        let fam = IntegralFamily::new(&g, Model::Geometric).unwrap();
        let l2 = build_l2_display(&g, Model::Geometric);
        for vi in 0..fam.orbit.len() {
            assert!(fam.prop1_check_with(&l2, vi, 2).unwrap().holds);
        }
    }
}

