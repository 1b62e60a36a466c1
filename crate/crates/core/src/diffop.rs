//! Normal-ordered differential operators with rational coefficients, and the
//! deformed CMS operators built from a root system.
//!
//! Coordinates are attached to the lattice basis `b_t`: in the geometric model
//! `z_t = e^{(b_t,x)}` with Euler derivations `E_t = z_t d/dz_t`; in the affine
//! model `x_t = (b_t,x)` with partials `d/dx_t`. A root with lattice exponents
//! `c` has `e^{(alpha,x)} = z^c`, resp. `(alpha,x) = sum c_t x_t`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::exact::{Frac, Mono, QPoly, Scalar, Var, Q};
use crate::par;
use crate::rootsys::{GVec, Root, GRS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Hyperbolic model in exponential coordinates.
    #[serde(alias = "trig")]
    Geometric,
    /// Rational limit in linear coordinates.
    #[serde(alias = "rational")]
    Affine,
}

impl Model {
    pub fn var(self, t: usize) -> Var {
        match self {
            Model::Geometric => Var::coord(&format!("z{}", t + 1)),
            Model::Affine => Var::coord(&format!("x{}", t + 1)),
        }
    }

    pub fn euler(self) -> bool {
        self == Model::Geometric
    }

    pub fn parse(s: &str) -> Option<Model> {
        match s {
            "trig" | "geometric" | "hyperbolic" => Some(Model::Geometric),
            "rational" | "affine" => Some(Model::Affine),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Model::Geometric => "trig",
            Model::Affine => "rational",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpError {
    #[error("operators live in different models or dimensions")]
    ModelMismatch,
}

pub type Idx = SmallVec<[u8; 6]>;

/// `sum_beta a_beta(z) D^beta` with coefficients to the left.
#[derive(Clone, PartialEq, Eq)]
pub struct EulerOp {
    pub model: Model,
    pub dim: usize,
    terms: BTreeMap<Idx, Frac>,
}

fn binom(n: u8, k: u8) -> i64 {
    let mut r = 1i64;
    for i in 0..k as i64 {
        r = r * (n as i64 - i) / (i + 1);
    }
    r
}

impl EulerOp {
    pub fn zero(model: Model, dim: usize) -> EulerOp {
        EulerOp { model, dim, terms: BTreeMap::new() }
    }

    pub fn identity(model: Model, dim: usize) -> EulerOp {
        Self::mult(model, dim, Frac::one())
    }

    /// Multiplication by a function.
    pub fn mult(model: Model, dim: usize, f: Frac) -> EulerOp {
        let mut op = Self::zero(model, dim);
        op.insert(SmallVec::from_elem(0, dim), f);
        op
    }

    /// The basic derivation `D_t`.
    pub fn derivation(model: Model, dim: usize, t: usize) -> EulerOp {
        let mut idx: Idx = SmallVec::from_elem(0, dim);
        idx[t] = 1;
        let mut op = Self::zero(model, dim);
        op.insert(idx, Frac::one());
        op
    }

    pub fn from_terms(model: Model, dim: usize, terms: impl IntoIterator<Item = (Idx, Frac)>) -> EulerOp {
        let mut op = Self::zero(model, dim);
        for (i, f) in terms {
            let cur = op.terms.remove(&i).unwrap_or_default();
            op.insert(i, cur.add(&f));
        }
        op
    }

    fn insert(&mut self, idx: Idx, f: Frac) {
        if !f.is_zero() {
            self.terms.insert(idx, f);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Idx, &Frac)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &[u8]) -> Frac {
        self.terms.get(idx).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|i| i.iter().map(|&e| e as u32).sum()).max().unwrap_or(0)
    }

    fn check(&self, o: &EulerOp) -> Result<(), OpError> {
        if self.model != o.model || self.dim != o.dim {
            Err(OpError::ModelMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &EulerOp) -> Result<EulerOp, OpError> {
        self.check(o)?;
        let mut out = self.clone();
        for (i, f) in &o.terms {
            let cur = out.terms.remove(i).unwrap_or_default();
            out.insert(i.clone(), cur.add(f));
        }
        Ok(out)
    }

    pub fn sub(&self, o: &EulerOp) -> Result<EulerOp, OpError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> EulerOp {
        EulerOp { model: self.model, dim: self.dim, terms: self.terms.iter().map(|(i, f)| (i.clone(), f.neg())).collect() }
    }

    /// Left multiplication by a function.
    pub fn lmul(&self, f: &Frac) -> EulerOp {
        if f.is_zero() {
            return Self::zero(self.model, self.dim);
        }
        EulerOp {
            model: self.model,
            dim: self.dim,
            terms: self.terms.iter().map(|(i, c)| (i.clone(), c.mul(f))).filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> EulerOp {
        self.lmul(&Frac::from_scalar(s))
    }

    /// `sum_i f_i A_i`, summing each coefficient over a common denominator.
    pub fn combine(model: Model, dim: usize, items: &[(Frac, &EulerOp)]) -> EulerOp {
        let mut buckets: HashMap<Idx, Vec<Frac>> = HashMap::new();
        for (f, op) in items {
            assert!(op.model == model && op.dim == dim, "model mismatch in combine");
            if f.is_zero() {
                continue;
            }
            for (i, c) in &op.terms {
                let v = if f.is_one() { c.clone() } else { f.mul(c) };
                buckets.entry(i.clone()).or_default().push(v);
            }
        }
        Self::from_buckets(model, dim, buckets)
    }

    fn from_buckets(model: Model, dim: usize, buckets: HashMap<Idx, Vec<Frac>>) -> EulerOp {
        let items: Vec<(Idx, Vec<Frac>)> = buckets.into_iter().collect();
        let summed = par::map_owned(items, |(i, fs)| (i, Frac::sum(fs)));
        let mut out = Self::zero(model, dim);
        for (i, f) in summed {
            out.insert(i, f);
        }
        out
    }

    fn derive_coeff(&self, f: &Frac, t: usize) -> Frac {
        f.derive(self.model.var(t), self.model.euler())
    }

    /// Applies the operator to a function.
    pub fn apply(&self, f: &Frac) -> Frac {
        let mut cache: HashMap<Idx, Frac> = HashMap::new();
        cache.insert(SmallVec::from_elem(0, self.dim), f.clone());
        let parts: Vec<Frac> = self.terms.iter().map(|(i, c)| c.mul(&self.deriv_cached(&mut cache, i))).collect();
        Frac::sum(parts)
    }

    fn deriv_cached(&self, cache: &mut HashMap<Idx, Frac>, beta: &Idx) -> Frac {
        if let Some(v) = cache.get(beta) {
            return v.clone();
        }
        let t = beta.iter().position(|&e| e > 0).expect("nonzero index has a positive entry");
        let mut prev = beta.clone();
        prev[t] -= 1;
        let p = self.deriv_cached(cache, &prev);
        let d = self.derive_coeff(&p, t);
        cache.insert(beta.clone(), d.clone());
        d
    }

    /// Normal-ordered product `self o other` by the Leibniz rule.
    pub fn compose(&self, o: &EulerOp) -> Result<EulerOp, OpError> {
        self.check(o)?;
        let d = self.dim;
        // All beta <= alpha for alpha in self.
        let mut betas: Vec<Idx> = Vec::new();
        for a in self.terms.keys() {
            let mut cur: Idx = SmallVec::from_elem(0, d);
            loop {
                betas.push(cur.clone());
                let mut t = 0;
                while t < d {
                    if cur[t] < a[t] {
                        cur[t] += 1;
                        break;
                    }
                    cur[t] = 0;
                    t += 1;
                }
                if t == d {
                    break;
                }
            }
        }
        betas.sort();
        betas.dedup();
        let gammas: Vec<(&Idx, &Frac)> = o.terms.iter().collect();
        let parts: Vec<Vec<(Idx, Frac)>> = par::map(&gammas, |(g, b)| {
            let mut cache: HashMap<Idx, Frac> = HashMap::new();
            cache.insert(SmallVec::from_elem(0, d), (*b).clone());
            let mut out = Vec::new();
            for (a, ca) in &self.terms {
                for beta in &betas {
                    if !(0..d).all(|t| beta[t] <= a[t]) {
                        continue;
                    }
                    let db = self.deriv_cached(&mut cache, beta);
                    if db.is_zero() {
                        continue;
                    }
                    let c: i64 = (0..d).map(|t| binom(a[t], beta[t])).product();
                    let key: Idx = (0..d).map(|t| a[t] - beta[t] + g[t]).collect();
                    let mut v = ca.mul(&db);
                    if c != 1 {
                        v = v.scale_q(&Q::int(c));
                    }
                    out.push((key, v));
                }
            }
            out
        });
        let mut buckets: HashMap<Idx, Vec<Frac>> = HashMap::new();
        for part in parts {
            for (k, v) in part {
                buckets.entry(k).or_default().push(v);
            }
        }
        Ok(Self::from_buckets(self.model, d, buckets))
    }

    pub fn commutator(&self, o: &EulerOp) -> Result<EulerOp, OpError> {
        self.compose(o)?.sub(&o.compose(self)?)
    }

    /// Principal symbol as a polynomial in `xi_t` (the `lam` variables).
    pub fn symbol(&self) -> QPolyOverScalar {
        let ord = self.order();
        let mut out = Vec::new();
        for (i, c) in &self.terms {
            if i.iter().map(|&e| e as u32).sum::<u32>() != ord {
                continue;
            }
            let m = Mono::from_pairs(i.iter().enumerate().map(|(t, &e)| (Var::param(&format!("lam{}", t + 1)), e as i32)));
            out.push((m, c.clone()));
        }
        QPolyOverScalar(out)
    }

    /// Specializes parameters.
    pub fn subst_params(&self, bindings: &[(Var, Scalar)]) -> EulerOp {
        let mut out = Self::zero(self.model, self.dim);
        for (i, c) in &self.terms {
            out.insert(i.clone(), c.subst_params(bindings));
        }
        out
    }

    /// The scaling `x -> 2x`: coefficients get `z -> z^2`, `E -> E/2`.
    pub fn doubled(&self) -> EulerOp {
        assert_eq!(self.model, Model::Geometric, "doubling acts on exponential coordinates");
        let mut out = Self::zero(self.model, self.dim);
        for (i, c) in &self.terms {
            let ord: u32 = i.iter().map(|&e| e as u32).sum();
            let s = Q::frac(1, 1i64 << ord);
            out.insert(i.clone(), c.double().scale_q(&s));
        }
        out
    }

    /// Coefficient-free test: is this a multiplication by a constant?
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(Scalar::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (i, c) = self.terms.iter().next().unwrap();
        if i.iter().any(|&e| e != 0) {
            return None;
        }
        c.to_scalar()
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let dname = if self.model.euler() { "E" } else { "D" };
        let mut parts = Vec::new();
        for (i, c) in &self.terms {
            let ds: Vec<String> = i
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(t, &e)| if e == 1 { format!("{dname}{}", t + 1) } else { format!("{dname}{}^{e}", t + 1) })
                .collect();
            let cs = c.render();
            if ds.is_empty() {
                parts.push(format!("({cs})"));
            } else {
                parts.push(format!("({cs})*{}", ds.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for EulerOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for EulerOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EulerOp[{:?}]({})", self.model, self.render())
    }
}

/// A principal symbol: monomials in `lam_t` with (constant) coefficients.
#[derive(Clone, Debug)]
pub struct QPolyOverScalar(pub Vec<(Mono, Frac)>);

// ---------------------------------------------------------------------------
// Root functions.

fn zeta_mono(model: Model, lattice: &[i32], scale: i32) -> Mono {
    Mono::from_pairs(lattice.iter().enumerate().filter(|(_, &c)| c != 0).map(|(t, &c)| (model.var(t), c * scale)))
}

/// `(alpha,x)` in the affine model.
pub fn linear_form(model: Model, lattice: &[i32]) -> QPoly {
    QPoly::sum(lattice.iter().enumerate().filter(|(_, &c)| c != 0).map(|(t, &c)| QPoly::var(model.var(t)).scale(&Q::int(c as i64))))
}

/// `e^{(alpha,x)}` in the geometric model.
pub fn zeta(lattice: &[i32]) -> Frac {
    Frac::mono(zeta_mono(Model::Geometric, lattice, 1))
}

/// `f_alpha`: `1/2 coth((alpha,x)/2)`, resp. `1/(alpha,x)`.
pub fn f_alpha(model: Model, lattice: &[i32]) -> Frac {
    match model {
        Model::Geometric => {
            let m = zeta_mono(model, lattice, 1);
            let num = QPoly::mono(m.clone()).add(&QPoly::one());
            Frac::inv_binomial(&m, false).mul(&Frac::from_poly(num)).scale_q(&Q::frac(1, 2))
        }
        Model::Affine => Frac::inv_irreducible(&linear_form(model, lattice)),
    }
}

/// `phi_alpha = 1/4 - f_alpha^2`, resp. `-1/(alpha,x)^2`.
pub fn phi_alpha(model: Model, lattice: &[i32]) -> Frac {
    match model {
        Model::Geometric => {
            let m = zeta_mono(model, lattice, 1);
            Frac::inv_binomial(&m, false).pow(2).mul_mono(&m).neg()
        }
        Model::Affine => Frac::inv_irreducible(&linear_form(model, lattice)).pow(2).neg(),
    }
}

/// `coth(alpha,x)`, resp. `1/(alpha,x)`.
pub fn coth_alpha(model: Model, lattice: &[i32]) -> Frac {
    match model {
        Model::Geometric => {
            let m = zeta_mono(model, lattice, 2);
            let num = QPoly::mono(m.clone()).add(&QPoly::one());
            Frac::inv_binomial(&m, false).mul(&Frac::from_poly(num))
        }
        Model::Affine => Frac::inv_irreducible(&linear_form(model, lattice)),
    }
}

/// `1/sinh^2(alpha,x)`, resp. `1/(alpha,x)^2`.
pub fn inv_sinh2_alpha(model: Model, lattice: &[i32]) -> Frac {
    match model {
        Model::Geometric => {
            let m = zeta_mono(model, lattice, 2);
            Frac::inv_binomial(&m, false).pow(2).mul_mono(&m).scale_q(&Q::int(4))
        }
        Model::Affine => Frac::inv_irreducible(&linear_form(model, lattice)).pow(2),
    }
}

// ---------------------------------------------------------------------------
// Operators attached to a root system.

/// `d_v = sum_t (b_t, v) D_t`.
pub fn directional(g: &GRS, v: &GVec, model: Model) -> EulerOp {
    let coeffs = g.lattice_dual(v);
    let d = g.dim;
    let terms = coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(t, c)| {
        let mut i: Idx = SmallVec::from_elem(0, d);
        i[t] = 1;
        (i, Frac::from_scalar(c))
    });
    EulerOp::from_terms(model, d, terms)
}

pub fn directional_q(g: &GRS, v: &[Q], model: Model) -> EulerOp {
    directional(g, &GVec::from_q(v), model)
}

/// Deformed Laplacian `sum_{t,s} (b_t,b_s) D_t D_s`.
pub fn laplacian(g: &GRS, model: Model) -> EulerOp {
    let gram = g.lattice_gram();
    let d = g.dim;
    let mut terms = Vec::new();
    for t in 0..d {
        for s in 0..d {
            if gram[t][s].is_zero() {
                continue;
            }
            let mut i: Idx = SmallVec::from_elem(0, d);
            i[t] += 1;
            i[s] += 1;
            terms.push((i, Frac::from_scalar(&gram[t][s])));
        }
    }
    EulerOp::from_terms(model, d, terms)
}

fn double_root(r: &Root) -> Vec<Q> {
    r.v.iter().map(|x| x * &Q::int(2)).collect()
}

/// `-Delta_B + sum_{R+} m (m + 2 m_{2alpha} + 1) (alpha,alpha) / sinh^2(alpha,x)`.
pub fn build_schrodinger(g: &GRS, model: Model) -> EulerOp {
    let lap = laplacian(g, model).neg();
    lap.add(&EulerOp::mult(model, g.dim, Frac::sum(potential_pieces(g, model)))).unwrap()
}

fn potential_pieces(g: &GRS, model: Model) -> Vec<Frac> {
    g.positive_roots()
        .map(|r| {
            let m2 = g.mult_of(&double_root(r));
            let c = &(&r.mult * &(&(&r.mult + &(&m2 * &Scalar::int(2))) + &Scalar::one())) * &g.b(&r.v, &r.v);
            inv_sinh2_alpha(model, &r.lattice).mul(&Frac::from_scalar(&c))
        })
        .collect()
}

fn radial_pieces(g: &GRS, model: Model) -> Vec<(Frac, EulerOp)> {
    g.positive_roots()
        .map(|r| {
            let c = coth_alpha(model, &r.lattice).mul(&Frac::from_scalar(&(&r.mult * &Scalar::int(2))));
            (c, directional_q(g, &r.v, model))
        })
        .collect()
}

/// Radial gauge: `-Delta_B + 2 sum_{R+} m coth(alpha,x) d_alpha`.
pub fn build_radial(g: &GRS, model: Model) -> EulerOp {
    let pieces = radial_pieces(g, model);
    let lap = laplacian(g, model).neg();
    let mut items: Vec<(Frac, &EulerOp)> = vec![(Frac::one(), &lap)];
    for (c, d) in &pieces {
        items.push((c.clone(), d));
    }
    EulerOp::combine(model, g.dim, &items)
}

/// `Delta_B - 2 sum_{R+} m f_alpha d_alpha`. For A systems this is
/// `sum_{v in O} d_v^2/(v,v) - 2 sum m f d_alpha`; for BC types the orbit
/// `{+-e_i}` counts every direction twice, and `L_2` from the recurrence is
/// twice this operator.
pub fn build_l2_display(g: &GRS, model: Model) -> EulerOp {
    let lap = laplacian(g, model);
    let roots: Vec<&Root> = g.positive_roots().collect();
    let dirs: Vec<EulerOp> = roots.iter().map(|r| directional_q(g, &r.v, model)).collect();
    let mut items: Vec<(Frac, &EulerOp)> = vec![(Frac::one(), &lap)];
    for (r, dir) in roots.iter().zip(&dirs) {
        let c = f_alpha(model, &r.lattice).mul(&Frac::from_scalar(&(&r.mult * &Scalar::int(-2))));
        items.push((c, dir));
    }
    EulerOp::combine(model, g.dim, &items)
}

/// `h_t = D_t log psi0 = -sum_{R+} m_alpha c_t(alpha) coth(alpha,x)`.
pub fn log_derivatives(g: &GRS, model: Model) -> Vec<Frac> {
    (0..g.dim)
        .map(|t| {
            Frac::sum(g.positive_roots().filter(|r| r.lattice[t] != 0).map(|r| {
                let s = &r.mult * &Scalar::int(-(r.lattice[t] as i64));
                coth_alpha(model, &r.lattice).mul(&Frac::from_scalar(&s))
            }))
        })
        .collect()
}

/// Per-root pieces of `h_t`: `(t, -m_alpha c_t(alpha) coth(alpha,x))`.
fn log_derivative_pieces(g: &GRS, model: Model) -> Vec<Vec<Frac>> {
    (0..g.dim)
        .map(|t| {
            g.positive_roots()
                .filter(|r| r.lattice[t] != 0)
                .map(|r| {
                    let s = &r.mult * &Scalar::int(-(r.lattice[t] as i64));
                    coth_alpha(model, &r.lattice).mul(&Frac::from_scalar(&s))
                })
                .collect()
        })
        .collect()
}

/// `psi0^{-1} o A o psi0` with `psi0 = prod sinh^{-m}(alpha,x)` (or the
/// rational analogue): each `D_t` becomes `D_t + h_t`.
pub fn conjugate_by_psi0(g: &GRS, a: &EulerOp) -> EulerOp {
    if a.order() <= 2 {
        return conjugate_order2(g, a);
    }
    let model = a.model;
    let d = a.dim;
    let h = log_derivatives(g, model);
    let shifted: Vec<EulerOp> = (0..d)
        .map(|t| EulerOp::derivation(model, d, t).add(&EulerOp::mult(model, d, h[t].clone())).unwrap())
        .collect();
    let mut powers: HashMap<Idx, EulerOp> = HashMap::new();
    let zero: Idx = SmallVec::from_elem(0, d);
    powers.insert(zero, EulerOp::identity(model, d));
    let mut keys: Vec<&Idx> = a.terms.keys().collect();
    keys.sort_by_key(|i| i.iter().map(|&e| e as u32).sum::<u32>());
    for k in &keys {
        shifted_power(&shifted, &mut powers, k);
    }
    let items: Vec<(Frac, &EulerOp)> = a.terms.iter().map(|(i, c)| (c.clone(), &powers[i])).collect();
    EulerOp::combine(model, d, &items)
}

/// Second-order case, keeping every coefficient as a sum of per-root terms
/// until the final summation:
/// `a (D_t + h_t)(D_s + h_s) = a [D_t D_s + h_s D_t + h_t D_s + D_t(h_s) + h_t h_s]`.
fn conjugate_order2(g: &GRS, a: &EulerOp) -> EulerOp {
    let buckets = conjugate_order2_buckets(g, a);
    EulerOp::from_buckets(a.model, a.dim, buckets)
}

fn conjugate_order2_buckets(g: &GRS, a: &EulerOp) -> HashMap<Idx, Vec<Frac>> {
    let model = a.model;
    let d = a.dim;
    let pieces = log_derivative_pieces(g, model);
    let dpieces: Vec<Vec<Vec<Frac>>> =
        (0..d).map(|t| pieces.iter().map(|ps| ps.iter().map(|p| p.derive(model.var(t), model.euler())).collect()).collect()).collect();
    let mut buckets: HashMap<Idx, Vec<Frac>> = HashMap::new();
    let zero: Idx = SmallVec::from_elem(0, d);
    let unit = |t: usize| -> Idx {
        let mut i: Idx = SmallVec::from_elem(0, d);
        i[t] = 1;
        i
    };
    for (idx, c) in &a.terms {
        buckets.entry(idx.clone()).or_default().push(c.clone());
        let ts: Vec<usize> = idx.iter().enumerate().flat_map(|(t, &e)| std::iter::repeat_n(t, e as usize)).collect();
        match ts.as_slice() {
            [] => {}
            [t] => {
                for p in &pieces[*t] {
                    buckets.entry(zero.clone()).or_default().push(c.mul(p));
                }
            }
            [t, s] => {
                for p in &pieces[*s] {
                    buckets.entry(unit(*t)).or_default().push(c.mul(p));
                }
                for p in &pieces[*t] {
                    buckets.entry(unit(*s)).or_default().push(c.mul(p));
                }
                for p in &dpieces[*t][*s] {
                    buckets.entry(zero.clone()).or_default().push(c.mul(p));
                }
                for p in &pieces[*t] {
                    for q in &pieces[*s] {
                        buckets.entry(zero.clone()).or_default().push(c.mul(&p.mul(q)));
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    buckets
}

fn shifted_power(shifted: &[EulerOp], memo: &mut HashMap<Idx, EulerOp>, idx: &Idx) -> EulerOp {
    if let Some(v) = memo.get(idx) {
        return v.clone();
    }
    let t = idx.iter().position(|&e| e > 0).unwrap();
    let mut prev = idx.clone();
    prev[t] -= 1;
    let p = shifted_power(shifted, memo, &prev);
    let r = shifted[t].compose(&p).unwrap();
    memo.insert(idx.clone(), r.clone());
    r
}

/// Result of the gauge comparison.
#[derive(Clone, Debug)]
pub struct GaugeResult {
    /// `conjugate(schrodinger) - radial`, if it is a constant.
    pub constant: Option<Scalar>,
    pub rho_norm2: Scalar,
    /// `constant = sign * |rho|^2`, when it holds for `sign` in {+1, -1, 0}.
    pub sign: Option<i32>,
}

pub fn gauge_check(g: &GRS, model: Model) -> GaugeResult {
    // conj(-Delta) + V - (-Delta + 2 sum m coth d_alpha), assembled from
    // per-root pieces and summed once.
    let lap = laplacian(g, model);
    let mut buckets = conjugate_order2_buckets(g, &lap.neg());
    let zero: Idx = SmallVec::from_elem(0, g.dim);
    buckets.entry(zero).or_default().extend(potential_pieces(g, model));
    for (i, c) in lap.terms() {
        buckets.entry(i.clone()).or_default().push(c.clone());
    }
    for (c, dir) in radial_pieces(g, model) {
        for (i, dc) in dir.terms() {
            buckets.entry(i.clone()).or_default().push(c.mul(dc).neg());
        }
    }
    let diff = EulerOp::from_buckets(model, g.dim, buckets);
    let constant = diff.as_constant();
    let rho_norm2 = g.rho_norm2();
    let sign = constant.as_ref().and_then(|c| {
        if *c == rho_norm2 {
            Some(1)
        } else if *c == rho_norm2.neg() {
            Some(-1)
        } else if c.is_zero() {
            Some(0)
        } else {
            None
        }
    });
    GaugeResult { constant, rho_norm2, sign }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Family;

    fn q(n: i64) -> Q {
        Q::int(n)
    }

    #[test]
    fn leibniz_one_variable() {
        let m = Model::Geometric;
        let e = EulerOp::derivation(m, 1, 0);
        let z = EulerOp::mult(m, 1, Frac::var(m.var(0)));
        let prod = e.compose(&z).unwrap();
        let expect = z.compose(&e).unwrap().add(&z).unwrap();
        assert_eq!(prod, expect);
        assert_eq!(e.commutator(&z).unwrap(), z);
    }

    #[test]
    fn partials_commute() {
        let m = Model::Affine;
        let a = EulerOp::derivation(m, 2, 0);
        let b = EulerOp::derivation(m, 2, 1);
        assert!(a.commutator(&b).unwrap().is_zero());
        let id = EulerOp::identity(m, 2);
        assert_eq!(a.compose(&id).unwrap(), a);
    }

    #[test]
    fn directional_chain_factor() {
        let g = GRS::build(Family::A, 2, 2).unwrap();
        let d1 = directional_q(&g, &[q(1), q(0), q(0), q(0)], Model::Geometric);
        assert_eq!(d1, EulerOp::derivation(Model::Geometric, 4, 0));
        let d3 = directional_q(&g, &[q(0), q(0), q(1), q(0)], Model::Geometric);
        assert_eq!(d3, EulerOp::derivation(Model::Geometric, 4, 2).scale(&Scalar::k()));
    }

    #[test]
    fn f_phi_relations() {
        for (fam, n, m) in [(Family::A, 2, 1), (Family::BC, 1, 1), (Family::G12, 0, 0), (Family::AB13, 0, 0), (Family::D21, 0, 0)]
        {
            let g = GRS::build(fam, n, m).unwrap();
            for model in [Model::Geometric, Model::Affine] {
                let v = GVec((0..g.dim).map(|i| Scalar::int(i as i64 + 2)).collect());
                let dv = directional(&g, &v, model);
                for r in &g.roots {
                    let va = g.pairing(&v, &r.gvec(), crate::rootsys::Form::Deformed);
                    let f = f_alpha(model, &r.lattice);
                    let phi = phi_alpha(model, &r.lattice);
                    let lhs = dv.apply(&f);
                    assert_eq!(lhs, phi.mul(&Frac::from_scalar(&va)), "{} {:?}", g.name(), r.v);
                    let lhs = dv.apply(&phi);
                    let rhs = f.mul(&phi).mul(&Frac::from_scalar(&(&va * &Scalar::int(-2))));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn phi_is_quarter_minus_f_squared() {
        let c = [1, -1];
        let f = f_alpha(Model::Geometric, &c);
        let lhs = Frac::from_q(Q::frac(1, 4)).sub(&f.mul(&f));
        assert_eq!(lhs, phi_alpha(Model::Geometric, &c));
    }

    #[test]
    fn schrodinger_a10_at_k1() {
        let g = GRS::build(Family::A, 3, 0).unwrap();
        let h = build_schrodinger(&g, Model::Geometric).subst_params(&[(crate::exact::var::k(), Scalar::one())]);
        let zero: Idx = SmallVec::from_elem(0, 3);
        let pot = h.coeff(&zero);
        let expect = Frac::sum(g.positive_roots().map(|r| inv_sinh2_alpha(Model::Geometric, &r.lattice).scale_q(&q(4))));
        assert_eq!(pot, expect);
    }

    #[test]
    fn gauge_a11() {
        let g = GRS::build(Family::A, 1, 1).unwrap();
        let r = gauge_check(&g, Model::Geometric);
        assert_eq!(r.constant, Some((&Scalar::one() + &Scalar::k()).neg()));
        assert_eq!(r.sign, Some(-1));
        let r = gauge_check(&g, Model::Affine);
        assert_eq!(r.sign, Some(0));
    }

    #[test]
    fn conjugate_identity() {
        let g = GRS::build(Family::A, 2, 1).unwrap();
        let id = EulerOp::identity(Model::Geometric, 3);
        assert_eq!(conjugate_by_psi0(&g, &id), id);
    }

    #[test]
    fn l2_matches_radial_after_doubling() {
        let g = GRS::build(Family::A, 1, 1).unwrap();
        let l2 = build_l2_display(&g, Model::Geometric).doubled();
        let rad = build_radial(&g, Model::Geometric).scale(&Scalar::frac(-1, 4));
        assert_eq!(l2, rad);
    }
}
