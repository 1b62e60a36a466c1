//! Rational functions in coordinates with factored denominators.
//!
//! A [`Frac`] is `num / (den_param * prod f_i^{e_i})` where `num` is a Laurent
//! polynomial in coordinates and parameters, `den_param` is a monic polynomial
//! in parameters only, and the `f_i` are registered irreducible polynomials
//! (cyclotomic polynomials of Laurent monomials, or linear forms). Keeping the
//! denominator factored means no coordinate gcds are ever computed: a
//! canonical form only needs divisibility tests by known irreducibles.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use smallvec::SmallVec;

use super::gcd::{gcd, lcm, QPoly};
use super::poly::{Mono, Poly};
use super::rational::Q;
use super::scalar::Scalar;
use super::var::Var;

/// Provenance of a registered factor, needed for the doubling map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// `Phi_order(zeta^base)` with `base` primitive, first exponent positive.
    Cyclo { base: Mono, order: u32 },
    /// Any other irreducible (linear forms, shifted forms).
    Other,
}

#[derive(Debug)]
pub struct FactorData {
    id: u32,
    poly: QPoly,
    kind: FactorKind,
    coords: Vec<Var>,
    /// `v = coeff * mono` is a root, when the factor has that shape.
    root: Option<(Var, Q, Mono)>,
    /// Direction in coordinate space (lattice exponents of the base monomial,
    /// or coefficients of a linear form). Other factors get a private axis.
    dir: Vec<(u32, Q)>,
}

/// Handle to a registered irreducible factor. Compared by identity.
#[derive(Clone, Debug)]
pub struct Factor(Arc<FactorData>);

impl PartialEq for Factor {
    fn eq(&self, o: &Self) -> bool {
        self.0.id == o.0.id
    }
}
impl Eq for Factor {}
impl Hash for Factor {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.0.id.hash(h)
    }
}
impl PartialOrd for Factor {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Factor {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.id.cmp(&o.0.id)
    }
}

impl Factor {
    pub fn poly(&self) -> &QPoly {
        &self.0.poly
    }

    pub fn kind(&self) -> &FactorKind {
        &self.0.kind
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.0.coords.contains(&v)
    }

    /// Exact test of `self | p`.
    fn divides(&self, p: &QPoly) -> bool {
        if let Some((v, c, m)) = &self.0.root {
            return subst_root(p, *v, c, m).is_zero();
        }
        p.div_exact(&self.0.poly).is_some()
    }
}

/// Substitutes `v -> c * m` in a Laurent polynomial.
fn subst_root(p: &QPoly, v: Var, c: &Q, m: &Mono) -> QPoly {
    let mut cpow: HashMap<i32, (Q, Mono)> = HashMap::new();
    QPoly::from_terms(p.terms().iter().map(|(mono, coef)| {
        let e = mono.exp(v);
        if e == 0 {
            return (mono.clone(), coef.clone());
        }
        let (ce, me) = cpow
            .entry(e)
            .or_insert_with(|| {
                let ce = if e >= 0 { c.pow(e as u32) } else { c.recip().pow((-e) as u32) };
                (ce, m.pow(e))
            })
            .clone();
        (mono.restrict(|x| x != v).mul(&me), coef * &ce)
    }))
}

struct FactorTable {
    by_poly: HashMap<QPoly, Factor>,
    count: u32,
}

fn table() -> &'static RwLock<FactorTable> {
    static T: OnceLock<RwLock<FactorTable>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(FactorTable { by_poly: HashMap::new(), count: 0 }))
}

fn find_root(p: &QPoly) -> Option<(Var, Q, Mono)> {
    if p.len() != 2 {
        return None;
    }
    let (m1, c1) = &p.terms()[0];
    let (m2, c2) = &p.terms()[1];
    let try_side = |ma: &Mono, ca: &Q, mb: &Mono, cb: &Q| -> Option<(Var, Q, Mono)> {
        for &(v, e) in ma.pairs() {
            if e != 1 || !v.is_coord() || mb.exp(v) != 0 {
                continue;
            }
            let rest = ma.restrict(|x| x != v);
            if rest.vars().any(|x| !x.is_coord()) {
                continue;
            }
            // ca * v * rest + cb * mb = 0  =>  v = -(cb/ca) * mb / rest
            return Some((v, -(cb / ca), mb.div(&rest)));
        }
        None
    };
    try_side(m1, c1, m2, c2).or_else(|| try_side(m2, c2, m1, c1))
}

fn direction(poly: &QPoly, kind: &FactorKind, id: u32) -> Vec<(u32, Q)> {
    if let FactorKind::Cyclo { base, .. } = kind {
        return base.pairs().iter().map(|&(v, e)| (v.id() as u32, Q::int(e as i64))).collect();
    }
    let linear = poly.terms().iter().all(|(m, _)| m.degree() == 1 && m.pairs().len() == 1 && m.pairs()[0].0.is_coord());
    if linear {
        let mut d: Vec<(u32, Q)> = poly.terms().iter().map(|(m, c)| (m.pairs()[0].0.id() as u32, c.clone())).collect();
        d.sort_by_key(|x| x.0);
        return d;
    }
    vec![(1_000_000 + id, Q::one())]
}

/// Canonical key for the span of a set of sparse vectors (reduced row echelon form).
fn span_key(vecs: &[&Vec<(u32, Q)>]) -> Vec<Vec<(u32, Q)>> {
    let mut cols: Vec<u32> = vecs.iter().flat_map(|v| v.iter().map(|x| x.0)).collect();
    cols.sort_unstable();
    cols.dedup();
    let mut rows: Vec<Vec<Q>> = vecs
        .iter()
        .map(|v| {
            let mut r = vec![Q::zero(); cols.len()];
            for (k, q) in v.iter() {
                r[cols.binary_search(k).unwrap()] = q.clone();
            }
            r
        })
        .collect();
    let mut out_rows = 0;
    for c in 0..cols.len() {
        let Some(p) = (out_rows..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(out_rows, p);
        let inv = rows[out_rows][c].recip();
        for x in rows[out_rows].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != out_rows && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot = rows[out_rows].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x = &*x - &(y * &f);
                }
            }
        }
        out_rows += 1;
    }
    rows.truncate(out_rows);
    rows.into_iter()
        .map(|r| r.into_iter().enumerate().filter(|(_, q)| !q.is_zero()).map(|(i, q)| (cols[i], q)).collect())
        .collect()
}

fn register(poly: QPoly, kind: FactorKind) -> Factor {
    if let Some(f) = table().read().unwrap().by_poly.get(&poly) {
        return f.clone();
    }
    let mut t = table().write().unwrap();
    if let Some(f) = t.by_poly.get(&poly) {
        return f.clone();
    }
    let coords = poly.vars().into_iter().filter(|v| v.is_coord()).collect();
    let root = find_root(&poly);
    let id = t.count;
    t.count += 1;
    let dir = direction(&poly, &kind, id);
    let f = Factor(Arc::new(FactorData { id, poly: poly.clone(), kind, coords, root, dir }));
    t.by_poly.insert(poly, f.clone());
    f
}

/// Splits an irreducible Laurent polynomial into a unit part and its
/// canonical (registered) form: `p = c * mono * param_content * canonical`.
fn normalize_factor(p: &QPoly, kind: FactorKind) -> (Q, Mono, QPoly, Factor) {
    assert!(!p.is_zero(), "zero factor");
    let mono = p.min_mono();
    let p1 = if mono.is_one() { p.clone() } else { p.mul_mono(&mono.inv()) };
    let pc = super::gcd::content_in(&p1, |v| v.is_coord());
    let p2 = if pc.is_one() { p1 } else { p1.div_exact(&pc).expect("content divides") };
    let lc = p2.lead_coeff();
    let p3 = p2.scale(&lc.recip());
    let kind = match kind {
        FactorKind::Cyclo { .. } if !pc.is_one() => FactorKind::Other,
        k => k,
    };
    let f = register(p3, kind);
    (lc, mono, pc, f)
}

/// Cyclotomic polynomial `Phi_n(y)` in a fresh parameter-free variable.
pub fn cyclotomic(n: u32, y: Var) -> QPoly {
    static CACHE: OnceLock<RwLock<HashMap<u32, QPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let helper = Var::coord("_cy");
    let cached = cache.read().unwrap().get(&n).cloned();
    let base = if let Some(p) = cached {
        p
    } else {
        let mut p = QPoly::mono(Mono::var_pow(helper, n as i32)).sub(&QPoly::one());
        for d in 1..n {
            if n % d == 0 {
                p = p.div_exact(&cyclotomic(d, helper)).expect("cyclotomic divides");
            }
        }
        cache.write().unwrap().insert(n, p.clone());
        p
    };
    if y == helper {
        base
    } else {
        base.substitute(&[(helper, QPoly::var(y))])
    }
}

fn euler_phi(n: u32) -> i32 {
    (1..=n).filter(|&d| num_integer::Integer::gcd(&d, &n) == 1).count() as i32
}

/// `Phi_n(zeta^c)` as a Laurent polynomial in the coordinates.
fn cyclotomic_at(n: u32, c: &Mono) -> QPoly {
    let helper = Var::coord("_cy");
    let p = cyclotomic(n, helper);
    QPoly::from_terms(p.terms().iter().map(|(m, coef)| (c.pow(m.exp(helper)), coef.clone())))
}

/// Splits a Laurent monomial `zeta^c` (coordinates only) as `(g, c0)` with
/// `c = g * c0`, `g` a nonzero integer and `c0` primitive with its first
/// exponent positive.
pub fn primitive_base(c: &Mono) -> (i32, Mono) {
    assert!(!c.is_one(), "trivial monomial has no primitive base");
    let mut g = 0i32;
    for &(_, e) in c.pairs() {
        g = num_integer::Integer::gcd(&g, &e);
    }
    if c.pairs()[0].1 < 0 {
        g = -g;
    }
    let c0 = Mono::from_pairs(c.pairs().iter().map(|&(v, e)| (v, e / g)));
    (g, c0)
}

/// Irreducible factors `(Phi_e(zeta^{c0}), kind)` of `zeta^c - 1` (or `+ 1`).
pub fn binomial_factors(c: &Mono, plus: bool) -> Vec<(QPoly, FactorKind)> {
    let (g, c0) = primitive_base(c);
    let g = g.unsigned_abs();
    let orders: Vec<u32> = if plus {
        (1..=2 * g).filter(|e| (2 * g) % e == 0 && g % e != 0).collect()
    } else {
        (1..=g).filter(|e| g % e == 0).collect()
    };
    orders
        .into_iter()
        .map(|e| (cyclotomic_at(e, &c0), FactorKind::Cyclo { base: c0.clone(), order: e }))
        .collect()
}

type Den = SmallVec<[(Factor, u32); 4]>;

/// Rational function with factored denominator; always canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac {
    num: QPoly,
    dp: QPoly,
    den: Den,
}

impl Default for Frac {
    fn default() -> Self {
        Frac::zero()
    }
}

fn merge_den(a: &Den, b: &Den, f: impl Fn(u32, u32) -> u32) -> Den {
    let mut out = Den::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let c = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match c {
            Ordering::Less => {
                out.push((a[i].0.clone(), f(a[i].1, 0)));
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0.clone(), f(0, b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0.clone(), f(a[i].1, b[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out.retain(|p| p.1 > 0);
    out
}

fn den_exp(d: &Den, f: &Factor) -> u32 {
    d.iter().find(|p| &p.0 == f).map_or(0, |p| p.1)
}

/// Removes from `num / dp` the common parameter gcd.
fn cancel_params(num: &mut QPoly, dp: &mut QPoly) {
    if dp.is_constant() || num.is_zero() {
        return;
    }
    let mut g = dp.clone();
    for (_, c) in num.collect_in(|v| v.is_coord()) {
        g = gcd(&g, &c);
        if g.is_constant() {
            return;
        }
    }
    *num = num.div_exact(&g).expect("gcd divides");
    *dp = dp.div_exact(&g).expect("gcd divides");
}

fn monic_dp(num: &mut QPoly, dp: &mut QPoly) {
    let lc = dp.lead_coeff();
    if !lc.is_one() {
        let inv = lc.recip();
        *num = num.scale(&inv);
        *dp = dp.scale(&inv);
    }
}

impl Frac {
    pub fn zero() -> Frac {
        Frac { num: QPoly::zero(), dp: QPoly::one(), den: Den::new() }
    }

    pub fn one() -> Frac {
        Self::from_poly(QPoly::one())
    }

    pub fn from_q(q: Q) -> Frac {
        Self::from_poly(QPoly::constant(q))
    }

    pub fn int(n: i64) -> Frac {
        Self::from_q(Q::int(n))
    }

    pub fn from_poly(p: QPoly) -> Frac {
        Frac { num: p, dp: QPoly::one(), den: Den::new() }
    }

    pub fn var(v: Var) -> Frac {
        Self::from_poly(QPoly::var(v))
    }

    pub fn mono(m: Mono) -> Frac {
        Self::from_poly(QPoly::mono(m))
    }

    pub fn from_scalar(s: &Scalar) -> Frac {
        Frac { num: s.num().clone(), dp: s.den().clone(), den: Den::new() }
    }

    /// `num / prod p_i^{e_i}` for irreducible Laurent polynomials `p_i`
    /// (irreducibility is the caller's responsibility).
    pub fn over(num: QPoly, factors: &[(QPoly, FactorKind, u32)]) -> Frac {
        let mut num = num;
        let mut dp = QPoly::one();
        let mut den = Den::new();
        for (p, kind, e) in factors {
            if *e == 0 {
                continue;
            }
            let (c, m, pc, f) = normalize_factor(p, kind.clone());
            num = num.mul_term(&m.pow(-(*e as i32)), &c.recip().pow(*e));
            if !pc.is_one() {
                dp = dp.mul(&pc.pow(*e));
            }
            match den.iter_mut().find(|x| x.0 == f) {
                Some(x) => x.1 += e,
                None => den.push((f, *e)),
            }
        }
        den.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out = Frac { num, dp, den };
        out.normalize_full();
        out
    }

    /// `1 / (zeta^c - 1)`, or `1 / (zeta^c + 1)` when `plus`.
    pub fn inv_binomial(c: &Mono, plus: bool) -> Frac {
        let facs = binomial_factors(c, plus);
        let target = QPoly::mono(c.clone()).add(&QPoly::constant(if plus { Q::one() } else { -Q::one() }));
        let mut prod = QPoly::one();
        for (p, _) in &facs {
            prod = prod.mul(p);
        }
        let unit = target.div_exact(&prod).expect("binomial factorization");
        assert_eq!(unit.len(), 1, "binomial unit is a monomial");
        let (um, uc) = unit.terms()[0].clone();
        let fs: Vec<(QPoly, FactorKind, u32)> = facs.into_iter().map(|(p, k)| (p, k, 1)).collect();
        Frac::over(QPoly::term(um.inv(), uc.recip()), &fs)
    }

    /// `1 / l` for an irreducible polynomial `l` (a linear form, say).
    pub fn inv_irreducible(l: &QPoly) -> Frac {
        Frac::over(QPoly::one(), &[(l.clone(), FactorKind::Other, 1)])
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den_param(&self) -> &QPoly {
        &self.dp
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (&Factor, u32)> {
        self.den.iter().map(|(f, e)| (f, *e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.dp.is_one() && self.num.is_one()
    }

    /// The value as a scalar, if no coordinate appears.
    pub fn to_scalar(&self) -> Option<Scalar> {
        if !self.den.is_empty() || self.num.vars().iter().any(|v| v.is_coord()) {
            return None;
        }
        Some(Scalar::new(self.num.clone(), self.dp.clone()).expect("nonzero denominator"))
    }

    /// Full denominator as a polynomial.
    pub fn den_poly(&self) -> QPoly {
        let mut d = self.dp.clone();
        for (f, e) in &self.den {
            d = d.mul(&f.poly().pow(*e));
        }
        d
    }

    fn normalize_full(&mut self) {
        if self.num.is_zero() {
            *self = Frac::zero();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 && f.divides(&self.num) {
                self.num = self.num.div_exact(f.poly()).expect("divisible");
                *e -= 1;
            }
        }
        self.den.retain(|p| p.1 > 0);
        cancel_params(&mut self.num, &mut self.dp);
        monic_dp(&mut self.num, &mut self.dp);
    }

    pub fn neg(&self) -> Frac {
        Frac { num: self.num.neg(), dp: self.dp.clone(), den: self.den.clone() }
    }

    pub fn scale_q(&self, c: &Q) -> Frac {
        if c.is_zero() {
            return Frac::zero();
        }
        Frac { num: self.num.scale(c), dp: self.dp.clone(), den: self.den.clone() }
    }

    pub fn mul_mono(&self, m: &Mono) -> Frac {
        Frac { num: self.num.mul_mono(m), dp: self.dp.clone(), den: self.den.clone() }
    }

    pub fn mul_scalar(&self, s: &Scalar) -> Frac {
        self.mul(&Frac::from_scalar(s))
    }

    pub fn add(&self, o: &Frac) -> Frac {
        Frac::sum([self.clone(), o.clone()])
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        Frac::sum([self.clone(), o.neg()])
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        if self.is_zero() || o.is_zero() {
            return Frac::zero();
        }
        let mut na = self.num.clone();
        let mut nb = o.num.clone();
        let mut den = merge_den(&self.den, &o.den, |a, b| a + b);
        // Cancel each numerator against the other operand's denominator.
        for (f, e) in den.iter_mut() {
            let ea = den_exp(&self.den, f);
            let eb = den_exp(&o.den, f);
            if ea == 0 {
                let mut left = eb;
                while left > 0 && f.divides(&na) {
                    na = na.div_exact(f.poly()).unwrap();
                    left -= 1;
                    *e -= 1;
                }
            } else if eb == 0 {
                let mut left = ea;
                while left > 0 && f.divides(&nb) {
                    nb = nb.div_exact(f.poly()).unwrap();
                    left -= 1;
                    *e -= 1;
                }
            }
        }
        den.retain(|p| p.1 > 0);
        let (mut da, mut db) = (self.dp.clone(), o.dp.clone());
        if !db.is_constant() {
            cancel_params(&mut na, &mut db);
        }
        if !da.is_constant() {
            cancel_params(&mut nb, &mut da);
        }
        let mut num = na.mul(&nb);
        let mut dp = da.mul(&db);
        monic_dp(&mut num, &mut dp);
        Frac { num, dp, den }
    }

    pub fn pow(&self, e: u32) -> Frac {
        let mut acc = Frac::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Sum over a common denominator. Only factors whose maximal exponent is
    /// attained by at least two summands can cancel.
    pub fn sum<I: IntoIterator<Item = Frac>>(it: I) -> Frac {
        let items: Vec<Frac> = it.into_iter().filter(|f| !f.is_zero()).collect();
        if items.len() >= 4 {
            // Summands whose denominators span the same coordinate subspace are
            // added first; sums that are identically constant on each such
            // subspace then never meet a large common denominator.
            let mut groups: HashMap<Vec<Vec<(u32, Q)>>, Vec<Frac>> = HashMap::new();
            for it in items.iter() {
                let dirs: Vec<&Vec<(u32, Q)>> = it.den.iter().map(|(f, _)| &f.0.dir).collect();
                groups.entry(span_key(&dirs)).or_default().push(it.clone());
            }
            if groups.len() > 1 && groups.len() < items.len() {
                let mut keys: Vec<_> = groups.keys().cloned().collect();
                keys.sort();
                let partial: Vec<Frac> = keys.iter().map(|k| Frac::sum_flat(groups.remove(k).unwrap())).collect();
                return Frac::sum(partial);
            }
        }
        Frac::sum_flat(items)
    }

    fn sum_flat(items: Vec<Frac>) -> Frac {
        let items: Vec<Frac> = items.into_iter().filter(|f| !f.is_zero()).collect();
        match items.len() {
            0 => return Frac::zero(),
            1 => return items.into_iter().next().unwrap(),
            _ => {}
        }
        let mut maxden = Den::new();
        for it in &items {
            maxden = merge_den(&maxden, &it.den, |a, b| a.max(b));
        }
        let mut dp = items[0].dp.clone();
        for it in &items[1..] {
            if it.dp != dp {
                dp = lcm(&dp, &it.dp);
            }
        }
        let mut hits: HashMap<u32, u32> = HashMap::new();
        let mut pows: HashMap<(u32, u32), QPoly> = HashMap::new();
        let mut terms = Vec::with_capacity(items.len());
        for it in &items {
            let mut n = it.num.clone();
            for (f, emax) in &maxden {
                let e = den_exp(&it.den, f);
                if e == *emax {
                    *hits.entry(f.0.id).or_insert(0) += 1;
                } else {
                    let d = emax - e;
                    let p = pows.entry((f.0.id, d)).or_insert_with(|| f.poly().pow(d)).clone();
                    n = n.mul(&p);
                }
            }
            if it.dp != dp {
                let m = dp.div_exact(&it.dp).expect("lcm divisible");
                n = n.mul(&m);
            }
            terms.push(n);
        }
        let mut num = QPoly::sum(terms);
        if num.is_zero() {
            return Frac::zero();
        }
        let mut den = maxden;
        for (f, e) in den.iter_mut() {
            if hits.get(&f.0.id).copied().unwrap_or(0) < 2 {
                continue;
            }
            while *e > 0 && f.divides(&num) {
                num = num.div_exact(f.poly()).unwrap();
                *e -= 1;
            }
        }
        den.retain(|p| p.1 > 0);
        cancel_params(&mut num, &mut dp);
        monic_dp(&mut num, &mut dp);
        Frac { num, dp, den }
    }

    /// Applies the derivation `D` with `D(p) = deriv(p)` on polynomials.
    /// `euler` selects `v d/dv` (true) or `d/dv` (false).
    pub fn derive(&self, v: Var, euler: bool) -> Frac {
        let d = |p: &QPoly| if euler { p.euler(v) } else { p.diff(v) };
        let active: Vec<(usize, &Factor, u32)> =
            self.den.iter().enumerate().filter(|(_, (f, _))| f.depends_on(v)).map(|(i, (f, e))| (i, f, *e)).collect();
        if active.is_empty() {
            let mut num = d(&self.num);
            if num.is_zero() {
                return Frac::zero();
            }
            let mut dp = self.dp.clone();
            cancel_params(&mut num, &mut dp);
            monic_dp(&mut num, &mut dp);
            return Frac { num, dp, den: self.den.clone() };
        }
        // D(N / prod f^e) = [D(N) prod f - N sum e_f D(f) prod_{g != f} g] / prod f^{e+1}
        let polys: Vec<&QPoly> = active.iter().map(|a| a.1.poly()).collect();
        let mut prod_all = QPoly::one();
        for p in &polys {
            prod_all = prod_all.mul(p);
        }
        let mut num = d(&self.num).mul(&prod_all);
        for (j, (_, f, e)) in active.iter().enumerate() {
            let mut others = QPoly::one();
            for (i, p) in polys.iter().enumerate() {
                if i != j {
                    others = others.mul(p);
                }
            }
            let df = d(f.poly());
            num = num.sub(&self.num.mul(&df).mul(&others).scale(&Q::int(*e as i64)));
        }
        if num.is_zero() {
            return Frac::zero();
        }
        let mut den = self.den.clone();
        for (i, _, _) in &active {
            den[*i].1 += 1;
        }
        let mut dp = self.dp.clone();
        cancel_params(&mut num, &mut dp);
        monic_dp(&mut num, &mut dp);
        Frac { num, dp, den }
    }

    /// `1 / f^e` for a registered factor.
    fn factor_inv(f: &Factor, e: u32) -> Frac {
        Frac { num: QPoly::one(), dp: QPoly::one(), den: smallvec::smallvec![(f.clone(), e)] }
    }

    /// Inverse of a single-term Laurent polynomial.
    fn term_inv(p: &QPoly) -> Frac {
        let (m, c) = &p.terms()[0];
        Frac::from_poly(QPoly::term(m.inv(), c.recip()))
    }

    /// Substitutes scalars for parameters and renormalizes.
    pub fn subst_params(&self, bindings: &[(Var, Scalar)]) -> Frac {
        let num = Frac::subst_poly_params(&self.num, bindings);
        let dp = super::scalar::subst_poly(&self.dp, bindings);
        let mut acc = num.mul(&Frac::from_scalar(&dp.inv().expect("parameter pinned to a pole")));
        for (f, e) in &self.den {
            let has_params = f.poly().vars().iter().any(|v| !v.is_coord());
            if !has_params {
                acc = acc.mul(&Frac::factor_inv(f, *e));
                continue;
            }
            let fs = Frac::subst_poly_params(f.poly(), bindings);
            assert!(!fs.is_zero(), "factor pinned to zero");
            let fnum = fs.num.clone();
            let inv = if fnum.len() == 1 {
                Frac::term_inv(&fnum).pow(*e)
            } else {
                // A linear form stays irreducible under specialization.
                Frac::over(QPoly::one(), &[(fnum, FactorKind::Other, *e)])
            };
            acc = acc.mul(&inv).mul(&Frac::from_poly(fs.dp.pow(*e)));
        }
        acc
    }

    fn subst_poly_params(p: &QPoly, bindings: &[(Var, Scalar)]) -> Frac {
        let parts = p.collect_in(|v| v.is_coord());
        Frac::sum(parts.into_iter().map(|(m, c)| {
            let s = super::scalar::subst_poly(&c, bindings);
            Frac::from_scalar(&s).mul_mono(&m)
        }))
    }

    /// Applies `zeta_t -> zeta_t^2` to every coordinate (geometric model).
    pub fn double(&self) -> Frac {
        let dbl = |m: &Mono| Mono::from_pairs(m.pairs().iter().map(|&(v, e)| (v, if v.is_coord() { 2 * e } else { e })));
        let mut acc = Frac { num: self.num.map_monos(dbl), dp: self.dp.clone(), den: Den::new() };
        for (f, e) in &self.den {
            let FactorKind::Cyclo { base, order } = f.kind() else {
                panic!("doubling needs cyclotomic factors");
            };
            // Phi_n(y^2) = Phi_{2n}(y) for even n, Phi_n(y) Phi_{2n}(y) for odd n.
            let mut orders = vec![2 * order];
            if order % 2 == 1 {
                orders.push(*order);
            }
            let doubled = f.poly().map_monos(dbl);
            let mut prod = QPoly::one();
            let mut facs = Vec::new();
            for o in orders {
                let p = cyclotomic_at(o, base);
                prod = prod.mul(&p);
                facs.push((p, FactorKind::Cyclo { base: base.clone(), order: o }, *e));
            }
            let unit = doubled.div_exact(&prod).expect("cyclotomic doubling");
            assert_eq!(unit.len(), 1);
            acc = acc.mul(&Frac::over(QPoly::one(), &facs)).mul(&Frac::term_inv(&unit).pow(*e));
        }
        acc
    }

    /// Applies a monomial map on coordinates (each coordinate to a Laurent
    /// monomial times a parameter monomial coefficient), used by shift
    /// operators. Denominator factors are re-registered as irreducibles.
    pub fn subst_coords(&self, bindings: &[(Var, QPoly)]) -> Frac {
        let num = self.num.substitute(bindings);
        let mut facs = Vec::new();
        for (f, e) in &self.den {
            facs.push((f.poly().substitute(bindings), FactorKind::Other, *e));
        }
        Frac::over(num, &facs).mul(&Frac::from_scalar(&Scalar::new(QPoly::one(), self.dp.clone()).unwrap()))
    }

    /// Canonical text: `num`, or `(num)/(den)` with factors sorted by polynomial.
    pub fn render(&self) -> String {
        if self.den.is_empty() && self.dp.is_one() {
            return self.num.render();
        }
        let mut parts: Vec<(QPoly, u32)> = self.den.iter().map(|(f, e)| (f.poly().clone(), *e)).collect();
        parts.sort();
        let mut d = Vec::new();
        if !self.dp.is_one() {
            d.push(format!("({})", self.dp));
        }
        for (p, e) in parts {
            if e == 1 {
                d.push(format!("({p})"));
            } else {
                d.push(format!("({p})^{e}"));
            }
        }
        if d.len() == 1 {
            format!("({})/{}", self.num, d[0])
        } else {
            format!("({})/({})", self.num, d.join("*"))
        }
    }

    /// Whether any coordinate appears.
    pub fn is_coordinate_free(&self) -> bool {
        self.den.is_empty() && !self.num.vars().iter().any(|v| v.is_coord())
    }

    /// Total degree in coordinates of numerator minus denominator.
    pub fn degree_balance(&self) -> i32 {
        let dn = self.num.terms().iter().map(|(m, _)| m.restrict(|v| v.is_coord()).degree()).max().unwrap_or(0);
        let dd: i32 = self.den.iter().map(|(f, e)| f.poly().degree() * *e as i32).sum();
        dn - dd
    }
}

impl Ord for Frac {
    fn cmp(&self, o: &Self) -> Ordering {
        self.render().cmp(&o.render())
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Euler characteristic helper kept for tests of the cyclotomic tables.
pub fn cyclotomic_degree(n: u32) -> i32 {
    euler_phi(n)
}

pub type LaurentPoly = Poly<Q>;

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Var {
        Var::coord("z1")
    }

    #[test]
    fn binomial_quotient_is_zero() {
        // (z^2 - 1)/(z - 1) - (z + 1) == 0
        let zz = QPoly::var(z());
        let a = Frac::from_poly(zz.pow(2).sub(&QPoly::one())).mul(&Frac::inv_binomial(&Mono::var(z()), false));
        let b = Frac::from_poly(zz.add(&QPoly::one()));
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn coth_like_is_nonzero() {
        let zz = QPoly::var(z());
        let f = Frac::from_poly(zz.add(&QPoly::one())).mul(&Frac::inv_binomial(&Mono::var(z()), false));
        assert!(!f.is_zero());
    }

    #[test]
    fn cyclotomic_degrees() {
        let y = Var::coord("_cy");
        for n in 1..=12u32 {
            assert_eq!(cyclotomic(n, y).degree(), cyclotomic_degree(n));
        }
    }

    #[test]
    fn inverse_monomial_binomial() {
        // 1/(z^{-1} - 1) = -z/(z - 1)
        let a = Frac::inv_binomial(&Mono::var_pow(z(), -1), false);
        let b = Frac::mono(Mono::var(z())).neg().mul(&Frac::inv_binomial(&Mono::var(z()), false));
        assert_eq!(a, b);
    }

    #[test]
    fn derivation_matches_quotient_rule() {
        // E (1/(z-1)) = -z/(z-1)^2
        let f = Frac::inv_binomial(&Mono::var(z()), false);
        let d = f.derive(z(), true);
        let expect = Frac::mono(Mono::var(z())).neg().mul(&f).mul(&f);
        assert_eq!(d, expect);
    }

    #[test]
    fn doubling_splits_factor() {
        let f = Frac::inv_binomial(&Mono::var(z()), false).double();
        let g = Frac::inv_binomial(&Mono::var_pow(z(), 2), false);
        assert_eq!(f, g);
    }
}
