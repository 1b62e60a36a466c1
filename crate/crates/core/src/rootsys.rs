//! Generalized root systems with admissible deformed forms and multiplicities.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{Q, Scalar, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    BC,
    B,
    C,
    C0,
    D,
    AB13,
    G12,
    D21,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        Some(match s.to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "BC" => Family::BC,
            "B" => Family::B,
            "C" => Family::C,
            "C0" => Family::C0,
            "D" => Family::D,
            "AB13" | "AB" | "F4" => Family::AB13,
            "G12" | "G" | "G3" => Family::G12,
            "D21" => Family::D21,
            _ => return None,
        })
    }

    /// A or a BC-type family (the systems with a homogeneous orbit).
    pub fn is_classical(self) -> bool {
        !matches!(self, Family::AB13 | Family::G12 | Family::D21)
    }

    pub fn is_bc_type(self) -> bool {
        matches!(self, Family::BC | Family::B | Family::C | Family::C0 | Family::D)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("invalid sizes for {0:?}: n={1}, m={2}")]
    InvalidSizes(Family, usize, usize),
    #[error("reflection in an isotropic vector")]
    Isotropic,
    #[error("no homogeneous orbit for exceptional family {0:?}")]
    NoOrbit(Family),
    #[error("vector is not in the homogeneous orbit")]
    NotInOrbit,
}

/// Which bilinear form to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Deformed,
    Euclidean,
}

/// Coordinate vector over [`Scalar`] in the ambient basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GVec(pub Vec<Scalar>);

impl GVec {
    pub fn zero(d: usize) -> GVec {
        GVec(vec![Scalar::zero(); d])
    }

    pub fn basis(d: usize, i: usize) -> GVec {
        let mut v = GVec::zero(d);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_q(v: &[Q]) -> GVec {
        GVec(v.iter().map(|q| Scalar::from_q(q.clone())).collect())
    }

    pub fn from_ints(v: &[i64]) -> GVec {
        GVec(v.iter().map(|&q| Scalar::int(q)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, o: &GVec) -> GVec {
        GVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &GVec) -> GVec {
        GVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Scalar) -> GVec {
        GVec(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> GVec {
        GVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    /// Rational coordinates, when parameter-free.
    pub fn to_q(&self) -> Option<Vec<Q>> {
        self.0.iter().map(|s| s.to_q()).collect()
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|s| s.render()).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for GVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Debug)]
pub struct Root {
    /// Ambient coordinates.
    pub v: Vec<Q>,
    pub imaginary: bool,
    pub mult: Scalar,
    pub positive: bool,
    /// Integer coordinates in the lattice basis.
    pub lattice: Vec<i32>,
}

impl Root {
    pub fn gvec(&self) -> GVec {
        GVec::from_q(&self.v)
    }
}

/// A generalized root system with admissible deformation data.
#[derive(Clone, Debug)]
pub struct GRS {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    pub roots: Vec<Root>,
    /// Deformed form `B` in the ambient basis.
    pub form: Vec<Vec<Scalar>>,
    /// Lattice basis vectors (ambient coordinates).
    pub lattice_basis: Vec<Vec<Q>>,
    /// Parameters the data depends on.
    pub params: Vec<Var>,
    /// Block of each ambient coordinate (0 or 1) for classical systems.
    pub blocks: Vec<u8>,
}

fn q(n: i64) -> Q {
    Q::int(n)
}

fn first_nonzero_positive(v: &[Q]) -> bool {
    v.iter().find(|c| !c.is_zero()).is_some_and(|c| !c.is_negative())
}

/// Solves for integer lattice coordinates of `v` in `basis` (square, invertible).
fn lattice_coords(basis: &[Vec<Q>], v: &[Q]) -> Vec<i32> {
    let d = basis.len();
    // Gaussian elimination over Q on the transpose system.
    let mut a: Vec<Vec<Q>> = (0..d).map(|i| (0..d).map(|j| basis[j][i].clone()).collect()).collect();
    let mut b: Vec<Q> = v.to_vec();
    for c in 0..d {
        let p = (c..d).find(|&r| !a[r][c].is_zero()).expect("lattice basis is invertible");
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].recip();
        for j in 0..d {
            a[c][j] = &a[c][j] * &inv;
        }
        b[c] = &b[c] * &inv;
        for r in 0..d {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..d {
                    let t = &a[c][j] * &f;
                    a[r][j] = &a[r][j] - &t;
                }
                let t = &b[c] * &f;
                b[r] = &b[r] - &t;
            }
        }
    }
    b.iter()
        .map(|x| {
            assert!(x.is_integer(), "root not in the lattice");
            x.to_i64().expect("small lattice coordinate") as i32
        })
        .collect()
}

/// Parameters of a BC-type system.
#[derive(Clone, Debug)]
pub struct BcParams {
    pub p: Scalar,
    pub q: Scalar,
}

impl BcParams {
    pub fn symbolic() -> BcParams {
        BcParams { p: Scalar::param("p"), q: Scalar::param("q") }
    }

    /// `r = p / k`.
    pub fn r(&self) -> Scalar {
        &self.p / &Scalar::k()
    }

    /// `s = (2q + 1 - k) / (2k)`.
    pub fn s(&self) -> Scalar {
        let k = Scalar::k();
        (&(&self.q * &Scalar::int(2)) + &Scalar::one() - k.clone()) / (&k * &Scalar::int(2))
    }
}

impl GRS {
    /// Builds a system. For `A`, `n` and `m` are the block sizes (so
    /// `build(A, 2, 1)` is A(1,0) with three ambient coordinates).
    pub fn build(family: Family, n: usize, m: usize) -> Result<GRS, RootError> {
        match family {
            Family::A => {
                if n + m < 1 {
                    return Err(RootError::InvalidSizes(family, n, m));
                }
                Ok(Self::build_a(n, m))
            }
            Family::BC => Self::build_bc_variant(family, n, m, BcParams::symbolic()),
            Family::B => {
                Self::build_bc_variant(family, n, m, BcParams { p: Scalar::param("p"), q: Scalar::zero() })
            }
            Family::C => {
                Self::build_bc_variant(family, n, m, BcParams { p: Scalar::zero(), q: Scalar::param("q") })
            }
            Family::D => {
                if n < 2 {
                    return Err(RootError::InvalidSizes(family, n, m));
                }
                Self::build_bc_variant(family, n, m, BcParams { p: Scalar::zero(), q: Scalar::zero() })
            }
            Family::C0 => {
                if n != 1 && n != 0 {
                    return Err(RootError::InvalidSizes(family, n, m));
                }
                Self::build_bc_variant(family, 1, m, BcParams { p: Scalar::zero(), q: Scalar::zero() })
            }
            Family::AB13 => Ok(Self::build_ab13()),
            Family::G12 => Ok(Self::build_g12()),
            Family::D21 => Ok(Self::build_d21()),
        }
    }

    fn diag_form(n: usize, m: usize) -> Vec<Vec<Scalar>> {
        let d = n + m;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i != j {
                            Scalar::zero()
                        } else if i < n {
                            Scalar::one()
                        } else {
                            Scalar::k()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn standard_basis(d: usize) -> Vec<Vec<Q>> {
        (0..d).map(|i| (0..d).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect()
    }

    fn finish(
        family: Family,
        n: usize,
        m: usize,
        form: Vec<Vec<Scalar>>,
        lattice_basis: Vec<Vec<Q>>,
        raw: Vec<(Vec<Q>, bool, Scalar)>,
        params: Vec<Var>,
        blocks: Vec<u8>,
    ) -> GRS {
        let dim = form.len();
        let roots = raw
            .into_iter()
            .filter(|(_, _, mult)| !mult.is_zero())
            .map(|(v, imaginary, mult)| {
                let lattice = lattice_coords(&lattice_basis, &v);
                let positive = first_nonzero_positive(&v);
                Root { v, imaginary, mult, positive, lattice }
            })
            .collect();
        GRS { family, n, m, dim, roots, form, lattice_basis, params, blocks }
    }

    fn build_a(n: usize, m: usize) -> GRS {
        let d = n + m;
        let k = Scalar::k();
        let kinv = k.inv().unwrap();
        let mut raw = Vec::new();
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let mut v = vec![q(0); d];
                v[i] = q(1);
                v[j] = q(-1);
                let (imag, mult) = match (i < n, j < n) {
                    (true, true) => (false, k.clone()),
                    (false, false) => (false, kinv.clone()),
                    _ => (true, Scalar::one()),
                };
                raw.push((v, imag, mult));
            }
        }
        let blocks = (0..d).map(|i| u8::from(i >= n)).collect();
        Self::finish(Family::A, n, m, Self::diag_form(n, m), Self::standard_basis(d), raw, vec![crate::exact::var::k()], blocks)
    }

    /// BC(n,m) with the given `p`, `q`; roots of multiplicity 0 are dropped.
    pub fn build_bc_variant(family: Family, n: usize, m: usize, bp: BcParams) -> Result<GRS, RootError> {
        let d = n + m;
        if d == 0 {
            return Err(RootError::InvalidSizes(family, n, m));
        }
        let k = Scalar::k();
        let kinv = k.inv().unwrap();
        let (r, s) = (bp.r(), bp.s());
        let mut raw = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = vec![q(0); d];
                    v[i] = q(si);
                    v[j] = q(sj);
                    let (imag, mult) = match (i < n, j < n) {
                        (true, true) => (false, k.clone()),
                        (false, false) => (false, kinv.clone()),
                        _ => (true, Scalar::one()),
                    };
                    raw.push((v, imag, mult));
                }
            }
            for sign in [1, -1] {
                for scale in [1, 2] {
                    let mut v = vec![q(0); d];
                    v[i] = q(sign * scale);
                    let mult = match (i < n, scale) {
                        (true, 1) => bp.p.clone(),
                        (true, _) => bp.q.clone(),
                        (false, 1) => r.clone(),
                        (false, _) => s.clone(),
                    };
                    raw.push((v, false, mult));
                }
            }
        }
        let mut params = vec![crate::exact::var::k()];
        for s in [&bp.p, &bp.q] {
            for v in s.vars() {
                if !params.contains(&v) {
                    params.push(v);
                }
            }
        }
        let blocks = (0..d).map(|i| u8::from(i >= n)).collect();
        Ok(Self::finish(family, n, m, Self::diag_form(n, m), Self::standard_basis(d), raw, params, blocks))
    }

    fn build_ab13() -> GRS {
        let k = Scalar::k();
        let half = Q::frac(1, 2);
        let a = (&(&k * &Scalar::int(3)) + &Scalar::one()) / Scalar::int(2);
        let b = (&Scalar::one() - &k) / (&k * &Scalar::int(2));
        let c = (&(&k * &Scalar::int(3)) - &Scalar::one()) / Scalar::int(4);
        let mut form = Self::diag_form(3, 1);
        form[3][3] = &k * &Scalar::int(3);
        let mut raw = Vec::new();
        for i in 0..3 {
            for j in (i + 1)..3 {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = vec![q(0); 4];
                    v[i] = q(si);
                    v[j] = q(sj);
                    raw.push((v, false, c.clone()));
                }
            }
            for sign in [1, -1] {
                let mut v = vec![q(0); 4];
                v[i] = q(sign);
                raw.push((v, false, a.clone()));
            }
        }
        for sign in [1, -1] {
            raw.push((vec![q(0), q(0), q(0), q(sign)], false, b.clone()));
        }
        for mask in 0..16u32 {
            let v: Vec<Q> =
                (0..4).map(|t| if mask & (1 << t) != 0 { -half.clone() } else { half.clone() }).collect();
            raw.push((v, true, Scalar::one()));
        }
        let lattice = vec![
            vec![q(1), q(0), q(0), q(0)],
            vec![q(0), q(1), q(0), q(0)],
            vec![q(0), q(0), q(1), q(0)],
            vec![half.clone(), half.clone(), half.clone(), half],
        ];
        Self::finish(Family::AB13, 3, 1, form, lattice, raw, vec![crate::exact::var::k()], vec![0, 0, 0, 1])
    }

    fn build_g12() -> GRS {
        // Ambient basis (e1, e2, e4); e3 = -e1 - e2.
        let k = Scalar::k();
        let a = &Scalar::one() + &(&k * &Scalar::int(2));
        let b = (&(&k * &Scalar::int(2)) - &Scalar::one()) / Scalar::int(3);
        let c = &k.inv().unwrap() + &Scalar::int(2);
        let d = &(&k * &Scalar::int(2)).inv().unwrap() - &Scalar::frac(1, 2);
        let half = Scalar::frac(-1, 2);
        let form = vec![
            vec![Scalar::one(), half.clone(), Scalar::zero()],
            vec![half, Scalar::one(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), k.clone()],
        ];
        let e = [vec![q(1), q(0)], vec![q(0), q(1)], vec![q(-1), q(-1)]];
        let mut raw = Vec::new();
        let with4 = |v: &[Q], y: i64| vec![v[0].clone(), v[1].clone(), q(y)];
        for i in 0..3 {
            for sign in [1i64, -1] {
                let vi: Vec<Q> = e[i].iter().map(|x| x * &q(sign)).collect();
                raw.push((with4(&vi, 0), false, a.clone()));
                for y in [1, -1] {
                    raw.push((with4(&vi, y), true, Scalar::one()));
                }
            }
            for j in 0..3 {
                if i != j {
                    let vij: Vec<Q> = e[i].iter().zip(&e[j]).map(|(x, y)| x - y).collect();
                    raw.push((with4(&vij, 0), false, b.clone()));
                }
            }
        }
        for y in [1i64, -1] {
            raw.push((vec![q(0), q(0), q(y)], false, c.clone()));
            raw.push((vec![q(0), q(0), q(2 * y)], false, d.clone()));
        }
        Self::finish(Family::G12, 2, 1, form, Self::standard_basis(3), raw, vec![crate::exact::var::k()], vec![0, 0, 1])
    }

    fn build_d21() -> GRS {
        let l: Vec<Scalar> = ["l1", "l2", "l3"].iter().map(|s| Scalar::param(s)).collect();
        let k = &(&(&l[0] + &l[1]) + &l[2]) - &Scalar::one();
        let form: Vec<Vec<Scalar>> =
            (0..3).map(|i| (0..3).map(|j| if i == j { l[i].clone() } else { Scalar::zero() }).collect()).collect();
        let mut raw = Vec::new();
        for i in 0..3 {
            let mi = &(&(&k + &Scalar::one()) / &(&l[i] * &Scalar::int(2))) - &Scalar::one();
            for sign in [2i64, -2] {
                let mut v = vec![q(0); 3];
                v[i] = q(sign);
                raw.push((v, false, mi.clone()));
            }
        }
        for mask in 0..8u32 {
            let v: Vec<Q> = (0..3).map(|t| if mask & (1 << t) != 0 { q(-1) } else { q(1) }).collect();
            raw.push((v, true, Scalar::one()));
        }
        let lattice = vec![vec![q(1), q(1), q(1)], vec![q(1), q(1), q(-1)], vec![q(1), q(-1), q(1)]];
        let params = ["l1", "l2", "l3"].iter().map(|s| Var::param(s)).collect();
        Self::finish(Family::D21, 3, 0, form, lattice, raw, params, vec![0, 1, 2])
    }

    /// Substitutes values for parameters in the form and the multiplicities.
    /// Roots whose multiplicity becomes zero are dropped.
    pub fn specialize(&self, bindings: &[(Var, Scalar)]) -> Result<GRS, crate::exact::ArithError> {
        let mut g = self.clone();
        for row in g.form.iter_mut() {
            for x in row.iter_mut() {
                *x = x.substitute(bindings)?;
            }
        }
        for r in g.roots.iter_mut() {
            r.mult = r.mult.substitute(bindings)?;
        }
        g.roots.retain(|r| !r.mult.is_zero());
        g.params.retain(|v| bindings.iter().all(|(b, _)| b != v));
        Ok(g)
    }

    /// Conventional name, e.g. `A(1,0)`, `BC(1,1)`, `D(2,1,lambda)`.
    pub fn name(&self) -> String {
        match self.family {
            Family::A => format!("A({},{})", self.n as i64 - 1, self.m as i64 - 1),
            Family::BC => format!("BC({},{})", self.n, self.m),
            Family::B => format!("B({},{})", self.n, self.m),
            Family::C => format!("C({},{})", self.n, self.m),
            Family::C0 => format!("C(0,{})", self.m),
            Family::D => format!("D({},{})", self.n, self.m),
            Family::AB13 => "AB(1,3)".into(),
            Family::G12 => "G(1,2)".into(),
            Family::D21 => "D(2,1,lambda)".into(),
        }
    }

    /// The deformation parameter `k` of this system as a scalar.
    pub fn k(&self) -> Scalar {
        match self.family {
            Family::D21 => {
                let l: Vec<Scalar> = ["l1", "l2", "l3"].iter().map(|s| Scalar::param(s)).collect();
                &(&(&l[0] + &l[1]) + &l[2]) - &Scalar::one()
            }
            _ => Scalar::k(),
        }
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.positive)
    }

    pub fn find_root(&self, v: &[Q]) -> Option<&Root> {
        self.roots.iter().find(|r| r.v == v)
    }

    /// Multiplicity of `v`, zero if `v` is not a root.
    pub fn mult_of(&self, v: &[Q]) -> Scalar {
        self.find_root(v).map_or(Scalar::zero(), |r| r.mult.clone())
    }

    pub fn pairing(&self, u: &GVec, v: &GVec, form: Form) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.dim {
            if u.0[i].is_zero() {
                continue;
            }
            match form {
                Form::Euclidean => acc = &acc + &(&u.0[i] * &v.0[i]),
                Form::Deformed => {
                    for j in 0..self.dim {
                        if v.0[j].is_zero() || self.form[i][j].is_zero() {
                            continue;
                        }
                        acc = &acc + &(&(&u.0[i] * &self.form[i][j]) * &v.0[j]);
                    }
                }
            }
        }
        acc
    }

    /// Deformed pairing of two rational vectors.
    pub fn b(&self, u: &[Q], v: &[Q]) -> Scalar {
        self.pairing(&GVec::from_q(u), &GVec::from_q(v), Form::Deformed)
    }

    /// The form at the Lie superalgebra point, used for real/imaginary checks.
    pub fn original_pairing(&self, u: &[Q], v: &[Q]) -> Scalar {
        let s = self.b(u, v);
        let bind: Vec<(Var, Scalar)> = match self.family {
            Family::D21 => {
                let l1 = Scalar::param("l1");
                let l2 = Scalar::param("l2");
                vec![(Var::param("l3"), -(&l1 + &l2))]
            }
            _ => vec![(crate::exact::var::k(), Scalar::int(-1))],
        };
        s.substitute(&bind).expect("finite at the superalgebra point")
    }

    pub fn reflect(&self, alpha: &GVec, v: &GVec, form: Form) -> Result<GVec, RootError> {
        let aa = self.pairing(alpha, alpha, form);
        if aa.is_zero() {
            return Err(RootError::Isotropic);
        }
        let av = self.pairing(alpha, v, form);
        let c = &(&av * &Scalar::int(2)) / &aa;
        Ok(v.sub(&alpha.scale(&c)))
    }

    /// Euclidean reflection of a rational vector.
    pub fn reflect_euclid_q(alpha: &[Q], v: &[Q]) -> Vec<Q> {
        let aa: Q = alpha.iter().fold(Q::zero(), |s, x| &s + &(x * x));
        let av: Q = alpha.iter().zip(v).fold(Q::zero(), |s, (x, y)| &s + &(x * y));
        let c = &(&av * &q(2)) / &aa;
        v.iter().zip(alpha).map(|(x, a)| x - &(&c * a)).collect()
    }

    /// The orbit O of homogeneous vectors: `{e_i}` for A, `{+-e_i}` for BC types.
    pub fn homogeneous_orbit(&self) -> Result<Vec<Vec<Q>>, RootError> {
        if !self.family.is_classical() {
            return Err(RootError::NoOrbit(self.family));
        }
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            let mut v = vec![q(0); d];
            v[i] = q(1);
            out.push(v);
        }
        if self.family.is_bc_type() {
            for i in 0..d {
                let mut v = vec![q(0); d];
                v[i] = q(-1);
                out.push(v);
            }
        }
        Ok(out)
    }

    /// `rho(m) = sum over positive roots of m_alpha * alpha`.
    pub fn rho(&self) -> GVec {
        let mut acc = GVec::zero(self.dim);
        for r in self.positive_roots() {
            acc = acc.add(&r.gvec().scale(&r.mult));
        }
        acc
    }

    /// `|rho|^2` under the deformed form.
    pub fn rho_norm2(&self) -> Scalar {
        let r = self.rho();
        self.pairing(&r, &r, Form::Deformed)
    }

    /// Pairings `(b_t, e_j)` of lattice basis vectors with ambient basis vectors.
    pub fn lattice_pairings(&self) -> Vec<Vec<Scalar>> {
        self.lattice_basis
            .iter()
            .map(|bt| {
                (0..self.dim)
                    .map(|j| {
                        let mut e = vec![q(0); self.dim];
                        e[j] = q(1);
                        self.b(bt, &e)
                    })
                    .collect()
            })
            .collect()
    }

    /// Gram matrix `(b_t, b_s)` of the lattice basis.
    pub fn lattice_gram(&self) -> Vec<Vec<Scalar>> {
        self.lattice_basis.iter().map(|bt| self.lattice_basis.iter().map(|bs| self.b(bt, bs)).collect()).collect()
    }

    /// `(b_t, v)` for each lattice basis vector.
    pub fn lattice_dual(&self, v: &GVec) -> Vec<Scalar> {
        self.lattice_basis.iter().map(|bt| self.pairing(&GVec::from_q(bt), v, Form::Deformed)).collect()
    }

    /// Axiom: every real reflection maps R to R (under the original form).
    pub fn check_reflection_closure(&self) -> bool {
        for a in self.roots.iter().filter(|r| !r.imaginary) {
            let aa = self.original_pairing(&a.v, &a.v);
            for b in &self.roots {
                let ab = self.original_pairing(&a.v, &b.v);
                let c = &(&ab * &Scalar::int(2)) / &aa;
                let Some(c) = c.to_q() else { return false };
                let img: Vec<Q> = b.v.iter().zip(&a.v).map(|(x, y)| x - &(&c * y)).collect();
                if self.find_root(&img).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// W0-invariance of multiplicities and of the deformed form.
    pub fn check_w0_invariance(&self) -> bool {
        let reals: Vec<&Root> = self.roots.iter().filter(|r| !r.imaginary).collect();
        for a in &reals {
            let ag = a.gvec();
            for b in &self.roots {
                let Ok(img) = self.reflect(&ag, &b.gvec(), Form::Deformed) else { return false };
                let Some(img) = img.to_q() else { return false };
                match self.find_root(&img) {
                    Some(r) if r.mult == b.mult => {}
                    _ => return false,
                }
            }
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let ei = GVec::basis(self.dim, i);
                    let ej = GVec::basis(self.dim, j);
                    let si = self.reflect(&ag, &ei, Form::Deformed).unwrap();
                    let sj = self.reflect(&ag, &ej, Form::Deformed).unwrap();
                    if self.pairing(&si, &sj, Form::Deformed) != self.form[i][j] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Imaginary roots are isotropic for the original form and have multiplicity 1.
    pub fn check_imaginary(&self) -> bool {
        self.roots.iter().all(|r| {
            let iso = self.original_pairing(&r.v, &r.v).is_zero();
            iso == r.imaginary && (!r.imaginary || r.mult.is_one())
        })
    }

    pub fn check_symmetric(&self) -> bool {
        self.roots.iter().all(|r| {
            let neg: Vec<Q> = r.v.iter().map(|x| -x).collect();
            self.find_root(&neg).is_some_and(|s| s.mult == r.mult && s.positive != r.positive)
        })
    }

    /// Deterministic JSON description of the root data.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct RootJ {
            vector: Vec<String>,
            lattice: Vec<i32>,
            imaginary: bool,
            positive: bool,
            multiplicity: String,
        }
        #[derive(Serialize)]
        struct SysJ {
            name: String,
            family: Family,
            dim: usize,
            form: Vec<Vec<String>>,
            lattice_basis: Vec<Vec<String>>,
            roots: Vec<RootJ>,
        }
        let s = SysJ {
            name: self.name(),
            family: self.family,
            dim: self.dim,
            form: self.form.iter().map(|r| r.iter().map(|x| x.render()).collect()).collect(),
            lattice_basis: self.lattice_basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
            roots: self
                .roots
                .iter()
                .map(|r| RootJ {
                    vector: r.v.iter().map(|x| x.to_string()).collect(),
                    lattice: r.lattice.clone(),
                    imaginary: r.imaginary,
                    positive: r.positive,
                    multiplicity: r.mult.render(),
                })
                .collect(),
        };
        serde_json::to_value(s).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_roots_and_imaginary() {
        let g = GRS::build(Family::A, 2, 1).unwrap();
        assert_eq!(g.roots.len(), 6);
        let imag: Vec<&Root> = g.roots.iter().filter(|r| r.imaginary).collect();
        assert_eq!(imag.len(), 4);
        assert!(g.find_root(&[q(1), q(0), q(-1)]).unwrap().imaginary);
        assert!(!g.find_root(&[q(1), q(-1), q(0)]).unwrap().imaginary);
    }

    #[test]
    fn bc11_roots() {
        let g = GRS::build(Family::BC, 1, 1).unwrap();
        assert_eq!(g.roots.len(), 12);
    }

    #[test]
    fn pairings() {
        let g = GRS::build(Family::A, 2, 2).unwrap();
        let a = [q(1), q(0), q(-1), q(0)];
        assert_eq!(g.b(&a, &a), &Scalar::one() + &Scalar::k());
        let ab = GRS::build(Family::AB13, 0, 0).unwrap();
        let e4 = [q(0), q(0), q(0), q(1)];
        assert_eq!(ab.b(&e4, &e4), &Scalar::k() * &Scalar::int(3));
    }

    #[test]
    fn euclidean_reflections() {
        assert_eq!(GRS::reflect_euclid_q(&[q(1), q(-1)], &[q(1), q(0)]), vec![q(0), q(1)]);
        assert_eq!(GRS::reflect_euclid_q(&[q(1)], &[q(1)]), vec![q(-1)]);
        let r = GRS::reflect_euclid_q(&[q(1), q(0), q(-1), q(0)], &[q(1), q(-1), q(0), q(0)]);
        assert_eq!(r, vec![q(0), q(-1), q(1), q(0)]);
    }

    #[test]
    fn lattice_exponents() {
        let ab = GRS::build(Family::AB13, 0, 0).unwrap();
        let h = ab.find_root(&[Q::frac(1, 2), Q::frac(1, 2), Q::frac(1, 2), Q::frac(1, 2)]).unwrap();
        assert_eq!(h.lattice, vec![0, 0, 0, 1]);
        let g = GRS::build(Family::G12, 0, 0).unwrap();
        let e3 = g.find_root(&[q(-1), q(-1), q(0)]).unwrap();
        assert_eq!(e3.lattice, vec![-1, -1, 0]);
    }

    #[test]
    fn rho_values() {
        let g = GRS::build(Family::A, 1, 1).unwrap();
        assert_eq!(g.rho(), GVec::from_ints(&[1, -1]));
        let g = GRS::build(Family::BC, 1, 0).unwrap();
        let p = Scalar::param("p");
        let qq = Scalar::param("q");
        assert_eq!(g.rho(), GVec(vec![&p + &(&qq * &Scalar::int(2))]));
    }

    #[test]
    fn axioms_for_all_families() {
        let systems = [
            (Family::A, 2, 1),
            (Family::A, 2, 2),
            (Family::BC, 1, 1),
            (Family::BC, 2, 1),
            (Family::B, 1, 1),
            (Family::C, 1, 2),
            (Family::D, 2, 1),
            (Family::C0, 1, 2),
            (Family::AB13, 0, 0),
            (Family::G12, 0, 0),
            (Family::D21, 0, 0),
        ];
        for (f, n, m) in systems {
            let g = GRS::build(f, n, m).unwrap();
            assert!(g.check_symmetric(), "{}", g.name());
            assert!(g.check_imaginary(), "{}", g.name());
            assert!(g.check_w0_invariance(), "{}", g.name());
            assert!(g.check_reflection_closure(), "{}", g.name());
        }
    }
}
