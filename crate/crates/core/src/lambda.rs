//! The algebras Λ⁰_{n,m;k} of quasi-invariants of type A(n-1,m-1): deformed
//! Newton sums, fat-hook partitions, Poincaré series, component dimensions,
//! Jack and super-Jack polynomials, and common zeros of the Newton sums.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::linalg::rank_of_rows;
use crate::exact::{Matrix, Mono, Q, SPoly, Scalar, Var};
use crate::par;

pub type SuperPoly = SPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error("invalid partition literal `{0}`")]
    Parse(String),
    #[error("theta is a pole of the Jack computation")]
    Pole,
    #[error("need at least {need} variables, got {got}")]
    TooFewVars { need: usize, got: usize },
    #[error("operator is not triangular at {0}")]
    NotTriangular(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// A partition, stored as its nonzero parts in weakly decreasing order.
/// The derived order is lexicographic, which refines dominance.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Parses "3,1,1". Parts must be weakly decreasing; zeros are dropped.
    pub fn parse(s: &str) -> Result<Partition, LambdaError> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Partition::default());
        }
        let parts: Vec<u32> = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| LambdaError::Parse(s.to_string()))?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(LambdaError::Parse(s.to_string()));
        }
        Ok(Partition::new(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// λ_{i+1} (zero-based index, zero past the end).
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let l1 = self.part(0);
        Partition((1..=l1).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// λ_{n+1} ≤ m.
    pub fn in_fat_hook(&self, n: usize, m: usize) -> bool {
        self.part(n) as usize <= m
    }

    pub fn dominated_by(&self, o: &Partition) -> bool {
        if self.weight() != o.weight() {
            return false;
        }
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..self.len().max(o.len()) {
            a += self.part(i);
            b += o.part(i);
            if a > b {
                return false;
            }
        }
        true
    }

    /// z_λ = Π i^{m_i} m_i!.
    pub fn z(&self) -> Q {
        let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
        for &p in &self.0 {
            *mult.entry(p).or_default() += 1;
        }
        let mut z = Q::one();
        for (i, mi) in mult {
            for j in 1..=mi {
                z = &z * &Q::int(i as i64 * j as i64);
            }
        }
        z
    }

    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "()".into();
        }
        self.0.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn partitions(n: u32) -> Vec<Partition> {
    partitions_bounded(n, n, usize::MAX)
}

/// Partitions of `n` with parts ≤ `max_part` and at most `max_len` parts.
pub fn partitions_bounded(n: u32, max_part: u32, max_len: usize) -> Vec<Partition> {
    fn go(rem: u32, max: u32, len_left: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if len_left == 0 {
            return;
        }
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            go(rem - p, p, len_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_part, max_len, &mut Vec::new(), &mut out);
    out
}

pub fn fat_hook_partitions(n: usize, m: usize, big_n: u32) -> Vec<Partition> {
    partitions(big_n).into_iter().filter(|p| p.in_fat_hook(n, m)).collect()
}

/// D_N(n,m) by enumeration.
pub fn hook_count(n: usize, m: usize, big_n: u32) -> u64 {
    fat_hook_partitions(n, m, big_n).len() as u64
}

// ---------------------------------------------------------------------------
// Poincaré series

#[derive(Clone, Debug, Serialize)]
pub struct PoincareSeries {
    pub n: usize,
    pub m: usize,
    pub enumerated: Vec<u64>,
    pub closed_form: Vec<u64>,
    pub agree: bool,
    pub symmetric: bool,
}

fn inv_prod_series(i: usize, nmax: usize) -> Vec<i64> {
    let mut a = vec![0i64; nmax + 1];
    a[0] = 1;
    for j in 1..=i {
        for d in j..=nmax {
            a[d] += a[d - j];
        }
    }
    a
}

fn series_mul(a: &[i64], b: &[i64], nmax: usize) -> Vec<i64> {
    let mut c = vec![0i64; nmax + 1];
    for (i, &x) in a.iter().enumerate().take(nmax + 1) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(nmax + 1 - i) {
            c[i + j] += x * y;
        }
    }
    c
}

/// Coefficients of 1/Π_{i≤n}(1−t^i) · [1 + Σ_{i≤m} t^{i(n+1)}/Π_{j≤i}(1−t^j)] up to t^nmax.
pub fn closed_form_series(n: usize, m: usize, nmax: usize) -> Vec<i64> {
    let mut bracket = vec![0i64; nmax + 1];
    bracket[0] = 1;
    for i in 1..=m {
        let shift = i * (n + 1);
        if shift > nmax {
            break;
        }
        let s = inv_prod_series(i, nmax);
        for d in shift..=nmax {
            bracket[d] += s[d - shift];
        }
    }
    series_mul(&inv_prod_series(n, nmax), &bracket, nmax)
}

pub fn poincare_series(n: usize, m: usize, nmax: usize) -> PoincareSeries {
    let enumerated: Vec<u64> = (0..=nmax as u32).map(|d| hook_count(n, m, d)).collect();
    let closed_form: Vec<u64> = closed_form_series(n, m, nmax).into_iter().map(|c| c as u64).collect();
    let swapped: Vec<u64> = (0..=nmax as u32).map(|d| hook_count(m, n, d)).collect();
    PoincareSeries { n, m, agree: enumerated == closed_form, symmetric: enumerated == swapped, enumerated, closed_form }
}

/// P^{BC}_{n,m}(t) = P_{n,m}(t²), truncated at t^nmax.
pub fn bc_poincare_series(n: usize, m: usize, nmax: usize) -> Vec<u64> {
    let half = closed_form_series(n, m, nmax / 2);
    (0..=nmax).map(|d| if d % 2 == 0 { half[d / 2] as u64 } else { 0 }).collect()
}

/// Numerator of the series over Π_{i=1}^{n+m}(1−t^i), truncated at t^nmax.
pub fn hilbert_numerator(n: usize, m: usize, nmax: usize) -> Vec<i64> {
    let mut a = closed_form_series(n, m, nmax);
    for i in 1..=n + m {
        for d in (i..=nmax).rev() {
            a[d] -= a[d - i];
        }
    }
    a
}

// ---------------------------------------------------------------------------
// Newton sums and membership

pub fn xvar(i: usize) -> Var {
    Var::coord(&format!("x{}", i + 1))
}

pub fn yvar(j: usize) -> Var {
    Var::coord(&format!("y{}", j + 1))
}

/// p_r(x,y,k) = Σ x_i^r + (1/k) Σ y_j^r at a given value (or symbol) of k.
pub fn newton_deformed_at(n: usize, m: usize, r: u32, k: &Scalar) -> SuperPoly {
    let inv = k.inv().expect("k must be nonzero");
    if r == 0 {
        return SPoly::constant(Scalar::int(n as i64).add(&inv.mul(&Scalar::int(m as i64))));
    }
    let mut terms: Vec<(Mono, Scalar)> = (0..n).map(|i| (Mono::var_pow(xvar(i), r as i32), Scalar::one())).collect();
    terms.extend((0..m).map(|j| (Mono::var_pow(yvar(j), r as i32), inv.clone())));
    SPoly::from_terms(terms)
}

pub fn newton_deformed(n: usize, m: usize, r: u32) -> SuperPoly {
    newton_deformed_at(n, m, r, &Scalar::k())
}

fn swap_vars(f: &SuperPoly, a: Var, b: Var) -> SuperPoly {
    f.map_monos(|mono| {
        Mono::from_pairs(mono.pairs().iter().map(|&(v, e)| (if v == a { b } else if v == b { a } else { v }, e)))
    })
}

fn is_symmetric_in(f: &SuperPoly, vars: &[Var]) -> bool {
    vars.windows(2).all(|w| swap_vars(f, w[0], w[1]) == *f)
}

/// Membership in Λ⁰_{n,m;k} at the given k.
pub fn lambda0_membership_at(f: &SuperPoly, n: usize, m: usize, k: &Scalar) -> bool {
    let xs: Vec<Var> = (0..n).map(xvar).collect();
    let ys: Vec<Var> = (0..m).map(yvar).collect();
    if !is_symmetric_in(f, &xs) || !is_symmetric_in(f, &ys) {
        return false;
    }
    if n == 0 || m == 0 {
        return true;
    }
    let g = f.diff(xs[0]).sub(&f.diff(ys[0]).scale(k));
    g.substitute(&[(ys[0], SPoly::var(xs[0]))]).is_zero()
}

pub fn lambda0_membership(f: &SuperPoly, n: usize, m: usize) -> bool {
    lambda0_membership_at(f, n, m, &Scalar::k())
}

/// BC version: f is a polynomial in squares whose square-reduced form is in Λ⁰.
pub fn bc_membership(f: &SuperPoly, n: usize, m: usize) -> bool {
    if f.terms().iter().any(|(mono, _)| mono.pairs().iter().any(|&(_, e)| e % 2 != 0)) {
        return false;
    }
    let g = f.map_monos(|mono| Mono::from_pairs(mono.pairs().iter().map(|&(v, e)| (v, e / 2))));
    lambda0_membership(&g, n, m)
}

// ---------------------------------------------------------------------------
// Component dimensions

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum KMode {
    Symbolic,
    Pinned(String),
}

impl KMode {
    pub fn pinned(q: Q) -> KMode {
        KMode::Pinned(q.to_string())
    }

    fn value(&self) -> Scalar {
        match self {
            KMode::Symbolic => Scalar::k(),
            KMode::Pinned(s) => Scalar::from_q(Q::parse(s).expect("pinned k")),
        }
    }
}

fn next_permutation(a: &mut [u32]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Distinct rearrangements of `p` padded with zeros to length `len`.
fn distinct_perms(p: &Partition, len: usize) -> Vec<Vec<u32>> {
    let mut a: Vec<u32> = (0..len).map(|i| p.part(i)).collect();
    a.sort_unstable();
    let mut out = vec![a.clone()];
    while next_permutation(&mut a) {
        out.push(a.clone());
    }
    out
}

/// Monomial symmetric polynomial m_μ(vars^power).
fn monomial_symmetric(mu: &Partition, vars: &[Var], power: i32) -> SuperPoly {
    if mu.len() > vars.len() {
        return SPoly::zero();
    }
    SPoly::from_terms(distinct_perms(mu, vars.len()).into_iter().map(|a| {
        (Mono::from_pairs(vars.iter().zip(&a).filter(|(_, &e)| e > 0).map(|(&v, &e)| (v, e as i32 * power))), Scalar::one())
    }))
}

/// Each polynomial becomes a row of coefficients over the union of monomials.
fn coefficient_rows(polys: &[SuperPoly]) -> Vec<Vec<Scalar>> {
    let mut index: BTreeMap<Mono, usize> = BTreeMap::new();
    for p in polys {
        for (mono, _) in p.terms() {
            let n = index.len();
            index.entry(mono.clone()).or_insert(n);
        }
    }
    polys
        .iter()
        .map(|p| {
            let mut row = vec![Scalar::zero(); index.len()];
            for (mono, c) in p.terms() {
                row[index[mono]] = c.clone();
            }
            row
        })
        .collect()
}

fn rank_of_polys(polys: &[SuperPoly]) -> usize {
    let rows = coefficient_rows(polys);
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    rank_of_rows(&rows)
}

fn dimension_impl(n: usize, m: usize, big_n: u32, k: &Scalar, power: i32) -> usize {
    if big_n % power as u32 != 0 {
        return 0;
    }
    let deg = big_n / power as u32;
    let xs: Vec<Var> = (0..n).map(xvar).collect();
    let ys: Vec<Var> = (0..m).map(yvar).collect();
    let mut basis = Vec::new();
    for a in 0..=deg {
        for mu in partitions_bounded(a, a, n) {
            for nu in partitions_bounded(deg - a, deg - a, m) {
                basis.push(monomial_symmetric(&mu, &xs, power).mul(&monomial_symmetric(&nu, &ys, power)));
            }
        }
    }
    if n == 0 || m == 0 {
        return basis.len();
    }
    let images: Vec<SuperPoly> = basis
        .iter()
        .map(|b| b.diff(xs[0]).sub(&b.diff(ys[0]).scale(k)).substitute(&[(ys[0], SPoly::var(xs[0]))]))
        .collect();
    // Conditions are the coefficients of the images: columns of the matrix
    // indexed by basis elements.
    let rows = coefficient_rows(&images);
    let ncond = rows.first().map_or(0, |r| r.len());
    if ncond == 0 {
        return basis.len();
    }
    let mut mat = Matrix::zeros(ncond, basis.len());
    for (j, row) in rows.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            if !c.is_zero() {
                mat.set(i, j, c.clone());
            }
        }
    }
    mat.nullity()
}

/// Dimension of the degree-N component of Λ⁰_{n,m;k}.
pub fn component_dimension(n: usize, m: usize, big_n: u32, mode: &KMode) -> usize {
    dimension_impl(n, m, big_n, &mode.value(), 1)
}

/// Dimension of the degree-N component of the BC(n,m) algebra (even in every variable).
pub fn bc_component_dimension(n: usize, m: usize, big_n: u32, mode: &KMode) -> usize {
    dimension_impl(n, m, big_n, &mode.value(), 2)
}

/// Rank of the span of Newton products p_μ, μ ⊢ N, at symbolic k.
pub fn newton_span_rank(n: usize, m: usize, big_n: u32) -> usize {
    newton_span_rank_at(n, m, big_n, &KMode::Symbolic)
}

pub fn newton_span_rank_at(n: usize, m: usize, big_n: u32, mode: &KMode) -> usize {
    if big_n == 0 {
        return 1;
    }
    let k = mode.value();
    let gens: Vec<SuperPoly> = (1..=big_n).map(|r| newton_deformed_at(n, m, r, &k)).collect();
    let prods = par::map(&partitions(big_n), |mu| {
        mu.parts().iter().fold(SPoly::one(), |acc, &r| acc.mul(&gens[r as usize - 1]))
    });
    rank_of_polys(&prods)
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionRow {
    pub degree: u32,
    pub d_n: u64,
    pub component_dim: usize,
    pub span_rank: usize,
    pub ok: bool,
}

pub fn dimension_table(n: usize, m: usize, nmax: u32) -> Vec<DimensionRow> {
    let degrees: Vec<u32> = (0..=nmax).collect();
    par::map(&degrees, |&d| {
        let d_n = hook_count(n, m, d);
        let component_dim = component_dimension(n, m, d, &KMode::Symbolic);
        let span_rank = if d == 0 { 1 } else { newton_span_rank(n, m, d) };
        DimensionRow { degree: d, d_n, component_dim, span_rank, ok: component_dim as u64 == d_n && span_rank as u64 == d_n }
    })
}

// ---------------------------------------------------------------------------
// Symmetric functions in the power-sum basis

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymFun {
    terms: BTreeMap<Partition, Scalar>,
}

impl SymFun {
    pub fn zero() -> SymFun {
        SymFun::default()
    }

    pub fn p(mu: Partition) -> SymFun {
        SymFun { terms: BTreeMap::from([(mu, Scalar::one())]) }
    }

    pub fn terms(&self) -> &BTreeMap<Partition, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, mu: &Partition) -> Scalar {
        self.terms.get(mu).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, o: &SymFun, c: &Scalar) {
        for (mu, v) in &o.terms {
            let e = self.terms.entry(mu.clone()).or_insert_with(Scalar::zero);
            *e = e.add(&v.mul(c));
            if e.is_zero() {
                self.terms.remove(mu);
            }
        }
    }

    pub fn sub(&self, o: &SymFun) -> SymFun {
        let mut r = self.clone();
        r.add_scaled(o, &Scalar::int(-1));
        r
    }

    pub fn substitute(&self, bindings: &[(Var, Scalar)]) -> Result<SymFun, LambdaError> {
        let mut terms = BTreeMap::new();
        for (mu, c) in &self.terms {
            let v = c.substitute(bindings).map_err(|_| LambdaError::Pole)?;
            if !v.is_zero() {
                terms.insert(mu.clone(), v);
            }
        }
        Ok(SymFun { terms })
    }

    /// Deformed power-sum inner product ⟨p_λ, p_μ⟩ = δ z_λ θ^{-ℓ(λ)}.
    pub fn inner(&self, o: &SymFun, theta: &Scalar) -> Scalar {
        let mut s = Scalar::zero();
        for (mu, a) in &self.terms {
            if let Some(b) = o.terms.get(mu) {
                let w = Scalar::from_q(mu.z()).mul(&theta.pow(-(mu.len() as i32)));
                s = s.add(&a.mul(b).mul(&w));
            }
        }
        s
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .rev()
            .map(|(mu, c)| format!("({})*p[{}]", c.render(), mu))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Coefficient of x^μ (μ padded) in p_ν.
fn power_monomial_coeff(nu: &Partition, mu: &Partition) -> i64 {
    fn go(parts: &[u32], cap: &mut [u32]) -> i64 {
        let Some((&first, rest)) = parts.split_first() else {
            return if cap.iter().all(|&c| c == 0) { 1 } else { 0 };
        };
        let mut total = 0;
        for i in 0..cap.len() {
            if cap[i] >= first {
                cap[i] -= first;
                total += go(rest, cap);
                cap[i] += first;
            }
        }
        total
    }
    go(nu.parts(), &mut mu.parts().to_vec())
}

/// m_μ for every μ ⊢ N, expressed in power sums.
pub fn monomials_in_power_sums(big_n: u32) -> BTreeMap<Partition, SymFun> {
    let parts = partitions(big_n);
    // L[ν][μ] = [x^μ] p_ν, so Σ_ν d_ν L[ν][μ] = c_μ converts m-coordinates c to p-coordinates d.
    let lt: Vec<Vec<Scalar>> = parts
        .iter()
        .map(|mu| parts.iter().map(|nu| Scalar::int(power_monomial_coeff(nu, mu))).collect())
        .collect();
    let mat = Matrix::from_rows(lt, parts.len());
    parts
        .iter()
        .enumerate()
        .map(|(i, mu)| {
            let mut e = vec![Scalar::zero(); parts.len()];
            e[i] = Scalar::one();
            let d = mat.solve(&e).expect("power sums form a basis");
            let terms = parts.iter().cloned().zip(d).filter(|(_, c)| !c.is_zero()).collect();
            (mu.clone(), SymFun { terms })
        })
        .collect()
}

fn to_power_sums(coeffs: &BTreeMap<Partition, Scalar>, big_n: u32) -> SymFun {
    let table = monomials_in_power_sums(big_n);
    let mut out = SymFun::zero();
    for (mu, c) in coeffs {
        out.add_scaled(&table[mu], c);
    }
    out
}

/// Column ν ↦ coefficients of m_μ in H(m_ν), split as (constant, θ-coefficient), for
/// H = Σ (x_i∂_i)² + θ Σ_{i<j} (x_i+x_j)/(x_i−x_j)(x_i∂_i − x_j∂_j) in `nvars` variables.
fn eigen_operator_column(nu: &Partition, nvars: usize) -> BTreeMap<Partition, (i64, i64)> {
    let mut acc: HashMap<Vec<u32>, (i64, i64)> = HashMap::new();
    for a in distinct_perms(nu, nvars) {
        let diag: i64 = a.iter().map(|&e| (e as i64) * (e as i64)).sum();
        acc.entry(a.clone()).or_default().0 += diag;
        for i in 0..nvars {
            for j in 0..nvars {
                if a[i] <= a[j] {
                    continue;
                }
                let d = a[i] - a[j];
                for l in 0..d {
                    let mut b = a.clone();
                    b[i] -= l;
                    b[j] += l;
                    acc.entry(b).or_default().1 += d as i64;
                }
            }
        }
    }
    acc.into_iter()
        .filter(|(b, _)| b.windows(2).all(|w| w[0] >= w[1]))
        .map(|(b, v)| (Partition::new(b), v))
        .filter(|(_, v)| *v != (0, 0))
        .collect()
}

/// Jack P_λ in the monomial basis, via a triangular eigen-solve.
pub fn jack_monomial(lam: &Partition, theta: &Scalar, nvars: usize) -> Result<BTreeMap<Partition, Scalar>, LambdaError> {
    let big_n = lam.weight();
    if nvars < big_n as usize {
        return Err(LambdaError::TooFewVars { need: big_n as usize, got: nvars });
    }
    let below: Vec<Partition> = partitions(big_n).into_iter().filter(|mu| mu.dominated_by(lam)).collect();
    let entry = |(c, t): (i64, i64)| Scalar::int(c).add(&theta.mul(&Scalar::int(t)));
    let mut cols: BTreeMap<Partition, BTreeMap<Partition, Scalar>> = BTreeMap::new();
    for nu in &below {
        let col = eigen_operator_column(nu, nvars);
        if let Some(bad) = col.keys().find(|mu| !mu.dominated_by(nu)) {
            return Err(LambdaError::NotTriangular(format!("{bad} in H(m_{nu})")));
        }
        cols.insert(nu.clone(), col.into_iter().map(|(mu, v)| (mu, entry(v))).collect());
    }
    let eig = |mu: &Partition| cols[mu].get(mu).cloned().unwrap_or_else(Scalar::zero);
    let e_lam = eig(lam);
    let mut c: BTreeMap<Partition, Scalar> = BTreeMap::new();
    c.insert(lam.clone(), Scalar::one());
    for mu in below.iter().filter(|mu| *mu != lam) {
        let mut s = Scalar::zero();
        for (nu, cn) in &c {
            if let Some(h) = cols[nu].get(mu) {
                s = s.add(&cn.mul(h));
            }
        }
        let den = e_lam.sub(&eig(mu));
        if den.is_zero() {
            return Err(LambdaError::Pole);
        }
        let v = s.checked_div(&den).map_err(|_| LambdaError::Pole)?;
        if !v.is_zero() {
            c.insert(mu.clone(), v);
        }
    }
    Ok(c)
}

/// Monic Jack polynomial P_λ(z, θ) in power sums.
pub fn jack_polynomial(lam: &Partition, theta: &Scalar, nvars: usize) -> Result<SymFun, LambdaError> {
    let c = jack_monomial(lam, theta, nvars)?;
    Ok(to_power_sums(&c, lam.weight()))
}

/// Gram–Schmidt of the monomial basis in increasing lexicographic order.
pub fn jack_gram_schmidt(big_n: u32, theta: &Scalar) -> Result<BTreeMap<Partition, SymFun>, LambdaError> {
    let ms = monomials_in_power_sums(big_n);
    let mut out: BTreeMap<Partition, SymFun> = BTreeMap::new();
    let mut norms: BTreeMap<Partition, Scalar> = BTreeMap::new();
    for (lam, m_lam) in &ms {
        let mut v = m_lam.clone();
        for (mu, p_mu) in &out {
            let c = m_lam.inner(p_mu, theta).checked_div(&norms[mu]).map_err(|_| LambdaError::Pole)?;
            v.add_scaled(p_mu, &c.neg());
        }
        let nv = v.inner(&v, theta);
        if nv.is_zero() {
            return Err(LambdaError::Pole);
        }
        norms.insert(lam.clone(), nv);
        out.insert(lam.clone(), v);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Super-Jack polynomials

/// φ(p_r) = p_r(x, y, k).
pub fn phi(f: &SymFun, n: usize, m: usize, k: &Scalar) -> SuperPoly {
    let maxr = f.terms.keys().map(|mu| mu.part(0)).max().unwrap_or(0);
    let gens: Vec<SuperPoly> = (0..=maxr).map(|r| newton_deformed_at(n, m, r, k)).collect();
    let mut out = SPoly::zero();
    for (mu, c) in &f.terms {
        let prod = mu.parts().iter().fold(SPoly::one(), |acc, &r| acc.mul(&gens[r as usize]));
        out = out.add(&prod.scale(c));
    }
    out
}

#[derive(Clone, Debug)]
pub struct SuperJack {
    pub partition: Partition,
    pub poly: SuperPoly,
    pub in_hook: bool,
}

/// φ(P_λ(z, θ)) at θ = −k, with k symbolic.
pub fn super_jack(lam: &Partition, n: usize, m: usize) -> Result<SuperJack, LambdaError> {
    let k = Scalar::k();
    let p = jack_polynomial(lam, &k.neg(), lam.weight() as usize)?;
    Ok(SuperJack { partition: lam.clone(), poly: phi(&p, n, m, &k), in_hook: lam.in_fat_hook(n, m) })
}

/// x^{λ_1..λ_n} y^{⟨λ'_1−n⟩..⟨λ'_m−n⟩}.
pub fn expected_leading_monomial(lam: &Partition, n: usize, m: usize) -> Mono {
    let conj = lam.conjugate();
    let xs = (0..n).map(|i| (xvar(i), lam.part(i) as i32));
    let ys = (0..m).map(|j| (yvar(j), (conj.part(j) as i32 - n as i32).max(0)));
    Mono::from_pairs(xs.chain(ys).filter(|&(_, e)| e > 0))
}

pub fn leading_monomial_lex(f: &SuperPoly) -> Option<Mono> {
    f.terms().iter().map(|(mono, _)| mono).max_by(|a, b| a.cmp_lex(b)).cloned()
}

#[derive(Clone, Debug, Serialize)]
pub struct SuperJackReport {
    pub partition: String,
    pub in_hook: bool,
    pub membership: bool,
    pub leading_ok: bool,
    pub leading: String,
}

/// Checks every hook partition of weight ≤ `max_weight`; also returns, per weight,
/// whether the images are linearly independent.
pub fn super_jack_checks(n: usize, m: usize, max_weight: u32) -> Result<(Vec<SuperJackReport>, Vec<(u32, bool)>), LambdaError> {
    let mut reports = Vec::new();
    let mut independence = Vec::new();
    for w in 1..=max_weight {
        let hook = fat_hook_partitions(n, m, w);
        let jacks: Vec<Result<SuperJack, LambdaError>> = par::map(&hook, |lam| super_jack(lam, n, m));
        let mut polys = Vec::new();
        for sj in jacks {
            let sj = sj?;
            let lead = leading_monomial_lex(&sj.poly);
            let expected = expected_leading_monomial(&sj.partition, n, m);
            reports.push(SuperJackReport {
                partition: sj.partition.render(),
                in_hook: sj.in_hook,
                membership: lambda0_membership(&sj.poly, n, m),
                leading_ok: lead.as_ref() == Some(&expected),
                leading: lead.map(|l| l.render()).unwrap_or_default(),
            });
            polys.push(sj.poly);
        }
        independence.push((w, rank_of_polys(&polys) == polys.len()));
    }
    Ok((reports, independence))
}

// ---------------------------------------------------------------------------
// Common zeros of p_1..p_{n+m}

#[derive(Clone, Debug, Serialize)]
pub struct Prop4Verdict {
    pub n: usize,
    pub m: usize,
    pub k: String,
    /// (r, s, family solves the system identically).
    pub families: Vec<(usize, usize, bool)>,
    pub nontrivial: bool,
    /// For symbolic k: the eliminant whose vanishing is needed for a nontrivial zero.
    pub eliminant: Option<String>,
}

/// Substitutes x_1..x_r = y_1..y_s = w (w a fresh coordinate), other variables 0.
fn family_solves(n: usize, m: usize, r: usize, s: usize, k: &Scalar) -> bool {
    let w = SPoly::var(Var::coord("w"));
    let mut bind: Vec<(Var, SPoly)> = Vec::new();
    for i in 0..n {
        bind.push((xvar(i), if i < r { w.clone() } else { SPoly::zero() }));
    }
    for j in 0..m {
        bind.push((yvar(j), if j < s { w.clone() } else { SPoly::zero() }));
    }
    (1..=(n + m) as u32).all(|d| newton_deformed_at(n, m, d, k).substitute(&bind).is_zero())
}

/// `k = None` means symbolic k.
pub fn prop4_check(n: usize, m: usize, k: Option<Q>) -> Result<Prop4Verdict, LambdaError> {
    match k {
        Some(kv) => {
            if kv.is_zero() {
                return Err(LambdaError::Unsupported("k = 0".into()));
            }
            let ks = Scalar::from_q(kv.clone());
            let mut families = Vec::new();
            for r in 1..=n {
                for s in 1..=m {
                    if Q::frac(-(s as i64), r as i64) == kv {
                        families.push((r, s, family_solves(n, m, r, s, &ks)));
                    }
                }
            }
            let nontrivial = families.iter().any(|f| f.2);
            Ok(Prop4Verdict { n, m, k: kv.to_string(), families, nontrivial, eliminant: None })
        }
        None => {
            if (n, m) != (1, 1) {
                return Err(LambdaError::Unsupported("symbolic elimination only for (1,1)".into()));
            }
            // p_1 = 0 gives y = −k x; substitute into p_2.
            let x = xvar(0);
            let y_val = SPoly::var(x).scale(&Scalar::k().neg());
            let e = newton_deformed(1, 1, 2).substitute(&[(yvar(0), y_val)]);
            let c = e.coeff(&Mono::var_pow(x, 2));
            // e = c(k) x^2, so a nontrivial zero needs c(k) = 0, i.e. k = -1.
            let single = e.terms().len() == 1;
            let at_minus_one = c.substitute(&[(crate::exact::var::k(), Scalar::int(-1))]).map(|v| v.is_zero()).unwrap_or(false);
            Ok(Prop4Verdict {
                n,
                m,
                k: "k".into(),
                families: Vec::new(),
                nontrivial: c.is_zero() || !single || !at_minus_one,
                eliminant: Some(e.render()),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn conjugation_and_hook() {
        assert_eq!(part("3,1,1").conjugate(), part("3,1,1"));
        assert_eq!(part("4,2").conjugate(), part("2,2,1,1"));
        assert_eq!(fat_hook_partitions(1, 1, 2), vec![part("2"), part("1,1")]);
        assert_eq!(hook_count(1, 1, 4), 4);
        assert_eq!(hook_count(2, 1, 4), 5);
        assert!(Partition::parse("1,2").is_err());
    }

    #[test]
    fn poincare_small() {
        let s = poincare_series(1, 1, 8);
        assert!(s.agree && s.symmetric);
        assert_eq!(s.enumerated, vec![1, 1, 2, 3, 4, 5, 6, 7, 8]);
        for n in 1..=4 {
            let num = hilbert_numerator(n, 1, 3 * n + 3);
            let nz: Vec<usize> = (0..num.len()).filter(|&d| num[d] != 0).collect();
            let mut want = vec![0];
            want.extend(n + 2..=2 * n + 1);
            assert_eq!(nz, want);
            assert!(nz.iter().all(|&d| num[d] == 1));
        }
    }

    #[test]
    fn newton_and_membership() {
        assert_eq!(newton_deformed(1, 1, 0), SPoly::constant(Scalar::int(1).add(&Scalar::k().inv().unwrap())));
        for r in 0..=8 {
            assert!(lambda0_membership(&newton_deformed(2, 1, r), 2, 1));
        }
        let (x, y) = (SPoly::var(xvar(0)), SPoly::var(yvar(0)));
        assert!(!lambda0_membership(&x.add(&y), 1, 1));
        assert!(!lambda0_membership(&x.mul(&y), 1, 1));
        let cube = x.sub(&y).pow(3);
        assert!(lambda0_membership_at(&cube, 1, 1, &Scalar::one()));
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(component_dimension(1, 1, 2, &KMode::Symbolic), 2);
        assert_eq!(component_dimension(1, 1, 3, &KMode::Symbolic), 3);
        assert_eq!(newton_span_rank(1, 1, 3), 3);
        assert_eq!(bc_component_dimension(1, 1, 4, &KMode::Symbolic), 2);
        assert_eq!(bc_component_dimension(1, 1, 3, &KMode::Symbolic), 0);
    }

    #[test]
    fn pinned_k_one_breaks_generation() {
        let one = KMode::pinned(Q::one());
        assert_eq!(component_dimension(2, 1, 4, &one), 5);
        assert_eq!(newton_span_rank_at(2, 1, 4, &one), 4);
        assert_eq!(newton_span_rank(2, 1, 4), 5);
        let cube = (0..2)
            .map(|i| SPoly::var(xvar(i)).sub(&SPoly::var(yvar(0))).pow(3))
            .fold(SPoly::one(), |a, b| a.mul(&b));
        assert!(lambda0_membership_at(&cube, 2, 1, &Scalar::one()));
    }

    #[test]
    fn jack_low_degree() {
        let th = Scalar::param("theta");
        assert_eq!(jack_polynomial(&part("1"), &th, 1).unwrap(), SymFun::p(part("1")));
        for n in 2..=4 {
            let gs = jack_gram_schmidt(n, &th).unwrap();
            for lam in partitions(n) {
                assert_eq!(jack_polynomial(&lam, &th, n as usize).unwrap(), gs[&lam], "{lam}");
            }
        }
        // θ = 1 gives Schur functions: s_(1,1) = (p1² − p2)/2.
        let s11 = jack_polynomial(&part("1,1"), &Scalar::one(), 2).unwrap();
        assert_eq!(s11.coeff(&part("1,1")), Scalar::frac(1, 2));
        assert_eq!(s11.coeff(&part("2")), Scalar::frac(-1, 2));
    }

    #[test]
    fn super_jack_small() {
        let sj = super_jack(&part("1"), 2, 1).unwrap();
        assert_eq!(sj.poly, newton_deformed(2, 1, 1));
        let (reports, indep) = super_jack_checks(1, 1, 3).unwrap();
        assert!(reports.iter().all(|r| r.membership && r.leading_ok), "{reports:?}");
        assert!(indep.iter().all(|x| x.1));
    }

    #[test]
    fn prop4_instances() {
        let v = prop4_check(1, 1, Some(Q::int(-1))).unwrap();
        assert!(v.nontrivial);
        let v = prop4_check(2, 1, Some(Q::frac(-1, 2))).unwrap();
        assert_eq!(v.families, vec![(2, 1, true)]);
        let v = prop4_check(1, 1, None).unwrap();
        assert!(!v.nontrivial, "{v:?}");
    }
}
