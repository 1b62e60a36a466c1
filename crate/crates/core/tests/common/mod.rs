//! Strategies and property bodies shared by `properties.rs` and the
//! acceptance target.
#![allow(dead_code)]

use defcms::exact::{Frac, Matrix, Mono, QPoly, Q, Scalar, Var};
use defcms::lambda::Partition;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub type Prop = Result<(), TestCaseError>;

pub fn rational() -> impl Strategy<Value = Q> {
    prop_oneof![
        4 => (-40i64..40, 1i64..12).prop_map(|(n, d)| Q::frac(n, d)),
        1 => (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Q::frac(n, d)),
    ]
}

fn poly_in(vars: Vec<Var>, lo: i32, hi: i32, max_terms: usize) -> impl Strategy<Value = QPoly> {
    let nv = vars.len();
    prop::collection::vec((-6i64..7, prop::collection::vec(lo..=hi, nv)), 0..max_terms).prop_map(move |ts| {
        QPoly::from_terms(ts.into_iter().map(|(c, e)| {
            (Mono::from_pairs(vars.iter().copied().zip(e).filter(|p| p.1 != 0)), Q::int(c))
        }))
    })
}

pub fn qpoly() -> impl Strategy<Value = QPoly> {
    poly_in(vec![Var::coord("x1"), Var::coord("x2"), Var::coord("x3")], 0, 3, 5)
}

pub fn param_poly() -> impl Strategy<Value = QPoly> {
    poly_in(vec![Var::param("k"), Var::param("l1")], 0, 2, 4)
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (param_poly(), param_poly().prop_filter("nonzero", |d| !d.is_zero()))
        .prop_map(|(n, d)| Scalar::new(n, d).expect("nonzero denominator"))
}

fn binomial_mono() -> impl Strategy<Value = Mono> {
    (-2i32..=2, -2i32..=2).prop_filter("nonconstant", |&(a, b)| a != 0 || b != 0).prop_map(|(a, b)| {
        Mono::from_pairs([(Var::coord("z1"), a), (Var::coord("z2"), b)].into_iter().filter(|p| p.1 != 0))
    })
}

/// Laurent numerator over a product of binomials `1 - z^a` or `1 + z^a`.
pub fn frac() -> impl Strategy<Value = Frac> {
    let num = poly_in(vec![Var::coord("z1"), Var::coord("z2")], -2, 2, 4);
    (num, prop::collection::vec((binomial_mono(), any::<bool>()), 0..3)).prop_map(|(n, bs)| {
        bs.iter().fold(Frac::from_poly(n), |acc, (m, plus)| acc.mul(&Frac::inv_binomial(m, *plus)))
    })
}

pub fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
        let entry = (-3i64..4, -2i64..3, 0u8..3).prop_map(|(a, b, kind)| match kind {
            0 => Scalar::zero(),
            1 => Scalar::int(a),
            _ => Scalar::int(a) + Scalar::int(b) * Scalar::k(),
        });
        prop::collection::vec(prop::collection::vec(entry, c), r).prop_map(move |rows| Matrix::from_rows(rows, c))
    })
}

pub fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..8, 0..8).prop_map(Partition::new)
}

pub fn q_ring((a, b, c): (Q, Q, Q)) -> Prop {
    prop_assert_eq!(&a + &b, &b + &a);
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    prop_assert!((&a - &a).is_zero());
    if !a.is_zero() {
        prop_assert!((&a * &a.recip()).is_one());
    }
    Ok(())
}

pub fn poly_ring((a, b, c): (QPoly, QPoly, QPoly)) -> Prop {
    prop_assert_eq!(a.add(&b), b.add(&a));
    prop_assert_eq!(a.mul(&b), b.mul(&a));
    prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    prop_assert!(a.sub(&a).is_zero());
    prop_assert_eq!(a.mul(&QPoly::one()), a.clone());
    Ok(())
}

pub fn scalar_field((a, b, c): (Scalar, Scalar, Scalar)) -> Prop {
    prop_assert_eq!(&a + &b, &b + &a);
    prop_assert_eq!(&a * &b, &b * &a);
    prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    if !a.is_zero() {
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }
    Ok(())
}

/// Rebuilding from the normal form, or from a rescaled representative,
/// reproduces the same normal form.
pub fn scalar_normal_form((s, h): (Scalar, QPoly)) -> Prop {
    let again = Scalar::new(s.num().clone(), s.den().clone()).unwrap();
    prop_assert_eq!(&again, &s);
    if !h.is_zero() {
        let scaled = Scalar::new(s.num().mul(&h), s.den().mul(&h)).unwrap();
        prop_assert_eq!(&scaled, &s);
    }
    Ok(())
}

pub fn frac_ring((a, b, c): (Frac, Frac, Frac)) -> Prop {
    prop_assert_eq!(a.add(&b), b.add(&a));
    prop_assert_eq!(a.mul(&b), b.mul(&a));
    prop_assert_eq!(a.add(&b).sub(&b), a.clone());
    prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    prop_assert_eq!(a.add(&Frac::zero()), a.clone());
    prop_assert_eq!(a.mul(&Frac::one()), a.clone());
    Ok(())
}

pub fn rank_nullity(m: Matrix) -> Prop {
    prop_assert_eq!(m.rank() + m.nullity(), m.cols);
    let ker = m.kernel();
    prop_assert_eq!(ker.len(), m.nullity());
    for v in &ker {
        for i in 0..m.rows {
            let mut acc = Scalar::zero();
            for (j, x) in v.iter().enumerate() {
                acc = &acc + &(m.get(i, j) * x);
            }
            prop_assert!(acc.is_zero());
        }
    }
    Ok(())
}

pub fn conjugation(p: Partition) -> Prop {
    let c = p.conjugate();
    prop_assert_eq!(c.weight(), p.weight());
    prop_assert_eq!(c.len() as u32, p.part(0));
    prop_assert_eq!(c.conjugate(), p);
    Ok(())
}

/// Runs every kernel property with `cases` random instances each.
pub fn kernel_properties(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    fn go<S: Strategy>(cases: u32, s: S, f: impl Fn(S::Value) -> Prop) -> Result<(), String> {
        let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
        runner.run(&s, f).map_err(|e| e.to_string())
    }
    vec![
        ("rational ring axioms", go(cases, (rational(), rational(), rational()), q_ring)),
        ("polynomial ring axioms", go(cases, (qpoly(), qpoly(), qpoly()), poly_ring)),
        ("rational function field axioms", go(cases, (scalar(), scalar(), scalar()), scalar_field)),
        ("normal form idempotence", go(cases, (scalar(), param_poly()), scalar_normal_form)),
        ("factored fraction ring axioms", go(cases, (frac(), frac(), frac()), frac_ring)),
        ("rank plus nullity", go(cases, matrix(), rank_nullity)),
        ("partition conjugation", go(cases, partition(), conjugation)),
    ]
}
