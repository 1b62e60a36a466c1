//! Small worked examples across modules.

use defcms::exact::{Frac, Matrix, QPoly, Q, Scalar, Var};
use defcms::hc::{self, HcFamily};
use defcms::lambda::{self, KMode, Partition, SymFun};
use defcms::macdiff::{build_def_mr, duality_check, qvar, rootsystem_form_check};
use defcms::rootsys::{Family, Form, GVec, GRS};

fn k() -> Scalar {
    Scalar::k()
}

#[test]
fn scalar_arithmetic() {
    assert!((&k() / &k()).is_one());
    let kp1 = &k() + &Scalar::one();
    let s = &(&Scalar::one() / &kp1) + &(&k() / &kp1);
    assert!(s.is_one());
    // (2q+1)/(2s+1) with q = (k(2s+1) - 1)/2 is k.
    let sv = Scalar::param("s");
    let two_s1 = &(&Scalar::int(2) * &sv) + &Scalar::one();
    let q = &(&(&k() * &two_s1) - &Scalar::one()) / &Scalar::int(2);
    let lhs = &(&(&Scalar::int(2) * &q) + &Scalar::one()) / &two_s1;
    assert_eq!(lhs, k());
}

#[test]
fn substitution() {
    let x = Scalar::var(Var::coord("x1"));
    let y = Scalar::var(Var::coord("y1"));
    let f = &(&x * &x) - &(&y * &y);
    assert!(f.substitute(&[(Var::coord("y1"), x.clone())]).unwrap().is_zero());
    let g = &x + &(&y / &k());
    assert_eq!(g.substitute(&[(Var::coord("y1"), Scalar::zero())]).unwrap(), x);
}

#[test]
fn fraction_zero_tests() {
    let z = Var::coord("z1");
    let zp = QPoly::var(z);
    let one = QPoly::one();
    let a = Frac::from_poly(zp.mul(&zp).sub(&one)).mul(&Frac::inv_irreducible(&zp.sub(&one)));
    assert!(a.sub(&Frac::from_poly(zp.add(&one))).is_zero());
    let b = Frac::from_poly(zp.add(&one)).mul(&Frac::inv_irreducible(&zp.sub(&one)));
    assert!(!b.is_zero());
}

#[test]
fn matrix_nullity() {
    assert_eq!(Matrix::identity(2).nullity(), 0);
    assert_eq!(Matrix::zeros(3, 4).nullity(), 4);
}

#[test]
fn root_data() {
    let a10 = GRS::build(Family::A, 2, 1).unwrap();
    assert_eq!(a10.roots.len(), 6);
    let imag: Vec<_> = a10.roots.iter().filter(|r| r.imaginary).map(|r| r.v.clone()).collect();
    assert_eq!(imag.len(), 4);
    for v in &imag {
        assert!(v[2] != Q::zero(), "{v:?}");
    }
    let a11 = GRS::build(Family::A, 2, 2).unwrap();
    let d = GVec::from_ints(&[1, 0, -1, 0]);
    assert_eq!(a11.pairing(&d, &d, Form::Deformed), &Scalar::one() + &k());
    assert!(a11.pairing(&GVec::basis(4, 0), &GVec::basis(4, 0), Form::Euclidean).is_one());
    let s = a11.reflect(&d, &GVec::from_ints(&[1, -1, 0, 0]), Form::Euclidean).unwrap();
    assert_eq!(s, GVec::from_ints(&[0, -1, 1, 0]));
    let ab = GRS::build(Family::AB13, 0, 0).unwrap();
    let e4 = GVec::basis(4, 3);
    assert_eq!(ab.pairing(&e4, &e4, Form::Deformed), &Scalar::int(3) * &k());
}

#[test]
fn euclidean_reflections() {
    let g = GRS::build(Family::A, 2, 1).unwrap();
    let e1 = GVec::basis(3, 0);
    let r = g.reflect(&GVec::from_ints(&[1, -1, 0]), &e1, Form::Euclidean).unwrap();
    assert_eq!(r, GVec::basis(3, 1));
    assert_eq!(g.reflect(&e1, &e1, Form::Euclidean).unwrap(), e1.neg());
}

#[test]
fn hc_examples() {
    let g = GRS::build(Family::A, 2, 2).unwrap();
    let lam1 = QPoly::var(hc::lam(0)).map_coeffs(|c| Scalar::from_q(c.clone()));
    assert!(!hc::quasi_invariance_check(&g, &lam1).holds());
    let bc = GRS::build(Family::BC, 1, 1).unwrap();
    let z2 = HcFamily::new(&bc).unwrap().hc_image(2);
    let flip = z2.substitute(&[(hc::lam(0), lam1.neg())]);
    assert_eq!(flip, z2);
}

#[test]
fn newton_sums() {
    let (x, y) = (Var::coord("x1"), Var::coord("y1"));
    assert_eq!(
        lambda::newton_deformed(1, 1, 0).constant_value(),
        Some(&Scalar::one() + &(&Scalar::one() / &k()))
    );
    let p1 = lambda::newton_deformed(1, 1, 1);
    assert_eq!(p1.coeff(&defcms::exact::Mono::var(x)), Scalar::one());
    assert_eq!(p1.coeff(&defcms::exact::Mono::var(y)), &Scalar::one() / &k());
    for r in 1..=8 {
        assert!(lambda::lambda0_membership(&lambda::newton_deformed(2, 1, r), 2, 1));
    }
}

#[test]
fn membership_examples() {
    let xv = lambda::xvar(0);
    let yv = lambda::yvar(0);
    let x = defcms::exact::SPoly::var(xv);
    let y = defcms::exact::SPoly::var(yv);
    assert!(!lambda::lambda0_membership(&x.add(&y), 1, 1));
    assert!(!lambda::lambda0_membership(&x.mul(&y), 1, 1));
    let d = x.sub(&y);
    assert!(lambda::lambda0_membership_at(&d.pow(3), 1, 1, &Scalar::one()));
}

#[test]
fn hook_counts_and_dimensions() {
    assert_eq!(lambda::fat_hook_partitions(1, 1, 2).len(), 2);
    assert_eq!(lambda::hook_count(1, 1, 4), 4);
    assert_eq!(lambda::hook_count(2, 1, 4), 5);
    assert_eq!(lambda::component_dimension(1, 1, 2, &KMode::Symbolic), 2);
    assert_eq!(lambda::component_dimension(1, 1, 3, &KMode::Symbolic), 3);
}

#[test]
fn jack_and_super_jack_degree_one() {
    let one = Partition::parse("1").unwrap();
    assert_eq!(lambda::jack_polynomial(&one, &Scalar::param("theta"), 1).unwrap(), SymFun::p(one.clone()));
    assert_eq!(lambda::super_jack(&one, 2, 1).unwrap().poly, lambda::newton_deformed(2, 1, 1));
}

#[test]
fn difference_operator_examples() {
    let x1 = Var::coord("x1");
    let q = QPoly::var(qvar());
    let got = build_def_mr(1, 0).apply(&Frac::var(x1));
    let want = Scalar::new(q.clone(), QPoly::one().sub(&q)).unwrap();
    assert_eq!(got, Frac::var(x1).mul_scalar(&want));
    assert_eq!(build_def_mr(1, 1).len(), 2);
    assert!(duality_check(1, 1) && duality_check(2, 1) && duality_check(3, 0));
    for (n, m) in [(1, 0), (1, 1), (2, 1)] {
        assert!(rootsystem_form_check(n, m).unwrap());
    }
}
