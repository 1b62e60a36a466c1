use defcms::cli::{compute, Object, Opts};
use defcms::exact::{Frac, QPoly, Scalar};
use defcms::macdiff::{build_def_mr, qvar, tvar};

fn opts(system: &str, n: usize, m: usize) -> Opts {
    Opts { system: Some(system.into()), n: Some(n), m: Some(m), ..Opts::default() }
}

#[test]
fn root_system_dumps_are_stable() {
    let a = compute(Object::RootSystem, &opts("A", 2, 2)).unwrap() + "\n";
    assert_eq!(a, include_str!("golden/root_system_A11.json"));
    let d = compute(Object::RootSystem, &opts("D21", 1, 1)).unwrap() + "\n";
    assert_eq!(d, include_str!("golden/root_system_D21.json"));
}

#[test]
fn def_mr_rendering_is_stable() {
    let s = compute(Object::DefMr, &opts("A", 2, 1)).unwrap() + "\n";
    assert_eq!(s, include_str!("golden/def_mr_21.txt"));
}

#[test]
fn def_mr_on_constants() {
    // D^{1,1}(1) = (1 - qt) / ((1 - q)(1 - t)), worked out by hand.
    let q = QPoly::var(qvar());
    let t = QPoly::var(tvar());
    let one = QPoly::one();
    let want = Scalar::new(one.sub(&q.mul(&t)), one.sub(&q).mul(&one.sub(&t))).unwrap();
    let got = build_def_mr(1, 1).apply(&Frac::one());
    assert_eq!(got, Frac::from_scalar(&want));
    // A single variable: 1/(1 - q).
    let got = build_def_mr(1, 0).apply(&Frac::one());
    assert_eq!(got.to_scalar(), Some(Scalar::new(one.clone(), one.sub(&q)).unwrap()));
}
