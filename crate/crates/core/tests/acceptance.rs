//! Acceptance gate: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use defcms::diffop::{gauge_check, Model};
use defcms::exact::{Q, Scalar};
use defcms::hc::{self, HcFamily};
use defcms::integrals::{main_identity_check, perturbation_checks, IntegralFamily};
use defcms::lambda::{self, partitions};
use defcms::macdiff;
use defcms::rootsys::{Family, GRS};

type Outcome = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn sys(f: Family, n: usize, m: usize) -> GRS {
    GRS::build(f, n, m).unwrap()
}

/// The systems of criteria 1 and 2, with A given by block sizes.
fn identity_systems() -> Vec<GRS> {
    vec![
        sys(Family::A, 2, 2),
        sys(Family::A, 3, 2),
        sys(Family::A, 3, 3),
        sys(Family::BC, 1, 1),
        sys(Family::BC, 2, 1),
        sys(Family::G12, 0, 0),
        sys(Family::AB13, 0, 0),
        sys(Family::D21, 0, 0),
    ]
}

fn c01_main_identity() -> Outcome {
    for g in identity_systems() {
        let c = main_identity_check(&g, Model::Geometric);
        ensure(c.holds, || format!("{}: residue {}", g.name(), c.residue.clone().unwrap_or_default()))?;
        let perturbed = perturbation_checks(&g, Model::Geometric);
        ensure(!perturbed.is_empty(), || format!("{}: no perturbations", g.name()))?;
        for p in perturbed {
            ensure(!p.check.holds, || format!("{}: perturbation {} still satisfies the identity", g.name(), p.label))?;
        }
    }
    Ok(())
}

fn c02_gauge() -> Outcome {
    for g in identity_systems() {
        let trig = gauge_check(&g, Model::Geometric);
        ensure(trig.constant.is_some(), || format!("{}: trig remainder is not constant", g.name()))?;
        ensure(matches!(trig.sign, Some(1) | Some(-1)), || {
            format!("{}: constant {:?} vs |rho|^2 {}", g.name(), trig.constant.as_ref().map(|c| c.render()), trig.rho_norm2.render())
        })?;
        let rat = gauge_check(&g, Model::Affine);
        ensure(rat.constant.is_some(), || format!("{}: rational remainder is not constant", g.name()))?;
        println!(
            "    {}: trig sign {:?}, rational constant {}",
            g.name(),
            trig.sign,
            rat.constant.map(|c| c.render()).unwrap_or_default()
        );
    }
    Ok(())
}

fn commute_all(g: &GRS, model: Model, max: usize) -> Outcome {
    let fam = IntegralFamily::new(g, model).map_err(|e| e.to_string())?;
    let orders: Vec<usize> = fam.integrability_orders().into_iter().filter(|&p| p <= max).collect();
    let mut pairs = Vec::new();
    for (i, &p) in orders.iter().enumerate() {
        for &q in &orders[i + 1..] {
            pairs.push((p, q));
        }
    }
    let checks = fam.commute_checks(&pairs).map_err(|e| e.to_string())?;
    for ((p, q), c) in pairs.iter().zip(checks) {
        ensure(c.holds, || format!("{} {}: [L{p}, L{q}] != 0", g.name(), model.label()))?;
    }
    ensure(fam.independence(), || format!("{}: dependent leading symbols", g.name()))?;
    if g.family.is_bc_type() {
        let l3 = fam.integral(3).map_err(|e| e.to_string())?;
        ensure(l3.is_zero(), || format!("{} {}: L3 does not vanish", g.name(), model.label()))?;
    }
    Ok(())
}

fn c03_commuting_integrals() -> Outcome {
    for model in [Model::Geometric, Model::Affine] {
        for g in [sys(Family::A, 2, 1), sys(Family::A, 2, 2), sys(Family::BC, 1, 1)] {
            commute_all(&g, model, 4)?;
        }
    }
    Ok(())
}

fn c04_commutator_relation() -> Outcome {
    for model in [Model::Geometric, Model::Affine] {
        for g in [sys(Family::A, 2, 2), sys(Family::BC, 1, 1)] {
            let fam = IntegralFamily::new(&g, model).map_err(|e| e.to_string())?;
            let l2 = defcms::diffop::build_l2_display(&g, model);
            for vi in 0..fam.orbit.len() {
                for p in 1..=3 {
                    let c = fam.prop1_check_with(&l2, vi, p).map_err(|e| e.to_string())?;
                    ensure(c.holds, || format!("{} {} v{vi} p{p}", g.name(), model.label()))?;
                }
            }
        }
    }
    Ok(())
}

fn c05_hc_images() -> Outcome {
    for g in [sys(Family::A, 2, 2), sys(Family::A, 3, 2), sys(Family::BC, 1, 1)] {
        let mut fam = HcFamily::new(&g).map_err(|e| e.to_string())?;
        for p in 1..=5 {
            let z = fam.hc_image(p);
            if g.family.is_bc_type() && p % 2 == 1 {
                ensure(z.is_zero(), || format!("{}: odd image Z{p} = {}", g.name(), hc::render(&z)))?;
                continue;
            }
            let qi = hc::quasi_invariance_check(&g, &z);
            ensure(qi.holds(), || format!("{}: Z{p} {:?}", g.name(), qi))?;
            ensure(hc::highest_term_ok(&g, &z, p as u32), || format!("{}: highest term of Z{p}", g.name()))?;
        }
    }
    Ok(())
}

fn c06_bernoulli() -> Outcome {
    for g in [sys(Family::A, 2, 2), sys(Family::A, 3, 2)] {
        for r in 1..=6 {
            let y = hc::bernoulli_generator(&g, r).map_err(|e| e.to_string())?;
            ensure(hc::quasi_invariance_check(&g, &y).holds(), || format!("{}: Y{r}", g.name()))?;
        }
        let mut fam = HcFamily::new(&g).map_err(|e| e.to_string())?;
        for p in 1..=4 {
            let z = fam.hc_image(p);
            let sol = hc::express_in_generators(&g, &z, p).map_err(|e| e.to_string())?;
            ensure(sol.is_some(), || format!("{}: Z{p} outside the span", g.name()))?;
        }
    }
    Ok(())
}

fn c07_dimensions() -> Outcome {
    for (n, m) in [(1, 1), (2, 1), (2, 2)] {
        for row in lambda::dimension_table(n, m, 6) {
            ensure(row.ok, || format!("({n},{m}) N={}: {:?}", row.degree, row))?;
        }
    }
    Ok(())
}

fn c08_poincare() -> Outcome {
    for n in 1..=3 {
        for m in 1..=3 {
            let s = lambda::poincare_series(n, m, 10);
            ensure(s.agree, || format!("({n},{m}): {:?} vs {:?}", s.enumerated, s.closed_form))?;
            ensure(s.symmetric, || format!("({n},{m}) not symmetric"))?;
            let bc = lambda::bc_poincare_series(n, m, 10);
            for d in 0..=10 {
                let want = if d % 2 == 0 { s.closed_form[d / 2] } else { 0 };
                ensure(bc[d] == want, || format!("({n},{m}) BC degree {d}"))?;
            }
        }
        let numer = lambda::hilbert_numerator(n, 1, 2 * n + 3);
        for (d, &c) in numer.iter().enumerate() {
            let want = i64::from(d == 0 || (n + 2..=2 * n + 1).contains(&d));
            ensure(c == want, || format!("({n},1) numerator {numer:?}"))?;
        }
    }
    // The BC count itself, computed from the invariance conditions.
    let bc = lambda::bc_poincare_series(1, 1, 6);
    for d in 0..=6u32 {
        let dim = lambda::bc_component_dimension(1, 1, d, &lambda::KMode::Symbolic);
        ensure(dim as u64 == bc[d as usize], || format!("BC(1,1) degree {d}: dim {dim} vs {}", bc[d as usize]))?;
    }
    Ok(())
}

fn c09_super_jack() -> Outcome {
    for (n, m) in [(2, 1), (1, 2)] {
        let (reports, indep) = lambda::super_jack_checks(n, m, 5).map_err(|e| e.to_string())?;
        for r in &reports {
            ensure(r.membership && r.leading_ok, || format!("({n},{m}) {r:?}"))?;
        }
        for (w, ok) in indep {
            ensure(ok, || format!("({n},{m}) weight {w}: dependent"))?;
        }
    }
    let theta = Scalar::param("theta");
    for w in 1..=4 {
        let gs = lambda::jack_gram_schmidt(w, &theta).map_err(|e| e.to_string())?;
        for lam in partitions(w) {
            let tri = lambda::jack_polynomial(&lam, &theta, w as usize).map_err(|e| e.to_string())?;
            ensure(tri == gs[&lam], || format!("Jack {} disagrees", lam.render()))?;
        }
    }
    Ok(())
}

fn c10_common_zeros() -> Outcome {
    for (n, m, k) in [(1, 1, Q::int(-1)), (2, 1, Q::frac(-1, 2)), (2, 2, Q::frac(-1, 2)), (2, 2, Q::int(-2))] {
        let v = lambda::prop4_check(n, m, Some(k.clone())).map_err(|e| e.to_string())?;
        ensure(v.nontrivial, || format!("({n},{m}) k={k}: {v:?}"))?;
    }
    let v = lambda::prop4_check(1, 1, None).map_err(|e| e.to_string())?;
    ensure(!v.nontrivial, || format!("(1,1) generic k: {v:?}"))?;
    println!("    (1,1) generic k eliminant: {}", v.eliminant.unwrap_or_default());
    Ok(())
}

fn c11_difference_operators() -> Outcome {
    for total in 1..=4 {
        for n in 0..=total {
            let m = total - n;
            ensure(macdiff::duality_check(n, m), || format!("duality ({n},{m})"))?;
        }
    }
    for (n, m) in [(1, 0), (1, 1), (2, 1)] {
        let ok = macdiff::rootsystem_form_check(n, m).map_err(|e| e.to_string())?;
        ensure(ok, || format!("root form ({n},{m})"))?;
    }
    for n in 1..=3 {
        ensure(macdiff::m0_reduction_check(n), || format!("m=0 reduction n={n}"))?;
    }
    let lim = macdiff::differential_limit(1, 1);
    println!("    reported: q -> 1 limit for (1,1) matches the differential operator: {}", lim.matches);
    Ok(())
}

fn c12_kernel_properties() -> Outcome {
    for (name, r) in common::kernel_properties(1000) {
        r.map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "main identity and sharpness", c01_main_identity),
        (2, "gauge constant", c02_gauge),
        (3, "commuting integrals", c03_commuting_integrals),
        (4, "commutator relation with the Hamiltonian", c04_commutator_relation),
        (5, "Harish-Chandra images", c05_hc_images),
        (6, "Bernoulli generators", c06_bernoulli),
        (7, "component dimensions", c07_dimensions),
        (8, "Poincare series", c08_poincare),
        (9, "super-Jack polynomials", c09_super_jack),
        (10, "common zeros of deformed Newton sums", c10_common_zeros),
        (11, "difference operators", c11_difference_operators),
        (12, "kernel properties", c12_kernel_properties),
    ];
    let mut failed = 0;
    for (i, name, f) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {i:>2} PASS  {name} ({secs:.1}s)"),
            Err(e) => {
                failed += 1;
                println!("criterion {i:>2} FAIL  {name} ({secs:.1}s): {e}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
