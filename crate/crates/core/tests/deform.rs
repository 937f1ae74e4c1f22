use knotrep::deform::*;
use knotrep::exactalg::Branches;
use knotrep::foxcalc::torsion_decomposition;
use knotrep::knotio::{corpus_entry, parse_presentation, Presentation};
use knotrep::pipeline::{build_branches, float_setup};
use knotrep::QPoly;

fn knot(name: &str) -> Presentation {
    parse_presentation(corpus_entry(name).unwrap().json).unwrap()
}

#[test]
fn trefoil_deforms_to_irreducible() {
    let p = knot("3_1");
    let tol = Tolerances::default();
    let b = build_branches(&p, &QPoly::from_i64s(&[1, -1, 1]), 2, Branches::First).unwrap().remove(0);
    let s = float_setup(&p, &b, 0, &tol).unwrap();
    assert!(s.base.residual < 1e-12);
    let v = s.direction.clone().unwrap();
    let (r, _) = deform(&p, &s.base, &v, 0.01, 7, s.eigen_target, &tol).unwrap();
    eprintln!("{r:#?}");
    assert!(r.converged && r.iterations <= 15 && r.residual < 1e-10);
    assert_eq!(r.burnside_dim, 4);
    assert_eq!(r.irreducible, Some(true));
    assert!(r.metabelian_trace_test);
    assert!(r.non_metabelian);
    let (r0, _) = deform(&p, &s.base, &v, 0.0, 7, s.eigen_target, &tol).unwrap();
    eprintln!("{r0:#?}");
    assert_eq!(r0.irreducible, Some(false));
    let lad = ladder(&p, &s.base, &v, &LADDER, 7, s.eigen_target, &tol).unwrap();
    for r in &lad {
        eprintln!("t={} conv={} it={} res={:.2e} dim={}", r.t, r.converged, r.iterations, r.residual, r.burnside_dim);
    }
}

#[test]
fn knot_8_20_deforms_at_n3() {
    let p = knot("8_20");
    let tol = Tolerances::default();
    let d = torsion_decomposition(&p).unwrap();
    let f = d.factors.iter().find(|f| f.exponents == vec![2]).unwrap();
    let b = build_branches(&p, &f.factor, 3, Branches::First).unwrap().remove(0);
    let s = float_setup(&p, &b, 0, &tol).unwrap();
    let v = s.direction.clone().unwrap();
    let (r, _) = deform(&p, &s.base, &v, 0.01, 7, s.eigen_target, &tol).unwrap();
    eprintln!("{r:#?}");
    assert!(r.converged);
    assert_eq!(r.burnside_dim, 9);
}
