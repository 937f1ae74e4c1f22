use knotrep::cochain::ActionModule;
use knotrep::cohomology::*;
use knotrep::exactalg::{Alg, Branches};
use knotrep::foxcalc::torsion_decomposition;
use knotrep::knotio::{corpus, corpus_entry, parse_presentation, Presentation};
use knotrep::repbuilder::{build_metabelian, lambda_tower};
use knotrep::{QPoly, Rational};

fn knot(name: &str) -> Presentation {
    parse_presentation(corpus_entry(name).unwrap().json).unwrap()
}

fn trefoil_factor() -> QPoly {
    QPoly::from_i64s(&[1, -1, 1])
}

#[test]
fn trefoil_sl2_at_metabelian_point() {
    let p = knot("3_1");
    let m = build_metabelian(&p, &trefoil_factor(), 2, Branches::First).unwrap().remove(0);
    let sl = cohomology_dims(&p, &module_ad(&m.special.gens, AdKind::Sl).unwrap()).unwrap();
    assert_eq!(sl.dims(), (0, 1, 1));
    assert_eq!(sl.z1, 4);
    let gl = cohomology_dims(&p, &module_ad(&m.special.gens, AdKind::Gl).unwrap()).unwrap();
    assert_eq!(gl.dims(), (1, 2, 1));
    // the unscaled form has the same adjoint action
    let up = cohomology_dims(&p, &module_ad(&m.upper.gens, AdKind::Sl).unwrap()).unwrap();
    assert_eq!(up.dims(), sl.dims());
}

#[test]
fn trefoil_filtration_and_last_column() {
    let p = knot("3_1");
    let m = build_metabelian(&p, &trefoil_factor(), 2, Branches::First).unwrap().remove(0);
    let c0 = cohomology_dims(&p, &filtration_c(&m.upper.gens, 0).unwrap()).unwrap();
    assert_eq!(c0.dims(), (0, 0, 0));
    let q = cohomology_dims(&p, &last_column_quotient(&m.upper.gens).unwrap()).unwrap();
    assert_eq!(q.dims(), (0, 1, 1));
}

#[test]
fn cyclic_modules_follow_torsion_exponents() {
    for p in corpus() {
        let d = torsion_decomposition(&p).unwrap();
        let triv = cohomology_dims(&p, &ActionModule::<Rational>::trivial(p.num_generators())).unwrap();
        assert_eq!(triv.dims(), (1, 1, 0), "{}", p.name);
        for f in &d.factors {
            let t = lambda_tower(&f.factor, 1).unwrap();
            let alpha: Alg = t.level_generator(0);
            for k in 1..=3usize {
                let r = cohomology_dims(&p, &module_cyclic(&p.h, &alpha, k).unwrap()).unwrap();
                let want: usize = f.exponents.iter().map(|&x| (x as usize).min(k)).sum();
                assert_eq!(r.dims(), (0, want, want), "{} {} k={k}", p.name, f.factor);
            }
        }
    }
}

#[test]
fn direction_has_nonprincipal_corner() {
    let p = knot("3_1");
    let m = build_metabelian(&p, &trefoil_factor(), 2, Branches::First).unwrap().remove(0);
    let v = lower_left_direction(&p, &m.special.gens, &m.data.alpha, p.meridian).unwrap().unwrap();
    assert!(v[p.meridian][(1, 0)] == Alg::rational(Rational::from_integer(0.into())));
    assert!(v.iter().any(|x| x[(1, 0)] != Alg::rational(Rational::from_integer(0.into()))));
}

#[test]
fn knot_8_20_at_n3() {
    let p = knot("8_20");
    let d = torsion_decomposition(&p).unwrap();
    let f = d.factors.iter().find(|f| f.exponents == vec![2]).unwrap();
    let t0 = std::time::Instant::now();
    let m = build_metabelian(&p, &f.factor, 3, Branches::First).unwrap().remove(0);
    eprintln!("build {:?}", t0.elapsed());
    let sl = cohomology_dims(&p, &module_ad(&m.special.gens, AdKind::Sl).unwrap()).unwrap();
    eprintln!("sl {:?}", t0.elapsed());
    assert_eq!(sl.dims(), (0, 2, 2));
    assert_eq!(sl.z1, 10);
    for i in 0..=1 {
        let c = cohomology_dims(&p, &filtration_c(&m.upper.gens, i).unwrap()).unwrap();
        assert_eq!(c.dims(), (0, 0, 0), "C({i})");
    }
    let q = cohomology_dims(&p, &last_column_quotient(&m.upper.gens).unwrap()).unwrap();
    assert_eq!(q.dims(), (0, 2, 2));
    let up = cohomology_dims(&p, &module_ad(&m.upper.gens, AdKind::Sl).unwrap()).unwrap();
    assert_eq!(up.dims(), sl.dims());
}
