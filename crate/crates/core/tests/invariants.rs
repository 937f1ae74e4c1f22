mod common;

use std::sync::Arc;

use common::subsets;
use knotrep::cochain::{verify_hk_identity, ActionModule, Cochain};
use knotrep::cohomology::{filtration_c, last_column_quotient, module_ad, module_cyclic, AdKind};
use knotrep::deform::{first_order, newton_project, Tolerances};
use knotrep::exactalg::{on_branches, smith_normal_form, Alg, Branches, Matrix, Poly, Tower};
use knotrep::foxcalc::{fox_row, torsion_decomposition};
use knotrep::knotio::{corpus, parse_presentation, random_word, Presentation, Word, CORPUS};
use knotrep::pipeline::{build_branches, float_setup};
use knotrep::repbuilder::build_metabelian;
use knotrep::scalar::Field;
use knotrep::{QMatrix, QPoly, Rational};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> QPoly {
    let d = rng.gen_range(0..=max_deg);
    Poly::new((0..=d).map(|_| q(rng.gen_range(-3..=3))).collect())
}

#[test]
fn smith_form_random_4x4() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..1000 {
        let m = Matrix::from_fn(4, 4, |_, _| random_poly(&mut rng, 3));
        let s = smith_normal_form(&m).unwrap();
        for w in s.divisors.windows(2) {
            assert!(w[1].rem(&w[0]).unwrap().is_zero(), "case {case}: chain broken");
        }
        let mut d = Matrix::<QPoly>::zeros(4, 4);
        for (i, x) in s.divisors.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        assert_eq!(&(&s.u * &m) * &s.v, d, "case {case}");
        for x in [&s.u, &s.v] {
            let det = x.det_expand();
            assert!(det.is_constant() && !det.is_zero(), "case {case}: transform not unimodular");
        }
        // order ideal: product of divisors against the gcd of maximal minors
        let r = s.rank();
        let mut g = QPoly::zero();
        for rs in subsets(4, r) {
            for cs in subsets(4, r) {
                let minor = m.submatrix(&rs, &cs).det_expand();
                g = if g.is_zero() { minor } else { g.gcd(&minor).unwrap() };
            }
        }
        let prod = s.divisors.iter().fold(QPoly::one(), |a, b| a * b.clone());
        let g = if g.is_zero() { g } else { g.monic().unwrap() };
        if r > 0 {
            assert_eq!(prod, g, "case {case}");
        }
    }
}

#[test]
fn tower_inverse_identity_across_splits() {
    // (a^2 - 1)(a^2 - 4): reducible, so some elements are zero divisors
    let modulus = Poly::new([4, 0, -5, 0, 1].iter().map(|&c| Alg::rational(q(c))).collect());
    let base = Tower::adjoin_root(None, &modulus, "a").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut splits = 0;
    for case in 0..1000 {
        let ca: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
        let cb: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
        // every tenth element is a known zero divisor
        let ca = if case % 10 == 0 { vec![-1, 1, 0, 0] } else { ca };
        let elem = |t: &Arc<Tower>, c: &[i64]| {
            let x = t.generator();
            c.iter().rev().fold(Alg::zero(), |acc, &k| acc * x.clone() + Alg::rational(q(k)))
        };
        let res = on_branches(base.clone(), Branches::All, |t| {
            let a = elem(t, &ca);
            let b = elem(t, &cb);
            if a.is_zero() {
                return Ok(true);
            }
            let back = (a.clone() * b.clone()) * a.try_inv()?;
            Ok::<_, knotrep::exactalg::NonInvertible>(back == b)
        })
        .unwrap();
        splits += res.len() - 1;
        assert!(res.iter().all(|(_, ok)| *ok), "case {case}");
    }
    assert!(splits > 0);
}

#[test]
fn corpus_files_roundtrip() {
    for e in CORPUS {
        let s = e.presentation().to_json();
        assert_eq!(parse_presentation(&s).unwrap().to_json(), s, "{}", e.name);
    }
}

fn decomposition_key(p: &Presentation) -> Vec<(String, Vec<u32>)> {
    let d = torsion_decomposition(p).unwrap();
    d.factors.iter().map(|f| (f.factor.to_string(), f.exponents.clone())).collect()
}

#[test]
fn decomposition_invariant_under_relator_moves() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ps = corpus();
    let keys: Vec<_> = ps.iter().map(decomposition_key).collect();
    for trial in 0..1000 {
        let i = trial % ps.len();
        let p = &ps[i];
        let mut rels: Vec<Word> = p.relators.iter().map(|r| r.rotate(rng.gen_range(0..r.len().max(1)))).collect();
        rels.shuffle(&mut rng);
        let moved = p.with_relators(rels).unwrap();
        assert_eq!(decomposition_key(&moved), keys[i], "{} trial {trial}", p.name);
    }
}

fn random_sl2z(rng: &mut ChaCha8Rng) -> (QMatrix, QMatrix) {
    let mut m = QMatrix::identity(2);
    let mut inv = QMatrix::identity(2);
    for _ in 0..3 {
        let (a, b) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let up = Matrix::from_rows(vec![vec![q(1), q(a)], vec![q(0), q(1)]]);
        let lo = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(b), q(1)]]);
        let up_i = Matrix::from_rows(vec![vec![q(1), q(-a)], vec![q(0), q(1)]]);
        let lo_i = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(-b), q(1)]]);
        m = &(&m * &up) * &lo;
        inv = &(&lo_i * &up_i) * &inv;
    }
    (m, inv)
}

#[test]
fn fox_product_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = 3;
    let (imgs, invs): (Vec<_>, Vec<_>) = (0..g).map(|_| random_sl2z(&mut rng)).unzip();
    let one = QMatrix::identity(2);
    let zero = QMatrix::zeros(2, 2);
    let eval = |w: &Word| w.eval(&imgs, &invs, one.clone(), |a, b| a * b);
    for _ in 0..1000 {
        let u = random_word(&mut rng, g, 6.0);
        let v = random_word(&mut rng, g, 6.0);
        let duv = fox_row(&u.mul(&v), &imgs, &invs, &one, &zero);
        let du = fox_row(&u, &imgs, &invs, &one, &zero);
        let dv = fox_row(&v, &imgs, &invs, &one, &zero);
        let eu = eval(&u);
        for j in 0..g {
            assert_eq!(duv[j], du[j].clone() + &eu * &dv[j]);
        }
    }
}

#[test]
fn hk_identity_on_corpus_groups() {
    for (i, p) in corpus().iter().enumerate() {
        for k in 1..=8 {
            assert!(verify_hk_identity(p, k, 40, 1000 + i as u64).unwrap(), "{} k={k}", p.name);
        }
    }
}

#[test]
fn degree_zero_coboundary_squares_to_zero() {
    let p = corpus().into_iter().find(|p| p.name == "3_1").unwrap();
    let m = build_metabelian(&p, &QPoly::from_i64s(&[1, -1, 1]), 2, Branches::First).unwrap().remove(0);
    let alpha = m.data.alpha.clone();
    let modules: Vec<ActionModule<Alg>> = vec![
        ActionModule::trivial(p.num_generators()),
        ActionModule::scalar(&p.h, &alpha).unwrap(),
        module_cyclic(&p.h, &alpha, 2).unwrap(),
        module_ad(&m.special.gens, AdKind::Sl).unwrap(),
        module_ad(&m.special.gens, AdKind::Gl).unwrap(),
        filtration_c(&m.upper.gens, 0).unwrap(),
        last_column_quotient(&m.upper.gens).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for module in modules {
        let x: Vec<Alg> = (0..module.dim).map(|_| Alg::rational(q(rng.gen_range(-5..=5)))).collect();
        let c = Cochain::constant(Arc::new(module), x).unwrap();
        let dd = c.coboundary().unwrap().coboundary().unwrap();
        for _ in 0..20 {
            let a = random_word(&mut rng, p.num_generators(), 8.0);
            let b = random_word(&mut rng, p.num_generators(), 8.0);
            assert!(dd.eval(&[a, b]).iter().all(|v| v.is_zero()));
        }
    }
}

#[test]
fn cocycle_ignores_inserted_relators() {
    let p = corpus().into_iter().find(|p| p.name == "3_1").unwrap();
    let m = build_metabelian(&p, &QPoly::from_i64s(&[1, -1, 1]), 2, Branches::First).unwrap().remove(0);
    let module = Arc::new(ActionModule::scalar(&p.h, &m.data.alpha).unwrap());
    let z = Cochain::derivation(module, m.data.values.iter().map(|row| vec![row[0].clone()]).collect()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let g = p.num_generators();
    for _ in 0..200 {
        let w = random_word(&mut rng, g, 8.0);
        let cut = rng.gen_range(0..=w.len());
        let (a, b) = w.letters().split_at(cut);
        let u = random_word(&mut rng, g, 4.0);
        let r = p.relators.choose(&mut rng).unwrap().conjugate_by(&u);
        let with = Word::from_letters(a.iter().copied()).mul(&r).mul(&Word::from_letters(b.iter().copied()));
        assert_eq!(z.eval(std::slice::from_ref(&w)), z.eval(&[with]));
    }
}

#[test]
fn newton_is_quadratic_on_trefoil() {
    let p = corpus().into_iter().find(|p| p.name == "3_1").unwrap();
    let tol = Tolerances::default();
    let b = build_branches(&p, &QPoly::from_i64s(&[1, -1, 1]), 2, Branches::First).unwrap().remove(0);
    let s = float_setup(&p, &b, 0, &tol).unwrap();
    let v = s.direction.unwrap();
    for t in [0.05, 0.1, 0.2] {
        let start = first_order(&p, &s.base, &v, t, &tol).unwrap();
        let out = newton_project(&p, &start, p.meridian, &tol).unwrap();
        let h = &out.history;
        assert!(h.len() >= 3, "t={t}: {h:?}");
        for k in 1..h.len().min(5) {
            // ratios only above the rounding floor
            if h[k - 1] > 1e-7 {
                assert!(h[k] / (h[k - 1] * h[k - 1]) < 100.0, "t={t}: {h:?}");
            }
        }
    }
}

#[test]
fn alpha_one_gives_trivial_dims() {
    for p in corpus() {
        let r = knotrep::cohomology::cohomology_dims(&p, &module_cyclic(&p.h, &Alg::one(), 1).unwrap()).unwrap();
        assert_eq!(r.dims(), (1, 1, 0), "{}", p.name);
    }
}

#[test]
fn rational_field_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let a = Rational::new(rng.gen_range(1..50).into(), rng.gen_range(1..50).into());
        let b = q(rng.gen_range(-50..50));
        assert_eq!((a.clone() * b.clone()) * a.try_inv().unwrap(), b);
    }
}
