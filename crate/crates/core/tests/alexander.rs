mod common;

use common::{minor_gcd_delta, qpoly};
use knotrep::foxcalc::{alexander_polynomial, is_symmetric, torsion_decomposition};
use knotrep::knotio::{presentation_from_braid, Braid, CORPUS};
use knotrep::Rational;
use num_traits::One;

#[test]
fn corpus_delta_matches_golden_and_oracle() {
    for e in CORPUS {
        let p = e.presentation();
        let delta = alexander_polynomial(&p).unwrap();
        assert_eq!(delta, qpoly(e.alexander), "{}", e.name);
        assert_eq!(minor_gcd_delta(&p), delta, "{} oracle", e.name);
        let v = delta.eval(&Rational::one());
        assert!(v == Rational::one() || v == -Rational::one(), "{}", e.name);
        assert!(is_symmetric(&delta), "{}", e.name);
    }
}

#[test]
fn artin_presentations_agree() {
    for e in CORPUS {
        let p = presentation_from_braid(e.name, &e.braid()).unwrap();
        assert_eq!(alexander_polynomial(&p).unwrap(), qpoly(e.alexander), "{}", e.name);
    }
}

#[test]
fn braid_examples() {
    let unknot = presentation_from_braid("u", &Braid::new(2, vec![1]).unwrap()).unwrap();
    assert_eq!(alexander_polynomial(&unknot).unwrap(), qpoly(&[1]));
}

#[test]
fn decompositions() {
    for e in CORPUS {
        let d = torsion_decomposition(&e.presentation()).unwrap();
        assert!(d.blanchfield_symmetric().unwrap(), "{}", e.name);
        let mut prod = knotrep::QPoly::from_i64s(&[1]);
        for f in &d.factors {
            prod = prod * f.factor.pow(f.exponents.iter().sum());
        }
        assert_eq!(prod.scale(&d.unit), d.delta, "{}", e.name);
        println!("{}: {:?}", e.name, d.factors.iter().map(|f| (f.factor.to_string(), f.exponents.clone())).collect::<Vec<_>>());
    }
    let granny = torsion_decomposition(&knotrep::knotio::corpus_entry("3_1#3_1").unwrap().presentation()).unwrap();
    assert_eq!(granny.factors[0].exponents, vec![1, 1]);
}
