//! Agreement between the statement checkers.

use addbasis_core::algebra::Element;
use addbasis_core::ff::Field;
use addbasis_core::formspace::{projective_points, LinearFormSpace};
use addbasis_core::matrix::MatrixF;
use addbasis_core::perrank::{permanent, stack_matrix};
use addbasis_core::verify::{
    check_theorem5, check_theorem7, main_theorem_exhaustive_n1, replay, Part7, Verdict,
};
use serde_json::json;

#[test]
fn single_form_checks_agree() {
    // part A with one form is part 2 of the single-form statement, part B is part 1
    let f = Field::gf3();
    for m in 1..=5 {
        for c in projective_points(f, m) {
            let u = Element::linear(f, &c);
            let space = LinearFormSpace::new(f, m, vec![c.clone()]).unwrap();
            for k in 0..=2 {
                let t5 = match check_theorem5(&u, k) {
                    Ok(t5) => t5,
                    Err(_) => continue,
                };
                let a = check_theorem7(&space, k, Part7::A);
                let b = check_theorem7(&space, k, Part7::B);
                if let Ok(a) = a {
                    if k >= 1 {
                        assert_eq!(a.verdict, t5[1].verdict, "A vs 2 at {u}, k={k}");
                    }
                    assert_ne!(a.verdict, Verdict::Fail);
                }
                if let Ok(b) = b {
                    if k >= 1 {
                        assert_eq!(b.verdict, t5[0].verdict, "B vs 1 at {u}, k={k}");
                    }
                    assert_ne!(b.verdict, Verdict::Fail);
                }
            }
        }
    }
}

#[test]
fn four_scalar_bands_match_hand_computation() {
    let f = Field::gf3();
    let o = main_theorem_exhaustive_n1().unwrap();
    assert_eq!((o.verdict, o.stats.instances), (Verdict::Pass, 16));
    // every 2x2 minor of [[p r s t],[p r s t]] is 2*a*b, and the full
    // perrank of a 2x4 matrix asks for one nonzero minor
    for code in 0..16u32 {
        let vals: Vec<u8> = (0..4).map(|j| 1 + ((code >> j) & 1) as u8).collect();
        let blocks: Vec<MatrixF> = vals.iter().map(|&v| MatrixF::new(f, 1, 1, vec![v]).unwrap()).collect();
        let stack = stack_matrix(&blocks, 2).unwrap();
        let minor = stack.submatrix(&[0, 1], &[0, 1]);
        assert_eq!(permanent(&minor).unwrap().value(), f.mul(2, f.mul(vals[0], vals[1])));
    }
}

#[test]
fn synthetic_witnesses_replay() {
    let mut o = main_theorem_exhaustive_n1().unwrap();
    // the two-variable form fails outside its hypothesis
    o.statement = "thm5.1".into();
    o.counterexample = Some(json!({"field": "gf3", "m": 2, "k": 1, "part": 1, "u": "x1 + x2"}));
    assert!(replay(&o).unwrap());
    o.counterexample = Some(json!({"field": "gf3", "m": 3, "k": 1, "part": 1, "u": "x1 + x2 + x3"}));
    assert!(!replay(&o).unwrap());
    // a band of ones over GF(5) is not a counterexample
    o.statement = "conj2".into();
    let block = |v: u8| format!("field gf5\n1 1\n{v}\n");
    o.counterexample = Some(json!({"p": 5, "matrices": [block(1), block(1), block(1), block(1), block(1)]}));
    // every 4x4 minor of the 4x5 band is 4! = 24 = 4 mod 5
    assert!(!replay(&o).unwrap());
    o.counterexample = Some(json!({"p": 3, "matrices": ["not a matrix"]}));
    assert!(replay(&o).is_err());
}
