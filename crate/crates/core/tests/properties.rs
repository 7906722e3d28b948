use intclosure::checker::{check_integral_closure, mixed_report, CheckOptions};
use intclosure::gb::max_gen_degree;
use intclosure::hilbert::graded_piece_length;
use intclosure::io::parse::parse_problem;
use intclosure::mult::{extend_to_s, Engine};
use intclosure::{GradedIdeal, Rational, Rationals};
use proptest::prelude::*;

fn pair(text: &str) -> (GradedIdeal<Rationals>, GradedIdeal<Rationals>) {
    let p = parse_problem(text).unwrap().instantiate(Rationals).unwrap();
    (p.ideal("I").unwrap().clone(), p.ideal("J").unwrap().clone())
}

fn mono(a: u32, b: u32) -> String {
    format!("x^{}*y^{b}", a + 1)
}

/// Height-one monomial pairs `I ⊆ J` in `Q[x,y]`.
fn monomial_pair() -> impl Strategy<Value = String> {
    let m = (0u32..3, 0u32..3);
    (prop::collection::vec(m.clone(), 1..3), prop::collection::vec(m, 0..3)).prop_map(|(i, extra)| {
        let i: Vec<String> = i.into_iter().map(|(a, b)| mono(a, b)).collect();
        let mut j = i.clone();
        j.extend(extra.into_iter().map(|(a, b)| mono(a, b)));
        format!("ring Q[x,y]; I = ({}); J = ({});", i.join(", "), j.join(", "))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verdict_is_robust_in_c(text in monomial_pair()) {
        let (i, j) = pair(&text);
        let eng = Engine::new();
        let base = check_integral_closure(&eng, &i, &j, &CheckOptions::default()).unwrap();
        let opts = CheckOptions { c: Some(base.c_used + 1), ..Default::default() };
        let shifted = check_integral_closure(&eng, &i, &j, &opts).unwrap();
        prop_assert_eq!(base.pair(), shifted.pair());
        prop_assert_eq!(base.rederive(), (base.finite_colength, base.closures_equal));
        if base.closures_equal == Some(true) {
            prop_assert!(base.finite_colength);
        }
    }

    #[test]
    fn reflexive_pairs_are_equal(text in monomial_pair()) {
        let (i, _) = pair(&text);
        let eng = Engine::new();
        let v = check_integral_closure(&eng, &i, &i, &CheckOptions::default()).unwrap();
        prop_assert_eq!(v.pair(), Some((true, true)));
        let m = mixed_report(&eng, &i, &i, &CheckOptions::default()).unwrap();
        prop_assert!(m.sharp_verdict && m.full_verdict);
    }

    #[test]
    fn diagonal_degree_is_monotone(text in monomial_pair(), extra in 1u32..3) {
        let (i, j) = pair(&text);
        let c = max_gen_degree(&i).unwrap().max(max_gen_degree(&j).unwrap()) + extra;
        let eng = Engine::new();
        let a = eng.diagonal_degree(&i, c).unwrap().value;
        let b = eng.diagonal_degree(&j, c).unwrap().value;
        prop_assert!(a <= b, "{} > {}", a, b);
    }

    #[test]
    fn adic_density_is_below_saturated(text in monomial_pair(), n in 1u32..4, num in 0i64..13) {
        let (i, _) = pair(&text);
        let x = Rational::new(num, 2);
        let s = Engine::new().density_sample(&i, n, &x).unwrap();
        prop_assert!(s.adic_value.signum() >= 0);
        prop_assert!(s.adic_value <= s.saturated_value);
    }

    #[test]
    fn extension_sums_graded_pieces(text in monomial_pair(), n in 1u32..3) {
        let (i, _) = pair(&text);
        let ext = extend_to_s(i.ring(), &[&i]).unwrap();
        let c = max_gen_degree(&i).unwrap() + 1;
        let direct = graded_piece_length(&ext.ideals[0], n, c * n);
        let summed: usize = (0..=c * n).map(|m| graded_piece_length(&i, n, m)).sum();
        prop_assert_eq!(direct, summed);
    }
}

#[test]
fn extension_identity_in_the_plane() {
    let (i, _) = pair("ring Q[X,Y]; I = (X^2, X*Y^2); J = (X^2, X*Y);");
    let pieces: Vec<usize> = (0..=4).map(|m| graded_piece_length(&i, 1, m)).collect();
    assert_eq!(pieces, vec![0, 0, 1, 3, 4]);
    let ext = extend_to_s(i.ring(), &[&i]).unwrap();
    assert_eq!(graded_piece_length(&ext.ideals[0], 1, 4), 8);
}

#[test]
fn adjoining_an_integral_element_keeps_the_verdict() {
    // (x^2 y)^2 = x^3 * x y^2
    let (i, j) = pair("ring Q[x,y]; I = (x^3, x*y^2); J = (x^3, x*y^2, x^2*y);");
    let eng = Engine::new();
    let v = check_integral_closure(&eng, &i, &j, &CheckOptions::default()).unwrap();
    assert_eq!(v.pair(), Some((true, true)));
    let opts = CheckOptions { c: Some(v.c_used + 1), ..Default::default() };
    assert_eq!(check_integral_closure(&eng, &i, &j, &opts).unwrap().pair(), Some((true, true)));
}

#[test]
fn corpus_files_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let spec = parse_problem(&text).unwrap();
        let again = parse_problem(&spec.to_canonical_string()).unwrap();
        assert_eq!(spec.to_canonical_string(), again.to_canonical_string(), "{}", path.display());
    }
}
