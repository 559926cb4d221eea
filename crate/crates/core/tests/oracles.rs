use drcycle::arith::qf;
use drcycle::graphs::Graph;
use drcycle::tautring::{Decoration, Space, TautClass};
use drcycle::calculus::{integrate, pair};
use drcycle::pixton::dr_cycle;
use drcycle::verify::oracle::{twisted_formula_class, lambda_g_integral, one_point_psi_integral};
use drcycle::verify::{check_conjecture_a, Verdict};

#[test]
fn dr_matches_the_original_formula() {
    let cases: [(u32, Vec<i64>, i64); 7] = [
        (1, vec![0], 0),
        (1, vec![1, -1], 0),
        (1, vec![2, -2], 0),
        (1, vec![3, -3], 1),
        (1, vec![2, -1, -1], 0),
        (2, vec![0], 0),
        (2, vec![2], 1),
    ];
    for (g, a, k) in cases {
        let r = check_conjecture_a(g, &a, k, false).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "g={g} A={a:?} k={k}: {:?}", r.witness);
        let neg = check_conjecture_a(g, &a, k, true).unwrap();
        assert_eq!(neg.verdict, Verdict::Fail, "negative control g={g} A={a:?} k={k}");
    }
}

#[test]
fn genus_one_two_point_integral() {
    // ∫ DR_1(a, -a) ψ_1 = (a² - 1)/24
    let t = Graph::trivial(1, 2);
    let mut d = Decoration::trivial(&t);
    d.psi[t.leg(0)] = 1;
    let mut psi1 = TautClass::zero(Space::moduli(1, 2));
    psi1.add_raw(&t, &d, qf(1, 1));
    for a in 0..5i64 {
        let dr = dr_cycle(1, &[a, -a], 0).unwrap();
        assert_eq!(pair(&dr, &psi1).unwrap(), qf(a * a - 1, 24), "a = {a}");
        assert_eq!(one_point_psi_integral(1, &[a, -a]), qf(a * a - 1, 24));
    }
}

#[test]
fn lambda_g_anchor() {
    // DR_g(0) = (-1)^g λ_g
    let dr = dr_cycle(1, &[0], 0).unwrap();
    assert_eq!(integrate(&dr).unwrap(), -lambda_g_integral(1));
    assert_eq!(lambda_g_integral(2), qf(7, 5760));
    assert_eq!(twisted_formula_class(1, &[0], 0, 1).unwrap(), dr);
}
