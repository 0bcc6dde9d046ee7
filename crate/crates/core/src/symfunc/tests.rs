use super::*;
use crate::partitions::{signed_permutations, BilateralPartition, Partition};
use proptest::prelude::*;

fn full() -> TruncationWindow {
    TruncationWindow::unbounded()
}

fn s(text: &str) -> SeriesElement {
    SeriesElement::parse(text, full()).unwrap()
}

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

#[test]
fn complete_homogeneous_examples() {
    assert_eq!(complete_homogeneous(0, &full()), s("1"));
    assert!(complete_homogeneous(-3, &full()).is_zero());
    assert_eq!(complete_homogeneous(2, &full()), s("x2 + 1/2*x1^2"));
    assert_eq!(complete_homogeneous(3, &full()), s("x3 + x1*x2 + 1/6*x1^3"));
}

// Oracle: expand exp(Σ x_n t^n) with a formal t carried as z1 and read off
// the coefficient of t^i.
#[test]
fn complete_homogeneous_matches_exponential() {
    let w = full().with_x_weight(7).with_bound(Var::Z(1), 0, 7);
    let mut arg = SeriesElement::zero(w.clone());
    for n in 1..=7 {
        arg.add_term(Monomial::var(Var::X(n), 1).with(Var::Z(1), n as i32), q(1));
    }
    let e = arg.exp().unwrap();
    for i in 0..=7 {
        let coeff = e
            .filter(|m| m.exponent(Var::Z(1)) == i)
            .map_monomials(full(), |m| m.clone().with(Var::Z(1), 0));
        assert_eq!(coeff, complete_homogeneous(i as i64, &full()), "i={i}");
    }
}

#[test]
fn schur_examples() {
    assert_eq!(schur(&Partition::empty(), &full()), s("1"));
    assert_eq!(schur(&p(&[1]), &full()), s("x1"));
    assert_eq!(schur(&p(&[1, 1]), &full()), s("1/2*x1^2 - x2"));
    assert_eq!(schur(&p(&[2]), &full()), s("1/2*x1^2 + x2"));
    for lambda in Partition::all_up_to(6, 6) {
        let sl = schur(&lambda, &full());
        assert!(sl.terms().keys().all(|m| m.x_weight() == lambda.weight()));
    }
}

fn det_poly(n: usize, entry: impl Fn(usize, usize) -> SeriesElement) -> SeriesElement {
    let mut acc = SeriesElement::zero(full());
    for (sign, perm) in signed_permutations(n, |_, _| true) {
        let mut prod = SeriesElement::one(full());
        for (i, &j) in perm.iter().enumerate() {
            prod = &prod * &entry(i, j);
        }
        acc += &prod.scale(&q(sign as i64));
    }
    acc
}

fn substitute_power_sums(f: &SeriesElement, k: usize) -> SeriesElement {
    let mut out = SeriesElement::zero(full());
    for (m, c) in f.terms() {
        let mut prod = SeriesElement::constant(c.clone(), full());
        for (i, &e) in m.x_exponents().iter().enumerate() {
            let n = i as u32 + 1;
            let pn = power_sum(n, Block::Z(k), false, &full()).scale(&q_frac(1, n as i64));
            for _ in 0..e {
                prod = &prod * &pn;
            }
        }
        out += &prod;
    }
    out
}

#[test]
fn schur_agrees_with_bialternant() {
    for k in 1..=3usize {
        let mut delta = SeriesElement::one(full());
        for i in 1..=k {
            for j in i + 1..=k {
                delta = &delta * &s(&format!("z{i} - z{j}"));
            }
        }
        for lambda in Partition::all_up_to(6, 6) {
            let lhs = substitute_power_sums(&schur(&lambda, &full()), k);
            if lambda.length() > k {
                assert!(lhs.is_zero(), "{lambda} k={k}");
                continue;
            }
            let alt = det_poly(k, |i, j| {
                let e = lambda.part(j) as i32 + (k - 1 - j) as i32;
                SeriesElement::term(Monomial::var(Var::Z(i + 1), e), q(1), full())
            });
            assert_eq!(&lhs * &delta, alt, "{lambda} k={k}");
            assert_eq!(classical_schur(&lambda, Block::Z(k)), lhs, "{lambda} k={k}");
        }
    }
}

#[test]
fn extended_schur_examples() {
    for i in -4..=4 {
        let mu = BilateralPartition::new(vec![i]).unwrap();
        assert_eq!(
            extended_schur(&mu, Block::Z(1), &full()).unwrap(),
            SeriesElement::term(Monomial::var(Var::Z(1), i as i32), q(1), full())
        );
    }
    let zero = BilateralPartition::new(vec![0, 0, 0]).unwrap();
    assert_eq!(extended_schur(&zero, Block::Z(3), &full()).unwrap(), s("1"));
    let mu = BilateralPartition::new(vec![0, -1]).unwrap();
    assert_eq!(extended_schur(&mu, Block::Z(2), &full()).unwrap(), s("z1^-1 + z2^-1"));
    assert_eq!(extended_schur(&mu, Block::W(2), &full()).unwrap(), s("w1 + w2"));
    assert!(extended_schur(&mu, Block::Z(3), &full()).is_err());
    for lambda in Partition::all_up_to(4, 2) {
        let parts: Vec<i64> = lambda.pad(2).unwrap().into_iter().map(i64::from).collect();
        let mu = BilateralPartition::new(parts).unwrap();
        assert_eq!(extended_schur(&mu, Block::Z(2), &full()).unwrap(), classical_schur(&lambda, Block::Z(2)));
    }
}

// s_μ · Δ reproduces the alternant det(z_{k+1−i}^{i_j}) with i_j = k − j + μ_j.
#[test]
fn extended_schur_alternant_identity() {
    for k in 1..=3usize {
        let delta = vandermonde(Block::Z(k), false, &full());
        let mut seen = 0;
        let mut idx = Vec::new();
        fn rec(k: usize, hi: i64, idx: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
            if idx.len() == k {
                f(idx);
                return;
            }
            for i in (-3..=hi).rev() {
                idx.push(i);
                rec(k, i - 1, idx, f);
                idx.pop();
            }
        }
        rec(k, 3, &mut idx, &mut |ind: &[i64]| {
            let mu = crate::partitions::indices_to_bilateral(ind).unwrap();
            let sm = extended_schur(&mu, Block::Z(k), &full()).unwrap();
            let alt = det_poly(k, |i, j| {
                SeriesElement::term(Monomial::var(Var::Z(k - i), ind[j] as i32), q(1), full())
            });
            assert_eq!(&sm * &delta, alt, "{mu}");
            seen += 1;
        });
        assert!(seen > 0);
    }
}

#[test]
fn power_sum_and_vandermonde_examples() {
    assert_eq!(power_sum(1, Block::Z(2), false, &full()), s("z1 + z2"));
    assert_eq!(power_sum(2, Block::W(1), true, &full()), s("w1^-2"));
    assert_eq!(power_sum(3, Block::Z(2), true, &full()), s("z1^-3 + z2^-3"));
    assert_eq!(vandermonde(Block::Z(1), false, &full()), s("1"));
    assert_eq!(vandermonde(Block::Z(2), false, &full()), s("z2 - z1"));
    assert_eq!(vandermonde(Block::W(2), true, &full()), s("w2^-1 - w1^-1"));
    assert_eq!(generating_normalizer(Block::W(2), &full()), s("w1^-1 - w2^-1"));
    assert_eq!(generating_normalizer(Block::Z(2), &full()), s("z2 - z1"));
}

#[test]
fn vandermonde_inverted_matches_displayed_quotient() {
    // ∏_{i<j}(w_i − w_j) / ∏ w_i^{l−1}
    for l in 1..=3usize {
        let mut num = SeriesElement::one(full());
        for i in 1..=l {
            for j in i + 1..=l {
                num = &num * &s(&format!("w{i} - w{j}"));
            }
        }
        let mut den = Monomial::one();
        for i in 1..=l {
            den = den.with(Var::W(i), -(l as i32 - 1));
        }
        assert_eq!(vandermonde(Block::W(l), true, &full()), num.mul_monomial(&den, &q(1)));
    }
}

fn schubert_diff(sign: i64, block: Block, degree: u32) -> DiffOperatorSeries {
    DiffOperatorSeries::from_fn(degree, sign, |n| power_sum(n, block, true, &full())).unwrap()
}

#[test]
fn exp_diff_examples() {
    let minus = schubert_diff(-1, Block::Z(1), 8);
    let plus = schubert_diff(1, Block::Z(1), 8);
    for i in 0..=6i64 {
        let si = complete_homogeneous(i, &full());
        let expected = &si - &complete_homogeneous(i - 1, &full()).mul_monomial(&Monomial::var(Var::Z(1), -1), &q(1));
        assert_eq!(apply_exp_diff(&minus, &si), expected, "i={i}");
        let mut sum = SeriesElement::zero(full());
        for j in 0..=i {
            sum += &complete_homogeneous(i - j, &full()).mul_monomial(&Monomial::var(Var::Z(1), -(j as i32)), &q(1));
        }
        assert_eq!(apply_exp_diff(&plus, &si), sum, "i={i}");
    }
    assert_eq!(apply_exp_diff(&minus, &s("1")), s("1"));
    let two = schubert_diff(-1, Block::Z(2), 4);
    assert_eq!(apply_exp_diff(&two, &s("x1")), s("x1 - z1^-1 - z2^-1"));
    assert!(DiffOperatorSeries::new(vec![s("x1")]).is_err());
}

#[test]
fn exp_diff_inverse() {
    let op = schubert_diff(1, Block::Z(2), 6);
    let neg = op.negate();
    for lambda in Partition::all_up_to(5, 5) {
        let f = schur(&lambda, &full());
        assert_eq!(apply_exp_diff(&neg, &apply_exp_diff(&op, &f)), f, "{lambda}");
    }
}

#[test]
fn schur_expand_examples() {
    let f = &schur(&p(&[1, 1]), &full()) + &schur(&p(&[2]), &full()).scale(&q(2));
    let e = schur_expand(&f, 4).unwrap();
    assert_eq!(e, [(p(&[1, 1]), q(1)), (p(&[2]), q(2))].into_iter().collect());
    let e = schur_expand(&s("x1^2"), 2).unwrap();
    assert_eq!(e, [(p(&[1, 1]), q(1)), (p(&[2]), q(1))].into_iter().collect());
    assert!(schur_expand(&SeriesElement::zero(full()), 3).unwrap().is_empty());
    assert!(matches!(schur_expand(&s("x3"), 2), Err(Error::Residual(_))));
    assert!(schur_expand(&s("x1*z1"), 4).is_err());
}

#[test]
fn schur_expand_round_trip() {
    for lambda in Partition::all_up_to(7, 7) {
        let e = schur_expand(&schur(&lambda, &full()), 7).unwrap();
        assert_eq!(e, [(lambda.clone(), q(1))].into_iter().collect(), "{lambda}");
    }
    // x_1^n = Σ f^λ S_λ with f^λ the number of standard tableaux.
    let e = schur_expand(&s("x1^4"), 4).unwrap();
    let got: Vec<i64> = Partition::all_of_weight(4).iter().map(|l| e[l].to_integer().try_into().unwrap()).collect();
    assert_eq!(got, vec![1, 3, 2, 3, 1]);
}

#[test]
fn graded_expansion_keeps_formal_parts() {
    let f = s("x1*z1 + 2*x2*xi^3 + w1^-1");
    let e = schur_expand_graded(&f);
    assert_eq!(e.len(), 4);
    assert_eq!(e[&(Monomial::var(Var::Z(1), 1), p(&[1]))], q(1));
    assert_eq!(e[&(Monomial::var(Var::Xi, 3), p(&[2]))], q(1));
    assert_eq!(e[&(Monomial::var(Var::Xi, 3), p(&[1, 1]))], q(-1));
    assert_eq!(e[&(Monomial::var(Var::W(1), -1), Partition::empty())], q(1));
}

#[test]
fn display_is_canonical() {
    let f = s("3/2*x1^2*z1^-1*xi^3");
    assert_eq!(f.to_string(), "3/2 * x1^2 * z1^-1 * xi^3");
    assert_eq!(s("x1 - w1^-1").to_string(), "x1 - w1^-1");
    assert_eq!(s("-1 + z1").to_string(), "z1 - 1");
    assert_eq!(SeriesElement::zero(full()).to_string(), "0");
    assert!(SeriesElement::parse("x1 +", full()).is_err());
    assert!(SeriesElement::parse("y2", full()).is_err());
    assert!(SeriesElement::parse("x1^-1", full()).is_err());
}

#[test]
fn window_truncates_products() {
    let w = full().with_x_weight(2).with_bound(Var::Z(1), 0, 1);
    let a = SeriesElement::parse("1 + x1 + z1", w.clone()).unwrap();
    let sq = &a * &a;
    assert_eq!(sq, SeriesElement::parse("1 + 2*x1 + x1^2 + 2*z1 + 2*x1*z1", w).unwrap());
    assert!(SeriesElement::parse("1 + x1", full()).unwrap().exp().is_err());
}

#[test]
fn exp_needs_window_to_terminate() {
    let e = s("z1").exp_with_limit(50);
    assert!(matches!(e, Err(Error::NonTerminating(50))));
    let w = full().with_bound(Var::Z(1), 0, 3);
    let e = SeriesElement::parse("z1", w.clone()).unwrap().exp().unwrap();
    assert_eq!(e, SeriesElement::parse("1 + z1 + 1/2*z1^2 + 1/6*z1^3", w).unwrap());
}

fn arb_series() -> impl Strategy<Value = SeriesElement> {
    let term = (0u32..3, 0u32..2, -2i32..3, -2i32..3, -1i32..2, -3i64..4);
    prop::collection::vec(term, 0..6).prop_map(|ts| {
        let w = TruncationWindow::unbounded()
            .with_x_weight(4)
            .with_bound(Var::Z(1), -3, 3)
            .with_bound(Var::W(1), -3, 3);
        SeriesElement::from_terms(
            ts.into_iter().map(|(a, b, z, wexp, xi, c)| {
                let m = Monomial::from_x(&[a, b]).with(Var::Z(1), z).with(Var::W(1), wexp).with(Var::Xi, xi);
                (m, q(c))
            }),
            w,
        )
    })
}

proptest! {
    #[test]
    fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert!((&a - &a).is_zero());
    }

    // Truncation commutes with multiplication when no exponent is negative.
    #[test]
    fn associativity_on_non_negative(a in arb_series(), b in arb_series(), c in arb_series()) {
        let pos = |s: &SeriesElement| s.filter(|m| m.z_degree() >= 0 && m.w_degree() >= 0 && m.xi_exponent() >= 0
            && m.z_exponents().iter().all(|&e| e >= 0) && m.w_exponents().iter().all(|&e| e >= 0));
        let (a, b, c) = (pos(&a), pos(&b), pos(&c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn parse_display_round_trip(a in arb_series()) {
        let text = a.to_string();
        let back = SeriesElement::parse(&text, a.window().clone()).unwrap();
        prop_assert_eq!(back, a);
    }
}
