use super::*;
use crate::exterior::{decreasing_tuples, IndexWindow};
use crate::fock::{fermion_to_boson, xi_shift};
use crate::partitions::{pieri_set, PieriDirection};
use crate::symfunc::{schur, Q};
use proptest::prelude::*;
use std::collections::BTreeMap;

const Z1: Var = Var::Z(1);

fn full() -> TruncationWindow {
    TruncationWindow::unbounded()
}

fn lab(m: i64, parts: &[u32]) -> FockLabel {
    FockLabel::new(m, Partition::new(parts.to_vec()).unwrap())
}

fn s(t: &str) -> SeriesElement {
    SeriesElement::parse(t, full()).unwrap()
}

fn op(kind: SchubertKind, vars: &[Var], window: TruncationWindow) -> SchubertOperator {
    SchubertOperator::new(kind, vars.to_vec(), window).unwrap()
}

fn capped(d: u32) -> TruncationWindow {
    full().with_x_weight(d)
}

fn bw(idx: &[i64], window: &TruncationWindow) -> WedgeElement {
    WedgeElement::from_monomial(WedgeMonomial::new(Flavor::B, idx.to_vec()).unwrap(), window.clone())
}

fn wterm(idx: &[i64], c: &str, window: &TruncationWindow) -> WedgeElement {
    bw(idx, window).scale(&SeriesElement::parse(c, window.clone()).unwrap())
}

fn conjugate(p: &Partition) -> Partition {
    let n = p.part(0) as usize;
    Partition::new((0..n).map(|i| p.parts().iter().filter(|&&x| x as usize > i).count() as u32).collect::<Vec<_>>()).unwrap()
}

/// Kernel as a map, for comparisons.
fn kernel_map(kind: SchubertKind, label: &FockLabel, budget: u32) -> BTreeMap<(FockLabel, u32), i64> {
    label_kernel(kind, label, budget).iter().map(|(l, e, c)| ((l.clone(), *e), *c)).collect()
}

/// Strip oracle: horizontal strips for σ±, vertical strips with sign for σ̄±.
fn strip_oracle(kind: SchubertKind, label: &FockLabel, budget: u32) -> BTreeMap<(FockLabel, u32), i64> {
    let lam = &label.lambda;
    let mut out = BTreeMap::new();
    for i in 0..=budget.min(lam.weight() + budget) {
        let (set, sign): (Vec<Partition>, i64) = match kind {
            SchubertKind::Plus => (pieri_set(lam, lam.length() + 1, i, PieriDirection::Plus).unwrap().into_iter().collect(), 1),
            SchubertKind::Minus => (pieri_set(lam, lam.length(), i, PieriDirection::Minus).unwrap().into_iter().collect(), 1),
            SchubertKind::BarPlus | SchubertKind::BarMinus => {
                let c = conjugate(lam);
                let (r, dir) = if kind == SchubertKind::BarPlus {
                    (c.length() + 1, PieriDirection::Plus)
                } else {
                    (c.length(), PieriDirection::Minus)
                };
                let set = pieri_set(&c, r, i, dir).unwrap().iter().map(conjugate).collect();
                (set, if i % 2 == 0 { 1 } else { -1 })
            }
        };
        for mu in set {
            out.insert((FockLabel::new(label.charge, mu), i), sign);
        }
    }
    out
}

/// Hasse–Schmidt oracle at a deep block: every factor above a fixed tail
/// transforms, and the tail itself stays put.
fn deep_oracle(kind: SchubertKind, label: &FockLabel, budget: u32) -> BTreeMap<(FockLabel, u32), i64> {
    let r = label.weight() as usize + budget as usize + 1;
    let block = label.block(r);
    let tail = label.charge - r as i64;
    let mut out: BTreeMap<(FockLabel, u32), i64> = BTreeMap::new();
    fn rec(
        kind: SchubertKind,
        block: &[i64],
        tail: i64,
        pos: usize,
        cur: &mut Vec<i64>,
        spent: u32,
        sign: i64,
        budget: u32,
        out: &mut BTreeMap<(FockLabel, u32), i64>,
    ) {
        if pos == block.len() {
            if let Some((ns, l)) = normal_order(cur, tail) {
                *out.entry((l, spent)).or_default() += sign * ns as i64;
            }
            return;
        }
        for (j, cost, s) in factor_image(kind, block[pos], budget - spent) {
            cur.push(j);
            rec(kind, block, tail, pos + 1, cur, spent + cost, sign * s as i64, budget, out);
            cur.pop();
        }
    }
    rec(kind, &block, tail, 0, &mut Vec::new(), 0, 1, budget, &mut out);
    out.retain(|_, c| *c != 0);
    out
}

#[test]
fn exterior_examples() {
    let w = full().with_bound(Z1, -3, 3);
    let bar_plus = op(SchubertKind::BarPlus, &[Z1], w.clone());
    assert_eq!(apply_on_exterior(&bar_plus, &bw(&[0], &w)).unwrap(), bw(&[0], &w).add(&wterm(&[1], "-z1", &w)));
    let bar_minus = op(SchubertKind::BarMinus, &[Z1], w.clone());
    assert_eq!(apply_on_exterior(&bar_minus, &bw(&[0], &w)).unwrap(), bw(&[0], &w).add(&wterm(&[-1], "-z1^-1", &w)));
    let w2 = full().with_bound(Z1, -2, 2);
    let plus = op(SchubertKind::Plus, &[Z1], w2.clone());
    let got = apply_on_exterior(&plus, &bw(&[1, 0], &w2)).unwrap();
    let want = bw(&[1, 0], &w2).add(&wterm(&[2, 0], "z1", &w2)).add(&wterm(&[3, 0], "z1^2", &w2));
    assert_eq!(got, want);
    assert!(apply_on_exterior(&op(SchubertKind::Plus, &[Z1], full()), &bw(&[0], &full())).is_err());
}

#[test]
fn exterior_inverse_pairs() {
    let w = full().with_bound(Z1, -4, 4);
    for idx in decreasing_tuples(2, IndexWindow::new(-2, 2)).into_iter().chain(decreasing_tuples(3, IndexWindow::new(-2, 2))) {
        let u = bw(&idx, &w);
        for kind in [SchubertKind::Plus, SchubertKind::Minus] {
            let a = op(kind, &[Z1], w.clone());
            let b = op(kind.inverse(), &[Z1], w.clone());
            assert_eq!(apply_on_exterior(&a, &apply_on_exterior(&b, &u).unwrap()).unwrap(), u);
            assert_eq!(apply_on_exterior(&b, &apply_on_exterior(&a, &u).unwrap()).unwrap(), u);
        }
    }
}

#[test]
fn fock_examples() {
    let w = full().with_bound(Z1, -3, 3);
    let f = FockElement::basis(FockLabel::vacuum(5), w.clone());
    assert_eq!(apply_on_fock(&op(SchubertKind::Minus, &[Z1], w.clone()), &f).unwrap(), f);
    assert_eq!(apply_on_fock(&op(SchubertKind::BarMinus, &[Z1], w.clone()), &f).unwrap(), f);
    let g = apply_on_fock(&op(SchubertKind::BarPlus, &[Z1], w.clone()), &FockElement::basis(FockLabel::vacuum(0), w.clone())).unwrap();
    assert_eq!(g.to_string(), "F[0;] - F[0;1] z1 + F[0;1,1] z1^2 - F[0;1,1,1] z1^3");
    let g = apply_on_fock(&op(SchubertKind::Plus, &[Z1], w.clone()), &FockElement::basis(lab(0, &[1]), w.clone())).unwrap();
    assert_eq!(g.to_string(), "F[0;1] + F[0;1,1] z1 + F[0;2] z1 + F[0;2,1] z1^2 + F[0;3] z1^2 + F[0;3,1] z1^3 + F[0;4] z1^3");
    let unbounded = op(SchubertKind::Plus, &[Z1], full());
    assert!(apply_on_fock(&unbounded, &FockElement::basis(FockLabel::vacuum(0), full())).is_err());
}

#[test]
fn kernels_match_strips() {
    for m in [-1, 0, 2] {
        for lambda in Partition::all_up_to(5, 5) {
            let label = FockLabel::new(m, lambda);
            for kind in [SchubertKind::Plus, SchubertKind::BarPlus, SchubertKind::Minus, SchubertKind::BarMinus] {
                for budget in [0, 1, 3] {
                    assert_eq!(kernel_map(kind, &label, budget), strip_oracle(kind, &label, budget), "{kind} {label} {budget}");
                }
            }
        }
    }
}

#[test]
fn kernels_match_deep_expansion() {
    for m in [-1, 1] {
        for lambda in Partition::all_up_to(3, 3) {
            let label = FockLabel::new(m, lambda);
            for kind in [SchubertKind::Plus, SchubertKind::BarPlus, SchubertKind::Minus, SchubertKind::BarMinus] {
                for budget in [1, 3] {
                    assert_eq!(kernel_map(kind, &label, budget), deep_oracle(kind, &label, budget), "{kind} {label} {budget}");
                }
            }
        }
    }
}

#[test]
fn fock_inverse_pairs() {
    let d = 6;
    let w = capped(d).with_bound(Z1, -(d as i32), d as i32);
    for m in -1..=1 {
        for lambda in Partition::all_up_to(4, 4) {
            let f = FockElement::basis(FockLabel::new(m, lambda), w.clone());
            for kind in [SchubertKind::Plus, SchubertKind::BarPlus, SchubertKind::Minus, SchubertKind::BarMinus] {
                let a = op(kind, &[Z1], w.clone());
                let back = apply_on_fock(&a.inverse(), &apply_on_fock(&a, &f).unwrap()).unwrap();
                assert_eq!(back, f, "{kind} on {f}");
            }
        }
    }
}

#[test]
fn multivariate_inverse() {
    let w = capped(5).with_bound(Var::Z(1), -5, 5).with_bound(Var::Z(2), -5, 5);
    let vars = [Var::Z(1), Var::Z(2)];
    for label in [lab(0, &[]), lab(1, &[2, 1]), lab(-1, &[1, 1])] {
        let f = FockElement::basis(label, w.clone());
        for kind in [SchubertKind::Plus, SchubertKind::Minus] {
            let a = op(kind, &vars, w.clone());
            assert_eq!(apply_on_fock(&a.inverse(), &apply_on_fock(&a, &f).unwrap()).unwrap(), f);
        }
    }
}

#[test]
fn xi_commutation() {
    let w = capped(5).with_bound(Z1, -5, 5);
    for label in [lab(0, &[]), lab(2, &[2, 1]), lab(-1, &[1, 1, 1]), lab(1, &[3])] {
        let f = FockElement::basis(label, w.clone());
        for kind in [SchubertKind::Plus, SchubertKind::BarPlus, SchubertKind::Minus, SchubertKind::BarMinus] {
            let a = op(kind, &[Z1], w.clone());
            for p in [-2, 1, 3] {
                assert_eq!(xi_shift(p, &apply_on_fock(&a, &f).unwrap()), apply_on_fock(&a, &xi_shift(p, &f)).unwrap());
            }
        }
    }
}

#[test]
fn boson_examples() {
    let w = full();
    let bar = op(SchubertKind::BarMinus, &[Z1], w.clone());
    let s2 = schur(&Partition::row(2), &w);
    let s1 = schur(&Partition::row(1), &w);
    assert_eq!(apply_on_boson(&bar, &s2).unwrap(), &s2 - &s1.mul_monomial(&Monomial::var(Z1, -1), &q(1)));
    let minus_w = op(SchubertKind::Minus, &[Var::W(1)], w.clone());
    assert_eq!(apply_on_boson(&minus_w, &s("1")).unwrap(), s("1"));
    let two = op(SchubertKind::BarMinus, &[Var::Z(1), Var::Z(2)], w.clone());
    assert_eq!(apply_on_boson(&two, &s("x1")).unwrap(), s("x1 - z1^-1 - z2^-1"));
    assert!(apply_on_boson(&op(SchubertKind::Plus, &[Z1], w), &s("x1")).is_err());
}

#[test]
fn eigen_multiplier_examples() {
    let w = capped(3).with_bound(Var::Z(1), 0, 3).with_bound(Var::Z(2), 0, 3).with_bound(Var::W(1), 0, 3);
    let e = eigen_multiplier(SchubertKind::Plus, &[Z1], &w).unwrap();
    assert_eq!(e.coefficient(&Monomial::var(Z1, 1).with(Var::X(1), 1)), q(1));
    let e = eigen_multiplier(SchubertKind::BarPlus, &[Var::W(1)], &w).unwrap();
    assert_eq!(e.coefficient(&Monomial::var(Var::W(1), 1).with(Var::X(1), 1)), q(-1));
    let e = eigen_multiplier(SchubertKind::Plus, &[Var::Z(1), Var::Z(2)], &w).unwrap();
    let z1z2 = e.filter(|m| m.exponent(Var::Z(1)) == 1 && m.exponent(Var::Z(2)) == 1);
    assert_eq!(z1z2, s("x1^2*z1*z2").restrict(&w));
    assert!(eigen_multiplier(SchubertKind::Plus, &[Z1], &full()).is_err());
    assert!(eigen_multiplier(SchubertKind::Minus, &[Z1], &w).is_err());
}

#[test]
fn fermion_boson_consistency() {
    let d = 5;
    let vars = [Var::Z(1), Var::Z(2)];
    let w = capped(d).with_bound(Var::Z(1), -(d as i32), d as i32).with_bound(Var::Z(2), -(d as i32), d as i32);
    for label in [lab(0, &[]), lab(1, &[2]), lab(-2, &[2, 1]), lab(0, &[1, 1, 1])] {
        let f = FockElement::basis(label, w.clone());
        let g = fermion_to_boson(&f, Some(d));
        for kind in [SchubertKind::Minus, SchubertKind::BarMinus] {
            let a = op(kind, &vars, w.clone());
            assert_eq!(fermion_to_boson(&apply_on_fock(&a, &f).unwrap(), Some(d)), apply_on_boson(&a, &g).unwrap());
        }
        for kind in [SchubertKind::Plus, SchubertKind::BarPlus] {
            let a = op(kind, &vars, w.clone());
            let lhs = fermion_to_boson(&apply_on_fock(&a, &f).unwrap(), Some(d));
            let rhs = g.mul_series(&eigen_multiplier(kind, &vars, &w).unwrap());
            assert_eq!(lhs, rhs, "{kind} on {f}");
        }
    }
}

#[test]
fn bar_minus_is_multiplicative_on_schur() {
    let w = full();
    let a = op(SchubertKind::BarMinus, &[Z1], w.clone());
    let image = |i: i64| -> SeriesElement {
        if i < 0 {
            SeriesElement::zero(w.clone())
        } else {
            apply_on_boson(&a, &schur(&Partition::row(i as u32), &w)).unwrap()
        }
    };
    for lambda in Partition::all_up_to(5, 3) {
        let n = lambda.length();
        let entry = |row: usize, col: usize| lambda.part(col) as i64 - col as i64 + row as i64;
        let mut det = SeriesElement::zero(w.clone());
        for (sign, perm) in signed_permutations(n, |_, _| true) {
            let mut t = SeriesElement::constant(q(sign as i64), w.clone());
            for (col, &row) in perm.iter().enumerate() {
                t = t.mul_series(&image(entry(row, col)));
            }
            det += &t;
        }
        assert_eq!(apply_on_boson(&a, &schur(&lambda, &w)).unwrap(), det, "{lambda}");
    }
}

#[test]
fn giambelli_reproduces_labels() {
    for m in -3..=3 {
        for lambda in Partition::all_up_to(6, 6) {
            let want = FockElement::basis(FockLabel::new(m, lambda.clone()), full());
            assert_eq!(giambelli(m, &lambda, &full()), want, "{lambda} at {m}");
        }
    }
}

#[test]
fn sigma_coefficients() {
    let f = FockElement::basis(FockLabel::vacuum(0), full());
    assert_eq!(sigma_coefficient(1, &f), FockElement::basis(lab(0, &[1]), full()));
    assert!(sigma_coefficient(-1, &f).is_zero());
    let two = sigma_coefficient(1, &sigma_coefficient(1, &f));
    let want = FockElement::basis(lab(0, &[2]), full()).add(&FockElement::basis(lab(0, &[1, 1]), full()));
    assert_eq!(two, want);
}

#[test]
fn display_and_parse() {
    for kind in [SchubertKind::Plus, SchubertKind::BarPlus, SchubertKind::Minus, SchubertKind::BarMinus] {
        assert_eq!(kind.to_string().parse::<SchubertKind>().unwrap(), kind);
    }
    assert!("sigma".parse::<SchubertKind>().is_err());
    assert_eq!(op(SchubertKind::BarPlus, &[Var::W(1), Var::W(2)], full()).to_string(), "sbar+(w1,w2)");
    assert!(SchubertOperator::new(SchubertKind::Plus, vec![], full()).is_err());
    assert!(SchubertOperator::new(SchubertKind::Plus, vec![Var::X(1)], full()).is_err());
}

proptest! {
    #[test]
    fn leibniz_on_wedges(
        a in prop::collection::btree_set(-3i64..4, 1..3),
        b in prop::collection::btree_set(-3i64..4, 1..3),
        k in 0usize..4,
    ) {
        let kind = [SchubertKind::Plus, SchubertKind::BarPlus, SchubertKind::Minus, SchubertKind::BarMinus][k];
        let w = full().with_bound(Z1, -3, 3);
        let u = bw(&a.into_iter().rev().collect::<Vec<_>>(), &w);
        let v = bw(&b.into_iter().rev().collect::<Vec<_>>(), &w);
        let o = op(kind, &[Z1], w);
        let lhs = apply_on_exterior(&o, &wedge(&u, &v).unwrap()).unwrap();
        let rhs = wedge(&apply_on_exterior(&o, &u).unwrap(), &apply_on_exterior(&o, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fock_action_is_linear(m in -2i64..3, i in 0usize..7, j in 0usize..7, c in -3i64..4) {
        let parts = Partition::all_up_to(3, 3);
        let w = capped(5).with_bound(Z1, -5, 5);
        let f = FockElement::basis(FockLabel::new(m, parts[i].clone()), w.clone());
        let g = FockElement::basis(FockLabel::new(m + 1, parts[j].clone()), w.clone()).scale_q(&Q::from_integer(c.into()));
        let o = op(SchubertKind::Plus, &[Z1], w);
        let lhs = apply_on_fock(&o, &f.add(&g)).unwrap();
        let rhs = apply_on_fock(&o, &f).unwrap().add(&apply_on_fock(&o, &g).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
