use proptest::prelude::*;

use qshap_core::enveloping::Uea;
use qshap_core::exactalg::{det_cofactor, det_fraction_free, det_multimodular, rat, ratio, PolyMatrix};
use qshap_core::shapovalov::{closed_form_det, pbw_weight_basis, shapovalov_matrix, Side};
use qshap_core::{parse_poly, AlgebraKind, Polynomial, Rational, RootVector};

const ARITY: usize = 3;

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, ARITY), -30i64..30, 1i64..7), 0..7).prop_map(|terms| {
        Polynomial::from_terms(ARITY, terms.into_iter().map(|(e, n, d)| (e, ratio(n, d))))
    })
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..2, ARITY), -4i64..5, 1i64..3), 0..3).prop_map(|terms| {
        Polynomial::from_terms(ARITY, terms.into_iter().map(|(e, n, d)| (e, ratio(n, d))))
    })
}

fn matrix(n: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(small_poly(), n * n).prop_map(move |es| {
        let rows = es.chunks(n).map(<[Polynomial]>::to_vec).collect();
        PolyMatrix::from_rows(ARITY, rows).unwrap()
    })
}

/// Leibniz formula, the oracle for every determinant routine.
fn leibniz(m: &PolyMatrix) -> Polynomial {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    let n = m.rows();
    let mut det = Polynomial::zero(m.arity());
    for p in perms(n) {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let mut term = Polynomial::one(m.arity());
        for (i, &j) in p.iter().enumerate() {
            term = &term * m.get(i, j);
        }
        det = if inversions % 2 == 0 { &det + &term } else { &det - &term };
    }
    det
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_round_trip(p in poly()) {
        let printed = p.to_string();
        prop_assert_eq!(parse_poly(&printed, ARITY).unwrap(), p, "printed as {}", printed);
    }

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(ARITY), a.clone());
    }

    #[test]
    fn exact_division_inverts_product(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), x in prop::collection::vec(-5i64..6, ARITY)) {
        let pt: Vec<Rational> = x.into_iter().map(rat).collect();
        let lhs = (&a * &b).evaluate(&pt).unwrap();
        prop_assert_eq!(lhs, a.evaluate(&pt).unwrap() * b.evaluate(&pt).unwrap());
    }

    #[test]
    fn determinants_agree_with_leibniz(m in (1usize..5).prop_flat_map(matrix)) {
        let oracle = leibniz(&m);
        prop_assert_eq!(det_fraction_free(&m).unwrap(), oracle.clone());
        prop_assert_eq!(det_cofactor(&m), oracle.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn multimodular_agrees_with_leibniz(m in (1usize..4).prop_flat_map(matrix)) {
        prop_assert_eq!(det_multimodular(&m).unwrap(), leibniz(&m));
    }
}

/// ±∫HC(σ(u₊)u₋) computed straight from the enveloping algebra, without the
/// bimodule shortcut used in assembly.
#[test]
fn entries_match_direct_computation() {
    for (fam, n, nus) in [("sq", 2, vec![vec![0], vec![1], vec![2]]), ("q", 2, vec![vec![1], vec![2]]), ("q", 3, vec![vec![1, 0], vec![0, 1]])] {
        let kind = AlgebraKind::parse(fam, n).unwrap();
        let uea = Uea::new(kind);
        let cl = uea.clifford();
        for nu in nus {
            let nu = RootVector(nu);
            let sm = shapovalov_matrix(&uea, kind, &nu).unwrap();
            let xs = pbw_weight_basis(&uea, Side::Minus, &nu).unwrap();
            let ys = pbw_weight_basis(&uea, Side::Plus, &nu).unwrap();
            for (i, x) in xs.iter().enumerate() {
                for (j, y) in ys.iter().enumerate() {
                    let odd = uea.element_parity(x).unwrap() && uea.element_parity(y).unwrap();
                    let mut e = cl.integral(&uea.hc_project(&uea.mul(&uea.sigma(y), x)));
                    if odd {
                        e = -e;
                    }
                    assert_eq!(sm.matrix.get(i, j), &e, "{kind} nu={nu} entry ({i},{j})");
                }
            }
        }
    }
}

/// The other placement of σ, ∫HC(σ(x_iH_I)y_jH_J), with σ(g) = -g: σ keeps
/// U(b⁻) in place, so σ(x)y lies in n⁻U and its HC vanishes once ν ≠ 0. At
/// ν = 0 both placements give a nondegenerate B_0 with the same determinant.
#[test]
fn sigma_placement_regression() {
    for (fam, n) in [("sq", 2), ("q", 2)] {
        let kind = AlgebraKind::parse(fam, n).unwrap();
        let uea = Uea::new(kind);
        let cl = uea.clifford();
        for nu in [vec![0], vec![1], vec![2]] {
            let nu = RootVector(nu);
            let xs = pbw_weight_basis(&uea, Side::Minus, &nu).unwrap();
            let ys = pbw_weight_basis(&uea, Side::Plus, &nu).unwrap();
            let rows: Vec<Vec<Polynomial>> = xs
                .iter()
                .map(|x| {
                    ys.iter()
                        .map(|y| {
                            let odd = uea.element_parity(x).unwrap() && uea.element_parity(y).unwrap();
                            let e = cl.integral(&uea.hc_project(&uea.mul(&uea.sigma(x), y)));
                            if odd { -e } else { e }
                        })
                        .collect()
                })
                .collect();
            let other = PolyMatrix::from_rows(n, rows).unwrap();
            let ours = shapovalov_matrix(&uea, kind, &nu).unwrap();
            let d_other = det_fraction_free(&other).unwrap();
            let d_ours = det_fraction_free(&ours.matrix).unwrap();
            assert!(!d_ours.is_zero());
            if nu.height() == 0 {
                assert_eq!(d_other, d_ours, "{kind}");
            } else {
                assert!((0..other.rows()).all(|i| (0..other.cols()).all(|j| other.is_zero_entry(i, j))), "{kind} nu={nu}");
            }
        }
    }
}

/// det B_ν for pq(3)/psq(3) against the q(3)/sq(3) closed form after
/// eliminating h_3 = -(h_1 + h_2).
#[test]
fn projective_kinds_follow_their_parents() {
    for (proj, parent) in [("pq", "q"), ("psq", "sq")] {
        let pk = AlgebraKind::parse(proj, 3).unwrap();
        let qk = AlgebraKind::parse(parent, 3).unwrap();
        let uea = Uea::new(pk);
        for nu in [vec![1, 0], vec![0, 1]] {
            let nu = RootVector(nu);
            let sm = shapovalov_matrix(&uea, pk, &nu).unwrap();
            // zero outside the two parity blocks
            let mut det = Polynomial::constant(pk.arity(), rat(sm.block_sign()));
            for b in sm.blocks() {
                det = &det * &det_fraction_free(&b).unwrap();
            }
            let closed = pk.project(&closed_form_det(qk, &nu).unwrap().expand()).unwrap();
            let q = det.divide_exact(&closed).unwrap_or_else(|_| panic!("{pk} nu={nu}: closed form does not divide"));
            assert!(q.is_constant() && !q.is_zero(), "{pk} nu={nu}: quotient {q}");
        }
    }
}
