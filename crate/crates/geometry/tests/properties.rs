use cq_core::{binomial, Matrix, Rat};
use cq_geometry::chowform::{self, chow_limit, flag_wedge, minors_proportional, plucker};
use cq_geometry::pencils::{count_degenerations, pencil_det_form, Pencil};
use cq_geometry::picard::{self, convert, pair, xi, xi_curve, Basis, CanonicalMethod, CurveClass, DivisorClass, LatticeRelations};
use cq_geometry::quadrics::{compound_matrix, random_form, stratum_codim, SymmetricForm};
use cq_geometry::random::{full_rank_int_matrix, int_matrix, rng, symmetric_int_matrix};
use cq_geometry::schubert::{duality_pair, pieri1, SchubertClass};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from_int(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cauchy_binet(seed in any::<u64>(), n in 1usize..5, k in 1usize..5) {
        prop_assume!(k <= n);
        let mut r = rng(seed);
        let a = int_matrix(&mut r, n, n, 5);
        let b = int_matrix(&mut r, n, n, 5);
        let lhs = compound_matrix(&a.mul(&b).unwrap(), k).unwrap();
        let rhs = compound_matrix(&a, k).unwrap().mul(&compound_matrix(&b, k).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compound_commutes_with_transpose(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5, k in 1usize..4) {
        prop_assume!(k <= rows.min(cols));
        let a = int_matrix(&mut rng(seed), rows, cols, 6);
        prop_assert_eq!(
            compound_matrix(&a.transpose(), k).unwrap(),
            compound_matrix(&a, k).unwrap().transpose()
        );
    }

    #[test]
    fn compound_rank_is_binomial(seed in any::<u64>(), n in 1usize..4, rank in 1usize..5, k in 1usize..5) {
        prop_assume!(rank <= n + 1 && k <= n + 1);
        let q = random_form(n, rank, seed).unwrap();
        prop_assert_eq!(q.rank(), rank);
        prop_assert_eq!(q.compound(k).unwrap().rank(), binomial(rank, k));
    }

    #[test]
    fn chow_form_is_restricted_determinant(seed in any::<u64>(), n in 2usize..5, k in 1usize..6) {
        prop_assume!(k <= n + 1);
        let mut r = rng(seed);
        let q = SymmetricForm::new(symmetric_int_matrix(&mut r, n + 1, 4)).unwrap();
        let b = full_rank_int_matrix(&mut r, n + 1, k, 3);
        let p = plucker(&b).unwrap();
        let c = q.compound(k).unwrap();
        let via_plucker = c.eval(&p.coords);
        prop_assert_eq!(&via_plucker, &q.restrict(&b).unwrap().det());
        prop_assert_eq!(via_plucker, chowform::chow_eval(&q, &b).unwrap());
    }

    #[test]
    fn proportionality_witnesses(seed in any::<u64>(), n in 2usize..4, k in 1usize..3, c in 1i64..5) {
        let a = random_form(n, n + 1, seed).unwrap();
        let b = random_form(n, n + 1, seed.wrapping_add(1)).unwrap();
        let refl = minors_proportional(&a, &a, k).unwrap().unwrap();
        prop_assert_eq!(refl.mu, Rat::one());
        let scaled = minors_proportional(&a.scale(&Rat::from_int(-c)), &a, k).unwrap().unwrap();
        prop_assert_eq!(scaled.mu, Rat::from_int(-c).pow(k as u32));
        prop_assert_eq!(scaled.lambda, Some(Rat::from_int(-c)));
        // independent random forms are not proportional
        prop_assume!(a.matrix().get(0, 0) * b.matrix().get(1, 1) != a.matrix().get(1, 1) * b.matrix().get(0, 0));
        prop_assert!(minors_proportional(&a, &b, k).unwrap().is_none());
    }

    #[test]
    fn chow_limit_ignores_scale_of_direction(seed in any::<u64>(), rank in 1usize..4, c in 1i64..7) {
        let q0 = random_form(3, rank, seed).unwrap();
        let q1 = random_form(3, 4, seed ^ 0x5eed).unwrap();
        let a = chow_limit(&q0, &q1, 2).unwrap();
        let b = chow_limit(&q0, &q1.scale(&Rat::new(c, 3)), 2).unwrap();
        prop_assert_eq!(a.valuation, b.valuation);
        prop_assert_eq!(a.point(), b.point());
    }

    #[test]
    fn basis_conversions_round_trip(n in 1usize..9, coeffs in prop::collection::vec(-20i64..20, 8)) {
        let d = DivisorClass::new(n, Basis::H, ints(&coeffs[..n])).unwrap();
        for via in [Basis::E, Basis::Mixed] {
            let there = convert(&d, via).unwrap();
            prop_assert_eq!(convert(&there, Basis::H).unwrap(), d.clone());
            prop_assert!(there.same_class(&d));
        }
    }

    #[test]
    fn duality_is_an_isometric_involution(coeffs in prop::collection::vec(-20i64..20, 3), curve in prop::collection::vec(-9i64..9, 3)) {
        let d = DivisorClass::new(3, Basis::H, ints(&coeffs)).unwrap();
        let c = CurveClass::new(3, ints(&curve)).unwrap();
        prop_assert_eq!(xi(&xi(&d).unwrap()).unwrap(), d.clone());
        prop_assert_eq!(xi_curve(&xi_curve(&c).unwrap()).unwrap(), c.clone());
        prop_assert_eq!(pair(&xi_curve(&c).unwrap(), &xi(&d).unwrap()).unwrap(), pair(&c, &d).unwrap());
    }

    #[test]
    fn pencil_discriminant_has_degree_n_plus_one(seed in any::<u64>(), n in 1usize..5) {
        let q0 = random_form(n, n + 1, seed).unwrap();
        let q1 = random_form(n, n + 1, seed ^ 0xabc).unwrap();
        prop_assume!(minors_proportional(&q0, &q1, 1).unwrap().is_none());
        let p = Pencil::new(q0, q1).unwrap();
        prop_assert_eq!(pencil_det_form(&p).unwrap().degree, n + 1);
        prop_assert_eq!(count_degenerations(&p).unwrap().total, n + 1);
    }
}

/// Partitions in the `(k+1) × (n−k)` box.
fn box_partitions(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..rows {
        let mut next = Vec::new();
        for p in &out {
            let cap = p.last().copied().unwrap_or(cols);
            for x in 0..=cap {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[test]
fn pieri_respects_the_box() {
    for n in 1..6 {
        for k in 0..n {
            for p in box_partitions(k + 1, n - k) {
                let c = SchubertClass::sigma(k, n, &p).unwrap();
                let d = pieri1(&c);
                for (q, coeff) in d.terms() {
                    assert_eq!(*coeff, 1);
                    assert!(q.len() <= k + 1 && q.iter().all(|&x| x <= n - k));
                    assert!(q.windows(2).all(|w| w[0] >= w[1]));
                }
                if !d.is_zero() {
                    assert_eq!(d.codim(), Some(p.iter().sum::<usize>() + 1));
                }
            }
        }
    }
}

#[test]
fn single_partition_pairings_are_zero_or_one() {
    let (k, n) = (1, 4);
    let parts = box_partitions(k + 1, n - k);
    let dim = (k + 1) * (n - k);
    for p in &parts {
        for q in &parts {
            if p.iter().sum::<usize>() + q.iter().sum::<usize>() != dim {
                continue;
            }
            let a = SchubertClass::sigma(k, n, p).unwrap();
            let b = SchubertClass::sigma(k, n, q).unwrap();
            let v = duality_pair(&a, &b).unwrap();
            assert!(v == 0 || v == 1);
            assert_eq!(v, duality_pair(&b, &a).unwrap());
        }
    }
}

#[test]
fn flag_curves_contracted_off_the_diagonal() {
    for n in 2..=4 {
        for k in 1..=n {
            for j in 1..=n {
                assert_eq!(flag_wedge(n, k, j).unwrap().constant, j != k, "n = {n}, k = {k}, j = {j}");
            }
        }
    }
}

#[test]
fn cartan_relations() {
    for n in 1..=8 {
        let rel = LatticeRelations::new(n);
        assert_eq!(rel.e_in_h.det().unwrap(), Rat::from_int(n as i64 + 1));
    }
}

#[test]
fn canonical_class_two_ways() {
    for n in 2..=8 {
        let a = picard::canonical(n, CanonicalMethod::Blowup).unwrap();
        let b = picard::canonical(n, CanonicalMethod::Nefbasis).unwrap();
        assert!(a.same_class(&b), "n = {n}");
        assert!(picard::is_fano(n).unwrap());
    }
}

/// Rank of `{X D Lᵗ + L D Xᵗ}`, the tangent space to the rank `<= i` locus
/// at `L D Lᵗ`, for a fixed `L` of full rank.
fn tangent_rank(m: usize, i: usize) -> usize {
    // Vandermonde, so of full column rank
    let l = Matrix::from_fn(m, i, |r, c| Rat::from_int(r as i64 + 2).pow(c as u32));
    let d = Matrix::from_fn(i, i, |r, c| if r == c { Rat::from_int(r as i64 + 1) } else { Rat::zero() });
    let ld = l.mul(&d).unwrap();
    let mut rows = Vec::new();
    for a in 0..m {
        for b in 0..i {
            let x = Matrix::from_fn(m, i, |r, c| if (r, c) == (a, b) { Rat::one() } else { Rat::zero() });
            let t = x.mul(&d).unwrap().mul(&l.transpose()).unwrap();
            let t = t.add(&ld.mul(&x.transpose()).unwrap()).unwrap();
            let mut v = Vec::new();
            for r in 0..m {
                for c in r..m {
                    v.push(t.get(r, c).clone());
                }
            }
            rows.push(v);
        }
    }
    Matrix::from_rows(rows).unwrap().rank()
}

#[test]
fn stratum_codimension_matches_tangent_space() {
    for n in 1..=4 {
        let m = n + 1;
        for i in 1..=m {
            let expected = m * (m + 1) / 2 - tangent_rank(m, i);
            assert_eq!(stratum_codim(n, i).unwrap(), expected, "n = {n}, i = {i}");
        }
    }
}
