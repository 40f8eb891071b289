use proptest::prelude::*;

use superharmonic::ck::{ck_data, ck_extend, ck_extend_recursive, CkData};
use superharmonic::exactla::{kernel_rows, Ambient, RationalMatrix, Subspace};
use superharmonic::operators::{euler, laplacian, rsquare_mul};
use superharmonic::superpoly::SuperPolynomial;
use superharmonic::{Poly, Rational, SuperMonomial, SuperSignature};

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Random polynomial on `R^{m|2n}` with degrees below 3 in each variable.
fn poly(m: usize, n: usize) -> impl Strategy<Value = Poly> {
    let sig = SuperSignature::new(m, n).unwrap();
    let mono = (
        prop::collection::vec(0u32..3, m),
        0u64..(1 << (2 * n)),
        -4i64..5,
    );
    prop::collection::vec(mono, 0..5).prop_map(move |terms| {
        let mut acc = Poly::zero(sig);
        for (exps, mask, c) in terms {
            acc = &acc + &Poly::term(sig, SuperMonomial::new(exps, mask), q(c));
        }
        acc
    })
}

fn homogeneous(m: usize, n: usize, k: usize) -> impl Strategy<Value = Poly> {
    let sig = SuperSignature::new(m, n).unwrap();
    let basis = superharmonic::superpoly::monomial_basis(&sig, k);
    let len = basis.len();
    prop::collection::vec((0..len, -4i64..5), 0..6).prop_map(move |picks| {
        let mut acc = Poly::zero(sig);
        for (i, c) in picks {
            acc = &acc + &Poly::term(sig, basis[i].clone(), q(c));
        }
        acc
    })
}

fn sign(p: u32, r: u32) -> Rational {
    if p * r % 2 == 1 {
        q(-1)
    } else {
        q(1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn test_supercommutative(pa in 0u32..2, pb in 0u32..2, a in poly(2, 2), b in poly(2, 2)) {
        let a = poly_fixed(pa, &a);
        let b = poly_fixed(pb, &b);
        prop_assert_eq!(&a * &b, (&b * &a).scale(&sign(pa, pb)));
    }

    #[test]
    fn test_associative(a in poly(1, 2), b in poly(1, 2), c in poly(1, 2)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn test_distributive(a in poly(2, 1), b in poly(2, 1), c in poly(2, 1)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn test_graded_leibniz(pa in 0u32..2, a in poly(1, 2), b in poly(1, 2), j in 1usize..5) {
        let a = poly_fixed(pa, &a);
        let lhs = (&a * &b).d_fermionic(j).unwrap();
        let rhs = &(&a.d_fermionic(j).unwrap() * &b) + &(&a * &b.d_fermionic(j).unwrap()).scale(&sign(pa, 1));
        prop_assert_eq!(lhs, rhs);
        let lhs = (&a * &b).d_bosonic(1).unwrap();
        let rhs = &(&a.d_bosonic(1).unwrap() * &b) + &(&a * &b.d_bosonic(1).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn test_laplacian_rsquare_commutator(p in poly(2, 1)) {
        // [Δ, R²] = 4𝔼 + 2M
        let sig = p.signature();
        let lhs = &laplacian(&rsquare_mul(&p)) - &rsquare_mul(&laplacian(&p));
        let rhs = &euler(&p).scale(&q(4)) + &p.scale(&q(2 * sig.superdimension()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn test_parse_display_round_trip(p in poly(2, 2)) {
        let text = p.to_string();
        prop_assert_eq!(Poly::parse(p.signature(), &text).unwrap(), p);
    }

    #[test]
    fn test_ck_round_trip(p in homogeneous(2, 1, 4)) {
        let d = ck_data(&p, 4).unwrap();
        prop_assert_eq!(ck_extend(&d), p.clone());
        prop_assert_eq!(ck_extend_recursive(&d), p);
    }

    #[test]
    fn test_ck_linear(a in homogeneous(2, 1, 3), b in homogeneous(2, 1, 3), c in -3i64..4) {
        let da = ck_data(&a, 3).unwrap();
        let db = ck_data(&b, 3).unwrap();
        let sig = a.signature();
        let combo = CkData::new(
            sig,
            3,
            &da.trace + &db.trace.scale(&q(c)),
            &da.normal_trace + &db.normal_trace.scale(&q(c)),
            &da.laplacian + &db.laplacian.scale(&q(c)),
        ).unwrap();
        prop_assert_eq!(ck_extend(&combo), &ck_extend(&da) + &ck_extend(&db).scale(&q(c)));
    }

    #[test]
    fn test_rank_nullity(rows in prop::collection::vec(prop::collection::vec(-2i64..3, 6), 1..6)) {
        let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
        let a = RationalMatrix::from_dense(&dense);
        let kernel = kernel_rows(&a);
        prop_assert_eq!(a.rank() + kernel.len(), 6);
        for v in &kernel {
            let dense_v: Vec<Rational> = (0..6)
                .map(|j| v.iter().find(|(i, _)| *i == j).map_or(q(0), |(_, c)| c.clone()))
                .collect();
            prop_assert!(a.mul_vec(&dense_v).iter().all(|x| *x == q(0)));
        }
    }

    #[test]
    fn test_modular_dimension_identity(
        u in prop::collection::vec(prop::collection::vec(-2i64..3, 5), 0..4),
        v in prop::collection::vec(prop::collection::vec(-2i64..3, 5), 0..4),
    ) {
        let span = |rows: &Vec<Vec<i64>>| {
            let sparse = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, &c)| (i, q(c))).collect())
                .collect();
            Subspace::span(Ambient::Coordinates(5), sparse)
        };
        let (u, v) = (span(&u), span(&v));
        let s = u.sum(&v).unwrap();
        let i = u.intersect(&v).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(i.is_subspace_of(&u).unwrap() && i.is_subspace_of(&v).unwrap());
        prop_assert!(u.is_subspace_of(&s).unwrap());
    }
}

/// Drop the terms of `p` whose odd degree has the wrong parity.
fn poly_fixed(parity: u32, p: &Poly) -> Poly {
    let sig = p.signature();
    let mut acc = SuperPolynomial::zero(sig);
    for (mono, c) in p.terms() {
        if mono.odd_degree() as u32 % 2 == parity {
            acc = &acc + &Poly::term(sig, mono.clone(), c.clone());
        }
    }
    acc
}
