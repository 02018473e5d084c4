use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use stacky::census;
use stacky::curve::{ExactHeight, LineBundle, Mobius, ProjPoint, StackyCurveP1};
use stacky::diophantine::{
    hasse_integral_check, holzer_search, is_integral_point, legendre_solvable, TernaryDiagonalForm,
    SEARCH_CEILING,
};
use stacky::vojta::{
    abc_scan, dual_feasible_check, lp_build, point_exponent_vector, radical_row, AbcTriple,
};

fn point() -> impl Strategy<Value = ProjPoint> {
    (-400i64..=400, 0i64..=400)
        .prop_filter("nonzero", |&(x, y)| x != 0 || y != 0)
        .prop_map(|(x, y)| ProjPoint::new(x, y).unwrap())
}

fn curve() -> impl Strategy<Value = StackyCurveP1> {
    prop::collection::vec(((-6i64..=6, 0i64..=6), 2u32..=7), 1..=4).prop_filter_map(
        "distinct points",
        |pairs| {
            let pts: Vec<(ProjPoint, u32)> = pairs
                .into_iter()
                .filter_map(|((x, y), m)| ProjPoint::new(x, y).ok().map(|p| (p, m)))
                .collect();
            StackyCurveP1::from_pairs(&pts).ok().filter(|c| !c.is_empty())
        },
    )
}

fn curve_and_bundle() -> impl Strategy<Value = (StackyCurveP1, LineBundle)> {
    (curve(), -3i64..=3, prop::collection::vec(0u32..100, 4)).prop_map(|(c, deg, raw)| {
        let exps = c.multiplicities().iter().zip(&raw).map(|(&m, &r)| r % m).collect();
        let b = LineBundle::new(&c, deg, exps).unwrap();
        (c, b)
    })
}

fn three_one_pairs() -> impl Strategy<Value = StackyCurveP1> {
    prop::collection::vec((-5i64..=5, 0i64..=5), 3).prop_filter_map("distinct", |v| {
        let pts: Vec<(ProjPoint, u32)> =
            v.into_iter().filter_map(|(x, y)| ProjPoint::new(x, y).ok().map(|p| (p, 2))).collect();
        StackyCurveP1::from_pairs(&pts).ok().filter(|c| c.len() == 3)
    })
}

fn is_perfect_power(n: u64, m: u32) -> bool {
    let r = n.nth_root(m);
    (r..=r + 1).any(|s| s.checked_pow(m) == Some(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn height_duality((c, b) in curve_and_bundle(), t in point()) {
        prop_assume!(!c.is_stacky_point(&t));
        let h = c.height(&b, &t).unwrap();
        let hd = c.tensor_power_height(&b, -1, &t).unwrap();
        let dp = c.dual_product(&b, &t).unwrap();
        prop_assert_eq!(h.mul(&hd), ExactHeight::from_integer(1, dp));
    }

    #[test]
    fn anticanonical_is_perturbed_at_chi(c in curve(), t in point()) {
        prop_assume!(!c.is_stacky_point(&t));
        prop_assert_eq!(
            c.anticanonical_height(&t).unwrap(),
            c.perturbed_height(&t, c.euler_char()).unwrap()
        );
    }

    #[test]
    fn stacky_part_ignores_coarse_twist((c, b) in curve_and_bundle(), t in point(), k in -3i64..=3) {
        prop_assume!(!c.is_stacky_point(&t));
        let shifted = LineBundle::new(&c, b.coarse_degree() + k, b.exponents().to_vec()).unwrap();
        prop_assert_eq!(c.stacky_part(&b, &t).unwrap(), c.stacky_part(&shifted, &t).unwrap());
        let max = BigRational::from_integer(BigInt::from(t.naive_height()));
        let factor = ExactHeight::new(1, if k >= 0 { max.pow(k as i32) } else { max.recip().pow(-k as i32) });
        prop_assert_eq!(c.height(&shifted, &t).unwrap(), c.height(&b, &t).unwrap().mul(&factor));
    }

    #[test]
    fn height_order_is_consistent(c in curve(), s in point(), t in point(), u in point()) {
        prop_assume!(!c.is_stacky_point(&s) && !c.is_stacky_point(&t) && !c.is_stacky_point(&u));
        let hs: Vec<ExactHeight> = [s, t, u].iter().map(|p| c.anticanonical_height(p).unwrap()).collect();
        for a in &hs {
            for b in &hs {
                prop_assert_eq!(a.cmp(b), b.cmp(a).reverse());
                if (a.ln() - b.ln()).abs() > 1e-6 {
                    prop_assert_eq!(a < b, a.ln() < b.ln());
                }
                for d in &hs {
                    if a <= b && b <= d {
                        prop_assert!(a <= d);
                    }
                }
            }
        }
    }

    #[test]
    fn integral_iff_lambdas_are_powers(c in curve(), t in point()) {
        prop_assume!(!c.is_stacky_point(&t));
        let local = c.local_values(&t).unwrap();
        let oracle = local.lambdas.iter().zip(c.multiplicities()).all(|(&l, m)| is_perfect_power(l, m));
        prop_assert_eq!(is_integral_point(&c, &t).unwrap(), oracle);
        prop_assert_eq!(c.stacky_part(&c.anticanonical_bundle(), &t).unwrap().is_one(), oracle);
    }

    #[test]
    fn transport_rad_bound(
        c in curve(), t in point(),
        (a, b, cc, d) in (-8i64..=8, -8i64..=8, -8i64..=8, -8i64..=8),
    ) {
        prop_assume!(a * d - b * cc != 0);
        let m = Mobius::new(a, b, cc, d).unwrap();
        prop_assume!(!c.is_stacky_point(&t));
        let rep = stacky::curve::transport_bounds(&c, &m, &t).unwrap();
        prop_assert!(rep.rad_bound_holds(), "{:?}", rep);
    }

    #[test]
    fn cover_quotient_bound(ms in prop::collection::vec(2u32..=6, 4..=5), t in point(), drop in 0usize..2) {
        let pts = ["0", "inf", "-1", "1/2", "3"];
        let desc: Vec<String> = ms.iter().zip(pts).map(|(m, p)| format!("{p}:{m}")).collect();
        let c: StackyCurveP1 = desc.join(",").parse().unwrap();
        prop_assume!(!c.is_stacky_point(&t));
        let keep: Vec<usize> = (0..c.len() - 1 - drop).collect();
        prop_assert!(c.cover_quotient(&keep, &t).unwrap().holds());
    }

    #[test]
    fn gaussian_family_lies_in_census(m in 2u32..=4, e in 6u32..=12) {
        let t = 1u64 << e;
        let found: Vec<ProjPoint> = census::nm_points(t, m, census::DEFAULT_CEILING)
            .unwrap()
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        for p in census::gaussian_power_family(t, m) {
            prop_assert!(found.contains(&p), "{} missing at T={}", p, t);
        }
    }

    #[test]
    fn legendre_agrees_with_holzer(a in 1i64..=40, b in 1i64..=40, c in 1i64..=40) {
        let f = TernaryDiagonalForm::new(a, b, -c).unwrap();
        let w = holzer_search(&f, SEARCH_CEILING).unwrap();
        prop_assert_eq!(legendre_solvable(&f).unwrap(), w.is_some());
        if let Some(w) = w {
            prop_assert_eq!(f.eval(&w.original), 0);
            prop_assert!(w.original.iter().any(|&v| v != 0));
            prop_assert!(w.within_holzer_box());
        }
    }

    #[test]
    fn hasse_reconstruction_is_integral(c in three_one_pairs()) {
        let r = hasse_integral_check(&c).unwrap();
        if let Some([x, y]) = r.integral_point {
            prop_assert!(r.soluble);
            let t = ProjPoint::new(x, y).unwrap();
            let local = c.local_values(&t).unwrap();
            for l in local.lambdas {
                prop_assert!(is_perfect_power(l, 2));
            }
        }
    }

    #[test]
    fn lp_dual_is_feasible_and_tight(ms in prop::collection::vec(2u32..=10, 1..=6), p in 0i64..=20, q in 1i64..=20) {
        let eps = BigRational::new(p.into(), q.into());
        let inst = lp_build(&ms, &eps).unwrap();
        let chk = dual_feasible_check(&inst);
        prop_assert!(chk.passes());
        let n = BigRational::from_integer(BigInt::from(ms.len() as i64 - 2));
        let inv: BigRational = ms.iter().map(|&m| BigRational::new(1.into(), m.into())).sum();
        prop_assert_eq!(inst.minus_chi(), n - inv);
    }

    #[test]
    fn point_lp_weak_duality(ms in (2u32..=9, 2u32..=9, 2u32..=9), t in point()) {
        let c = StackyCurveP1::standard(ms.0, ms.1, ms.2).unwrap();
        prop_assume!(!c.is_stacky_point(&t));
        let lp = point_exponent_vector(&c, &t).unwrap();
        prop_assert!(lp.weak_duality().unwrap());
    }

    #[test]
    fn radical_inequality(ms in (2u32..=9, 2u32..=9, 2u32..=9), t in point()) {
        let c = StackyCurveP1::standard(ms.0, ms.1, ms.2).unwrap();
        prop_assume!(!c.is_stacky_point(&t));
        let local = c.local_values(&t).unwrap();
        let row = radical_row(&c, &local);
        prop_assert!(row.holds);
        let (x, y) = (t.x() as i128, t.y() as i128);
        let rad = BigUint::from(stacky::arith::radical((x * y * (x + y)) as i64).unwrap());
        let lhs = c.canonical_height(&t).unwrap().mul(&c.anticanonical_height(&t).unwrap());
        prop_assert!(lhs <= ExactHeight::from_integer(1, rad));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn abc_triples_are_valid(n in 1u64..=200_000) {
        let hits = abc_scan(n).unwrap();
        for w in hits.windows(2) {
            prop_assert!(w[0].quality >= w[1].quality);
        }
        for h in &hits {
            prop_assert_eq!(h.a + h.b, h.c);
            prop_assert!(h.c <= n && h.a <= h.b);
            prop_assert!(h.a.gcd(&h.b).is_one());
            prop_assert_eq!(h.radical, stacky::arith::radical((h.a * h.b * h.c) as i64).unwrap());
            prop_assert!(h.is_hit());
            prop_assert_eq!(&AbcTriple::new(h.a, h.b).unwrap(), h);
        }
        prop_assert_eq!(abc_scan(n).unwrap(), hits);
    }
}
