use std::sync::Arc;

use proptest::prelude::*;

use qtorus::{CocycleContext, Cyclotomic, CyclotomicField, ExpVec};

fn field(m: u32) -> Arc<CyclotomicField> {
    CyclotomicField::new(m).unwrap()
}

fn elem(f: &Arc<CyclotomicField>, terms: &[(i64, i64)]) -> Cyclotomic {
    terms.iter().fold(Cyclotomic::zero(f), |acc, &(c, e)| &acc + &Cyclotomic::root(f, e).scale_int(c))
}

fn terms() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-5i64..=5, 0i64..12), 0..4)
}

proptest! {
    #[test]
    fn field_ring_axioms(m in prop::sample::select(vec![1u32, 3, 4, 8, 12]), a in terms(), b in terms(), c in terms()) {
        let f = field(m);
        let (a, b, c) = (elem(&f, &a), elem(&f, &b), elem(&f, &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn field_inverse(m in prop::sample::select(vec![3u32, 4, 8, 12]), a in terms()) {
        let f = field(m);
        let a = elem(&f, &a);
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn roots_have_order(m in prop::sample::select(vec![1u32, 2, 3, 4, 6, 12]), e in -30i64..30) {
        let f = field(m);
        prop_assert!(Cyclotomic::root(&f, e).pow(m as i64).unwrap().is_one());
    }

    #[test]
    fn f_is_a_bicharacter(a in prop::collection::vec(-6i64..=6, 3), b in prop::collection::vec(-6i64..=6, 3), c in prop::collection::vec(-6i64..=6, 3)) {
        let ctx = CocycleContext::new(3, 6, vec![vec![0, 1, 2], vec![-1, 0, 3], vec![-2, -3, 0]]).unwrap();
        let (a, b, c) = (ExpVec(a), ExpVec(b), ExpVec(c));
        let lhs = ctx.f(&(&a + &b), &c).unwrap();
        prop_assert_eq!(lhs, &ctx.f(&a, &c).unwrap() * &ctx.f(&b, &c).unwrap());
        prop_assert!((&ctx.f(&a, &b).unwrap() * &ctx.f(&b, &a).unwrap()).is_one());
        prop_assert_eq!(ctx.in_radf(&a), (0..3).all(|i| ctx.f(&a, &ExpVec::unit(3, i)).unwrap().is_one()));
    }
}

#[test]
fn parse_roundtrip() {
    let f = field(12);
    for s in ["0", "1", "-1/2", "3 + z", "z^5", "1/3 - 2*z^2"] {
        let x = Cyclotomic::parse(&f, s).unwrap();
        assert_eq!(Cyclotomic::parse(&f, &x.to_string()).unwrap(), x, "{s}");
    }
}
