use ncomplex::matrix_rep::represent;
use ncomplex::series::product_bound_factor;
use ncomplex::spectral::{from_spectrum, to_spectrum};
use ncomplex::{elementary, NComplex, Tolerances, Variant};
use proptest::prelude::*;

fn algebra() -> impl Strategy<Value = (Variant, usize)> {
    prop_oneof![
        (2usize..=8).prop_map(|n| (Variant::Polar, n)),
        (1usize..=4).prop_map(|h| (Variant::Planar, 2 * h)),
    ]
}

fn numbers(count: usize) -> impl Strategy<Value = Vec<NComplex>> {
    algebra().prop_flat_map(move |(v, n)| {
        prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), count)
            .prop_map(move |xs| xs.into_iter().map(|x| NComplex::new(v, x).unwrap()).collect())
    })
}

fn close(a: &NComplex, b: &NComplex, scale: f64) -> bool {
    a.distance(b).unwrap() <= 1e-11 * scale.max(1.0)
}

proptest! {
    #[test]
    fn multiplication_commutes(u in numbers(2)) {
        let (a, b) = (&u[0], &u[1]);
        prop_assert!(close(&a.mul(b).unwrap(), &b.mul(a).unwrap(), a.modulus() * b.modulus()));
    }

    #[test]
    fn multiplication_associates(u in numbers(3)) {
        let (a, b, c) = (&u[0], &u[1], &u[2]);
        let l = a.mul(b).unwrap().mul(c).unwrap();
        let r = a.mul(&b.mul(c).unwrap()).unwrap();
        prop_assert!(close(&l, &r, a.modulus() * b.modulus() * c.modulus() * 8.0));
    }

    #[test]
    fn distributes_over_addition(u in numbers(3)) {
        let (a, b, c) = (&u[0], &u[1], &u[2]);
        let l = a.mul(&b.add(c).unwrap()).unwrap();
        let r = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
        prop_assert!(close(&l, &r, a.modulus() * (b.modulus() + c.modulus()) * 3.0));
    }

    #[test]
    fn representation_is_a_homomorphism(u in numbers(2)) {
        let (a, b) = (&u[0], &u[1]);
        let lhs = represent(&a.mul(b).unwrap());
        let rhs = represent(a).matmul(&represent(b));
        prop_assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-12 * (1.0 + represent(a).frobenius_norm() * represent(b).frobenius_norm()));
    }

    #[test]
    fn spectrum_round_trip(u in numbers(1)) {
        let back = from_spectrum(&to_spectrum(&u[0])).unwrap();
        prop_assert!(close(&back, &u[0], u[0].modulus()));
    }

    #[test]
    fn determinant_is_multiplicative(u in numbers(2)) {
        let (a, b) = (&u[0], &u[1]);
        let d = a.mul(b).unwrap().determinant();
        let e = a.determinant() * b.determinant();
        let scale = (a.modulus() * b.modulus()).powi(a.n() as i32) * 4f64.powi(a.n() as i32);
        prop_assert!((d - e).abs() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn product_bound_holds(u in numbers(2)) {
        let (a, b) = (&u[0], &u[1]);
        let f = product_bound_factor(a.variant(), a.n());
        prop_assert!(a.mul(b).unwrap().modulus() <= f * a.modulus() * b.modulus() * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn literal_round_trip(u in numbers(1)) {
        let text = u[0].to_string();
        let back: NComplex = text.parse().unwrap();
        prop_assert_eq!(back, u[0].clone());
    }

    #[test]
    fn exp_is_additive(u in numbers(2)) {
        let (a, b) = (a_small(&u[0]), a_small(&u[1]));
        let l = elementary::exp(&a.add(&b).unwrap()).unwrap();
        let r = elementary::exp(&a).unwrap().mul(&elementary::exp(&b).unwrap()).unwrap();
        prop_assert!(close(&l, &r, l.modulus() * 10.0));
    }

    #[test]
    fn inverse_inverts(u in numbers(1)) {
        let tol = Tolerances::default();
        let a = &u[0];
        if let Ok(inv) = a.inverse(&tol) {
            let one = NComplex::one(a.variant(), a.n()).unwrap();
            let cond = a.modulus() * inv.modulus();
            prop_assume!(cond < 1e6);
            prop_assert!(a.mul(&inv).unwrap().distance(&one).unwrap() <= 1e-13 * cond * a.n() as f64);
        }
    }
}

fn a_small(u: &NComplex) -> NComplex {
    u.scale(0.5).unwrap()
}
