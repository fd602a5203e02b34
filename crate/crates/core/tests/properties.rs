use proptest::prelude::*;

use emergent::cli::InstanceKind;
use emergent::{
    make_unipotent, make_vector_space, solve_dilation_equation, sphere_exp, sphere_log, GeomSeriesProblem, Point, Scalar,
    SpherePoint, UnipotentMatrix,
};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-2.0f64..2.0).prop_map(|t| Scalar::new(10f64.powf(t)).unwrap())
}

fn heisenberg() -> impl Strategy<Value = UnipotentMatrix<f64>> {
    prop::collection::vec(-2.0f64..2.0, 3).prop_map(|u| UnipotentMatrix::from_upper(3, u).unwrap())
}

fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-1.0f64..1.0)
        .prop_filter("non-zero", |v| v.iter().map(|c| c * c).sum::<f64>() > 0.01)
        .prop_map(|v| {
            let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            [v[0] / n, v[1] / n, v[2] / n]
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bullet_undoes_circ_on_the_plane(a in scalar(), x in prop::array::uniform2(-5.0f64..5.0), y in prop::array::uniform2(-5.0f64..5.0)) {
        let alg = make_vector_space(2).unwrap();
        let (x, y) = (Point::vector(x.to_vec()).unwrap(), Point::vector(y.to_vec()).unwrap());
        let back = alg.bullet(a, &x, &alg.circ(a, &x, &y).unwrap()).unwrap();
        prop_assert!(alg.dist(&back, &y).unwrap() < 1e-9 * (1.0 + a.value().max(a.recip().value())));
    }

    #[test]
    fn heisenberg_left_division_and_action(a in scalar(), b in scalar(), x in heisenberg(), y in heisenberg()) {
        let alg = make_unipotent(3).unwrap();
        let (x, y) = (Point::from(x), Point::from(y));
        let back = alg.bullet(a, &x, &alg.circ(a, &x, &y).unwrap()).unwrap();
        prop_assert!(alg.dist(&back, &y).unwrap() < 1e-9);
        let lhs = alg.circ(a, &x, &alg.circ(b, &x, &y).unwrap()).unwrap();
        let rhs = alg.circ(a * b, &x, &y).unwrap();
        prop_assert!(alg.dist(&lhs, &rhs).unwrap() < 1e-9);
    }

    #[test]
    fn dilation_is_a_homomorphism(s in 0.1f64..10.0, x in heisenberg(), y in heisenberg()) {
        let lhs = x.mul(&y).dilate(&s);
        let rhs = x.dilate(&s).mul(&y.dilate(&s));
        prop_assert!(lhs.frobenius_distance(&rhs) < 1e-9 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn line_series_hits_the_scalar_fixed_point(x in -3.0f64..3.0, eps in 0.1f64..0.8) {
        let p = GeomSeriesProblem::new(
            make_vector_space(1).unwrap(),
            Point::real(0.0).unwrap(),
            Point::real(x).unwrap(),
            Scalar::new(eps).unwrap(),
            1e-11,
        );
        let sol = solve_dilation_equation(&p).unwrap();
        let s = sol.report.limit.unwrap().coordinates()[0];
        prop_assert!((s - x / (1.0 - eps)).abs() < 1e-8, "{} vs {}", s, x / (1.0 - eps));
    }

    #[test]
    fn sphere_log_inverts_exp(p in unit_vector(), q in unit_vector()) {
        let (p, q) = (SpherePoint::new(p).unwrap(), SpherePoint::new(q).unwrap());
        prop_assume!(p.angle_to(&q) < 3.0);
        let v = sphere_log(&p, &q).unwrap();
        prop_assert!((v.norm() - p.angle_to(&q)).abs() < 1e-9);
        let back = sphere_exp(&p, &v).unwrap();
        prop_assert!(back.angle_to(&q) < 1e-7);
    }

    #[test]
    fn instance_descriptors_round_trip(n in 1usize..=8, kind in 0usize..3) {
        let k = match kind {
            0 => InstanceKind::Vector(n),
            1 => InstanceKind::Unipotent(n.max(2)),
            _ => InstanceKind::Sphere,
        };
        prop_assert_eq!(k.to_string().parse::<InstanceKind>().unwrap(), k);
    }
}
