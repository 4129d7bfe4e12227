use ncomplex::contour::{residue_check, Builtin, PiecewisePath, QuadSpec};
use ncomplex::cosexp::CosexpFamily;
use ncomplex::formats::{PathFile, PolynomialFile, SeriesFile};
use ncomplex::polyfactor::{count_factorizations, factorizations, roots};
use ncomplex::series::convergence_radii;
use ncomplex::{elementary, NComplex, Tolerances, Variant};

#[test]
fn square_root_sets_from_file() {
    let tol = Tolerances::default();
    let p = PolynomialFile::from_json(r#"{"variant":"polar","n":4,"coefficients":[0,-1]}"#)
        .unwrap()
        .to_polynomial()
        .unwrap();
    let r = roots(&p, &tol).unwrap();
    assert_eq!(count_factorizations(&r, 100).unwrap().count, 4);
    for f in factorizations(&r, 100) {
        for u in f.unwrap().linear_roots {
            assert!(p.eval(&u).unwrap().modulus() < 1e-12);
        }
    }
}

#[test]
fn geometric_series_radius_from_file() {
    let text = r#"{"variant":"planar","n":2,"coefficients":[1,0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625,0.001953125]}"#;
    let s = SeriesFile::from_json(text).unwrap().to_series().unwrap();
    let c = convergence_radii(&s, 8).unwrap();
    assert!((c.c[0] - 2.0).abs() < 1e-12);
}

#[test]
fn residue_on_a_square_path() {
    let tol = Tolerances::default();
    let path = PathFile::from_json(
        r#"{"variant":"planar","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]],"closed":true}"#,
    )
    .unwrap()
    .to_path()
    .unwrap();
    let u0 = NComplex::new(Variant::Planar, vec![0.2, -0.1]).unwrap();
    let cert = residue_check(&Builtin::Exp, &u0, &path, &QuadSpec::default(), &tol).unwrap();
    assert_eq!(cert.winding, vec![1]);
    assert!(cert.max_abs_error < 1e-8);
}

#[test]
fn euler_identity_in_the_plane() {
    let u = NComplex::new(Variant::Planar, vec![0.0, std::f64::consts::PI]).unwrap();
    let e = elementary::exp(&u).unwrap();
    assert!((e.components()[0] + 1.0).abs() < 1e-15);
    assert!(e.components()[1].abs() < 1e-15);
}

#[test]
fn cosexponentials_solve_their_differential_equation() {
    // fourth difference of g_4k against +g_4k, of f_4k against -f_4k
    let h = 5e-3;
    for (variant, sign) in [(Variant::Polar, 1.0), (Variant::Planar, -1.0)] {
        let fam = CosexpFamily::new(4, variant).unwrap();
        for &y in &[-1.5, 0.3, 2.0] {
            for k in 0..4 {
                let g = |t: f64| fam.eval_closed(k, t);
                let d4 = (g(y + 2.0 * h) - 4.0 * g(y + h) + 6.0 * g(y) - 4.0 * g(y - h) + g(y - 2.0 * h)) / h.powi(4);
                let scale = fam.magnitude_bound(y);
                assert!((d4 - sign * g(y)).abs() < 1e-4 * scale, "{variant} k={k} y={y}");
            }
        }
    }
}

#[test]
fn open_path_is_accepted() {
    let v: Vec<NComplex> = (0..3)
        .map(|i| NComplex::new(Variant::Polar, vec![i as f64, 0.0, 1.0]).unwrap())
        .collect();
    let p = PiecewisePath::new(v, false).unwrap();
    assert_eq!(p.edges().len(), 2);
}
