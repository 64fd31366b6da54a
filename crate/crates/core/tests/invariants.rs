use diracdet::determinant::{
    boundary_contour_oracle, boundary_term, bulk_c2_term, bulk_log_term, flux, ln_det_ratio, ContourSpec,
};
use diracdet::greens::{boundary_residual, disk_green, disk_green_factorized, DiskProblem, PlanePoint};
use diracdet::{Complex64, GaugeField, GaugeProfile};
use proptest::prelude::*;
use std::f64::consts::PI;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn gaussian(phi0: f64, width: f64, radius: f64) -> GaugeField {
    GaugeField::new(GaugeProfile::Gaussian { phi0, width }, radius).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn total_is_bulk_plus_boundary(phi0 in -2.0f64..2.0, width in 0.2f64..1.5, wr in 0.2f64..3.0, wi in -1.0f64..1.0) {
        let p = DiskProblem::new(gaussian(phi0, width, 1.2), Complex64::new(wr, wi), 1.0).unwrap();
        let r = ln_det_ratio(&p).unwrap();
        prop_assert!((r.total - (cx(r.bulk_term) + r.boundary_term)).norm() < 1e-14);
        prop_assert!(r.diagnostics["alpha_quadrature"] < 1e-8);
    }

    #[test]
    fn scaling_law(phi0 in 0.1f64..1.5, s in prop::sample::select(vec![0.5, 2.0]), w in 0.3f64..3.0) {
        let g = gaussian(phi0, 0.7, 1.0);
        let a = ln_det_ratio(&DiskProblem::new(g.clone(), cx(w), 1.0).unwrap()).unwrap();
        let b = ln_det_ratio(&DiskProblem::new(g.scaled(s), cx(w), 1.0).unwrap()).unwrap();
        prop_assert!((b.bulk_term - s * s * a.bulk_term).abs() < 1e-12 * (1.0 + b.bulk_term.abs()));
        prop_assert!((b.boundary_term - a.boundary_term * s).norm() < 1e-12 * (1.0 + b.boundary_term.norm()));
    }

    #[test]
    fn boundary_term_sees_only_flux(phi0 in -2.0f64..2.0, w in 0.2f64..3.0) {
        let a = GaugeField::new(GaugeProfile::Poly2 { phi0 }, 1.0).unwrap();
        // Same boundary slope bit for bit, different interior field.
        let b = GaugeField::new(GaugeProfile::Polynomial { coeffs: vec![0.5, -2.0 * phi0] }, 1.0).unwrap();
        prop_assert_eq!(flux(&a), flux(&b));
        let ra = ln_det_ratio(&DiskProblem::new(a, cx(w), 1.0).unwrap()).unwrap();
        let rb = ln_det_ratio(&DiskProblem::new(b, cx(w), 1.0).unwrap()).unwrap();
        prop_assert_eq!(ra.boundary_term, rb.boundary_term);
    }

    #[test]
    fn boundary_oracle_on_real_w(w in 0.1f64..3.0, phi in prop::sample::select(vec![-4.0 * PI, 0.0, 4.0 * PI])) {
        let w = cx(w);
        let o = boundary_contour_oracle(w, phi, &ContourSpec::for_boundary(w).unwrap()).unwrap();
        let e = boundary_term(w, phi).unwrap();
        prop_assert!((o - e).norm() <= 1e-6 * e.norm().max(1e-4));
    }

    #[test]
    fn log_term_matches_closed_form(phi0 in -2.0f64..2.0, width in 0.2f64..1.5, alpha in 0.0f64..1.0) {
        let g = gaussian(phi0, width, 1.0);
        prop_assert!((bulk_log_term(&g, alpha).unwrap() - bulk_c2_term(&g, alpha).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn image_construction(xr in 0.0f64..0.95, xt in 0.0f64..6.3, yr in 0.05f64..0.95, yt in 0.0f64..6.3,
                          wr in 0.2f64..3.0, wi in -1.0f64..1.0, alpha in 0.0f64..1.0) {
        let p = DiskProblem::new(gaussian(0.8, 0.5, 1.0), Complex64::new(wr, wi), alpha).unwrap();
        let (x, y) = (PlanePoint::new(xr, xt), PlanePoint::new(yr, yt));
        prop_assume!((x.complex() - y.complex()).norm() > 1e-3);
        let a = disk_green(&p, x, y).unwrap();
        let b = disk_green_factorized(&p, x, y).unwrap();
        prop_assert!(a.distance(&b) <= 1e-10 * (1.0 + a.norm()));
        prop_assert!(boundary_residual(&p, &[(xt, y)]).unwrap() < 1e-10);
    }
}
