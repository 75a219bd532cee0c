use gaussian_iso::functionals::{
    deficit, excess_identity, fraenkel_hat, strong_asym, strong_asym_by_direction, QuantityBundle, STABILITY_CONSTANT,
};
use gaussian_iso::sets::{GaussianSet, IntervalUnion1D, SlabSet};
use gaussian_iso::special::{gauss_weight, phi, phi_inv};
use proptest::prelude::*;

/// Unions of up to four intervals with well separated endpoints in
/// `[-4, 4]`, each side optionally a ray.
fn unions() -> impl Strategy<Value = IntervalUnion1D> {
    (1usize..=4, any::<bool>(), any::<bool>())
        .prop_flat_map(|(k, left, right)| {
            let right = right && !(left && k == 1);
            let n = 2 * k - usize::from(left) - usize::from(right);
            (prop::collection::vec(-4.0f64..4.0, n), Just(left), Just(right))
        })
        .prop_filter_map("features too small", |(mut xs, left, right)| {
            xs.sort_by(f64::total_cmp);
            if xs.windows(2).any(|w| w[1] - w[0] < 0.05) {
                return None;
            }
            let mut pts = Vec::new();
            if left {
                pts.push(f64::NEG_INFINITY);
            }
            pts.extend(xs);
            if right {
                pts.push(f64::INFINITY);
            }
            let u = IntervalUnion1D::normalize(pts.chunks(2).map(|c| (c[0], c[1]))).ok()?;
            let m = u.measure();
            (m > 1e-4 && m < 1.0 - 1e-4).then_some(u)
        })
}

/// `a ≤ b` with the relative slack used by the verification suites.
fn le(a: f64, b: f64) -> bool {
    a - b <= 1e-9 * b.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalized_unions_are_canonical(u in unions()) {
        for w in u.intervals().windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
        let again = IntervalUnion1D::normalize(u.intervals().iter().copied()).unwrap();
        prop_assert_eq!(&again, &u);
        prop_assert_eq!(&u.complement().complement(), &u);
        prop_assert_eq!(&u.reflect().reflect(), &u);
    }

    #[test]
    fn measure_is_additive(a in unions(), b in unions()) {
        let inter = a.intersection(&b).measure();
        prop_assert!((a.union(&b).measure() - (a.measure() + b.measure() - inter)).abs() < 1e-13);
        let sd = a.symmetric_difference(&b).measure();
        prop_assert!((sd - (a.measure() + b.measure() - 2.0 * inter)).abs() < 1e-13);
        prop_assert!((a.measure() + a.complement().measure() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reflection_preserves_mass_and_perimeter(u in unions()) {
        let r = u.reflect();
        prop_assert!((r.measure() - u.measure()).abs() < 1e-14);
        prop_assert!((r.perimeter() - u.perimeter()).abs() < 1e-14);
        prop_assert!((r.barycenter() + u.barycenter()).abs() < 1e-15);
    }

    #[test]
    fn isoperimetric_inequality_and_barycenter_bound(u in unions()) {
        let e: GaussianSet = u.into();
        let q = QuantityBundle::compute(&e).unwrap();
        prop_assert!(le(gauss_weight(q.s), q.perimeter));
        prop_assert!(le(q.barycenter_norm(), q.b_s));
    }

    #[test]
    fn stability_inequality_holds(u in unions()) {
        let e: GaussianSet = u.into();
        let q = QuantityBundle::compute(&e).unwrap();
        let s = q.s;
        prop_assert!(le(q.beta, STABILITY_CONSTANT * (1.0 + s * s) * q.deficit));
        prop_assert!(le((0.5 * s * s).exp() * q.alpha_hat * q.alpha_hat / 4.0, q.beta));
    }

    #[test]
    fn excess_identity_holds(u in unions()) {
        let (direct, via) = excess_identity(&u.into()).unwrap();
        prop_assert!((direct - via).abs() <= 1e-10 * via.abs() + 1e-14);
    }

    #[test]
    fn asymmetries_agree_under_complement(u in unions()) {
        let e: GaussianSet = u.clone().into();
        let c: GaussianSet = u.complement().into();
        prop_assert!((strong_asym(&e).unwrap() - strong_asym(&c).unwrap()).abs() < 1e-14);
        prop_assert!((fraenkel_hat(&e).unwrap() - fraenkel_hat(&c).unwrap()).abs() < 1e-13);
        prop_assert!((deficit(&e) - deficit(&c)).abs() < 1e-13);
    }

    #[test]
    fn strong_asymmetry_by_definition(u in unions()) {
        let e: GaussianSet = u.into();
        prop_assert!((strong_asym(&e).unwrap() - strong_asym_by_direction(&e).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn slabs_inherit_profile_quantities(u in unions(), dim in 2usize..=6) {
        let slab: GaussianSet = SlabSet::new(dim, u.clone()).unwrap().into();
        let line: GaussianSet = u.into();
        let (qs, ql) = (QuantityBundle::compute(&slab).unwrap(), QuantityBundle::compute(&line).unwrap());
        prop_assert_eq!(qs.barycenter.len(), dim);
        prop_assert!(qs.barycenter[..dim - 1].iter().all(|b| *b == 0.0));
        prop_assert!((qs.deficit - ql.deficit).abs() < 1e-14);
        prop_assert!((qs.beta - ql.beta).abs() < 1e-14);
        prop_assert!((qs.alpha_hat - ql.alpha_hat).abs() < 1e-13);
    }

    // only the lower tail: above 0, phi(x) rounds toward 1 and loses digits
    #[test]
    fn phi_inv_inverts_phi(x in -37.0f64..0.0) {
        let p = phi(x);
        let back = phi_inv(p).unwrap();
        prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0), "x = {x}, back = {back}");
    }

    #[test]
    fn phi_inv_is_odd_about_one_half(p in 1e-6f64..0.5) {
        prop_assert!((phi_inv(p).unwrap() + phi_inv(1.0 - p).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn phi_of_phi_inv_is_identity(log_p in -700.0f64..-1e-3) {
        let p = log_p.exp();
        let x = phi_inv(p).unwrap();
        // one ulp of x moves phi(x) by about |x| ulp(x) in relative terms
        let tol = 4.0 * f64::EPSILON * x.abs().max(1.0).powi(2) + 1e-14;
        prop_assert!((phi(x) - p).abs() <= tol * p, "p = {p:e}");
    }
}
