use std::f64::consts::{FRAC_2_PI, PI};
use std::sync::Arc;

use nclock::circle::{geodesic_distance, project_to_discrete, wrap_steps, DEFAULT_STABILITY_RADIUS};
use nclock::energy::{bv_lower_bound, geodesic_bond_sum, rescaled_energy, xy_energy};
use nclock::lattice::{jump_set, sample_map, SampleMode};
use nclock::limits::{jump_functional, phi_parametric, TwoVector};
use nclock::maps::ConstantMap;
use nclock::vorticity::{plaquette_vorticity, vorticity_measure};
use nclock::{build_domain, DiscreteCircle, GeodesicPath, PcField, Point, Shape, SpinField, UnitVector};
use proptest::prelude::*;

fn field_strategy(max_side: usize) -> impl Strategy<Value = (u32, usize, usize, Vec<u32>)> {
    (2u32..64, 2..=max_side, 2..=max_side).prop_flat_map(|(n, w, h)| {
        (Just(n), Just(w), Just(h), prop::collection::vec(0..n, w * h))
    })
}

fn grid_field(n: u32, w: usize, h: usize, states: Vec<u32>, eps: f64) -> SpinField {
    let shape = Shape::rectangle(Point::ORIGIN, Point::new(w as f64 * eps, h as f64 * eps));
    let d = Arc::new(build_domain(shape, eps).unwrap());
    assert_eq!(d.len(), w * h);
    SpinField::new(d, DiscreteCircle::new(n).unwrap(), states).unwrap()
}

fn two_vector() -> impl Strategy<Value = TwoVector> {
    prop::array::uniform6(-10.0f64..10.0).prop_map(|v| TwoVector {
        xi21: v[0],
        xi22: v[1],
        xi11: v[2],
        xi12: v[3],
        xi_bar0_0: v[4],
        xi_0_bar0: v[5],
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn chord_identity(n in 2u32..=1000, a in 0u32..1000, b in 0u32..1000) {
        let c = DiscreteCircle::new(n).unwrap();
        let (u, v) = (c.state_vector(a % n), c.state_vector(b % n));
        let d = geodesic_distance(&u, &v);
        prop_assert!((u.chord(&v) - 2.0 * (d / 2.0).sin()).abs() < 1e-12);
        prop_assert!((d - c.state_distance(a % n, b % n)).abs() < 1e-12);
    }

    #[test]
    fn sandwich(a in 0.0f64..7.0, b in 0.0f64..7.0) {
        let (u, v) = (UnitVector::from_angle(a), UnitVector::from_angle(b));
        let d = geodesic_distance(&u, &v);
        let e = u.chord(&v);
        prop_assert!(e <= d + 1e-12);
        prop_assert!(d <= PI / 2.0 * e + 1e-12);
    }

    #[test]
    fn geodesic_stability(b in 0.0f64..7.0, s1 in -1.0f64..1.0, s2 in -1.0f64..1.0) {
        let c = DEFAULT_STABILITY_RADIUS;
        let bv = UnitVector::from_angle(b);
        let u1 = bv.rotated(c * s1);
        let u2 = bv.rotated(c * s2);
        let (g1, g2) = (GeodesicPath::new(u1, bv), GeodesicPath::new(u2, bv));
        let d = geodesic_distance(&u1, &u2);
        for i in 0..=200 {
            let t = -0.1 + 1.2 * c * i as f64 / 200.0;
            prop_assert!(g1.eval(t).chord(&g2.eval(t)) <= d + 1e-10);
        }
    }

    #[test]
    fn projection_identity(n in 2u32..5000, k in 0u32..5000) {
        let c = DiscreteCircle::new(n).unwrap();
        prop_assert_eq!(project_to_discrete(&c.state_vector(k % n), &c), k % n);
    }

    #[test]
    fn projection_within_one_step(n in 2u32..500, a in 0.0f64..6.3) {
        let c = DiscreteCircle::new(n).unwrap();
        let u = UnitVector::from_angle(a);
        let k = project_to_discrete(&u, &c);
        prop_assert!(geodesic_distance(&u, &c.state_vector(k)) < c.theta() + 1e-12);
    }

    #[test]
    fn energy_partition_and_monotonicity((n, w, h, states) in field_strategy(12), cut in 0.0f64..1.0) {
        let eps = 0.125;
        let f = grid_field(n, w, h, states, eps);
        let d = f.domain();
        let split = cut * w as f64 * eps;
        let a = Shape::rectangle(Point::new(-1.0, -1.0), Point::new(split, 10.0));
        let total = xy_energy(&f, None).xy_total;
        let ea = xy_energy(&f, Some(&a)).xy_total;
        let (mut rest, mut cross) = (0.0, 0.0);
        for (i, j, _) in d.bonds() {
            let c = f.vector(i).chord(&f.vector(j));
            let w2 = eps * eps * c * c;
            match (a.contains(&d.position(i)), a.contains(&d.position(j))) {
                (true, true) => {}
                (false, false) => rest += w2,
                _ => cross += w2,
            }
        }
        prop_assert!((total - (ea + rest + cross)).abs() < 1e-12);
        let bigger = Shape::rectangle(Point::new(-1.0, -1.0), Point::new(split + eps, 10.0));
        prop_assert!(xy_energy(&f, Some(&bigger)).xy_total >= ea - 1e-15);
    }

    #[test]
    fn geodesic_sum_dominates_chords((n, w, h, states) in field_strategy(12)) {
        let eps = 0.25;
        let f = grid_field(n, w, h, states, eps);
        let chords: f64 = f.domain().bonds().map(|(i, j, _)| eps * f.vector(i).chord(&f.vector(j))).sum();
        prop_assert!(geodesic_bond_sum(&f, None) >= FRAC_2_PI * chords - 1e-12);
        let jumps: f64 = jump_set(&f).iter().map(|r| r.edge_measure * r.jump_length).sum();
        prop_assert!((jumps - geodesic_bond_sum(&f, None)).abs() < 1e-12);
    }

    #[test]
    fn bv_bound_below_energy((n, w, h, states) in field_strategy(16)) {
        let f = grid_field(n, w, h, states, 1.0 / 64.0);
        let theta = f.circle().theta();
        prop_assert!(bv_lower_bound(&f, None) <= rescaled_energy(&f, theta, None) + 1e-12);
    }

    #[test]
    fn plaquette_vorticity_is_quantized((n, w, h, states) in field_strategy(6)) {
        let f = grid_field(n, w, h, states, 1.0);
        for k in 0..f.domain().len() {
            if let Some(v) = plaquette_vorticity(&f, k) {
                prop_assert!((-1..=1).contains(&v));
            }
        }
    }

    #[test]
    fn discrete_stokes((n, w, h, states) in field_strategy(8)) {
        let f = grid_field(n, w, h, states.clone(), 1.0);
        let total: i64 = vorticity_measure(&f).total_charge();
        // boundary loop, counterclockwise from the lower-left corner
        let at = |x: usize, y: usize| states[y * w + x] as i64;
        let mut loop_sites = Vec::new();
        for x in 0..w - 1 { loop_sites.push(at(x, 0)); }
        for y in 0..h - 1 { loop_sites.push(at(w - 1, y)); }
        for x in (1..w).rev() { loop_sites.push(at(x, h - 1)); }
        for y in (1..h).rev() { loop_sites.push(at(0, y)); }
        let n = n as i64;
        let winding: i64 = (0..loop_sites.len())
            .map(|i| wrap_steps(loop_sites[(i + 1) % loop_sites.len()] - loop_sites[i], n))
            .sum();
        prop_assert_eq!(winding % n, 0);
        prop_assert_eq!(total, winding / n);
    }

    #[test]
    fn phi_convex_homogeneous(a in two_vector(), b in two_vector(), t in 0.0f64..1.0, s in 0.0f64..100.0) {
        let mix = a.scaled(t) + b.scaled(1.0 - t);
        prop_assert!(phi_parametric(&mix) <= t * phi_parametric(&a) + (1.0 - t) * phi_parametric(&b) + 1e-9);
        prop_assert!((phi_parametric(&a.scaled(s)) - s * phi_parametric(&a)).abs() <= 1e-9 * (1.0 + s * phi_parametric(&a)));
        let eucl = (a.xi21 * a.xi21 + a.xi22 * a.xi22 + a.xi11 * a.xi11 + a.xi12 * a.xi12).sqrt();
        prop_assert!(phi_parametric(&a) >= eucl - 1e-12);
    }

    #[test]
    fn jump_functional_is_geodesic_sum((n, w, h, states) in field_strategy(10), k in 0u32..3) {
        let lambda = 0.5f64.powi(k as i32 + 1);
        let f = grid_field(n, w, h, states.clone(), lambda);
        let circle = *f.circle();
        let shape = *f.domain().shape();
        let pc = PcField::new(lambda, [0, 0], [w, h], states.iter().map(|&s| circle.state_vector(s)).collect()).unwrap();
        prop_assert!((jump_functional(&pc, &shape) - geodesic_bond_sum(&f, None)).abs() < 1e-12);
    }

    #[test]
    fn constant_samples_have_no_jumps(n in 2u32..100, a in 0.0f64..6.3, eps in 0.05f64..0.3) {
        let d = Arc::new(build_domain(Shape::ball(Point::ORIGIN, 1.0), eps).unwrap());
        let f = sample_map(&ConstantMap { angle: a }, d, DiscreteCircle::new(n).unwrap(), SampleMode::AtSite).unwrap();
        prop_assert!(jump_set(&f).is_empty());
    }
}

#[test]
fn per_bond_lower_bound_exhaustive() {
    let theta: f64 = 1e-2;
    let mut k = 0u32;
    while k as f64 * theta <= PI {
        let x = k as f64 * theta;
        assert!(4.0 * (x / 2.0).sin().powi(2) >= 0.9 * theta * x, "k = {k}");
        k += 1;
    }
}
