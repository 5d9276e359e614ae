use mmp_core::classify::{classify_segments, classify_three};
use mmp_core::geom::in_disk;
use mmp_core::matching::{max_sum_bruteforce, max_sum_heuristic};
use mmp_core::piercing::{pierce_disks, stretch_report, StretchBound, Verdict};
use mmp_core::{Point, PointSet, Segment, Tolerance};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -1.0..1.0f64
}

fn points(n: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((coord(), coord()).prop_map(|(x, y)| Point::new(x, y)), n)
}

/// Rotation by `theta`, scaling by `s`, then translation.
fn similarity(theta: f64, s: f64, shift: Point) -> impl Fn(Point) -> Point {
    let (sin, cos) = theta.sin_cos();
    move |p| Point::new(s * (cos * p.x - sin * p.y), s * (sin * p.x + cos * p.y)) + shift
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn optimum_commutes_with_similarity(
        pts in points(6),
        theta in 0.0..std::f64::consts::TAU,
        s in 0.1..10.0f64,
        dx in -5.0..5.0f64,
        dy in -5.0..5.0f64,
    ) {
        let tol = Tolerance::default();
        let ps = PointSet::uncolored(pts).unwrap();
        let moved = ps.map_points(similarity(theta, s, Point::new(dx, dy))).unwrap();
        let a = max_sum_bruteforce(&ps, &tol).unwrap();
        let b = max_sum_bruteforce(&moved, &tol).unwrap();
        prop_assert!((b.matching.cost() - s * a.matching.cost()).abs() < 1e-9 * (1.0 + s));
        if a.is_unique && b.is_unique {
            prop_assert_eq!(a.matching.pairs(), b.matching.pairs());
        }
    }

    #[test]
    fn label_commutes_with_similarity(
        pts in points(6),
        theta in 0.0..std::f64::consts::TAU,
        s in 0.2..5.0f64,
        dx in -3.0..3.0f64,
    ) {
        let tol = Tolerance::default();
        let ps = PointSet::uncolored(pts).unwrap();
        let m = max_sum_bruteforce(&ps, &tol).unwrap().matching;
        let c = classify_three(&ps, &m, &tol).unwrap();
        let moved = ps.map_points(similarity(theta, s, Point::new(dx, -dx))).unwrap();
        let c2 = classify_three(&moved, &m, &tol).unwrap();
        if !c.fragile && !c2.fragile {
            prop_assert_eq!(c.label, c2.label);
            prop_assert_eq!(c.relations, c2.relations);
        }
    }

    #[test]
    fn label_ignores_segment_order_and_direction(pts in points(6), perm in 0usize..6, flips in 0u8..8) {
        let tol = Tolerance::default();
        let ps = PointSet::uncolored(pts).unwrap();
        let m = max_sum_bruteforce(&ps, &tol).unwrap().matching;
        let segs = m.segments(&ps);
        let base = classify_segments(&[segs[0], segs[1], segs[2]], &tol);
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let shuffled: [Segment; 3] = [0, 1, 2].map(|k| {
            let s = segs[orders[perm][k]];
            if flips & (1 << k) != 0 { s.reversed() } else { s }
        });
        let other = classify_segments(&shuffled, &tol);
        if !base.fragile && !other.fragile {
            prop_assert_eq!(base.label, other.label);
        }
    }

    #[test]
    fn optimal_disks_share_a_point(pts in points(8)) {
        let tol = Tolerance::default();
        let ps = PointSet::uncolored(pts).unwrap();
        let m = max_sum_bruteforce(&ps, &tol).unwrap().matching;
        let disks = m.disks(&ps);
        let r = pierce_disks(&disks, &tol);
        prop_assert!(r.verdict.has_common_point(), "{:?}", r);
        let w = r.witness.unwrap();
        for d in &disks {
            prop_assert!(in_disk(w, d, &tol).is_inside());
        }
        let s = stretch_report(&m.point_pairs(&ps), w, StretchBound::Sqrt2.value(), &tol);
        prop_assert!(s.holds, "{:?}", s);
    }

    #[test]
    fn optimal_pairs_of_pairs_overlap(pts in points(4), colored in any::<bool>()) {
        let tol = Tolerance::default();
        let ps = if colored {
            PointSet::colored(pts[..2].to_vec(), pts[2..].to_vec()).unwrap()
        } else {
            PointSet::uncolored(pts).unwrap()
        };
        let m = max_sum_bruteforce(&ps, &tol).unwrap().matching;
        let r = pierce_disks(&m.disks(&ps), &tol);
        prop_assert_ne!(r.verdict, Verdict::Empty);
    }

    #[test]
    fn heuristic_never_beats_the_oracle(pts in points(8)) {
        let tol = Tolerance::default();
        let ps = PointSet::uncolored(pts).unwrap();
        let best = max_sum_bruteforce(&ps, &tol).unwrap().matching.cost();
        let h = max_sum_heuristic(&ps, &tol).unwrap();
        prop_assert!(h.matching.cost() <= best + tol.cost(best));
    }

    #[test]
    fn f32_agrees_with_f64_on_clear_verdicts(pts in points(6)) {
        let tol = Tolerance::<f64>::default();
        let ps = PointSet::uncolored(pts.clone()).unwrap();
        let m = max_sum_bruteforce(&ps, &tol).unwrap().matching;
        let r64 = pierce_disks(&m.disks(&ps), &tol);
        let pts32: Vec<mmp_core::geom::Point<f32>> =
            pts.iter().map(|p| mmp_core::geom::Point::new(p.x as f32, p.y as f32)).collect();
        let ps32 = mmp_core::matching::PointSet::uncolored(pts32).unwrap();
        let m32 = mmp_core::matching::Matching::new(&ps32, m.pairs()).unwrap();
        let tol32 = Tolerance::<f32>::default();
        let r32 = pierce_disks(&m32.disks(&ps32), &tol32);
        if r64.depth < -1e-2 {
            prop_assert_eq!(r32.verdict, Verdict::NonEmpty);
        }
    }
}
