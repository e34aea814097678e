use colorsurg::anyons::{braid_phase, fuse, wall_action, Anyon, Side, WallAction};
use colorsurg::estimator::{self, AlgorithmSpec};
use colorsurg::layout::SurgeryLayout;
use colorsurg::surgery::{self, LogicalPrep};
use colorsurg::{lattice, PauliOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn anyon_grid_braiding_and_fusion() {
    let bs = Anyon::bosons();
    assert_eq!(bs.len(), 9);
    for &a in &bs {
        assert!(fuse(a, a).is_vacuum());
        for &b in &bs {
            let (ra, ca) = a.grid().unwrap();
            let (rb, cb) = b.grid().unwrap();
            let aligned = ra == rb || ca == cb;
            assert_eq!(braid_phase(a, b) == 1, aligned, "{a} {b}");
            if a != b {
                let f = fuse(a, b);
                assert_eq!(f.is_boson(), aligned, "{a} x {b} = {f}");
            }
        }
    }
    for a in Anyon::all() {
        assert_eq!(Anyon::parse(&a.name()).unwrap(), a);
    }
}

#[test]
fn semitransparent_transmission_respects_fusion_with_condensate() {
    for w in colorsurg::anyons::enumerate_semitransparent_walls() {
        let c = w.condensed_left.unwrap();
        let cr = w.condensed_right.unwrap();
        for a in Anyon::all().skip(1) {
            if let WallAction::Transmit(b) = wall_action(&w, a, Side::Left).unwrap() {
                if fuse(a, c).is_vacuum() {
                    continue;
                }
                assert_eq!(wall_action(&w, fuse(a, c), Side::Left).unwrap(), WallAction::Transmit(b));
                let back = wall_action(&w, b, Side::Right).unwrap();
                let WallAction::Transmit(a2) = back else { panic!("{b} does not return") };
                assert!(a2 == a || a2 == fuse(a, c));
                assert_eq!(braid_phase(b, cr), 1);
            }
        }
    }
}

#[test]
fn estimator_properties() {
    let alg = AlgorithmSpec::new(100, 1e8, 0.01).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let p = 10f64.powf(rng.gen_range(-5.0..-2.7));
        let r = estimator::compare_point(&alg, p).unwrap();
        assert!(r.dc_real > r.ds_real);
        assert!(r.ds % 2 == 1 && r.dc % 2 == 1);
        assert!((r.spacetime_color - r.qubits_color * r.cycles_color).abs() <= 1e-6 * r.spacetime_color);
        let n = rng.gen_range(1..500);
        let d = rng.gen_range(3..40) as f64;
        for s in [estimator::Scheme::ColorFastBlock, estimator::Scheme::SurfaceFastBlock] {
            let st = estimator::spacetime(s, n, 1e6, d);
            let lhs = st / d.powi(3);
            let rhs = s.space_coefficient(n) * s.time_coefficient() * 1e6;
            assert!((lhs - rhs).abs() <= 1e-9 * rhs);
        }
    }
    let small = estimator::equivalent_color_distance(1e-6, 11.0).unwrap() / 11.0;
    let large = estimator::equivalent_color_distance(1e-3, 11.0).unwrap() / 11.0;
    assert!(small < large && small > 1.0);
}

#[test]
fn layout_json_round_trip_and_oracle() {
    let la = PauliOperator::from_sparse("X1 Y2", 3).unwrap();
    let lb = PauliOperator::from_sparse("Z1 Z2 X3", 3).unwrap();
    let l = SurgeryLayout::new(3, &la, &lb).unwrap();
    assert!(l.check().is_empty());
    let back = SurgeryLayout::from_json(&l.to_json().unwrap()).unwrap();
    assert_eq!(back.to_json().unwrap(), l.to_json().unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let prep = LogicalPrep::random(3, 4, &mut rng);
    let rep = surgery::verify_against_reference(&back, &prep, &(0..10).collect::<Vec<_>>()).unwrap();
    assert!(rep.agrees(), "{:?}", rep.mismatches);
    assert!(surgery::verify_no_leakage(&back).unwrap().no_leakage());
}

#[test]
fn lattice_json_round_trip() {
    let p = lattice::build_triangular_code(5).unwrap();
    assert_eq!(p.num_qubits(), 19);
    let l2 = lattice::ColorLattice::from_json(&p.lattice.to_json().unwrap()).unwrap();
    assert_eq!(l2, p.lattice);
    assert!(lattice::verify_lattice(&l2).is_valid());
}
