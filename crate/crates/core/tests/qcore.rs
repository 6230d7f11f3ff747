use proptest::prelude::*;
use qline::qcore::checks::{
    dpi_margin, isometry_defect, mi_increase_margin, random_instance, ssa_margin, Slot,
};
use qline::qcore::{Bits, DensityMatrix, Gate, GateKind, PureState, RegisterLayout};
use qline::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-8;

fn bell() -> PureState {
    let layout = RegisterLayout::from_pairs(&[("A", 1), ("B", 1)]).unwrap();
    let mut s = PureState::zero(layout);
    let none = Default::default();
    s.apply_gate(&Gate::single(GateKind::H, "A", 0), &none)
        .unwrap();
    s.apply_gate(&Gate::pair(GateKind::Cnot, ("A", 0), ("B", 0)), &none)
        .unwrap();
    s
}

#[test]
fn bell_pair_entropies() {
    let s = bell();
    assert!((s.entropy(&["A"]).unwrap() - 1.0).abs() < 1e-12);
    assert!(s.entropy(&["A", "B"]).unwrap().abs() < 1e-12);
    assert!((s.mutual_information(&["A"], &["B"]).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn overlapping_parts_are_rejected() {
    let s = bell();
    assert!(s
        .conditional_mutual_information(&["A"], &["A"], &["B"])
        .is_err());
}

#[test]
fn cap_is_enforced() {
    let e = RegisterLayout::from_pairs(&[("A", 20), ("B", 10)]).unwrap_err();
    assert!(matches!(
        e,
        Error::CapExceeded {
            needed: 30,
            cap: 26
        }
    ));
}

#[test]
fn basis_states_are_exact() {
    let layout = RegisterLayout::from_pairs(&[("A", 2), ("B", 1)]).unwrap();
    let a = Bits::from_value(2, 2);
    let s = PureState::basis(layout, &[("A", &a)]).unwrap();
    assert_eq!(
        s.register_distribution("A").unwrap(),
        vec![0.0, 0.0, 1.0, 0.0]
    );
}

#[test]
fn density_rejects_non_hermitian() {
    let layout = RegisterLayout::from_pairs(&[("A", 1)]).unwrap();
    let mut m = qline::qcore::CMatrix::zeros(2, 2);
    m[(0, 0)] = 1.0.into();
    m[(0, 1)] = 0.5.into();
    assert!(DensityMatrix::new(layout, m).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn entropy_inequalities_hold(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, p) = random_instance(8, &mut rng).unwrap();
        prop_assert!(ssa_margin(&s, &p).unwrap() >= -TOL);
        prop_assert!(dpi_margin(&s, &p).unwrap() >= -TOL);
        prop_assert!(mi_increase_margin(&s, &p).unwrap() >= -TOL);
        for name in s.layout().names() {
            let w = s.layout().width(&name).unwrap() as f64;
            prop_assert!(s.entropy(&[name]).unwrap() <= w + 1e-9);
        }
    }

    #[test]
    fn isometries_preserve_cmi(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, p) = random_instance(7, &mut rng).unwrap();
        for slot in [Slot::X, Slot::Y, Slot::Z] {
            prop_assert!(isometry_defect(&s, &p, slot, &mut rng).unwrap() < TOL);
        }
    }
}
