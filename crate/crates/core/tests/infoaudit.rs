use qline::infoaudit::*;
use qline::lineproto::random::{random_protocol, GeneratorConfig};
use qline::lineproto::{LineParams, LineProtocol};
use qline::qcore::{Gate, GateKind, QubitRef, Register};
use qline::twoparty::{compile_line_to_two_party, Party, TwoPartyProtocol, TwoPartyRound};
use qline::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn copy_x_protocol() -> LineProtocol {
    LineProtocol::parse(
        "line n=1 d=2 r=2 b=1 s=0\n\
         gate t=1 party=0 X R[0] ctrl=X[0]\n",
    )
    .unwrap()
}

#[test]
fn round_zero_and_untouched_inputs_give_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = GeneratorConfig {
        input_control: 0.0,
        ..Default::default()
    };
    let p = random_protocol(LineParams::new(2, 2, 3, 1, 1).unwrap(), &cfg, &mut rng);
    for mu in [
        InputDistribution::uniform_product(2),
        InputDistribution::z_mixture(2),
    ] {
        let tr = audit_line_leakage(&p, &mu).unwrap();
        for row in &tr.rows {
            assert!(
                row.i_x_dt.abs() < 1e-9 && row.i_y_ct.abs() < 1e-9,
                "{row:?}"
            );
        }
    }
}

#[test]
fn copying_x_into_the_channel_leaks_one_bit() {
    let tr =
        audit_line_leakage(&copy_x_protocol(), &InputDistribution::uniform_product(1)).unwrap();
    assert!(tr.rows[0].i_x_dt.abs() < 1e-9);
    assert!((tr.rows[1].i_x_dt - 1.0).abs() < 1e-9);
    assert!(tr.rows[1].i_x_dt <= tr.rows[1].bound);
    assert!(tr.all_pass());
    assert!(tr
        .to_csv()
        .starts_with("t,I_X_Dt,I_Y_Ct,bound_2tb,pass\n0,"));
}

#[test]
fn correlated_inputs_are_refused() {
    let p = LineProtocol::parse("line n=2 d=2 r=2 b=1 s=0\n").unwrap();
    let e = audit_line_leakage(&p, &InputDistribution::uniform_intersecting(2)).unwrap_err();
    assert!(matches!(e, Error::Precondition(_)));
}

fn one_round(send_x: bool) -> TwoPartyProtocol {
    let mut gates = Vec::new();
    if send_x {
        gates.push(Gate::single(GateKind::X, "M", 0).controlled_by(QubitRef::new("X", 0)));
    }
    TwoPartyProtocol {
        n: 1,
        registers: vec![Register::new("M", 1), Register::new("B", 1)],
        alice_initial: vec!["M".into()],
        rounds: vec![TwoPartyRound {
            sender: Party::Alice,
            gates,
            message: vec!["M".into()],
        }],
        measurer: Party::Bob,
        measurement: vec![],
        output: QubitRef::new("M", 0),
    }
}

#[test]
fn two_party_leakage_examples() {
    let mu = InputDistribution::uniform_product(1);
    let rep = leakage_two_party(&one_round(true), &mu).unwrap();
    assert!((rep.qil - 1.0).abs() < 1e-9);
    assert!(rep.qil >= rep.il - 1e-8);
    let rep = leakage_two_party(&one_round(false), &mu).unwrap();
    assert!(rep.qil.abs() < 1e-9 && rep.il.abs() < 1e-9);
    let p = LineProtocol::new(LineParams::new(1, 2, 4, 1, 1).unwrap());
    let rep = leakage_two_party(
        &compile_line_to_two_party(&p).unwrap(),
        &InputDistribution::z_mixture(1),
    )
    .unwrap();
    assert!(rep.qil.abs() < 1e-9 && rep.il.abs() < 1e-9);
}

#[test]
fn branchwise_matches_monolithic() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let families = [
        InputDistribution::uniform_product(1),
        InputDistribution::planted_intersection(1),
        InputDistribution::z_mixture(1),
    ];
    for k in 0..6 {
        let d = 2 + k % 2;
        let params = LineParams::new(1, d, d, 1, k % 2).unwrap();
        let p = random_protocol(params, &GeneratorConfig::default(), &mut rng);
        for mu in &families {
            let fast = audit_line_leakage(&p, mu).unwrap();
            let slow = monolithic_line_audit(&p, mu).unwrap();
            for (row, (ix, iy)) in fast.rows.iter().zip(&slow) {
                assert!((row.i_x_dt - ix).abs() < 1e-9, "{} vs {ix}", row.i_x_dt);
                assert!((row.i_y_ct - iy).abs() < 1e-9, "{} vs {iy}", row.i_y_ct);
            }
            let tp = compile_line_to_two_party(&p).unwrap();
            let fast = leakage_two_party(&tp, mu).unwrap();
            let slow = monolithic_two_party_leakage(&tp, mu).unwrap();
            assert!((fast.qil - slow.qil).abs() < 1e-9);
            assert!((fast.il - slow.il).abs() < 1e-9);
        }
    }
}

#[test]
fn compiled_audits_respect_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let families = [
        InputDistribution::uniform_product(2),
        InputDistribution::planted_intersection(2),
        InputDistribution::z_mixture(2),
    ];
    for k in 0..6 {
        let d = 2 + k % 2;
        let params = LineParams::new(2, d, d * (1 + k % 2), 1, k % 3).unwrap();
        let p = random_protocol(params, &GeneratorConfig::default(), &mut rng);
        for mu in &families {
            let a = audit_compiled(&p, mu).unwrap();
            assert!(a.trace.all_pass());
            assert!(a.trace.steps_within_2b());
            assert!(a.qil_ok(), "{} > {}", a.leakage.qil, a.qil_bound);
            assert!(a.qil_at_least_il());
            assert!(a.y_identity_gap() < 1e-8, "{}", a.y_identity_gap());
            assert!(
                a.x_identity_gap_corrected() < 1e-8,
                "{}",
                a.x_identity_gap_corrected()
            );
            assert!(a.block_terms_bounded());
            for b in &a.blocks {
                assert!(b.x_message_side >= b.x_dkd - 1e-8);
            }
        }
    }
}

#[test]
fn echo_breaks_the_strict_block_identity() {
    // party 1 leaves the bit it received in its left port, so it returns to party 0
    let p = LineProtocol::parse(
        "line n=1 d=2 r=2 b=1 s=0\n\
         gate t=1 party=0 X R[0] ctrl=X[0]\n",
    )
    .unwrap();
    let a = audit_compiled(&p, &InputDistribution::uniform_product(1)).unwrap();
    let b = &a.blocks[0];
    assert!((b.x_dkd - 0.0).abs() < 1e-9);
    assert!((b.x_message_side - 1.0).abs() < 1e-9);
    assert!((b.x_dprime - 1.0).abs() < 1e-9);
    assert!(a.qil_ok());
}
