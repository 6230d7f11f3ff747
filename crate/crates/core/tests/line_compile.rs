use qline::lineproto::random::{random_protocol, GeneratorConfig};
use qline::lineproto::{simulate_line, LineParams, LineProtocol};
use qline::qcore::Bits;
use qline::twoparty::{
    communication_total, compile_line_to_two_party, compiled_message_size, simulate_two_party,
    Party,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_case(rng: &mut ChaCha8Rng) -> (LineProtocol, Bits, Bits) {
    let n = rng.random_range(1..=2);
    let d = rng.random_range(2..=3);
    let r = d * rng.random_range(1..=2);
    let s = rng.random_range(0..=1);
    let p = random_protocol(
        LineParams::new(n, d, r, 1, s).unwrap(),
        &GeneratorConfig::default(),
        rng,
    );
    let x = Bits::from_value(rng.random_range(0..1u64 << n), n);
    let y = Bits::from_value(rng.random_range(0..1u64 << n), n);
    (p, x, y)
}

#[test]
fn compiled_protocols_match_the_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (p, x, y) = random_case(&mut rng);
        let (line, trace) = simulate_line(&p, &x, &y).unwrap();
        for norm in trace.norms() {
            assert!((norm - 1.0).abs() < 1e-9);
        }
        let two = compile_line_to_two_party(&p).unwrap();
        let (out, _) = simulate_two_party(&two, &x, &y).unwrap();
        assert!(line.max_abs_diff(&out) < 1e-9);
        let params = p.params();
        assert_eq!(two.rounds.len(), 2 * params.r.div_ceil(params.d));
        let acc = communication_total(&two);
        for (_, sender, q) in &acc.per_round {
            if *sender == Party::Alice {
                assert_eq!(*q, compiled_message_size(params));
            }
        }
    }
}

#[test]
fn padding_preserves_the_output() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=2 {
        for d in 1..=3 {
            for r in 1..=5 {
                for _ in 0..4 {
                    let s = rng.random_range(0..=1);
                    let p = random_protocol(
                        LineParams::new(n, d, r, 1, s).unwrap(),
                        &GeneratorConfig::default(),
                        &mut rng,
                    );
                    let padded = p.pad_to_multiple();
                    assert_eq!(padded.params().r % d, 0);
                    assert!(padded.params().r - r < d);
                    for x in Bits::all(n) {
                        for y in Bits::all(n) {
                            let a = simulate_line(&p, &x, &y).unwrap().0;
                            let b = simulate_line(&padded, &x, &y).unwrap().0;
                            assert!(
                                a.max_abs_diff(&b) < 1e-12,
                                "n={n} d={d} r={r}\n{}",
                                p.to_ir()
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn ir_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let (p, _, _) = random_case(&mut rng);
        assert_eq!(LineProtocol::parse(&p.to_ir()).unwrap(), p);
        let two = compile_line_to_two_party(&p).unwrap();
        assert_eq!(
            qline::twoparty::TwoPartyProtocol::parse(&two.to_ir()).unwrap(),
            two
        );
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let e = LineProtocol::parse("line n=1 d=2\n")
        .unwrap_err()
        .to_string();
    assert!(e.contains("line 1"), "{e}");
}
