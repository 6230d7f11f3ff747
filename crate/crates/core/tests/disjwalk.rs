use qline::disjwalk::*;
use qline::exec::Execution;
use qline::qcore::Bits;

fn brute_epsilon(n: usize, t: usize, marked: &[usize]) -> f64 {
    let all = subsets(n, t);
    let hit = all
        .iter()
        .filter(|&&s| marked.iter().any(|&i| s >> i & 1 == 1))
        .count();
    hit as f64 / all.len() as f64
}

#[test]
fn spectral_gap_matches_the_closed_form() {
    for n in 2..=8 {
        for t in 1..n {
            let exact = spectral_gap_exact(n, t).unwrap();
            let closed = spectral_gap_closed_form(n, t).unwrap();
            assert!((exact - closed).abs() < 1e-9, "n={n} t={t}");
        }
    }
    assert!((spectral_gap_closed_form(6, 2).unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn epsilon_matches_enumeration() {
    for n in 1..=8 {
        for t in 1..=n {
            for mask in 1u32..(1 << n) {
                let marked: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let e = epsilon(n, t, &marked).unwrap();
                assert!((e - brute_epsilon(n, t, &marked)).abs() < 1e-12);
            }
        }
    }
    assert!((epsilon(6, 2, &[0]).unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn small_error_search_meets_its_target() {
    for t in 1..=16 {
        for err in [0.25, 0.05, 0.01] {
            let sched = SearchSchedule::new(t, err).unwrap();
            for m in 1..=t {
                assert!(sched.detection_probability(m) >= 1.0 - err - 1e-12);
            }
            assert_eq!(sched.detection_probability(0), 0.0);
            let mut marked = vec![false; t];
            marked[t / 2] = true;
            let out = small_error_search(&marked, err).unwrap();
            assert!(out.p_found >= 1.0 - err - 1e-12);
            assert_eq!(out.queries, sched.queries());
        }
    }
}

#[test]
fn updates_keep_stored_bits_consistent() {
    for n in 2..=6 {
        for xv in 0..1u64 << n {
            let x = Bits::from_value(xv, n);
            for t in 1..n {
                let (s, q) = setup(&x, n, t).unwrap();
                assert_eq!(q, t);
                assert!(s.bits_mismatch(&x) < 1e-12);
                let (u, q) = update_step(&s, &x).unwrap();
                assert_eq!(q, 2);
                assert!(u.bits_mismatch(&x) < 1e-12);
                assert!((u.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn checking_reflection_flips_marked_vertices() {
    let n = 6;
    let x = Bits::from_value(0b000100, n);
    let y = Bits::from_value(0b001100, n);
    let (s, _) = setup(&x, n, 2).unwrap();
    let (r, q) = checking_reflection(&s, &y, None);
    assert_eq!(q, 2);
    let space = WalkSpace::new(n, 2).unwrap();
    let marked_index = (0..n).find(|&i| x.get(i) && y.get(i)).unwrap();
    let d = s.vertex_distribution();
    let mut overlap = 0.0;
    for (v, p) in d.iter().enumerate() {
        let sign = if space.members(v).contains(&marked_index) {
            -1.0
        } else {
            1.0
        };
        overlap += sign * p;
    }
    assert!((r.inner(&s).re - overlap).abs() < 1e-12);
    assert!((1.0 - overlap - 2.0 * epsilon(n, 2, &[marked_index]).unwrap()).abs() < 1e-12);
}

#[test]
fn unique_intersection_is_found() {
    let n = 6;
    let x = Bits::from_value(0b000100, n);
    let y = Bits::from_value(0b001100, n);
    for d in [1, 2, 3, 6] {
        let run = disjointness_delay_d(n, d, &x, &y, &WalkConfig::default()).unwrap();
        assert_eq!(run.verdict(), Verdict::Intersecting);
        assert!(run.p_success >= 2.0 / 3.0);
    }
}

#[test]
fn small_sweep_passes() {
    let s = exhaustive_sweep(4, 2, &WalkConfig::default(), Execution::Sequential).unwrap();
    assert!(s.passes());
    assert_eq!(s.pairs, 256);
}

#[test]
fn oversized_walks_report_the_cap() {
    assert!(matches!(
        WalkSpace::new(64, 3),
        Err(qline::Error::CapExceeded { .. })
    ));
}
