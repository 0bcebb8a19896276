mod common;

use common::*;
use proptest::prelude::*;
use psimoment::report::Mode;
use psimoment::scaled::net_event_weight;
use psimoment::sieve::psi_exact;
use psimoment::sweep::{Scaled, Shifted};
use psimoment::*;

fn fixed_sum(x: u64, h: u64, ks: &[u32], seg: u64) -> Vec<f64> {
    let job = FixedSum::new(x, h, ks, seg).unwrap();
    run_job(&job, &job.base_primes()).unwrap().values().unwrap()
}

fn fixed_integral(x: f64, h: f64, ks: &[u32], seg: u64) -> Vec<f64> {
    let job = FixedIntegral::new(x, h, ks, seg).unwrap();
    run_job(&job, &job.base_primes()).unwrap().values().unwrap()
}

fn scaled(x: f64, delta: f64, ks: &[u32], seg: u64) -> Vec<f64> {
    let job = ScaledIntegral::new(x, delta, ks, seg).unwrap();
    run_job(&job, &job.base_primes()).unwrap().values().unwrap()
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_segments_are_independent(lo in 0u64..2_000_000, len in 1u64..50_000, size in 1u64..10_000) {
        let whole = Segment::new(lo, lo + len).unwrap();
        let base = BasePrimes::for_range(whole.hi);
        let direct = lambda_segment(whole, &base).unwrap();
        let mut pieces = Vec::new();
        for seg in whole.split(size) {
            pieces.extend(lambda_segment(seg, &base).unwrap());
        }
        prop_assert_eq!(direct, pieces);
    }

    #[test]
    fn psi_is_monotone(a in 1.0f64..50_000.0, step in 0.0f64..5_000.0) {
        let lo = psi(a).unwrap();
        let hi = psi(a + step).unwrap();
        prop_assert!(lo <= hi);
    }

    #[test]
    fn psi_vanishes_below_two(x in 1.0f64..2.0) {
        prop_assert_eq!(psi(x).unwrap(), 0.0);
    }

    #[test]
    fn even_moments_are_nonnegative(x in 1u64..3_000, h_frac in 0.0f64..1.0, delta in 1e-3f64..1.0) {
        let h = ((x as f64 * h_frac) as u64).max(1);
        let ks = [2, 4, 6];
        for v in moment_sum(x, h, &ks).unwrap() {
            prop_assert!(v >= 0.0);
        }
        for v in moment_integral_fixed(x as f64, h as f64 * 0.7, &ks).unwrap() {
            prop_assert!(v >= 0.0);
        }
        for v in moment_integral_scaled(x as f64, delta, &ks).unwrap() {
            prop_assert!(v >= 0.0);
        }
    }

    #[test]
    fn gaussian_moment_recurrence(j in 1u32..8) {
        let k = 2 * j;
        prop_assert_eq!(mu(k + 2), f64::from(k + 1) * mu(k));
        prop_assert_eq!(mu(k + 1), 0.0);
    }

    #[test]
    fn events_conserve_weight(x in 2.0f64..20_000.0, delta in 1e-3f64..0.9) {
        let base = BasePrimes::for_range(((1.0 + delta) * x) as u64 + 2);
        let stream = merged_event_stream(x, delta, &base).unwrap();
        let s = |t: f64| psi(t * (1.0 + delta)).unwrap() - psi(t).unwrap();
        let expect = s(x) - s(1.0);
        prop_assert!((net_event_weight(&stream) - expect).abs() < 1e-6);
        let enters = stream.iter().filter(|e| e.kind == EventKind::Enter).count();
        let leaves = stream.len() - enters;
        prop_assert!(enters >= leaves);
        prop_assert!(stream.windows(2).all(|w| w[0].x <= w[1].x.next_up()));
    }

    #[test]
    fn fixed_sum_partition_invariant(x in 1u64..20_000, h in 1u64..500, seg in 1u64..5_000) {
        let h = h.min(x);
        let ks = [2, 3, 4];
        prop_assert_eq!(bits(&fixed_sum(x, h, &ks, seg)), bits(&fixed_sum(x, h, &ks, 1 << 22)));
    }

    #[test]
    fn fixed_integral_partition_invariant(x in 2.0f64..20_000.0, h_frac in 0.0f64..0.2, seg in 1u64..5_000) {
        let h = x * h_frac;
        let ks = [2, 4];
        prop_assert_eq!(bits(&fixed_integral(x, h, &ks, seg)), bits(&fixed_integral(x, h, &ks, 1 << 22)));
    }

    #[test]
    fn scaled_partition_invariant(x in 2.0f64..50_000.0, delta in 1e-3f64..0.5, seg in 1u64..20_000) {
        let ks = [2, 4];
        prop_assert_eq!(bits(&scaled(x, delta, &ks, seg)), bits(&scaled(x, delta, &ks, 1 << 22)));
    }

    #[test]
    fn window_refresh_matches_incremental(lo in 1u64..1_000_000, len in 1u64..20_000, h in 1.0f64..2_000.0) {
        let x_lo = lo as f64;
        let x_hi = x_lo + len as f64;
        let seg = Segment::new(lo, (x_hi + h) as u64 + 1).unwrap();
        let events = lambda_segment(seg, &BasePrimes::for_range(seg.hi)).unwrap();
        let mut w = WindowState::new(&events, Shifted { h }, x_lo, x_hi);
        let mut steps = 0;
        while w.advance().is_some() {
            steps += 1;
            if steps % 7 == 0 {
                prop_assert!((w.window_sum() - w.rebuilt_sum()).abs() < 1e-8);
            }
        }
        prop_assert!((w.window_sum() - w.rebuilt_sum()).abs() < 1e-8);
    }

    #[test]
    fn scaled_window_refresh(lo in 1u64..1_000_000, len in 1u64..20_000, delta in 1e-4f64..0.5) {
        let x_lo = lo as f64;
        let x_hi = x_lo + len as f64;
        let seg = Segment::new(lo, (x_hi * (1.0 + delta)) as u64 + 2).unwrap();
        let events = lambda_segment(seg, &BasePrimes::for_range(seg.hi)).unwrap();
        let mut w = WindowState::new(&events, Scaled { delta }, x_lo, x_hi);
        while w.advance().is_some() {}
        prop_assert!((w.window_sum() - w.rebuilt_sum()).abs() < 1e-8);
    }

    #[test]
    fn thm_i_tracks_ms_term(log_h in 3.0f64..5.0, log_ratio in 4.0f64..6.0, j in 1u32..4) {
        let h = 10f64.powf(log_h);
        let n = h * 10f64.powf(log_ratio);
        let k = 2 * j;
        let a = thm_i_main(n, h, k).unwrap();
        let b = ms_main_term(n, h, k).unwrap();
        prop_assert!(rel_err(a, b) < 0.01, "N = {n}, h = {h}, k = {k}: {a} vs {b}");
    }

    #[test]
    fn psi_is_exact_across_segmentations(n in 2u64..300_000, size in 1u64..50_000) {
        let base = BasePrimes::for_range(n);
        let a = psi_exact(n, &base, size).unwrap();
        let b = psi_exact(n, &base, 1 << 22).unwrap();
        prop_assert_eq!(a.raw(), b.raw());
    }
}

#[test]
fn scaled_million_one_segment_equals_many() {
    let ks = [2, 4, 6];
    let one = scaled(1e6, 1e-3, &ks, 1 << 22);
    for seg in [1024, 5_000, 65_536, 300_000] {
        assert_eq!(
            bits(&scaled(1e6, 1e-3, &ks, seg)),
            bits(&one),
            "segment size {seg}"
        );
    }
}

#[test]
fn sum_and_integral_modes_agree() {
    let sum = moment_sum(1_000_000, 1_000, &[2]).unwrap()[0];
    let integral = moment_integral_fixed(1e6, 1e3, &[2]).unwrap()[0];
    assert!(rel_err(integral, sum) < 0.01, "{integral} vs {sum}");
}

fn threaded(mode: Mode, x: f64, window: f64, threads: usize, seg: u64) -> Vec<u64> {
    let mut cfg = RunConfig::new(mode, x, &[2, 4, 6]);
    if mode == Mode::ScaledIntegral {
        cfg = cfg.with_delta(window);
    } else {
        cfg = cfg.with_h(window);
    }
    cfg.threads = threads;
    cfg.segment_size = seg;
    let report = run(&cfg).unwrap();
    report
        .rows
        .iter()
        .map(|r| r.actual.unwrap().to_bits())
        .collect()
}

#[test]
fn thread_count_does_not_change_results() {
    for (mode, x, w) in [
        (Mode::FixedSum, 2e6, 300.0),
        (Mode::FixedIntegral, 2e6, 123.5),
        (Mode::ScaledIntegral, 2e6, 1e-3),
    ] {
        let one = threaded(mode, x, w, 1, 100_000);
        let eight = threaded(mode, x, w, 8, 100_000);
        assert_eq!(one, eight, "{mode:?}");
    }
}

#[test]
fn fixed_integral_hundred_million_thread_invariant() {
    let one = threaded(Mode::FixedIntegral, 1e8, 1e4, 1, 1 << 22);
    let eight = threaded(Mode::FixedIntegral, 1e8, 1e4, 8, 1 << 22);
    assert_eq!(one, eight);
}
