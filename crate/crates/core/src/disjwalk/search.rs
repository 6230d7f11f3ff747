//! Unordered search with small one-sided error.
//!
//! One pass runs a fixed list of Grover attempts; attempt `k` applies `k`
//! Grover iterations, measures, and spends one more query to confirm the
//! outcome. The list is chosen greedily until every nonzero number of marked
//! elements is found with probability at least 3/4. The pass is repeated
//! until the worst-case miss probability is at most the target. An unmarked
//! domain is never reported as marked.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Success probability of `k` Grover iterations with `marked` of `domain` marked.
pub fn grover_success(domain: usize, marked: usize, k: usize) -> f64 {
    if marked == 0 {
        return 0.0;
    }
    let theta = (marked as f64 / domain as f64).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

/// Measurement distribution after `k` Grover iterations, by state-vector simulation.
pub fn grover_distribution(marked: &[bool], k: usize) -> Vec<f64> {
    let n = marked.len();
    let mut amps = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    for _ in 0..k {
        for (a, &m) in amps.iter_mut().zip(marked) {
            if m {
                *a = -*a;
            }
        }
        let mean = amps.iter().sum::<Complex64>() / n as f64;
        for a in amps.iter_mut() {
            *a = 2.0 * mean - *a;
        }
    }
    amps.iter().map(|a| a.norm_sqr()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSchedule {
    pub domain: usize,
    /// Grover iteration counts of one pass.
    pub attempts: Vec<usize>,
    pub repetitions: usize,
}

const PASS_MISS: f64 = 0.25;

impl SearchSchedule {
    pub fn new(domain: usize, error: f64) -> Result<Self> {
        if domain == 0 {
            return Err(Error::Invalid("empty search domain".into()));
        }
        if !(error > 0.0 && error < 0.5) {
            return Err(Error::Invalid(format!(
                "error target {error} not in (0, 1/2)"
            )));
        }
        let theta_min = (1.0 / domain as f64).sqrt().asin();
        let kmax = (std::f64::consts::FRAC_PI_4 / theta_min).floor() as usize;
        let mut miss = vec![1.0; domain + 1];
        miss[0] = 0.0;
        let worst = |m: &[f64]| m.iter().copied().fold(0.0, f64::max);
        let mut attempts = Vec::new();
        while worst(&miss) > PASS_MISS {
            let after = |k: usize| -> Vec<f64> {
                miss.iter()
                    .enumerate()
                    .map(|(m, f)| f * (1.0 - grover_success(domain, m, k)))
                    .collect()
            };
            let best = (0..=kmax)
                .min_by(|&a, &b| worst(&after(a)).total_cmp(&worst(&after(b))))
                .expect("kmax ≥ 0");
            miss = after(best);
            attempts.push(best);
        }
        let w = worst(&miss);
        let mut repetitions = 1;
        while w.powi(repetitions as i32) > error {
            repetitions += 1;
        }
        Ok(SearchSchedule {
            domain,
            attempts,
            repetitions,
        })
    }

    pub fn queries(&self) -> usize {
        self.repetitions * self.attempts.iter().map(|k| k + 1).sum::<usize>()
    }

    /// Probability of reporting "found" when `marked` elements are marked.
    pub fn detection_probability(&self, marked: usize) -> f64 {
        if marked == 0 {
            return 0.0;
        }
        let pass_miss: f64 = self
            .attempts
            .iter()
            .map(|&k| 1.0 - grover_success(self.domain, marked, k))
            .product();
        1.0 - pass_miss.powi(self.repetitions as i32)
    }

    /// Largest miss probability over all nonzero marked counts.
    pub fn worst_error(&self) -> f64 {
        (1..=self.domain)
            .map(|m| 1.0 - self.detection_probability(m))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOutcome {
    /// Exact probability of reporting "found".
    pub p_found: f64,
    pub queries: usize,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.p_found >= 0.5
    }
}

/// Run the schedule on an explicit oracle, simulating every attempt.
pub fn small_error_search(marked: &[bool], error: f64) -> Result<SearchOutcome> {
    let sched = SearchSchedule::new(marked.len(), error)?;
    let pass_miss: f64 = sched
        .attempts
        .iter()
        .map(|&k| {
            let dist = grover_distribution(marked, k);
            1.0 - dist
                .iter()
                .zip(marked)
                .filter(|(_, &m)| m)
                .map(|(p, _)| p)
                .sum::<f64>()
        })
        .product();
    Ok(SearchOutcome {
        p_found: 1.0 - pass_miss.powi(sched.repetitions as i32),
        queries: sched.queries(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_element_exact_case() {
        assert!((grover_success(4, 1, 1) - 1.0).abs() < 1e-12);
        let d = grover_distribution(&[false, false, true, false], 1);
        assert!((d[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_element_domain_costs_one_query() {
        let s = SearchSchedule::new(1, 0.05).unwrap();
        assert_eq!(s.queries(), 1);
        assert_eq!(s.detection_probability(1), 1.0);
    }

    #[test]
    fn unmarked_never_found() {
        let out = small_error_search(&[false; 7], 0.1).unwrap();
        assert_eq!(out.p_found, 0.0);
        assert!(!out.found());
    }

    #[test]
    fn schedule_meets_target() {
        for domain in 1..=16 {
            let s = SearchSchedule::new(domain, 0.05).unwrap();
            assert!(s.worst_error() <= 0.05, "domain {domain}");
        }
    }
}
