//! Recurrence classification of birth-death walks on `Z+`.
//!
//! With `r_k = (1 - p_k) / p_k` the walk is transient iff
//! `S1 = sum_n prod_{k=1}^{n} r_k` converges and positive recurrent iff
//! `S2 = sum_n prod_{k=0}^{n-1} p_k / prod_{k=1}^{n} (1 - p_k)` converges.
//! Sequences that are eventually periodic are decided exactly from the
//! product of `r_k` over one period; anything else goes through
//! [`ConvergencePolicy`], which is allowed to answer "undetermined".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::PSeq;
use crate::seqspace::Lattice;

/// Magnitude beyond which running products are reported as `+inf`.
pub const OVERFLOW_MARK: f64 = 1e300;

fn ratio(p: f64) -> f64 {
    (1.0 - p) / p
}

fn guard(x: f64) -> f64 {
    if x > OVERFLOW_MARK || x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// Finite-horizon heuristic for deciding convergence of a positive series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePolicy {
    /// Number of trailing term ratios inspected.
    pub window: usize,
    /// Ratios must stay below `1 - delta` (or above `1 + delta`).
    pub delta: f64,
    /// Trailing terms all below this count as converged.
    pub tiny: f64,
    /// Partial sums above this count as diverged.
    pub divergence_cap: f64,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        ConvergencePolicy {
            window: 20,
            delta: 0.05,
            tiny: 1e-14,
            divergence_cap: 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesOutcome {
    Converges,
    Diverges,
    Undetermined,
}

impl ConvergencePolicy {
    /// Judges the series with the given terms (all nonnegative).
    pub fn assess(&self, terms: &[f64]) -> SeriesOutcome {
        let mut sum = 0.0;
        for &t in terms {
            sum += t;
        }
        let k = self.window;
        if terms.len() > k {
            let tail = &terms[terms.len() - k..];
            if tail.iter().all(|&t| t < self.tiny) {
                return SeriesOutcome::Converges;
            }
            let ratios: Vec<f64> = terms[terms.len() - k - 1..]
                .windows(2)
                .map(|w| if w[0] == 0.0 { f64::INFINITY } else { w[1] / w[0] })
                .collect();
            if ratios.iter().all(|&r| r <= 1.0 - self.delta) {
                return SeriesOutcome::Converges;
            }
            if ratios.iter().all(|&r| r >= 1.0 + self.delta) {
                return SeriesOutcome::Diverges;
            }
        }
        if !sum.is_finite() || sum > self.divergence_cap {
            return SeriesOutcome::Diverges;
        }
        SeriesOutcome::Undetermined
    }
}

/// Terms `prod_{k=1}^{n} r_k` for `n = 1..=horizon`.
pub fn s1_terms(pseq: &PSeq, horizon: usize) -> Vec<f64> {
    let mut t = 1.0;
    (1..=horizon as i64)
        .map(|n| {
            t = guard(t * ratio(pseq.at(n)));
            t
        })
        .collect()
}

/// Terms `prod_{k=0}^{n-1} p_k / prod_{k=1}^{n} (1 - p_k)` for `n = 1..=horizon`.
pub fn s2_terms(pseq: &PSeq, horizon: usize) -> Vec<f64> {
    let mut t = 1.0;
    (1..=horizon as i64)
        .map(|n| {
            t = guard(t * pseq.at(n - 1) / (1.0 - pseq.at(n)));
            t
        })
        .collect()
}

fn partial(terms: &[f64]) -> f64 {
    guard(terms.iter().sum())
}

pub fn s1_partial(pseq: &PSeq, horizon: usize) -> f64 {
    partial(&s1_terms(pseq, horizon))
}

pub fn s2_partial(pseq: &PSeq, horizon: usize) -> f64 {
    partial(&s2_terms(pseq, horizon))
}

/// Weights `w_1, ..., w_{n_max}`: `w_n = r_{n-1} w_{n-2}` with `w_0 = 1`, `w_1 = r_0`.
pub fn weights(pseq: &PSeq, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max);
    let (mut even, mut odd) = (1.0, 1.0);
    for n in 1..=n_max as i64 {
        let r = ratio(pseq.at(n - 1));
        let w = if n % 2 == 0 {
            even *= r;
            even
        } else {
            odd *= r;
            odd
        };
        out.push(w);
    }
    out
}

/// `w_n`: the product of `r_k` over the indices `k < n` with `k` of parity opposite to `n`.
pub fn weight_w(pseq: &PSeq, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("weight index starts at 1".into()));
    }
    let start = if n.is_multiple_of(2) { 1 } else { 0 };
    Ok((start..n as i64).step_by(2).map(|k| ratio(pseq.at(k))).product())
}

/// `lim w_n^{1/n}` along odd `n` (slot 0) and even `n` (slot 1), exact for the supported sequence forms.
pub fn weight_parity_rates(pseq: &PSeq) -> [f64; 2] {
    let n0 = pseq.periodic_from();
    let l = pseq.period() as i64;
    let log_rate = |parity: i64| {
        let mut s = 0.0;
        for k in n0..n0 + 2 * l {
            if k.rem_euclid(2) == parity {
                s += ratio(pseq.at(k)).ln();
            }
        }
        s / (2 * l) as f64
    };
    [log_rate(0).exp(), log_rate(1).exp()]
}

/// `limsup w_n^{1/n}`, exact for the supported sequence forms.
pub fn weight_decay_rate(pseq: &PSeq) -> f64 {
    let [a, b] = weight_parity_rates(pseq);
    a.max(b)
}

/// Log of `prod r_k` over one period of the tail.
fn log_period_ratio(pseq: &PSeq) -> f64 {
    pseq.tail_period().iter().map(|&p| ratio(p).ln()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recurrence {
    PositiveRecurrent,
    NullRecurrent,
    Transient,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactConstant,
    /// Eventually periodic sequence, decided from the period product.
    ExactPeriodic,
    SeriesHeuristic,
    ExactLine,
}

/// Partial sums of one series, sampled, with the policy's reading of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEvidence {
    pub n: Vec<usize>,
    pub partial_sums: Vec<f64>,
    pub outcome: SeriesOutcome,
}

const TRACE_POINTS: usize = 200;

impl SeriesEvidence {
    fn from_terms(terms: &[f64], policy: &ConvergencePolicy) -> SeriesEvidence {
        let stride = (terms.len() / TRACE_POINTS).max(1);
        let mut n = Vec::new();
        let mut partial_sums = Vec::new();
        let mut acc = 0.0;
        for (k, &t) in terms.iter().enumerate() {
            acc = guard(acc + t);
            if (k + 1) % stride == 0 || k + 1 == terms.len() {
                n.push(k + 1);
                partial_sums.push(acc);
            }
        }
        SeriesEvidence {
            n,
            partial_sums,
            outcome: policy.assess(terms),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub verdict: Recurrence,
    pub method: Method,
    pub horizon: usize,
    pub s1: SeriesEvidence,
    pub s2: SeriesEvidence,
    pub policy: ConvergencePolicy,
    pub note: Option<String>,
}

/// Classifies the half-line walk, taking the exact route whenever the
/// sequence is eventually periodic.
pub fn classify(pseq: &PSeq, horizon: usize, policy: &ConvergencePolicy) -> Result<ClassVerdict> {
    let mut v = classify_by_series(pseq, horizon, policy)?;
    if let Some(p) = pseq.as_constant() {
        v.method = Method::ExactConstant;
        v.verdict = if p < 0.5 {
            Recurrence::PositiveRecurrent
        } else if p == 0.5 {
            Recurrence::NullRecurrent
        } else {
            Recurrence::Transient
        };
        v.note = None;
        return Ok(v);
    }
    let l = log_period_ratio(pseq);
    let scale = 1e-12 * pseq.period() as f64;
    v.method = Method::ExactPeriodic;
    v.note = Some(format!("log of period product of (1-p)/p = {l:e}"));
    v.verdict = if l.abs() <= scale {
        Recurrence::NullRecurrent
    } else if l < 0.0 {
        Recurrence::Transient
    } else {
        Recurrence::PositiveRecurrent
    };
    Ok(v)
}

/// Classifies from the partial sums of `S1` and `S2` alone.
pub fn classify_by_series(pseq: &PSeq, horizon: usize, policy: &ConvergencePolicy) -> Result<ClassVerdict> {
    pseq.validate()?;
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let s1 = SeriesEvidence::from_terms(&s1_terms(pseq, horizon), policy);
    let s2 = SeriesEvidence::from_terms(&s2_terms(pseq, horizon), policy);
    use SeriesOutcome::*;
    let (verdict, note) = match (s1.outcome, s2.outcome) {
        (Converges, Converges) => (Recurrence::Undetermined, Some("both series judged convergent".to_string())),
        (Converges, _) => (Recurrence::Transient, None),
        (_, Converges) => (Recurrence::PositiveRecurrent, None),
        (Diverges, Diverges) => (Recurrence::NullRecurrent, None),
        _ => (Recurrence::Undetermined, Some("policy could not decide".to_string())),
    };
    Ok(ClassVerdict {
        verdict,
        method: Method::SeriesHeuristic,
        horizon,
        s1,
        s2,
        policy: *policy,
        note,
    })
}

/// Classification on either lattice. On `Z` only constant `p` is covered:
/// null recurrent at `p = 1/2`, transient otherwise.
pub fn classify_on(lattice: Lattice, pseq: &PSeq, horizon: usize, policy: &ConvergencePolicy) -> Result<ClassVerdict> {
    match lattice {
        Lattice::HalfLine => classify(pseq, horizon, policy),
        Lattice::Line => {
            let p = pseq.as_constant().ok_or_else(|| {
                Error::InvalidArgument("line classification needs a constant p-sequence".into())
            })?;
            let empty = SeriesEvidence {
                n: Vec::new(),
                partial_sums: Vec::new(),
                outcome: SeriesOutcome::Undetermined,
            };
            Ok(ClassVerdict {
                verdict: if p == 0.5 {
                    Recurrence::NullRecurrent
                } else {
                    Recurrence::Transient
                },
                method: Method::ExactLine,
                horizon,
                s1: empty.clone(),
                s2: empty,
                policy: *policy,
                note: None,
            })
        }
    }
}
