//! Point-spectrum probes for the walks on `Z+`.
//!
//! An eigenvector of `W_p` for `lambda` satisfies `u_n = q_n u_0` with
//! `q_0 = 1`, `q_1 = (lambda + p - 1) / p` and
//! `(1 - p) q_n - lambda q_{n+1} + p q_{n+2} = 0`, i.e. `(q_n, q_{n-1})` is
//! propagated by the transfer matrix `M = [[lambda/p, (p-1)/p], [1, 0]]`.
//! Membership of `(q_n)` in a sequence space is decided from the moduli of
//! the eigenvalues of `M` that actually carry weight in `q`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::{weight_parity_rates, ConvergencePolicy, SeriesOutcome};
use crate::error::{Error, Result};
use crate::operators::{make_walk, PSeq};
use crate::seqspace::{FinSeq, Lattice, Space};

/// Half-width of the band around the unit circle where no verdict is given.
pub const UNIT_BAND: f64 = 1e-8;
/// `|lambda^2 - 4p(1-p)|` below this is treated as a double root.
pub const DEFECTIVE_BAND: f64 = 1e-12;

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferMatrix {
    pub p: f64,
    pub lambda: Complex64,
}

impl TransferMatrix {
    pub fn new(p: f64, lambda: Complex64) -> Result<TransferMatrix> {
        check_p(p)?;
        Ok(TransferMatrix { p, lambda })
    }

    /// Row-major entries.
    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        [
            [self.lambda / self.p, Complex64::new((self.p - 1.0) / self.p, 0.0)],
            [one, zero],
        ]
    }

    pub fn det(&self) -> Complex64 {
        let m = self.entries();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        let m = self.entries();
        m[0][0] + m[1][1]
    }

    /// `lambda^2 - 4 p (1 - p)`.
    pub fn discriminant(&self) -> Complex64 {
        self.lambda * self.lambda - 4.0 * self.p * (1.0 - self.p)
    }

    /// Roots of `p z^2 - lambda z + (1 - p)`, larger modulus first.
    pub fn eigenvalues(&self) -> (Complex64, Complex64) {
        let s = self.discriminant().sqrt();
        let a = (self.lambda + s) / (2.0 * self.p);
        let b = (self.lambda - s) / (2.0 * self.p);
        if a.norm() >= b.norm() {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// `M [x, y]^T`.
    pub fn step(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let m = self.entries();
        (m[0][0] * x + m[0][1] * y, x)
    }
}

/// `q_0, ..., q_{n_max}`.
pub fn eigen_sequence(p: f64, lambda: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
    let m = TransferMatrix::new(p, lambda)?;
    let mut q = Vec::with_capacity(n_max + 1);
    let (mut cur, mut prev) = ((lambda + p - 1.0) / p, Complex64::new(1.0, 0.0));
    q.push(prev);
    if n_max >= 1 {
        q.push(cur);
    }
    for _ in 2..=n_max {
        let (next, _) = m.step(cur, prev);
        prev = cur;
        cur = next;
        q.push(cur);
    }
    Ok(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Yes,
    No,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootCase {
    /// Real `lambda`, negative discriminant: `|alpha| = |beta| = sqrt((1-p)/p)` exactly.
    ConjugatePair,
    Distinct,
    /// Double root `theta`, `q_n = (e + f n) theta^n`.
    Defective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumVerdict {
    pub p: f64,
    pub lambda: Complex64,
    pub space: Space,
    pub member: Membership,
    pub case: RootCase,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub abs_alpha: f64,
    pub abs_beta: f64,
    pub discriminant: Complex64,
    /// `(c, d)` in `q_n = c alpha^n + d beta^n`, or `(e, f)` in the defective case.
    pub coefficients: (Complex64, Complex64),
    /// Largest modulus among the roots with a nonzero coefficient.
    pub dominant_modulus: f64,
    /// `max |q_n|` and `|q_N|` over the diagnostic run.
    pub max_abs_q: f64,
    pub last_abs_q: f64,
    pub diagnostic_len: usize,
}

const DIAGNOSTIC_LEN: usize = 200;

fn decide_by_modulus(rho: f64) -> Membership {
    if rho < 1.0 - UNIT_BAND {
        Membership::Yes
    } else if rho > 1.0 + UNIT_BAND {
        Membership::No
    } else {
        Membership::Undetermined
    }
}

/// Is `lambda` an eigenvalue of `W_p` acting on `space`?
pub fn point_spectrum_probe(p: f64, lambda: Complex64, space: Space) -> Result<SpectrumVerdict> {
    let space = space.validated()?;
    let m = TransferMatrix::new(p, lambda)?;
    let disc = m.discriminant();
    let (alpha, beta) = m.eigenvalues();
    let q1 = (lambda + p - 1.0) / p;
    let one = Complex64::new(1.0, 0.0);

    let (case, coefficients, member, dominant) = if disc.norm() < DEFECTIVE_BAND {
        let theta = lambda / (2.0 * p);
        let f = q1 / theta - one;
        let rho = theta.norm();
        (RootCase::Defective, (one, f), decide_by_modulus(rho), rho)
    } else {
        let c = (q1 - beta) / (alpha - beta);
        let d = (alpha - q1) / (alpha - beta);
        let scale = c.norm() + d.norm();
        let active = |coef: Complex64, root: Complex64| {
            if coef.norm() > 1e-12 * scale {
                root.norm()
            } else {
                0.0
            }
        };
        let rho = active(c, alpha).max(active(d, beta));
        if lambda.im == 0.0 && disc.re < 0.0 {
            // |alpha|^2 = alpha * conj(alpha) = det M = (1 - p) / p
            let member = if p > 0.5 {
                Membership::Yes
            } else if p == 0.5 {
                // distinct points on the unit circle: bounded, not null, not convergent
                if space == Space::LInf {
                    Membership::Yes
                } else {
                    Membership::No
                }
            } else {
                Membership::No
            };
            (RootCase::ConjugatePair, (c, d), member, ((1.0 - p) / p).sqrt())
        } else {
            (RootCase::Distinct, (c, d), decide_by_modulus(rho), rho)
        }
    };

    let q = eigen_sequence(p, lambda, DIAGNOSTIC_LEN)?;
    let max_abs_q = q.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SpectrumVerdict {
        p,
        lambda,
        space,
        member,
        case,
        alpha,
        beta,
        abs_alpha: alpha.norm(),
        abs_beta: beta.norm(),
        discriminant: disc,
        coefficients,
        dominant_modulus: dominant,
        max_abs_q,
        last_abs_q: q[DIAGNOSTIC_LEN].norm(),
        diagnostic_len: DIAGNOSTIC_LEN,
    })
}

/// Largest `r` such that every probed `lambda` with `|lambda| < r` on a
/// polar grid of radius 2 is certified. A lower estimate of a disk inside the
/// point spectrum, never a proof.
pub fn certified_disk_radius(p: f64, space: Space, radii: usize, angles: usize) -> Result<f64> {
    let mut r_fail = f64::INFINITY;
    for i in 0..=radii {
        let r = 2.0 * i as f64 / radii.max(1) as f64;
        for k in 0..angles.max(1) {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / angles.max(1) as f64;
            let lambda = Complex64::from_polar(r, theta);
            if point_spectrum_probe(p, lambda, space)?.member != Membership::Yes {
                r_fail = r_fail.min(r);
            }
        }
    }
    Ok(r_fail.min(2.0))
}

/// Coordinates `u_0 = 1, ..., u_{n_max}` of the kernel vector of `G`.
///
/// Row `i >= 1` of `G u = 0` gives `u_{i+1} = -(1 - p_i) / p_i * u_{i-1}`,
/// so `|u_n| = w_n` and the sign of `u_n` is `(-1)^ceil(n/2)`.
pub fn g_zero_eigenvector(pseq: &PSeq, n_max: usize) -> Result<Vec<f64>> {
    pseq.validate()?;
    let mut u = Vec::with_capacity(n_max + 1);
    u.push(1.0);
    for n in 1..=n_max as i64 {
        let p = pseq.at(n - 1);
        let prev = if n >= 2 { u[(n - 2) as usize] } else { 1.0 };
        u.push((p - 1.0) / p * prev);
    }
    Ok(u)
}

/// Coordinates `u_0 = 1, ..., u_{n_max}` of the left null vector `u G = 0`.
///
/// Column 0 gives `u_1 = -(1 - p_0) / (1 - p_1) u_0`; column `k >= 1` gives
/// `u_{k+1} = p_{k-1} / (p_{k+1} - 1) u_{k-1}`.
pub fn dual_zero_eigenvector(pseq: &PSeq, n_max: usize) -> Result<Vec<f64>> {
    pseq.validate()?;
    let mut u = Vec::with_capacity(n_max + 1);
    u.push(1.0);
    if n_max >= 1 {
        u.push(-(1.0 - pseq.at(0)) / (1.0 - pseq.at(1)));
    }
    for k in 1..n_max as i64 {
        let next = pseq.at(k - 1) / (pseq.at(k + 1) - 1.0) * u[(k - 1) as usize];
        u.push(next);
    }
    Ok(u)
}

/// Residual `max |(u G)_k|` over the columns fully determined by the stored coordinates.
pub fn dual_residual(pseq: &PSeq, u: &[f64]) -> Result<f64> {
    let g = make_walk(Lattice::HalfLine, pseq.clone())?;
    let uv = FinSeq::half_line(u);
    let ug = g.apply_transpose(&uv)?;
    Ok((0..u.len().saturating_sub(1) as i64)
        .map(|k| ug.get(k).norm())
        .fold(0.0, f64::max))
}

/// Per-parity `limsup |u_n|^{1/n}` of the left null vector, exact for eventually periodic sequences.
pub fn dual_parity_rates(pseq: &PSeq) -> [f64; 2] {
    let n0 = pseq.periodic_from();
    let l = pseq.period() as i64;
    let mut out = [0.0; 2];
    for (parity, slot) in out.iter_mut().enumerate() {
        let parity = parity as i64;
        // u_{k+1} / u_{k-1} = p_{k-1} / (p_{k+1} - 1) along the chain of index parity
        let first = {
            let base = n0 + 2;
            if base.rem_euclid(2) == parity { base } else { base + 1 }
        };
        let mut s = 0.0;
        for t in 0..l {
            let idx = first + 2 * t;
            s += (pseq.at(idx - 2) / (1.0 - pseq.at(idx))).ln();
        }
        *slot = (s / (2 * l) as f64).exp();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualReport {
    pub pseq: String,
    pub space: Space,
    /// How membership of the left null vector in the dual is tested.
    pub dual_test: String,
    pub exponent: Option<f64>,
    pub parity_rates: [f64; 2],
    pub in_dual: Membership,
    /// Policy reading of the summability series on the computed coordinates.
    pub series_outcome: SeriesOutcome,
    /// The weight-sequence hypothesis on `1/w_n` for the same space.
    pub weight_hypothesis: Membership,
    pub residual: f64,
    /// True when `0` is certified in the dual point spectrum, so no `lambda G` is hypercyclic.
    pub not_hypercyclic: bool,
    pub conclusion: String,
}

fn rate_decision(rate: f64) -> Membership {
    if rate < 1.0 - 1e-12 {
        Membership::Yes
    } else if rate > 1.0 + 1e-12 {
        Membership::No
    } else {
        Membership::Undetermined
    }
}

/// Tests whether `0` is an eigenvalue of the dual of `G` on `space`:
/// `(c0)' = l^1` (summability), `(l^1)' = l^inf` (boundedness),
/// `(l^q)' = l^{q/(q-1)}`.
pub fn dual_obstruction(pseq: &PSeq, space: Space, n_max: usize, policy: &ConvergencePolicy) -> Result<DualReport> {
    let space = space.validated()?;
    let u = dual_zero_eigenvector(pseq, n_max)?;
    let residual = dual_residual(pseq, &u)?;
    let rates = dual_parity_rates(pseq);
    let rmax = rates[0].max(rates[1]);
    let wr = weight_parity_rates(pseq);
    let wmin = wr[0].min(wr[1]);
    let inv_w = 1.0 / wmin;

    let (dual_test, exponent, in_dual, terms, weight_hypothesis) = match space {
        Space::C0 | Space::C => (
            "l1-summable".to_string(),
            Some(1.0),
            rate_decision(rmax),
            u.iter().map(|x| x.abs()).collect::<Vec<_>>(),
            rate_decision(inv_w),
        ),
        Space::Lq(1.0) => {
            // bounded iff the growth rate does not exceed one; rate exactly one means periodic moduli
            let m = if rmax <= 1.0 + 1e-12 { Membership::Yes } else { Membership::No };
            let h = if inv_w <= 1.0 + 1e-12 { Membership::Yes } else { Membership::No };
            ("bounded".to_string(), None, m, u.iter().map(|x| x.abs()).collect(), h)
        }
        Space::Lq(q) => {
            let r = q / (q - 1.0);
            (
                format!("l{r}-summable"),
                Some(r),
                rate_decision(rmax),
                u.iter().map(|x| x.abs().powf(r)).collect(),
                rate_decision(inv_w),
            )
        }
        Space::LInf => {
            return Err(Error::InvalidSpace(
                "the dual of l^inf is not a sequence space; use c0 or l^q".into(),
            ))
        }
    };
    let series_outcome = policy.assess(&terms);
    let not_hypercyclic = in_dual == Membership::Yes;
    let conclusion = if not_hypercyclic {
        format!("0 is an eigenvalue of the dual on {space}; lambda*G is not hypercyclic for any lambda")
    } else {
        "no obstruction from the dual point spectrum at 0".to_string()
    };
    Ok(DualReport {
        pseq: pseq.to_string(),
        space,
        dual_test,
        exponent,
        parity_rates: rates,
        in_dual,
        series_outcome,
        weight_hypothesis,
        residual,
        not_hypercyclic,
        conclusion,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRow {
    pub lambda: f64,
    pub bounded: bool,
    pub max_abs_q: f64,
    /// `|c| + |d|` when both roots sit on the unit circle.
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricDualReport {
    pub p: f64,
    pub n_max: usize,
    pub rows: Vec<IntervalRow>,
    pub certified: usize,
    pub not_supercyclic_on_l1: bool,
    pub conclusion: String,
}

/// At `p = 1/2`, checks that `(q_n)` stays bounded for each `lambda`, so
/// every such `lambda` is an `l^inf` eigenvalue of `W = W'`. Two or more
/// certified points rule out supercyclicity on `l^1`.
pub fn symmetric_dual_interval_check(lambdas: &[f64], n_max: usize) -> Result<SymmetricDualReport> {
    let p = 0.5;
    let mut rows = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let lambda = Complex64::new(l, 0.0);
        let v = point_spectrum_probe(p, lambda, Space::LInf)?;
        let q = eigen_sequence(p, lambda, n_max)?;
        let max_abs_q = q.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let (bound, bounded) = if v.case == RootCase::ConjugatePair {
            let b = v.coefficients.0.norm() + v.coefficients.1.norm();
            (Some(b), max_abs_q <= b * (1.0 + 1e-9))
        } else {
            (None, false)
        };
        rows.push(IntervalRow {
            lambda: l,
            bounded,
            max_abs_q,
            bound,
        });
    }
    let certified = rows.iter().filter(|r| r.bounded).count();
    let not_supercyclic_on_l1 = certified >= 2;
    let conclusion = if not_supercyclic_on_l1 {
        format!("{certified} distinct l^inf eigenvalues of the symmetric walk; W_1/2 is not supercyclic on l^1")
    } else {
        "fewer than two certified dual eigenvalues; no conclusion".to_string()
    };
    Ok(SymmetricDualReport {
        p,
        n_max,
        rows,
        certified,
        not_supercyclic_on_l1,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::weights;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn lambda_one_gives_constant_sequence() {
        // rounding error grows like ((1-p)/p)^n along the inactive root
        for (p, n) in [(0.2, 12), (0.5, 50), (0.9, 50)] {
            let q = eigen_sequence(p, re(1.0), n).unwrap();
            assert!(q.iter().all(|z| (z - re(1.0)).norm() < 1e-8));
        }
    }

    #[test]
    fn decay_and_growth_at_zero() {
        let q = eigen_sequence(0.75, re(0.0), 40).unwrap();
        // |q_{2k}| = (1/3)^k
        assert!((q[40].norm() - (1.0f64 / 3.0).powi(20)).abs() < 1e-20);
        let (a, b) = TransferMatrix::new(0.75, re(0.0)).unwrap().eigenvalues();
        assert!((a.norm() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((b.norm() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(a.re.abs() < 1e-15);

        let q = eigen_sequence(0.25, re(0.0), 40).unwrap();
        assert!((q[40].norm() - 3f64.powi(20)).abs() < 1e-3);
    }

    #[test]
    fn recurrence_residual() {
        let p = 0.62;
        let lambda = Complex64::new(0.3, -0.4);
        let q = eigen_sequence(p, lambda, 60).unwrap();
        for n in 0..59 {
            let r = (1.0 - p) * q[n] - lambda * q[n + 1] + p * q[n + 2];
            assert!(r.norm() < 1e-12 * (1.0 + q[n + 2].norm()));
        }
        // first row: (1 - p - lambda) q_0 + p q_1 = 0
        assert!(((1.0 - p - lambda) * q[0] + p * q[1]).norm() < 1e-15);
    }

    #[test]
    fn eigen_sequence_is_an_eigenvector() {
        let p = 0.8;
        let lambda = re(0.45);
        let q = eigen_sequence(p, lambda, 120).unwrap();
        let w = make_walk(Lattice::HalfLine, PSeq::constant(p).unwrap()).unwrap();
        let x = FinSeq::new(Lattice::HalfLine, 0, q.clone()).unwrap();
        let wx = w.apply(&x).unwrap();
        for i in 0..119 {
            assert!((wx.get(i) - lambda * q[i as usize]).norm() < 1e-12);
        }
    }

    #[test]
    fn determinant_and_trace() {
        let m = TransferMatrix::new(0.3, Complex64::new(1.2, 0.5)).unwrap();
        assert!((m.det() - re(0.7 / 0.3)).norm() < 1e-12);
        let (a, b) = m.eigenvalues();
        assert!((a * b - m.det()).norm() < 1e-12);
        assert!((a + b - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn probe_examples() {
        let v = point_spectrum_probe(0.75, re(0.0), Space::C0).unwrap();
        assert_eq!(v.member, Membership::Yes);
        assert_eq!(v.case, RootCase::ConjugatePair);

        let v = point_spectrum_probe(0.5, re(0.5), Space::LInf).unwrap();
        assert_eq!(v.member, Membership::Yes);

        // roots of 0.75 z^2 - 1.1 z + 0.25: (1.1 +- sqrt(0.46)) / 1.5
        let v = point_spectrum_probe(0.75, re(1.1), Space::C0).unwrap();
        let big = (1.1 + 0.46f64.sqrt()) / 1.5;
        assert!((v.abs_alpha - big).abs() < 1e-12);
        assert_eq!(v.case, RootCase::Distinct);
        assert_eq!(v.member, Membership::No);
    }

    #[test]
    fn defective_branch() {
        let p: f64 = 0.8;
        let lambda = re(2.0 * (p * (1.0 - p)).sqrt());
        let v = point_spectrum_probe(p, lambda, Space::Lq(2.0)).unwrap();
        assert_eq!(v.case, RootCase::Defective);
        assert!((v.dominant_modulus - 0.5).abs() < 1e-12);
        assert_eq!(v.member, Membership::Yes);
        // at p = 1/2 the double root is 1 and q_n grows linearly
        let v = point_spectrum_probe(0.5, re(1.0), Space::LInf).unwrap();
        assert_eq!(v.case, RootCase::Defective);
        assert_ne!(v.member, Membership::Yes);
    }

    #[test]
    fn lambda_one_uses_active_root_only() {
        // q = constant 1: only the root z = 1 carries weight
        let v = point_spectrum_probe(0.3, re(1.0), Space::C0).unwrap();
        assert!((v.dominant_modulus - 1.0).abs() < 1e-12);
        assert_eq!(v.member, Membership::Undetermined);
    }

    #[test]
    fn disk_radius_estimate() {
        let r = certified_disk_radius(0.75, Space::C0, 40, 16).unwrap();
        assert!(r > 0.4 && r <= 1.0, "r = {r}");
        assert_eq!(certified_disk_radius(0.4, Space::C0, 10, 8).unwrap(), 0.0);
    }

    #[test]
    fn g_eigenvector_matches_weights() {
        let s: PSeq = "list:0.3,0.8,0.45;tail=0.7".parse().unwrap();
        let u = g_zero_eigenvector(&s, 30).unwrap();
        let w = weights(&s, 30);
        for n in 1..=30usize {
            assert!((u[n].abs() - w[n - 1]).abs() <= 1e-14 * w[n - 1]);
            let sign = if n.div_ceil(2) % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(u[n].signum(), sign);
        }
        let g = make_walk(Lattice::HalfLine, s).unwrap();
        let gu = g.apply(&FinSeq::half_line(&u)).unwrap();
        for i in 0..30 {
            assert!(gu.get(i).norm() < 1e-12);
        }
    }

    #[test]
    fn g_eigenvector_constant_cases() {
        let u = g_zero_eigenvector(&PSeq::constant(0.5).unwrap(), 20).unwrap();
        assert!(u.iter().all(|x| x.abs() == 1.0));
        let u = g_zero_eigenvector(&PSeq::constant(0.75).unwrap(), 40).unwrap();
        assert!(u[40].abs() < 1e-9);
    }

    #[test]
    fn dual_eigenvector_examples() {
        let u = dual_zero_eigenvector(&PSeq::constant(0.25).unwrap(), 20).unwrap();
        for n in 0..=10 {
            assert!((u[2 * n].abs() - (1.0f64 / 3.0).powi(n as i32)).abs() < 1e-15);
        }
        let u = dual_zero_eigenvector(&PSeq::constant(0.75).unwrap(), 20).unwrap();
        assert!((u[20].abs() - 3f64.powi(10)).abs() < 1e-6);
        let s: PSeq = "periodic:0.3,0.2,0.45".parse().unwrap();
        let u = dual_zero_eigenvector(&s, 40).unwrap();
        assert!(dual_residual(&s, &u).unwrap() < 1e-14);
    }

    #[test]
    fn symmetric_walk_is_self_transpose_inside() {
        let w = make_walk(Lattice::HalfLine, PSeq::constant(0.5).unwrap()).unwrap();
        for i in 1..20 {
            for j in 1..20 {
                assert_eq!(w.entry(i, j), w.entry(j, i));
            }
        }
    }

    #[test]
    fn dual_obstruction_verdicts() {
        let pol = ConvergencePolicy::default();
        let r = dual_obstruction(&PSeq::constant(0.25).unwrap(), Space::C0, 400, &pol).unwrap();
        assert_eq!(r.in_dual, Membership::Yes);
        assert!(r.not_hypercyclic);
        assert_eq!(r.series_outcome, SeriesOutcome::Converges);
        let r = dual_obstruction(&PSeq::constant(0.75).unwrap(), Space::C0, 400, &pol).unwrap();
        assert_eq!(r.in_dual, Membership::No);
        assert!(!r.not_hypercyclic);
        let r = dual_obstruction(&PSeq::constant(0.5).unwrap(), Space::Lq(1.0), 400, &pol).unwrap();
        assert_eq!(r.in_dual, Membership::Yes);
        assert!(dual_obstruction(&PSeq::constant(0.25).unwrap(), Space::LInf, 10, &pol).is_err());
    }

    #[test]
    fn symmetric_interval() {
        let rep = symmetric_dual_interval_check(&[0.0, 0.9, 1.5], 2000).unwrap();
        assert!(rep.rows[0].bounded);
        assert!(rep.rows[1].bounded);
        assert!(!rep.rows[2].bounded);
        assert!(rep.not_supercyclic_on_l1);
    }
}
