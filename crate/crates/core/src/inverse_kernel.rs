//! Right inverse of the half-line walk and bases of `Ker W^n`.
//!
//! With `u_0 = 0` the equation `W u = v` is solved row by row:
//!
//! ```text
//! u_1 = v_0 / p_0,    u_n = v_{n-1} / p_{n-1} + r_{n-1} u_{n-2},    r_k = (p_k - 1) / p_k.
//! ```
//!
//! Past the support of `v` each parity chain is multiplied by `r_k`, so the
//! tail is geometric once the p-sequence is periodic; the solution is cut
//! off as soon as a bound on everything that was dropped falls below the
//! truncation tolerance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::weight_decay_rate;
use crate::error::{Error, Result};
use crate::operators::BandedOp;
use crate::seqspace::{norm, FinSeq, Lattice, Space};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseOptions {
    /// Dropped tail must be below `trunc_rel * max(|v|)`.
    pub trunc_rel: f64,
    /// Hard cap on the number of coordinates past the support of `v`.
    pub cap: usize,
}

impl Default for InverseOptions {
    fn default() -> Self {
        InverseOptions {
            trunc_rel: 1e-16,
            cap: 200_000,
        }
    }
}

/// Output of [`RightInverse::solve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub u: FinSeq,
    /// Bound on the sup norm of the dropped tail (`inf` when the cap was hit).
    pub tail_bound: f64,
    pub capped: bool,
    /// `max(|u_{m-1}|, |u_m|)` at the last computed index `m`.
    pub last_magnitude: f64,
}

/// Geometric bound for one parity chain of the recurrence tail.
#[derive(Debug, Clone, Copy)]
struct ChainTail {
    steps: usize,
    growth: f64,
    rate: f64,
}

impl ChainTail {
    /// Multiplier of `sum_{j>=1} |u_{m+2j}|` relative to `|u_m|`.
    fn factor(&self) -> f64 {
        if self.rate < 1.0 {
            self.steps as f64 * self.growth / (1.0 - self.rate)
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RightInverse {
    op: BandedOp,
    opts: InverseOptions,
}

impl RightInverse {
    pub fn new(op: &BandedOp) -> Result<RightInverse> {
        RightInverse::with_options(op, InverseOptions::default())
    }

    pub fn with_options(op: &BandedOp, opts: InverseOptions) -> Result<RightInverse> {
        if op.lattice() != Lattice::HalfLine {
            return Err(Error::InvalidArgument("the right inverse is defined on the half-line only".into()));
        }
        Ok(RightInverse { op: op.clone(), opts })
    }

    pub fn op(&self) -> &BandedOp {
        &self.op
    }

    /// `r_n = (p_n - 1) / p_n`.
    pub fn r(&self, n: i64) -> f64 {
        let p = self.op.p(n);
        (p - 1.0) / p
    }

    /// Tail bounds for the chain whose multipliers are `r_k`, `k` of the given parity.
    fn chain_tail(&self, parity: i64) -> ChainTail {
        let pseq = self.op.pseq();
        let n0 = pseq.periodic_from();
        let l = pseq.period() as i64;
        let first = if n0.rem_euclid(2) == parity { n0 } else { n0 + 1 };
        let cycle: Vec<f64> = (0..l).map(|t| self.r(first + 2 * t).abs()).collect();
        let rate: f64 = cycle.iter().product();
        let mut growth = 1.0_f64;
        for phase in 0..cycle.len() {
            let mut acc = 1.0;
            for t in 0..cycle.len() {
                acc *= cycle[(phase + t) % cycle.len()];
                growth = growth.max(acc);
            }
        }
        ChainTail {
            steps: cycle.len(),
            growth,
            rate,
        }
    }

    /// Solves `W u = v` with `u_0 = 0`.
    pub fn solve(&self, v: &FinSeq) -> Result<Solution> {
        Lattice::HalfLine.ensure(v.lattice())?;
        let zero = Complex64::new(0.0, 0.0);
        if v.is_zero() {
            return Ok(Solution {
                u: FinSeq::zero(Lattice::HalfLine),
                tail_bound: 0.0,
                capped: false,
                last_magnitude: 0.0,
            });
        }
        let vmax = norm(v, Space::LInf);
        let tol = self.opts.trunc_rel * vmax;
        let settle = self.op.pseq().periodic_from().max(v.end()) + 2;
        let tails = [self.chain_tail(0), self.chain_tail(1)];
        let limit = settle as usize + self.opts.cap;

        let mut u: Vec<Complex64> = vec![zero];
        let mut n: i64 = 1;
        let mut capped = false;
        loop {
            let prev = if n >= 2 { u[(n - 2) as usize] } else { zero };
            let un = v.get(n - 1) / self.op.p(n - 1) + prev * self.r(n - 1);
            u.push(un);
            if n >= settle {
                // the chain through index n multiplies by r_k with k = n - 1 (mod 2)
                let a = un.norm() * tails[(n - 1).rem_euclid(2) as usize].factor();
                let b = u[(n - 1) as usize].norm() * tails[n.rem_euclid(2) as usize].factor();
                if a + b <= tol {
                    break;
                }
            }
            if u.len() >= limit {
                capped = true;
                break;
            }
            n += 1;
        }
        let m = u.len();
        let last_magnitude = u[m - 1].norm().max(u[m - 2].norm());
        let tail_bound = if capped {
            f64::INFINITY
        } else {
            u[m - 1].norm() * tails[(m as i64 - 2).rem_euclid(2) as usize].factor()
                + u[m - 2].norm() * tails[(m as i64 - 3).rem_euclid(2) as usize].factor()
        };
        Ok(Solution {
            u: FinSeq::new(Lattice::HalfLine, 0, u)?,
            tail_bound,
            capped,
            last_magnitude,
        })
    }

    /// `S^n v`.
    pub fn power(&self, v: &FinSeq, n: usize) -> Result<FinSeq> {
        let mut u = v.clone();
        for _ in 0..n {
            u = self.solve(&u)?.u;
        }
        Ok(u)
    }

    /// `1 / (2 p_min - 1)` when every `p_n > 1/2`: the norm bound of `S` on
    /// `c0` and every `l^q`.
    pub fn norm_bound(&self) -> Option<f64> {
        let pmin = self.op.pseq().min_value();
        (pmin > 0.5).then(|| 1.0 / (2.0 * pmin - 1.0))
    }

    /// Sup of the absolute row sums (`l^inf` operator norm) and of the
    /// absolute column sums (`l^1` operator norm) of `S`, over the first
    /// `window` rows and columns.
    pub fn measured_norms(&self, window: usize) -> OperatorNorms {
        let mut row_sup = 0.0_f64;
        let (mut a_prev, mut a_cur) = (0.0_f64, 1.0 / self.op.p(0));
        row_sup = row_sup.max(a_cur);
        for n in 2..=window as i64 {
            let next = 1.0 / self.op.p(n - 1) + self.r(n - 1).abs() * a_prev;
            a_prev = a_cur;
            a_cur = next;
            row_sup = row_sup.max(a_cur);
            if !row_sup.is_finite() {
                break;
            }
        }
        let mut col_sup = 0.0_f64;
        for j in 0..window as i64 {
            let mut term = 1.0 / self.op.p(j);
            let mut sum = term;
            let mut k = j + 2;
            while term > 1e-18 * sum && k < j + 2 + 4 * window as i64 {
                term *= self.r(k).abs();
                sum += term;
                if !sum.is_finite() {
                    break;
                }
                k += 2;
            }
            if term > 1e-18 * sum {
                sum = f64::INFINITY;
            }
            col_sup = col_sup.max(sum);
        }
        OperatorNorms { row_sup, col_sup }
    }

    /// Measured norm of `S` on `space`; Riesz-Thorin interpolation for `1 < q < inf`.
    pub fn measured_norm(&self, space: Space, window: usize) -> f64 {
        let m = self.measured_norms(window);
        match space {
            Space::Lq(1.0) => m.col_sup,
            Space::Lq(q) => m.col_sup.powf(1.0 / q) * m.row_sup.powf(1.0 - 1.0 / q),
            _ => m.row_sup,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorNorms {
    pub row_sup: f64,
    pub col_sup: f64,
}

/// `S v`, with `W S v = v`.
pub fn right_inverse(op: &BandedOp, v: &FinSeq) -> Result<FinSeq> {
    Ok(RightInverse::new(op)?.solve(v)?.u)
}

/// `S^n v`; coordinates `0..n` are exactly zero.
pub fn right_inverse_power(op: &BandedOp, v: &FinSeq, n: usize) -> Result<FinSeq> {
    RightInverse::new(op)?.power(v, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelOptions {
    /// Maximum number of coordinates per vector.
    pub window: usize,
    /// Stop once the last `2n` coordinates are below `trunc * max|V|`.
    pub trunc: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            window: 50_000,
            trunc: 1e-15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelBasis {
    pub n: usize,
    /// `V_{0,n}, ..., V_{n-1,n}` with `V_{i,n}(k) = delta_{ik}` for `k < n`.
    pub vectors: Vec<FinSeq>,
    /// Stored length of every vector.
    pub len: usize,
    /// False when the window filled up before the coordinates decayed.
    pub decayed: bool,
    /// `max_i ||W^n V_{i,n}||_inf`.
    pub residual: f64,
}

fn check_kernel_hypothesis(op: &BandedOp) -> Result<()> {
    if op.lattice() != Lattice::HalfLine {
        return Err(Error::InvalidArgument("kernel bases are built on the half-line".into()));
    }
    if let Some(p) = op.pseq().as_constant() {
        if p <= 0.5 {
            return Err(Error::Hypothesis(format!(
                "p = {p} <= 1/2: the walk has no decaying kernel vectors"
            )));
        }
    }
    let rate = weight_decay_rate(op.pseq());
    if !(rate < 1.0 - 1e-12) {
        return Err(Error::Hypothesis(format!(
            "weights w_n do not decay geometrically (rate {rate})"
        )));
    }
    Ok(())
}

/// Basis of `Ker W^n`: the first `n` coordinates are free, every later one is
/// solved from a row of `W^n` using its last nonzero entry `W^n_{j, j+n}`.
pub fn kernel_basis(op: &BandedOp, n: usize, opts: &KernelOptions) -> Result<KernelBasis> {
    check_kernel_hypothesis(op)?;
    if n == 0 {
        return Err(Error::InvalidArgument("kernel order must be at least 1".into()));
    }
    if opts.window < n + 1 {
        return Err(Error::InvalidArgument(format!("window must exceed n = {n}")));
    }
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut vmax = vec![1.0_f64; n];
    let mut decayed = false;
    let mut j: i64 = 0;
    while (j as usize) + n < opts.window {
        let row = op.power_row(n, j)?;
        let target = j + n as i64;
        let pivot = row.get(target).re;
        for (vi, mx) in v.iter_mut().zip(vmax.iter_mut()) {
            let lo = row.offset().max(0);
            let s: f64 = (lo..target).map(|k| row.get(k).re * vi[k as usize]).sum();
            let val = -s / pivot;
            *mx = mx.max(val.abs());
            vi.push(val);
        }
        j += 1;
        let len = v[0].len();
        if len >= 3 * n {
            let small = v
                .iter()
                .zip(&vmax)
                .all(|(vi, mx)| vi[len - 2 * n..].iter().all(|x| x.abs() < opts.trunc * mx));
            if small {
                decayed = true;
                break;
            }
        }
    }
    let vectors: Vec<FinSeq> = v.iter().map(|vi| FinSeq::half_line(vi)).collect();
    let mut residual = 0.0_f64;
    for x in &vectors {
        residual = residual.max(norm(&op.power_apply(n, x)?, Space::LInf));
    }
    Ok(KernelBasis {
        n,
        len: v[0].len(),
        vectors,
        decayed,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseApprox {
    pub n: usize,
    pub approx: FinSeq,
    /// `||approx - x||` in the requested space.
    pub error: f64,
}

/// Approximates `x`, supported in `[0, n)`, by `sum_i x_i V_{i,n}` in `Ker W^n`.
pub fn dense_approx(x: &FinSeq, op: &BandedOp, space: Space, opts: &KernelOptions) -> Result<DenseApprox> {
    check_kernel_hypothesis(op)?;
    Lattice::HalfLine.ensure(x.lattice())?;
    let x = x.trimmed();
    if x.is_empty() {
        return Ok(DenseApprox {
            n: 0,
            approx: FinSeq::zero(Lattice::HalfLine),
            error: 0.0,
        });
    }
    let n = x.end() as usize;
    let basis = kernel_basis(op, n, opts)?;
    let mut approx = FinSeq::zero(Lattice::HalfLine);
    for (i, vi) in basis.vectors.iter().enumerate() {
        approx = approx.combine(Complex64::new(1.0, 0.0), vi, x.get(i as i64))?;
    }
    let error = norm(&approx.sub(&x)?, space);
    Ok(DenseApprox { n, approx, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{make_walk, PSeq};

    fn half(p: f64) -> BandedOp {
        make_walk(Lattice::HalfLine, PSeq::constant(p).unwrap()).unwrap()
    }

    fn e(i: i64) -> FinSeq {
        FinSeq::unit(Lattice::HalfLine, i).unwrap()
    }

    #[test]
    fn inverse_of_e0_at_three_quarters() {
        let w = half(0.75);
        let u = right_inverse(&w, &e(0)).unwrap();
        assert_eq!(u.get(0).re, 0.0);
        for j in 0..8 {
            let odd = u.get(2 * j + 1).re;
            let expected = (4.0 / 3.0) * (-1.0f64 / 3.0).powi(j as i32);
            assert!((odd - expected).abs() < 1e-15);
            assert_eq!(u.get(2 * j + 2).re, 0.0);
        }
        let back = w.apply(&u).unwrap();
        assert!(back.max_abs_diff(&e(0)).unwrap() < 1e-15);
    }

    #[test]
    fn inverse_inhomogeneous() {
        let g = make_walk(Lattice::HalfLine, PSeq::list(vec![0.5], 0.75).unwrap()).unwrap();
        let u = right_inverse(&g, &e(0)).unwrap();
        assert_eq!(u.get(1).re, 2.0);
        assert_eq!(u.get(2).re, 0.0);
        assert!((u.get(3).re + 2.0 / 3.0).abs() < 1e-15);
        assert!(g.apply(&u).unwrap().max_abs_diff(&e(0)).unwrap() < 1e-15);
    }

    #[test]
    fn inverse_of_zero() {
        let u = right_inverse(&half(0.8), &FinSeq::zero(Lattice::HalfLine)).unwrap();
        assert!(u.is_empty());
    }

    #[test]
    fn inverse_rejects_line() {
        let wl = make_walk(Lattice::Line, PSeq::constant(0.8).unwrap()).unwrap();
        assert!(RightInverse::new(&wl).is_err());
    }

    #[test]
    fn inverse_caps_when_tail_grows() {
        let opts = InverseOptions {
            cap: 100,
            ..InverseOptions::default()
        };
        let s = RightInverse::with_options(&half(0.4), opts).unwrap().solve(&e(0)).unwrap();
        assert!(s.capped);
        assert!(s.tail_bound.is_infinite());
        assert!(s.last_magnitude > 1.0);
    }

    #[test]
    fn closed_form_agrees_with_recurrence() {
        // u_n = (1/p) sum_{j=0}^{floor((n-1)/2)} gamma^j v_{n-2j-1}, with u_0 = 0
        let p = 0.7;
        let gamma = (p - 1.0) / p;
        let v = FinSeq::half_line(&[0.3, -1.0, 0.25, 2.0, 0.0, -0.7]);
        let u = right_inverse(&half(p), &v).unwrap();
        for n in 1..40i64 {
            let mut s = 0.0;
            let mut j = 0;
            while n - 2 * j - 1 >= 0 {
                s += gamma.powi(j as i32) * v.get(n - 2 * j - 1).re;
                j += 1;
            }
            assert!((u.get(n).re - s / p).abs() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn power_has_leading_zeros_and_bound() {
        let w = half(0.75);
        let s2 = right_inverse_power(&w, &e(0), 2).unwrap();
        assert_eq!(s2.get(0).re, 0.0);
        assert_eq!(s2.get(1).re, 0.0);
        assert!(norm(&s2, Space::LInf) <= 4.0);
        assert_eq!(right_inverse_power(&w, &e(0), 1).unwrap(), right_inverse(&w, &e(0)).unwrap());
    }

    #[test]
    fn measured_norms_constant() {
        let s = RightInverse::new(&half(0.75)).unwrap();
        let m = s.measured_norms(200);
        assert!((m.row_sup - 2.0).abs() < 1e-12);
        assert!((m.col_sup - 2.0).abs() < 1e-12);
        assert_eq!(s.norm_bound(), Some(2.0));
        assert!(RightInverse::new(&half(0.5)).unwrap().norm_bound().is_none());
    }

    #[test]
    fn kernel_n1_three_quarters() {
        let kb = kernel_basis(&half(0.75), 1, &KernelOptions::default()).unwrap();
        let v = &kb.vectors[0];
        let expected = [1.0, -1.0 / 3.0, -1.0 / 3.0, 1.0 / 9.0, 1.0 / 9.0, -1.0 / 27.0];
        for (k, x) in expected.iter().enumerate() {
            assert!((v.get(k as i64).re - x).abs() < 1e-15);
        }
        assert!(kb.decayed);
        assert!(kb.residual < 1e-10);
    }

    #[test]
    fn kernel_tends_to_e0_as_p_to_one() {
        let kb = kernel_basis(&half(0.999), 1, &KernelOptions::default()).unwrap();
        let d = kb.vectors[0].max_abs_diff(&e(0)).unwrap();
        assert!(d < 2e-3);
    }

    #[test]
    fn kernel_n2() {
        let w = half(0.75);
        let kb = kernel_basis(&w, 2, &KernelOptions::default()).unwrap();
        assert_eq!(kb.vectors.len(), 2);
        for (i, v) in kb.vectors.iter().enumerate() {
            for k in 0..2 {
                assert_eq!(v.get(k).re, if k as usize == i { 1.0 } else { 0.0 });
            }
            assert!(norm(&w.power_apply(2, v).unwrap(), Space::LInf) < 1e-8);
        }
    }

    #[test]
    fn kernel_rejects_recurrent_walks() {
        for p in [0.3, 0.5] {
            assert!(matches!(
                kernel_basis(&half(p), 1, &KernelOptions::default()),
                Err(Error::Hypothesis(_))
            ));
        }
    }

    #[test]
    fn dense_approx_examples() {
        let opts = KernelOptions::default();
        let w = half(0.75);
        let d = dense_approx(&e(0), &w, Space::LInf, &opts).unwrap();
        assert_eq!(d.n, 1);
        assert!((d.error - 1.0 / 3.0).abs() < 1e-14);
        let z = dense_approx(&FinSeq::zero(Lattice::HalfLine), &w, Space::C0, &opts).unwrap();
        assert_eq!(z.error, 0.0);
        let x = FinSeq::half_line(&[0.4, -1.2]);
        let lo = dense_approx(&x, &w, Space::Lq(2.0), &opts).unwrap();
        let hi = dense_approx(&x, &half(0.95), Space::Lq(2.0), &opts).unwrap();
        assert!(hi.error < lo.error);
        assert!(norm(&w.power_apply(2, &lo.approx).unwrap(), Space::LInf) < 1e-8);
    }
}
