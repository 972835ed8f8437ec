//! Numerical certificates for the dynamical properties of the walks.
//!
//! A certificate checks the hypotheses of a criterion on finite data. `Yes`
//! means every checked inequality passed; it is never a proof that the
//! operator is hypercyclic, supercyclic or chaotic. Witness traces are kept
//! whatever the verdict.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_on, weight_decay_rate, ConvergencePolicy, Recurrence};
use crate::error::{Error, Result};
use crate::inverse_kernel::{kernel_basis, KernelOptions, RightInverse};
use crate::operators::{make_walk, BandedOp, PSeq};
use crate::seqspace::{norm, FinSeq, Lattice, Space, Tolerance};

/// `||W^m x||` below this counts as a kernel vector of `W^m`.
pub const KERNEL_RESIDUAL: f64 = 1e-8;
/// Relative slack in `||W^n S^n y - y|| <= slack * ||y||`.
pub const INVERSE_RESIDUAL: f64 = 1e-8;
/// Relative slack of the line lower bound.
pub const LINE_BOUND_REL: f64 = 1e-10;
/// Kernel orders sampled for the dense set.
const KERNEL_ORDERS: [usize; 3] = [1, 2, 3];
const NORM_WINDOW: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    SupercyclicityCriterion,
    FhcChaos,
    NotHypercyclicLowerBound,
    NotSupercyclicObstruction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Holds {
    Yes,
    No,
    Undetermined,
}

/// One inequality `value <= bound`, or `value >= bound` for lower bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: Property,
    pub holds: Holds,
    pub pseq: String,
    pub lambda: Option<Complex64>,
    pub space: Space,
    /// Guaranteed geometric ratio, when the criterion uses one.
    pub ratio: Option<f64>,
    pub checks: Vec<Check>,
    pub traces: BTreeMap<String, Vec<f64>>,
    pub reason: Option<String>,
}

impl Certificate {
    fn new(property: Property, op: &BandedOp, lambda: Option<Complex64>, space: Space) -> Certificate {
        Certificate {
            property,
            holds: Holds::Undetermined,
            pseq: op.pseq().to_string(),
            lambda,
            space,
            ratio: None,
            checks: Vec::new(),
            traces: BTreeMap::new(),
            reason: None,
        }
    }

    fn check(&mut self, name: &str, value: f64, bound: f64, passed: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            value,
            bound,
            passed,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Kernel vectors of `W^m` for the sampled orders, or the reason they are unavailable.
fn kernel_samples(op: &BandedOp) -> Result<std::result::Result<Vec<(usize, FinSeq)>, String>> {
    let opts = KernelOptions::default();
    let mut out = Vec::new();
    for m in KERNEL_ORDERS {
        match kernel_basis(op, m, &opts) {
            Ok(b) => out.extend(b.vectors.into_iter().map(|v| (m, v))),
            Err(Error::Hypothesis(why)) => return Ok(Err(why)),
            Err(e) => return Err(e),
        }
    }
    Ok(Ok(out))
}

fn check_half_line(op: &BandedOp) -> Result<()> {
    if op.lattice() != Lattice::HalfLine {
        return Err(Error::InvalidArgument("certificates are built for walks on Z+".into()));
    }
    Ok(())
}

fn check_separable(space: Space) -> Result<Space> {
    let space = space.validated()?;
    if space == Space::LInf {
        return Err(Error::InvalidSpace("l^inf is not separable; use c0 or l^q".into()));
    }
    Ok(space)
}

/// Hypotheses of the frequent hypercyclicity and chaos criterion for `lambda W`
/// with the map `lambda^{-1} S` on the span of the kernel vectors:
/// the orbit of every sample under `lambda W` is eventually zero,
/// `W S x = x`, and `||(lambda^{-1} S)^n x|| <= rho^n ||x||` with `rho < 1`.
pub fn fhc_chaos_certificate(
    op: &BandedOp,
    lambda: Complex64,
    space: Space,
    n_max: usize,
    tol: &Tolerance,
) -> Result<Certificate> {
    check_half_line(op)?;
    let space = check_separable(space)?;
    if lambda.norm() == 0.0 {
        return Err(Error::InvalidArgument("lambda must be nonzero".into()));
    }
    let mut cert = Certificate::new(Property::FhcChaos, op, Some(lambda), space);
    let samples = match kernel_samples(op)? {
        Ok(s) => s,
        Err(why) => {
            cert.reason = Some(format!("kernel basis unavailable: {why}"));
            return Ok(cert);
        }
    };
    let s = RightInverse::new(op)?;
    let rho = s.measured_norm(space, NORM_WINDOW) / lambda.norm();
    cert.ratio = Some(rho);

    let mut kernel_res = 0.0_f64;
    let mut inverse_res = 0.0_f64;
    let mut excess = 0.0_f64;
    let mut decay = vec![0.0_f64; n_max + 1];
    let inv = 1.0 / lambda;
    for (m, x) in &samples {
        kernel_res = kernel_res.max(norm(&op.power_apply(*m, x)?, space));
        let nx = norm(x, space);
        let sx = s.solve(x)?.u;
        inverse_res = inverse_res.max(norm(&op.apply(&sx)?.sub(x)?, Space::LInf) / norm(x, Space::LInf));
        let mut y = x.clone();
        for (n, slot) in decay.iter_mut().enumerate() {
            if n > 0 {
                y = s.solve(&y)?.u.scale(inv);
            }
            let ratio = norm(&y, space) / nx;
            *slot = slot.max(ratio);
            if rho.is_finite() {
                excess = excess.max(ratio - rho.powi(n as i32) * (1.0 + tol.rel) - tol.abs);
            }
        }
    }
    cert.check("max ||W^m x||, x in Ker W^m", kernel_res, KERNEL_RESIDUAL, kernel_res < KERNEL_RESIDUAL);
    cert.check(
        "max ||W S x - x|| / ||x||",
        inverse_res,
        INVERSE_RESIDUAL,
        inverse_res < INVERSE_RESIDUAL,
    );
    cert.check(
        "max_n ||(S/lambda)^n x|| / ||x|| - rho^n",
        excess,
        0.0,
        rho.is_finite() && excess <= 0.0,
    );
    cert.check("rho = ||S|| / |lambda|", rho, 1.0, rho < 1.0 - tol.abs);
    cert.traces.insert("decay_ratio".into(), decay);

    cert.holds = if cert.all_passed() {
        Holds::Yes
    } else {
        cert.reason = Some(if rho >= 1.0 - tol.abs {
            format!("guaranteed ratio {rho} is not below 1; no verdict on frequent hypercyclicity from this criterion")
        } else {
            "a checked inequality failed".to_string()
        });
        Holds::No
    };
    Ok(cert)
}

/// Supercyclicity criterion with `S_n = S^n` on the span of the kernel
/// vectors: `W^n x` vanishes for large `n` and `W^n S^n y = y`.
pub fn supercyclicity_criterion_certificate(op: &BandedOp, space: Space, n_max: usize) -> Result<Certificate> {
    check_half_line(op)?;
    let space = check_separable(space)?;
    let mut cert = Certificate::new(Property::SupercyclicityCriterion, op, None, space);
    if space == Space::C {
        cert.reason = Some("kernel vectors are not dense in c; see the c-space obstruction".into());
        return Ok(cert);
    }
    let rate = weight_decay_rate(op.pseq());
    cert.check("limsup w_n^(1/n)", rate, 1.0, rate < 1.0 - 1e-12);
    if rate >= 1.0 - 1e-12 {
        cert.reason = Some(format!("weights w_n do not decay (rate {rate}); kernel of W is trivial in {space}"));
        return Ok(cert);
    }
    let samples = match kernel_samples(op)? {
        Ok(s) => s,
        Err(why) => {
            cert.reason = Some(format!("kernel basis unavailable: {why}"));
            return Ok(cert);
        }
    };
    let s = RightInverse::new(op)?;

    let mut vanish = 0.0_f64;
    let mut product = Vec::with_capacity(n_max + 1);
    let mut worst_inverse = 0.0_f64;
    for (k, (m, x)) in samples.iter().enumerate() {
        let mut wx = x.clone();
        let mut sy = x.clone();
        for n in 0..=n_max {
            if n > 0 {
                wx = op.apply(&wx)?;
                sy = s.solve(&sy)?.u;
            }
            if n >= *m {
                vanish = vanish.max(norm(&wx, space));
            }
            if k == 0 {
                product.push(norm(&wx, space) * norm(&sy, space));
            }
            let back = op.power_apply(n, &sy)?;
            worst_inverse = worst_inverse.max(norm(&back.sub(x)?, Space::LInf) / norm(x, Space::LInf));
        }
    }
    cert.check("max_{n >= m} ||W^n x||", vanish, KERNEL_RESIDUAL, vanish < KERNEL_RESIDUAL);
    cert.check(
        "max_n ||W^n S^n y - y|| / ||y||",
        worst_inverse,
        INVERSE_RESIDUAL,
        worst_inverse < INVERSE_RESIDUAL,
    );
    cert.traces.insert("norm_product".into(), product);
    cert.holds = if cert.all_passed() { Holds::Yes } else { Holds::No };
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub pseq: String,
    pub lattice: Lattice,
    pub classification: Option<Recurrence>,
    /// Transient or null recurrent, as the obstruction needs.
    pub precondition_met: bool,
    pub alpha: Complex64,
    pub i_probe: i64,
    pub norm_y: f64,
    /// `(A^n y)_i` for `n = 0..=n_max`.
    pub values: Vec<Complex64>,
    pub sup_norms: Vec<f64>,
    /// `|(A^n y)_i| / ||A^n y||_inf`.
    pub ratios: Vec<f64>,
    /// `|alpha| / ||y||_inf`.
    pub ratio_bound: f64,
    pub bound_holds_everywhere: bool,
    pub final_distance_to_alpha: f64,
}

fn sup_with_tail(alpha: Complex64, z: &FinSeq) -> f64 {
    z.iter()
        .map(|(_, v)| (alpha + v).norm())
        .fold(alpha.norm(), f64::max)
}

/// Orbit of `y = alpha * 1 + z` with `z` finitely supported. Row sums are
/// one, so `A^n y = alpha * 1 + A^n z` exactly.
pub fn c_space_obstruction(
    op: &BandedOp,
    alpha: Complex64,
    perturbation: &FinSeq,
    i_probe: i64,
    n_max: usize,
) -> Result<ObstructionReport> {
    op.lattice().ensure(perturbation.lattice())?;
    if op.lattice() == Lattice::HalfLine && i_probe < 0 {
        return Err(Error::NegativeIndex(i_probe));
    }
    let classification = classify_on(op.lattice(), op.pseq(), 10_000, &ConvergencePolicy::default())
        .ok()
        .map(|v| v.verdict);
    let precondition_met = matches!(
        classification,
        Some(Recurrence::Transient) | Some(Recurrence::NullRecurrent)
    );
    let norm_y = sup_with_tail(alpha, perturbation);
    let ratio_bound = if norm_y > 0.0 { alpha.norm() / norm_y } else { 0.0 };
    let mut z = perturbation.clone();
    let mut values = Vec::with_capacity(n_max + 1);
    let mut sup_norms = Vec::with_capacity(n_max + 1);
    let mut ratios = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            z = op.apply(&z)?;
        }
        let v = alpha + z.get(i_probe);
        let s = sup_with_tail(alpha, &z);
        values.push(v);
        sup_norms.push(s);
        ratios.push(if s > 0.0 { v.norm() / s } else { 0.0 });
    }
    let bound_holds_everywhere = ratios.iter().all(|&r| r >= ratio_bound * (1.0 - 1e-12));
    let final_distance_to_alpha = (values[n_max] - alpha).norm();
    Ok(ObstructionReport {
        pseq: op.pseq().to_string(),
        lattice: op.lattice(),
        classification,
        precondition_met,
        alpha,
        i_probe,
        norm_y,
        values,
        sup_norms,
        ratios,
        ratio_bound,
        bound_holds_everywhere,
        final_distance_to_alpha,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineBoundReport {
    pub p: f64,
    pub n: usize,
    pub space: Space,
    pub norm_x: f64,
    pub norm_image: f64,
    /// `|1 - 2p|^n ||x||`.
    pub bound: f64,
    pub slack: f64,
    pub holds: bool,
    /// `lambda W` is not hypercyclic for `|lambda| >= 1 / |1 - 2p|`.
    pub threshold: f64,
}

/// Checks `||W^n x|| >= |1 - 2p|^n ||x||` for the walk on `Z`.
pub fn line_walk_lower_bound(op: &BandedOp, x: &FinSeq, n: usize, space: Space) -> Result<LineBoundReport> {
    Lattice::Line.ensure(op.lattice())?;
    let space = space.validated()?;
    let p = op
        .pseq()
        .as_constant()
        .ok_or_else(|| Error::InvalidArgument("the line bound needs a constant p".into()))?;
    if p == 0.5 {
        return Err(Error::InvalidArgument("p = 1/2 makes the lower bound vacuous".into()));
    }
    let c = (1.0 - 2.0 * p).abs();
    let norm_x = norm(x, space);
    let norm_image = norm(&op.power_apply(n, x)?, space);
    let bound = c.powi(n as i32) * norm_x;
    Ok(LineBoundReport {
        p,
        n,
        space,
        norm_x,
        norm_image,
        bound,
        slack: norm_image - bound,
        holds: norm_image >= bound * (1.0 - LINE_BOUND_REL),
        threshold: 1.0 / c,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub pseq: String,
    pub space: Space,
    pub n_max: usize,
    pub projective: bool,
    /// Per target: smallest distance over `n <= n_max` and the first `n` attaining it.
    pub minima: Vec<f64>,
    pub argmin: Vec<usize>,
    /// Per target: the distance at every `n`.
    pub distances: Vec<Vec<f64>>,
    pub note: String,
}

fn inner(y: &FinSeq, t: &FinSeq) -> Complex64 {
    t.iter().map(|(k, tk)| y.get(k) * tk.conj()).sum()
}

/// `y / ||y||` rotated so that it pairs with `t` to a nonnegative real.
/// Invariant under `y -> c y` for every nonzero complex `c`.
fn projective_normal(y: &FinSeq, t: &FinSeq, space: Space) -> Result<FinSeq> {
    let ny = norm(y, space);
    let ip = inner(y, t);
    let phase = if ip.norm() > 0.0 {
        ip / ip.norm()
    } else {
        let (_, first_max) = y
            .iter()
            .fold((0.0_f64, Complex64::new(1.0, 0.0)), |(m, z), (_, v)| {
                if v.norm() > m {
                    (v.norm(), v / v.norm())
                } else {
                    (m, z)
                }
            });
        first_max
    };
    Ok(y.scale(phase.conj() / ny))
}

/// Distance from the orbit `W^n x`, `n <= n_max`, to each target; in
/// projective mode both sides are normalized first. Small minima are
/// evidence of density, never proof.
pub fn orbit_density_probe(
    op: &BandedOp,
    x: &FinSeq,
    targets: &[FinSeq],
    space: Space,
    n_max: usize,
    projective: bool,
) -> Result<OrbitReport> {
    let space = space.validated()?;
    op.lattice().ensure(x.lattice())?;
    let targets: Vec<FinSeq> = targets
        .iter()
        .map(|t| {
            op.lattice().ensure(t.lattice())?;
            let nt = norm(t, space);
            Ok(if projective && nt > 0.0 { t.scale_re(1.0 / nt) } else { t.clone() })
        })
        .collect::<Result<_>>()?;
    let mut distances = vec![Vec::with_capacity(n_max + 1); targets.len()];
    let mut y = x.clone();
    for n in 0..=n_max {
        if n > 0 {
            y = op.apply(&y)?;
        }
        for (t, d) in targets.iter().zip(distances.iter_mut()) {
            let dist = if projective {
                if y.is_zero() {
                    norm(t, space)
                } else {
                    norm(&projective_normal(&y, t, space)?.sub(t)?, space)
                }
            } else {
                norm(&y.sub(t)?, space)
            };
            d.push(dist);
        }
    }
    let mut minima = Vec::with_capacity(targets.len());
    let mut argmin = Vec::with_capacity(targets.len());
    for d in &distances {
        let (k, m) = d
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |(bk, bm), (k, &v)| if v < bm { (k, v) } else { (bk, bm) });
        minima.push(m);
        argmin.push(k);
    }
    Ok(OrbitReport {
        pseq: op.pseq().to_string(),
        space,
        n_max,
        projective,
        minima,
        argmin,
        distances,
        note: "probe only: small minima are evidence, not proof of density".into(),
    })
}

/// Times `n >= 1` at which `distances[n] < eps`.
pub fn hit_times(distances: &[f64], eps: f64) -> Vec<usize> {
    distances
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &d)| d < eps)
        .map(|(n, _)| n)
        .collect()
}

/// Proxy for `liminf card(hits in [1, n]) / n`: the minimum of that ratio
/// over the trailing window `n` in `[ceil(N/2), N]`.
pub fn lower_density_estimate(hit_times: &[usize], horizon: usize) -> Result<f64> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    if hit_times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("hit times must be strictly increasing".into()));
    }
    if hit_times.last().is_some_and(|&h| h > horizon) {
        return Err(Error::InvalidArgument("hit times must not exceed the horizon".into()));
    }
    let lo = horizon.div_ceil(2).max(1);
    let mut count = hit_times.iter().filter(|&&h| h >= 1 && h < lo).count();
    let mut idx = hit_times.partition_point(|&h| h < lo);
    let mut best = f64::INFINITY;
    for n in lo..=horizon {
        while idx < hit_times.len() && hit_times[idx] == n {
            count += 1;
            idx += 1;
        }
        best = best.min(count as f64 / n as f64);
    }
    Ok(best)
}

/// Preset probes for questions left open; they report orbit data and assert nothing.
pub const SCENARIOS: [&str; 3] = ["symmetric-c0", "symmetric-l2", "transient-l2"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub question: String,
    pub orbit: OrbitReport,
}

pub fn run_scenario(name: &str, n_max: usize) -> Result<ScenarioReport> {
    let (p, space, question) = match name {
        "symmetric-c0" => (0.5, Space::C0, "is W_1/2 on c0 not supercyclic?"),
        "symmetric-l2" => (0.5, Space::Lq(2.0), "is W_1/2 on l^2 not supercyclic?"),
        "transient-l2" => (
            0.7,
            Space::Lq(2.0),
            "is there a transient Markov operator that is not supercyclic?",
        ),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown scenario {name:?}; expected one of {SCENARIOS:?}"
            )))
        }
    };
    let op = make_walk(Lattice::HalfLine, PSeq::constant(p)?)?;
    let x = FinSeq::half_line(&[1.0, -0.5, 0.25]);
    let targets = vec![
        FinSeq::unit(Lattice::HalfLine, 0)?,
        FinSeq::half_line(&[1.0, -1.0]),
        FinSeq::half_line(&[0.0, 1.0, 0.0, -1.0]),
    ];
    Ok(ScenarioReport {
        name: name.to_string(),
        question: question.to_string(),
        orbit: orbit_density_probe(&op, &x, &targets, space, n_max, true)?,
    })
}
