//! Banded stochastic operators of nearest-neighbour walks on `Z+` and `Z`.
//!
//! All operators have band radius one. On the half-line row 0 is the
//! partially reflecting boundary `(1 - p_0, p_0)`; every other row `i` has
//! `1 - p_i` at column `i - 1` and `p_i` at column `i + 1`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqspace::{FinSeq, Lattice};

/// Jump-probability sequence `(p_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum PSeq {
    Constant {
        p: f64,
    },
    /// `values[k]` sits at index `start + k`; every other index uses `tail`.
    /// `start` must be given explicitly on the line.
    ListWithTail {
        values: Vec<f64>,
        tail: f64,
        start: Option<i64>,
    },
    /// `p_n = values[n mod L]`, also for negative `n`.
    Periodic {
        values: Vec<f64>,
    },
}

fn check_prob(p: f64) -> Result<f64> {
    if p > 0.0 && p < 1.0 {
        Ok(p)
    } else {
        Err(Error::InvalidProbability(p))
    }
}

impl PSeq {
    pub fn constant(p: f64) -> Result<PSeq> {
        check_prob(p)?;
        Ok(PSeq::Constant { p })
    }

    pub fn list(values: Vec<f64>, tail: f64) -> Result<PSeq> {
        let s = PSeq::ListWithTail {
            values,
            tail,
            start: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn list_at(values: Vec<f64>, tail: f64, start: i64) -> Result<PSeq> {
        let s = PSeq::ListWithTail {
            values,
            tail,
            start: Some(start),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn periodic(values: Vec<f64>) -> Result<PSeq> {
        let s = PSeq::Periodic { values };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PSeq::Constant { p } => check_prob(*p).map(|_| ()),
            PSeq::ListWithTail { values, tail, .. } => {
                check_prob(*tail)?;
                values.iter().try_for_each(|&p| check_prob(p).map(|_| ()))
            }
            PSeq::Periodic { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidArgument("periodic sequence needs at least one value".into()));
                }
                values.iter().try_for_each(|&p| check_prob(p).map(|_| ()))
            }
        }
    }

    /// `p_n`, total on `Z`.
    pub fn at(&self, n: i64) -> f64 {
        match self {
            PSeq::Constant { p } => *p,
            PSeq::ListWithTail { values, tail, start } => {
                let k = n - start.unwrap_or(0);
                if k >= 0 && (k as usize) < values.len() {
                    values[k as usize]
                } else {
                    *tail
                }
            }
            PSeq::Periodic { values } => values[n.rem_euclid(values.len() as i64) as usize],
        }
    }

    /// The common value when the sequence is constant.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            PSeq::Constant { p } => Some(*p),
            PSeq::ListWithTail { values, tail, .. } => values.iter().all(|v| v == tail).then_some(*tail),
            PSeq::Periodic { values } => values.iter().all(|v| *v == values[0]).then_some(values[0]),
        }
    }

    /// Every value the sequence takes.
    pub fn values(&self) -> Vec<f64> {
        match self {
            PSeq::Constant { p } => vec![*p],
            PSeq::ListWithTail { values, tail, .. } => {
                let mut v = values.clone();
                v.push(*tail);
                v
            }
            PSeq::Periodic { values } => values.clone(),
        }
    }

    pub fn min_value(&self) -> f64 {
        self.values().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Smallest `n0 >= 0` beyond which the half-line sequence is purely
    /// periodic with period [`PSeq::period`].
    pub fn periodic_from(&self) -> i64 {
        match self {
            PSeq::ListWithTail { values, start, .. } => (start.unwrap_or(0) + values.len() as i64).max(0),
            _ => 0,
        }
    }

    /// Period of the tail (1 for constant tails).
    pub fn period(&self) -> usize {
        match self {
            PSeq::Periodic { values } => values.len(),
            _ => 1,
        }
    }

    /// The values of one full period of the tail, starting at [`PSeq::periodic_from`].
    pub fn tail_period(&self) -> Vec<f64> {
        let n0 = self.periodic_from();
        (0..self.period() as i64).map(|k| self.at(n0 + k)).collect()
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad probability `{t}`")))
        })
        .collect()
}

impl FromStr for PSeq {
    type Err = Error;

    /// Accepts `const:0.75`, `list:0.5,0.6;tail=0.75[;start=-2]` and `periodic:0.6,0.4`.
    fn from_str(s: &str) -> Result<PSeq> {
        let (form, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("p-sequence `{s}` lacks a `form:` prefix")))?;
        match form.trim() {
            "const" | "constant" => {
                let p = body
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad probability `{body}`")))?;
                PSeq::constant(p)
            }
            "periodic" => PSeq::periodic(parse_list(body)?),
            "list" => {
                let mut parts = body.split(';');
                let values = parse_list(parts.next().unwrap_or(""))?;
                let mut tail = None;
                let mut start = None;
                for part in parts {
                    let (k, v) = part
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("expected key=value, got `{part}`")))?;
                    match k.trim() {
                        "tail" => {
                            tail = Some(v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad tail `{v}`")))?)
                        }
                        "start" => {
                            start = Some(v.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad start `{v}`")))?)
                        }
                        other => return Err(Error::Parse(format!("unknown list option `{other}`"))),
                    }
                }
                let tail = tail.ok_or_else(|| Error::Parse("list p-sequence needs `;tail=`".into()))?;
                let seq = PSeq::ListWithTail { values, tail, start };
                seq.validate()?;
                Ok(seq)
            }
            other => Err(Error::Parse(format!("unknown p-sequence form `{other}`"))),
        }
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for PSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PSeq::Constant { p } => write!(f, "const:{p}"),
            PSeq::Periodic { values } => write!(f, "periodic:{}", join(values)),
            PSeq::ListWithTail { values, tail, start } => {
                write!(f, "list:{};tail={tail}", join(values))?;
                if let Some(s) = start {
                    write!(f, ";start={s}")?;
                }
                Ok(())
            }
        }
    }
}

/// Which of the four walk operators an operator is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WalkKind {
    /// Homogeneous walk on `Z+` with partial reflection.
    Wp,
    /// Homogeneous walk on `Z`.
    WpLine,
    /// Inhomogeneous birth-death walk on `Z+`.
    G,
    /// Inhomogeneous walk on `Z`.
    GLine,
}

/// Tridiagonal row-stochastic operator, entries evaluated lazily.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandedOp {
    lattice: Lattice,
    pseq: PSeq,
}

/// Builds the transition operator of the walk driven by `pseq`.
pub fn make_walk(lattice: Lattice, pseq: PSeq) -> Result<BandedOp> {
    pseq.validate()?;
    if lattice == Lattice::Line {
        if let PSeq::ListWithTail { start: None, .. } = pseq {
            return Err(Error::InvalidArgument(
                "list p-sequences on the line need an explicit `start`".into(),
            ));
        }
    }
    Ok(BandedOp { lattice, pseq })
}

impl BandedOp {
    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn pseq(&self) -> &PSeq {
        &self.pseq
    }

    pub fn p(&self, n: i64) -> f64 {
        self.pseq.at(n)
    }

    pub fn kind(&self) -> WalkKind {
        match (self.lattice, self.pseq.as_constant().is_some()) {
            (Lattice::HalfLine, true) => WalkKind::Wp,
            (Lattice::HalfLine, false) => WalkKind::G,
            (Lattice::Line, true) => WalkKind::WpLine,
            (Lattice::Line, false) => WalkKind::GLine,
        }
    }

    fn on_lattice(&self, i: i64) -> bool {
        self.lattice == Lattice::Line || i >= 0
    }

    fn check_index(&self, i: i64) -> Result<()> {
        if self.on_lattice(i) {
            Ok(())
        } else {
            Err(Error::NegativeIndex(i))
        }
    }

    /// Matrix entry `A_{i,j}`; zero off the lattice and outside the band.
    pub fn entry(&self, i: i64, j: i64) -> f64 {
        if !self.on_lattice(i) || !self.on_lattice(j) {
            return 0.0;
        }
        let p = self.pseq.at(i);
        if self.lattice == Lattice::HalfLine && i == 0 {
            return match j {
                0 => 1.0 - p,
                1 => p,
                _ => 0.0,
            };
        }
        if j == i - 1 {
            1.0 - p
        } else if j == i + 1 {
            p
        } else {
            0.0
        }
    }

    /// `(A x)_i = sum_j A_{i,j} x_j`.
    pub fn apply(&self, x: &FinSeq) -> Result<FinSeq> {
        self.lattice.ensure(x.lattice())?;
        if x.is_empty() {
            return Ok(FinSeq::zero(self.lattice));
        }
        let mut lo = x.offset() - 1;
        if self.lattice == Lattice::HalfLine {
            lo = lo.max(0);
        }
        let hi = x.end() + 1;
        let out = (lo..hi)
            .map(|i| {
                (i - 1..=i + 1)
                    .map(|j| x.get(j) * self.entry(i, j))
                    .sum::<Complex64>()
            })
            .collect();
        FinSeq::new(self.lattice, lo, out)
    }

    /// Row-vector action `(x A)_k = sum_i x_i A_{i,k}`.
    pub fn apply_transpose(&self, x: &FinSeq) -> Result<FinSeq> {
        self.lattice.ensure(x.lattice())?;
        if x.is_empty() {
            return Ok(FinSeq::zero(self.lattice));
        }
        let mut lo = x.offset() - 1;
        if self.lattice == Lattice::HalfLine {
            lo = lo.max(0);
        }
        let hi = x.end() + 1;
        let out = (lo..hi)
            .map(|k| {
                (k - 1..=k + 1)
                    .map(|i| x.get(i) * self.entry(i, k))
                    .sum::<Complex64>()
            })
            .collect();
        FinSeq::new(self.lattice, lo, out)
    }

    /// `A^n x` by repeated banded application.
    pub fn power_apply(&self, n: usize, x: &FinSeq) -> Result<FinSeq> {
        let mut y = x.clone();
        self.lattice.ensure(x.lattice())?;
        for _ in 0..n {
            y = self.apply(&y)?;
        }
        Ok(y)
    }

    /// Row `i` of `A^n`, i.e. `e_i^T A^n`.
    pub fn power_row(&self, n: usize, i: i64) -> Result<FinSeq> {
        self.check_index(i)?;
        let mut y = FinSeq::unit(self.lattice, i)?;
        for _ in 0..n {
            y = self.apply_transpose(&y)?;
        }
        Ok(y)
    }

    /// Exact `A^n_{i,j}`, read off the column `A^n e_j`.
    pub fn power_entry(&self, n: usize, i: i64, j: i64) -> Result<f64> {
        self.check_index(i)?;
        self.check_index(j)?;
        if (i - j).unsigned_abs() as usize > n {
            return Ok(0.0);
        }
        let col = self.power_apply(n, &FinSeq::unit(self.lattice, j)?)?;
        Ok(col.get(i).re)
    }

    /// Cumulative sums `sum_{m=1}^{n} A^m_{i,i}` for `n = 1..=horizon`.
    pub fn return_mass(&self, i: i64, horizon: usize) -> Result<Vec<f64>> {
        self.check_index(i)?;
        let mut y = FinSeq::unit(self.lattice, i)?;
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            y = self.apply(&y)?;
            acc += y.get(i).re;
            out.push(acc);
        }
        Ok(out)
    }
}
