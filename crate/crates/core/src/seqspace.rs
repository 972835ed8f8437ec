//! Finitely supported sequences over `Z+` or `Z`, the ambient sequence
//! spaces `c0`, `c`, `l^q` and `l^inf`, and the causal convolution used to
//! bound right inverses.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index set of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lattice {
    /// `Z+ = {0, 1, 2, ...}`
    HalfLine,
    /// `Z`
    Line,
}

impl Lattice {
    pub fn name(self) -> &'static str {
        match self {
            Lattice::HalfLine => "half-line",
            Lattice::Line => "line",
        }
    }

    pub(crate) fn ensure(self, other: Lattice) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                expected: self.name(),
                found: other.name(),
            })
        }
    }
}

impl FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "half-line" | "halfline" | "z+" | "zplus" | "half" => Ok(Lattice::HalfLine),
            "line" | "z" => Ok(Lattice::Line),
            other => Err(Error::Parse(format!("unknown lattice `{other}`"))),
        }
    }
}

/// Absolute plus relative tolerance used when comparing against analytic bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-10,
            rel: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    /// `value <= bound` up to the tolerance band around `bound`.
    pub fn le(&self, value: f64, bound: f64) -> bool {
        value <= bound + self.abs + self.rel * bound.abs()
    }

    pub fn ge(&self, value: f64, bound: f64) -> bool {
        value + self.abs + self.rel * bound.abs() >= bound
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs + self.rel * a.abs().max(b.abs())
    }
}

/// Ambient Banach sequence space; fixes the norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "q")]
pub enum Space {
    C0,
    /// Convergent sequences. Finitely supported sequences lie in `c` with limit 0.
    C,
    Lq(f64),
    LInf,
}

impl Space {
    pub fn lq(q: f64) -> Result<Space> {
        Space::Lq(q).validated()
    }

    pub fn validated(self) -> Result<Space> {
        match self {
            Space::Lq(q) if !(q >= 1.0) || !q.is_finite() => {
                Err(Error::InvalidSpace(format!("l^q requires finite q >= 1, got {q}")))
            }
            s => Ok(s),
        }
    }

    /// Hoelder conjugate exponent of `l^q`, `None` for `q = 1` (dual is `l^inf`).
    pub fn conjugate_exponent(self) -> Option<f64> {
        match self {
            Space::Lq(q) if q > 1.0 => Some(q / (q - 1.0)),
            Space::Lq(_) => None,
            Space::C0 | Space::C => Some(1.0),
            Space::LInf => Some(1.0),
        }
    }

    /// Whether the norm is the sup norm.
    pub fn is_sup(self) -> bool {
        matches!(self, Space::C0 | Space::C | Space::LInf)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::C0 => write!(f, "c0"),
            Space::C => write!(f, "c"),
            Space::LInf => write!(f, "linf"),
            Space::Lq(q) => write!(f, "l{q}"),
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Space> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "c0" => return Ok(Space::C0),
            "c" => return Ok(Space::C),
            "linf" | "l_inf" | "l^inf" | "loo" => return Ok(Space::LInf),
            _ => {}
        }
        let rest = t
            .strip_prefix("lq:")
            .or_else(|| t.strip_prefix("l^"))
            .or_else(|| t.strip_prefix('l'))
            .ok_or_else(|| Error::Parse(format!("unknown space `{s}`")))?;
        let q: f64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in space `{s}`")))?;
        Space::lq(q)
    }
}

/// Finitely supported complex sequence. Entries outside
/// `[offset, offset + len)` are zero.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinSeq {
    lattice: Lattice,
    offset: i64,
    entries: Vec<Complex64>,
}

impl FinSeq {
    pub fn new(lattice: Lattice, offset: i64, entries: Vec<Complex64>) -> Result<FinSeq> {
        if lattice == Lattice::HalfLine && offset < 0 {
            return Err(Error::NegativeIndex(offset));
        }
        Ok(FinSeq {
            lattice,
            offset,
            entries,
        })
    }

    pub fn zero(lattice: Lattice) -> FinSeq {
        FinSeq {
            lattice,
            offset: 0,
            entries: Vec::new(),
        }
    }

    /// Standard unit vector `e_i`.
    pub fn unit(lattice: Lattice, i: i64) -> Result<FinSeq> {
        FinSeq::new(lattice, i, vec![Complex64::new(1.0, 0.0)])
    }

    pub fn from_reals(lattice: Lattice, offset: i64, values: &[f64]) -> Result<FinSeq> {
        FinSeq::new(
            lattice,
            offset,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// Half-line sequence starting at index 0.
    pub fn half_line(values: &[f64]) -> FinSeq {
        FinSeq::from_reals(Lattice::HalfLine, 0, values).expect("offset 0 is valid")
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// One past the last stored index.
    pub fn end(&self) -> i64 {
        self.offset + self.entries.len() as i64
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: i64) -> Complex64 {
        if i < self.offset || i >= self.end() {
            Complex64::new(0.0, 0.0)
        } else {
            self.entries[(i - self.offset) as usize]
        }
    }

    /// Real parts of the stored entries, starting at `offset`.
    pub fn re(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.re).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, &z)| (self.offset + k as i64, z))
    }

    /// True if every stored entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    /// Canonical form: leading and trailing stored zeros removed (exact zeros only).
    pub fn trimmed(&self) -> FinSeq {
        let zero = Complex64::new(0.0, 0.0);
        let first = self.entries.iter().position(|z| *z != zero);
        match first {
            None => FinSeq::zero(self.lattice),
            Some(a) => {
                let b = self.entries.iter().rposition(|z| *z != zero).unwrap();
                FinSeq {
                    lattice: self.lattice,
                    offset: self.offset + a as i64,
                    entries: self.entries[a..=b].to_vec(),
                }
            }
        }
    }

    /// Stored entries on `[start, end)`, zero-filled.
    pub fn window(&self, start: i64, end: i64) -> Vec<Complex64> {
        (start..end).map(|i| self.get(i)).collect()
    }

    pub fn scale(&self, c: Complex64) -> FinSeq {
        FinSeq {
            lattice: self.lattice,
            offset: self.offset,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> FinSeq {
        self.scale(Complex64::new(c, 0.0))
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex64, other: &FinSeq, b: Complex64) -> Result<FinSeq> {
        self.lattice.ensure(other.lattice)?;
        if self.is_empty() {
            return Ok(other.scale(b));
        }
        if other.is_empty() {
            return Ok(self.scale(a));
        }
        let lo = self.offset.min(other.offset);
        let hi = self.end().max(other.end());
        let entries = (lo..hi).map(|i| a * self.get(i) + b * other.get(i)).collect();
        FinSeq::new(self.lattice, lo, entries)
    }

    pub fn add(&self, other: &FinSeq) -> Result<FinSeq> {
        let one = Complex64::new(1.0, 0.0);
        self.combine(one, other, one)
    }

    pub fn sub(&self, other: &FinSeq) -> Result<FinSeq> {
        let one = Complex64::new(1.0, 0.0);
        self.combine(one, other, -one)
    }

    /// Largest `|x_i - y_i|`.
    pub fn max_abs_diff(&self, other: &FinSeq) -> Result<f64> {
        Ok(norm(&self.sub(other)?, Space::LInf))
    }
}

impl PartialEq for FinSeq {
    fn eq(&self, other: &FinSeq) -> bool {
        let a = self.trimmed();
        let b = other.trimmed();
        a.lattice == b.lattice && a.offset == b.offset && a.entries == b.entries
    }
}

/// Norm of `x` in `space`. For finitely supported `x` the sup-norm spaces
/// all share `max |x_n|`.
pub fn norm(x: &FinSeq, space: Space) -> f64 {
    let sup = x.entries.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    match space {
        Space::C0 | Space::C | Space::LInf => sup,
        Space::Lq(q) => {
            if sup == 0.0 {
                return 0.0;
            }
            if q == 1.0 {
                return x.entries.iter().map(|z| z.norm()).sum();
            }
            // scaled by the sup to keep |x|^q in range
            let s: f64 = x.entries.iter().map(|z| (z.norm() / sup).powf(q)).sum();
            sup * s.powf(1.0 / q)
        }
    }
}

/// Norm of a plain real slice, as a half-line sequence.
pub fn norm_slice(values: &[f64], space: Space) -> f64 {
    norm(&FinSeq::half_line(values), space)
}

/// Causal convolution `x_n = sum_{k=0}^{n} a_k v_{n-k}` on the half-line.
pub fn convolve(a: &FinSeq, v: &FinSeq) -> Result<FinSeq> {
    Lattice::HalfLine.ensure(a.lattice)?;
    Lattice::HalfLine.ensure(v.lattice)?;
    if a.is_empty() || v.is_empty() {
        return Ok(FinSeq::zero(Lattice::HalfLine));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + v.len() - 1];
    for (i, &ai) in a.entries.iter().enumerate() {
        for (j, &vj) in v.entries.iter().enumerate() {
            out[i + j] += ai * vj;
        }
    }
    FinSeq::new(Lattice::HalfLine, a.offset + v.offset, out)
}
