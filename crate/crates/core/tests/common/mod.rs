#![allow(dead_code)]

use markovdyn::operators::PSeq;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Dense `N x N` walk matrix written straight from the row definitions,
/// indices `lo..lo + N`. Rows near the upper edge lose their right neighbour.
pub struct Dense {
    pub lo: i64,
    pub m: Vec<Vec<f64>>,
}

impl Dense {
    pub fn half_line(p: impl Fn(i64) -> f64, size: usize) -> Dense {
        let mut m = vec![vec![0.0; size]; size];
        for i in 0..size {
            let pi = p(i as i64);
            if i == 0 {
                m[0][0] = 1.0 - pi;
            } else {
                m[i][i - 1] = 1.0 - pi;
            }
            if i + 1 < size {
                m[i][i + 1] = pi;
            }
        }
        Dense { lo: 0, m }
    }

    pub fn line(p: impl Fn(i64) -> f64, lo: i64, size: usize) -> Dense {
        let mut m = vec![vec![0.0; size]; size];
        for i in 0..size {
            let pi = p(lo + i as i64);
            if i > 0 {
                m[i][i - 1] = 1.0 - pi;
            }
            if i + 1 < size {
                m[i][i + 1] = pi;
            }
        }
        Dense { lo, m }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.m
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        let n = self.m.len();
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                let a = self.m[i][k];
                if a != 0.0 {
                    for j in 0..n {
                        out[i][j] += a * other.m[k][j];
                    }
                }
            }
        }
        Dense { lo: self.lo, m: out }
    }

    pub fn power(&self, n: usize) -> Dense {
        let size = self.m.len();
        let mut acc = Dense {
            lo: self.lo,
            m: (0..size)
                .map(|i| (0..size).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        };
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn get(&self, i: i64, j: i64) -> f64 {
        self.m[(i - self.lo) as usize][(j - self.lo) as usize]
    }
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Random list-with-tail or periodic sequence with values in `[lo, hi]` and,
/// for lists, a tail above 0.55.
pub fn random_pseq(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> PSeq {
    let len = rng.random_range(1..=6);
    let values: Vec<f64> = (0..len).map(|_| uniform(rng, lo, hi)).collect();
    if rng.random::<bool>() {
        PSeq::list(values, uniform(rng, 0.55f64.max(lo), hi)).unwrap()
    } else {
        PSeq::periodic(values).unwrap()
    }
}

pub fn random_vec(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<f64> {
    let len = rng.random_range(1..=max_len);
    (0..len).map(|_| uniform(rng, -1.0, 1.0)).collect()
}
