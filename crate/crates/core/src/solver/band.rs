//! Symmetric banded storage with an unpivoted `L D L^T` factorization.
//!
//! The factorization of `A - sigma I` doubles as an inertia count: by
//! Sylvester's law the number of negative pivots equals the number of
//! eigenvalues below `sigma`.

/// Lower band of a symmetric matrix: `data[i * (bw + 1) + d] = A[i][i - d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        SymBand {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        debug_assert!(i - j <= self.bw, "entry outside the band");
        i * (self.bw + 1) + (i - j)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        if hi - lo > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[i * (self.bw + 1)..(i + 1) * (self.bw + 1)];
            y[i] += row[0] * x[i];
            for d in 1..=self.bw.min(i) {
                let a = row[d];
                if a != 0.0 {
                    y[i] += a * x[i - d];
                    y[i - d] += a * x[i];
                }
            }
        }
        y
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        for i in 0..self.n {
            for d in 0..=self.bw.min(i) {
                let a = self.data[i * (self.bw + 1) + d].abs();
                rows[i] += a;
                if d > 0 {
                    rows[i - d] += a;
                }
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut off = vec![0.0; self.n];
        for i in 0..self.n {
            for d in 1..=self.bw.min(i) {
                let a = self.data[i * (self.bw + 1) + d].abs();
                off[i] += a;
                off[i - d] += a;
            }
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let a = self.data[i * (self.bw + 1)];
            lo = lo.min(a - off[i]);
            hi = hi.max(a + off[i]);
        }
        (lo, hi)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.get(i, j);
            }
        }
        m
    }

    /// `L D L^T` of `A - sigma I`. Exact zero pivots are replaced by a tiny
    /// multiple of the matrix scale, which shifts `sigma` by a negligible amount.
    pub fn factor_shifted(&self, sigma: f64) -> LdlFactor {
        let bw = self.bw;
        let stride = bw + 1;
        let mut w = self.data.clone();
        for i in 0..self.n {
            w[i * stride] -= sigma;
        }
        let tiny = f64::EPSILON * (self.norm_inf() + sigma.abs()).max(f64::MIN_POSITIVE);
        let mut negatives = 0;
        let mut l = vec![0.0; bw];
        for k in 0..self.n {
            let mut d = w[k * stride];
            if d == 0.0 {
                d = tiny;
                w[k * stride] = d;
            }
            if d < 0.0 {
                negatives += 1;
            }
            let last = (k + bw).min(self.n - 1);
            let cnt = last - k;
            for (t, li) in l.iter_mut().enumerate().take(cnt) {
                let i = k + 1 + t;
                *li = w[i * stride + (i - k)] / d;
            }
            for t in 0..cnt {
                let i = k + 1 + t;
                let f = l[t] * d;
                if f == 0.0 {
                    continue;
                }
                let base = i * stride + i;
                for (s, lj) in l.iter().enumerate().take(t + 1) {
                    let j = k + 1 + s;
                    w[base - j] -= f * lj;
                }
            }
            for t in 0..cnt {
                let i = k + 1 + t;
                w[i * stride + (i - k)] = l[t];
            }
        }
        LdlFactor {
            n: self.n,
            bw,
            data: w,
            negatives,
        }
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        self.factor_shifted(sigma).negatives
    }
}

/// Unit lower-triangular band `L` (below the diagonal) and `D` (on it).
#[derive(Debug, Clone)]
pub struct LdlFactor {
    n: usize,
    bw: usize,
    data: Vec<f64>,
    negatives: usize,
}

impl LdlFactor {
    pub fn negatives(&self) -> usize {
        self.negatives
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let stride = self.bw + 1;
        let mut x = b.to_vec();
        for i in 0..self.n {
            let mut s = x[i];
            for d in 1..=self.bw.min(i) {
                s -= self.data[i * stride + d] * x[i - d];
            }
            x[i] = s;
        }
        for i in 0..self.n {
            x[i] /= self.data[i * stride];
        }
        for i in (0..self.n).rev() {
            let mut s = x[i];
            for d in 1..=self.bw.min(self.n - 1 - i) {
                s -= self.data[(i + d) * stride + d] * x[i + d];
            }
            x[i] = s;
        }
        x
    }
}
