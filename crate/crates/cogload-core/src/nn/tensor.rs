//! Minimal dense tensor and matrix containers for the network.
//!
//! Everything is 64-bit and row-major; loops are written with fixed
//! accumulation order so results are bit-reproducible across runs and
//! platforms.

use crate::error::{Error, Result};

/// (batch, channels, time) tensor, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    pub batch: usize,
    pub channels: usize,
    pub time: usize,
    pub data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(batch: usize, channels: usize, time: usize) -> Self {
        Self {
            batch,
            channels,
            time,
            data: vec![0.0; batch * channels * time],
        }
    }

    pub fn from_data(batch: usize, channels: usize, time: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != batch * channels * time {
            return Err(Error::shape(
                "Tensor3::from_data",
                format!(
                    "data length {} != {batch}x{channels}x{time}",
                    data.len()
                ),
            ));
        }
        Ok(Self {
            batch,
            channels,
            time,
            data,
        })
    }

    #[inline]
    pub fn index(&self, b: usize, c: usize, t: usize) -> usize {
        (b * self.channels + c) * self.time + t
    }

    #[inline]
    pub fn get(&self, b: usize, c: usize, t: usize) -> f64 {
        self.data[self.index(b, c, t)]
    }

    #[inline]
    pub fn set(&mut self, b: usize, c: usize, t: usize, value: f64) {
        let i = self.index(b, c, t);
        self.data[i] = value;
    }

    /// Time series of one (batch, channel) pair.
    #[inline]
    pub fn lane(&self, b: usize, c: usize) -> &[f64] {
        let start = (b * self.channels + c) * self.time;
        &self.data[start..start + self.time]
    }

    #[inline]
    pub fn lane_mut(&mut self, b: usize, c: usize) -> &mut [f64] {
        let start = (b * self.channels + c) * self.time;
        &mut self.data[start..start + self.time]
    }

    /// Channel vector at one time step, gathered into `out`.
    pub fn gather_step(&self, b: usize, t: usize, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.channels);
        for (c, slot) in out.iter_mut().enumerate() {
            *slot = self.get(b, c, t);
        }
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `out = A x`.
    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = dot(self.row(r), x);
        }
    }

    /// `out += A x`.
    pub fn matvec_accum(&self, x: &[f64], out: &mut [f64]) {
        for (r, slot) in out.iter_mut().enumerate() {
            *slot += dot(self.row(r), x);
        }
    }

    /// `out += A^T y`.
    pub fn matvec_t_accum(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        for (r, &yr) in y.iter().enumerate() {
            if yr != 0.0 {
                axpy(yr, self.row(r), out);
            }
        }
    }

    /// `A += y x^T` (outer product accumulate).
    pub fn outer_accum(&mut self, y: &[f64], x: &[f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(x.len(), self.cols);
        for (r, &yr) in y.iter().enumerate() {
            if yr != 0.0 {
                axpy(yr, x, self.row_mut(r));
            }
        }
    }
}

/// Dot product with a fixed four-lane accumulation order.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut lanes = [0.0f64; 4];
    let chunks_a = a.chunks_exact(4);
    let chunks_b = b.chunks_exact(4);
    let rem_a = chunks_a.remainder();
    let rem_b = chunks_b.remainder();
    for (ca, cb) in chunks_a.zip(chunks_b) {
        lanes[0] += ca[0] * cb[0];
        lanes[1] += ca[1] * cb[1];
        lanes[2] += ca[2] * cb[2];
        lanes[3] += ca[3] * cb[3];
    }
    let mut tail = 0.0;
    for (x, y) in rem_a.iter().zip(rem_b) {
        tail += x * y;
    }
    (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]) + tail
}

/// `out += alpha * x`.
#[inline]
pub fn axpy(alpha: f64, x: &[f64], out: &mut [f64]) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += alpha * v;
    }
}

/// Elementwise `max(0, x)` on a tensor.
pub fn relu(x: &Tensor3) -> Tensor3 {
    Tensor3 {
        batch: x.batch,
        channels: x.channels,
        time: x.time,
        data: x.data.iter().map(|v| v.max(0.0)).collect(),
    }
}

/// Elementwise ReLU on a slice, in place.
pub fn relu_slice(x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = v.max(0.0);
    }
}

/// Gradient of ReLU: passes `dy` where the pre-activation was positive.
pub fn relu_backward(pre: &Tensor3, dy: &Tensor3) -> Tensor3 {
    debug_assert_eq!(pre.data.len(), dy.data.len());
    Tensor3 {
        batch: dy.batch,
        channels: dy.channels,
        time: dy.time,
        data: pre
            .data
            .iter()
            .zip(&dy.data)
            .map(|(p, d)| if *p > 0.0 { *d } else { 0.0 })
            .collect(),
    }
}

pub fn relu_backward_slice(pre: &[f64], dy: &[f64], dx: &mut [f64]) {
    for ((p, d), x) in pre.iter().zip(dy).zip(dx.iter_mut()) {
        *x = if *p > 0.0 { *d } else { 0.0 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_layout_round_trip() {
        let mut t = Tensor3::zeros(2, 3, 4);
        t.set(1, 2, 3, 7.5);
        assert_eq!(t.get(1, 2, 3), 7.5);
        assert_eq!(t.lane(1, 2)[3], 7.5);
        let mut step = vec![0.0; 3];
        t.gather_step(1, 3, &mut step);
        assert_eq!(step, vec![0.0, 0.0, 7.5]);
    }

    #[test]
    fn dot_matches_naive() {
        let a: Vec<f64> = (0..11).map(f64::from).collect();
        let b: Vec<f64> = (0..11).map(|v| f64::from(v) * 0.5).collect();
        let naive: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((dot(&a, &b) - naive).abs() < 1e-12);
    }

    #[test]
    fn matvec_and_transpose() {
        let mut m = Mat::zeros(2, 3);
        m.data.copy_from_slice(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let x = [1.0, 0.0, -1.0];
        let mut y = [0.0; 2];
        m.matvec(&x, &mut y);
        assert_eq!(y, [-2.0, -2.0]);

        let mut back = [0.0; 3];
        m.matvec_t_accum(&[1.0, 1.0], &mut back);
        assert_eq!(back, [5.0, 7.0, 9.0]);
    }

    #[test]
    fn relu_definition_and_idempotence() {
        let x = Tensor3::from_data(1, 1, 3, vec![-1.0, 0.0, 2.0]).unwrap();
        let y = relu(&x);
        assert_eq!(y.data, vec![0.0, 0.0, 2.0]);
        assert_eq!(relu(&y).data, y.data);
        let all_neg = Tensor3::from_data(1, 1, 3, vec![-3.0, -0.5, -1e9]).unwrap();
        assert!(relu(&all_neg).data.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn relu_gradient_masks_negatives() {
        let pre = Tensor3::from_data(1, 1, 4, vec![-1.0, 0.0, 0.5, 2.0]).unwrap();
        let dy = Tensor3::from_data(1, 1, 4, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let dx = relu_backward(&pre, &dy);
        assert_eq!(dx.data, vec![0.0, 0.0, 1.0, 1.0]);
    }
}
