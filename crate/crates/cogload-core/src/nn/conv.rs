//! 1-D convolution layer (cross-correlation with symmetric zero padding)
//! and the optional width-2 max pool.

use super::tensor::Tensor3;
use crate::error::{Error, Result};

/// Learnable filters of one convolution layer.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvLayerParams {
    pub out_channels: usize,
    pub in_channels: usize,
    pub kernel: usize,
    /// (out, in, kernel), row-major.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl ConvLayerParams {
    pub fn zeros(out_channels: usize, in_channels: usize, kernel: usize) -> Self {
        Self {
            out_channels,
            in_channels,
            kernel,
            weights: vec![0.0; out_channels * in_channels * kernel],
            bias: vec![0.0; out_channels],
        }
    }

    #[inline]
    fn filter(&self, oc: usize, ic: usize) -> &[f64] {
        let start = (oc * self.in_channels + ic) * self.kernel;
        &self.weights[start..start + self.kernel]
    }

    #[inline]
    fn filter_mut(&mut self, oc: usize, ic: usize) -> &mut [f64] {
        let start = (oc * self.in_channels + ic) * self.kernel;
        &mut self.weights[start..start + self.kernel]
    }

    pub fn out_time(&self, in_time: usize, padding: usize) -> Result<usize> {
        let padded = in_time + 2 * padding;
        if padded < self.kernel {
            return Err(Error::shape(
                "conv1d",
                format!(
                    "padded length {padded} shorter than kernel {}",
                    self.kernel
                ),
            ));
        }
        Ok(padded - self.kernel + 1)
    }
}

/// Cross-correlation over the time axis with zero padding on both ends.
///
/// Output time length is `time + 2 * padding - kernel + 1`. The activation
/// is applied separately by the caller.
pub fn conv1d_forward(x: &Tensor3, p: &ConvLayerParams, padding: usize) -> Result<Tensor3> {
    if x.channels != p.in_channels {
        return Err(Error::shape(
            "conv1d_forward",
            format!(
                "input has {} channels, layer expects {}",
                x.channels, p.in_channels
            ),
        ));
    }
    let out_time = p.out_time(x.time, padding)?;
    let mut y = Tensor3::zeros(x.batch, p.out_channels, out_time);
    for b in 0..x.batch {
        for oc in 0..p.out_channels {
            let bias = p.bias[oc];
            let out_lane_start = (b * p.out_channels + oc) * out_time;
            for t_out in 0..out_time {
                let mut acc = bias;
                for ic in 0..p.in_channels {
                    let filter = p.filter(oc, ic);
                    let lane = x.lane(b, ic);
                    for (k, w) in filter.iter().enumerate() {
                        let src = t_out + k;
                        // src indexes the padded signal; map back to x.
                        if src >= padding && src - padding < x.time {
                            acc += w * lane[src - padding];
                        }
                    }
                }
                y.data[out_lane_start + t_out] = acc;
            }
        }
    }
    Ok(y)
}

/// Gradients of [`conv1d_forward`]: accumulates filter/bias gradients into
/// `dp` and returns the input gradient.
pub fn conv1d_backward(
    x: &Tensor3,
    p: &ConvLayerParams,
    padding: usize,
    dy: &Tensor3,
    dp: &mut ConvLayerParams,
) -> Result<Tensor3> {
    let out_time = p.out_time(x.time, padding)?;
    if dy.channels != p.out_channels || dy.time != out_time || dy.batch != x.batch {
        return Err(Error::shape(
            "conv1d_backward",
            format!(
                "output gradient is {}x{}x{}, expected {}x{}x{}",
                dy.batch, dy.channels, dy.time, x.batch, p.out_channels, out_time
            ),
        ));
    }
    let mut dx = Tensor3::zeros(x.batch, x.channels, x.time);
    for b in 0..x.batch {
        for oc in 0..p.out_channels {
            let dy_lane = dy.lane(b, oc);
            dp.bias[oc] += dy_lane.iter().sum::<f64>();
            for ic in 0..p.in_channels {
                let x_lane = x.lane(b, ic);
                let filter = p.filter(oc, ic);
                let dfilter = dp.filter_mut(oc, ic);
                let dx_lane_start = (b * x.channels + ic) * x.time;
                for (t_out, &g) in dy_lane.iter().enumerate() {
                    if g == 0.0 {
                        continue;
                    }
                    for k in 0..p.kernel {
                        let src = t_out + k;
                        if src >= padding && src - padding < x.time {
                            dfilter[k] += g * x_lane[src - padding];
                            dx.data[dx_lane_start + src - padding] += g * filter[k];
                        }
                    }
                }
            }
        }
    }
    Ok(dx)
}

/// Width-2, stride-2 max pool over time. Returns the pooled tensor and the
/// chosen source index per output element (ties keep the earlier sample).
pub fn maxpool2_forward(x: &Tensor3) -> Result<(Tensor3, Vec<usize>)> {
    if x.time < 2 {
        return Err(Error::shape(
            "maxpool2",
            format!("time length {} too short to pool", x.time),
        ));
    }
    let out_time = x.time / 2;
    let mut y = Tensor3::zeros(x.batch, x.channels, out_time);
    let mut argmax = vec![0usize; x.batch * x.channels * out_time];
    for b in 0..x.batch {
        for c in 0..x.channels {
            let lane = x.lane(b, c);
            for t in 0..out_time {
                let (a, z) = (lane[2 * t], lane[2 * t + 1]);
                let (v, src) = if z > a { (z, 2 * t + 1) } else { (a, 2 * t) };
                let idx = y.index(b, c, t);
                y.data[idx] = v;
                argmax[idx] = x.index(b, c, src);
            }
        }
    }
    Ok((y, argmax))
}

/// Routes pooled gradients back to the max positions.
pub fn maxpool2_backward(x_shape: &Tensor3, argmax: &[usize], dy: &Tensor3) -> Tensor3 {
    let mut dx = Tensor3::zeros(x_shape.batch, x_shape.channels, x_shape.time);
    for (slot, g) in argmax.iter().zip(&dy.data) {
        dx.data[*slot] += g;
    }
    dx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_channel(samples: &[f64]) -> Tensor3 {
        Tensor3::from_data(1, 1, samples.len(), samples.to_vec()).unwrap()
    }

    fn layer(kernel: &[f64]) -> ConvLayerParams {
        let mut p = ConvLayerParams::zeros(1, 1, kernel.len());
        p.weights.copy_from_slice(kernel);
        p
    }

    #[test]
    fn identity_kernel_preserves_input() {
        let x = single_channel(&[0.5, -1.0, 2.0, 3.5]);
        let y = conv1d_forward(&x, &layer(&[0.0, 1.0, 0.0]), 1).unwrap();
        assert_eq!(y.data, x.data);
        assert_eq!(y.time, 4);
    }

    #[test]
    fn box_kernel_hand_case() {
        let x = single_channel(&[1.0, 2.0, 3.0, 4.0]);
        let y = conv1d_forward(&x, &layer(&[1.0, 1.0, 1.0]), 0).unwrap();
        assert_eq!(y.data, vec![6.0, 9.0]);
    }

    #[test]
    fn channel_mismatch_rejected() {
        let x = Tensor3::zeros(1, 2, 8);
        let p = ConvLayerParams::zeros(4, 3, 3);
        assert!(matches!(
            conv1d_forward(&x, &p, 1),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn too_short_input_rejected() {
        let x = Tensor3::zeros(1, 1, 2);
        let p = ConvLayerParams::zeros(1, 1, 5);
        assert!(conv1d_forward(&x, &p, 0).is_err());
    }

    #[test]
    fn bias_adds_everywhere() {
        let x = single_channel(&[0.0, 0.0]);
        let mut p = layer(&[1.0]);
        p.bias[0] = 2.5;
        let y = conv1d_forward(&x, &p, 0).unwrap();
        assert_eq!(y.data, vec![2.5, 2.5]);
    }

    #[test]
    fn multichannel_sums_contributions() {
        let x = Tensor3::from_data(1, 2, 3, vec![1.0, 2.0, 3.0, 10.0, 20.0, 30.0]).unwrap();
        let mut p = ConvLayerParams::zeros(1, 2, 1);
        p.weights.copy_from_slice(&[1.0, 0.1]);
        let y = conv1d_forward(&x, &p, 0).unwrap();
        assert_eq!(y.data, vec![2.0, 4.0, 6.0]);
    }

    #[test]
    fn maxpool_picks_larger_and_routes_gradient() {
        let x = single_channel(&[1.0, 3.0, 5.0, 2.0, 4.0, 4.0]);
        let (y, argmax) = maxpool2_forward(&x).unwrap();
        assert_eq!(y.data, vec![3.0, 5.0, 4.0]);
        // tie in the last pair keeps the earlier index
        assert_eq!(argmax[2], 4);
        let dy = single_channel(&[1.0, 1.0, 1.0]);
        let dx = maxpool2_backward(&x, &argmax, &dy);
        assert_eq!(dx.data, vec![0.0, 1.0, 1.0, 0.0, 1.0, 0.0]);
    }
}
