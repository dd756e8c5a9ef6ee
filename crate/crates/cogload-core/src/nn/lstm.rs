//! Peephole LSTM layer with full backpropagation through time.
//!
//! Gate pre-activations combine the step input, the previous hidden state
//! and (for the input, forget and output gates) an elementwise peephole view
//! of the previous cell state:
//!
//! ```text
//! i_t = sig(Wi x_t + Ri h_prev + pi o c_prev + bi)
//! f_t = sig(Wf x_t + Rf h_prev + pf o c_prev + bf)
//! o_t = sig(Wo x_t + Ro h_prev + po o c_prev + bo)
//! g_t = tanh(Wg x_t + Rg h_prev + bg)
//! c_t = f_t o c_prev + i_t o g_t
//! h_t = o_t o tanh(c_t)
//! ```
//!
//! where `o` is the elementwise product. All three peepholes observe the
//! previous cell state; they can be disabled wholesale, which reduces the
//! cell to a plain LSTM.

use super::tensor::{dot, Mat, Tensor3};
use crate::error::{Error, Result};

#[inline]
pub(crate) fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Weights of one gate: input, recurrent, peephole, bias.
#[derive(Debug, Clone, PartialEq)]
pub struct GateParams {
    pub input_weights: Mat,
    pub recurrent_weights: Mat,
    pub cell_weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl GateParams {
    pub fn zeros(hidden: usize, input: usize) -> Self {
        Self {
            input_weights: Mat::zeros(hidden, input),
            recurrent_weights: Mat::zeros(hidden, hidden),
            cell_weights: vec![0.0; hidden],
            bias: vec![0.0; hidden],
        }
    }
}

/// Weights of the cell candidate (no peephole).
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateParams {
    pub input_weights: Mat,
    pub recurrent_weights: Mat,
    pub bias: Vec<f64>,
}

impl CandidateParams {
    pub fn zeros(hidden: usize, input: usize) -> Self {
        Self {
            input_weights: Mat::zeros(hidden, input),
            recurrent_weights: Mat::zeros(hidden, hidden),
            bias: vec![0.0; hidden],
        }
    }
}

/// All weights of one LSTM layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmLayerParams {
    pub input_gate: GateParams,
    pub forget_gate: GateParams,
    pub output_gate: GateParams,
    pub candidate: CandidateParams,
}

impl LstmLayerParams {
    pub fn zeros(hidden: usize, input: usize) -> Self {
        Self {
            input_gate: GateParams::zeros(hidden, input),
            forget_gate: GateParams::zeros(hidden, input),
            output_gate: GateParams::zeros(hidden, input),
            candidate: CandidateParams::zeros(hidden, input),
        }
    }

    pub fn hidden_size(&self) -> usize {
        self.input_gate.recurrent_weights.rows
    }

    pub fn input_size(&self) -> usize {
        self.input_gate.input_weights.cols
    }
}

/// Intermediate values of one time step, kept for the backward pass.
#[derive(Debug, Clone)]
pub(crate) struct StepCache {
    pub i: Vec<f64>,
    pub f: Vec<f64>,
    pub o: Vec<f64>,
    pub g: Vec<f64>,
    pub c: Vec<f64>,
    pub tanh_c: Vec<f64>,
}

fn gate_preactivation(
    gate: &GateParams,
    x_t: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
    use_peepholes: bool,
    out: &mut [f64],
) {
    for (slot, bias) in out.iter_mut().zip(&gate.bias) {
        *slot = *bias;
    }
    gate.input_weights.matvec_accum(x_t, out);
    gate.recurrent_weights.matvec_accum(h_prev, out);
    if use_peepholes {
        for ((slot, w), c) in out.iter_mut().zip(&gate.cell_weights).zip(c_prev) {
            *slot += w * c;
        }
    }
}

pub(crate) fn step_cached(
    x_t: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
    p: &LstmLayerParams,
    use_peepholes: bool,
) -> StepCache {
    let hidden = p.hidden_size();
    let mut i = vec![0.0; hidden];
    let mut f = vec![0.0; hidden];
    let mut o = vec![0.0; hidden];
    let mut g = vec![0.0; hidden];
    gate_preactivation(&p.input_gate, x_t, h_prev, c_prev, use_peepholes, &mut i);
    gate_preactivation(&p.forget_gate, x_t, h_prev, c_prev, use_peepholes, &mut f);
    gate_preactivation(&p.output_gate, x_t, h_prev, c_prev, use_peepholes, &mut o);
    for (slot, bias) in g.iter_mut().zip(&p.candidate.bias) {
        *slot = *bias;
    }
    p.candidate.input_weights.matvec_accum(x_t, &mut g);
    p.candidate.recurrent_weights.matvec_accum(h_prev, &mut g);

    for v in i.iter_mut() {
        *v = sigmoid(*v);
    }
    for v in f.iter_mut() {
        *v = sigmoid(*v);
    }
    for v in o.iter_mut() {
        *v = sigmoid(*v);
    }
    for v in g.iter_mut() {
        *v = v.tanh();
    }
    let c: Vec<f64> = (0..hidden)
        .map(|j| f[j] * c_prev[j] + i[j] * g[j])
        .collect();
    let tanh_c: Vec<f64> = c.iter().map(|v| v.tanh()).collect();
    StepCache {
        i,
        f,
        o,
        g,
        c,
        tanh_c,
    }
}

/// One LSTM time step; returns the new hidden and cell states.
pub fn lstm_step(
    x_t: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
    p: &LstmLayerParams,
    use_peepholes: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let hidden = p.hidden_size();
    if x_t.len() != p.input_size() {
        return Err(Error::shape(
            "lstm_step",
            format!("input size {} != layer input {}", x_t.len(), p.input_size()),
        ));
    }
    if h_prev.len() != hidden || c_prev.len() != hidden {
        return Err(Error::shape(
            "lstm_step",
            format!(
                "state sizes {}/{} != hidden {}",
                h_prev.len(),
                c_prev.len(),
                hidden
            ),
        ));
    }
    let cache = step_cached(x_t, h_prev, c_prev, p, use_peepholes);
    let h: Vec<f64> = cache
        .o
        .iter()
        .zip(&cache.tanh_c)
        .map(|(o, tc)| o * tc)
        .collect();
    Ok((h, cache.c))
}

/// Hidden states of one layer over a whole sequence (initial states zero),
/// keeping the per-step caches.
pub(crate) fn layer_forward_cached(
    x_seq: &[Vec<f64>],
    p: &LstmLayerParams,
    use_peepholes: bool,
) -> (Vec<Vec<f64>>, Vec<StepCache>) {
    let hidden = p.hidden_size();
    let mut h_prev = vec![0.0; hidden];
    let mut c_prev = vec![0.0; hidden];
    let mut h_seq = Vec::with_capacity(x_seq.len());
    let mut caches = Vec::with_capacity(x_seq.len());
    for x_t in x_seq {
        let cache = step_cached(x_t, &h_prev, &c_prev, p, use_peepholes);
        let h: Vec<f64> = cache
            .o
            .iter()
            .zip(&cache.tanh_c)
            .map(|(o, tc)| o * tc)
            .collect();
        c_prev = cache.c.clone();
        h_prev = h.clone();
        h_seq.push(h);
        caches.push(cache);
    }
    (h_seq, caches)
}

/// Backpropagation through time for one layer of one sample.
///
/// `dh_out[t]` is the loss gradient flowing into `h_t` from the layer above
/// (or the flattened head). Gate-weight gradients accumulate into `dp`; the
/// return value is the gradient with respect to the layer inputs.
pub(crate) fn layer_backward(
    x_seq: &[Vec<f64>],
    h_seq: &[Vec<f64>],
    caches: &[StepCache],
    p: &LstmLayerParams,
    use_peepholes: bool,
    dh_out: &[Vec<f64>],
    dp: &mut LstmLayerParams,
) -> Vec<Vec<f64>> {
    let hidden = p.hidden_size();
    let input = p.input_size();
    let steps = x_seq.len();
    let zeros = vec![0.0; hidden];

    let mut dx_seq = vec![vec![0.0; input]; steps];
    let mut dh_rec = vec![0.0; hidden];
    let mut dc_rec = vec![0.0; hidden];
    let mut da_i = vec![0.0; hidden];
    let mut da_f = vec![0.0; hidden];
    let mut da_o = vec![0.0; hidden];
    let mut da_g = vec![0.0; hidden];

    for t in (0..steps).rev() {
        let cache = &caches[t];
        let h_prev = if t == 0 { &zeros } else { &h_seq[t - 1] };
        let c_prev = if t == 0 { &zeros } else { &caches[t - 1].c };

        for j in 0..hidden {
            let dh = dh_out[t][j] + dh_rec[j];
            let o = cache.o[j];
            let tanh_c = cache.tanh_c[j];
            let dc = dh * o * (1.0 - tanh_c * tanh_c) + dc_rec[j];

            let d_o = dh * tanh_c;
            da_o[j] = d_o * o * (1.0 - o);

            let i = cache.i[j];
            let g = cache.g[j];
            let f = cache.f[j];
            da_i[j] = dc * g * i * (1.0 - i);
            da_f[j] = dc * c_prev[j] * f * (1.0 - f);
            da_g[j] = dc * i * (1.0 - g * g);

            // Cell-state gradient carried to t-1: through the forget gate
            // and, when enabled, through the three peepholes.
            let mut dc_prev = dc * f;
            if use_peepholes {
                dc_prev += da_i[j] * p.input_gate.cell_weights[j]
                    + da_f[j] * p.forget_gate.cell_weights[j]
                    + da_o[j] * p.output_gate.cell_weights[j];
            }
            dc_rec[j] = dc_prev;
        }

        // Parameter gradients.
        let x_t = &x_seq[t];
        for (gate_dp, da) in [
            (&mut dp.input_gate, &da_i),
            (&mut dp.forget_gate, &da_f),
            (&mut dp.output_gate, &da_o),
        ] {
            gate_dp.input_weights.outer_accum(da, x_t);
            gate_dp.recurrent_weights.outer_accum(da, h_prev);
            if use_peepholes {
                for ((w, d), c) in gate_dp.cell_weights.iter_mut().zip(da.iter()).zip(c_prev) {
                    *w += d * c;
                }
            }
            for (b, d) in gate_dp.bias.iter_mut().zip(da.iter()) {
                *b += d;
            }
        }
        dp.candidate.input_weights.outer_accum(&da_g, x_t);
        dp.candidate.recurrent_weights.outer_accum(&da_g, h_prev);
        for (b, d) in dp.candidate.bias.iter_mut().zip(&da_g) {
            *b += d;
        }

        // Input and recurrent-state gradients.
        let dx = &mut dx_seq[t];
        p.input_gate.input_weights.matvec_t_accum(&da_i, dx);
        p.forget_gate.input_weights.matvec_t_accum(&da_f, dx);
        p.output_gate.input_weights.matvec_t_accum(&da_o, dx);
        p.candidate.input_weights.matvec_t_accum(&da_g, dx);

        dh_rec.iter_mut().for_each(|v| *v = 0.0);
        p.input_gate.recurrent_weights.matvec_t_accum(&da_i, &mut dh_rec);
        p.forget_gate.recurrent_weights.matvec_t_accum(&da_f, &mut dh_rec);
        p.output_gate.recurrent_weights.matvec_t_accum(&da_o, &mut dh_rec);
        p.candidate.recurrent_weights.matvec_t_accum(&da_g, &mut dh_rec);
    }
    dx_seq
}

/// Runs a stack of LSTM layers over a batch; returns the per-step hidden
/// states of the final layer as a `(batch, hidden, time)` tensor.
pub fn lstm_forward(
    x: &Tensor3,
    layers: &[LstmLayerParams],
    use_peepholes: bool,
) -> Result<Tensor3> {
    let first = layers.first().ok_or_else(|| {
        Error::shape("lstm_forward", "no LSTM layers configured".to_string())
    })?;
    if x.channels != first.input_size() {
        return Err(Error::shape(
            "lstm_forward",
            format!(
                "input has {} channels, first layer expects {}",
                x.channels,
                first.input_size()
            ),
        ));
    }
    for pair in layers.windows(2) {
        if pair[1].input_size() != pair[0].hidden_size() {
            return Err(Error::shape(
                "lstm_forward",
                "layer input size must equal previous hidden size".to_string(),
            ));
        }
    }
    let hidden = layers[layers.len() - 1].hidden_size();
    let mut out = Tensor3::zeros(x.batch, hidden, x.time);
    for b in 0..x.batch {
        let mut seq: Vec<Vec<f64>> = (0..x.time)
            .map(|t| {
                let mut step = vec![0.0; x.channels];
                x.gather_step(b, t, &mut step);
                step
            })
            .collect();
        for layer in layers {
            let (h_seq, _) = layer_forward_cached(&seq, layer, use_peepholes);
            seq = h_seq;
        }
        for (t, h) in seq.iter().enumerate() {
            for (j, v) in h.iter().enumerate() {
                out.set(b, j, t, *v);
            }
        }
    }
    Ok(out)
}
