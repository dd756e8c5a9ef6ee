//! Integer-factor down-sampling.

use serde::{Deserialize, Serialize};

use super::ChannelSeries;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DownsampleMethod {
    /// Average each consecutive block of `factor` samples; a trailing
    /// partial block is dropped.
    #[default]
    Mean,
    /// Keep every `factor`-th sample, starting with the first.
    Decimate,
}

/// Reduces a series by an integer factor; the rate divides accordingly.
pub fn downsample(
    series: &ChannelSeries,
    factor: usize,
    method: DownsampleMethod,
) -> Result<ChannelSeries> {
    if factor == 0 {
        return Err(Error::ConfigInvalid(
            "downsample factor must be at least 1".into(),
        ));
    }
    if series.is_empty() || series.len() < factor {
        return Err(Error::EmptySeries);
    }
    if factor == 1 {
        return Ok(series.clone());
    }
    let samples = match method {
        DownsampleMethod::Mean => series
            .samples
            .chunks_exact(factor)
            .map(|block| block.iter().sum::<f64>() / factor as f64)
            .collect(),
        DownsampleMethod::Decimate => series.samples.iter().copied().step_by(factor).collect(),
    };
    ChannelSeries::new(
        series.name.clone(),
        series.modality,
        series.rate_hz / factor as f64,
        samples,
        series.start_time_s,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Modality;
    use proptest::prelude::*;

    fn series(samples: Vec<f64>, rate: f64) -> ChannelSeries {
        ChannelSeries::new("s", Modality::Simulator, rate, samples, 0.0).unwrap()
    }

    #[test]
    fn factor_one_is_identity() {
        let s = series(vec![1.0, 2.0, 3.0], 30.0);
        let out = downsample(&s, 1, DownsampleMethod::Mean).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn block_mean_hand_case() {
        let s = series((1..=10).map(f64::from).collect(), 10.0);
        let out = downsample(&s, 5, DownsampleMethod::Mean).unwrap();
        assert_eq!(out.samples, vec![3.0, 8.0]);
        assert_eq!(out.rate_hz, 2.0);
    }

    #[test]
    fn decimate_keeps_first_of_each_stride() {
        let s = series((1..=10).map(f64::from).collect(), 9.0);
        let out = downsample(&s, 3, DownsampleMethod::Decimate).unwrap();
        assert_eq!(out.samples, vec![1.0, 4.0, 7.0, 10.0]);
        assert_eq!(out.rate_hz, 3.0);
    }

    #[test]
    fn short_series_rejected() {
        let s = series(vec![1.0, 2.0], 10.0);
        assert!(matches!(
            downsample(&s, 3, DownsampleMethod::Mean),
            Err(Error::EmptySeries)
        ));
    }

    #[test]
    fn zero_factor_rejected() {
        let s = series(vec![1.0], 10.0);
        assert!(downsample(&s, 0, DownsampleMethod::Mean).is_err());
    }

    proptest! {
        /// Block averaging preserves the mean over complete blocks.
        #[test]
        fn mean_method_preserves_block_mean(
            samples in proptest::collection::vec(-50.0f64..50.0, 4..120),
            factor in 1usize..6,
        ) {
            prop_assume!(samples.len() >= factor);
            let complete = samples.len() / factor * factor;
            let s = series(samples.clone(), 60.0);
            let out = downsample(&s, factor, DownsampleMethod::Mean).unwrap();
            let in_mean = samples[..complete].iter().sum::<f64>() / complete as f64;
            let out_mean = out.samples.iter().sum::<f64>() / out.samples.len() as f64;
            prop_assert!((in_mean - out_mean).abs() < 1e-9);
        }
    }
}
