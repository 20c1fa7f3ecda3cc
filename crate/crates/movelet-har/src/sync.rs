//! Gyroscope-to-accelerometer time synchronization.
//!
//! The two sensors each follow a 10 Hz schedule but are not synchronized,
//! so joint-sensor analysis linearly interpolates the gyroscope data to
//! the accelerometer timestamps. Accelerometer timestamps outside the
//! gyroscope's span are clipped (never extrapolated) and counted so the
//! effect can be audited.

use crate::error::{Error, Result};
use crate::model::{SyncedSeries, TriaxialSeries};

/// A synchronized 6-channel series plus how many accelerometer timestamps
/// were dropped at each end for falling outside gyroscope coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationResult {
    pub series: SyncedSeries,
    pub clipped_head: usize,
    pub clipped_tail: usize,
}

/// Linearly interpolate each axis of `series` at `target_ts`.
///
/// Targets must be sorted and lie within the source span; targets equal to
/// a source timestamp return the source value exactly. Between samples
/// `(t0, v0)` and `(t1, v1)` the value is `v0 + (v1 - v0) * (t - t0) / (t1 - t0)`,
/// clamped to the bracketing values so rounding can never overshoot them.
pub fn linear_interpolate(series: &TriaxialSeries, target_ts: &[f64]) -> Result<[Vec<f64>; 3]> {
    let samples = series.samples();
    if samples.is_empty() {
        return Err(Error::SeriesTooShort { len: 0, min: 1 });
    }
    debug_assert!(target_ts.windows(2).all(|w| w[0] <= w[1]), "targets must be sorted");

    let first = samples[0].t;
    let last = samples[samples.len() - 1].t;
    let mut out: [Vec<f64>; 3] = std::array::from_fn(|_| Vec::with_capacity(target_ts.len()));

    let mut i = 0;
    for &t in target_ts {
        if t < first || t > last {
            return Err(Error::OutOfRange { t, first, last });
        }
        while i + 1 < samples.len() && samples[i + 1].t <= t {
            i += 1;
        }
        let lo = samples[i];
        if lo.t == t {
            for (axis, ch) in out.iter_mut().enumerate() {
                ch.push(lo.axis(axis));
            }
            continue;
        }
        let hi = samples[i + 1];
        let w = (t - lo.t) / (hi.t - lo.t);
        for (axis, ch) in out.iter_mut().enumerate() {
            let v0 = lo.axis(axis);
            let v1 = hi.axis(axis);
            let v = v0 + (v1 - v0) * w;
            ch.push(v.clamp(v0.min(v1), v0.max(v1)));
        }
    }
    Ok(out)
}

/// Interpolate `gyro` onto the accelerometer timeline, producing a
/// 6-channel series. Accelerometer channels are copied verbatim; gyro
/// channels are interpolated. Accelerometer timestamps outside the
/// gyroscope span are clipped and counted.
pub fn synchronize(accel: &TriaxialSeries, gyro: &TriaxialSeries) -> Result<InterpolationResult> {
    let (Some(g_first), Some(g_last)) = (gyro.first_t(), gyro.last_t()) else {
        return Err(Error::NoOverlap);
    };

    let samples = accel.samples();
    let clipped_head = samples.iter().take_while(|s| s.t < g_first).count();
    let clipped_tail = samples.iter().rev().take_while(|s| s.t > g_last).count();
    if clipped_head + clipped_tail >= samples.len() {
        return Err(Error::NoOverlap);
    }

    let kept = &samples[clipped_head..samples.len() - clipped_tail];
    let timestamps: Vec<f64> = kept.iter().map(|s| s.t).collect();
    let [gx, gy, gz] = linear_interpolate(gyro, &timestamps)?;

    let channel = |axis: usize| kept.iter().map(|s| s.axis(axis)).collect::<Vec<f64>>();
    let series = SyncedSeries::new(
        timestamps,
        [channel(0), channel(1), channel(2), gx, gy, gz],
    )?;
    Ok(InterpolationResult {
        series,
        clipped_head,
        clipped_tail,
    })
}
