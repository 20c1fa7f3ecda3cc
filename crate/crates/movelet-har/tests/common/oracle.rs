//! Brute-force reference implementations, coded independently of the
//! library with plain nested loops. Used to cross-check matching, voting,
//! synchronization, and the end-to-end classification path.

#![allow(dead_code)]

use movelet_har::model::ActivityLabel;

/// One dictionary entry as raw data: a label and its movelets, each a
/// channels-by-n value grid.
pub type RawEntry = (ActivityLabel, Vec<Vec<Vec<f64>>>);

/// Mean over channels of the per-channel Euclidean distance.
fn raw_discrepancy(window: &[Vec<f64>], start: usize, movelet: &[Vec<f64>], n: usize) -> f64 {
    let channels = movelet.len();
    let mut total = 0.0;
    for c in 0..channels {
        let mut sum_sq = 0.0;
        for k in 0..n {
            let diff = window[c][start + k] - movelet[c][k];
            sum_sq += diff * diff;
        }
        total += sum_sq.sqrt();
    }
    total / channels as f64
}

/// Classify every sample of a multichannel series with the brute-force
/// path: scan all dictionary movelets per window (first strict minimum
/// wins), majority-vote over up to `vote_window` forward matches (ties to
/// the smallest summed discrepancy, then label order), and fill the final
/// `n - 1` samples with the last vote.
pub fn classify_channels(
    channels: &[Vec<f64>],
    dict: &[RawEntry],
    n: usize,
    vote_window: usize,
) -> Vec<ActivityLabel> {
    let len = channels[0].len();
    assert!(len >= n, "oracle needs at least n samples");
    let window_count = len - n + 1;

    // match every window
    let mut matched: Vec<(ActivityLabel, f64)> = Vec::with_capacity(window_count);
    for start in 0..window_count {
        let mut best: Option<(ActivityLabel, f64)> = None;
        for (label, movelets) in dict {
            for movelet in movelets {
                let d = raw_discrepancy(channels, start, movelet, n);
                match best {
                    Some((_, best_d)) if d >= best_d => {}
                    _ => best = Some((*label, d)),
                }
            }
        }
        matched.push(best.expect("non-empty dictionary"));
    }

    // forward majority vote per window index
    let mut votes: Vec<ActivityLabel> = Vec::with_capacity(window_count);
    for i in 0..window_count {
        let end = (i + vote_window).min(window_count);
        let voters = &matched[i..end];
        let mut winner: Option<ActivityLabel> = None;
        for &candidate in &ActivityLabel::DICTIONARY {
            let count = voters.iter().filter(|(l, _)| *l == candidate).count();
            if count == 0 {
                continue;
            }
            let sum: f64 = voters
                .iter()
                .filter(|(l, _)| *l == candidate)
                .map(|(_, d)| *d)
                .sum();
            let better = match winner {
                None => true,
                Some(current) => {
                    let current_count = voters.iter().filter(|(l, _)| *l == current).count();
                    let current_sum: f64 = voters
                        .iter()
                        .filter(|(l, _)| *l == current)
                        .map(|(_, d)| *d)
                        .sum();
                    count > current_count || (count == current_count && sum < current_sum)
                }
            };
            if better {
                winner = Some(candidate);
            }
        }
        votes.push(winner.expect("at least one voter"));
    }

    // per-sample labels with trailing fill
    let last = *votes.last().unwrap();
    (0..len)
        .map(|i| if i < window_count { votes[i] } else { last })
        .collect()
}

/// Value of the piecewise-linear function through `(ts, vals)` at `t`,
/// found by linear scan. Exact hits return the source value; interpolated
/// values are clamped to the bracketing pair.
pub fn interpolate_at(ts: &[f64], vals: &[f64], t: f64) -> f64 {
    assert!(t >= ts[0] && t <= ts[ts.len() - 1], "target out of range");
    for i in 0..ts.len() {
        if ts[i] == t {
            return vals[i];
        }
        if i + 1 < ts.len() && ts[i] < t && t < ts[i + 1] {
            let v = vals[i] + (vals[i + 1] - vals[i]) * (t - ts[i]) / (ts[i + 1] - ts[i]);
            let (lo, hi) = if vals[i] <= vals[i + 1] {
                (vals[i], vals[i + 1])
            } else {
                (vals[i + 1], vals[i])
            };
            return v.clamp(lo, hi);
        }
    }
    unreachable!("bracketing sample not found");
}

/// Clip accelerometer timestamps to the gyroscope span and build the six
/// synchronized channels (accel copied, gyro interpolated).
pub fn synchronize_channels(
    accel_ts: &[f64],
    accel: &[Vec<f64>; 3],
    gyro_ts: &[f64],
    gyro: &[Vec<f64>; 3],
) -> (Vec<f64>, Vec<Vec<f64>>) {
    let g_first = gyro_ts[0];
    let g_last = gyro_ts[gyro_ts.len() - 1];
    let mut kept_ts = Vec::new();
    let mut kept_idx = Vec::new();
    for (i, &t) in accel_ts.iter().enumerate() {
        if t >= g_first && t <= g_last {
            kept_ts.push(t);
            kept_idx.push(i);
        }
    }
    let mut channels: Vec<Vec<f64>> = vec![Vec::new(); 6];
    for (&t, &i) in kept_ts.iter().zip(&kept_idx) {
        for axis in 0..3 {
            channels[axis].push(accel[axis][i]);
            channels[3 + axis].push(interpolate_at(gyro_ts, &gyro[axis], t));
        }
    }
    (kept_ts, channels)
}

/// Nearest timestamp index, earlier side winning exact midpoints.
pub fn nearest_index(ts: &[f64], t: f64) -> usize {
    let mut best = 0;
    for (i, &candidate) in ts.iter().enumerate() {
        if (candidate - t).abs() < (ts[best] - t).abs() {
            best = i;
        }
    }
    best
}

/// Ground-truth label for `t` under half-open `[start, end)` intervals.
pub fn truth_at(
    intervals: &[(f64, f64, ActivityLabel)],
    t: f64,
) -> Option<ActivityLabel> {
    intervals
        .iter()
        .find(|&&(start, end, _)| start <= t && t < end)
        .map(|&(_, _, label)| label)
}

/// Brute-force dictionary construction: for each activity, the first
/// contiguous labeled run capped at `max_samples`, cut into n-sample
/// windows.
pub fn build_dictionary_channels(
    ts: &[f64],
    channels: &[Vec<f64>],
    intervals: &[(f64, f64, ActivityLabel)],
    activities: &[ActivityLabel],
    n: usize,
    max_samples: usize,
) -> Vec<RawEntry> {
    let labels: Vec<Option<ActivityLabel>> = ts.iter().map(|&t| truth_at(intervals, t)).collect();
    let mut entries = Vec::new();
    for &activity in activities {
        let mut start = None;
        for (i, l) in labels.iter().enumerate() {
            if *l == Some(activity) {
                start = Some(i);
                break;
            }
        }
        let start = start.expect("activity present in training labels");
        let mut end = start;
        while end < labels.len() && labels[end] == Some(activity) {
            end += 1;
        }
        if end - start > max_samples {
            end = start + max_samples;
        }
        let mut movelets = Vec::new();
        for w in start..=(end - n) {
            let movelet: Vec<Vec<f64>> = channels
                .iter()
                .map(|ch| ch[w..w + n].to_vec())
                .collect();
            movelets.push(movelet);
        }
        entries.push((activity, movelets));
    }
    entries
}
