use crate::BenchError;

/// Shifted geometric mean with shift 10, in log space so long vectors of
/// large times cannot overflow the product. Entries are capped at
/// `max_time`, the value assigned to unsolved instances.
pub fn sgm10(times: &[f64], max_time: f64) -> Result<f64, BenchError> {
    if times.is_empty() {
        return Err(BenchError::EmptyTimes);
    }
    let log_sum: f64 = times
        .iter()
        .map(|t| (t.clamp(0.0, max_time) + 10.0).ln())
        .sum();
    Ok((log_sum / times.len() as f64).exp() - 10.0)
}
