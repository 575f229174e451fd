use crate::error::{BprError, Result};

/// Gap between the best library policy in hindsight and the chosen one.
pub fn library_regret(best_utility: f64, chosen_utility: f64) -> f64 {
    best_utility - chosen_utility
}

/// Mean of per-episode library regrets.
pub fn average_library_regret(per_episode: &[f64]) -> Result<f64> {
    if per_episode.is_empty() {
        return Err(BprError::EmptySequence);
    }
    Ok(per_episode.iter().sum::<f64>() / per_episode.len() as f64)
}

/// Whether two tasks are within `eps` of each other under every library policy.
pub fn epsilon_equivalent(utilities_i: &[f64], utilities_j: &[f64], eps: f64) -> Result<bool> {
    if utilities_i.len() != utilities_j.len() {
        return Err(BprError::DimensionMismatch {
            expected: utilities_i.len(),
            actual: utilities_j.len(),
        });
    }
    if !(eps >= 0.0) {
        return Err(BprError::InvalidArgument(format!(
            "eps must be >= 0, got {eps}"
        )));
    }
    let gap = utilities_i
        .iter()
        .zip(utilities_j)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(gap <= eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regret_examples() {
        assert_eq!(library_regret(10.0, 10.0), 0.0);
        assert_eq!(library_regret(10.0, 7.0), 3.0);
        assert_eq!(library_regret(-5.0, -9.0), 4.0);
    }

    #[test]
    fn average_examples() {
        assert_eq!(average_library_regret(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(average_library_regret(&[3.0, 1.0]).unwrap(), 2.0);
        assert_eq!(average_library_regret(&[4.0]).unwrap(), 4.0);
        assert!(matches!(
            average_library_regret(&[]),
            Err(BprError::EmptySequence)
        ));
    }

    #[test]
    fn epsilon_equivalence_examples() {
        assert!(epsilon_equivalent(&[1.0, 2.0], &[1.0, 2.0], 0.0).unwrap());
        assert!(!epsilon_equivalent(&[0.0, 1.0], &[0.0, 1.5], 0.4).unwrap());
        assert!(epsilon_equivalent(&[0.0, 1.0], &[0.3, 0.8], 0.3).unwrap());
        assert!(matches!(
            epsilon_equivalent(&[0.0], &[0.0, 1.0], 0.1),
            Err(BprError::DimensionMismatch { .. })
        ));
    }
}
