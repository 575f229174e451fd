//! Club selection for a hole of unknown distance.

use super::{Domain, PerformanceFamily, SignalSpace};
use crate::error::{BprError, Result};
use crate::models::normal_cdf;
use crate::signal::{EpisodeOutcome, Signal};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, PartialEq)]
pub struct Club {
    pub name: &'static str,
    pub mean_yardage: f64,
    pub sd_yardage: f64,
}

pub const CLUBS: [Club; 4] = [
    Club {
        name: "3-wood",
        mean_yardage: 215.0,
        sd_yardage: 8.0,
    },
    Club {
        name: "3-iron",
        mean_yardage: 180.0,
        sd_yardage: 7.2,
    },
    Club {
        name: "6-iron",
        mean_yardage: 150.0,
        sd_yardage: 6.0,
    },
    Club {
        name: "9-iron",
        mean_yardage: 115.0,
        sd_yardage: 4.4,
    },
];

pub const TRAINING_HOLES: [f64; 4] = [110.0, 150.0, 170.0, 220.0];

/// Inner edges of the symmetric error bins, in yards.
pub const BIN_EDGES: [f64; 3] = [5.0, 20.0, 50.0];

pub const BIN_LABELS: [&str; 7] = [
    "<-50", "-50..-20", "-20..-5", "-5..5", "5..20", "20..50", ">50",
];

pub const DEFAULT_HORIZON: usize = 3;

/// Bin of a signed error (landing − hole): `|e| ≤ 5` is the centre bin,
/// then `(5, 20]`, `(20, 50]` and beyond 50 on either side.
pub fn error_bin(error: f64) -> usize {
    let ring = BIN_EDGES
        .iter()
        .take_while(|edge| error.abs() > **edge)
        .count();
    if error >= 0.0 {
        3 + ring
    } else {
        3 - ring
    }
}

pub fn bin_for_label(label: &str) -> Option<usize> {
    BIN_LABELS.iter().position(|l| *l == label)
}

#[derive(Debug, Clone)]
pub struct GolfDomain {
    pub clubs: Vec<Club>,
    pub training_holes: Vec<f64>,
    /// Online holes are drawn uniformly from this range.
    pub hole_range: (f64, f64),
}

impl Default for GolfDomain {
    fn default() -> Self {
        Self {
            clubs: CLUBS.to_vec(),
            training_holes: TRAINING_HOLES.to_vec(),
            hole_range: (120.0, 220.0),
        }
    }
}

impl GolfDomain {
    /// Outcome of a ball landing at `landing` yards on a hole at `hole` yards.
    pub fn shot_outcome(hole: f64, landing: f64) -> EpisodeOutcome {
        let error = landing - hole;
        EpisodeOutcome::new(Signal::CategoryBin(error_bin(error)), -error.abs())
    }
}

impl Domain for GolfDomain {
    type Task = f64;

    fn name(&self) -> &'static str {
        "golf"
    }

    fn signal_space(&self) -> SignalSpace {
        SignalSpace::Bins(BIN_LABELS.len())
    }

    fn performance_family(&self) -> PerformanceFamily {
        PerformanceFamily::Gaussian
    }

    fn type_tasks(&self) -> Vec<(String, f64)> {
        self.training_holes
            .iter()
            .map(|h| (format!("hole_{h}"), *h))
            .collect()
    }

    fn policy_names(&self) -> Vec<String> {
        self.clubs.iter().map(|c| c.name.to_string()).collect()
    }

    fn run_episode<R: Rng + ?Sized>(
        &self,
        hole: &f64,
        club: usize,
        rng: &mut R,
    ) -> Result<EpisodeOutcome> {
        let club = self
            .clubs
            .get(club)
            .ok_or_else(|| BprError::DomainFailure(format!("no club {club}")))?;
        let z: f64 = StandardNormal.sample(rng);
        Ok(Self::shot_outcome(
            *hole,
            club.mean_yardage + club.sd_yardage * z,
        ))
    }

    /// `−E|X|` for the folded landing error `X ~ N(mean − hole, sd²)`.
    fn exact_policy_values(&self, hole: &f64) -> Option<Vec<f64>> {
        Some(
            self.clubs
                .iter()
                .map(|c| {
                    let mu = c.mean_yardage - hole;
                    let sd = c.sd_yardage;
                    let folded = sd
                        * (2.0 / std::f64::consts::PI).sqrt()
                        * (-mu * mu / (2.0 * sd * sd)).exp()
                        + mu * (1.0 - 2.0 * normal_cdf(-mu / sd));
                    -folded
                })
                .collect(),
        )
    }

    fn sample_task<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random_range(self.hole_range.0..=self.hole_range.1)
    }

    fn utility_range(&self) -> (f64, f64) {
        (-150.0, 0.0)
    }

    fn describe_task(&self, hole: &f64) -> String {
        format!("hole {hole:.1} yd")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_match_category_labels() {
        assert_eq!(error_bin(1.0), bin_for_label("-5..5").unwrap());
        assert_eq!(error_bin(-5.0), 3);
        assert_eq!(error_bin(5.0), 3);
        assert_eq!(error_bin(13.1603), bin_for_label("5..20").unwrap());
        assert_eq!(error_bin(35.3657), bin_for_label("20..50").unwrap());
        assert_eq!(error_bin(-35.0), 1);
        assert_eq!(error_bin(-80.0), 0);
        assert_eq!(error_bin(80.0), 6);
    }

    #[test]
    fn zero_noise_shot() {
        let out = GolfDomain::shot_outcome(179.0, 180.0);
        assert_eq!(out.signal, Signal::CategoryBin(3));
        assert_eq!(out.utility, -1.0);
    }
}
