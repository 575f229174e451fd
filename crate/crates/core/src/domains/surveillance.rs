//! Drone surveillance of a reserve: find which of 68 locations poachers occupy.

use super::{Domain, PerformanceFamily, SignalSpace};
use crate::error::{BprError, Result};
use crate::signal::{EpisodeOutcome, Signal};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const GRID: i32 = 26;
pub const HILLTOPS: [(i32, i32); 4] = [(6, 6), (6, 19), (19, 6), (19, 19)];
pub const LOCATIONS_PER_HILL: usize = 16;
pub const RING_RADII: (i32, i32) = (3, 5);
pub const DEFAULT_MAP_SEED: u64 = 9;
pub const DEFAULT_HORIZON: usize = 50;

pub const HILLTOP_RANGE: i32 = 15;
pub const LOCAL_RANGE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub fn chebyshev(self, other: Cell) -> i32 {
        (self.row - other.row)
            .abs()
            .max((self.col - other.col).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub cell: Cell,
    pub hilltop: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveillanceMap {
    pub base: Cell,
    pub locations: Vec<Location>,
}

/// Four hilltops, each followed by 16 locations drawn from the ring of
/// Chebyshev radius 3–5 around it.
pub fn generate_surveillance_map(seed: u64) -> SurveillanceMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut locations = Vec::with_capacity(HILLTOPS.len() * (LOCATIONS_PER_HILL + 1));
    for (r, c) in HILLTOPS {
        let top = Cell { row: r, col: c };
        locations.push(Location {
            cell: top,
            hilltop: true,
        });
        let mut ring: Vec<Cell> = (-RING_RADII.1..=RING_RADII.1)
            .flat_map(|dr| (-RING_RADII.1..=RING_RADII.1).map(move |dc| (dr, dc)))
            .map(|(dr, dc)| Cell {
                row: r + dr,
                col: c + dc,
            })
            .filter(|cell| (RING_RADII.0..=RING_RADII.1).contains(&cell.chebyshev(top)))
            .collect();
        ring.shuffle(&mut rng);
        let mut chosen: Vec<Cell> = ring.into_iter().take(LOCATIONS_PER_HILL).collect();
        chosen.sort_by_key(|cell| (cell.row, cell.col));
        locations.extend(chosen.into_iter().map(|cell| Location {
            cell,
            hilltop: false,
        }));
    }
    SurveillanceMap {
        base: Cell { row: 0, col: 0 },
        locations,
    }
}

#[derive(Debug, Clone)]
pub struct SurveillanceDomain {
    pub map: SurveillanceMap,
    pub noise_mean: f64,
    pub noise_sd: f64,
}

impl SurveillanceDomain {
    pub fn new(map_seed: u64) -> Self {
        Self {
            map: generate_surveillance_map(map_seed),
            noise_mean: 10.0,
            noise_sd: 20.0,
        }
    }

    pub fn n_locations(&self) -> usize {
        self.map.locations.len()
    }

    pub fn distance(&self, poacher: usize, surveyed: usize) -> i32 {
        self.map.locations[poacher]
            .cell
            .chebyshev(self.map.locations[surveyed].cell)
    }

    /// Noise-free part of the signal.
    pub fn detection_strength(&self, poacher: usize, surveyed: usize) -> f64 {
        let d = self.distance(poacher, surveyed);
        if self.map.locations[surveyed].hilltop && d <= HILLTOP_RANGE {
            200.0 - 30.0 * d as f64
        } else if !self.map.locations[surveyed].hilltop && d <= LOCAL_RANGE {
            200.0 - 20.0 * d as f64
        } else {
            0.0
        }
    }

    pub fn expected_signal(&self, poacher: usize, surveyed: usize) -> f64 {
        self.detection_strength(poacher, surveyed) + self.noise_mean
    }
}

impl Default for SurveillanceDomain {
    fn default() -> Self {
        Self::new(DEFAULT_MAP_SEED)
    }
}

impl Domain for SurveillanceDomain {
    /// Index of the poacher's location.
    type Task = usize;

    fn name(&self) -> &'static str {
        "surveillance"
    }

    fn signal_space(&self) -> SignalSpace {
        SignalSpace::Scalar
    }

    fn performance_family(&self) -> PerformanceFamily {
        PerformanceFamily::Gaussian
    }

    fn type_tasks(&self) -> Vec<(String, usize)> {
        (0..self.n_locations())
            .map(|i| (self.location_name(i), i))
            .collect()
    }

    fn policy_names(&self) -> Vec<String> {
        (0..self.n_locations())
            .map(|i| format!("survey_{}", self.location_name(i)))
            .collect()
    }

    fn run_episode<R: Rng + ?Sized>(
        &self,
        poacher: &usize,
        surveyed: usize,
        rng: &mut R,
    ) -> Result<EpisodeOutcome> {
        let n = self.n_locations();
        if *poacher >= n || surveyed >= n {
            return Err(BprError::DomainFailure(format!(
                "location {poacher}/{surveyed} outside 0..{n}"
            )));
        }
        let psi = Normal::new(self.noise_mean, self.noise_sd)
            .expect("valid noise")
            .sample(rng);
        let r = self.detection_strength(*poacher, surveyed) + psi;
        Ok(EpisodeOutcome::new(Signal::ScalarReal(r), r))
    }

    fn exact_policy_values(&self, poacher: &usize) -> Option<Vec<f64>> {
        Some(
            (0..self.n_locations())
                .map(|s| self.expected_signal(*poacher, s))
                .collect(),
        )
    }

    fn sample_task<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(0..self.n_locations())
    }

    fn utility_range(&self) -> (f64, f64) {
        let lowest = 200.0 - 30.0 * HILLTOP_RANGE as f64 + self.noise_mean;
        let highest = 200.0 + self.noise_mean;
        (lowest - 3.0 * self.noise_sd, highest + 3.0 * self.noise_sd)
    }

    fn describe_task(&self, poacher: &usize) -> String {
        format!("poachers at {}", self.location_name(*poacher))
    }
}

impl SurveillanceDomain {
    fn location_name(&self, i: usize) -> String {
        let loc = self.map.locations[i];
        let tag = if loc.hilltop { "hill" } else { "loc" };
        format!("{tag}_{}_{}", loc.cell.row, loc.cell.col)
    }
}
