use rand::Rng;
use serde::{Deserialize, Serialize};

use super::cloud::ParticleCloud;

/// Fallback evolution time when the two sampled particles coincide.
pub const T_CAP: f64 = 1e4;
const DISTANCE_FLOOR: f64 = 1e-9;

/// Probe and evolution time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub probe_id: usize,
    pub t: f64,
}

/// An experiment together with its measured bit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub probe_id: usize,
    pub t: f64,
    pub datum: u8,
}

impl ExperimentRecord {
    pub fn experiment(&self) -> Experiment {
        Experiment {
            probe_id: self.probe_id,
            t: self.t,
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Multi-particle guess heuristic: draws two distinct particles by weight
/// and returns the inverse of their distance, capped at `T_CAP`.
pub fn mpgh_time<R: Rng + ?Sized>(cloud: &ParticleCloud, rng: &mut R) -> f64 {
    let i = cloud.draw_index(rng);
    let mut j = i;
    for _ in 0..64 {
        j = cloud.draw_index(rng);
        if j != i {
            break;
        }
    }
    if j == i {
        // the weight sits almost entirely on one particle
        j = (i + 1 + rng.random_range(0..cloud.n_particles() - 1)) % cloud.n_particles();
    }
    let d = distance(cloud.position(i), cloud.position(j));
    if d < DISTANCE_FLOOR {
        T_CAP
    } else {
        (1.0 / d).min(T_CAP)
    }
}

/// Next experiment: MPGH time and the probe at position `step` of the
/// round-robin cycle.
pub fn design_experiment<R: Rng + ?Sized>(
    cloud: &ParticleCloud,
    step: usize,
    n_probes: usize,
    rng: &mut R,
) -> Experiment {
    Experiment {
        probe_id: step % n_probes,
        t: mpgh_time(cloud, rng),
    }
}
