//! Genetic-algorithm operators over chromosomes.

use std::collections::BTreeSet;

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::comparison::ComparisonStrategy;
use crate::error::{QmlaError, Result};
use crate::modelspace::Chromosome;
use crate::objectives::{normalise, truncation_count, Objective};

const MAX_REMUTATIONS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaConfig {
    #[serde(default = "default_n_models")]
    pub n_models: usize,
    #[serde(default = "default_n_generations")]
    pub n_generations: usize,
    #[serde(default = "default_mutation")]
    pub mutation_prob: f64,
    #[serde(default = "default_truncation")]
    pub truncation_fraction: f64,
    #[serde(default = "default_elites")]
    pub elite_count: usize,
    #[serde(default = "default_stagnation")]
    pub stagnation_window: usize,
    #[serde(default)]
    pub objective: Objective,
    #[serde(default)]
    pub comparison: ComparisonStrategy,
}

fn default_n_models() -> usize {
    12
}
fn default_n_generations() -> usize {
    16
}
fn default_mutation() -> f64 {
    0.25
}
fn default_truncation() -> f64 {
    1.0 / 3.0
}
fn default_elites() -> usize {
    2
}
fn default_stagnation() -> usize {
    5
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            n_models: default_n_models(),
            n_generations: default_n_generations(),
            mutation_prob: default_mutation(),
            truncation_fraction: default_truncation(),
            elite_count: default_elites(),
            stagnation_window: default_stagnation(),
            objective: Objective::default(),
            comparison: ComparisonStrategy::default(),
        }
    }
}

impl GaConfig {
    pub fn validate(&self, n_genes: usize) -> Result<()> {
        if self.n_models < 2 || !self.n_models.is_multiple_of(2) {
            return Err(QmlaError::Config(format!("n_models must be even and >= 2, got {}", self.n_models)));
        }
        if n_genes < 64 && (1u64 << n_genes) - 1 < self.n_models as u64 {
            return Err(QmlaError::Config(format!(
                "{n_genes} genes cannot hold {} distinct nonzero chromosomes",
                self.n_models
            )));
        }
        if self.n_generations == 0 {
            return Err(QmlaError::Config("n_generations must be positive".into()));
        }
        if !(self.truncation_fraction > 0.0 && self.truncation_fraction <= 1.0) {
            return Err(QmlaError::Config(format!(
                "truncation_fraction {} outside (0, 1]",
                self.truncation_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(QmlaError::Config(format!("mutation_prob {} outside [0, 1]", self.mutation_prob)));
        }
        if self.elite_count > self.n_models {
            return Err(QmlaError::Config("elite_count exceeds n_models".into()));
        }
        if self.stagnation_window == 0 {
            return Err(QmlaError::Config("stagnation_window must be positive".into()));
        }
        Ok(())
    }

    pub fn survivors(&self) -> usize {
        truncation_count(self.n_models, self.truncation_fraction)
    }
}

/// Unordered pair `i ≠ j` drawn with probability `∝ s_i s_j`. With fewer
/// than two nonzero entries the pair is uniform over all indices.
pub fn roulette_select_pair<R: Rng + ?Sized>(s: &[f64], rng: &mut R) -> Result<(usize, usize)> {
    let n = s.len();
    if n < 2 {
        return Err(QmlaError::Config("roulette selection needs two candidates".into()));
    }
    let nonzero = s.iter().filter(|&&x| x > 0.0).count();
    if nonzero < 2 {
        let i = rng.random_range(0..n);
        let j = (i + 1 + rng.random_range(0..n - 1)) % n;
        return Ok((i.min(j), i.max(j)));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let weights: Vec<f64> = pairs.iter().map(|&(i, j)| s[i].max(0.0) * s[j].max(0.0)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| QmlaError::Config(e.to_string()))?;
    Ok(pairs[dist.sample(rng)])
}

/// Crossover point drawn uniformly from the integers strictly inside
/// `(n/4, 3n/4)`; `n/2` for short chromosomes.
pub fn crossover_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    if n < 4 {
        return n / 2;
    }
    let lo = n / 4 + 1;
    let hi = (3 * n).div_ceil(4) - 1;
    rng.random_range(lo..=hi)
}

pub fn crossover_at(pa: &Chromosome, pb: &Chromosome, kappa: usize) -> Result<(Chromosome, Chromosome)> {
    if pa.len() != pb.len() {
        return Err(QmlaError::ChromosomeLength {
            expected: pa.len(),
            found: pb.len(),
        });
    }
    let (a, b) = (pa.bits(), pb.bits());
    let ca = a[..kappa].iter().chain(&b[kappa..]).copied().collect();
    let cb = b[..kappa].iter().chain(&a[kappa..]).copied().collect();
    Ok((Chromosome::new(ca), Chromosome::new(cb)))
}

/// One-point crossover at a random point.
pub fn crossover<R: Rng + ?Sized>(pa: &Chromosome, pb: &Chromosome, rng: &mut R) -> Result<(Chromosome, Chromosome)> {
    let kappa = crossover_point(pa.len(), rng);
    crossover_at(pa, pb, kappa)
}

/// Flips each gene independently with probability `p`.
pub fn mutate<R: Rng + ?Sized>(c: &Chromosome, p: f64, rng: &mut R) -> Chromosome {
    let mut out = c.clone();
    for b in out.bits_mut() {
        if rng.random::<f64>() < p {
            *b = !*b;
        }
    }
    out
}

/// Next generation from the current one and its fitnesses.
///
/// The `elite_count` fittest chromosomes carry over; the rest are children
/// of parents drawn from the fittest `survivors()` by roulette selection.
/// Ties in fitness keep input order. All chromosomes returned are distinct
/// and nonzero.
pub fn ga_generate<R: Rng + ?Sized>(
    current: &[(Chromosome, f64)],
    config: &GaConfig,
    rng: &mut R,
) -> Result<Vec<Chromosome>> {
    if current.len() < 2 {
        return Err(QmlaError::Config("generation needs at least two models".into()));
    }
    let n_genes = current[0].0.len();
    config.validate(n_genes)?;
    let mut order: Vec<usize> = (0..current.len()).collect();
    order.sort_by(|&a, &b| current[b].1.total_cmp(&current[a].1));

    let mut next: Vec<Chromosome> = Vec::with_capacity(config.n_models);
    let mut seen = BTreeSet::new();
    for &i in order.iter().take(config.elite_count) {
        if seen.insert(current[i].0.clone()) {
            next.push(current[i].0.clone());
        }
    }

    let keep = config.survivors().min(current.len());
    let parents: Vec<&Chromosome> = order[..keep].iter().map(|&i| &current[i].0).collect();
    let s = normalise(&order[..keep].iter().map(|&i| current[i].1).collect::<Vec<_>>());

    while next.len() < config.n_models {
        let (a, b) = roulette_select_pair(&s, rng)?;
        let (ca, cb) = crossover(parents[a], parents[b], rng)?;
        for child in [ca, cb] {
            if next.len() == config.n_models {
                break;
            }
            let mut c = mutate(&child, config.mutation_prob, rng);
            let mut tries = 0;
            while (c.is_zero() || seen.contains(&c)) && tries < MAX_REMUTATIONS {
                c = mutate(&child, config.mutation_prob.max(1.0 / n_genes as f64), rng);
                tries += 1;
            }
            while c.is_zero() || seen.contains(&c) {
                c = Chromosome::random_nonzero(n_genes, rng);
            }
            seen.insert(c.clone());
            next.push(c);
        }
    }
    Ok(next)
}

/// `N_m` distinct random nonzero chromosomes.
pub fn initial_generation<R: Rng + ?Sized>(n_genes: usize, config: &GaConfig, rng: &mut R) -> Result<Vec<Chromosome>> {
    config.validate(n_genes)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(config.n_models);
    while out.len() < config.n_models {
        let c = Chromosome::random_nonzero(n_genes, rng);
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Stop once the same champion has led `stagnation_window` generations in a
/// row, or `generation` (1-based) has reached `n_generations`.
pub fn ga_terminate<T: PartialEq>(champions: &[T], generation: usize, config: &GaConfig) -> bool {
    if generation >= config.n_generations {
        return true;
    }
    let w = config.stagnation_window;
    champions.len() >= w && champions[champions.len() - w..].windows(2).all(|p| p[0] == p[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn c(s: &str) -> Chromosome {
        s.parse().unwrap()
    }

    #[test]
    fn block_crossover() {
        let (a, b) = crossover_at(&c("111111"), &c("000000"), 3).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("111000".into(), "000111".into()));
    }

    #[test]
    fn crossover_points_in_open_interval() {
        let mut rng = stream(0, &[]);
        for n in 4..40 {
            for _ in 0..200 {
                let k = crossover_point(n, &mut rng);
                assert!(4 * k > n && 4 * k < 3 * n, "n={n} k={k}");
            }
        }
        assert_eq!(crossover_point(3, &mut rng), 1);
    }

    #[test]
    fn equal_parents_reproduce() {
        let p = c("0110101");
        let mut rng = stream(1, &[]);
        let (a, b) = crossover(&p, &p, &mut rng).unwrap();
        assert_eq!((a, b), (p.clone(), p));
    }

    #[test]
    fn mutation_extremes() {
        let x = c("0110");
        let mut rng = stream(2, &[]);
        assert_eq!(mutate(&x, 0.0, &mut rng), x);
        assert_eq!(mutate(&x, 1.0, &mut rng), c("1001"));
    }

    #[test]
    fn degenerate_roulette_falls_back() {
        let mut rng = stream(3, &[]);
        for _ in 0..1000 {
            let (i, j) = roulette_select_pair(&[1.0, 0.0, 0.0, 0.0], &mut rng).unwrap();
            assert!(i < j && j < 4);
        }
    }

    #[test]
    fn generation_contract() {
        let config = GaConfig {
            n_models: 12,
            ..GaConfig::default()
        };
        let mut rng = stream(4, &[]);
        let gen0 = initial_generation(9, &config, &mut rng).unwrap();
        let scored: Vec<(Chromosome, f64)> = gen0.iter().cloned().zip((0..12).map(|i| i as f64)).collect();
        let next = ga_generate(&scored, &config, &mut rng).unwrap();
        assert_eq!(next.len(), 12);
        assert_eq!(next.iter().collect::<BTreeSet<_>>().len(), 12);
        assert!(next.iter().all(|c| !c.is_zero() && c.len() == 9));
        assert!(next.contains(&gen0[11]) && next.contains(&gen0[10]));
    }

    #[test]
    fn sixty_model_survivors() {
        let config = GaConfig {
            n_models: 60,
            ..GaConfig::default()
        };
        assert_eq!(config.survivors(), 20);
    }

    #[test]
    fn termination() {
        let config = GaConfig {
            n_generations: 10,
            ..GaConfig::default()
        };
        assert!(ga_terminate(&["A"; 5], 5, &config));
        assert!(!ga_terminate(&["A", "B", "A", "B", "A"], 5, &config));
        assert!(ga_terminate(&["A", "B"], 10, &config));
        assert!(!ga_terminate(&["A"; 4], 4, &config));
    }

    #[test]
    fn rejects_bad_configs() {
        let odd = GaConfig {
            n_models: 7,
            ..GaConfig::default()
        };
        assert!(odd.validate(9).is_err());
        assert!(GaConfig::default().validate(3).is_err());
    }
}
