//! Seeded invariant checks shared by the property suite and the acceptance
//! run. Each returns a description of the first violation found.

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmla_core::comparison::ComparisonStrategy;
use qmla_core::exploration::{
    crossover, crossover_point, mutate, roulette_select_pair, StrategyConfig,
};
use qmla_core::hamiltonian::{likelihood_p0, Axis, Family, LatticeSpec, StateVector};
use qmla_core::modelspace::{Chromosome, Model, Term, TermLabel};
use qmla_core::objectives::{g_rank, normalise, EloState};
use qmla_core::orchestrator::{run_qmla, Engine, Location, RunConfig, TruthSpec};
use qmla_core::qhl::{bayes_update, particle_likelihood, ParticleCloud, QhlConfig};

use super::{from_dense, random_hermitian};

pub type Check = Result<(), String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn elo_zero_sum(seed: u64) -> Check {
    let mut r = rng(seed);
    let mut elo = EloState::new(0..8, 1000.0);
    for _ in 0..60 {
        let i = r.random_range(0..8);
        let j = (i + r.random_range(1..8)) % 8;
        let before = elo.rating(i).unwrap() + elo.rating(j).unwrap();
        elo.apply(i, j, r.random_range(-400.0..400.0));
        let after = elo.rating(i).unwrap() + elo.rating(j).unwrap();
        if (before - after).abs() > 1e-9 {
            return Err(format!("pair sum moved by {:e}", after - before));
        }
    }
    if (elo.total() - 8000.0).abs() > 1e-9 {
        return Err(format!("total {}", elo.total()));
    }
    Ok(())
}

fn field(axis: Axis) -> Model {
    Model::new(vec![Term::single(TermLabel::field(axis, 1))], 1).unwrap()
}

/// Swapping the arguments of a comparison negates `log B` exactly.
pub fn bf_antisymmetry(seed: u64) -> Check {
    let strategy = StrategyConfig::FixedSet {
        family: Family::Ising,
        lattices: vec![LatticeSpec::chain(2).unwrap()],
        comparison: ComparisonStrategy::default(),
        qhl: None,
    };
    let truth = TruthSpec::Terms {
        terms: field(Axis::Z).terms().to_vec(),
        n_qubits: 1,
        parameters: None,
    };
    let mut config = RunConfig::new(seed, truth, vec![strategy]);
    config.qhl = QhlConfig::new(20, 100);
    config.validation.n_experiments = 20;
    let mut engine = Engine::new(config).map_err(|e| e.to_string())?;
    let loc = Location {
        strategy: 0,
        tree: "t".into(),
        branch: 0,
    };
    let ids: Vec<usize> = [Axis::X, Axis::Y, Axis::Z]
        .into_iter()
        .map(|a| engine.register(field(a), None, loc.clone(), None))
        .collect();
    engine.train_models(&ids).map_err(|e| e.to_string())?;
    for s in [
        ComparisonStrategy::Union,
        ComparisonStrategy::BurnIn,
        ComparisonStrategy::Validation,
    ] {
        let fwd = engine
            .compare(&[(ids[0], ids[2]), (ids[1], ids[2])], s, &loc)
            .map_err(|e| e.to_string())?;
        let back = engine
            .compare(&[(ids[2], ids[0]), (ids[2], ids[1])], s, &loc)
            .map_err(|e| e.to_string())?;
        for (f, b) in fwd.iter().zip(&back) {
            if f.log_bf != -b.log_bf || f.tll_i != b.tll_j {
                return Err(format!("{s}: {} vs {}", f.log_bf, b.log_bf));
            }
        }
    }
    Ok(())
}

pub fn weight_normalisation(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.random_range(2..200);
    let positions: Vec<f64> = (0..2 * n).map(|_| r.random()).collect();
    let weights: Vec<f64> = (0..n).map(|_| r.random::<f64>() + 1e-3).collect();
    let mut cloud = ParticleCloud::new(2, positions, weights).map_err(|e| e.to_string())?;
    for _ in 0..20 {
        let p0: Vec<f64> = (0..n).map(|_| r.random_range(0.01..0.99)).collect();
        let datum = r.random_range(0..2u8);
        let le = bayes_update(&mut cloud, datum, &p0).map_err(|e| e.to_string())?;
        let sum: f64 = cloud.weights().iter().sum();
        if (sum - 1.0).abs() > 1e-12 || cloud.weights().iter().any(|w| *w < 0.0) {
            return Err(format!("weights sum {sum}"));
        }
        if !(0.0..=1.0).contains(&le) {
            return Err(format!("L_e = {le}"));
        }
        if cloud.should_resample() {
            cloud.resample(0.98, &mut r).map_err(|e| e.to_string())?;
            let sum: f64 = cloud.weights().iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(format!("resampled weights sum {sum}"));
            }
        }
    }
    let g: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
    let s: f64 = normalise(&g).iter().sum();
    if (s - 1.0).abs() > 1e-12 {
        return Err(format!("normalised fitness sums to {s}"));
    }
    Ok(())
}

pub fn likelihood_bounds(seed: u64) -> Check {
    let mut r = rng(seed);
    let dim = [2, 4, 8][r.random_range(0..3)];
    let h = from_dense(&random_hermitian(dim, &mut r));
    let psi = StateVector::normalised(
        (0..dim)
            .map(|_| C::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    for _ in 0..20 {
        let t = r.random_range(0.0..100.0);
        let p = likelihood_p0(&h, t, &psi).map_err(|e| e.to_string())?;
        if !(-1e-12..=1.0 + 1e-12).contains(&p) {
            return Err(format!("p0 = {p} at t = {t}"));
        }
        for d in [0, 1] {
            let l = particle_likelihood(p.clamp(0.0, 1.0), d);
            if !(0.0..=1.0).contains(&l) {
                return Err(format!("likelihood {l}"));
            }
        }
    }
    Ok(())
}

pub fn crossover_provenance(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.random_range(4..40);
    let a = Chromosome::random(n, &mut r);
    let b = Chromosome::random(n, &mut r);
    let (ca, cb) = crossover(&a, &b, &mut r).map_err(|e| e.to_string())?;
    if ca.len() != n || cb.len() != n {
        return Err("length changed".into());
    }
    let from = |c: &Chromosome, first: &Chromosome, second: &Chromosome| {
        (n / 4 + 1..=(3 * n).div_ceil(4) - 1)
            .any(|k| c.bits()[..k] == first.bits()[..k] && c.bits()[k..] == second.bits()[k..])
    };
    if !from(&ca, &a, &b) || !from(&cb, &b, &a) {
        return Err(format!("{a} x {b} gave {ca}, {cb}"));
    }
    for _ in 0..50 {
        let k = crossover_point(n, &mut r);
        if k <= n / 4 || 4 * k >= 3 * n {
            return Err(format!("crossover point {k} for n = {n}"));
        }
    }
    Ok(())
}

/// Total flips over many mutations stay within five standard deviations of
/// the binomial mean.
pub fn mutation_binomial(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = 18;
    for p in [0.05, 0.25, 0.5] {
        let trials = 2000;
        let mut flips = 0usize;
        for _ in 0..trials {
            let c = Chromosome::random(n, &mut r);
            let m = mutate(&c, p, &mut r);
            flips += c
                .bits()
                .iter()
                .zip(m.bits())
                .filter(|(x, y)| x != y)
                .count();
        }
        let total = (n * trials) as f64;
        let z = (flips as f64 - total * p) / (total * p * (1.0 - p)).sqrt();
        if z.abs() > 5.0 {
            return Err(format!("p = {p}: z = {z:.2}"));
        }
    }
    Ok(())
}

/// Pearson chi-square of roulette pairs against weights `s_i s_j`, tested
/// at the 1e-4 level through the Wilson-Hilferty approximation.
pub fn roulette_chi_square(seed: u64) -> Check {
    let mut r = rng(seed);
    let m = r.random_range(3..7);
    let s = normalise(
        &(0..m)
            .map(|_| r.random_range(0.05..1.0))
            .collect::<Vec<_>>(),
    );
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let w: Vec<f64> = pairs.iter().map(|&(i, j)| s[i] * s[j]).collect();
    let wt: f64 = w.iter().sum();
    let draws = 20_000;
    let mut counts = vec![0usize; pairs.len()];
    for _ in 0..draws {
        let p = roulette_select_pair(&s, &mut r).map_err(|e| e.to_string())?;
        let k = pairs
            .iter()
            .position(|q| *q == p)
            .ok_or(format!("invalid pair {p:?}"))?;
        counts[k] += 1;
    }
    let chi: f64 = counts
        .iter()
        .zip(&w)
        .map(|(&c, &wi)| {
            let e = draws as f64 * wi / wt;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let df = (pairs.len() - 1) as f64;
    let z = 3.719;
    let critical = df * (1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt()).powi(3);
    if chi > critical {
        return Err(format!("chi-square {chi:.2} > {critical:.2} (df {df})"));
    }
    Ok(())
}

pub fn g_rank_normalisation(seed: u64) -> Check {
    let keep = 1 + (seed % 100) as usize;
    let g: Vec<f64> = (1..=keep).map(|r| g_rank(r, keep)).collect();
    let sum: f64 = g.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(format!("keep {keep}: sum {sum}"));
    }
    if g.windows(2).any(|w| w[0] <= w[1]) {
        return Err(format!("keep {keep}: not strictly decreasing"));
    }
    if g_rank(keep + 1, keep) != 0.0 {
        return Err("truncated rank scored".into());
    }
    Ok(())
}

/// Small three-lattice Ising search.
pub fn small_search(seed: u64) -> RunConfig {
    let lattices = vec![
        LatticeSpec::chain(2).unwrap(),
        LatticeSpec::chain(3).unwrap(),
        LatticeSpec::ring(3).unwrap(),
    ];
    let mut c = RunConfig::new(
        seed,
        TruthSpec::Family {
            family: Family::Ising,
            lattice: LatticeSpec::chain(3).unwrap(),
            parameters: None,
        },
        vec![StrategyConfig::FixedSet {
            family: Family::Ising,
            lattices,
            comparison: ComparisonStrategy::default(),
            qhl: None,
        }],
    );
    c.qhl = QhlConfig::new(30, 150);
    c.validation.n_experiments = 30;
    c
}

pub fn determinism_replay(seed: u64) -> Check {
    let a = run_qmla(small_search(seed)).map_err(|e| e.to_string())?;
    let mut config = small_search(seed);
    config.workers = Some(2);
    let b = run_qmla(config).map_err(|e| e.to_string())?;
    let strip = |l: &qmla_core::orchestrator::Ledger| {
        l.deterministic()
            .into_iter()
            .filter(|r| !matches!(r, qmla_core::orchestrator::LedgerRecord::RunStart { .. }))
            .map(|r| serde_json::to_string(r).unwrap())
            .collect::<Vec<_>>()
    };
    if strip(&a.ledger) != strip(&b.ledger) || a.champion_id != b.champion_id {
        return Err("ledgers differ between replays".into());
    }
    Ok(())
}
