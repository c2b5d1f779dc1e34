//! Plot data aggregated over run ledgers.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};

use qmla_core::modelspace::{f1_score, TermLabel};
use qmla_core::orchestrator::{evaluate_run, labels_from_terms, Ledger, LedgerRecord, RunSummary};

pub const F1_BINS: usize = 10;

/// Decimal rendering with 12 significant digits.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-20..=20).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn ledger_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join("ledger.ndjson")
    } else {
        p.to_path_buf()
    }
}

pub fn load_ledger(p: &Path) -> Result<Ledger> {
    let path = ledger_path(p);
    let file = fs::File::open(&path).with_context(|| format!("reading {}", path.display()))?;
    Ledger::read_ndjson(BufReader::new(file)).with_context(|| format!("invalid ledger {}", path.display()))
}

struct Instance {
    ledger: Ledger,
    summary: RunSummary,
    truth: BTreeSet<TermLabel>,
}

fn model_labels(ledger: &Ledger) -> Result<BTreeMap<usize, BTreeSet<TermLabel>>> {
    let mut out = BTreeMap::new();
    for r in ledger.records() {
        if let LedgerRecord::Model { id, terms, .. } = r {
            out.insert(*id, labels_from_terms(terms)?);
        }
    }
    Ok(out)
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt12).unwrap_or_default()
}

type Row = Vec<String>;

fn write_csv(path: &Path, header: &str, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header.split(','))?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn success_rates(instances: &[Instance]) -> Vec<Row> {
    let mut groups: BTreeMap<&str, Vec<&RunSummary>> = BTreeMap::new();
    for i in instances {
        groups.entry(&i.summary.truth_key).or_default().push(&i.summary);
    }
    groups
        .into_iter()
        .map(|(truth, runs)| {
            let n = runs.len() as f64;
            let exact = runs.iter().filter(|r| r.exact_match).count();
            let fam: Vec<bool> = runs.iter().filter_map(|r| r.family_match).collect();
            let fam_hits = fam.iter().filter(|&&b| b).count();
            let mean_f1 = runs.iter().map(|r| r.metrics.f1).sum::<f64>() / n;
            vec![
                truth.to_string(),
                runs.len().to_string(),
                exact.to_string(),
                fmt12(exact as f64 / n),
                if fam.is_empty() { String::new() } else { fam_hits.to_string() },
                if fam.is_empty() { String::new() } else { fmt12(fam_hits as f64 / fam.len() as f64) },
                fmt12(mean_f1),
            ]
        })
        .collect()
}

fn ratings(instances: &[Instance]) -> Result<(Vec<Row>, Vec<Row>)> {
    let mut rows = Vec::new();
    let mut pool = Vec::new();
    for (n, inst) in instances.iter().enumerate() {
        let labels = model_labels(&inst.ledger)?;
        let f1_of = |id: usize| labels.get(&id).map_or(0.0, |l| f1_score(l, &inst.truth).f1);
        let mut generations: BTreeMap<(usize, usize), BTreeMap<String, (usize, f64)>> = BTreeMap::new();
        for r in inst.ledger.records() {
            if let LedgerRecord::Ratings {
                strategy,
                generation,
                model_id,
                chromosome,
                rating,
                fitness,
                selection_probability,
            } = r
            {
                let c = chromosome.as_ref().map(ToString::to_string).unwrap_or_default();
                let f1 = f1_of(*model_id);
                rows.push(vec![
                    n.to_string(),
                    strategy.to_string(),
                    generation.to_string(),
                    model_id.to_string(),
                    c.clone(),
                    opt(*rating),
                    fmt12(*fitness),
                    fmt12(*selection_probability),
                    fmt12(f1),
                ]);
                generations
                    .entry((*strategy, *generation))
                    .or_default()
                    .entry(c)
                    .or_insert((0, f1))
                    .0 += 1;
            }
        }
        for ((strategy, generation), counts) in generations {
            for (c, (count, f1)) in counts {
                pool.push(vec![
                    n.to_string(),
                    strategy.to_string(),
                    generation.to_string(),
                    c,
                    count.to_string(),
                    fmt12(f1),
                ]);
            }
        }
    }
    Ok((rows, pool))
}

fn f1_histogram(instances: &[Instance]) -> Vec<Row> {
    let mut counts = [0usize; F1_BINS];
    for i in instances {
        let bin = ((i.summary.metrics.f1 * F1_BINS as f64).floor() as usize).min(F1_BINS - 1);
        counts[bin] += 1;
    }
    let n = instances.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(b, &c)| {
            vec![
                fmt12(b as f64 / F1_BINS as f64),
                fmt12((b + 1) as f64 / F1_BINS as f64),
                c.to_string(),
                fmt12(c as f64 / n),
            ]
        })
        .collect()
}

fn term_frequency(instances: &[Instance]) -> Result<Vec<Row>> {
    let mut all = BTreeSet::new();
    for i in instances {
        all.extend(i.truth.iter().copied());
        for l in model_labels(&i.ledger)?.into_values() {
            all.extend(l);
        }
    }
    let n = instances.len() as f64;
    Ok(all
        .into_iter()
        .map(|label| {
            let in_truth = instances.iter().filter(|i| i.truth.contains(&label)).count();
            let found = instances
                .iter()
                .filter(|i| i.summary.champion_labels.contains(&label))
                .count();
            vec![label.to_string(), fmt12(in_truth as f64 / n), fmt12(found as f64 / n)]
        })
        .collect())
}

/// Reads every ledger and writes the five CSV files into `out`.
pub fn report(paths: &[PathBuf], out: &Path) -> Result<()> {
    ensure!(!paths.is_empty(), "no ledgers given");
    let mut instances = Vec::new();
    for p in paths {
        let ledger = load_ledger(p)?;
        let summary = evaluate_run(&ledger).with_context(|| format!("evaluating {}", p.display()))?;
        let truth = summary.truth_labels.iter().copied().collect();
        instances.push(Instance { ledger, summary, truth });
    }
    fs::create_dir_all(out)?;
    write_csv(
        &out.join("success_rates.csv"),
        "truth_key,instances,exact_matches,success_rate,family_matches,family_rate,mean_f1",
        &success_rates(&instances),
    )?;
    let (rating_rows, pool_rows) = ratings(&instances)?;
    write_csv(
        &out.join("ratings.csv"),
        "instance,strategy,generation,model_id,chromosome,rating,fitness,selection_probability,f1",
        &rating_rows,
    )?;
    write_csv(
        &out.join("gene_pool.csv"),
        "instance,strategy,generation,chromosome,count,f1",
        &pool_rows,
    )?;
    write_csv(&out.join("f1_hist.csv"), "bin_lower,bin_upper,count,fraction", &f1_histogram(&instances))?;
    write_csv(
        &out.join("term_frequency.csv"),
        "term,truth_fraction,champion_frequency",
        &term_frequency(&instances)?,
    )?;
    Ok(())
}
