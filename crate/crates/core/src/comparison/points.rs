use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bayes::ComparisonRecord;

/// Points tally of one model within a branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standing {
    pub id: usize,
    pub points: usize,
    pub log_bf_sum: f64,
}

/// One point for every comparison a model wins (`B > 1`). Returned in the
/// order of `ids`.
pub fn bf_points(ids: &[usize], records: &[ComparisonRecord]) -> Vec<Standing> {
    let mut table: BTreeMap<usize, Standing> = ids
        .iter()
        .map(|&id| (id, Standing { id, points: 0, log_bf_sum: 0.0 }))
        .collect();
    for r in records {
        if let Some(w) = r.winner() {
            if let Some(s) = table.get_mut(&w) {
                s.points += 1;
            }
        }
        if let Some(s) = table.get_mut(&r.i) {
            s.log_bf_sum += r.log_bf;
        }
        if let Some(s) = table.get_mut(&r.j) {
            s.log_bf_sum -= r.log_bf;
        }
    }
    ids.iter().map(|id| table[id].clone()).collect()
}

/// Best standing: most points, then larger `Σ log B`, then lower id.
pub fn champion(standings: &[Standing]) -> Option<usize> {
    standings
        .iter()
        .min_by(|a, b| {
            b.points
                .cmp(&a.points)
                .then(b.log_bf_sum.total_cmp(&a.log_bf_sum))
                .then(a.id.cmp(&b.id))
        })
        .map(|s| s.id)
}
