//! Crowding-distance survival.

use rand_chacha::ChaCha8Rng;

use super::{split_fronts, Survival};
use crate::ranking::{crowding_distance, FrontPartition};

pub struct CrowdingSurvival;

impl Survival for CrowdingSurvival {
    fn parent_scores(&self, objectives: &[&[f64]], partition: &FrontPartition) -> Vec<f64> {
        let mut scores = vec![0.0; objectives.len()];
        for front in &partition.fronts {
            let pts: Vec<&[f64]> = front.iter().map(|&i| objectives[i]).collect();
            for (&i, d) in front.iter().zip(crowding_distance(&pts)) {
                scores[i] = d;
            }
        }
        scores
    }

    fn truncate(&self, pool: &[&[f64]], partition: &FrontPartition, n: usize, _rng: &mut ChaCha8Rng) -> Vec<usize> {
        let (mut chosen, critical) = split_fronts(partition, n);
        if let Some(front) = critical {
            let pts: Vec<&[f64]> = front.iter().map(|&i| pool[i]).collect();
            let dist = crowding_distance(&pts);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(front[a].cmp(&front[b])));
            let need = n - chosen.len();
            chosen.extend(order[..need].iter().map(|&k| front[k]));
        }
        chosen
    }
}
