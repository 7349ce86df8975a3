//! Non-dominated sorting under an arbitrary cone order, crowding distance,
//! and the per-generation choice between the Pareto and rotated orders.

use thiserror::Error;

use crate::cone_order::{ConeError, ConeOrder, DominanceRelation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RankingError {
    #[error("cannot rank an empty population")]
    Empty,
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// Population indices split into nondomination levels. Front 0 holds the
/// nondominated points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontPartition {
    pub fronts: Vec<Vec<usize>>,
    pub rank_of: Vec<usize>,
}

impl FrontPartition {
    pub fn num_fronts(&self) -> usize {
        self.fronts.len()
    }

    fn from_fronts(fronts: Vec<Vec<usize>>, n: usize) -> Self {
        let mut rank_of = vec![0; n];
        for (rank, front) in fronts.iter().enumerate() {
            for &i in front {
                rank_of[i] = rank;
            }
        }
        Self { fronts, rank_of }
    }
}

fn validate<P: AsRef<[f64]>>(points: &[P], order: &ConeOrder) -> Result<(), RankingError> {
    if points.is_empty() {
        return Err(RankingError::Empty);
    }
    let m = order.objectives();
    for p in points {
        let p = p.as_ref();
        if p.len() != m {
            return Err(ConeError::DimensionMismatch { expected: m, found: p.len() }.into());
        }
        if let Some(i) = p.iter().position(|v| !v.is_finite()) {
            return Err(ConeError::NonFinite(i).into());
        }
    }
    Ok(())
}

/// Fast non-dominated sort generalized over the cone order.
///
/// Every front lists indices in ascending order, so the result depends only
/// on the input ordering.
pub fn nondominated_sort<P: AsRef<[f64]>>(
    points: &[P],
    order: &ConeOrder,
) -> Result<FrontPartition, RankingError> {
    validate(points, order)?;
    let n = points.len();
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut counts = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            match order.classify_unchecked(points[i].as_ref(), points[j].as_ref()) {
                DominanceRelation::Dominates => {
                    dominated[i].push(j);
                    counts[j] += 1;
                }
                DominanceRelation::DominatedBy => {
                    dominated[j].push(i);
                    counts[i] += 1;
                }
                DominanceRelation::Incomparable | DominanceRelation::Equal => {}
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| counts[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated[i] {
                counts[j] -= 1;
                if counts[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    Ok(FrontPartition::from_fronts(fronts, n))
}

/// Number of fronts of `points` under `order`.
pub fn front_count<P: AsRef<[f64]>>(points: &[P], order: &ConeOrder) -> Result<usize, RankingError> {
    Ok(nondominated_sort(points, order)?.num_fronts())
}

/// NSGA-II crowding distance over one front, in raw objective space.
///
/// Per objective, the extreme members get `+inf` and interior members
/// accumulate the normalized gap between their neighbours. Ties in an
/// objective are ordered by position in `front`.
pub fn crowding_distance<P: AsRef<[f64]>>(front: &[P]) -> Vec<f64> {
    let n = front.len();
    let mut distance = vec![0.0; n];
    if n == 0 {
        return distance;
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].as_ref().len();
    let mut idx: Vec<usize> = (0..n).collect();
    for k in 0..m {
        idx.sort_by(|&a, &b| front[a].as_ref()[k].total_cmp(&front[b].as_ref()[k]).then(a.cmp(&b)));
        let lo = front[idx[0]].as_ref()[k];
        let hi = front[idx[n - 1]].as_ref()[k];
        distance[idx[0]] = f64::INFINITY;
        distance[idx[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let i = idx[w];
            if distance[i].is_finite() {
                let gap = front[idx[w + 1]].as_ref()[k] - front[idx[w - 1]].as_ref()[k];
                distance[i] += gap / range;
            }
        }
    }
    distance
}

/// Chooses the order used to rank a population each generation: the
/// rotated cone when the population is a single Pareto front, the Pareto
/// cone otherwise.
#[derive(Debug, Clone)]
pub struct OrderSelector {
    rotation_angle: f64,
    pareto: ConeOrder,
    rotated: ConeOrder,
}

/// Result of [`OrderSelector::select_order`].
#[derive(Debug, Clone)]
pub struct OrderChoice<'a> {
    pub order: &'a ConeOrder,
    pub rotated: bool,
    /// The Pareto partition computed to make the decision.
    pub pareto_partition: FrontPartition,
}

impl OrderSelector {
    pub const DEFAULT_ANGLE_DEGREES: f64 = 15.0;

    pub fn new(m: usize, rotation_angle: f64) -> Result<Self, ConeError> {
        Ok(Self {
            rotation_angle,
            pareto: ConeOrder::pareto(m)?,
            rotated: ConeOrder::new(m, rotation_angle)?,
        })
    }

    pub fn with_default_angle(m: usize) -> Result<Self, ConeError> {
        Self::new(m, Self::DEFAULT_ANGLE_DEGREES.to_radians())
    }

    pub fn rotation_angle(&self) -> f64 {
        self.rotation_angle
    }

    pub fn pareto(&self) -> &ConeOrder {
        &self.pareto
    }

    pub fn rotated(&self) -> &ConeOrder {
        &self.rotated
    }

    pub fn select_order<P: AsRef<[f64]>>(&self, population: &[P]) -> Result<OrderChoice<'_>, RankingError> {
        let pareto_partition = nondominated_sort(population, &self.pareto)?;
        let rotated = pareto_partition.num_fronts() == 1;
        Ok(OrderChoice {
            order: if rotated { &self.rotated } else { &self.pareto },
            rotated,
            pareto_partition,
        })
    }
}
