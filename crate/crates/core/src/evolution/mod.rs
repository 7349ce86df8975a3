//! Generational (μ+λ) engines: NSGA-II, DI-MOEA and NSGA-III share one
//! generation loop and differ only in how the critical front is truncated.
//!
//! Each generation asks the [`OrderSelector`] which order to use for the
//! current parents. That order ranks the parents for tournament selection
//! and ranks the merged parent/offspring pool for survival.

pub mod dimoea;
pub mod nsga2;
pub mod nsga3;
pub mod operators;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone_order::{ConeError, ConeOrder};
use crate::problems::ProblemDefinition;
use crate::ranking::{nondominated_sort, FrontPartition, OrderSelector, RankingError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolutionError {
    #[error("invalid algorithm configuration: {0}")]
    InvalidConfig(String),
    #[error("objective {objective} of an offspring is not finite")]
    NonFiniteObjective { objective: usize },
    #[error(transparent)]
    Ranking(#[from] RankingError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Nsga2,
    Dimoea,
    Nsga3,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Self::Nsga2, Self::Dimoea, Self::Nsga3];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Nsga2 => "nsga2",
            Self::Dimoea => "dimoea",
            Self::Nsga3 => "nsga3",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "nsga2" | "nsgaii" => Ok(Self::Nsga2),
            "dimoea" => Ok(Self::Dimoea),
            "nsga3" | "nsgaiii" => Ok(Self::Nsga3),
            _ => Err(format!("unknown algorithm `{s}` (expected nsga2, dimoea or nsga3)")),
        }
    }
}

/// How the ranking order is chosen each generation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderPolicy {
    /// Rotated cone when the parents form a single Pareto front.
    #[default]
    Adaptive,
    /// Always the Pareto order; the canonical algorithm.
    ParetoOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    pub algorithm: Algorithm,
    pub population_size: usize,
    /// Rotation angle in radians.
    pub rotation_angle: f64,
    /// Total objective evaluations, initial population included.
    pub budget: usize,
    pub sbx_eta: f64,
    pub sbx_rate: f64,
    pub pm_eta: f64,
    /// `None` means `1 / d`.
    pub pm_rate: Option<f64>,
    pub seed: u64,
    #[serde(default)]
    pub policy: OrderPolicy,
}

impl AlgorithmConfig {
    pub const DEFAULT_POPULATION: usize = 100;

    /// Defaults for `problem`: population 100, its full budget, SBX rate 1
    /// with index 15, polynomial mutation rate `1/d` with index 20.
    pub fn new(algorithm: Algorithm, problem: &ProblemDefinition, rotation_angle: f64, seed: u64) -> Self {
        Self {
            algorithm,
            population_size: Self::DEFAULT_POPULATION,
            rotation_angle,
            budget: problem.budget(),
            sbx_eta: 15.0,
            sbx_rate: 1.0,
            pm_eta: 20.0,
            pm_rate: None,
            seed,
            policy: OrderPolicy::Adaptive,
        }
    }

    pub fn mutation_rate(&self, d: usize) -> f64 {
        self.pm_rate.unwrap_or(1.0 / d as f64)
    }

    pub fn validate(&self) -> Result<(), EvolutionError> {
        let bad = |msg: String| Err(EvolutionError::InvalidConfig(msg));
        if self.population_size < 2 {
            return bad(format!("population size {} must exceed 1", self.population_size));
        }
        if self.budget < self.population_size {
            return bad(format!("budget {} is below the population size {}", self.budget, self.population_size));
        }
        for (name, rate) in [("sbx_rate", Some(self.sbx_rate)), ("pm_rate", self.pm_rate)] {
            if let Some(r) = rate {
                if !(0.0..=1.0).contains(&r) {
                    return bad(format!("{name} = {r} is not a probability"));
                }
            }
        }
        if !(self.sbx_eta >= 0.0 && self.pm_eta >= 0.0) {
            return bad("distribution indices must be nonnegative".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub rank: usize,
    pub diversity: f64,
}

/// One line of the per-generation log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationLog {
    pub generation: usize,
    /// Fronts among the parents under the order chosen for this generation.
    pub front_count: usize,
    pub rotated: bool,
}

/// Whether a call to a generation function did any work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Advanced,
    BudgetExhausted,
}

/// Survival selection on a ranked pool.
pub trait Survival: Send + Sync {
    /// Secondary tournament score per parent, larger is better.
    fn parent_scores(&self, objectives: &[&[f64]], partition: &FrontPartition) -> Vec<f64>;

    /// Indices of the `n` survivors of `pool`.
    fn truncate(&self, pool: &[&[f64]], partition: &FrontPartition, n: usize, rng: &mut ChaCha8Rng) -> Vec<usize>;
}

/// Whole fronts that fit into `n`, plus the critical front if one must be cut.
pub(crate) fn split_fronts(partition: &FrontPartition, n: usize) -> (Vec<usize>, Option<&[usize]>) {
    let mut chosen = Vec::with_capacity(n);
    for front in &partition.fronts {
        if chosen.len() == n {
            break;
        }
        if chosen.len() + front.len() <= n {
            chosen.extend_from_slice(front);
        } else {
            return (chosen, Some(front));
        }
    }
    (chosen, None)
}

/// Mutable state of a single run.
#[derive(Debug, Clone)]
pub struct EngineState {
    pub population: Vec<Individual>,
    pub evaluations: usize,
    pub generation: usize,
    pub history: Vec<GenerationLog>,
    rng: ChaCha8Rng,
}

impl EngineState {
    /// Uniform random population within the bounds, evaluated.
    pub fn initialize(problem: &ProblemDefinition, config: &AlgorithmConfig) -> Result<Self, EvolutionError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let xs: Vec<Vec<f64>> = (0..config.population_size)
            .map(|_| problem.bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect())
            .collect();
        let population = evaluate_all(problem, xs)?;
        Ok(Self { evaluations: population.len(), population, generation: 0, history: Vec::new(), rng })
    }

    pub fn objectives(&self) -> Vec<&[f64]> {
        self.population.iter().map(|i| i.f.as_slice()).collect()
    }

    /// Members not Pareto-dominated by any other member.
    pub fn pareto_front(&self) -> Vec<&Individual> {
        let order = ConeOrder::pareto(self.population[0].f.len()).expect("population has at least two objectives");
        let partition = nondominated_sort(&self.objectives(), &order).expect("population objectives are finite");
        partition.fronts[0].iter().map(|&i| &self.population[i]).collect()
    }
}

fn evaluate_all(problem: &ProblemDefinition, xs: Vec<Vec<f64>>) -> Result<Vec<Individual>, EvolutionError> {
    xs.into_par_iter()
        .map(|x| {
            let f = problem.evaluate(&x);
            match f.iter().position(|v| !v.is_finite()) {
                Some(objective) => Err(EvolutionError::NonFiniteObjective { objective }),
                None => Ok(Individual { x, f, rank: 0, diversity: 0.0 }),
            }
        })
        .collect()
}

fn tournament(population: &[Individual], rng: &mut ChaCha8Rng) -> usize {
    let n = population.len();
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    let (pa, pb) = (&population[a], &population[b]);
    if pa.rank != pb.rank {
        if pa.rank < pb.rank {
            a
        } else {
            b
        }
    } else if pb.diversity > pa.diversity {
        b
    } else {
        a
    }
}

/// One generation with the given survival scheme. Returns
/// [`Step::BudgetExhausted`] without touching `state` once the budget is used.
pub fn run_generation(
    state: &mut EngineState,
    problem: &ProblemDefinition,
    selector: &OrderSelector,
    config: &AlgorithmConfig,
    survival: &dyn Survival,
) -> Result<Step, EvolutionError> {
    if state.evaluations >= config.budget {
        return Ok(Step::BudgetExhausted);
    }
    let n = state.population.len();
    let parents = state.objectives();
    let (order, rotated, partition) = match config.policy {
        OrderPolicy::ParetoOnly => (selector.pareto(), false, nondominated_sort(&parents, selector.pareto())?),
        OrderPolicy::Adaptive => {
            let choice = selector.select_order(&parents)?;
            if choice.rotated {
                (choice.order, true, nondominated_sort(&parents, choice.order)?)
            } else {
                (choice.order, false, choice.pareto_partition)
            }
        }
    };
    let scores = survival.parent_scores(&parents, &partition);
    state.history.push(GenerationLog { generation: state.generation, front_count: partition.num_fronts(), rotated });
    for (i, ind) in state.population.iter_mut().enumerate() {
        ind.rank = partition.rank_of[i];
        ind.diversity = scores[i];
    }

    let lambda = n.min(config.budget - state.evaluations);
    let pm_rate = config.mutation_rate(problem.d);
    let mut children = Vec::with_capacity(lambda + 1);
    while children.len() < lambda {
        let a = tournament(&state.population, &mut state.rng);
        let b = tournament(&state.population, &mut state.rng);
        let (c1, c2) = operators::sbx_crossover(
            &state.population[a].x,
            &state.population[b].x,
            &problem.bounds,
            config.sbx_eta,
            config.sbx_rate,
            &mut state.rng,
        );
        for c in [c1, c2] {
            if children.len() < lambda {
                children.push(operators::polynomial_mutation(&c, &problem.bounds, config.pm_eta, pm_rate, &mut state.rng));
            }
        }
    }
    let offspring = evaluate_all(problem, children)?;
    state.evaluations += offspring.len();

    let mut pool = std::mem::take(&mut state.population);
    pool.extend(offspring);
    let pool_f: Vec<&[f64]> = pool.iter().map(|i| i.f.as_slice()).collect();
    let pool_partition = nondominated_sort(&pool_f, order)?;
    let survivors = survival.truncate(&pool_f, &pool_partition, n, &mut state.rng);
    debug_assert_eq!(survivors.len(), n);

    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    state.population = survivors
        .into_iter()
        .map(|i| {
            let mut ind = slots[i].take().expect("survivor indices are distinct");
            ind.rank = pool_partition.rank_of[i];
            ind.diversity = 0.0;
            ind
        })
        .collect();
    state.generation += 1;
    Ok(Step::Advanced)
}

pub fn run_generation_nsga2(
    state: &mut EngineState,
    problem: &ProblemDefinition,
    selector: &OrderSelector,
    config: &AlgorithmConfig,
) -> Result<Step, EvolutionError> {
    run_generation(state, problem, selector, config, &nsga2::CrowdingSurvival)
}

pub fn run_generation_dimoea(
    state: &mut EngineState,
    problem: &ProblemDefinition,
    selector: &OrderSelector,
    config: &AlgorithmConfig,
) -> Result<Step, EvolutionError> {
    run_generation(state, problem, selector, config, &dimoea::GapSurvival)
}

/// Builds the reference directions on every call; [`Engine`] caches them.
pub fn run_generation_nsga3(
    state: &mut EngineState,
    problem: &ProblemDefinition,
    selector: &OrderSelector,
    config: &AlgorithmConfig,
) -> Result<Step, EvolutionError> {
    run_generation(state, problem, selector, config, &nsga3::ReferencePointSurvival::new(problem.m))
}

fn survival_for(algorithm: Algorithm, m: usize) -> Box<dyn Survival> {
    match algorithm {
        Algorithm::Nsga2 => Box::new(nsga2::CrowdingSurvival),
        Algorithm::Dimoea => Box::new(dimoea::GapSurvival),
        Algorithm::Nsga3 => Box::new(nsga3::ReferencePointSurvival::new(m)),
    }
}

/// A complete run: problem, configuration, order selector and state.
pub struct Engine {
    problem: ProblemDefinition,
    config: AlgorithmConfig,
    selector: OrderSelector,
    survival: Box<dyn Survival>,
    state: EngineState,
}

impl Engine {
    pub fn new(problem: ProblemDefinition, config: AlgorithmConfig) -> Result<Self, EvolutionError> {
        let selector = OrderSelector::new(problem.m, config.rotation_angle)?;
        let state = EngineState::initialize(&problem, &config)?;
        let survival = survival_for(config.algorithm, problem.m);
        Ok(Self { problem, config, selector, survival, state })
    }

    pub fn step(&mut self) -> Result<Step, EvolutionError> {
        run_generation(&mut self.state, &self.problem, &self.selector, &self.config, self.survival.as_ref())
    }

    /// Runs generations until the budget is spent.
    pub fn run(&mut self) -> Result<&EngineState, EvolutionError> {
        while self.step()? == Step::Advanced {}
        Ok(&self.state)
    }

    pub fn state(&self) -> &EngineState {
        &self.state
    }

    pub fn into_state(self) -> EngineState {
        self.state
    }

    pub fn config(&self) -> &AlgorithmConfig {
        &self.config
    }

    pub fn problem(&self) -> &ProblemDefinition {
        &self.problem
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranking::OrderSelector;

    fn small(algorithm: Algorithm, problem: &ProblemDefinition, angle_deg: f64, seed: u64) -> AlgorithmConfig {
        let mut c = AlgorithmConfig::new(algorithm, problem, angle_deg.to_radians(), seed);
        c.population_size = 20;
        c.budget = 20 * 15 + 7;
        c
    }

    #[test]
    fn budget_is_respected_exactly() {
        let problem = ProblemDefinition::dtlz2(3);
        for alg in Algorithm::ALL {
            let mut engine = Engine::new(problem.clone(), small(alg, &problem, 15.0, 1)).unwrap();
            let state = engine.run().unwrap();
            assert_eq!(state.evaluations, 20 * 15 + 7, "{alg}");
            assert_eq!(state.population.len(), 20);
            assert_eq!(state.history.len(), state.generation);
            assert_eq!(engine.step().unwrap(), Step::BudgetExhausted);
        }
    }

    #[test]
    fn identical_seeds_give_identical_runs() {
        let problem = ProblemDefinition::dtlz1(4);
        for alg in Algorithm::ALL {
            let cfg = small(alg, &problem, 20.0, 9);
            let a = Engine::new(problem.clone(), cfg.clone()).unwrap().run().unwrap().population.clone();
            let b = Engine::new(problem.clone(), cfg).unwrap().run().unwrap().population.clone();
            assert_eq!(a, b, "{alg}");
        }
    }

    #[test]
    fn zero_angle_matches_pareto_only_bit_for_bit() {
        let problem = ProblemDefinition::dtlz2(5);
        for alg in Algorithm::ALL {
            let adaptive = small(alg, &problem, 0.0, 4);
            let mut canonical = adaptive.clone();
            canonical.policy = OrderPolicy::ParetoOnly;
            let a = Engine::new(problem.clone(), adaptive).unwrap().into_run();
            let b = Engine::new(problem.clone(), canonical).unwrap().into_run();
            assert_eq!(a.population, b.population, "{alg}");
            let fa: Vec<usize> = a.history.iter().map(|h| h.front_count).collect();
            let fb: Vec<usize> = b.history.iter().map(|h| h.front_count).collect();
            assert_eq!(fa, fb);
        }
    }

    #[test]
    fn single_front_parents_switch_to_rotated_order() {
        let problem = ProblemDefinition::dtlz2(3);
        let cfg = small(Algorithm::Nsga2, &problem, 15.0, 2);
        let selector = OrderSelector::new(3, cfg.rotation_angle).unwrap();
        let mut state = EngineState::initialize(&problem, &cfg).unwrap();
        // put every parent on the true front so they are mutually nondominated
        for ind in &mut state.population {
            for v in &mut ind.x[2..] {
                *v = 0.5;
            }
            ind.f = problem.evaluate(&ind.x);
        }
        run_generation_nsga2(&mut state, &problem, &selector, &cfg).unwrap();
        assert!(state.history[0].rotated);
    }

    #[test]
    fn elitism_keeps_a_previous_best() {
        let problem = ProblemDefinition::dtlz1(3);
        let cfg = small(Algorithm::Nsga2, &problem, 10.0, 3);
        let selector = OrderSelector::new(3, cfg.rotation_angle).unwrap();
        let mut state = EngineState::initialize(&problem, &cfg).unwrap();
        for _ in 0..10 {
            let before = state.population.clone();
            run_generation_nsga2(&mut state, &problem, &selector, &cfg).unwrap();
            let order = if state.history.last().unwrap().rotated { selector.rotated() } else { selector.pareto() };
            let f: Vec<&[f64]> = before.iter().map(|i| i.f.as_slice()).collect();
            let best = nondominated_sort(&f, order).unwrap().fronts[0].clone();
            let survived = best.iter().any(|&b| state.population.iter().any(|p| p.x == before[b].x));
            assert!(survived);
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let problem = ProblemDefinition::dtlz2(3);
        let mut cfg = small(Algorithm::Nsga2, &problem, 15.0, 0);
        cfg.budget = 5;
        assert!(matches!(Engine::new(problem.clone(), cfg.clone()), Err(EvolutionError::InvalidConfig(_))));
        cfg.budget = 100;
        cfg.population_size = 1;
        assert!(Engine::new(problem.clone(), cfg.clone()).is_err());
        cfg.population_size = 10;
        cfg.pm_rate = Some(1.5);
        assert!(Engine::new(problem, cfg).is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for alg in Algorithm::ALL {
            assert_eq!(alg.as_str().parse::<Algorithm>().unwrap(), alg);
        }
        assert_eq!("NSGA-II".parse::<Algorithm>().unwrap(), Algorithm::Nsga2);
        assert!("moead".parse::<Algorithm>().is_err());
    }

    impl Engine {
        fn into_run(mut self) -> EngineState {
            self.run().unwrap();
            self.into_state()
        }
    }
}
