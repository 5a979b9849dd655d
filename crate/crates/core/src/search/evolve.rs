use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rayon::ThreadPool;
use serde::Serialize;
use thiserror::Error;

use super::{ExtremalRecord, Source};
use crate::exact::{alpha_exact, EXACT_LIMIT};
use crate::graph::Graph;
use crate::graph6::write_graph6;
use crate::ordering::{degeneracy, degeneracy_ordering};

const TOURNAMENT: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("population_size must be at least 2, got {0}")]
    PopulationTooSmall(usize),
    #[error("mutation_rate must lie strictly between 0 and 1, got {0}")]
    MutationRate(f64),
    #[error("n_vertices = {n} exceeds the exact solver limit of {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("degeneracy k = {k} is impossible on {n} vertices (need k < n)")]
    Infeasible { k: usize, n: usize },
    #[error("need k > d, got k = {k}, d = {d}")]
    KNotAboveD { k: usize, d: usize },
    #[error("elitism_count = {elitism} must be below population_size = {population}")]
    Elitism { elitism: usize, population: usize },
    #[error("unknown configuration key {0:?}")]
    UnknownKey(String),
    #[error("invalid value {value:?} for {key}")]
    BadValue { key: String, value: String },
    #[error("line {0}: expected key=value")]
    Syntax(usize),
    #[error("building thread pool: {0}")]
    Threads(String),
}

/// Parameters of a genetic search. Every individual has `n_vertices` vertices
/// and is repaired to degeneracy `k`; fitness is `alpha_d / n`, minimised.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolveConfig {
    pub k: usize,
    pub d: usize,
    pub population_size: usize,
    pub generations: usize,
    /// Probability that a vertex pair is toggled in a child.
    pub mutation_rate: f64,
    pub crossover: bool,
    pub seed: u64,
    pub n_vertices: usize,
    pub elitism_count: usize,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            k: 2,
            d: 1,
            population_size: 24,
            generations: 30,
            mutation_rate: 0.05,
            crossover: true,
            seed: 0,
            n_vertices: 10,
            elitism_count: 2,
        }
    }
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population_size < 2 {
            return Err(ConfigError::PopulationTooSmall(self.population_size));
        }
        if !(self.mutation_rate > 0.0 && self.mutation_rate < 1.0) {
            return Err(ConfigError::MutationRate(self.mutation_rate));
        }
        if self.n_vertices > EXACT_LIMIT {
            return Err(ConfigError::TooManyVertices {
                n: self.n_vertices,
                limit: EXACT_LIMIT,
            });
        }
        if self.k >= self.n_vertices {
            return Err(ConfigError::Infeasible {
                k: self.k,
                n: self.n_vertices,
            });
        }
        if self.k <= self.d {
            return Err(ConfigError::KNotAboveD {
                k: self.k,
                d: self.d,
            });
        }
        if self.elitism_count >= self.population_size {
            return Err(ConfigError::Elitism {
                elitism: self.elitism_count,
                population: self.population_size,
            });
        }
        Ok(())
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
            value.parse().map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: value.to_string(),
            })
        }
        match key {
            "k" => self.k = parse(key, value)?,
            "d" => self.d = parse(key, value)?,
            "population_size" => self.population_size = parse(key, value)?,
            "generations" => self.generations = parse(key, value)?,
            "mutation_rate" => self.mutation_rate = parse(key, value)?,
            "crossover" => self.crossover = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "n_vertices" => self.n_vertices = parse(key, value)?,
            "elitism_count" => self.elitism_count = parse(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax(i + 1))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

/// Result of [`repair_degeneracy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub graph: Graph,
    /// Whether the output has degeneracy exactly `k`.
    pub reached: bool,
}

fn from_matrix(adjacent: &[Vec<bool>]) -> Graph {
    let n = adjacent.len();
    let edges = (0..n).flat_map(|v| (0..v).filter(move |&u| adjacent[u][v]).map(move |u| (u, v)));
    Graph::from_edges(n, edges).expect("matrix is symmetric without loops")
}

fn to_matrix(g: &Graph) -> Vec<Vec<bool>> {
    let mut adjacent = vec![vec![false; g.n()]; g.n()];
    for (u, v) in g.edges() {
        adjacent[u][v] = true;
        adjacent[v][u] = true;
    }
    adjacent
}

/// Pushes `g` to degeneracy `k`. While above `k`, deletes a random edge at the
/// last vertex of the smallest-last ordering (which lies in the densest core).
/// While below, adds random non-edges that keep the degeneracy at most `k`,
/// giving up after a bounded number of rejected draws.
pub fn repair_degeneracy<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Repair {
    let n = g.n();
    let mut adjacent = to_matrix(g);
    let mut current = g.clone();
    loop {
        let (ordering, degen) = degeneracy_ordering(&current);
        if degen <= k {
            break;
        }
        let v = *ordering
            .order()
            .last()
            .expect("non-empty when degeneracy > 0");
        let neighbours = current.neighbours(v);
        let u = neighbours[rng.random_range(0..neighbours.len())];
        adjacent[u][v] = false;
        adjacent[v][u] = false;
        current = from_matrix(&adjacent);
    }

    let mut degen = degeneracy(&current);
    let mut rejected = 0;
    let budget = 4 * n * n;
    while degen < k && rejected < budget {
        let non_edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|v| (0..v).map(move |u| (u, v)))
            .filter(|&(u, v)| !adjacent[u][v])
            .collect();
        if non_edges.is_empty() {
            break;
        }
        let (u, v) = non_edges[rng.random_range(0..non_edges.len())];
        adjacent[u][v] = true;
        adjacent[v][u] = true;
        let candidate = from_matrix(&adjacent);
        let candidate_degen = degeneracy(&candidate);
        if candidate_degen <= k {
            current = candidate;
            degen = candidate_degen;
        } else {
            adjacent[u][v] = false;
            adjacent[v][u] = false;
            rejected += 1;
        }
    }
    Repair {
        reached: degen == k,
        graph: current,
    }
}

/// A member of the population with its cached evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub graph: Graph,
    pub graph6: String,
    pub degeneracy: usize,
    /// `alpha_d`; absent when the degeneracy missed `k`.
    pub alpha: Option<usize>,
}

impl Individual {
    fn fitness(&self) -> usize {
        self.alpha.unwrap_or(usize::MAX)
    }
}

/// A genetic search that can be stepped one generation at a time.
///
/// Each child draws from its own ChaCha8 stream, selected by generation and
/// slot from the master seed, so results do not depend on thread scheduling.
pub struct Evolution {
    config: EvolveConfig,
    generation: usize,
    population: Vec<Individual>,
    cache: HashMap<String, (usize, Option<usize>)>,
    record: ExtremalRecord,
    pool: Option<ThreadPool>,
}

impl Evolution {
    pub fn new(config: EvolveConfig) -> Result<Self, ConfigError> {
        Self::with_threads(config, None)
    }

    pub fn with_threads(config: EvolveConfig, threads: Option<usize>) -> Result<Self, ConfigError> {
        config.validate()?;
        let pool = threads
            .map(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build())
            .transpose()
            .map_err(|e| ConfigError::Threads(e.to_string()))?;
        let mut record = ExtremalRecord::new(config.k, config.d, Source::Evolve);
        record.seed = Some(config.seed);
        let mut evolution = Evolution {
            config,
            generation: 0,
            population: Vec::new(),
            cache: HashMap::new(),
            record,
            pool,
        };
        let graphs = evolution.in_pool(|| {
            let c = &evolution.config;
            (0..c.population_size)
                .into_par_iter()
                .map(|slot| {
                    let mut rng = stream(c.seed, 0, slot);
                    let density: f64 = rng.random_range(0.1..0.9);
                    let mut adjacent = vec![vec![false; c.n_vertices]; c.n_vertices];
                    for v in 0..c.n_vertices {
                        for u in 0..v {
                            let edge = rng.random_bool(density);
                            adjacent[u][v] = edge;
                            adjacent[v][u] = edge;
                        }
                    }
                    repair_degeneracy(&from_matrix(&adjacent), c.k, &mut rng).graph
                })
                .collect::<Vec<_>>()
        });
        evolution.adopt(graphs);
        Ok(evolution)
    }

    fn in_pool<T: Send>(&self, work: impl FnOnce() -> T + Send) -> T {
        match &self.pool {
            Some(p) => p.install(work),
            None => work(),
        }
    }

    /// Evaluates a new generation (through the cache) and offers it to the record.
    fn adopt(&mut self, graphs: Vec<Graph>) {
        let graph6: Vec<String> = graphs.iter().map(write_graph6).collect();
        let mut fresh: Vec<usize> = Vec::new();
        for (i, code) in graph6.iter().enumerate() {
            if !self.cache.contains_key(code) && !fresh.iter().any(|&j| graph6[j] == *code) {
                fresh.push(i);
            }
        }
        let (k, d) = (self.config.k, self.config.d);
        let computed: Vec<(usize, Option<usize>)> = self.in_pool(|| {
            fresh
                .par_iter()
                .map(|&i| {
                    let degen = degeneracy(&graphs[i]);
                    let alpha = (degen == k)
                        .then(|| alpha_exact(&graphs[i], d).expect("order validated").value);
                    (degen, alpha)
                })
                .collect()
        });
        for (&i, value) in fresh.iter().zip(computed) {
            self.cache.insert(graph6[i].clone(), value);
        }

        self.population = graphs
            .into_iter()
            .zip(graph6)
            .map(|(graph, graph6)| {
                let (degeneracy, alpha) = self.cache[&graph6];
                Individual {
                    graph,
                    graph6,
                    degeneracy,
                    alpha,
                }
            })
            .collect();
        for individual in &self.population {
            self.record.n_scanned += 1;
            if let Some(alpha) = individual.alpha {
                self.record.n_matched += 1;
                self.record.offer(&individual.graph, alpha);
            }
        }
    }

    /// Breeds and evaluates the next generation.
    pub fn step(&mut self) {
        let c = &self.config;
        let next = self.generation + 1;
        let mut ranking: Vec<usize> = (0..self.population.len()).collect();
        ranking.sort_by_key(|&i| (self.population[i].fitness(), i));

        let mut graphs: Vec<Graph> = ranking[..c.elitism_count]
            .iter()
            .map(|&i| self.population[i].graph.clone())
            .collect();
        let population = &self.population;
        let children: Vec<Graph> = self.in_pool(|| {
            (c.elitism_count..c.population_size)
                .into_par_iter()
                .map(|slot| {
                    let mut rng = stream(c.seed, next, slot);
                    breed(population, c, &mut rng)
                })
                .collect()
        });
        graphs.extend(children);
        self.generation = next;
        self.adopt(graphs);
    }

    /// Runs the remaining generations and returns the record.
    pub fn run(mut self) -> ExtremalRecord {
        while self.generation < self.config.generations {
            self.step();
        }
        self.record
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn record(&self) -> &ExtremalRecord {
        &self.record
    }

    /// Distinct graphs sent to the exact solver so far.
    pub fn evaluations(&self) -> usize {
        self.cache.len()
    }
}

fn stream(seed: u64, generation: usize, slot: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((generation as u64) << 32) | slot as u64);
    rng
}

fn tournament<R: Rng + ?Sized>(population: &[Individual], rng: &mut R) -> usize {
    (0..TOURNAMENT)
        .map(|_| rng.random_range(0..population.len()))
        .min_by_key(|&i| (population[i].fitness(), i))
        .expect("tournament is non-empty")
}

fn breed<R: Rng + ?Sized>(population: &[Individual], c: &EvolveConfig, rng: &mut R) -> Graph {
    let first = &population[tournament(population, rng)].graph;
    let second = c
        .crossover
        .then(|| &population[tournament(population, rng)].graph);
    let n = c.n_vertices;
    let mut adjacent = vec![vec![false; n]; n];
    for v in 0..n {
        for u in 0..v {
            let parent = match second {
                Some(other) if rng.random::<bool>() => other,
                _ => first,
            };
            let mut edge = parent.has_edge(u, v);
            if rng.random_bool(c.mutation_rate) {
                edge = !edge;
            }
            adjacent[u][v] = edge;
            adjacent[v][u] = edge;
        }
    }
    repair_degeneracy(&from_matrix(&adjacent), c.k, rng).graph
}

/// Runs a full genetic search.
pub fn evolve(config: EvolveConfig) -> Result<ExtremalRecord, ConfigError> {
    Ok(Evolution::new(config)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::is_d_degenerate;
    use crate::rational::Rational;

    fn small(seed: u64) -> EvolveConfig {
        EvolveConfig {
            population_size: 8,
            generations: 4,
            seed,
            n_vertices: 8,
            ..EvolveConfig::default()
        }
    }

    #[test]
    fn validation() {
        assert!(EvolveConfig::default().validate().is_ok());
        let bad = |f: fn(&mut EvolveConfig)| {
            let mut c = EvolveConfig::default();
            f(&mut c);
            c.validate().unwrap_err()
        };
        assert_eq!(
            bad(|c| c.population_size = 1),
            ConfigError::PopulationTooSmall(1)
        );
        assert!(matches!(
            bad(|c| c.mutation_rate = 1.0),
            ConfigError::MutationRate(_)
        ));
        assert!(matches!(
            bad(|c| c.mutation_rate = f64::NAN),
            ConfigError::MutationRate(_)
        ));
        assert!(matches!(
            bad(|c| c.n_vertices = 65),
            ConfigError::TooManyVertices { .. }
        ));
        assert!(matches!(bad(|c| c.k = 10), ConfigError::Infeasible { .. }));
        assert!(matches!(bad(|c| c.d = 2), ConfigError::KNotAboveD { .. }));
        assert!(matches!(
            bad(|c| c.elitism_count = 24),
            ConfigError::Elitism { .. }
        ));
    }

    #[test]
    fn config_text() {
        let mut c = EvolveConfig::default();
        c.apply_text("# search\nk = 3\nseed=9 # trailing\n\ncrossover = false\n")
            .unwrap();
        assert_eq!((c.k, c.seed, c.crossover), (3, 9, false));
        assert_eq!(
            c.apply_text("colour = red"),
            Err(ConfigError::UnknownKey("colour".into()))
        );
        assert!(matches!(
            c.apply_text("k = x"),
            Err(ConfigError::BadValue { .. })
        ));
        assert_eq!(c.apply_text("k 3"), Err(ConfigError::Syntax(1)));
    }

    #[test]
    fn repair_reaches_the_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = repair_degeneracy(&Graph::complete(5), 3, &mut rng);
        assert!(r.reached);
        assert_eq!(degeneracy(&r.graph), 3);
        assert_eq!(r.graph.m(), 9);

        let r = repair_degeneracy(&Graph::empty(5).unwrap(), 1, &mut rng);
        assert!(r.reached);
        assert_eq!(r.graph.m(), 1);

        let c5 = Graph::cycle(5);
        assert_eq!(repair_degeneracy(&c5, 2, &mut rng).graph, c5);

        let r = repair_degeneracy(&Graph::empty(1).unwrap(), 1, &mut rng);
        assert!(!r.reached);
    }

    #[test]
    fn repair_output_is_always_k_degenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let n = rng.random_range(2..12);
            let k = rng.random_range(1..n);
            let g = crate::corpus::random_labelled(n, &mut rng);
            let r = repair_degeneracy(&g, k, &mut rng);
            assert!(is_d_degenerate(&r.graph, k));
            assert!(r.reached);
        }
    }

    #[test]
    fn deterministic_per_generation() {
        let mut a = Evolution::with_threads(small(5), Some(1)).unwrap();
        let mut b = Evolution::with_threads(small(5), Some(3)).unwrap();
        for _ in 0..3 {
            assert_eq!(a.population(), b.population());
            a.step();
            b.step();
        }
        assert_eq!(a.record(), b.record());
        assert_eq!(evolve(small(5)).unwrap(), evolve(small(5)).unwrap());
        assert_ne!(
            Evolution::new(small(5)).unwrap().population(),
            Evolution::new(small(6)).unwrap().population()
        );
    }

    #[test]
    fn records_verify_and_respect_the_targets() {
        let r = evolve(small(11)).unwrap();
        assert!(r.verify());
        assert!(r.best_ratio.clone().unwrap() >= Rational::new(3, 5));
        assert_eq!(r.source, Source::Evolve);
        assert_eq!(r.seed, Some(11));
        assert_eq!(r.n_scanned, 8 * 5);

        let config = EvolveConfig {
            k: 3,
            d: 1,
            population_size: 16,
            generations: 15,
            n_vertices: 8,
            seed: 1,
            ..EvolveConfig::default()
        };
        let r = evolve(config).unwrap();
        assert!(r.verify());
        assert_eq!(r.best_ratio, Some(Rational::new(1, 2)));
    }

    #[test]
    fn elites_survive() {
        let mut e = Evolution::new(small(3)).unwrap();
        let best_before = e.population().iter().map(Individual::fitness).min();
        e.step();
        let best_after = e.population().iter().map(Individual::fitness).min();
        assert!(best_after <= best_before);
    }
}
