//! Randomized verification campaigns.
//!
//! Trial `i` of a campaign with seed `s` draws everything from a ChaCha8
//! stream seeded with `splitmix64(s + (i + 1) · 0x9E3779B97F4A7C15)`, so
//! trials are independent of each other and of the thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::{Limits, SimplicialComplex, SimplicialMap};
use crate::dowker::{
    check_naturality, dowker_complex, dowker_map, pi, pi_hat, rectangle_map,
    transpose_dowker_complex,
};
use crate::error::{Error, Result};
use crate::homology::{
    chain_complex, chain_homology, check_fiber_hypothesis, check_functorial_dowker,
    check_swap_factorization, homology, homology_with, induced_chain_map, is_quasi_isomorphism,
    mapping_cone, smith_normal_form, Coefficients, IntMatrix, PrimeField, Rationals,
};
use crate::relation::{random_morphism, random_relation, Relation, RelationJson, RelationMorphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    /// `D(R)`, `D(R^T)` and `E(R)` have the same integral homology.
    Betti,
    /// `π_R` and `π̂_R` are quasi-isomorphisms and `π̂_R = π_{R^T} ∘ S_R`.
    QuasiIso,
    /// Every fiber `π_R/σ` is acyclic with a cone point in its cover nerve.
    Fiber,
    /// Both projection squares commute for a random morphism.
    Naturality,
    /// The Dowker square commutes on `H_0..H_2` over `Q` and `Z/2`.
    Functorial,
    /// `D` and `E` preserve identities and composition.
    FunctorLaws,
    /// `∂∂ = 0`, Smith form reconstruction and Euler characteristics.
    Algebra,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Betti,
        Check::QuasiIso,
        Check::Fiber,
        Check::Naturality,
        Check::Functorial,
        Check::FunctorLaws,
        Check::Algebra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Betti => "betti",
            Check::QuasiIso => "quasi-iso",
            Check::Fiber => "fiber",
            Check::Naturality => "naturality",
            Check::Functorial => "functorial",
            Check::FunctorLaws => "functor-laws",
            Check::Algebra => "algebra",
        }
    }

    fn needs_morphism(self) -> bool {
        matches!(self, Check::Naturality | Check::Functorial | Check::FunctorLaws)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown check `{s}`; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    /// Relations have `0..=max_x` objects and `0..=max_y` attributes.
    pub max_x: usize,
    pub max_y: usize,
    /// Each trial picks its density uniformly from this grid.
    pub densities: Vec<f64>,
    pub checks: Vec<Check>,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
    /// Fibers are checked over simplices of `D(R)` up to this dimension.
    pub fiber_max_dimension: usize,
    /// Homology degrees `0..=functorial_max_degree` for the functorial check.
    pub functorial_max_degree: usize,
    /// Probability of each extra pair in generated morphism targets.
    pub morphism_noise: f64,
    pub limits: Limits,
    /// Shrink failing relations to smaller reproducers.
    pub shrink: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 100,
            seed: 0,
            max_x: 5,
            max_y: 5,
            densities: (1..=9).map(|d| f64::from(d) / 10.0).collect(),
            checks: Check::ALL.to_vec(),
            threads: None,
            fiber_max_dimension: 6,
            functorial_max_degree: 2,
            morphism_noise: 0.1,
            limits: Limits::default(),
            shrink: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub check: String,
    pub relation: RelationJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism: Option<crate::relation::MorphismJson>,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<String>,
    /// How many times each check ran.
    pub runs: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
    /// Wall time; left out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// The relation and morphisms of one trial.
#[derive(Debug, Clone)]
pub struct TrialInput {
    pub relation: Relation,
    /// `f: R → R1`.
    pub morphism: RelationMorphism,
    /// `g: R1 → R2`, for composition laws.
    pub second: RelationMorphism,
}

pub fn trial_input(config: &VerifyConfig, index: usize) -> TrialInput {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(config.seed, index));
    let nx = rng.gen_range(0..=config.max_x);
    let ny = rng.gen_range(0..=config.max_y);
    let density = if config.densities.is_empty() {
        0.5
    } else {
        config.densities[rng.gen_range(0..config.densities.len())]
    };
    let relation = random_relation(nx, ny, density, rng.next_u64());
    let morphism = random_morphism(relation.clone(), config.morphism_noise, rng.next_u64());
    let second = random_morphism(morphism.target().clone(), config.morphism_noise, rng.next_u64());
    TrialInput {
        relation,
        morphism,
        second,
    }
}

type Outcome = std::result::Result<(), Value>;

fn guard(result: Result<bool>, witness: impl FnOnce() -> Value) -> Outcome {
    match result {
        Ok(true) => Ok(()),
        Ok(false) => Err(witness()),
        Err(e) => Err(json!({ "error": e.to_string() })),
    }
}

fn check_betti(relation: &Relation, limits: &Limits) -> Outcome {
    let run = || -> Result<_> {
        Ok([
            homology(&dowker_complex(relation), false, limits)?,
            homology(&transpose_dowker_complex(relation), false, limits)?,
            homology(pi(relation).source(), false, limits)?,
        ])
    };
    match run() {
        Ok([d, dt, e]) if d.same_groups(&dt) && d.same_groups(&e) => Ok(()),
        Ok([d, dt, e]) => Err(json!({ "dowker": d, "transpose": dt, "rectangle": e })),
        Err(e) => Err(json!({ "error": e.to_string() })),
    }
}

fn check_quasi_iso(relation: &Relation, limits: &Limits) -> Outcome {
    guard(is_quasi_isomorphism(&pi(relation), limits), || json!({ "map": "pi" }))?;
    guard(is_quasi_isomorphism(&pi_hat(relation), limits), || json!({ "map": "pi_hat" }))?;
    guard(Ok(check_swap_factorization(relation)), || {
        json!({ "map": "pi_hat = pi_transpose . swap" })
    })
}

fn check_fibers(relation: &Relation, max_dimension: usize, limits: &Limits) -> Outcome {
    let d = dowker_complex(relation);
    let top = usize::try_from(d.dimension()).map_or(0, |t| t.min(max_dimension) + 1);
    for k in 0..top {
        for sigma in d.k_simplices(k) {
            match check_fiber_hypothesis(relation, &sigma, limits) {
                Ok(report) if report.passed() => {}
                Ok(report) => return Err(serde_json::to_value(report).expect("serializable")),
                Err(e) => return Err(json!({ "sigma": sigma, "error": e.to_string() })),
            }
        }
    }
    Ok(())
}

fn check_naturality_square(morphism: &RelationMorphism) -> Outcome {
    let report = check_naturality(morphism);
    if report.passed() {
        Ok(())
    } else {
        Err(serde_json::to_value(report).expect("serializable"))
    }
}

fn check_functorial(morphism: &RelationMorphism, max_degree: usize, limits: &Limits) -> Outcome {
    let z2 = PrimeField::new(2).expect("2 is prime");
    for k in 0..=max_degree {
        guard(check_functorial_dowker(morphism, k, &Rationals, limits), || {
            json!({ "degree": k, "field": "q" })
        })?;
        guard(check_functorial_dowker(morphism, k, &z2, limits), || {
            json!({ "degree": k, "field": "z2" })
        })?;
    }
    Ok(())
}

fn same_vertex_map(a: &SimplicialMap, b: &SimplicialMap) -> bool {
    a.source() == b.source() && a.target() == b.target() && a.vertex_table() == b.vertex_table()
}

fn check_functor_laws(f: &RelationMorphism, g: &RelationMorphism) -> Outcome {
    let gf = g.compose(f).map_err(|e| json!({ "error": e.to_string() }))?;
    let law = |name: &str, ok: bool| if ok { Ok(()) } else { Err(json!({ "law": name })) };
    let id = RelationMorphism::identity(f.source());
    law(
        "D(id) = id",
        same_vertex_map(&dowker_map(&id), &SimplicialMap::identity(&dowker_complex(f.source()))),
    )?;
    law(
        "E(id) = id",
        same_vertex_map(&rectangle_map(&id), &SimplicialMap::identity(pi(f.source()).source())),
    )?;
    let composed = dowker_map(g).compose(&dowker_map(f)).expect("composable");
    law("D(g f) = D(g) D(f)", same_vertex_map(&dowker_map(&gf), &composed))?;
    let composed = rectangle_map(g).compose(&rectangle_map(f)).expect("composable");
    law("E(g f) = E(g) E(f)", same_vertex_map(&rectangle_map(&gf), &composed))?;
    law("(f^T)^T = f", f.transpose().transpose() == *f)?;
    law(
        "(g f)^T = g^T f^T",
        g.transpose().compose(&f.transpose()).ok().as_ref() == Some(&gf.transpose()),
    )
}

/// `U · M · V = D`, `|det U| = |det V| = 1`, diagonal `D` with a divisibility
/// chain of positive factors.
pub fn check_smith(m: &IntMatrix) -> bool {
    let s = smith_normal_form(m);
    if s.u.mul(m).mul(&s.v) != s.d || !s.u.determinant().abs().is_one() || !s.v.determinant().abs().is_one() {
        return false;
    }
    let diagonal = (0..s.d.rows()).all(|i| (0..s.d.cols()).all(|j| i == j || s.d.get(i, j).is_zero()));
    let factors = s.invariant_factors();
    let rank_ok = (factors.len()..s.d.rows().min(s.d.cols())).all(|i| s.d.get(i, i).is_zero());
    diagonal
        && rank_ok
        && factors.iter().all(|d| d.is_positive())
        && factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
}

/// Algebraic self-checks on every complex and cone built for `R`.
pub fn check_algebra(relation: &Relation, limits: &Limits) -> Outcome {
    let fail = |what: &str| Err(json!({ "failed": what }));
    let e = pi(relation).source().clone();
    let complexes: [(&str, SimplicialComplex); 3] = [
        ("dowker", dowker_complex(relation)),
        ("transpose", transpose_dowker_complex(relation)),
        ("rectangle", e),
    ];
    let error = |e: Error| json!({ "error": e.to_string() });
    for (name, k) in &complexes {
        let core = k.strong_collapse().core;
        for reduced in [false, true] {
            let c = chain_complex(&core, reduced, limits).map_err(error)?;
            if !c.check_d_squared() {
                return fail(&format!("d^2 = 0 on {name}"));
            }
            if !c.degrees().all(|d| check_smith(&c.boundary(d))) {
                return fail(&format!("Smith form on {name}"));
            }
        }
        let q = homology_with(k, false, Coefficients::Rationals, limits).map_err(error)?;
        if q.euler_characteristic() != k.euler_characteristic() {
            return fail(&format!("Euler characteristic of {name}"));
        }
    }
    for (name, map) in [("pi", pi(relation)), ("pi_hat", pi_hat(relation))] {
        let f = induced_chain_map(&crate::homology::core_map(&map), true, limits).map_err(error)?;
        if !f.check_square() {
            return fail(&format!("chain map square for {name}"));
        }
        let cone = mapping_cone(&f);
        if !cone.check_d_squared() {
            return fail(&format!("d^2 = 0 on the cone of {name}"));
        }
        if !cone.degrees().all(|d| check_smith(&cone.boundary(d))) {
            return fail(&format!("Smith form on the cone of {name}"));
        }
        let q = chain_homology(&cone, Coefficients::Rationals, true);
        let alternating: i64 = cone
            .degrees()
            .map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * cone.rank(d) as i64)
            .sum();
        if q.euler_characteristic() != alternating {
            return fail(&format!("Euler characteristic of the cone of {name}"));
        }
    }
    Ok(())
}

fn run_check(check: Check, input: &TrialInput, config: &VerifyConfig) -> Outcome {
    let limits = &config.limits;
    match check {
        Check::Betti => check_betti(&input.relation, limits),
        Check::QuasiIso => check_quasi_iso(&input.relation, limits),
        Check::Fiber => check_fibers(&input.relation, config.fiber_max_dimension, limits),
        Check::Naturality => check_naturality_square(&input.morphism),
        Check::Functorial => check_functorial(&input.morphism, config.functorial_max_degree, limits),
        Check::FunctorLaws => check_functor_laws(&input.morphism, &input.second),
        Check::Algebra => check_algebra(&input.relation, limits),
    }
}

/// `f` restricted to a sub-relation of its source.
fn restrict(morphism: &RelationMorphism, source: Relation) -> Option<RelationMorphism> {
    let json = morphism.to_json();
    RelationMorphism::new(source, morphism.target().clone(), &json.f1, &json.f2).ok()
}

fn sub_relation(relation: &Relation, x: &[String], y: &[String], pairs: &[(String, String)]) -> Relation {
    Relation::new(x.to_vec(), y.to_vec(), pairs.to_vec()).unwrap_or_else(|_| relation.clone())
}

/// Greedily drops pairs, then labels, while `fails` still holds.
pub fn shrink_relation(relation: &Relation, fails: impl Fn(&Relation) -> bool) -> Relation {
    let mut x = relation.x_labels().to_vec();
    let mut y = relation.y_labels().to_vec();
    let mut pairs: Vec<(String, String)> = relation
        .pairs()
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let mut current = relation.clone();
    let mut i = 0;
    while i < pairs.len() {
        let mut fewer = pairs.clone();
        fewer.remove(i);
        let candidate = sub_relation(relation, &x, &y, &fewer);
        if fails(&candidate) {
            pairs = fewer;
            current = candidate;
        } else {
            i += 1;
        }
    }
    for side in 0..2 {
        let mut i = 0;
        loop {
            let labels = if side == 0 { &x } else { &y };
            if i >= labels.len() {
                break;
            }
            let label = labels[i].clone();
            let (nx, ny): (Vec<String>, Vec<String>) = if side == 0 {
                (x.iter().filter(|l| **l != label).cloned().collect(), y.clone())
            } else {
                (x.clone(), y.iter().filter(|l| **l != label).cloned().collect())
            };
            let kept: Vec<(String, String)> = pairs
                .iter()
                .filter(|(a, b)| if side == 0 { *a != label } else { *b != label })
                .cloned()
                .collect();
            let candidate = sub_relation(relation, &nx, &ny, &kept);
            if fails(&candidate) {
                x = nx;
                y = ny;
                pairs = kept;
                current = candidate;
            } else {
                i += 1;
            }
        }
    }
    current
}

fn evaluate(index: usize, config: &VerifyConfig) -> Vec<Failure> {
    let input = trial_input(config, index);
    let mut failures = Vec::new();
    for &check in &config.checks {
        let Err(witness) = run_check(check, &input, config) else {
            continue;
        };
        let failure = if check.needs_morphism() {
            let morphism = if config.shrink && check != Check::FunctorLaws {
                let small = shrink_relation(&input.relation, |r| {
                    restrict(&input.morphism, r.clone()).is_some_and(|m| {
                        let trial = TrialInput {
                            relation: r.clone(),
                            morphism: m,
                            second: input.second.clone(),
                        };
                        run_check(check, &trial, config).is_err()
                    })
                });
                restrict(&input.morphism, small).unwrap_or_else(|| input.morphism.clone())
            } else {
                input.morphism.clone()
            };
            let trial = TrialInput {
                relation: morphism.source().clone(),
                morphism: morphism.clone(),
                second: input.second.clone(),
            };
            Failure {
                trial: index,
                check: check.name().to_string(),
                relation: morphism.source().to_json(),
                witness: run_check(check, &trial, config).err().unwrap_or(witness),
                morphism: Some(morphism.to_json()),
            }
        } else {
            let relation = if config.shrink {
                shrink_relation(&input.relation, |r| {
                    let trial = TrialInput {
                        relation: r.clone(),
                        ..input.clone()
                    };
                    run_check(check, &trial, config).is_err()
                })
            } else {
                input.relation.clone()
            };
            let trial = TrialInput {
                relation: relation.clone(),
                ..input.clone()
            };
            Failure {
                trial: index,
                check: check.name().to_string(),
                relation: relation.to_json(),
                witness: run_check(check, &trial, config).err().unwrap_or(witness),
                morphism: None,
            }
        };
        failures.push(failure);
    }
    failures
}

/// Runs the campaign. Failures are listed by trial index, then check order.
pub fn run_verification(config: &VerifyConfig) -> Result<VerificationReport> {
    if config.densities.iter().any(|d| !(0.0..=1.0).contains(d)) {
        return Err(Error::InvalidArgument("densities must lie in [0, 1]".into()));
    }
    if !(0.0..=1.0).contains(&config.morphism_noise) {
        return Err(Error::InvalidArgument("morphism noise must lie in [0, 1]".into()));
    }
    let start = Instant::now();
    let work = || -> Vec<Vec<Failure>> {
        (0..config.trials)
            .into_par_iter()
            .map(|i| evaluate(i, config))
            .collect()
    };
    let per_trial = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut checks: Vec<Check> = Vec::new();
    for &c in &config.checks {
        if !checks.contains(&c) {
            checks.push(c);
        }
    }
    Ok(VerificationReport {
        trials: config.trials,
        seed: config.seed,
        checks: checks.iter().map(|c| c.name().to_string()).collect(),
        runs: checks
            .iter()
            .map(|c| (c.name().to_string(), config.trials))
            .collect(),
        failures: per_trial.into_iter().flatten().collect(),
        elapsed: start.elapsed(),
    })
}
