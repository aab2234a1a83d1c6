//! Randomized verification: sample a system state, a global unitary and a
//! finite environment spectrum, evolve one step, and check the whole
//! inequality hierarchy with explicit slack values. Trials are reproducible
//! from their seed alone (ChaCha8, fixed streams), so any failure can be
//! replayed bit-identically.

use crate::bounds::{self, BoundEvaluation, EntropyChangeTarget};
use crate::envmodels::{self, gibbs_entropy, match_beta, EnvironmentModel};
use crate::error::Result;
use crate::linalg::{Complex64, ComplexMatrix, HermitianMatrix, Subsystem, UnitaryMatrix};
use crate::quantum::{
    internal_energy, mutual_information, relative_entropy_to_thermal, thermal_state,
    von_neumann_entropy, DensityMatrix,
};
use crate::rabi::ProcessRecord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

/// ChaCha8 stream carrying the shape draws (dimensions, spectrum).
const STREAM_SHAPE: u64 = 0;
/// ChaCha8 stream carrying the state and unitary draws.
const STREAM_PAYLOAD: u64 = 1;

/// Everything needed to reproduce one trial.
#[derive(Clone, Debug)]
pub struct TrialSpec {
    pub seed: u64,
    pub dim_system: usize,
    pub dim_env: usize,
    pub temperature: f64,
    /// Environment spectrum, ascending, ground level pinned at 0.
    pub env_levels: Vec<f64>,
}

/// Draws the trial shape for a seed: dims uniform in [2, max], spectrum
/// uniform in [0, 3] above a zero ground level.
pub fn trial_spec(seed: u64, temperature: f64, max_dims: (usize, usize)) -> TrialSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_SHAPE);
    let dim_system = rng.gen_range(2..=max_dims.0);
    let dim_env = rng.gen_range(2..=max_dims.1);
    let mut env_levels = vec![0.0];
    for _ in 1..dim_env {
        env_levels.push(rng.gen_range(0.0..3.0));
    }
    env_levels.sort_by(f64::total_cmp);
    TrialSpec { seed, dim_system, dim_env, temperature, env_levels }
}

/// One named inequality failure.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub seed: u64,
    pub inequality: String,
    /// Raw margin lhs - rhs; negative past the tolerance when recorded here.
    pub slack: f64,
}

/// Outcome of a single trial.
#[derive(Clone, Debug)]
pub struct TrialReport {
    pub spec: TrialSpec,
    pub record: ProcessRecord,
    pub bound_eval: BoundEvaluation,
    pub violations: Vec<Violation>,
}

/// Haar-distributed unitary: complex Ginibre columns orthonormalized by
/// modified Gram-Schmidt (with one reorthogonalization pass), whose positive
/// real column norms fix the phase freedom.
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> Result<UnitaryMatrix> {
    assert!(dim >= 1);
    let mut q = ginibre(dim, rng);
    for j in 0..dim {
        for _ in 0..2 {
            for i in 0..j {
                let mut r = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    r += q[(k, i)].conj() * q[(k, j)];
                }
                for k in 0..dim {
                    let sub = r * q[(k, i)];
                    q[(k, j)] -= sub;
                }
            }
        }
        let norm: f64 =
            (0..dim).map(|k| q[(k, j)].norm_sqr()).sum::<f64>().sqrt();
        for k in 0..dim {
            q[(k, j)] /= norm;
        }
    }
    UnitaryMatrix::new(q)
}

/// Random density matrix G G^dag / tr(G G^dag) from a complex Ginibre G.
pub fn random_state(dim: usize, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    assert!(dim >= 1);
    let g = ginibre(dim, rng);
    let m = g.mul(&g.adjoint())?;
    let tr = m.trace().re;
    DensityMatrix::new(m.scale((1.0 / tr).into()))
}

fn ginibre(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    m
}

/// Runs the trial's own random state and unitary.
pub fn run_trial(spec: &TrialSpec) -> Result<TrialReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(STREAM_PAYLOAD);
    let rho_s = random_state(spec.dim_system, &mut rng)?;
    let u = random_unitary(spec.dim_system * spec.dim_env, &mut rng)?;
    run_trial_with(spec, &rho_s, &u)
}

/// Evolves rho_S (x) rho_E^th one step under u and checks every inequality.
pub fn run_trial_with(
    spec: &TrialSpec,
    rho_s: &DensityMatrix,
    u: &UnitaryMatrix,
) -> Result<TrialReport> {
    let dims = (spec.dim_system, spec.dim_env);
    let h_env = HermitianMatrix::from_real_diag(&spec.env_levels);
    let env_ref = thermal_state(&h_env, envmodels::inverse(spec.temperature))?;
    let rho = rho_s.tensor(&env_ref.state).evolve(u)?;

    let rho_s1 = rho.marginal(dims, Subsystem::System)?;
    let rho_e1 = rho.marginal(dims, Subsystem::Environment)?;
    let delta_s_system = von_neumann_entropy(&rho_s1)? - von_neumann_entropy(rho_s)?;
    let s_env1 = von_neumann_entropy(&rho_e1)?;
    let delta_s_env = s_env1 - env_ref.entropy;
    let e_env1 = internal_energy(&rho_e1, &h_env)?;
    let delta_q_env = e_env1 - env_ref.energy;
    let mutual_info = mutual_information(&rho, dims)?;
    let divergence =
        relative_entropy_to_thermal(&rho_e1, &h_env, &env_ref, spec.temperature)?;

    let model = EnvironmentModel::finite_spectrum(spec.env_levels.clone())?;
    let bound_eval =
        bounds::modified_bound(&model, spec.temperature, EntropyChangeTarget::new(delta_s_system))?;

    // energy match on the unrestricted branch; negative for population
    // inversion, which is exactly the regime the checks must survive
    let beta_matched = match_beta(&spec.env_levels, e_env1);
    let s_matched = gibbs_entropy(&spec.env_levels, beta_matched);

    let record = ProcessRecord {
        time: 0.0,
        delta_s_system,
        delta_q_env,
        delta_s_env,
        mutual_info,
        entropy_production: mutual_info + divergence,
        reference_temperature: envmodels::inverse(beta_matched),
    };

    let mut violations = Vec::new();
    let mut check = |name: &str, margin: f64, tol: f64| {
        if margin < -tol {
            violations.push(Violation {
                seed: spec.seed,
                inequality: name.to_string(),
                slack: margin,
            });
        }
    };
    check("mutual_info_nonneg", mutual_info, 1e-10);
    check("local_entropy_sum", delta_s_system + delta_s_env, 1e-10);
    check("heat_above_modified", delta_q_env - bound_eval.modified_bound, 1e-9);
    check(
        "modified_above_original",
        bound_eval.modified_bound - bound_eval.original_bound,
        1e-12,
    );
    check("maxent", s_matched - s_env1, 1e-10);

    Ok(TrialReport { spec: spec.clone(), record, bound_eval, violations })
}

/// Shape of a whole fuzz run. Trial i uses seed seed0 + i and cycles through
/// the temperature list.
#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub trials: usize,
    pub seed0: u64,
    pub temperatures: Vec<f64>,
    pub max_dims: (usize, usize),
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { trials: 1000, seed0: 1, temperatures: vec![0.0, 0.1, 1.0, 10.0], max_dims: (3, 6) }
    }
}

/// Aggregated fuzz outcome, ordered by seed regardless of execution order.
#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub trials: usize,
    pub violations: Vec<Violation>,
    pub max_abs_slack_violation: f64,
}

impl FuzzReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// Runs the full matrix and aggregates violations.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzReport> {
    assert!(cfg.trials >= 1 && !cfg.temperatures.is_empty());
    let one = |i: usize| -> Result<Vec<Violation>> {
        let t = cfg.temperatures[i % cfg.temperatures.len()];
        let spec = trial_spec(cfg.seed0 + i as u64, t, cfg.max_dims);
        Ok(run_trial(&spec)?.violations)
    };
    #[cfg(feature = "parallel")]
    let all: Result<Vec<Vec<Violation>>> = (0..cfg.trials).into_par_iter().map(one).collect();
    #[cfg(not(feature = "parallel"))]
    let all: Result<Vec<Vec<Violation>>> = (0..cfg.trials).map(one).collect();

    let mut violations: Vec<Violation> = all?.into_iter().flatten().collect();
    violations.sort_by_key(|v| v.seed);
    let max_abs_slack_violation =
        violations.iter().map(|v| v.slack.abs()).fold(0.0, f64::max);
    Ok(FuzzReport { trials: cfg.trials, violations, max_abs_slack_violation })
}
