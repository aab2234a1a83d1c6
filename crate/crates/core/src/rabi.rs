//! Exact benchmark dynamics: a qubit coupled to one truncated bosonic mode,
//! H = omega a'a + (Omega/2) sigma_z + g (a + a') sigma_x, evolved unitarily
//! from a product of thermal states. Each time point yields the entropy and
//! heat book-keeping plus both heat bounds for the mode.

use crate::bounds::{self, EntropyChangeTarget};
use crate::envmodels::{self, EnvironmentModel};
use crate::error::{Error, Result};
use crate::fmt::float17;
use crate::linalg::{
    hermitian_eig, kron, propagator_from_eig, ComplexMatrix, EigenDecomposition, HermitianMatrix,
    Subsystem, UnitaryMatrix,
};
use crate::quantum::{
    internal_energy, mutual_information, relative_entropy_to_thermal, thermal_state,
    von_neumann_entropy, DensityMatrix, ThermalStateInfo,
};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Truncation is accepted once doubling the Fock dimension moves the
/// final-time dQ_E and dS_S by less than this.
const CERT_TOL: f64 = 1e-8;
/// Largest Fock dimension the doubling certification will instantiate.
const FOCK_CAP: usize = 240;

/// Full parameter set for one benchmark run.
#[derive(Clone, Debug)]
pub struct RabiConfig {
    /// Cavity frequency omega.
    pub omega: f64,
    /// Qubit splitting Omega.
    pub big_omega: f64,
    /// Coupling strength g.
    pub g: f64,
    /// Environment temperature of the initial mode state.
    pub temperature: f64,
    /// Qubit excitation probability of the initial state.
    pub p: f64,
    /// Fock truncation the certification starts from.
    pub fock_dim: usize,
    /// Times to evaluate, strictly ascending, first one >= 0.
    pub t_grid: Vec<f64>,
}

impl Default for RabiConfig {
    fn default() -> Self {
        RabiConfig {
            omega: 1.0,
            big_omega: 1.0,
            g: 0.2,
            temperature: 0.01,
            p: 0.1,
            fock_dim: 30,
            t_grid: time_grid(20.0, 200),
        }
    }
}

impl RabiConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.omega > 0.0
            && self.omega.is_finite()
            && self.big_omega > 0.0
            && self.big_omega.is_finite()
            && self.g >= 0.0
            && self.g.is_finite()
            && self.temperature >= 0.0
            && !self.temperature.is_nan()
            && (0.0..=1.0).contains(&self.p)
            && self.fock_dim >= 2;
        if !ok {
            return Err(Error::InvalidModel(format!("{self:?}")));
        }
        if self.t_grid.iter().any(|t| !t.is_finite())
            || self.t_grid.first().is_some_and(|&t| t < 0.0)
            || self.t_grid.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidModel("time grid must be finite and ascending".into()));
        }
        Ok(())
    }
}

/// Uniform time grid on [0, tmax] with the given number of points.
pub fn time_grid(tmax: f64, steps: usize) -> Vec<f64> {
    assert!(tmax >= 0.0 && steps >= 1);
    let denom = (steps - 1).max(1) as f64;
    (0..steps).map(|i| tmax * i as f64 / denom).collect()
}

/// Entropy/heat book-keeping of the joint state at one time.
#[derive(Clone, Copy, Debug)]
pub struct ProcessRecord {
    pub time: f64,
    /// dS_S, system entropy change in nats.
    pub delta_s_system: f64,
    /// dQ_E = tr(H_E (rho_E' - rho_E^th)).
    pub delta_q_env: f64,
    /// dS_E, environment entropy change in nats.
    pub delta_s_env: f64,
    /// I(S:E) of the evolved joint state.
    pub mutual_info: f64,
    /// Sigma = I(S:E) + D(rho_E' || rho_E^th); +inf at T = 0 off support.
    pub entropy_production: f64,
    /// Temperature whose equilibrium mode energy matches tr(H_E rho_E').
    pub reference_temperature: f64,
}

/// A record together with both heat bounds evaluated at its dS_S.
#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub record: ProcessRecord,
    pub bound_modified: f64,
    pub bound_original: f64,
}

/// Column order of the CSV emitted for sweeps.
pub const CSV_HEADER: &str =
    "t,dS_S,dQ_E,dS_E,mutual_info,sigma,T_prime,bound_modified,bound_original";

/// One CSV row, full 17-digit precision, matching CSV_HEADER.
pub fn csv_line(row: &SweepRow) -> String {
    let r = &row.record;
    [
        r.time,
        r.delta_s_system,
        r.delta_q_env,
        r.delta_s_env,
        r.mutual_info,
        r.entropy_production,
        r.reference_temperature,
        row.bound_modified,
        row.bound_original,
    ]
    .iter()
    .map(|&x| float17(x))
    .collect::<Vec<_>>()
    .join(",")
}

/// (H_total, H_env, H_sys) with ordering system (x) environment and the
/// ground-first qubit basis, H_sys = diag(-Omega/2, +Omega/2).
pub fn build_rabi_hamiltonian(
    cfg: &RabiConfig,
) -> Result<(HermitianMatrix, HermitianMatrix, HermitianMatrix)> {
    let n = cfg.fock_dim;
    let h_sys = HermitianMatrix::from_real_diag(&[-0.5 * cfg.big_omega, 0.5 * cfg.big_omega]);
    let number: Vec<f64> = (0..n).map(|k| cfg.omega * k as f64).collect();
    let h_env = HermitianMatrix::from_real_diag(&number);

    let mut sigma_x = ComplexMatrix::zeros(2, 2);
    sigma_x[(0, 1)] = 1.0.into();
    sigma_x[(1, 0)] = 1.0.into();
    // position quadrature a + a' on the truncated Fock space
    let mut x = ComplexMatrix::zeros(n, n);
    for k in 1..n {
        let root = (k as f64).sqrt();
        x[(k - 1, k)] = root.into();
        x[(k, k - 1)] = root.into();
    }

    let free = kron(h_sys.matrix(), &ComplexMatrix::identity(n))
        .add(&kron(&ComplexMatrix::identity(2), h_env.matrix()))?;
    let total = free.add(&kron(&sigma_x, &x).scale(cfg.g.into()))?;
    Ok((HermitianMatrix::new(total)?, h_env, h_sys))
}

/// diag(1-p, p) (x) thermal mode state at the configured temperature.
pub fn initial_state(cfg: &RabiConfig) -> Result<DensityMatrix> {
    let (_, h_env, _) = build_rabi_hamiltonian(cfg)?;
    let rho_s = DensityMatrix::from_populations(&[1.0 - cfg.p, cfg.p])?;
    let env = thermal_state(&h_env, envmodels::inverse(cfg.temperature))?;
    Ok(rho_s.tensor(&env.state))
}

/// Shared immutable context for evaluating records at arbitrary times: the
/// eigensystem of H_total, the initial state, and the initial-value scalars.
pub struct RabiSimulator {
    cfg: RabiConfig,
    eig: EigenDecomposition,
    h_env: HermitianMatrix,
    rho0: DensityMatrix,
    env_ref: ThermalStateInfo,
    s_sys0: f64,
    bath: EnvironmentModel,
}

impl RabiSimulator {
    /// Builds at cfg.fock_dim and doubles the truncation until the final-time
    /// record stops moving; fails once the cap would be exceeded.
    pub fn certified(cfg: RabiConfig) -> Result<Self> {
        cfg.validate()?;
        let t_cert = cfg.t_grid.last().copied().unwrap_or(0.0);
        let mut sim = Self::with_dim(&cfg, cfg.fock_dim)?;
        loop {
            let n = sim.cfg.fock_dim;
            if 2 * n > FOCK_CAP {
                return Err(Error::TruncationUnconverged(n));
            }
            let big = Self::with_dim(&cfg, 2 * n)?;
            let a = sim.record_at(t_cert)?;
            let b = big.record_at(t_cert)?;
            if (a.delta_q_env - b.delta_q_env).abs() < CERT_TOL
                && (a.delta_s_system - b.delta_s_system).abs() < CERT_TOL
            {
                return Ok(sim);
            }
            sim = big;
        }
    }

    fn with_dim(cfg: &RabiConfig, fock_dim: usize) -> Result<Self> {
        let cfg = RabiConfig { fock_dim, ..cfg.clone() };
        let (h_total, h_env, _) = build_rabi_hamiltonian(&cfg)?;
        let eig = hermitian_eig(&h_total)?;
        let rho_s = DensityMatrix::from_populations(&[1.0 - cfg.p, cfg.p])?;
        let env_ref = thermal_state(&h_env, envmodels::inverse(cfg.temperature))?;
        let rho0 = rho_s.tensor(&env_ref.state);
        let s_sys0 = von_neumann_entropy(&rho_s)?;
        let bath = EnvironmentModel::bosonic_mode(cfg.omega)?;
        Ok(RabiSimulator { cfg, eig, h_env, rho0, env_ref, s_sys0, bath })
    }

    /// The Fock dimension the certification settled on.
    pub fn fock_dim(&self) -> usize {
        self.cfg.fock_dim
    }

    pub fn config(&self) -> &RabiConfig {
        &self.cfg
    }

    /// Evolves to time t and assembles the full record.
    pub fn record_at(&self, t: f64) -> Result<ProcessRecord> {
        let n = self.cfg.fock_dim;
        let u = UnitaryMatrix::new(propagator_from_eig(&self.eig, t))?;
        let rho = self.rho0.evolve(&u)?;
        let rho_s = rho.marginal((2, n), Subsystem::System)?;
        let rho_e = rho.marginal((2, n), Subsystem::Environment)?;

        let delta_s_system = von_neumann_entropy(&rho_s)? - self.s_sys0;
        let delta_s_env = von_neumann_entropy(&rho_e)? - self.env_ref.entropy;
        let e_env = internal_energy(&rho_e, &self.h_env)?;
        let delta_q_env = e_env - self.env_ref.energy;
        let mutual_info = mutual_information(&rho, (2, n))?;
        let divergence =
            relative_entropy_to_thermal(&rho_e, &self.h_env, &self.env_ref, self.cfg.temperature)?;

        // the matching equilibrium temperature of the untruncated mode
        let nbar = e_env / self.cfg.omega;
        let reference_temperature = if nbar <= 0.0 {
            0.0
        } else {
            self.cfg.omega / (1.0 + 1.0 / nbar).ln()
        };

        Ok(ProcessRecord {
            time: t,
            delta_s_system,
            delta_q_env,
            delta_s_env,
            mutual_info,
            entropy_production: mutual_info + divergence,
            reference_temperature,
        })
    }

    /// Record plus the two heat bounds of the single-mode bath at its dS_S.
    pub fn row_at(&self, t: f64) -> Result<SweepRow> {
        let record = self.record_at(t)?;
        let ev = bounds::modified_bound(
            &self.bath,
            self.cfg.temperature,
            EntropyChangeTarget::new(record.delta_s_system),
        )?;
        Ok(SweepRow {
            record,
            bound_modified: ev.modified_bound,
            bound_original: ev.original_bound,
        })
    }

    /// One record per grid time.
    pub fn sweep(&self) -> Result<Vec<ProcessRecord>> {
        #[cfg(feature = "parallel")]
        return self.cfg.t_grid.par_iter().map(|&t| self.record_at(t)).collect();
        #[cfg(not(feature = "parallel"))]
        self.cfg.t_grid.iter().map(|&t| self.record_at(t)).collect()
    }

    /// One row (record + bounds) per grid time.
    pub fn sweep_rows(&self) -> Result<Vec<SweepRow>> {
        #[cfg(feature = "parallel")]
        return self.cfg.t_grid.par_iter().map(|&t| self.row_at(t)).collect();
        #[cfg(not(feature = "parallel"))]
        self.cfg.t_grid.iter().map(|&t| self.row_at(t)).collect()
    }
}

/// Certified single-time evaluation.
pub fn simulate_step(cfg: &RabiConfig, t: f64) -> Result<ProcessRecord> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidModel(format!("time {t} must be finite and >= 0")));
    }
    let cfg = RabiConfig { t_grid: vec![t], ..cfg.clone() };
    RabiSimulator::certified(cfg)?.record_at(t)
}

/// Certified sweep over cfg.t_grid with bounds attached.
pub fn sweep(cfg: &RabiConfig) -> Result<Vec<SweepRow>> {
    RabiSimulator::certified(cfg.clone())?.sweep_rows()
}
