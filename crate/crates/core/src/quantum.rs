//! Quantum states and the information measures built on them: thermal
//! states, von Neumann and relative entropy, mutual information, internal
//! and non-equilibrium free energy.
//!
//! Natural units throughout: hbar = k_B = 1, entropies in nats.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, partial_trace, ComplexMatrix, HermitianMatrix, Subsystem, UnitaryMatrix,
};

/// Entry-wise Hermiticity and trace tolerance for admissible states.
const STATE_TOL: f64 = 1e-12;
/// Eigenvalues below this contribute nothing to entropy sums (0 ln 0 := 0).
const ENTROPY_FLOOR: f64 = 1e-15;
/// Support threshold: sigma eigenvalues below this count as rank deficiency.
const SUPPORT_TOL: f64 = 1e-13;
/// Rho weight on a deficient sigma direction above this means D = +infinity.
const SUPPORT_WEIGHT_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates all three state invariants; the eigenvalue check costs one
    /// full decomposition, so hot paths that conjugate existing states use
    /// the crate-internal constructor instead.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidState(format!(
                "density matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let asym = m.hermitian_asymmetry();
        if asym > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity violated by {asym:.3e}"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace is {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let state = Self { mat: m.symmetrized() };
        let min = state.eigenvalues()?.into_iter().fold(f64::INFINITY, f64::min);
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(state)
    }

    /// Diagonal state from a probability vector.
    pub fn from_populations(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(p))
    }

    /// Skips validation; for states produced by operations that preserve
    /// the invariants exactly (tensor products, unitary conjugation,
    /// partial traces of valid states).
    pub(crate) fn from_valid_parts(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.hermitian_asymmetry() <= 1e-10);
        debug_assert!((mat.trace().re - 1.0).abs() <= 1e-10);
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Spectrum in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.decompose()?.eigenvalues)
    }

    /// U rho U^dag.
    pub fn evolve(&self, u: &UnitaryMatrix) -> Result<DensityMatrix> {
        let um = u.matrix();
        let rotated = um.mul(&self.mat)?.mul(&um.adjoint())?;
        Ok(Self::from_valid_parts(rotated.symmetrized()))
    }

    /// rho_S (x) rho_E.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_valid_parts(crate::linalg::kron(&self.mat, &other.mat))
    }

    /// Marginal on one tensor factor of a (dim_s * dim_e) joint state.
    pub fn marginal(&self, dims: (usize, usize), keep: Subsystem) -> Result<DensityMatrix> {
        Ok(Self::from_valid_parts(partial_trace(&self.mat, dims, keep)?))
    }

    fn decompose(&self) -> Result<crate::linalg::EigenDecomposition> {
        hermitian_eig(&HermitianMatrix::new(self.mat.clone())?)
    }
}

/// Thermal state together with the scalars every caller wants alongside it.
#[derive(Clone, Debug)]
pub struct ThermalStateInfo {
    pub state: DensityMatrix,
    /// ln Z; at beta = +inf this is ln(ground degeneracy) when the ground
    /// energy is exactly 0, otherwise -inf (positive ground energy) or +inf.
    pub log_partition: f64,
    pub energy: f64,
    pub entropy: f64,
}

/// Gibbs state exp(-beta H)/Z. beta = +inf yields the uniform mixture over
/// the ground eigenspace; weights are shifted by the ground energy before
/// exponentiation so large beta never overflows.
pub fn thermal_state(h: &HermitianMatrix, beta: f64) -> Result<ThermalStateInfo> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidBeta(beta));
    }
    let eig = hermitian_eig(h)?;
    let n = eig.eigenvalues.len();
    let e0 = eig.eigenvalues[0];
    let scale = eig.eigenvalues.iter().fold(1.0_f64, |m, &x| m.max(x.abs()));

    let (populations, log_partition) = if beta.is_infinite() {
        let g = eig
            .eigenvalues
            .iter()
            .filter(|&&lam| lam - e0 <= 1e-10 * scale)
            .count();
        let mut p = vec![0.0; n];
        for (pi, &lam) in p.iter_mut().zip(&eig.eigenvalues) {
            if lam - e0 <= 1e-10 * scale {
                *pi = 1.0 / g as f64;
            }
        }
        let log_z = if e0 == 0.0 {
            (g as f64).ln()
        } else if e0 > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
        (p, log_z)
    } else {
        let weights: Vec<f64> =
            eig.eigenvalues.iter().map(|&lam| (-beta * (lam - e0)).exp()).collect();
        let z_shifted: f64 = weights.iter().sum();
        let p = weights.iter().map(|w| w / z_shifted).collect();
        (p, z_shifted.ln() - beta * e0)
    };

    let energy: f64 = populations.iter().zip(&eig.eigenvalues).map(|(p, lam)| p * lam).sum();
    let entropy = shannon_entropy(&populations);
    let pm = ComplexMatrix::from_real_diag(&populations);
    let v = &eig.eigenvectors;
    let mat = v.mul(&pm)?.mul(&v.adjoint())?.symmetrized();
    Ok(ThermalStateInfo { state: DensityMatrix::from_valid_parts(mat), log_partition, energy, entropy })
}

fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x >= ENTROPY_FLOOR)
        .map(|&x| -x * x.ln())
        .sum()
}

/// S(rho) = -tr(rho ln rho) in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(shannon_entropy(&rho.eigenvalues()?))
}

/// D(rho || sigma) = tr(rho ln rho) - tr(rho ln sigma); +inf when rho has
/// weight outside the support of sigma.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy of dim {} state against dim {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let sig = sigma.decompose()?;
    // weight of rho along each eigendirection of sigma
    let v = &sig.eigenvectors;
    let rho_in_sigma_basis = v.adjoint().mul(rho.matrix())?.mul(v)?;
    let mut cross = 0.0;
    for (i, &s) in sig.eigenvalues.iter().enumerate() {
        let w = rho_in_sigma_basis[(i, i)].re;
        if s < SUPPORT_TOL {
            if w > SUPPORT_WEIGHT_TOL {
                return Ok(f64::INFINITY);
            }
        } else {
            cross += w * s.ln();
        }
    }
    Ok(-von_neumann_entropy(rho)? - cross)
}

/// I(S:E) = S(rho_S) + S(rho_E) - S(rho_SE) for a joint state on S (x) E.
pub fn mutual_information(rho_joint: &DensityMatrix, dims: (usize, usize)) -> Result<f64> {
    if rho_joint.dim() != dims.0 * dims.1 {
        return Err(Error::DimensionMismatch(format!(
            "joint dim {} does not factor as {}x{}",
            rho_joint.dim(),
            dims.0,
            dims.1
        )));
    }
    let rho_s = rho_joint.marginal(dims, Subsystem::System)?;
    let rho_e = rho_joint.marginal(dims, Subsystem::Environment)?;
    Ok(von_neumann_entropy(&rho_s)? + von_neumann_entropy(&rho_e)?
        - von_neumann_entropy(rho_joint)?)
}

/// D(rho || rho_th(T)) evaluated through the thermal reference's spectral
/// data, -S(rho) + beta tr(H rho) + ln Z, instead of the generic eigenvalue
/// cutoff. Stays finite for arbitrarily cold references whose excited-state
/// populations underflow the generic support threshold; at T = 0 it is +inf
/// unless rho lives inside the ground eigenspace.
pub fn relative_entropy_to_thermal(
    rho: &DensityMatrix,
    h: &HermitianMatrix,
    reference: &ThermalStateInfo,
    temperature: f64,
) -> Result<f64> {
    let energy = internal_energy(rho, h)?;
    let entropy = von_neumann_entropy(rho)?;
    if temperature > 0.0 {
        return Ok(energy / temperature - entropy + reference.log_partition);
    }
    let levels = hermitian_eig(h)?.eigenvalues;
    let e0 = levels[0];
    let scale = levels.iter().fold(1.0_f64, |m, &x| m.max(x.abs()));
    if energy - e0 > 1e-12 * scale {
        return Ok(f64::INFINITY);
    }
    let g = levels.iter().filter(|&&l| l - e0 <= 1e-10 * scale).count();
    Ok((g as f64).ln() - entropy)
}

/// tr(H rho); the imaginary residue must be round-off only.
pub fn internal_energy(rho: &DensityMatrix, h: &HermitianMatrix) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "energy of dim {} state under dim {} Hamiltonian",
            rho.dim(),
            h.dim()
        )));
    }
    let e = h.matrix().mul(rho.matrix())?.trace();
    assert!(e.im.abs() < 1e-10, "tr(H rho) imaginary part {:.3e}", e.im);
    Ok(e.re)
}

/// F(rho) = tr(H rho) - T S(rho).
pub fn nonequilibrium_free_energy(
    rho: &DensityMatrix,
    h: &HermitianMatrix,
    temperature: f64,
) -> Result<f64> {
    debug_assert!(temperature >= 0.0);
    Ok(internal_energy(rho, h)? - temperature * von_neumann_entropy(rho)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unitary_from_hamiltonian, Complex64};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const LN_2: f64 = std::f64::consts::LN_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut StdRng) -> HermitianMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        HermitianMatrix::new(m.symmetrized()).unwrap()
    }

    // G G^dag normalized to unit trace: Hermitian, PSD, tr = 1 by construction
    fn random_state(n: usize, rng: &mut StdRng) -> DensityMatrix {
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let gg = g.mul(&g.adjoint()).unwrap();
        let tr = gg.trace().re;
        DensityMatrix::new(gg.scale(c(1.0 / tr, 0.0))).unwrap()
    }

    #[test]
    fn state_validation_rejects_bad_inputs() {
        let not_unit = ComplexMatrix::from_real_diag(&[0.9, 0.2]);
        assert!(matches!(DensityMatrix::new(not_unit), Err(Error::InvalidState(_))));
        let negative = ComplexMatrix::from_real_diag(&[1.1, -0.1]);
        assert!(matches!(DensityMatrix::new(negative), Err(Error::InvalidState(_))));
        let skewed = ComplexMatrix::new(
            2,
            2,
            vec![c(0.5, 0.0), c(0.1, 0.0), c(0.3, 0.0), c(0.5, 0.0)],
        )
        .unwrap();
        assert!(matches!(DensityMatrix::new(skewed), Err(Error::InvalidState(_))));
    }

    #[test]
    fn thermal_state_infinite_temperature() {
        let h = HermitianMatrix::from_real_diag(&[0.5, -0.5]);
        let th = thermal_state(&h, 0.0).unwrap();
        assert!((th.state.matrix()[(0, 0)].re - 0.5).abs() < 1e-14);
        assert!((th.state.matrix()[(1, 1)].re - 0.5).abs() < 1e-14);
        assert!((th.entropy - LN_2).abs() < 1e-14);
        assert!((th.log_partition - LN_2).abs() < 1e-14);
    }

    #[test]
    fn thermal_state_zero_temperature() {
        let h = HermitianMatrix::from_real_diag(&[0.0, 1.0]);
        let th = thermal_state(&h, f64::INFINITY).unwrap();
        assert!((th.state.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(th.state.matrix()[(1, 1)].norm() < 1e-14);
        assert_eq!(th.entropy, 0.0);
        assert_eq!(th.log_partition, 0.0);
        assert_eq!(th.energy, 0.0);
    }

    #[test]
    fn thermal_state_degenerate_ground_space() {
        let h = HermitianMatrix::from_real_diag(&[0.0, 0.0, 1.0]);
        let th = thermal_state(&h, f64::INFINITY).unwrap();
        assert!((th.state.matrix()[(0, 0)].re - 0.5).abs() < 1e-14);
        assert!((th.state.matrix()[(1, 1)].re - 0.5).abs() < 1e-14);
        assert!((th.entropy - LN_2).abs() < 1e-14);
        assert!((th.log_partition - LN_2).abs() < 1e-14);
    }

    #[test]
    fn thermal_state_two_level_gibbs() {
        let h = HermitianMatrix::from_real_diag(&[0.0, 1.0]);
        let th = thermal_state(&h, 1.0).unwrap();
        let p0 = 1.0 / (1.0 + (-1.0f64).exp());
        assert!((th.state.matrix()[(0, 0)].re - p0).abs() < 1e-14);
        assert!((th.state.matrix()[(1, 1)].re - (1.0 - p0)).abs() < 1e-14);
        assert!((th.state.matrix()[(0, 0)].re - 0.7310585786300049).abs() < 1e-14);
        assert!((th.log_partition - (1.0 + (-1.0f64).exp()).ln()).abs() < 1e-14);
        assert!((th.energy - internal_energy(&th.state, &h).unwrap()).abs() < 1e-10);
        assert!((th.entropy - von_neumann_entropy(&th.state).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn thermal_state_rejects_bad_beta() {
        let h = HermitianMatrix::from_real_diag(&[0.0, 1.0]);
        assert!(matches!(thermal_state(&h, -1.0), Err(Error::InvalidBeta(_))));
        assert!(matches!(thermal_state(&h, f64::NAN), Err(Error::InvalidBeta(_))));
    }

    #[test]
    fn entropy_of_named_states() {
        let pure = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        assert_eq!(von_neumann_entropy(&pure).unwrap(), 0.0);
        let mixed = DensityMatrix::from_populations(&[0.5, 0.5]).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - LN_2).abs() < 1e-14);
        let biased = DensityMatrix::from_populations(&[0.9, 0.1]).unwrap();
        assert!((von_neumann_entropy(&biased).unwrap() - 0.3250829733914482).abs() < 1e-13);
    }

    #[test]
    fn entropy_is_unitarily_invariant() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..10 {
            let rho = random_state(5, &mut rng);
            let u = unitary_from_hamiltonian(&random_hermitian(5, &mut rng), 1.0).unwrap();
            let s1 = von_neumann_entropy(&rho).unwrap();
            let s2 = von_neumann_entropy(&rho.evolve(&u).unwrap()).unwrap();
            assert!((s1 - s2).abs() < 1e-10);
        }
    }

    #[test]
    fn relative_entropy_of_named_pairs() {
        let rho = DensityMatrix::from_populations(&[0.9, 0.1]).unwrap();
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
        let uniform = DensityMatrix::from_populations(&[0.5, 0.5]).unwrap();
        let d = relative_entropy(&rho, &uniform).unwrap();
        assert!((d - 0.3680642071684972).abs() < 1e-13);
        let pure = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        assert_eq!(relative_entropy(&uniform, &pure).unwrap(), f64::INFINITY);
    }

    #[test]
    fn relative_entropy_nonnegative_on_random_pairs() {
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..20 {
            let rho = random_state(4, &mut rng);
            let sigma = random_state(4, &mut rng);
            assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn mutual_information_of_named_joints() {
        let rho_s = DensityMatrix::from_populations(&[0.7, 0.3]).unwrap();
        let rho_e = DensityMatrix::from_populations(&[0.5, 0.25, 0.25]).unwrap();
        let product = rho_s.tensor(&rho_e);
        assert!(mutual_information(&product, (2, 3)).unwrap().abs() < 1e-10);

        let mut bell = ComplexMatrix::zeros(4, 4);
        for &i in &[0usize, 3] {
            for &j in &[0usize, 3] {
                bell[(i, j)] = c(0.5, 0.0);
            }
        }
        let bell = DensityMatrix::new(bell).unwrap();
        assert!((mutual_information(&bell, (2, 2)).unwrap() - 2.0 * LN_2).abs() < 1e-10);

        let classical = DensityMatrix::from_populations(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&classical, (2, 2)).unwrap() - LN_2).abs() < 1e-10);
    }

    #[test]
    fn mutual_information_nonnegative_on_random_joints() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..10 {
            let joint = random_state(6, &mut rng);
            assert!(mutual_information(&joint, (2, 3)).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn internal_energy_of_named_states() {
        let h = HermitianMatrix::from_real_diag(&[0.0, 1.0]);
        let ground = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        assert_eq!(internal_energy(&ground, &h).unwrap(), 0.0);
        let uniform = DensityMatrix::from_populations(&[0.5, 0.5]).unwrap();
        assert!((internal_energy(&uniform, &h).unwrap() - 0.5).abs() < 1e-14);
        let th = thermal_state(&h, 1.0).unwrap();
        assert!((internal_energy(&th.state, &h).unwrap() - 0.2689414213699951).abs() < 1e-13);
    }

    #[test]
    fn free_energy_of_named_states() {
        let h = HermitianMatrix::from_real_diag(&[0.0, 1.0]);
        let uniform = DensityMatrix::from_populations(&[0.5, 0.5]).unwrap();
        assert_eq!(
            nonequilibrium_free_energy(&uniform, &h, 0.0).unwrap(),
            internal_energy(&uniform, &h).unwrap()
        );
        let f = nonequilibrium_free_energy(&uniform, &h, 1.0).unwrap();
        assert!((f - (0.5 - LN_2)).abs() < 1e-14);
        // a thermal state's free energy is -T ln Z
        let temperature = 0.7;
        let th = thermal_state(&h, 1.0 / temperature).unwrap();
        let f_th = nonequilibrium_free_energy(&th.state, &h, temperature).unwrap();
        assert!((f_th + temperature * th.log_partition).abs() < 1e-10);
    }

    #[test]
    fn free_energy_decomposes_against_thermal_reference() {
        // F(rho) = F_th(T) + T D(rho || rho_th) for every rho; the spectrum
        // is scaled with T so no thermal population underflows the generic
        // relative-entropy support threshold
        let mut rng = StdRng::seed_from_u64(37);
        for &temperature in &[0.1, 1.0, 10.0] {
            for n in [2usize, 5, 8] {
                let h = HermitianMatrix::new(
                    random_hermitian(n, &mut rng)
                        .matrix()
                        .scale(c(0.3 * f64::min(temperature, 1.0), 0.0)),
                )
                .unwrap();
                let rho = random_state(n, &mut rng);
                let th = thermal_state(&h, 1.0 / temperature).unwrap();
                let lhs = nonequilibrium_free_energy(&rho, &h, temperature).unwrap();
                let rhs = -temperature * th.log_partition
                    + temperature * relative_entropy(&rho, &th.state).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-10,
                    "T={} n={} lhs={} rhs={}",
                    temperature,
                    n,
                    lhs,
                    rhs
                );
            }
        }
    }

    #[test]
    fn thermal_relative_entropy_matches_generic_form() {
        let mut rng = StdRng::seed_from_u64(43);
        let h = random_hermitian(4, &mut rng);
        let rho = random_state(4, &mut rng);
        let temperature = 0.8;
        let th = thermal_state(&h, 1.0 / temperature).unwrap();
        let generic = relative_entropy(&rho, &th.state).unwrap();
        let spectral = relative_entropy_to_thermal(&rho, &h, &th, temperature).unwrap();
        assert!((generic - spectral).abs() < 1e-10);
    }

    #[test]
    fn thermal_relative_entropy_survives_deep_cold() {
        // at T = 0.01 the excited thermal populations underflow the generic
        // support threshold; the spectral form must still be finite and obey
        // the free-energy identity
        let h = HermitianMatrix::from_real_diag(&[0.0, 1.0, 2.0]);
        let rho = DensityMatrix::from_populations(&[0.9, 0.08, 0.02]).unwrap();
        let temperature = 0.01;
        let th = thermal_state(&h, 1.0 / temperature).unwrap();
        let d = relative_entropy_to_thermal(&rho, &h, &th, temperature).unwrap();
        assert!(d.is_finite());
        let lhs = nonequilibrium_free_energy(&rho, &h, temperature).unwrap();
        let rhs = -temperature * th.log_partition + temperature * d;
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn thermal_relative_entropy_diverges_at_zero_only_off_support() {
        let h = HermitianMatrix::from_real_diag(&[0.0, 1.0]);
        let th = thermal_state(&h, f64::INFINITY).unwrap();
        let excited = DensityMatrix::from_populations(&[0.7, 0.3]).unwrap();
        assert_eq!(
            relative_entropy_to_thermal(&excited, &h, &th, 0.0).unwrap(),
            f64::INFINITY
        );
        let ground = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        assert_eq!(relative_entropy_to_thermal(&ground, &h, &th, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn thermal_state_maximizes_entropy_at_fixed_energy() {
        // Gibbs weights on the spectrum of H matched to tr(H rho), with the
        // sign of beta free, majorize the entropy of every state.
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..10 {
            let n = 4;
            let h = random_hermitian(n, &mut rng);
            let rho = random_state(n, &mut rng);
            let target = internal_energy(&rho, &h).unwrap();
            let levels = hermitian_eig(&h).unwrap().eigenvalues;
            let gibbs_energy = |beta: f64| -> f64 {
                let shift = levels.iter().map(|&l| -beta * l).fold(f64::MIN, f64::max);
                let w: Vec<f64> = levels.iter().map(|&l| (-beta * l - shift).exp()).collect();
                let z: f64 = w.iter().sum();
                w.iter().zip(&levels).map(|(wi, &l)| wi / z * l).sum()
            };
            let beta = crate::roots::brent(
                |b| gibbs_energy(b) - target,
                -200.0,
                200.0,
                1e-12,
                0.0,
            )
            .unwrap();
            let shift = levels.iter().map(|&l| -beta * l).fold(f64::MIN, f64::max);
            let w: Vec<f64> = levels.iter().map(|&l| (-beta * l - shift).exp()).collect();
            let z: f64 = w.iter().sum();
            let p: Vec<f64> = w.iter().map(|wi| wi / z).collect();
            let s_thermal = super::shannon_entropy(&p);
            let s_rho = von_neumann_entropy(&rho).unwrap();
            assert!(s_thermal >= s_rho - 1e-10, "{} < {}", s_thermal, s_rho);
        }
    }
}
