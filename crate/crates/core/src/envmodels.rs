//! Environment models. Each exposes the equilibrium triple E_E(T), S_E(T),
//! C_E(T) the bound engine consumes, plus the attainable entropy window,
//! in analytic or tabulated form.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::brent;
use crate::specfun::gamma_upper_zero;

/// Attainable window of S_E(T') - S_E(T) over reference temperatures
/// T' in [0, +inf); decides feasibility before any root solving.
#[derive(Clone, Copy, Debug)]
pub struct EntropyRange {
    pub min_delta: f64,
    pub max_delta: f64,
}

/// Equilibrium thermal functions of a bath. Implemented by the built-in
/// model registry and open for externally defined baths.
pub trait ThermalEnvironment: Sync {
    fn energy(&self, temperature: f64) -> Result<f64>;
    fn entropy(&self, temperature: f64) -> Result<f64>;
    fn heat_capacity(&self, temperature: f64) -> Result<f64>;

    /// S_E(0+), i.e. ln(ground degeneracy); 0 unless stated otherwise.
    fn ground_entropy(&self) -> f64 {
        0.0
    }

    /// Supremum of S_E over all temperatures; finite iff the spectrum is bounded.
    fn entropy_supremum(&self) -> f64 {
        f64::INFINITY
    }

    /// Largest temperature the model can evaluate (tabulated data only).
    fn max_temperature(&self) -> Option<f64> {
        None
    }

    fn entropy_range(&self, temperature: f64) -> Result<EntropyRange> {
        let s_t = self.entropy(temperature)?;
        Ok(EntropyRange {
            min_delta: (self.ground_entropy() - s_t).min(0.0),
            max_delta: (self.entropy_supremum() - s_t).max(0.0),
        })
    }
}

/// The built-in bath registry. All parameters in natural units
/// (hbar = k_B = 1); energies, temperatures and frequencies share one unit.
#[derive(Clone, Debug)]
pub enum EnvironmentModel {
    /// Single harmonic mode of frequency omega.
    BosonicMode { omega: f64 },
    /// 1D waveguide of length L with sound/light speed c (linear dispersion).
    Waveguide1D { length: f64, speed: f64 },
    /// Low-temperature phonon bath with C = a T^3.
    DebyePhonon { a: f64 },
    /// Gapped bath with C = b e^{-delta/T}.
    GappedBCS { b: f64, delta: f64 },
    /// Arbitrary finite spectrum; the one family that admits beta < 0.
    FiniteSpectrum { levels: Vec<f64> },
    /// Measured heat-capacity curve, integrated numerically.
    TabulatedHeatCapacity { table: HeatCapacityTable },
}

impl EnvironmentModel {
    pub fn bosonic_mode(omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::InvalidModel(format!("omega must be > 0, got {omega}")));
        }
        Ok(Self::BosonicMode { omega })
    }

    pub fn waveguide_1d(length: f64, speed: f64) -> Result<Self> {
        if !(length > 0.0) || !(speed > 0.0) {
            return Err(Error::InvalidModel(format!(
                "waveguide needs L, c > 0, got L={length}, c={speed}"
            )));
        }
        Ok(Self::Waveguide1D { length, speed })
    }

    pub fn debye_phonon(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidModel(format!("a must be > 0, got {a}")));
        }
        Ok(Self::DebyePhonon { a })
    }

    pub fn gapped_bcs(b: f64, delta: f64) -> Result<Self> {
        if !(b > 0.0) || !(delta > 0.0) {
            return Err(Error::InvalidModel(format!(
                "gapped model needs b, delta > 0, got b={b}, delta={delta}"
            )));
        }
        Ok(Self::GappedBCS { b, delta })
    }

    pub fn finite_spectrum(levels: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 || levels.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "finite spectrum needs >= 2 finite levels, got {levels:?}"
            )));
        }
        let mut levels = levels;
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self::FiniteSpectrum { levels })
    }

    pub fn tabulated(table: HeatCapacityTable) -> Self {
        Self::TabulatedHeatCapacity { table }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::BosonicMode { .. } => "bosonic",
            Self::Waveguide1D { .. } => "waveguide",
            Self::DebyePhonon { .. } => "phonon",
            Self::GappedBCS { .. } => "gapped",
            Self::FiniteSpectrum { .. } => "finite",
            Self::TabulatedHeatCapacity { .. } => "tabulated",
        }
    }
}

/// Mean occupation 1/(e^{omega/T} - 1); 0 at T = 0, +inf at T = +inf.
fn bose_occupation(omega: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    1.0 / (omega / t).exp_m1()
}

/// (n+1) ln(n+1) - n ln n, the single-mode thermal entropy.
fn bose_entropy(n: f64) -> f64 {
    if n <= 0.0 {
        0.0
    } else if n.is_infinite() {
        f64::INFINITY
    } else {
        (n + 1.0) * n.ln_1p() - n * n.ln()
    }
}

impl ThermalEnvironment for EnvironmentModel {
    fn energy(&self, t: f64) -> Result<f64> {
        match self {
            Self::BosonicMode { omega } => Ok(omega * bose_occupation(*omega, t)),
            Self::Waveguide1D { length, speed } => {
                Ok(std::f64::consts::PI * length * t * t / (12.0 * speed))
            }
            Self::DebyePhonon { a } => Ok(a * t.powi(4) / 4.0),
            Self::GappedBCS { b, delta } => {
                if t <= 0.0 {
                    return Ok(0.0);
                }
                let z = delta / t;
                Ok(b * (t * (-z).exp() - delta * gamma_upper_zero(z)?))
            }
            Self::FiniteSpectrum { levels } => Ok(gibbs_energy(levels, inverse(t))),
            Self::TabulatedHeatCapacity { table } => table.energy_to(t),
        }
    }

    fn entropy(&self, t: f64) -> Result<f64> {
        match self {
            Self::BosonicMode { omega } => Ok(bose_entropy(bose_occupation(*omega, t))),
            Self::Waveguide1D { length, speed } => {
                Ok(std::f64::consts::PI * length * t / (6.0 * speed))
            }
            Self::DebyePhonon { a } => Ok(a * t.powi(3) / 3.0),
            Self::GappedBCS { b, delta } => {
                if t <= 0.0 {
                    return Ok(0.0);
                }
                Ok(b * gamma_upper_zero(delta / t)?)
            }
            Self::FiniteSpectrum { levels } => Ok(gibbs_entropy(levels, inverse(t))),
            Self::TabulatedHeatCapacity { table } => table.entropy_to(t),
        }
    }

    fn heat_capacity(&self, t: f64) -> Result<f64> {
        match self {
            Self::BosonicMode { omega } => {
                if t <= 0.0 {
                    return Ok(0.0);
                }
                if t.is_infinite() {
                    return Ok(1.0);
                }
                let x = omega / t;
                let n = bose_occupation(*omega, t);
                Ok(x * x * n * (n + 1.0))
            }
            Self::Waveguide1D { length, speed } => {
                Ok(std::f64::consts::PI * length * t / (6.0 * speed))
            }
            Self::DebyePhonon { a } => Ok(a * t.powi(3)),
            Self::GappedBCS { b, delta } => {
                if t <= 0.0 {
                    return Ok(0.0);
                }
                Ok(b * (-delta / t).exp())
            }
            Self::FiniteSpectrum { levels } => Ok(gibbs_heat_capacity(levels, inverse(t))),
            Self::TabulatedHeatCapacity { table } => table.interpolate(t),
        }
    }

    fn ground_entropy(&self) -> f64 {
        match self {
            Self::FiniteSpectrum { levels } => (ground_degeneracy(levels) as f64).ln(),
            _ => 0.0,
        }
    }

    fn entropy_supremum(&self) -> f64 {
        match self {
            Self::FiniteSpectrum { levels } => (levels.len() as f64).ln(),
            _ => f64::INFINITY,
        }
    }

    fn max_temperature(&self) -> Option<f64> {
        match self {
            Self::TabulatedHeatCapacity { table } => Some(table.max_temperature()),
            _ => None,
        }
    }
}

/// Spec-shaped free functions over the registry.
pub fn evaluate_energy(m: &EnvironmentModel, temperature: f64) -> Result<f64> {
    m.energy(temperature)
}

pub fn evaluate_entropy(m: &EnvironmentModel, temperature: f64) -> Result<f64> {
    m.entropy(temperature)
}

pub fn evaluate_heat_capacity(m: &EnvironmentModel, temperature: f64) -> Result<f64> {
    m.heat_capacity(temperature)
}

pub fn entropy_range(m: &EnvironmentModel, temperature: f64) -> Result<EntropyRange> {
    ThermalEnvironment::entropy_range(m, temperature)
}

/// Temperature to inverse temperature (and back), with 0 <-> inf endpoints.
pub(crate) fn inverse(t: f64) -> f64 {
    if t == 0.0 {
        f64::INFINITY
    } else if t.is_infinite() {
        0.0
    } else {
        1.0 / t
    }
}

fn ground_degeneracy(levels: &[f64]) -> usize {
    let lo = levels.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = levels.iter().fold(1.0_f64, |m, &x| m.max(x.abs()));
    levels.iter().filter(|&&l| l - lo <= 1e-12 * scale).count()
}

/// Boltzmann populations over a finite level list at inverse temperature
/// beta in [-inf, +inf]. The dominant level's weight is pinned at 1 before
/// normalization, so no magnitude of beta overflows.
pub fn gibbs_populations(levels: &[f64], beta: f64) -> Vec<f64> {
    assert!(!levels.is_empty());
    let scale = levels.iter().fold(1.0_f64, |m, &x| m.max(x.abs()));
    if beta.is_infinite() {
        let pick = if beta > 0.0 {
            levels.iter().cloned().fold(f64::INFINITY, f64::min)
        } else {
            levels.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        };
        let hits = levels.iter().filter(|&&l| (l - pick).abs() <= 1e-12 * scale).count();
        return levels
            .iter()
            .map(|&l| if (l - pick).abs() <= 1e-12 * scale { 1.0 / hits as f64 } else { 0.0 })
            .collect();
    }
    let shift = levels.iter().map(|&l| -beta * l).fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = levels.iter().map(|&l| (-beta * l - shift).exp()).collect();
    let z: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / z).collect()
}

pub fn gibbs_energy(levels: &[f64], beta: f64) -> f64 {
    gibbs_populations(levels, beta)
        .iter()
        .zip(levels)
        .map(|(p, &l)| p * l)
        .sum()
}

pub fn gibbs_entropy(levels: &[f64], beta: f64) -> f64 {
    gibbs_populations(levels, beta)
        .iter()
        .filter(|&&p| p >= 1e-15)
        .map(|&p| -p * p.ln())
        .sum()
}

/// beta^2 Var(H), the fluctuation form of the heat capacity.
pub fn gibbs_heat_capacity(levels: &[f64], beta: f64) -> f64 {
    if beta.is_infinite() {
        return 0.0;
    }
    let p = gibbs_populations(levels, beta);
    let mean: f64 = p.iter().zip(levels).map(|(pi, &l)| pi * l).sum();
    let var: f64 = p.iter().zip(levels).map(|(pi, &l)| pi * (l - mean) * (l - mean)).sum();
    beta * beta * var
}

/// Inverse temperature whose Gibbs state has the given mean energy, over the
/// full two-sided range: +inf at the ground energy, -inf at the top,
/// negative beta above the equal-weight average.
pub fn match_beta(levels: &[f64], energy: f64) -> f64 {
    assert!(!levels.is_empty());
    let lo = levels.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = levels.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = levels.iter().fold(1.0_f64, |m, &x| m.max(x.abs()));
    if hi - lo <= 1e-15 * scale {
        return 0.0;
    }
    if energy <= lo {
        return f64::INFINITY;
    }
    if energy >= hi {
        return f64::NEG_INFINITY;
    }
    // gibbs_energy is strictly decreasing in beta; expand one side of the
    // bracket geometrically from 0 until the residual changes sign
    let f = |beta: f64| gibbs_energy(levels, beta) - energy;
    let at_zero = f(0.0);
    if at_zero == 0.0 {
        return 0.0;
    }
    let (mut a, mut b) = if at_zero > 0.0 { (0.0, 1.0) } else { (-1.0, 0.0) };
    loop {
        if at_zero > 0.0 {
            if f(b) <= 0.0 {
                break;
            }
            b *= 2.0;
            if b > 1e7 {
                return f64::INFINITY;
            }
        } else {
            if f(a) >= 0.0 {
                break;
            }
            a *= 2.0;
            if a < -1e7 {
                return f64::NEG_INFINITY;
            }
        }
    }
    brent(f, a, b, 1e-12, 0.0).expect("monotone bracket")
}

/// Piecewise-linear heat-capacity data anchored at (T=0, C=0).
#[derive(Clone, Debug)]
pub struct HeatCapacityTable {
    temps: Vec<f64>,
    caps: Vec<f64>,
}

impl HeatCapacityTable {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidModel(format!(
                "heat-capacity table needs >= 2 rows, got {}",
                samples.len()
            )));
        }
        if samples[0].0 != 0.0 {
            return Err(Error::InvalidModel(format!(
                "heat-capacity table must start at T = 0, got T = {}",
                samples[0].0
            )));
        }
        if samples[0].1 != 0.0 {
            // otherwise the entropy integrand C/tau diverges at the anchor
            return Err(Error::InvalidModel(format!(
                "heat capacity at T = 0 must be 0, got {}",
                samples[0].1
            )));
        }
        for pair in samples.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::InvalidModel(format!(
                    "table temperatures must strictly increase, got {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if samples.iter().any(|&(t, c)| !t.is_finite() || !c.is_finite() || c < 0.0) {
            return Err(Error::InvalidModel(
                "table entries must be finite with C >= 0".into(),
            ));
        }
        let (temps, caps) = samples.into_iter().unzip();
        Ok(Self { temps, caps })
    }

    /// Two-column CSV with a header row: T,C per line.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if idx == 0 || line.trim().is_empty() {
                continue;
            }
            let mut cells = line.split(',');
            let t = cells.next().map(str::trim).unwrap_or("");
            let c = cells.next().map(str::trim);
            let (Some(c), None) = (c, cells.next()) else {
                return Err(Error::InvalidModel(format!(
                    "table line {} must have exactly two columns: {line:?}",
                    idx + 1
                )));
            };
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidModel(format!("bad number {s:?} on table line {}", idx + 1))
                })
            };
            samples.push((parse(t)?, parse(c)?));
        }
        Self::new(samples)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidModel(format!("cannot read {}: {e}", path.display())))?;
        Self::from_csv_str(&text)
    }

    pub fn max_temperature(&self) -> f64 {
        *self.temps.last().unwrap()
    }

    fn check_range(&self, t: f64) -> Result<()> {
        if !(0.0..=self.max_temperature()).contains(&t) {
            return Err(Error::OutOfTableRange(t, self.max_temperature()));
        }
        Ok(())
    }

    fn segment(&self, t: f64) -> usize {
        match self.temps.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.temps.len() - 2),
            Err(i) => i - 1,
        }
    }

    pub fn interpolate(&self, t: f64) -> Result<f64> {
        self.check_range(t)?;
        let i = self.segment(t);
        let frac = (t - self.temps[i]) / (self.temps[i + 1] - self.temps[i]);
        Ok(self.caps[i] + frac * (self.caps[i + 1] - self.caps[i]))
    }

    /// Trapezoidal int_0^t C dtau.
    pub fn energy_to(&self, t: f64) -> Result<f64> {
        self.check_range(t)?;
        let i = self.segment(t);
        let mut acc = 0.0;
        for k in 0..i {
            acc += 0.5 * (self.caps[k] + self.caps[k + 1]) * (self.temps[k + 1] - self.temps[k]);
        }
        let c_t = self.interpolate(t)?;
        Ok(acc + 0.5 * (self.caps[i] + c_t) * (t - self.temps[i]))
    }

    /// Trapezoidal int_0^t C/tau dtau, with the integrand at tau = 0
    /// extended by its limit (the initial slope of C).
    pub fn entropy_to(&self, t: f64) -> Result<f64> {
        self.check_range(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let integrand = |k: usize| {
            if self.temps[k] == 0.0 {
                self.caps[1] / self.temps[1]
            } else {
                self.caps[k] / self.temps[k]
            }
        };
        let i = self.segment(t);
        let mut acc = 0.0;
        for k in 0..i {
            acc += 0.5 * (integrand(k) + integrand(k + 1)) * (self.temps[k + 1] - self.temps[k]);
        }
        let g_t = self.interpolate(t)? / t;
        Ok(acc + 0.5 * (integrand(i) + g_t) * (t - self.temps[i]))
    }
}

/// JSON-facing model description; `kind` selects the variant and the other
/// fields mirror the CLI flags.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelConfig {
    Bosonic {
        omega: f64,
    },
    Waveguide {
        #[serde(rename = "L")]
        length: f64,
        c: f64,
    },
    Phonon {
        a: f64,
    },
    Gapped {
        b: f64,
        delta: f64,
    },
    Finite {
        levels: Vec<f64>,
    },
    Tabulated {
        csv: String,
    },
}

impl ModelConfig {
    pub fn build(&self) -> Result<EnvironmentModel> {
        match self {
            Self::Bosonic { omega } => EnvironmentModel::bosonic_mode(*omega),
            Self::Waveguide { length, c } => EnvironmentModel::waveguide_1d(*length, *c),
            Self::Phonon { a } => EnvironmentModel::debye_phonon(*a),
            Self::Gapped { b, delta } => EnvironmentModel::gapped_bcs(*b, *delta),
            Self::Finite { levels } => EnvironmentModel::finite_spectrum(levels.clone()),
            Self::Tabulated { csv } => {
                Ok(EnvironmentModel::tabulated(HeatCapacityTable::from_csv_path(Path::new(csv))?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN_2: f64 = std::f64::consts::LN_2;
    const PI: f64 = std::f64::consts::PI;

    fn analytic_models() -> Vec<EnvironmentModel> {
        vec![
            EnvironmentModel::bosonic_mode(1.0).unwrap(),
            EnvironmentModel::waveguide_1d(2.0, 1.0).unwrap(),
            EnvironmentModel::debye_phonon(0.7).unwrap(),
            EnvironmentModel::gapped_bcs(1.3, 0.9).unwrap(),
            EnvironmentModel::finite_spectrum(vec![0.0, 0.7, 1.5, 3.0]).unwrap(),
        ]
    }

    #[test]
    fn constructor_validation() {
        assert!(EnvironmentModel::bosonic_mode(0.0).is_err());
        assert!(EnvironmentModel::waveguide_1d(1.0, -1.0).is_err());
        assert!(EnvironmentModel::debye_phonon(f64::NAN).is_err());
        assert!(EnvironmentModel::gapped_bcs(1.0, 0.0).is_err());
        assert!(EnvironmentModel::finite_spectrum(vec![1.0]).is_err());
        assert!(EnvironmentModel::finite_spectrum(vec![0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn bosonic_fixed_points() {
        let m = EnvironmentModel::bosonic_mode(1.0).unwrap();
        assert_eq!(m.energy(0.0).unwrap(), 0.0);
        assert_eq!(m.entropy(0.0).unwrap(), 0.0);
        // solving e^{omega/T} = 2 puts exactly one quantum in the mode
        let t = 1.0 / LN_2;
        assert!((m.energy(t).unwrap() - 1.0).abs() < 1e-12);
        assert!((m.entropy(t).unwrap() - 2.0 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn waveguide_fixed_points() {
        let m = EnvironmentModel::waveguide_1d(12.0, 1.0).unwrap();
        assert!((m.energy(1.0).unwrap() - PI).abs() < 1e-14);
        let m = EnvironmentModel::waveguide_1d(6.0, 1.0).unwrap();
        assert!((m.entropy(2.0).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert_eq!(m.heat_capacity(2.0).unwrap(), m.entropy(2.0).unwrap());
    }

    #[test]
    fn phonon_fixed_points() {
        let m = EnvironmentModel::debye_phonon(2.0).unwrap();
        assert!((m.heat_capacity(3.0).unwrap() - 54.0).abs() < 1e-12);
        assert!((m.energy(3.0).unwrap() - 2.0 * 81.0 / 4.0).abs() < 1e-12);
        assert!((m.entropy(3.0).unwrap() - 2.0 * 27.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gapped_heat_capacity_suppressed_at_low_t() {
        let m = EnvironmentModel::gapped_bcs(1.0, 1.0).unwrap();
        assert!(m.heat_capacity(1e-3).unwrap() < 1e-300);
        assert_eq!(m.energy(0.0).unwrap(), 0.0);
        assert_eq!(m.entropy(0.0).unwrap(), 0.0);
    }

    #[test]
    fn gapped_exact_approaches_low_t_asymptotics() {
        // leading forms: S ~ (b T/delta) e^{-delta/T}, E ~ (b T^2/delta) e^{-delta/T};
        // corrections are O(T/delta), so agreement tightens as T drops
        let b = 1.7;
        let delta = 0.9;
        let m = EnvironmentModel::gapped_bcs(b, delta).unwrap();
        let asym = |t: f64| {
            let w = (-delta / t).exp() * b * t / delta;
            (w * t, w)
        };
        let rel = |exact: f64, approx: f64| (approx / exact - 1.0).abs();
        let t = delta / 50.0;
        let (e_a, s_a) = asym(t);
        assert!(rel(m.energy(t).unwrap(), e_a) < 0.05);
        assert!(rel(m.entropy(t).unwrap(), s_a) < 0.05);
        let t = delta / 10.0;
        let (e_a, s_a) = asym(t);
        assert!(rel(m.energy(t).unwrap(), e_a) < 0.19);
        assert!(rel(m.entropy(t).unwrap(), s_a) < 0.10);
    }

    #[test]
    fn two_level_schottky_peak_value() {
        let m = EnvironmentModel::finite_spectrum(vec![0.0, 1.0]).unwrap();
        let e = std::f64::consts::E;
        let want = e / ((1.0 + e) * (1.0 + e));
        assert!((m.heat_capacity(1.0).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.19661193324148185).abs() < 1e-16);
    }

    #[test]
    fn finite_spectrum_energy_decreases_over_two_sided_beta() {
        let levels = vec![0.0, 0.4, 1.1, 3.0];
        // strictly monotone on a finite grid; the +-inf endpoints saturate to
        // the extreme levels within one ulp so they get equality checks instead
        let grid = [-12.0, -3.0, -0.5, 0.0, 0.5, 3.0, 12.0];
        let mut prev = gibbs_energy(&levels, f64::NEG_INFINITY);
        assert_eq!(prev, 3.0);
        for &beta in &grid {
            let e = gibbs_energy(&levels, beta);
            assert!(e < prev, "beta={beta} energy={e}");
            prev = e;
        }
        assert!(gibbs_energy(&levels, f64::INFINITY) < prev);
        assert_eq!(gibbs_energy(&levels, f64::INFINITY), 0.0);
    }

    #[test]
    fn entropy_ranges() {
        let m = EnvironmentModel::finite_spectrum(vec![0.0, 1.0]).unwrap();
        let r = m.entropy_range(f64::INFINITY).unwrap();
        assert!(r.max_delta.abs() < 1e-15);
        let r = m.entropy_range(0.0).unwrap();
        assert_eq!(r.min_delta, 0.0);
        assert!((r.max_delta - LN_2).abs() < 1e-15);
        let m = EnvironmentModel::waveguide_1d(1.0, 1.0).unwrap();
        assert_eq!(m.entropy_range(3.0).unwrap().max_delta, f64::INFINITY);
        assert!(m.entropy_range(3.0).unwrap().min_delta < 0.0);
    }

    #[test]
    fn degenerate_ground_entropy() {
        let m = EnvironmentModel::finite_spectrum(vec![0.0, 0.0, 2.0]).unwrap();
        assert!((m.ground_entropy() - LN_2).abs() < 1e-15);
        assert!((m.entropy(0.0).unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_heat_capacity() {
        // dE/dT == C and dS/dT == C/T for every analytic model
        for m in analytic_models() {
            for &t in &[0.2, 1.0, 5.0] {
                let h = 1e-5 * t;
                let c = m.heat_capacity(t).unwrap();
                let de = (m.energy(t + h).unwrap() - m.energy(t - h).unwrap()) / (2.0 * h);
                let ds = (m.entropy(t + h).unwrap() - m.entropy(t - h).unwrap()) / (2.0 * h);
                assert!(
                    (de - c).abs() <= 1e-5 * c.abs().max(1e-12),
                    "{} T={t}: dE/dT={de} C={c}",
                    m.kind_name()
                );
                assert!(
                    (ds - c / t).abs() <= 1e-5 * (c / t).abs().max(1e-12),
                    "{} T={t}: dS/dT={ds} C/T={}",
                    m.kind_name(),
                    c / t
                );
            }
        }
    }

    #[test]
    fn energy_and_entropy_increase_with_temperature() {
        for m in analytic_models() {
            let mut prev_e = -1.0;
            let mut prev_s = -1.0;
            for &t in &[0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0] {
                let e = m.energy(t).unwrap();
                let s = m.entropy(t).unwrap();
                assert!(e > prev_e, "{} not increasing in E at T={t}", m.kind_name());
                assert!(s > prev_s, "{} not increasing in S at T={t}", m.kind_name());
                prev_e = e;
                prev_s = s;
            }
        }
    }

    #[test]
    fn match_beta_round_trips() {
        let levels = vec![0.0, 0.3, 1.9, 3.0];
        for &beta in &[-12.0, -2.0, -0.1, 0.0, 0.1, 2.0, 12.0] {
            let e = gibbs_energy(&levels, beta);
            let back = match_beta(&levels, e);
            // E(beta) flattens exponentially toward the extreme levels, so
            // the invertible precision degrades as |beta| grows
            let tol = if beta.abs() > 2.0 { 1e-4 } else { 1e-9 };
            assert!((back - beta).abs() < tol, "beta={beta} back={back}");
        }
        assert_eq!(match_beta(&levels, 0.0), f64::INFINITY);
        assert_eq!(match_beta(&levels, 3.0), f64::NEG_INFINITY);
    }

    #[test]
    fn tabulated_tracks_its_analytic_source() {
        // sample the phonon law C = a T^3 and integrate it back
        let a = 0.8;
        let samples: Vec<(f64, f64)> =
            (0..=400).map(|i| i as f64 * 0.01).map(|t| (t, a * t * t * t)).collect();
        let table = HeatCapacityTable::new(samples).unwrap();
        let m = EnvironmentModel::tabulated(table);
        let exact = EnvironmentModel::debye_phonon(a).unwrap();
        for &t in &[0.35, 1.0, 2.77, 4.0] {
            let e = m.energy(t).unwrap();
            let s = m.entropy(t).unwrap();
            assert!((e - exact.energy(t).unwrap()).abs() < 2e-4 * (1.0 + t.powi(4)));
            assert!((s - exact.entropy(t).unwrap()).abs() < 2e-4 * (1.0 + t.powi(3)));
        }
        assert!(matches!(m.energy(4.01), Err(Error::OutOfTableRange(_, _))));
        assert!(matches!(m.heat_capacity(-0.1), Err(Error::OutOfTableRange(_, _))));
        assert_eq!(m.max_temperature(), Some(4.0));
    }

    #[test]
    fn table_csv_parsing() {
        let table =
            HeatCapacityTable::from_csv_str("T,C\n0,0\n0.5,0.25\n1.0,1.0\n").unwrap();
        assert_eq!(table.max_temperature(), 1.0);
        assert!((table.interpolate(0.75).unwrap() - 0.625).abs() < 1e-15);

        assert!(HeatCapacityTable::from_csv_str("T,C\n0,0\n").is_err());
        assert!(HeatCapacityTable::from_csv_str("T,C\n0.1,0\n1,1\n").is_err());
        assert!(HeatCapacityTable::from_csv_str("T,C\n0,0.5\n1,1\n").is_err());
        assert!(HeatCapacityTable::from_csv_str("T,C\n0,0\n1,-1\n").is_err());
        assert!(HeatCapacityTable::from_csv_str("T,C\n0,0\n1,oops\n").is_err());
        assert!(HeatCapacityTable::from_csv_str("T,C\n0,0\n1,1,9\n").is_err());
    }

    #[test]
    fn model_config_round_trips() {
        let cases = [
            r#"{"kind":"bosonic","omega":1.0}"#,
            r#"{"kind":"waveguide","L":3.0,"c":1.5}"#,
            r#"{"kind":"phonon","a":0.5}"#,
            r#"{"kind":"gapped","b":2.0,"delta":0.3}"#,
            r#"{"kind":"finite","levels":[0.0,1.0,2.5]}"#,
        ];
        for text in cases {
            let cfg: ModelConfig = serde_json::from_str(text).unwrap();
            let back: ModelConfig =
                serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
            assert_eq!(cfg, back);
            cfg.build().unwrap();
        }
        assert!(serde_json::from_str::<ModelConfig>(r#"{"kind":"swamp"}"#).is_err());
        assert!(serde_json::from_str::<ModelConfig>(r#"{"kind":"bosonic","omga":1.0}"#).is_err());
    }
}
