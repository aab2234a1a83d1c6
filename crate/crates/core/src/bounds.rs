//! The bound engine: builds the bath functions Q(T') and S(T') from a thermal
//! environment model, inverts S on the positive-temperature branch, and emits
//! the modified heat bound next to the plain -T dS one, plus the analytic
//! closed forms available for specific baths.

use crate::envmodels::ThermalEnvironment;
use crate::error::{Error, Result};
use crate::roots::brent;
use crate::specfun::lambert_w0;

/// Absolute tolerance, in nats, on the inverted entropy match.
const S_TOL: f64 = 1e-10;
/// Absolute floor added to the relative x-tolerance of the root solve.
const T_XTOL: f64 = 1e-14;
/// Width of the band around the entropy supremum treated as the beta = 0 edge.
const EDGE_TOL: f64 = 1e-12;
/// Bracket expansion gives up past this temperature.
const T_CEILING: f64 = 1e250;

/// Requested system entropy change dS_S, in nats. Always finite.
#[derive(Clone, Copy, Debug)]
pub struct EntropyChangeTarget {
    pub delta_s_system: f64,
}

impl EntropyChangeTarget {
    pub fn new(delta_s_system: f64) -> Self {
        assert!(delta_s_system.is_finite(), "entropy change target must be finite");
        EntropyChangeTarget { delta_s_system }
    }
}

/// How the entropy inversion resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    /// S(T') - S(T) hit the target within tolerance at a finite T' > 0.
    Exact,
    /// Target below the attainable minimum; clamped to T' = 0.
    ClampedAtZero,
    /// Target exactly at the bounded-spectrum supremum; T' = +inf (beta' = 0).
    ClampedAtBetaZero,
    /// Target above the attainable maximum; no physical process exists.
    Infeasible,
}

impl BoundStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundStatus::Exact => "Exact",
            BoundStatus::ClampedAtZero => "ClampedAtZero",
            BoundStatus::ClampedAtBetaZero => "ClampedAtBetaZero",
            BoundStatus::Infeasible => "Infeasible",
        }
    }
}

/// Result of inverting an environment entropy change to a reference temperature.
#[derive(Clone, Copy, Debug)]
pub struct EntropyInversion {
    /// Reference temperature T'; +inf at the beta = 0 edge, NaN when infeasible.
    pub t_prime: f64,
    pub status: BoundStatus,
}

/// Both heat bounds for one (T, dS_S) request.
#[derive(Clone, Copy, Debug)]
pub struct BoundEvaluation {
    /// Temperature whose equilibrium entropy matches the required change.
    pub reference_temperature: f64,
    /// Minimal heat the environment must absorb; +inf when infeasible.
    pub modified_bound: f64,
    /// The plain -T dS_S value.
    pub original_bound: f64,
    pub status: BoundStatus,
}

/// Heat function Q(T -> T') = E_E(T') - E_E(T), the integral of C_E.
pub fn q_of_reference(m: &impl ThermalEnvironment, t: f64, t_prime: f64) -> Result<f64> {
    Ok(m.energy(t_prime)? - m.energy(t)?)
}

/// Entropy function S(T -> T') = S_E(T') - S_E(T), the integral of C_E / tau.
pub fn s_of_reference(m: &impl ThermalEnvironment, t: f64, t_prime: f64) -> Result<f64> {
    Ok(m.entropy(t_prime)? - m.entropy(t)?)
}

/// Solve S_E(T') - S_E(T) = target on the T' >= 0 branch.
///
/// Out-of-range targets resolve to a clamped or infeasible status instead of
/// an error; errors surface only when a tabulated model cannot cover the
/// bracket or the bracket expansion overflows.
pub fn invert_entropy_change(
    m: &impl ThermalEnvironment,
    t: f64,
    target: f64,
) -> Result<EntropyInversion> {
    if target == 0.0 {
        return Ok(EntropyInversion { t_prime: t, status: BoundStatus::Exact });
    }
    let range = m.entropy_range(t)?;
    if target <= range.min_delta {
        return Ok(EntropyInversion { t_prime: 0.0, status: BoundStatus::ClampedAtZero });
    }
    if range.max_delta.is_finite() {
        if target > range.max_delta + EDGE_TOL {
            return Ok(EntropyInversion { t_prime: f64::NAN, status: BoundStatus::Infeasible });
        }
        if target >= range.max_delta - EDGE_TOL {
            return Ok(EntropyInversion {
                t_prime: f64::INFINITY,
                status: BoundStatus::ClampedAtBetaZero,
            });
        }
    }

    let s_t = m.entropy(t)?;
    // in-bracket evaluations stay within the model domain by construction
    let mut f = |tp: f64| m.entropy(tp).expect("bracketed evaluation") - s_t - target;

    let start = match m.max_temperature() {
        Some(cap) => t.max(1e-6).min(cap),
        None => t.max(1e-6),
    };
    let fs = f(start);
    let (lo, hi) = if fs == 0.0 {
        return Ok(EntropyInversion { t_prime: start, status: BoundStatus::Exact });
    } else if fs < 0.0 {
        // expand upward by doubling until the target is straddled
        let mut lo = start;
        let mut hi = start * 2.0;
        loop {
            if let Some(cap) = m.max_temperature() {
                if hi >= cap {
                    hi = cap;
                    if f(hi) < 0.0 {
                        return Err(Error::OutOfTableRange(f64::INFINITY, cap));
                    }
                    break;
                }
            }
            if hi > T_CEILING {
                return Err(Error::Domain(format!(
                    "entropy target {target:e} not reached below T' = {T_CEILING:e}"
                )));
            }
            if f(hi) >= 0.0 {
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
        (lo, hi)
    } else {
        // shrink downward; T' = 0 is admissible since target > min_delta
        let mut hi = start;
        let mut lo = start / 2.0;
        while f(lo) > 0.0 {
            hi = lo;
            lo /= 2.0;
            if lo < 1e-300 {
                lo = 0.0;
                break;
            }
        }
        (lo, hi)
    };

    let t_prime = brent(&mut f, lo, hi, T_XTOL, S_TOL)?;
    Ok(EntropyInversion { t_prime, status: BoundStatus::Exact })
}

/// The modified heat bound dQ_E >= Q(S^-1(-dS_S)) beside the -T dS_S one.
pub fn modified_bound(
    m: &impl ThermalEnvironment,
    t: f64,
    ds: EntropyChangeTarget,
) -> Result<BoundEvaluation> {
    let inv = invert_entropy_change(m, t, -ds.delta_s_system)?;
    let modified = match inv.status {
        BoundStatus::Infeasible => f64::INFINITY,
        _ => q_of_reference(m, t, inv.t_prime)?,
    };
    Ok(BoundEvaluation {
        reference_temperature: inv.t_prime,
        modified_bound: modified,
        original_bound: original_landauer_bound(t, ds),
        status: inv.status,
    })
}

/// The plain bound -T dS_S (0 at T = 0 regardless of the entropy change).
pub fn original_landauer_bound(t: f64, ds: EntropyChangeTarget) -> f64 {
    let v = -t * ds.delta_s_system;
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Closed form for the 1D waveguide: -T dS + (3 c / pi L) dS^2.
pub fn closed_form_waveguide(length: f64, speed: f64, t: f64, ds: EntropyChangeTarget) -> f64 {
    assert!(length > 0.0 && speed > 0.0);
    let s = ds.delta_s_system;
    let v = -t * s + 3.0 * speed * s * s / (std::f64::consts::PI * length);
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Closed form for the cubic phonon bath at T = 0: (3^{4/3}/4) (-dS)^{4/3} / a^{1/3}.
pub fn closed_form_phonon_t0(a: f64, ds: EntropyChangeTarget) -> Result<f64> {
    assert!(a > 0.0);
    let s = ds.delta_s_system;
    if s > 0.0 {
        return Err(Error::PositiveEntropyChange(s));
    }
    Ok(3f64.powf(4.0 / 3.0) / 4.0 * (-s).powf(4.0 / 3.0) / a.powf(1.0 / 3.0))
}

/// Which gapped-bath closed form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GappedVariant {
    /// delta (-dS) / W0(b / (-dS)), exact for the exponential-tail bath.
    LambertExact,
    /// delta (-dS) / ln(b / (-dS)), the leading logarithmic approximation.
    LogAsymptotic,
}

/// Closed form for the gapped bath at T = 0; requires dS < 0, and for the
/// logarithmic variant b / (-dS) > e so the approximation stays positive.
pub fn closed_form_gapped_t0(
    b: f64,
    delta: f64,
    ds: EntropyChangeTarget,
    variant: GappedVariant,
) -> Result<f64> {
    assert!(b > 0.0 && delta > 0.0);
    let s = ds.delta_s_system;
    if s >= 0.0 {
        return Err(Error::Domain(format!(
            "gapped closed form needs dS < 0, got {s:e}"
        )));
    }
    let r = b / -s;
    match variant {
        GappedVariant::LambertExact => Ok(delta * -s / lambert_w0(r)?),
        GappedVariant::LogAsymptotic => {
            if r <= std::f64::consts::E {
                return Err(Error::Domain(format!(
                    "log form needs b/(-dS) > e, got {r:e}"
                )));
            }
            Ok(delta * -s / r.ln())
        }
    }
}
