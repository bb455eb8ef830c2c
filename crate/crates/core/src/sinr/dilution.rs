use serde::{Deserialize, Serialize};

use super::{range, SinrParams};
use crate::{Error, Result};

/// Per-box cap on would-be transmitters: the number of pivotal boxes a
/// station's neighbours can occupy.
pub const BOX_TRANSMITTER_CAP: u32 = 21;

/// Largest `d` tried before giving up.
pub const DILUTION_SEARCH_CAP: u32 = 256;

/// Rings summed explicitly before switching to the integral tail bound.
const EXPLICIT_RINGS: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilutionConstants {
    /// Box-distance dilution constant.
    pub d: u32,
    /// Per-box transmitter cap.
    pub k: u32,
    /// ssf strength `k²·(2d+1)²`.
    pub c: u64,
}

/// Upper bound on interference power at a receiver within `√2·x` of its
/// transmitter, when ring `j ≥ 1` holds `8j` transmitters each at least
/// `j·(d+1)·x − √2·x` away (pivotal grid side `x = r/√2`).
///
/// Returns `None` when the first ring is not strictly farther than the range,
/// i.e. the bound is vacuous.
pub fn ring_interference_bound(params: &SinrParams, d: u32) -> Result<Option<f64>> {
    let r = range(params)?;
    let x = r / std::f64::consts::SQRT_2;
    let step = f64::from(d + 1) * x;
    if step <= r {
        return Ok(None);
    }
    let alpha = params.alpha;
    let mut sum = 0.0;
    for j in 1..=EXPLICIT_RINGS {
        let j = f64::from(j);
        sum += 8.0 * j / (j * step - r).powf(alpha);
    }
    // 8t/(t·step − r)^α is decreasing in t, so the tail is bounded by its integral;
    // with s = t·step − r the integral evaluates in closed form.
    let s0 = f64::from(EXPLICIT_RINGS) * step - r;
    let tail = 8.0 / (step * step)
        * (s0.powf(2.0 - alpha) / (alpha - 2.0) + r * s0.powf(1.0 - alpha) / (alpha - 1.0));
    Ok(Some(params.power * (sum + tail)))
}

/// Whether a receiver at distance `r` from its transmitter keeps SINR ≥ β
/// against the ring bound for this `d`.
pub fn dilution_feasible(params: &SinrParams, d: u32) -> Result<bool> {
    let Some(interference) = ring_interference_bound(params, d)? else {
        return Ok(false);
    };
    let r = range(params)?;
    let signal = params.power / r.powf(params.alpha);
    Ok(signal >= params.beta * (params.noise + interference))
}

/// Smallest `d` passing [`dilution_feasible`], with `c = k²·(2d+1)²`.
pub fn derive_dilution(params: &SinrParams, k: u32) -> Result<DilutionConstants> {
    params.validate()?;
    for d in 0..=DILUTION_SEARCH_CAP {
        if dilution_feasible(params, d)? {
            let side = 2 * u64::from(d) + 1;
            let c = u64::from(k) * u64::from(k) * side * side;
            return Ok(DilutionConstants { d, k, c });
        }
    }
    Err(Error::NoDilution {
        cap: DILUTION_SEARCH_CAP,
    })
}
