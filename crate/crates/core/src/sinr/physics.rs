use super::{PhysicalInstance, Point, SinrParams};
use crate::{Error, Label, Result};

pub fn distance(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// `P / d^α`.
pub fn received_power(params: &SinrParams, d: f64) -> f64 {
    params.power / d.powf(params.alpha)
}

/// SINR from a signal power and the interfering powers, summed in iteration order.
///
/// Both the label-level [`sinr`] and the round engine's cached channel go
/// through this function so their floating-point results agree bit for bit.
pub fn sinr_from_parts(
    signal: f64,
    noise: f64,
    interference: impl IntoIterator<Item = f64>,
) -> Result<f64> {
    let mut denom = noise;
    let mut any = false;
    for p in interference {
        denom += p;
        any = true;
    }
    if denom <= 0.0 || (!any && noise == 0.0) {
        return Err(Error::UndefinedRatio);
    }
    Ok(signal / denom)
}

fn checked_position(inst: &PhysicalInstance, label: Label) -> Result<Point> {
    inst.position(label)
        .ok_or_else(|| Error::InvalidArgument(format!("no station labelled {label}")))
}

fn checked_distance(inst: &PhysicalInstance, a: Label, b: Label) -> Result<f64> {
    let d = distance(checked_position(inst, a)?, checked_position(inst, b)?);
    if d == 0.0 {
        return Err(Error::DegenerateDistance(a, b));
    }
    Ok(d)
}

/// SINR of `sender` at `receiver` when exactly `transmitters` transmit.
///
/// Interference is summed over the other transmitters in ascending label order.
pub fn sinr(
    sender: Label,
    receiver: Label,
    transmitters: &[Label],
    inst: &PhysicalInstance,
) -> Result<f64> {
    if sender == receiver {
        return Err(Error::InvalidArgument(
            "sender and receiver coincide".into(),
        ));
    }
    if !transmitters.contains(&sender) {
        return Err(Error::InvalidArgument(format!(
            "sender {sender} is not transmitting"
        )));
    }
    if transmitters.contains(&receiver) {
        return Err(Error::InvalidArgument(format!(
            "receiver {receiver} is transmitting"
        )));
    }
    let params = inst.params();
    let signal = received_power(params, checked_distance(inst, sender, receiver)?);
    let mut others: Vec<Label> = transmitters
        .iter()
        .copied()
        .filter(|&t| t != sender)
        .collect();
    others.sort_unstable();
    others.dedup();
    let mut interference = Vec::with_capacity(others.len());
    for t in others {
        interference.push(received_power(params, checked_distance(inst, t, receiver)?));
    }
    sinr_from_parts(signal, params.noise, interference)
}

/// Whether `receiver` decodes `sender`: SINR ≥ β and the weak-device condition.
///
/// Both comparisons are exact `>=`; ties count as received.
pub fn receives(
    sender: Label,
    receiver: Label,
    transmitters: &[Label],
    inst: &PhysicalInstance,
) -> Result<bool> {
    let ratio = sinr(sender, receiver, transmitters, inst)?;
    let params = inst.params();
    let signal = received_power(params, checked_distance(inst, sender, receiver)?);
    Ok(ratio >= params.beta && signal >= params.weak_threshold())
}

/// Largest distance at which a lone transmitter is still received.
///
/// With ε > 0 the weak-device condition binds, giving `(P / ((1+ε)·β·𝒩))^(1/α)`.
pub fn range(params: &SinrParams) -> Result<f64> {
    params.validate()?;
    if params.noise == 0.0 {
        return Err(Error::UnboundedRange);
    }
    Ok((params.power / params.weak_threshold()).powf(1.0 / params.alpha))
}
