//! Zeno / anti-Zeno classification from the interval-dependence of the decay
//! rate, and rectangular phase maps over pairs of control axes.
//!
//! A point is Zeno when the rate grows with the measurement interval (so
//! measuring more often slows the decay), anti-Zeno when it shrinks, and flat
//! inside a small threshold band. The classifier is a pointwise sign of a
//! central difference; rates that oscillate in the interval may alternate
//! class along a ridge, which is reported as-is rather than smoothed away.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boson::{self, CoherentVariant, FockBase};
use crate::dynamics::{self, MeasurementSchedule, Preparation};
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::numerics::linspace;
use crate::rates::{self, RateMethod};

/// Pointwise class of the rate's interval dependence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZenoClass {
    Zeno,
    AntiZeno,
    Flat,
}

impl ZenoClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZenoClass::Zeno => "zeno",
            ZenoClass::AntiZeno => "anti_zeno",
            ZenoClass::Flat => "flat",
        }
    }
}

impl std::fmt::Display for ZenoClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sweepable control axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Tau,
    Phi,
    OmegaA,
    /// Fock occupation; grid values are rounded to the nearest integer >= 1.
    N,
    /// Coherent amplitude magnitude |alpha|.
    AlphaMag,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::Tau => "tau",
            Axis::Phi => "phi",
            Axis::OmegaA => "omega_a",
            Axis::N => "n",
            Axis::AlphaMag => "alpha_mag",
        }
    }
}

/// One rectangular sweep axis: `steps` grid points from `min` to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::argument("axis must have at least one step"));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::argument("axis bounds must be finite"));
        }
        if self.axis == Axis::Tau && (self.min <= 0.0 || self.max <= 0.0) {
            return Err(Error::argument("tau axis must be strictly positive"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.steps)
    }
}

/// Classifier knobs; `None` fields fall back to h = tau/100 and
/// epsilon = 1e-6 g^2 (stated in derived-rate units).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Classifier {
    pub h: Option<f64>,
    pub epsilon: Option<f64>,
}

/// A grid point: base parameters with the axis values applied.
#[derive(Debug, Clone, Copy)]
struct GridPoint {
    params: SystemParams,
    preparation: Preparation,
    tau: f64,
}

fn apply_axis(point: &mut GridPoint, axis: Axis, value: f64) -> Result<()> {
    match axis {
        Axis::Tau => {
            if value.is_nan() || value <= 0.0 {
                return Err(Error::argument("tau grid value must be positive"));
            }
            point.tau = value;
        }
        Axis::Phi => point.params.flux = value,
        Axis::OmegaA => point.params.onsite = value,
        Axis::N => {
            let n = value.round();
            if n.is_nan() || n < 1.0 {
                return Err(Error::argument("fock axis values must round to >= 1"));
            }
            match point.preparation {
                Preparation::Fock(_) => point.preparation = Preparation::Fock(n as usize),
                _ => return Err(Error::argument("fock axis requires a fock preparation")),
            }
        }
        Axis::AlphaMag => {
            if value.is_nan() || value < 0.0 {
                return Err(Error::argument("alpha_mag axis values must be >= 0"));
            }
            match point.preparation {
                Preparation::Coherent(alpha) => {
                    let unit = if alpha.norm() > 0.0 {
                        alpha / alpha.norm()
                    } else {
                        Complex64::new(1.0, 0.0)
                    };
                    point.preparation = Preparation::Coherent(unit * value);
                }
                _ => {
                    return Err(Error::argument(
                        "alpha_mag axis requires a coherent preparation",
                    ))
                }
            }
        }
    }
    Ok(())
}

/// Decay rate of one (parameters, preparation, method) point at interval tau.
pub fn rate_for(
    params: &SystemParams,
    preparation: Preparation,
    method: RateMethod,
    tau: f64,
) -> Result<f64> {
    match (preparation, method) {
        (Preparation::Fermion, RateMethod::TimeIntegral | RateMethod::DerivedSinc) => {
            Ok(rates::decay_rate_derived_sinc(params, tau)?.value)
        }
        (Preparation::Fermion, RateMethod::PaperSinc) => {
            Ok(rates::decay_rate_paper_sinc(params, tau)?.value)
        }
        (Preparation::Fermion, RateMethod::GoldenRuleBroadened) => {
            Ok(rates::golden_rule_broadened(params, rates::default_broadening(params))?.value)
        }
        (Preparation::Fermion, RateMethod::GoldenRuleContinuum) => {
            Ok(rates::golden_rule_continuum(params.hopping, params.coupling, params.onsite)?.value)
        }
        (Preparation::Fermion, RateMethod::WignerWeisskopf) => {
            Ok(rates::wigner_weisskopf_pole(params)?.estimate.value)
        }
        (Preparation::Fermion, RateMethod::Oracle) => {
            let schedule = MeasurementSchedule::new(tau, 1)?;
            Ok(dynamics::measured_survival(params, &schedule)?.effective_rate)
        }
        (Preparation::Fock(n), RateMethod::TimeIntegral | RateMethod::DerivedSinc) => {
            Ok(boson::fock_rate(params, n, tau, FockBase::TimeIntegral)?.value)
        }
        (Preparation::Fock(n), RateMethod::PaperSinc) => {
            Ok(boson::fock_rate(params, n, tau, FockBase::PaperSinc)?.value)
        }
        (Preparation::Fock(n), RateMethod::Oracle) => {
            let schedule = MeasurementSchedule::new(tau, 1)?;
            Ok(dynamics::fock_survival(params, n, &schedule)?.effective_rate)
        }
        (Preparation::Coherent(alpha), RateMethod::CoherentPaper2cos) => Ok(
            boson::coherent_rate_paper(params, alpha, tau, CoherentVariant::TwoCos)?
                .paper
                .value,
        ),
        (Preparation::Coherent(alpha), RateMethod::CoherentPaper4cos) => Ok(
            boson::coherent_rate_paper(params, alpha, tau, CoherentVariant::FourCos)?
                .paper
                .value,
        ),
        (Preparation::Coherent(alpha), RateMethod::Oracle) => {
            let schedule = MeasurementSchedule::new(tau, 1)?;
            Ok(dynamics::coherent_survival_oracle(params, alpha, &schedule)?.effective_rate)
        }
        (prep, method) => Err(Error::argument(format!(
            "rate method {method} is not defined for preparation {prep:?}"
        ))),
    }
}

/// Central-difference derivative of the selected rate with respect to the
/// measurement interval.
pub fn rate_derivative(
    params: &SystemParams,
    preparation: Preparation,
    method: RateMethod,
    tau: f64,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::argument(format!(
            "derivative step must be positive and finite, got {h}"
        )));
    }
    if tau - h <= 0.0 {
        return Err(Error::argument(format!(
            "derivative stencil leaves the domain: tau = {tau}, h = {h}"
        )));
    }
    let above = rate_for(params, preparation, method, tau + h)?;
    let below = rate_for(params, preparation, method, tau - h)?;
    Ok((above - below) / (2.0 * h))
}

/// Methods that differ from the derived rate by a constant positive factor;
/// the classifier threshold is rescaled by it so classification survives a
/// method swap exactly.
fn method_scale(method: RateMethod) -> f64 {
    match method {
        RateMethod::PaperSinc => 1.0 / (2.0 * std::f64::consts::PI),
        _ => 1.0,
    }
}

/// Pointwise class: zeno for dR/dtau > eps, anti-zeno for dR/dtau < -eps,
/// flat in between.
pub fn classify(
    params: &SystemParams,
    preparation: Preparation,
    method: RateMethod,
    tau: f64,
    classifier: Classifier,
) -> Result<ZenoClass> {
    params.validate()?;
    let h = classifier.h.unwrap_or(tau / 100.0);
    let epsilon = classifier
        .epsilon
        .unwrap_or(1e-6 * params.coupling * params.coupling);
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::argument("classifier threshold must be >= 0"));
    }
    let slope = rate_derivative(params, preparation, method, tau, h)?;
    let threshold = epsilon * method_scale(method);
    Ok(if slope > threshold {
        ZenoClass::Zeno
    } else if slope < -threshold {
        ZenoClass::AntiZeno
    } else {
        ZenoClass::Flat
    })
}

/// Rectangular map of rates and classes over two control axes.
///
/// Cells are row-major with the x axis fastest: `values[iy * nx + ix]`. Every
/// cell is an independent pure evaluation, so the grid may be filled in
/// parallel and the result is identical at any thread count.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMap {
    pub axis_x: AxisSpec,
    pub axis_y: AxisSpec,
    pub method: RateMethod,
    pub values: Vec<f64>,
    pub classes: Vec<ZenoClass>,
}

impl PhaseMap {
    pub fn nx(&self) -> usize {
        self.axis_x.steps
    }

    pub fn ny(&self) -> usize {
        self.axis_y.steps
    }

    pub fn at(&self, ix: usize, iy: usize) -> (f64, ZenoClass) {
        let idx = iy * self.nx() + ix;
        (self.values[idx], self.classes[idx])
    }
}

/// Evaluates the rate and class on every cell of the grid.
///
/// `base_tau` supplies the measurement interval when tau is not one of the
/// axes; axis values override the base parameters cell by cell.
pub fn phase_map(
    params: &SystemParams,
    preparation: Preparation,
    base_tau: f64,
    axes: (AxisSpec, AxisSpec),
    method: RateMethod,
    classifier: Classifier,
) -> Result<PhaseMap> {
    params.validate()?;
    let (axis_x, axis_y) = axes;
    axis_x.validate()?;
    axis_y.validate()?;
    if axis_x.axis == axis_y.axis {
        return Err(Error::argument("the two sweep axes must differ"));
    }
    if !(base_tau > 0.0 && base_tau.is_finite()) {
        return Err(Error::argument(format!(
            "base measurement interval must be positive, got {base_tau}"
        )));
    }

    let xs = axis_x.values();
    let ys = axis_y.values();
    let cells: Vec<(usize, usize)> = ys
        .iter()
        .enumerate()
        .flat_map(|(iy, _)| xs.iter().enumerate().map(move |(ix, _)| (ix, iy)))
        .collect();

    let evaluated: Vec<Result<(f64, ZenoClass)>> = cells
        .par_iter()
        .map(|&(ix, iy)| {
            let mut point = GridPoint {
                params: *params,
                preparation,
                tau: base_tau,
            };
            apply_axis(&mut point, axis_x.axis, xs[ix])?;
            apply_axis(&mut point, axis_y.axis, ys[iy])?;
            let rate = rate_for(&point.params, point.preparation, method, point.tau)?;
            let class = classify(
                &point.params,
                point.preparation,
                method,
                point.tau,
                classifier,
            )?;
            Ok((rate, class))
        })
        .collect();

    let mut values = Vec::with_capacity(evaluated.len());
    let mut classes = Vec::with_capacity(evaluated.len());
    for cell in evaluated {
        let (rate, class) = cell?;
        values.push(rate);
        classes.push(class);
    }
    Ok(PhaseMap {
        axis_x,
        axis_y,
        method,
        values,
        classes,
    })
}
