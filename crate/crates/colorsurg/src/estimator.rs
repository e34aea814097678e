//! Closed-form resource accounting for the color-code fast-block scheme and
//! the surface-code fast-block scheme.
//!
//! Failure accounting: a scheme with footprint `F d^2` qubits and runtime
//! `c T d` cycles holds `F` logical patches for `c T d` cycles and needs
//! `F * c T d * p_L <= budget`, where `p_L` is the per-patch per-cycle rate at
//! its surface-equivalent distance. For the color code the surface-equivalent
//! distance is converted to a color distance with the threshold log ratio.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const P_TH_SURFACE: f64 = 0.0067;
pub const P_TH_COLOR: f64 = 0.0037;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ColorFastBlock,
    SurfaceFastBlock,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::ColorFastBlock => "color-fast-block",
            Scheme::SurfaceFastBlock => "surface-fast-block",
        }
    }

    /// Physical qubits per d^2.
    pub fn space_coefficient(self, n: u64) -> f64 {
        let n = n as f64;
        match self {
            Scheme::ColorFastBlock => 1.5 * n,
            Scheme::SurfaceFastBlock => 2.0 * n + (8.0 * n).sqrt() + 1.0,
        }
    }

    /// Code cycles per (T d).
    pub fn time_coefficient(self) -> f64 {
        match self {
            Scheme::ColorFastBlock => 0.5,
            Scheme::SurfaceFastBlock => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    pub n: u64,
    pub t_count: f64,
    pub budget: f64,
}

impl AlgorithmSpec {
    pub fn new(n: u64, t_count: f64, budget: f64) -> Result<Self> {
        if n == 0 || t_count.is_nan() || t_count <= 0.0 || budget.is_nan() || budget <= 0.0 || budget >= 1.0 {
            return Err(Error::Validation(format!(
                "need n > 0, tcount > 0 and budget in (0,1); got n={n}, tcount={t_count}, budget={budget}"
            )));
        }
        Ok(AlgorithmSpec { n, t_count, budget })
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 || p >= P_TH_COLOR.min(P_TH_SURFACE) {
        return Err(Error::Validation(format!(
            "physical error rate {p} must lie in (0, {P_TH_COLOR})"
        )));
    }
    Ok(())
}

/// Per-cycle logical error rate of a distance `d` surface code patch.
pub fn surface_logical_rate(p: f64, d: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 || d.is_nan() || d < 1.0 {
        return Err(Error::Validation(format!("invalid p={p} or d={d}")));
    }
    Ok(0.1 * (100.0 * p).powf((d + 1.0) / 2.0))
}

/// Color distance giving the same logical rate as surface distance `ds`.
pub fn equivalent_color_distance(p: f64, ds: f64) -> Result<f64> {
    check_p(p)?;
    Ok(ds * (p / P_TH_SURFACE).ln() / (p / P_TH_COLOR).ln())
}

/// Smallest odd integer not below `x`.
pub fn round_up_odd(x: f64) -> u64 {
    let c = (x - 1e-9).ceil().max(1.0) as u64;
    if c.is_multiple_of(2) {
        c + 1
    } else {
        c
    }
}

/// Real-valued surface-equivalent distance at which `scheme` meets the budget.
/// Solves `F * c T * d_native(d) * p_L(p, d) = budget` by fixed-point iteration.
pub fn surface_equivalent_distance(scheme: Scheme, alg: &AlgorithmSpec, p: f64) -> Result<f64> {
    check_p(p)?;
    let ratio = match scheme {
        Scheme::ColorFastBlock => equivalent_color_distance(p, 1.0)?,
        Scheme::SurfaceFastBlock => 1.0,
    };
    let area = scheme.space_coefficient(alg.n);
    let tc = scheme.time_coefficient() * alg.t_count;
    let base = (100.0 * p).ln();
    if base >= 0.0 {
        return Err(Error::Validation(format!("p={p} gives no suppression")));
    }
    let mut d = 3.0f64;
    for _ in 0..200 {
        let cycles = area * tc * ratio * d;
        let next = 2.0 * (alg.budget / (0.1 * cycles)).ln() / base - 1.0;
        if !next.is_finite() {
            return Err(Error::Runtime(format!("distance solve diverged at p={p}")));
        }
        let next = next.max(1.0);
        if (next - d).abs() < 1e-12 {
            return Ok(next);
        }
        d = next;
    }
    Ok(d)
}

/// Smallest odd surface distance meeting the budget for the surface scheme.
pub fn required_surface_distance(alg: &AlgorithmSpec, p: f64) -> Result<u64> {
    check_p(p)?;
    let area = Scheme::SurfaceFastBlock.space_coefficient(alg.n);
    let mut d = 3u64;
    while d < 10_001 {
        let total = area * alg.t_count * d as f64 * surface_logical_rate(p, d as f64)?;
        if total <= alg.budget {
            return Ok(d);
        }
        d += 2;
    }
    Err(Error::Validation(format!("no distance up to 10001 meets the budget at p={p}")))
}

/// Native distance (real-valued) each scheme needs.
pub fn required_distance(scheme: Scheme, alg: &AlgorithmSpec, p: f64) -> Result<f64> {
    let ds = surface_equivalent_distance(scheme, alg, p)?;
    match scheme {
        Scheme::ColorFastBlock => equivalent_color_distance(p, ds),
        Scheme::SurfaceFastBlock => Ok(ds),
    }
}

pub fn footprint(scheme: Scheme, n: u64, d: f64) -> f64 {
    scheme.space_coefficient(n) * d * d
}

pub fn runtime(scheme: Scheme, t_count: f64, d: f64) -> f64 {
    scheme.time_coefficient() * t_count * d
}

pub fn spacetime(scheme: Scheme, n: u64, t_count: f64, d: f64) -> f64 {
    footprint(scheme, n, d) * runtime(scheme, t_count, d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub ds_real: f64,
    pub dc_real: f64,
    pub ds: u64,
    pub dc: u64,
    pub qubits_surface: f64,
    pub qubits_color: f64,
    pub cycles_surface: f64,
    pub cycles_color: f64,
    pub spacetime_surface: f64,
    pub spacetime_color: f64,
    pub qubit_ratio: f64,
    pub time_ratio: f64,
    pub spacetime_ratio: f64,
    pub qubit_ratio_odd: f64,
    pub spacetime_ratio_odd: f64,
}

/// One comparison point. Footprint, runtime and ratio columns use the
/// real-valued distances; the `_odd` ratios use the odd-rounded distances.
pub fn compare_point(alg: &AlgorithmSpec, p: f64) -> Result<SweepRow> {
    let (s, c) = (Scheme::SurfaceFastBlock, Scheme::ColorFastBlock);
    let ds_real = required_distance(s, alg, p)?;
    let dc_real = required_distance(c, alg, p)?;
    let (ds, dc) = (round_up_odd(ds_real), round_up_odd(dc_real));
    let qs = footprint(s, alg.n, ds_real);
    let qc = footprint(c, alg.n, dc_real);
    let ts = runtime(s, alg.t_count, ds_real);
    let tc = runtime(c, alg.t_count, dc_real);
    let (dsf, dcf) = (ds as f64, dc as f64);
    Ok(SweepRow {
        p,
        ds_real,
        dc_real,
        ds,
        dc,
        qubits_surface: qs,
        qubits_color: qc,
        cycles_surface: ts,
        cycles_color: tc,
        spacetime_surface: qs * ts,
        spacetime_color: qc * tc,
        qubit_ratio: qc / qs,
        time_ratio: tc / ts,
        spacetime_ratio: (qc * tc) / (qs * ts),
        qubit_ratio_odd: footprint(c, alg.n, dcf) / footprint(s, alg.n, dsf),
        spacetime_ratio_odd: spacetime(c, alg.n, alg.t_count, dcf) / spacetime(s, alg.n, alg.t_count, dsf),
    })
}

/// Log-spaced grid of `points` rates from `p_min` to `p_max`.
pub fn log_grid(p_min: f64, p_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(p_min > 0.0 && p_max >= p_min) || points == 0 {
        return Err(Error::Validation(format!("bad grid {p_min}..{p_max} with {points} points")));
    }
    if points == 1 {
        return Ok(vec![p_min]);
    }
    let (a, b) = (p_min.ln(), p_max.ln());
    Ok((0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp()).collect())
}

pub fn compare_sweep(alg: &AlgorithmSpec, grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.iter().map(|&p| compare_point(alg, p)).collect()
}

/// Rate where the color footprint first drops below the surface footprint,
/// found by bisection on the real-valued distances within `[lo, hi]`.
pub fn qubit_crossover(alg: &AlgorithmSpec, lo: f64, hi: f64) -> Result<Option<f64>> {
    let f = |p: f64| compare_point(alg, p).map(|r| r.qubit_ratio - 1.0);
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a)?, f(b)?);
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    for _ in 0..100 {
        let m = (a * b).sqrt();
        if f(m)?.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(Some((a * b).sqrt()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub scheme: String,
    pub space_d2: f64,
    pub time_td: f64,
    pub spacetime_td3: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1 {
    pub n: u64,
    pub rows: Vec<Table1Row>,
    pub spacetime_ratio_surface_over_color: f64,
}

pub fn table1(n: u64) -> Table1 {
    let rows: Vec<Table1Row> = [Scheme::ColorFastBlock, Scheme::SurfaceFastBlock]
        .iter()
        .map(|&s| Table1Row {
            scheme: s.name().into(),
            space_d2: s.space_coefficient(n),
            time_td: s.time_coefficient(),
            spacetime_td3: s.space_coefficient(n) * s.time_coefficient(),
        })
        .collect();
    let ratio = rows[1].spacetime_td3 / rows[0].spacetime_td3;
    Table1 {
        n,
        rows,
        spacetime_ratio_surface_over_color: ratio,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistillationOverhead {
    pub scheme: String,
    pub space_d2: f64,
    pub time_units: f64,
    pub spacetime: f64,
}

/// Number of commuting multi-qubit measurements in 15-to-1 distillation.
pub const DISTILL_MEASUREMENTS: f64 = 11.0;
/// Speed-up of the color scheme on the measurement sequence.
pub const DISTILL_COLOR_SPEEDUP: f64 = 1.8;

pub fn distillation_overhead(scheme: Scheme) -> DistillationOverhead {
    let (space, time) = match scheme {
        Scheme::ColorFastBlock => (10.5, DISTILL_MEASUREMENTS / DISTILL_COLOR_SPEEDUP),
        Scheme::SurfaceFastBlock => (11.0, DISTILL_MEASUREMENTS),
    };
    DistillationOverhead {
        scheme: scheme.name().into(),
        space_d2: space,
        time_units: time,
        spacetime: space * time,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        assert!((surface_logical_rate(1e-3, 11.0).unwrap() - 1e-7).abs() < 1e-18);
        assert!((surface_logical_rate(1e-4, 7.0).unwrap() - 1e-9).abs() < 1e-20);
        let dc = equivalent_color_distance(1e-3, 11.0).unwrap();
        assert!((dc - 15.99).abs() < 0.01);
        assert_eq!(round_up_odd(dc), 17);
        assert!(equivalent_color_distance(5e-3, 11.0).is_err());
    }

    #[test]
    fn table1_ratio() {
        let t = table1(100);
        assert_eq!(t.rows[0].space_d2, 150.0);
        assert_eq!(t.rows[0].spacetime_td3, 75.0);
        assert!((t.rows[1].space_d2 - 229.28).abs() < 0.01);
        assert!((t.spacetime_ratio_surface_over_color - 3.057).abs() < 0.001);
    }

    #[test]
    fn monotone_in_tcount() {
        let p = 1e-3;
        let a = required_surface_distance(&AlgorithmSpec::new(100, 1e8, 0.01).unwrap(), p).unwrap();
        let b = required_surface_distance(&AlgorithmSpec::new(100, 2e8, 0.01).unwrap(), p).unwrap();
        assert!(b >= a);
        assert_eq!(required_surface_distance(&AlgorithmSpec::new(1, 1.0, 0.999).unwrap(), 1e-4).unwrap(), 3);
    }
}
