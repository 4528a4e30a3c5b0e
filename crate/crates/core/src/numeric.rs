//! Floating-point cross-checks of the exact kernel: evaluation, finite
//! difference brackets, and integrals along RK4 trajectories.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{PhaseVar, Var, NVARS};
use crate::scalar::to_f64;
use crate::system::PhaseSystem;
use crate::{FloatForm, RationalForm};

/// Points with `|x|`, `|y|`, `|z|` or `r` below this are rejected.
pub const MARGIN: f64 = 1e-3;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("point ({x}, {y}, {z}) is within {MARGIN} of a singular plane")]
    SingularPoint { x: f64, y: f64, z: f64 },
    #[error("no value for parameter `{0}`")]
    MissingParameter(String),
    #[error("step must be positive and duration non-negative (step {step}, duration {duration})")]
    BadStep { step: f64, duration: f64 },
    #[error("csv output failed: {0}")]
    Csv(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
    pub params: BTreeMap<String, f64>,
}

impl PhasePoint {
    pub fn new(q: [f64; 3], p: [f64; 3], params: &[(&str, f64)]) -> Self {
        PhasePoint {
            x: q[0],
            y: q[1],
            z: q[2],
            px: p[0],
            py: p[1],
            pz: p[2],
            params: params.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
        }
    }

    /// `(1, 2, 2, 0.1, -0.2, 0.15)` with `(k, k1, k2, k3) = (2, 0.3, 0.4, 0.5)`.
    pub fn default_point() -> Self {
        PhasePoint::new([1.0, 2.0, 2.0], [0.1, -0.2, 0.15], &DEFAULT_PARAMS)
    }

    /// `[x, y, z, px, py, pz]`.
    pub fn state(&self) -> [f64; 6] {
        [self.x, self.y, self.z, self.px, self.py, self.pz]
    }

    pub fn with_state(&self, s: [f64; 6]) -> Self {
        PhasePoint { x: s[0], y: s[1], z: s[2], px: s[3], py: s[4], pz: s[5], params: self.params.clone() }
    }

    pub fn get(&self, v: PhaseVar) -> f64 {
        self.state()[v.slot()]
    }

    fn shifted(&self, v: PhaseVar, d: f64) -> Self {
        let mut s = self.state();
        s[v.slot()] += d;
        self.with_state(s)
    }

    pub fn radius(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn check_margin(&self) -> Result<(), NumericError> {
        if self.x.abs() < MARGIN || self.y.abs() < MARGIN || self.z.abs() < MARGIN || self.radius() < MARGIN {
            return Err(NumericError::SingularPoint { x: self.x, y: self.y, z: self.z });
        }
        Ok(())
    }

    /// Values indexed by [`Var::index`]; parameters absent from the map are NaN.
    fn values(&self) -> [f64; NVARS] {
        let mut v = [0.0; NVARS];
        for (var, val) in [
            (Var::X, self.x),
            (Var::Y, self.y),
            (Var::Z, self.z),
            (Var::Px, self.px),
            (Var::Py, self.py),
            (Var::Pz, self.pz),
            (Var::R, self.radius()),
        ] {
            v[var.index()] = val;
        }
        for p in Var::PARAMS {
            v[p.index()] = self.params.get(p.name()).copied().unwrap_or(f64::NAN);
        }
        v
    }
}

pub const DEFAULT_PARAMS: [(&str, f64); 4] = [("k", 2.0), ("k1", 0.3), ("k2", 0.4), ("k3", 0.5)];

/// A form with `f64` coefficients, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    form: FloatForm,
    params: Vec<Var>,
}

impl Compiled {
    pub fn new(f: &RationalForm) -> Self {
        Compiled { form: f.convert(to_f64), params: Var::PARAMS.into_iter().filter(|&p| f.depends_on(p)).collect() }
    }

    pub fn eval(&self, pt: &PhasePoint) -> Result<f64, NumericError> {
        pt.check_margin()?;
        for p in &self.params {
            if !pt.params.contains_key(p.name()) {
                return Err(NumericError::MissingParameter(p.name().to_string()));
            }
        }
        Ok(self.eval_unchecked(&pt.values()))
    }

    fn eval_unchecked(&self, values: &[f64; NVARS]) -> f64 {
        self.form.eval_with(values, |c| *c).unwrap_or(f64::NAN)
    }
}

/// Evaluates `f` in double precision with `r` the positive root.
pub fn eval_float(f: &RationalForm, pt: &PhasePoint) -> Result<f64, NumericError> {
    Compiled::new(f).eval(pt)
}

/// Precompiled `f`, `g` and `{f, g}` for repeated finite-difference checks.
pub struct BracketProbe {
    f: Compiled,
    g: Compiled,
    bracket: Compiled,
}

impl BracketProbe {
    pub fn new(f: &RationalForm, g: &RationalForm) -> Self {
        BracketProbe { f: Compiled::new(f), g: Compiled::new(g), bracket: Compiled::new(&f.poisson_bracket(g)) }
    }

    /// Relative error of the central-difference bracket at `pt`, normalized by
    /// `max(1, |exact|, sum of |partial products|)`.
    pub fn relative_error(&self, pt: &PhasePoint, h: f64) -> Result<f64, NumericError> {
        if h <= 0.0 || !h.is_finite() {
            return Err(NumericError::BadStep { step: h, duration: 0.0 });
        }
        let exact = self.bracket.eval(pt)?;
        let d = |c: &Compiled, v: PhaseVar| -> Result<f64, NumericError> {
            Ok((c.eval(&pt.shifted(v, h))? - c.eval(&pt.shifted(v, -h))?) / (2.0 * h))
        };
        let mut estimate = 0.0;
        let mut scale = 1.0f64.max(exact.abs());
        let mut magnitude = 0.0;
        for (q, p) in PhaseVar::PAIRS {
            let a = d(&self.f, q)? * d(&self.g, p)?;
            let b = d(&self.f, p)? * d(&self.g, q)?;
            estimate += a - b;
            magnitude += a.abs() + b.abs();
        }
        scale = scale.max(magnitude);
        Ok((estimate - exact).abs() / scale)
    }
}

pub fn fd_bracket_check(f: &RationalForm, g: &RationalForm, pt: &PhasePoint, h: f64) -> Result<f64, NumericError> {
    BracketProbe::new(f, g).relative_error(pt, h)
}

/// Seeded regular points: positions with `0.5 <= |q_i| <= 3`, momenta in
/// `[-0.5, 0.5]`, default parameters.
pub fn seeded_points(seed: u64, n: usize) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut coord = || {
                let m: f64 = rng.gen_range(0.5..3.0);
                if rng.gen_bool(0.5) {
                    m
                } else {
                    -m
                }
            };
            let q = [coord(), coord(), coord()];
            let p = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
            PhasePoint::new(q, p, &DEFAULT_PARAMS)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub step: f64,
    pub integrator: &'static str,
    pub samples: Vec<PhasePoint>,
}

impl Trajectory {
    pub fn duration(&self) -> f64 {
        self.step * (self.samples.len().saturating_sub(1)) as f64
    }

    /// Writes `t, x, y, z, px, py, pz` rows with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), NumericError> {
        #[derive(Serialize)]
        struct Row {
            t: f64,
            x: f64,
            y: f64,
            z: f64,
            px: f64,
            py: f64,
            pz: f64,
        }
        let mut w = csv::Writer::from_writer(out);
        for (i, s) in self.samples.iter().enumerate() {
            let row = Row { t: self.step * i as f64, x: s.x, y: s.y, z: s.z, px: s.px, py: s.py, pz: s.pz };
            w.serialize(row).map_err(|e| NumericError::Csv(e.to_string()))?;
        }
        w.flush().map_err(|e| NumericError::Csv(e.to_string()))
    }
}

/// Hamilton's equations, compiled once from the symbolic gradient of `H`.
struct Flow {
    dh_dq: [Compiled; 3],
    dh_dp: [Compiled; 3],
}

impl Flow {
    fn new(h: &RationalForm) -> Self {
        let c = |v| Compiled::new(&h.derivative(v));
        Flow { dh_dq: [c(PhaseVar::X), c(PhaseVar::Y), c(PhaseVar::Z)], dh_dp: [c(PhaseVar::Px), c(PhaseVar::Py), c(PhaseVar::Pz)] }
    }

    fn rhs(&self, base: &[f64; NVARS], s: &[f64; 6]) -> [f64; 6] {
        let mut v = *base;
        for (i, var) in [Var::X, Var::Y, Var::Z, Var::Px, Var::Py, Var::Pz].into_iter().enumerate() {
            v[var.index()] = s[i];
        }
        v[Var::R.index()] = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
        let mut out = [0.0; 6];
        for i in 0..3 {
            out[i] = self.dh_dp[i].eval_unchecked(&v);
            out[i + 3] = -self.dh_dq[i].eval_unchecked(&v);
        }
        out
    }
}

fn axpy(s: &[f64; 6], a: f64, k: &[f64; 6]) -> [f64; 6] {
    std::array::from_fn(|i| s[i] + a * k[i])
}

/// Classical fixed-step RK4 for `sys` from `pt0`.
pub fn integrate(sys: &PhaseSystem, pt0: &PhasePoint, step: f64, duration: f64) -> Result<Trajectory, NumericError> {
    if !(step > 0.0 && step.is_finite() && duration >= 0.0 && duration.is_finite()) {
        return Err(NumericError::BadStep { step, duration });
    }
    let flow = Flow::new(&sys.hamiltonian);
    for c in flow.dh_dq.iter().chain(&flow.dh_dp) {
        c.eval(pt0)?;
    }
    let n = (duration / step).round() as usize;
    let base = pt0.values();
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(pt0.clone());
    let mut s = pt0.state();
    for _ in 0..n {
        let k1 = flow.rhs(&base, &s);
        let k2 = flow.rhs(&base, &axpy(&s, step / 2.0, &k1));
        let k3 = flow.rhs(&base, &axpy(&s, step / 2.0, &k2));
        let k4 = flow.rhs(&base, &axpy(&s, step, &k3));
        s = std::array::from_fn(|i| s[i] + step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        let pt = pt0.with_state(s);
        pt.check_margin()?;
        samples.push(pt);
    }
    Ok(Trajectory { step, integrator: "rk4", samples })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Drift {
    pub integral: String,
    pub drift: f64,
    pub duration: f64,
    pub step: f64,
}

/// `max_t |S(t) - S(0)| / max(1, |S(0)|)` for `H` and every integral.
pub fn conservation_report(sys: &PhaseSystem, traj: &Trajectory) -> Result<Vec<Drift>, NumericError> {
    let mut names = vec!["H"];
    names.extend(sys.integral_names());
    names
        .par_iter()
        .map(|&n| {
            let c = Compiled::new(sys.lookup(n).expect("listed name"));
            let s0 = c.eval(&traj.samples[0])?;
            let mut worst = 0.0f64;
            for pt in &traj.samples[1..] {
                worst = worst.max((c.eval(pt)? - s0).abs());
            }
            Ok(Drift { integral: n.to_string(), drift: worst / s0.abs().max(1.0), duration: traj.duration(), step: traj.step })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_is_positive_root() {
        let pt = PhasePoint::new([1.0, 2.0, 2.0], [0.0; 3], &[]);
        assert_eq!(eval_float(&RationalForm::var(Var::R), &pt).unwrap(), 3.0);
    }

    #[test]
    fn singular_plane_is_rejected() {
        let sys = crate::system::builtin(crate::system::NONDEGENERATE).unwrap();
        let pt = PhasePoint::new([1e-4, 2.0, 2.0], [0.0; 3], &DEFAULT_PARAMS);
        let k1_over_x2 = sys.expression("k1/x^2").unwrap();
        assert!(matches!(eval_float(&k1_over_x2, &pt), Err(NumericError::SingularPoint { .. })));
    }

    #[test]
    fn missing_parameter_is_reported() {
        let pt = PhasePoint::new([1.0, 2.0, 2.0], [0.0; 3], &[]);
        let f = RationalForm::var(Var::K);
        assert_eq!(eval_float(&f, &pt), Err(NumericError::MissingParameter("k".into())));
    }

    #[test]
    fn zero_duration_has_one_sample() {
        let sys = crate::system::builtin(crate::system::NONDEGENERATE).unwrap();
        let t = integrate(&sys, &PhasePoint::default_point(), 1e-3, 0.0).unwrap();
        assert_eq!(t.samples.len(), 1);
    }
}
