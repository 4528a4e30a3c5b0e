use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::VerifyError;
use crate::kernel::{PhaseVar, Valuation, Var};
use crate::scalar::{int, ratio};
use crate::system::PhaseSystem;
use crate::{RationalForm, Scalar};

/// Regular positions with a rational radius: `(x, y, z, r)`.
pub const RATIONAL_POINTS: [(i64, i64, i64, i64); 3] = [(1, 2, 2, 3), (2, 3, 6, 7), (3, 4, 12, 13)];

/// Exact rank of the phase-space Jacobian of `names` at `point`.
pub fn jacobian_rank(sys: &PhaseSystem, names: &[&str], point: &Valuation<Scalar>) -> Result<usize, VerifyError> {
    let grads = gradients(sys, names)?;
    rank_at(&grads, point)
}

type Gradient = Vec<RationalForm>;

fn gradients(sys: &PhaseSystem, names: &[&str]) -> Result<Vec<Gradient>, VerifyError> {
    names
        .iter()
        .map(|n| {
            let f = sys.lookup(n).ok_or_else(|| VerifyError::UnknownGenerator(n.to_string()))?;
            Ok(PhaseVar::ALL.iter().map(|&v| f.derivative(v)).collect())
        })
        .collect()
}

fn rank_at(grads: &[Gradient], point: &Valuation<Scalar>) -> Result<usize, VerifyError> {
    let rows = grads
        .iter()
        .map(|g| g.iter().map(|d| d.eval_rational(point)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(crate::linalg::rank(&rows))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Scalar {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-9..=9);
    }
    ratio(n, rng.gen_range(1..=5))
}

/// A point at `(x, y, z, r)` with seeded random rational momenta and parameters.
pub fn sample_point(position: (i64, i64, i64, i64), rng: &mut ChaCha8Rng) -> Valuation<Scalar> {
    let (x, y, z, r) = position;
    let mut pairs = vec![(Var::X, int(x)), (Var::Y, int(y)), (Var::Z, int(z)), (Var::R, int(r))];
    for v in [Var::Px, Var::Py, Var::Pz, Var::K, Var::K1, Var::K2, Var::K3] {
        pairs.push((v, random_rational(rng)));
    }
    Valuation::from_pairs(pairs).expect("all symbols assigned")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    pub names: Vec<String>,
    /// `(point label, maximum rank over the samples at that point)`.
    pub per_point: Vec<(String, usize)>,
    pub max: usize,
}

/// Maximum Jacobian rank at each published point over `samples` seeded draws.
pub fn generic_rank(sys: &PhaseSystem, names: &[&str], seed: u64, samples: usize) -> Result<RankReport, VerifyError> {
    let grads = gradients(sys, names)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_point = Vec::new();
    for pos in RATIONAL_POINTS {
        let mut best = 0;
        for _ in 0..samples.max(1) {
            let mut point = sample_point(pos, &mut rng);
            // parameters the system does not carry are fixed at zero
            for p in Var::PARAMS {
                if !sys.params.contains(&p) {
                    point.set(p, int(0));
                }
            }
            best = best.max(rank_at(&grads, &point)?);
        }
        per_point.push((format!("({},{},{})", pos.0, pos.1, pos.2), best));
    }
    let max = per_point.iter().map(|(_, r)| *r).max().unwrap_or(0);
    Ok(RankReport { names: names.iter().map(|s| s.to_string()).collect(), per_point, max })
}
