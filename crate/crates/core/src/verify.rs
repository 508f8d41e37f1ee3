//! Independent checks of an embedding: edge isometry, `d`-general position
//! and injectivity.
//!
//! Every check recomputes from raw coordinates; nothing produced during the
//! construction is reused.

use std::marker::PhantomData;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::IndefiniteMetricPolyhedron;
use crate::embed::Embedding;
use crate::linalg::{affine_rank, modular_rank, squared_length, MinkVector};
use crate::scalar::Scalar;

/// Largest number of subsets an exhaustive general-position check may visit.
pub const EXHAUSTIVE_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("vertex `{0}` has no image")]
    MissingVertex(String),
    #[error("image of `{vertex}` has {found} coordinates, expected {expected}")]
    WrongDimension {
        vertex: String,
        expected: usize,
        found: usize,
    },
    #[error("embedding assigns unknown vertex `{0}`")]
    UnknownVertex(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GpMode {
    /// Exhaustive when within budget, sampled otherwise.
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GpStatus {
    /// Every subset of size `min(d+1, N)` was checked and is independent.
    Certified,
    /// Random subsets were checked and none failed.
    SampledPass,
    /// The exhaustive budget was exceeded; nothing is claimed.
    NotCertified,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    /// Every vertex must have an image.
    Total,
    /// Only edges with both endpoints assigned are checked.
    Partial,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Relative tolerance: an edge passes iff `|r| <= tol * max(1, |g|)`.
    pub tol: f64,
    pub gp_mode: GpMode,
    pub gp_budget: u64,
    pub gp_samples: usize,
    pub injectivity_samples: usize,
    /// Images closer than this (Euclidean, in `R^{2d}`) count as coinciding.
    pub injectivity_tol: f64,
    /// Treat a general-position check that is not certified as a failure.
    pub require_certified: bool,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tol: 1e-9,
            gp_mode: GpMode::Auto,
            gp_budget: EXHAUSTIVE_BUDGET,
            gp_samples: 1000,
            injectivity_samples: 1000,
            injectivity_tol: 1e-9,
            require_certified: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeResidual {
    pub edge: [String; 2],
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub checked_edges: usize,
    pub coverage: Coverage,
    pub edges: Vec<EdgeResidual>,
    pub max_relative_residual: String,
    pub max_residual: String,
    pub pass: bool,
    pub tolerance: String,
    pub worst_edge: Option<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralPositionReport {
    pub checked_subsets: u64,
    pub d: usize,
    pub mode: GpMode,
    pub status: GpStatus,
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectivityVerdict {
    /// `d >= 2n+1` and general position certified: the map is an embedding.
    Embedding,
    /// `d >= 2n+1` but general position was not certified; spot checks passed.
    SpotChecksPassed,
    /// `d < 2n+1`; spot checks passed.
    CriterionInapplicable,
    /// Two images coincide.
    Collision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub applicable: bool,
    pub samples_checked: usize,
    pub verdict: InjectivityVerdict,
    pub witness: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub general_position: GeneralPositionReport,
    pub injectivity: InjectivityReport,
    pub isometry: IsometryReport,
    pub pass: bool,
}

/// Raw per-edge residuals `(a, b, squared_length - g)`, in edge order.
pub fn edge_residuals<S: Scalar>(
    p: &IndefiniteMetricPolyhedron<S>,
    images: &[Option<&MinkVector<S>>],
) -> Vec<(usize, usize, S, S)> {
    p.edges()
        .filter_map(|(a, b, g)| {
            let (ua, ub) = (images[a]?, images[b]?);
            let sq = squared_length(ua, ub).expect("dimensions checked");
            Some((a, b, sq - g, g.clone()))
        })
        .collect()
}

/// Resolves the embedding against the vertex set of `p`.
pub fn resolve_images<'a, S: Scalar>(
    p: &IndefiniteMetricPolyhedron<S>,
    tau: &'a Embedding<S>,
    coverage: Coverage,
) -> Result<Vec<Option<&'a MinkVector<S>>>, VerifyError> {
    for (id, v) in tau.points() {
        if p.index_of(id).is_none() {
            return Err(VerifyError::UnknownVertex(id.clone()));
        }
        if v.d() != tau.d() {
            return Err(VerifyError::WrongDimension {
                vertex: id.clone(),
                expected: 2 * tau.d(),
                found: v.coords().len(),
            });
        }
    }
    let images: Vec<Option<&MinkVector<S>>> =
        p.vertex_ids().iter().map(|id| tau.get(id)).collect();
    if coverage == Coverage::Total {
        if let Some(v) = images.iter().position(Option::is_none) {
            return Err(VerifyError::MissingVertex(p.vertex_id(v).to_string()));
        }
    }
    Ok(images)
}

pub fn verify_isometry<S: Scalar>(
    p: &IndefiniteMetricPolyhedron<S>,
    tau: &Embedding<S>,
    tol: f64,
    coverage: Coverage,
) -> Result<IsometryReport, VerifyError> {
    let images = resolve_images(p, tau, coverage)?;
    let tol_s = S::from_f64(tol);
    let mut pass = true;
    let mut max_abs = S::zero();
    let mut max_rel = S::zero();
    let mut worst = None;
    let mut edges = Vec::new();
    for (a, b, r, g) in edge_residuals(p, &images) {
        let mag = r.abs();
        let scale = S::max_of(S::one(), g.abs());
        if mag > tol_s.clone() * &scale {
            pass = false;
        }
        let rel = mag.clone() / scale;
        if rel > max_rel || worst.is_none() {
            worst = Some([p.vertex_id(a).to_string(), p.vertex_id(b).to_string()]);
            max_rel = S::max_of(max_rel, rel);
        }
        max_abs = S::max_of(max_abs, mag);
        edges.push(EdgeResidual {
            edge: [p.vertex_id(a).to_string(), p.vertex_id(b).to_string()],
            residual: r.to_canonical(),
        });
    }
    Ok(IsometryReport {
        checked_edges: edges.len(),
        coverage,
        edges,
        max_relative_residual: max_rel.to_canonical(),
        max_residual: max_abs.to_canonical(),
        pass,
        tolerance: tol.to_canonical(),
        worst_edge: worst,
    })
}

/// `n choose k`, saturating.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Lexicographic `k`-combinations of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let c = self.current.as_mut().expect("checked");
        let k = c.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if c[i] < self.n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Affine-independence queries on subsets of a fixed point set. Exact
/// backends screen each subset modulo a prime first; a full modular rank
/// settles independence, anything else is decided exactly.
struct Independence<'a, S, P> {
    points: &'a [P],
    residues: Option<Vec<Vec<u64>>>,
    _scalar: PhantomData<S>,
}

impl<'a, S: Scalar, P: AsRef<[S]>> Independence<'a, S, P> {
    fn new(points: &'a [P]) -> Self {
        Independence {
            points,
            residues: points.iter().map(|p| S::homogeneous_residues(p.as_ref())).collect(),
            _scalar: PhantomData,
        }
    }

    fn holds(&self, subset: &[usize]) -> bool {
        if let Some(res) = &self.residues {
            if modular_rank(subset.iter().map(|&i| res[i].clone()).collect()) == subset.len() {
                return true;
            }
        }
        let chosen: Vec<&[S]> = subset.iter().map(|&i| self.points[i].as_ref()).collect();
        affine_rank(&chosen).map_or(false, |r| r + 1 == chosen.len())
    }

    /// Shrinks a dependent subset to a minimal dependent one.
    fn minimal_witness(&self, subset: &[usize]) -> Vec<usize> {
        let mut current = subset.to_vec();
        let mut i = 0;
        while i < current.len() {
            let mut trial = current.clone();
            trial.remove(i);
            if trial.len() >= 2 && !self.holds(&trial) {
                current = trial;
            } else {
                i += 1;
            }
        }
        current
    }
}

/// Checks that every subset of at most `d + 1` points is affinely
/// independent. Independence is hereditary, so only subsets of size
/// `min(d + 1, N)` are visited.
pub fn verify_general_position<S: Scalar, P: AsRef<[S]>>(
    points: &[P],
    labels: &[String],
    d: usize,
    cfg: &VerifyConfig,
) -> GeneralPositionReport {
    let n = points.len();
    let m = (d + 1).min(n);
    if n == 0 {
        return GeneralPositionReport {
            checked_subsets: 0,
            d,
            mode: GpMode::Exhaustive,
            status: GpStatus::Certified,
            witness: None,
        };
    }
    let total = binomial(n as u64, m as u64);
    let mode = match cfg.gp_mode {
        GpMode::Auto if total <= cfg.gp_budget => GpMode::Exhaustive,
        GpMode::Auto => GpMode::Sampled,
        other => other,
    };
    let independence = Independence::<S, P>::new(points);
    let witness_of = |subset: &[usize]| {
        Some(
            independence
                .minimal_witness(subset)
                .into_iter()
                .map(|i| labels[i].clone())
                .collect(),
        )
    };

    match mode {
        GpMode::Exhaustive => {
            if total > cfg.gp_budget {
                return GeneralPositionReport {
                    checked_subsets: 0,
                    d,
                    mode,
                    status: GpStatus::NotCertified,
                    witness: None,
                };
            }
            let mut checked = 0;
            for subset in Combinations::new(n, m) {
                checked += 1;
                if !independence.holds(&subset) {
                    return GeneralPositionReport {
                        checked_subsets: checked,
                        d,
                        mode,
                        status: GpStatus::Failed,
                        witness: witness_of(&subset),
                    };
                }
            }
            GeneralPositionReport {
                checked_subsets: checked,
                d,
                mode,
                status: GpStatus::Certified,
                witness: None,
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let draws = (cfg.gp_samples as u64).min(total) as usize;
            for checked in 0..draws {
                let mut subset = sample(&mut rng, n, m).into_vec();
                subset.sort_unstable();
                if !independence.holds(&subset) {
                    return GeneralPositionReport {
                        checked_subsets: checked as u64 + 1,
                        d,
                        mode: GpMode::Sampled,
                        status: GpStatus::Failed,
                        witness: witness_of(&subset),
                    };
                }
            }
            GeneralPositionReport {
                checked_subsets: draws as u64,
                d,
                mode: GpMode::Sampled,
                status: GpStatus::SampledPass,
                witness: None,
            }
        }
    }
}

fn euclid_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Random barycentric point of the image of a face.
fn barycentric_image(face: &[usize], images: &[Vec<f64>], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let weights: Vec<f64> = face.iter().map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let dim = images[face[0]].len();
    let mut out = vec![0.0; dim];
    for (&v, w) in face.iter().zip(&weights) {
        for (o, x) in out.iter_mut().zip(&images[v]) {
            *o += w / total * x;
        }
    }
    out
}

fn random_face(simplex: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    loop {
        let face: Vec<usize> = simplex.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !face.is_empty() {
            return face;
        }
    }
}

pub fn verify_injectivity<S: Scalar>(
    p: &IndefiniteMetricPolyhedron<S>,
    tau: &Embedding<S>,
    gp: &GeneralPositionReport,
    cfg: &VerifyConfig,
) -> Result<InjectivityReport, VerifyError> {
    let resolved = resolve_images(p, tau, Coverage::Total)?;
    let images: Vec<Vec<f64>> = resolved
        .iter()
        .map(|v| v.expect("total").coords().iter().map(Scalar::to_f64).collect())
        .collect();
    let applicable = tau.d() >= 2 * p.dimension() + 1;
    let ids = |vs: &[usize]| vs.iter().map(|&v| p.vertex_id(v).to_string()).collect::<Vec<_>>();
    let collision = |witness: Vec<Vec<String>>, samples| InjectivityReport {
        applicable,
        samples_checked: samples,
        verdict: InjectivityVerdict::Collision,
        witness: Some(witness),
    };

    // pairwise distinct vertex images: sweep along the first coordinate
    let mut by_first: Vec<usize> = (0..images.len()).collect();
    by_first.sort_by(|&a, &b| images[a][0].total_cmp(&images[b][0]));
    for (i, &a) in by_first.iter().enumerate() {
        for &b in &by_first[i + 1..] {
            if images[b][0] - images[a][0] > cfg.injectivity_tol {
                break;
            }
            if euclid_dist(&images[a], &images[b]) <= cfg.injectivity_tol {
                let (x, y) = (a.min(b), a.max(b));
                return Ok(collision(vec![ids(&[x]), ids(&[y])], 0));
            }
        }
    }

    let simplices = p.maximal_simplices();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut checked = 0;
    if simplices.len() >= 1 && images.len() >= 2 {
        let mut attempts = 0;
        while checked < cfg.injectivity_samples && attempts < 20 * cfg.injectivity_samples {
            attempts += 1;
            let fa = random_face(&simplices[rng.gen_range(0..simplices.len())], &mut rng);
            let fb = random_face(&simplices[rng.gen_range(0..simplices.len())], &mut rng);
            if fa.iter().any(|v| fb.contains(v)) {
                continue;
            }
            checked += 1;
            let xa = barycentric_image(&fa, &images, &mut rng);
            let xb = barycentric_image(&fb, &images, &mut rng);
            if euclid_dist(&xa, &xb) <= cfg.injectivity_tol {
                return Ok(collision(vec![ids(&fa), ids(&fb)], checked));
            }
        }
    }

    let verdict = match (applicable, gp.status) {
        (true, GpStatus::Certified) => InjectivityVerdict::Embedding,
        (true, _) => InjectivityVerdict::SpotChecksPassed,
        (false, _) => InjectivityVerdict::CriterionInapplicable,
    };
    Ok(InjectivityReport {
        applicable,
        samples_checked: checked,
        verdict,
        witness: None,
    })
}

/// Runs the whole suite on a total embedding.
pub fn verify_embedding<S: Scalar>(
    p: &IndefiniteMetricPolyhedron<S>,
    tau: &Embedding<S>,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    let isometry = verify_isometry(p, tau, cfg.tol, Coverage::Total)?;
    let images: Vec<&MinkVector<S>> = resolve_images(p, tau, Coverage::Total)?
        .into_iter()
        .map(|v| v.expect("total"))
        .collect();
    let general_position = verify_general_position(&images, p.vertex_ids(), tau.d(), cfg);
    let injectivity = verify_injectivity(p, tau, &general_position, cfg)?;
    let gp_ok = match general_position.status {
        GpStatus::Failed => false,
        GpStatus::Certified => true,
        GpStatus::SampledPass | GpStatus::NotCertified => !cfg.require_certified,
    };
    let pass = isometry.pass && gp_ok && injectivity.verdict != InjectivityVerdict::Collision;
    Ok(VerificationReport {
        general_position,
        injectivity,
        isometry,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    fn exhaustive() -> VerifyConfig {
        VerifyConfig {
            gp_mode: GpMode::Exhaustive,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn combinations_enumerate_all() {
        let all: Vec<Vec<usize>> = Combinations::new(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(11, 8), 165);
        assert_eq!(binomial(100, 4), 3_921_225);
    }

    #[test]
    fn repeated_point_gives_pair_witness() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![3.0, 1.0], vec![1.0, 2.0]];
        let rep = verify_general_position(&pts, &labels(4), 2, &exhaustive());
        assert_eq!(rep.status, GpStatus::Failed);
        assert_eq!(rep.witness, Some(vec!["p1".to_string(), "p3".to_string()]));
    }

    #[test]
    fn collinear_triple_witness() {
        let r = |x: i64| Rational::from_i64(x);
        let pts = vec![vec![r(0), r(0)], vec![r(1), r(1)], vec![r(2), r(2)]];
        let rep = verify_general_position(&pts, &labels(3), 2, &exhaustive());
        assert_eq!(rep.status, GpStatus::Failed);
        assert_eq!(rep.witness.unwrap().len(), 3);
    }

    #[test]
    fn budget_exceeded_is_not_certified() {
        let pts: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let cfg = VerifyConfig {
            gp_mode: GpMode::Exhaustive,
            gp_budget: 10,
            ..VerifyConfig::default()
        };
        let rep = verify_general_position(&pts, &labels(30), 2, &cfg);
        assert_eq!(rep.status, GpStatus::NotCertified);
        assert_eq!(rep.checked_subsets, 0);
    }

    #[test]
    fn sampled_mode_finds_nothing_on_moment_curve() {
        let pts: Vec<Vec<f64>> = (1..40).map(|t| {
            let t = t as f64 / 40.0;
            vec![t, t * t, t * t * t]
        }).collect();
        let cfg = VerifyConfig { gp_mode: GpMode::Sampled, gp_samples: 200, ..VerifyConfig::default() };
        let rep = verify_general_position(&pts, &labels(pts.len()), 3, &cfg);
        assert_eq!(rep.status, GpStatus::SampledPass);
        assert_eq!(rep.checked_subsets, 200);
    }

    #[test]
    fn few_points_single_subset() {
        let pts = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]];
        let rep = verify_general_position(&pts, &labels(2), 5, &exhaustive());
        assert_eq!(rep.status, GpStatus::Certified);
        assert_eq!(rep.checked_subsets, 1);
        let empty: Vec<Vec<f64>> = vec![];
        assert_eq!(verify_general_position(&empty, &[], 3, &exhaustive()).status, GpStatus::Certified);
    }
}
