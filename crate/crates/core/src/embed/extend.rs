use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::IndefiniteMetricPolyhedron;
use crate::linalg::{affine_rank, IsotropicSplit, MinkVector};
use crate::scalar::Scalar;
use crate::verify::{
    binomial, verify_general_position, verify_isometry, Combinations, Coverage, GpMode, GpStatus,
    VerifyConfig, VerifyError, EXHAUSTIVE_BUDGET,
};

use super::{isotropic_pair_for, place_vertex, EmbedError, Embedding, PlacementProblem, SplitMode};

#[derive(Debug, Clone)]
pub struct GenericPointOptions {
    /// Also require `v₀` to avoid the projected affine span of every
    /// `d`-subset of the placed points.
    pub certify: bool,
    pub retry_budget: usize,
    /// Cap on the number of subsets visited per draw in certify mode.
    pub subset_budget: u64,
}

impl Default for GenericPointOptions {
    fn default() -> Self {
        GenericPointOptions {
            certify: false,
            retry_budget: 100,
            subset_budget: EXHAUSTIVE_BUDGET,
        }
    }
}

/// Draws a point of `Δ_H` in generic position with respect to `neighbors`
/// (and, in certify mode, to every `d`-subset of `placed`).
///
/// Coordinates are integers `k ∈ [-B, B]`, `B = 10 (|placed| + d)²`, mapped to
/// `center + radius · k / B` in Δ-coordinates, where the box is centered on
/// the neighbors' projections. The rescaling is affine, so the set of bad
/// draws is still a finite union of hyperplane sections.
pub fn choose_generic_delta_point<S: Scalar, R: Rng>(
    split: &IsotropicSplit<S>,
    placed: &[MinkVector<S>],
    neighbors: &[MinkVector<S>],
    rng: &mut R,
    opts: &GenericPointOptions,
) -> Result<MinkVector<S>, EmbedError> {
    let d = split.d();
    let projected = |pts: &[MinkVector<S>]| -> Result<Vec<Vec<S>>, EmbedError> {
        pts.iter()
            .map(|p| split.delta_coords(p).map_err(EmbedError::from))
            .collect()
    };
    let nbr = projected(neighbors)?;
    if !nbr.is_empty() && affine_rank(&nbr)? + 1 != nbr.len() {
        return Err(EmbedError::NotAffinelyIndependent);
    }
    let placed_w = if opts.certify { projected(placed)? } else { Vec::new() };
    let m = d.min(placed_w.len());
    if opts.certify {
        let subsets = binomial(placed_w.len() as u64, m as u64);
        if subsets > opts.subset_budget {
            return Err(EmbedError::NotCertifiable { subsets });
        }
    }

    let box_points = if nbr.is_empty() { projected(placed)? } else { nbr.clone() };
    let (center, radius) = bounding_box(&box_points, d);
    let bound = 10 * ((placed.len() + d) as i64).pow(2);

    let mut last_reason = String::from("no draws");
    for _ in 0..opts.retry_budget.max(1) {
        let w0: Vec<S> = center
            .iter()
            .map(|c| {
                let k = rng.gen_range(-bound..=bound);
                c.clone() + radius.clone() * S::from_ratio(k, bound)
            })
            .collect();

        let mut with_new = nbr.clone();
        with_new.push(w0.clone());
        if affine_rank(&with_new)? + 1 != with_new.len() {
            last_reason = "anchor dependent on neighbor projections".into();
            continue;
        }
        if opts.certify {
            if let Some(subset) = Combinations::new(placed_w.len(), m).find(|t| {
                let mut pts: Vec<&[S]> = t.iter().map(|&i| placed_w[i].as_slice()).collect();
                let before = affine_rank(&pts).unwrap_or(0);
                pts.push(&w0);
                affine_rank(&pts).unwrap_or(0) != before + 1
            }) {
                last_reason = format!("anchor in projected span of placed subset {subset:?}");
                continue;
            }
        }
        return Ok(split.delta_point(&w0)?);
    }
    Err(EmbedError::RetryBudgetExceeded {
        attempts: opts.retry_budget.max(1),
        reason: last_reason,
    })
}

/// Mean and max-norm radius (at least 1) of a point set; origin if empty.
fn bounding_box<S: Scalar>(points: &[Vec<S>], d: usize) -> (Vec<S>, S) {
    if points.is_empty() {
        return (vec![S::zero(); d], S::one());
    }
    let count = S::from_i64(points.len() as i64);
    let center: Vec<S> = (0..d)
        .map(|j| {
            points
                .iter()
                .fold(S::zero(), |acc, p| acc + &p[j])
                / count.clone()
        })
        .collect();
    let radius = points
        .iter()
        .flat_map(|p| p.iter().zip(&center).map(|(x, c)| (x.clone() - c).abs()))
        .fold(S::one(), S::max_of);
    (center, radius)
}

#[derive(Debug, Clone)]
pub struct ExtendConfig {
    pub seed: u64,
    pub certify: bool,
    pub retry_budget: usize,
    /// Relative tolerance for the isometry precheck of the partial map.
    pub tol: f64,
    pub gp_budget: u64,
    pub gp_samples: usize,
}

impl Default for ExtendConfig {
    fn default() -> Self {
        ExtendConfig {
            seed: 0,
            certify: false,
            retry_budget: 100,
            tol: 1e-9,
            gp_budget: EXHAUSTIVE_BUDGET,
            gp_samples: 1000,
        }
    }
}

/// Extends a partial simplicial isometric map to all of `p`.
///
/// Requires `max_degree(p) <= d`. Remaining vertices are processed in input
/// order; each gets a split adapted to its placed neighbors, a generic
/// Δ-anchor, and is then placed against those neighbors. Images of the
/// partial map are copied unchanged.
pub fn extend_embedding(
    p: &IndefiniteMetricPolyhedron<f64>,
    partial: &Embedding<f64>,
    cfg: &ExtendConfig,
) -> Result<Embedding<f64>, EmbedError> {
    let d = partial.d();
    if d == 0 {
        return Err(EmbedError::ZeroDimension);
    }
    let max_degree = p.max_degree();
    if max_degree > d {
        return Err(EmbedError::BelowMaxDegree { d, max_degree });
    }

    let iso = verify_isometry(p, partial, cfg.tol, Coverage::Partial).map_err(partial_error)?;
    if !iso.pass {
        return Err(EmbedError::PartialNotIsometric {
            edge: iso.worst_edge.expect("failing edge exists"),
            residual: iso.max_residual,
        });
    }
    let labels: Vec<String> = partial.points().map(|(k, _)| k.clone()).collect();
    let pts: Vec<&MinkVector<f64>> = partial.points().map(|(_, v)| v).collect();
    let gp_cfg = VerifyConfig {
        gp_mode: if cfg.certify { GpMode::Exhaustive } else { GpMode::Auto },
        gp_budget: cfg.gp_budget,
        gp_samples: cfg.gp_samples,
        seed: cfg.seed,
        ..VerifyConfig::default()
    };
    let gp = verify_general_position(&pts, &labels, d, &gp_cfg);
    match gp.status {
        GpStatus::Failed => {
            return Err(EmbedError::PartialNotInGeneralPosition {
                witness: gp.witness.unwrap_or_default(),
            })
        }
        GpStatus::NotCertified if cfg.certify => return Err(EmbedError::PartialNotCertified),
        _ => {}
    }

    let n = p.vertex_count();
    let mut images: Vec<Option<MinkVector<f64>>> =
        (0..n).map(|v| partial.get(p.vertex_id(v)).cloned()).collect();
    let mut placed: Vec<MinkVector<f64>> = images.iter().flatten().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let opts = GenericPointOptions {
        certify: cfg.certify,
        retry_budget: cfg.retry_budget,
        subset_budget: cfg.gp_budget,
    };
    let mut ordering = Vec::new();

    for v in 0..n {
        if images[v].is_some() {
            continue;
        }
        let id = p.vertex_id(v);
        let (nbrs, targets): (Vec<MinkVector<f64>>, Vec<f64>) = p
            .neighbors(v)
            .iter()
            .filter_map(|&u| {
                let image = images[u].clone()?;
                Some((image, *p.squared_length(u, v).expect("edge")))
            })
            .unzip();
        let image = (|| {
            let adapted = isotropic_pair_for(d, &nbrs)?;
            let anchor =
                choose_generic_delta_point(&adapted.split, &placed, &nbrs, &mut rng, &opts)?;
            place_vertex(&PlacementProblem {
                split: adapted.split,
                anchor,
                neighbors: nbrs,
                targets,
            })
        })()
        .map_err(|e| e.at(id))?;
        placed.push(image.clone());
        images[v] = Some(image);
        ordering.push(id.to_string());
    }

    let mut tau = Embedding::new(d);
    for (v, image) in images.into_iter().enumerate() {
        tau.insert(p.vertex_id(v), image.expect("all placed"))?;
    }
    tau.meta.certify = cfg.certify;
    tau.meta.ordering = ordering;
    tau.meta.partial = labels;
    tau.meta.seed = Some(cfg.seed);
    tau.meta.splits = SplitMode::PerVertex;
    Ok(tau)
}

fn partial_error(e: VerifyError) -> EmbedError {
    match e {
        VerifyError::UnknownVertex(id) => EmbedError::PartialUnknownVertex(id),
        VerifyError::WrongDimension { expected, found, .. } => {
            EmbedError::PartialDimension { expected, found }
        }
        other => EmbedError::Verify(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{embed_polyhedron, EmbedConfig};
    use crate::linalg::squared_length;

    fn mv(c: &[f64]) -> MinkVector<f64> {
        MinkVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn empty_inputs_accept_any_draw() {
        let split = IsotropicSplit::<f64>::standard(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v0 = choose_generic_delta_point(&split, &[], &[], &mut rng, &GenericPointOptions::default()).unwrap();
        assert!(split.sigma_coords(&v0).unwrap().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn single_neighbor_distinct() {
        let split = IsotropicSplit::<f64>::standard(1);
        let p = split.delta_point(&[0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let v0 = choose_generic_delta_point(&split, &[], &[p.clone()], &mut rng, &GenericPointOptions::default()).unwrap();
            assert_ne!(split.delta_coords(&v0).unwrap(), vec![0.0]);
        }
    }

    #[test]
    fn certified_draw_avoids_projected_line() {
        // three placed points whose Δ-projections lie on the line w₂ = w₁
        let split = IsotropicSplit::<f64>::standard(2);
        let placed: Vec<MinkVector<f64>> = [(0.0, 1.0), (1.0, -2.0), (2.0, 0.5)]
            .iter()
            .map(|&(t, s)| split.compose(&[s, 0.0], &[t, t]).unwrap())
            .collect();
        let opts = GenericPointOptions { certify: true, ..GenericPointOptions::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let v0 = choose_generic_delta_point(&split, &placed, &[], &mut rng, &opts).unwrap();
            let w = split.delta_coords(&v0).unwrap();
            let mut pts: Vec<Vec<f64>> = placed[..2].iter().map(|p| split.delta_coords(p).unwrap()).collect();
            pts.push(w);
            assert_eq!(affine_rank(&pts).unwrap(), 2);
        }
    }

    #[test]
    fn certify_budget_is_reported() {
        let split = IsotropicSplit::<f64>::standard(3);
        let placed: Vec<MinkVector<f64>> = (0..40).map(|i| split.delta_point(&[i as f64, (i * i) as f64, 1.0]).unwrap()).collect();
        let opts = GenericPointOptions { certify: true, subset_budget: 100, ..GenericPointOptions::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            choose_generic_delta_point(&split, &placed, &[], &mut rng, &opts),
            Err(EmbedError::NotCertifiable { subsets: 9880 })
        ));
    }

    fn k4() -> IndefiniteMetricPolyhedron<f64> {
        IndefiniteMetricPolyhedron::from_indexed(
            4,
            (0..4).flat_map(|a| (a + 1..4).map(move |b| vec![a, b])).collect(),
            |_, _| 1.0,
        )
    }

    #[test]
    fn extension_keeps_fixed_images() {
        let p = k4();
        let full = embed_polyhedron(&p, &EmbedConfig::for_backend::<f64>().with_d(3)).unwrap();
        let partial = full.restricted_to(["v0", "v1"]);
        let cfg = ExtendConfig { seed: 7, certify: true, ..ExtendConfig::default() };
        let tau = extend_embedding(&p, &partial, &cfg).unwrap();
        for id in ["v0", "v1"] {
            let (a, b) = (tau.get(id).unwrap(), partial.get(id).unwrap());
            assert!(a.coords().iter().zip(b.coords()).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
        for (a, b, g) in p.edges() {
            let sq = squared_length(tau.get(p.vertex_id(a)).unwrap(), tau.get(p.vertex_id(b)).unwrap()).unwrap();
            assert!((sq - g).abs() <= 1e-9 * g.abs().max(1.0));
        }
    }

    #[test]
    fn full_partial_is_returned_unchanged() {
        let p = k4();
        let full = embed_polyhedron(&p, &EmbedConfig::for_backend::<f64>().with_d(3)).unwrap();
        let tau = extend_embedding(&p, &full, &ExtendConfig::default()).unwrap();
        assert!(tau.meta.ordering.is_empty());
        for (id, v) in full.points() {
            assert_eq!(tau.get(id).unwrap(), v);
        }
    }

    #[test]
    fn empty_partial_gives_full_embedding() {
        let p = k4();
        let tau = extend_embedding(&p, &Embedding::new(3), &ExtendConfig::default()).unwrap();
        assert_eq!(tau.len(), 4);
        assert_eq!(tau.meta.ordering, vec!["v0", "v1", "v2", "v3"]);
    }

    #[test]
    fn preconditions_reported() {
        let p = k4();
        let err = extend_embedding(&p, &Embedding::new(2), &ExtendConfig::default()).unwrap_err();
        assert_eq!(err, EmbedError::BelowMaxDegree { d: 2, max_degree: 3 });

        let mut bad = Embedding::new(3);
        bad.insert("v0", mv(&[0.0; 6])).unwrap();
        bad.insert("v1", mv(&[0.0; 6])).unwrap();
        assert!(matches!(
            extend_embedding(&p, &bad, &ExtendConfig::default()),
            Err(EmbedError::PartialNotIsometric { .. })
        ));

        let mut unknown = Embedding::new(3);
        unknown.insert("zz", mv(&[0.0; 6])).unwrap();
        assert_eq!(
            extend_embedding(&p, &unknown, &ExtendConfig::default()).unwrap_err(),
            EmbedError::PartialUnknownVertex("zz".into())
        );
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let p = k4();
        let cfg = ExtendConfig { seed: 42, ..ExtendConfig::default() };
        let a = extend_embedding(&p, &Embedding::new(3), &cfg).unwrap();
        let b = extend_embedding(&p, &Embedding::new(3), &cfg).unwrap();
        assert_eq!(a, b);
    }
}
