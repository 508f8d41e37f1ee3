use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// `(t, t², …, t^d)`.
pub fn moment_curve_point<S: Scalar>(t: &S, d: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(d);
    let mut power = t.clone();
    for _ in 0..d {
        out.push(power.clone());
        power = power * t;
    }
    out
}

/// `(T_1(t), …, T_d(t))` with Chebyshev polynomials `T_k`.
///
/// The Chebyshev polynomials of degree `1..=d` are a triangular change of
/// basis of `t, …, t^d` (plus a constant), so this curve is an affine image of
/// the moment curve and inherits its general-position property, while being
/// far better conditioned for parameters in `[-1, 1]`.
pub fn chebyshev_curve_point<S: Scalar>(t: &S, d: usize) -> Vec<S> {
    let mut out = Vec::with_capacity(d);
    let two_t = t.clone() + t;
    let mut prev = S::one();
    let mut cur = t.clone();
    for _ in 0..d {
        out.push(cur.clone());
        let next = two_t.clone() * &cur - prev;
        prev = cur;
        cur = next;
    }
    out
}

/// Where the Δ-anchors of the construction come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AnchorScheme {
    /// Moment curve at `t_i = i + 1`.
    #[default]
    Moment,
    /// Chebyshev curve at `t_i = -1 + (2i + 1) / n`, `n` the vertex count.
    Chebyshev,
    /// Independent standard normal coordinates from a seeded generator.
    /// Such points are in general position with probability 1 and keep the
    /// float placement systems well conditioned at any size.
    Gaussian,
}

impl AnchorScheme {
    /// Curve parameter of the `index`-th anchor; `None` for random anchors.
    pub fn parameter<S: Scalar>(&self, index: usize, count: usize) -> Option<S> {
        match self {
            AnchorScheme::Moment => Some(S::from_i64(index as i64 + 1)),
            AnchorScheme::Chebyshev => {
                let n = count.max(1) as i64;
                Some(S::from_ratio(2 * index as i64 + 1 - n, n))
            }
            AnchorScheme::Gaussian => None,
        }
    }

    /// The `index`-th of `count` anchors in `R^d`. Random schemes draw from
    /// `rng`, so anchors must be requested in index order.
    pub fn anchor<S: Scalar, R: Rng>(
        &self,
        index: usize,
        count: usize,
        d: usize,
        rng: &mut R,
    ) -> (Option<S>, Vec<S>) {
        match self.parameter::<S>(index, count) {
            Some(t) => {
                let point = match self {
                    AnchorScheme::Chebyshev => chebyshev_curve_point(&t, d),
                    _ => moment_curve_point(&t, d),
                };
                (Some(t), point)
            }
            None => (
                None,
                (0..d)
                    .map(|_| S::from_f64(rng.sample::<f64, _>(StandardNormal)))
                    .collect(),
            ),
        }
    }

    /// Default anchors per backend: the exact moment curve for rationals,
    /// Gaussian points for floats.
    pub fn default_for<S: Scalar>() -> Self {
        match S::BACKEND {
            crate::scalar::Backend::Rational => AnchorScheme::Moment,
            crate::scalar::Backend::Float => AnchorScheme::Gaussian,
        }
    }
}

impl std::fmt::Display for AnchorScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AnchorScheme::Moment => "moment",
            AnchorScheme::Chebyshev => "chebyshev",
            AnchorScheme::Gaussian => "gaussian",
        })
    }
}

impl std::str::FromStr for AnchorScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "moment" => Ok(AnchorScheme::Moment),
            "chebyshev" => Ok(AnchorScheme::Chebyshev),
            "gaussian" => Ok(AnchorScheme::Gaussian),
            other => Err(format!("unknown anchor scheme `{other}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::affine_rank;
    use crate::scalar::Rational;

    #[test]
    fn moment_points() {
        let r = |x| Rational::from_i64(x);
        assert_eq!(moment_curve_point(&r(1), 3), vec![r(1), r(1), r(1)]);
        assert_eq!(moment_curve_point(&r(2), 3), vec![r(2), r(4), r(8)]);
    }

    #[test]
    fn moment_points_in_general_position() {
        for d in 1..=6 {
            let pts: Vec<Vec<Rational>> = (1..=d as i64 + 1)
                .map(|t| moment_curve_point(&Rational::from_i64(t), d))
                .collect();
            assert_eq!(affine_rank(&pts).unwrap(), d);
        }
    }

    #[test]
    fn chebyshev_values() {
        let t = Rational::from_ratio(1, 2);
        let p = chebyshev_curve_point(&t, 3);
        // T1 = t, T2 = 2t²-1, T3 = 4t³-3t
        assert_eq!(p, vec![t.clone(), Rational::from_ratio(-1, 2), Rational::from_i64(-1)]);
    }

    #[test]
    fn chebyshev_points_in_general_position() {
        for d in 1..=6 {
            let n = d + 1;
            let pts: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    let t: Rational = AnchorScheme::Chebyshev.parameter(i, n).unwrap();
                    chebyshev_curve_point(&t, d)
                })
                .collect();
            assert_eq!(affine_rank(&pts).unwrap(), d);
        }
    }

    #[test]
    fn chebyshev_parameters_inside_interval() {
        for i in 0..10 {
            let t: f64 = AnchorScheme::Chebyshev.parameter(i, 10).unwrap();
            assert!(t > -1.0 && t < 1.0);
        }
    }

    #[test]
    fn gaussian_anchors_are_seeded() {
        use rand::SeedableRng;
        let draw = |seed| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..5)
                .map(|i| AnchorScheme::Gaussian.anchor::<f64, _>(i, 5, 4, &mut rng).1)
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
        assert_eq!(affine_rank(&draw(3)).unwrap(), 4);
    }
}
