//! Reference computations shared by the integration tests. Everything here
//! is written directly against coordinates and does not call the library's
//! numeric routines.

#![allow(dead_code)]

use minkowski_embed::scalar::Rational;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `⟨u - v, u - v⟩` with the first half of the coordinates positive,
/// summed over a common denominator.
pub fn exact_sq_len(u: &[Rational], v: &[Rational]) -> Rational {
    assert_eq!(u.len(), v.len());
    let d = u.len() / 2;
    let diffs: Vec<Rational> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    let (nums, den) = integer_row(&diffs);
    let mut acc = BigInt::zero();
    for (i, x) in nums.iter().enumerate() {
        if i < d {
            acc += x * x;
        } else {
            acc -= x * x;
        }
    }
    Rational::new(acc, &den * &den)
}

/// Numerators over the least common denominator.
pub fn integer_row(xs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = xs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let nums = xs.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (nums, den)
}

pub fn float_sq_len(u: &[f64], v: &[f64]) -> f64 {
    assert_eq!(u.len(), v.len());
    let d = u.len() / 2;
    let plus: f64 = (0..d).map(|i| (u[i] - v[i]).powi(2)).sum();
    let minus: f64 = (d..u.len()).map(|i| (u[i] - v[i]).powi(2)).sum();
    plus - minus
}

pub fn float_inner(u: &[f64], v: &[f64]) -> f64 {
    let d = u.len() / 2;
    (0..d).map(|i| u[i] * v[i]).sum::<f64>() - (d..u.len()).map(|i| u[i] * v[i]).sum::<f64>()
}

pub fn exact_inner(u: &[Rational], v: &[Rational]) -> Rational {
    let d = u.len() / 2;
    let mut acc = Rational::zero();
    for i in 0..u.len() {
        if i < d {
            acc += &u[i] * &v[i];
        } else {
            acc -= &u[i] * &v[i];
        }
    }
    acc
}

/// `|r| / max(1, |g|)`.
pub fn relative(residual: f64, g: f64) -> f64 {
    residual.abs() / g.abs().max(1.0)
}

/// Rank by fraction-free elimination on integer-scaled rows.
pub fn exact_rank(rows: Vec<Vec<Rational>>) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r).0).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for k in c + 1..cols {
                let num = &m[r][k] * &m[rank][c] - &m[r][c] * &m[rank][k];
                m[r][k] = num / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Affine rank of points, exactly.
pub fn exact_affine_rank(points: &[Vec<Rational>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let diffs = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    exact_rank(diffs)
}

/// Numerical rank from singular values, relative to the largest.
pub fn float_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

pub fn float_affine_rank(points: &[Vec<f64>], rel_tol: f64) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let diffs: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    float_rank(&diffs, rel_tol)
}

/// Degeneracy by repeatedly deleting a vertex of minimum remaining degree.
pub fn peeling_degeneracy(adjacency: &[Vec<usize>]) -> usize {
    let n = adjacency.len();
    let mut alive = vec![true; n];
    let mut best = 0;
    for _ in 0..n {
        let degree = |v: usize| adjacency[v].iter().filter(|&&u| alive[u]).count();
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| degree(v)).unwrap();
        best = best.max(degree(v));
        alive[v] = false;
    }
    best
}

/// `max |FᵀηF - η|` with `η = diag(I, -I)`.
pub fn lorentz_residual(f: &[Vec<f64>]) -> f64 {
    let n = f.len();
    let d = n / 2;
    let eta = |i: usize| if i < d { 1.0 } else { -1.0 };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let got: f64 = (0..n).map(|k| f[k][i] * eta(k) * f[k][j]).sum();
            let want = if i == j { eta(i) } else { 0.0 };
            worst = worst.max((got - want).abs());
        }
    }
    worst
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn abs_le(x: &Rational, bound: i64) -> bool {
    x.abs() <= Rational::from_integer(bound.into())
}
