use super::matrix::{axpy, dot, norm_sq, sub_vec};
use super::LinalgError;
use crate::scalar::{common_numerators, Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Solves `rows · x = rhs` for `x ∈ R^d`, `k = rows.len() <= d`.
///
/// Returns the minimum-Euclidean-norm solution, which is the unique one when
/// `k == d`. The rows are orthogonalized without normalization
/// (`rows = T W` with `T` unit lower-triangular and the rows of `W`
/// orthogonal), so the exact backend never needs a square root; then
/// `x = Wᵀ D⁻¹ T⁻¹ rhs` with `D = diag(|w_i|²)`.
pub fn solve_pairing_system<S: Scalar>(
    rows: &[Vec<S>],
    rhs: &[S],
    d: usize,
) -> Result<Vec<S>, LinalgError> {
    if rows.len() != rhs.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: rows.len(),
            found: rhs.len(),
        });
    }
    if rows.len() > d {
        return Err(LinalgError::Overdetermined { rows: rows.len(), d });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != d) {
        return Err(LinalgError::DimensionMismatch {
            expected: d,
            found: bad.len(),
        });
    }

    S::min_norm_solve(rows, rhs, d)
}

/// Minimum-norm solve by unnormalized Gram–Schmidt on the rows (the
/// arguments are already validated).
pub(crate) fn gram_schmidt_solve<S: Scalar>(
    rows: &[Vec<S>],
    rhs: &[S],
    d: usize,
) -> Result<Vec<S>, LinalgError> {
    let k = rows.len();
    let scale_sq = rows
        .iter()
        .map(|r| norm_sq(r))
        .fold(S::zero(), S::max_of);
    let passes = if S::BACKEND == crate::scalar::Backend::Float { 2 } else { 1 };

    let mut ortho: Vec<Vec<S>> = Vec::with_capacity(k);
    let mut ortho_norm_sq: Vec<S> = Vec::with_capacity(k);
    // lower[i][j] for j < i
    let mut lower: Vec<Vec<S>> = Vec::with_capacity(k);
    for (i, row) in rows.iter().enumerate() {
        let mut w = row.clone();
        let mut coeffs = vec![S::zero(); i];
        for _ in 0..passes {
            for j in 0..i {
                let c = dot(&w, &ortho[j]) / ortho_norm_sq[j].clone();
                if c.is_zero() {
                    continue;
                }
                axpy(&mut w, &-c.clone(), &ortho[j]);
                coeffs[j] = coeffs[j].clone() + c;
            }
        }
        let nsq = norm_sq(&w);
        if nsq.is_zero() || nsq.is_negligible_sq(&scale_sq) {
            return Err(LinalgError::RankDeficient { row: i });
        }
        ortho.push(w);
        ortho_norm_sq.push(nsq);
        lower.push(coeffs);
    }

    // T z = rhs
    let mut z: Vec<S> = Vec::with_capacity(k);
    for i in 0..k {
        let mut acc = rhs[i].clone();
        for (j, zj) in z.iter().enumerate() {
            acc = acc - lower[i][j].clone() * zj;
        }
        z.push(acc);
    }

    let mut x = vec![S::zero(); d];
    for i in 0..k {
        let coeff = z[i].clone() / ortho_norm_sq[i].clone();
        axpy(&mut x, &coeff, &ortho[i]);
    }
    Ok(x)
}

/// Exact minimum-norm solve `x = Rᵀ (R Rᵀ)⁻¹ b` with fraction-free inner
/// loops: rows are scaled to integers, the small Gram matrix is inverted over
/// the rationals, and every output coordinate is reduced only once.
pub(crate) fn exact_min_norm_solve(
    rows: &[Vec<Rational>],
    rhs: &[Rational],
    d: usize,
) -> Result<Vec<Rational>, LinalgError> {
    let k = rows.len();
    if k == 0 {
        return Ok(vec![Rational::zero(); d]);
    }
    let mut int_rows = Vec::with_capacity(k);
    let mut scaled_rhs = Vec::with_capacity(k);
    for (row, b) in rows.iter().zip(rhs) {
        let (nums, l) = common_numerators(row);
        scaled_rhs.push(b * Rational::from_integer(l));
        int_rows.push(nums);
    }
    let gram: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let g = int_rows[i].iter().zip(&int_rows[j]).fold(BigInt::zero(), |acc, (a, b)| acc + a * b);
                    Rational::from_integer(g)
                })
                .collect()
        })
        .collect();
    let Some(inverse) = invert(gram) else {
        // locate the first dependent row
        return gram_schmidt_solve(rows, rhs, d);
    };
    let (inv_num, inv_den) = common_numerators(&inverse.concat());
    let (b_num, b_den) = common_numerators(&scaled_rhs);
    let y: Vec<BigInt> = (0..k)
        .map(|i| (0..k).fold(BigInt::zero(), |acc, j| acc + &inv_num[i * k + j] * &b_num[j]))
        .collect();
    let den = inv_den * b_den;
    Ok((0..d)
        .map(|m| {
            let num = (0..k).fold(BigInt::zero(), |acc, i| acc + &int_rows[i][m] * &y[i]);
            Rational::new(num, den.clone())
        })
        .collect())
}

/// Gauss–Jordan inverse of a square rational matrix; `None` if singular.
fn invert(mut a: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let pivot = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &pivot;
            inv[c][j] = &inv[c][j] / &pivot;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..n {
                let (ac, ic) = (a[c][j].clone(), inv[c][j].clone());
                a[r][j] = &a[r][j] - &f * ac;
                inv[r][j] = &inv[r][j] - &f * ic;
            }
        }
    }
    Some(inv)
}

/// Affine rank of a point set: the rank of `{p_i - p_0}`.
///
/// Points are affinely independent iff the result is `points.len() - 1`.
pub fn affine_rank<S: Scalar, P: AsRef<[S]>>(points: &[P]) -> Result<usize, LinalgError> {
    let first = points.first().ok_or(LinalgError::EmptyPointSet)?.as_ref();
    let mut diffs = Vec::with_capacity(points.len() - 1);
    for p in &points[1..] {
        let p = p.as_ref();
        if p.len() != first.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: first.len(),
                found: p.len(),
            });
        }
        diffs.push(sub_vec(p, first));
    }
    Ok(rank(diffs))
}

/// Rank of a matrix given by rows. Float pivots below `RANK_TOL` times the
/// first (largest) pivot count as zero; rational ranks are exact.
pub fn rank<S: Scalar>(m: Vec<Vec<S>>) -> usize {
    S::matrix_rank(m)
}

/// Gaussian elimination with full pivoting.
pub(crate) fn pivot_rank<S: Scalar>(mut m: Vec<Vec<S>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut first_pivot: Option<S> = None;
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best: Option<(usize, usize, S)> = None;
        for (i, row) in m.iter().enumerate().skip(r) {
            for (j, a) in row.iter().enumerate().skip(r) {
                let mag = a.abs();
                if best.as_ref().map_or(true, |(_, _, b)| mag > *b) {
                    best = Some((i, j, mag));
                }
            }
        }
        let Some((pi, pj, mag)) = best else { break };
        if mag.is_zero() {
            break;
        }
        match &first_pivot {
            Some(scale) if mag.is_negligible(scale) => break,
            None => first_pivot = Some(mag),
            _ => {}
        }
        m.swap(r, pi);
        for row in m.iter_mut() {
            row.swap(r, pj);
        }
        let pivot = m[r][r].clone();
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[r].is_zero() {
                continue;
            }
            let f = row[r].clone() / pivot.clone();
            for j in r..cols {
                row[j] = row[j].clone() - f.clone() * &pivot_row[j];
            }
        }
        r += 1;
    }
    r
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Residues modulo [`PRIME`].
pub(crate) fn residues(xs: &[BigInt]) -> Vec<u64> {
    let p = BigInt::from(PRIME);
    xs.iter()
        .map(|x| x.mod_floor(&p).to_u64().expect("reduced below p"))
        .collect()
}

/// Rank over `Z/p`; never exceeds the rank over `Q` of integer rows with
/// these residues.
pub(crate) fn modular_rank(mut m: Vec<Vec<u64>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pi) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pi);
        let inv = inv_mod(m[r][c]);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv);
            for j in c..cols {
                row[j] = (row[j] + PRIME - mul_mod(f, pivot_row[j])) % PRIME;
            }
        }
        r += 1;
    }
    r
}

/// Fraction-free (Bareiss) elimination over the integers.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(pi) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pi);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            for j in c + 1..cols {
                row[j] = (&row[j] * &pivot_row[c] - &row[c] * &pivot_row[j]) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        r += 1;
    }
    r
}

/// Exact rank: a modular rank that is already full is final, otherwise
/// fraction-free elimination decides.
pub(crate) fn exact_rank(m: &[Vec<Rational>]) -> usize {
    let rows: Vec<Vec<BigInt>> = m.iter().map(|row| common_numerators(row).0).collect();
    let full = rows.len().min(rows.first().map_or(0, Vec::len));
    if modular_rank(rows.iter().map(|r| residues(r)).collect()) == full {
        return full;
    }
    bareiss_rank(rows)
}

/// Whether the points are affinely independent.
pub fn affinely_independent<S: Scalar, P: AsRef<[S]>>(points: &[P]) -> bool {
    match affine_rank(points) {
        Ok(r) => r + 1 == points.len(),
        Err(_) => false,
    }
}
