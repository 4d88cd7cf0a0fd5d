//! Gaussian-kernel maximum mean discrepancy, on raw data and on the copula
//! domain (column-wise pseudo-observations).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{DataMatrix, Matrix};
use crate::rng::StreamRng;

/// Up to this many pooled rows the median heuristic uses every pair.
pub const FULL_PAIRS_MAX_ROWS: usize = 2000;
/// Number of random pairs drawn for larger pooled samples.
pub const SAMPLED_PAIRS: usize = 2_000_000;
/// Row-block size for Gram accumulation; fixes the summation order.
pub const GRAM_BLOCK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmdResult {
    /// Unbiased U-statistic; can be slightly negative.
    pub mmd_squared_unbiased: f64,
    /// `√max(mmd², 0)`.
    pub mmd: f64,
    pub bandwidth: f64,
    pub n_ref: usize,
    pub n_syn: usize,
}

impl MmdResult {
    fn new(mmd2: f64, bandwidth: f64, n_ref: usize, n_syn: usize) -> Self {
        Self { mmd_squared_unbiased: mmd2, mmd: libm::sqrt(mmd2.max(0.0)), bandwidth, n_ref, n_syn }
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `exp(-‖a − b‖² / (2h²))`.
pub fn gaussian_kernel(a: &[f64], b: &[f64], bandwidth: f64) -> f64 {
    libm::exp(-squared_distance(a, b) / (2.0 * bandwidth * bandwidth))
}

fn median_in_place(values: &mut [f64]) -> f64 {
    let n = values.len();
    let (_, upper, _) = values.select_nth_unstable_by(n / 2, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        return upper;
    }
    let lower = values[..n / 2].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    0.5 * (lower + upper)
}

/// Median pairwise Euclidean distance of the pooled sample.
///
/// Exhaustive up to 2000 rows; above that, 2,000,000 pairs `(i, j)`, `i ≠ j`,
/// drawn uniformly from stream `(seed, 0)`. A zero median falls back to 1.
pub fn median_heuristic_bandwidth(pooled: &DataMatrix, seed: u64) -> Result<f64> {
    let n = pooled.n();
    if n < 2 {
        return Err(Error::InsufficientSamples { required: 2, got: n });
    }
    let mut distances = if n <= FULL_PAIRS_MAX_ROWS {
        let mut d = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                d.push(libm::sqrt(squared_distance(pooled.row(i), pooled.row(j))));
            }
        }
        d
    } else {
        let mut rng = StreamRng::new(seed, 0);
        (0..SAMPLED_PAIRS)
            .map(|_| {
                let i = rng.index(n);
                let mut j = rng.index(n - 1);
                if j >= i {
                    j += 1;
                }
                libm::sqrt(squared_distance(pooled.row(i), pooled.row(j)))
            })
            .collect()
    };
    let median = median_in_place(&mut distances);
    Ok(if median > 0.0 { median } else { 1.0 })
}

// Σ_{i<j} f(i, j), accumulated per block of rows.
fn upper_triangle_sum(n: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    let mut total = 0.0;
    for start in (0..n).step_by(GRAM_BLOCK) {
        let mut partial = 0.0;
        for i in start..(start + GRAM_BLOCK).min(n) {
            for j in (i + 1)..n {
                partial += f(i, j);
            }
        }
        total += partial;
    }
    total
}

// Σ_{i,j} f(i, j), accumulated per block of rows.
fn rectangle_sum(m: usize, n: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    let mut total = 0.0;
    for start in (0..m).step_by(GRAM_BLOCK) {
        let mut partial = 0.0;
        for i in start..(start + GRAM_BLOCK).min(m) {
            for j in 0..n {
                partial += f(i, j);
            }
        }
        total += partial;
    }
    total
}

fn combine(m: usize, n: usize, xx_upper: f64, yy_upper: f64, xy: f64) -> f64 {
    let (fm, fn_) = (m as f64, n as f64);
    2.0 * xx_upper / (fm * (fm - 1.0)) + 2.0 * yy_upper / (fn_ * (fn_ - 1.0)) - 2.0 * xy / (fm * fn_)
}

fn check_pair(reference: &DataMatrix, synthetic: &DataMatrix) -> Result<()> {
    if reference.d() != synthetic.d() {
        return Err(Error::ShapeMismatch { expected: reference.d(), found: synthetic.d() });
    }
    Ok(())
}

/// Unbiased MMD² with the Gaussian kernel `exp(-‖a−b‖²/(2h²))`.
pub fn mmd_unbiased(reference: &DataMatrix, synthetic: &DataMatrix, bandwidth: f64) -> Result<MmdResult> {
    check_pair(reference, synthetic)?;
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::InvalidParameter("bandwidth must be positive and finite"));
    }
    let (m, n) = (reference.n(), synthetic.n());
    let gamma = 1.0 / (2.0 * bandwidth * bandwidth);
    let k = |a: &[f64], b: &[f64]| libm::exp(-gamma * squared_distance(a, b));
    let xx = upper_triangle_sum(m, |i, j| k(reference.row(i), reference.row(j)));
    let yy = upper_triangle_sum(n, |i, j| k(synthetic.row(i), synthetic.row(j)));
    let xy = rectangle_sum(m, n, |i, j| k(reference.row(i), synthetic.row(j)));
    Ok(MmdResult::new(combine(m, n, xx, yy, xy), bandwidth, m, n))
}

// Twice the average rank (1-based) of each entry, so tied ranks stay integral.
fn doubled_ranks(column: &[f64]) -> Vec<usize> {
    let n = column.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| column[a].total_cmp(&column[b]));
    let mut ranks = vec![0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && column[order[end]] == column[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1..=end; their mean doubled is start+1+end.
        for &idx in &order[start..end] {
            ranks[idx] = start + 1 + end;
        }
        start = end;
    }
    ranks
}

fn doubled_rank_matrix(data: &DataMatrix) -> Vec<usize> {
    let (n, d) = (data.n(), data.d());
    let mut out = vec![0; n * d];
    for j in 0..d {
        for (i, r) in doubled_ranks(&data.column(j)).into_iter().enumerate() {
            out[i * d + j] = r;
        }
    }
    out
}

/// Column-wise `rank / (n + 1)`, average ranks for ties. Entries lie in `(0, 1)`.
pub fn pseudo_observations(data: &DataMatrix) -> DataMatrix {
    let (n, d) = (data.n(), data.d());
    let ranks = doubled_rank_matrix(data);
    let denom = 2.0 * (n as f64 + 1.0);
    let values = ranks.iter().map(|&r| r as f64 / denom).collect();
    let matrix = Matrix::from_vec(n, d, values).expect("shape preserved");
    DataMatrix::new(matrix).expect("pseudo-observations are finite")
}

/// MMD between the copulas of two samples.
///
/// Both samples are mapped to pseudo-observations, the bandwidth is the
/// median heuristic on the pooled pseudo-observations, and the unbiased
/// MMD² is taken between the two mapped samples.
pub fn copula_mmd(reference: &DataMatrix, synthetic: &DataMatrix, seed: u64) -> Result<MmdResult> {
    check_pair(reference, synthetic)?;
    let po_ref = pseudo_observations(reference);
    let po_syn = pseudo_observations(synthetic);
    let bandwidth = median_heuristic_bandwidth(&po_ref.vstack(&po_syn)?, seed)?;
    if reference.n() == synthetic.n() {
        Ok(equal_size_rank_mmd(reference, synthetic, bandwidth))
    } else {
        mmd_unbiased(&po_ref, &po_syn, bandwidth)
    }
}

fn row_of(r: &[usize], d: usize, i: usize) -> &[usize] {
    &r[i * d..(i + 1) * d]
}

// With equal sample sizes every pseudo-observation lies on the grid
// k / (2(n+1)), so the kernel factorizes into per-coordinate lookups indexed
// by doubled-rank differences. Agrees with `mmd_unbiased` on the
// pseudo-observations up to rounding.
fn equal_size_rank_mmd(reference: &DataMatrix, synthetic: &DataMatrix, bandwidth: f64) -> MmdResult {
    let (n, d) = (reference.n(), reference.d());
    let rx = doubled_rank_matrix(reference);
    let ry = doubled_rank_matrix(synthetic);
    let step = 1.0 / (2.0 * (n as f64 + 1.0));
    let gamma = 1.0 / (2.0 * bandwidth * bandwidth);
    let table: Vec<f64> = (0..=2 * n + 2)
        .map(|k| {
            let delta = k as f64 * step;
            libm::exp(-gamma * delta * delta)
        })
        .collect();
    if d == 2 {
        return MmdResult::new(bivariate_rank_mmd(&rx, &ry, &table), bandwidth, n, n);
    }
    let k = |a: &[usize], b: &[usize]| -> f64 { a.iter().zip(b).map(|(&x, &y)| table[x.abs_diff(y)]).product() };
    let xx = upper_triangle_sum(n, |i, j| k(row_of(&rx, d, i), row_of(&rx, d, j)));
    let yy = upper_triangle_sum(n, |i, j| k(row_of(&ry, d, i), row_of(&ry, d, j)));
    let xy = rectangle_sum(n, n, |i, j| k(row_of(&rx, d, i), row_of(&ry, d, j)));
    MmdResult::new(combine(n, n, xx, yy, xy), bandwidth, n, n)
}

// Two-column fast path: rank pairs in flat arrays, no per-pair slicing.
fn bivariate_rank_mmd(rx: &[usize], ry: &[usize], table: &[f64]) -> f64 {
    let n = rx.len() / 2;
    let split = |r: &[usize]| -> (Vec<usize>, Vec<usize>) {
        (r.iter().step_by(2).copied().collect(), r.iter().skip(1).step_by(2).copied().collect())
    };
    let (x0, x1) = split(rx);
    let (y0, y1) = split(ry);
    let row_sum = |a0: usize, a1: usize, b0: &[usize], b1: &[usize]| -> f64 {
        b0.iter().zip(b1).map(|(&c0, &c1)| table[a0.abs_diff(c0)] * table[a1.abs_diff(c1)]).sum()
    };
    let (mut xx, mut yy, mut xy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        xx += row_sum(x0[i], x1[i], &x0[i + 1..], &x1[i + 1..]);
        yy += row_sum(y0[i], y1[i], &y0[i + 1..], &y1[i + 1..]);
        xy += row_sum(x0[i], x1[i], &y0, &y1);
    }
    combine(n, n, xx, yy, xy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bandwidth_single_pair() {
        let p = DataMatrix::from_rows(&[[0.0, 0.0], [3.0, 0.0]]).unwrap();
        assert_eq!(median_heuristic_bandwidth(&p, 1).unwrap(), 3.0);
    }

    #[test]
    fn bandwidth_degenerate_fallback() {
        let p = DataMatrix::from_rows(&[[2.0, 2.0]; 5]).unwrap();
        assert_eq!(median_heuristic_bandwidth(&p, 1).unwrap(), 1.0);
    }

    #[test]
    fn bandwidth_five_points_enumerated() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [3.0, 4.0], [-1.0, -1.0]];
        let p = DataMatrix::from_rows(&pts).unwrap();
        let mut d = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                let dx: f64 = pts[i][0] - pts[j][0];
                let dy: f64 = pts[i][1] - pts[j][1];
                d.push(libm::sqrt(dx * dx + dy * dy));
            }
        }
        d.sort_by(f64::total_cmp);
        assert_eq!(d.len(), 10);
        let expected = 0.5 * (d[4] + d[5]);
        assert!((median_heuristic_bandwidth(&p, 0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn mmd_of_identical_three_points() {
        let pts = [[0.0], [1.0], [3.0]];
        let x = DataMatrix::from_rows(&pts).unwrap();
        let h = 1.5;
        let r = mmd_unbiased(&x, &x, h).unwrap();
        // Within terms: mean over i≠j; cross term: mean over all i, j (diagonal included).
        let k = |a: f64, b: f64| libm::exp(-(a - b) * (a - b) / (2.0 * h * h));
        let v = [0.0, 1.0, 3.0];
        let mut within = 0.0;
        let mut cross = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                cross += k(v[i], v[j]);
                if i != j {
                    within += k(v[i], v[j]);
                }
            }
        }
        let expected = 2.0 * within / 6.0 - 2.0 * cross / 9.0;
        assert!((r.mmd_squared_unbiased - expected).abs() < 1e-9);
        assert!(r.mmd_squared_unbiased < 0.0);
        assert_eq!(r.mmd, 0.0);
    }

    #[test]
    fn mmd_two_point_closed_form() {
        let x = DataMatrix::from_rows(&[[0.0, 0.0], [0.0, 0.0]]).unwrap();
        let y = DataMatrix::from_rows(&[[2.0, 0.0], [2.0, 0.0]]).unwrap();
        let r = mmd_unbiased(&x, &y, 1.0).unwrap();
        let expected = 2.0 - 2.0 * libm::exp(-2.0);
        assert!((r.mmd_squared_unbiased - expected).abs() < 1e-14);
        assert_eq!((r.n_ref, r.n_syn, r.bandwidth), (2, 2, 1.0));
    }

    #[test]
    fn mmd_rejects_bad_inputs() {
        let x = DataMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let y = DataMatrix::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(matches!(mmd_unbiased(&x, &y, 1.0), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(mmd_unbiased(&x, &x, 0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn pseudo_observation_examples() {
        let col = |rows: &[[f64; 1]]| pseudo_observations(&DataMatrix::from_rows(rows).unwrap()).column(0);
        assert_eq!(col(&[[10.0], [20.0], [30.0]]), &[0.25, 0.5, 0.75]);
        assert_eq!(col(&[[5.0], [5.0], [5.0]]), &[0.5, 0.5, 0.5]);
        assert_eq!(col(&[[3.0], [1.0], [2.0], [2.0]]), &[0.8, 0.2, 0.5, 0.5]);
    }

    #[test]
    fn grid_path_matches_direct_evaluation() {
        let mut rng = StreamRng::new(5, 0);
        let make = |rng: &mut StreamRng, n: usize| {
            let rows: Vec<[f64; 3]> = (0..n)
                .map(|_| {
                    let a = rng.standard_normal();
                    // Rounded values create ties.
                    [a, libm::round(4.0 * (a + rng.standard_normal())) / 4.0, rng.uniform()]
                })
                .collect();
            DataMatrix::from_rows(&rows).unwrap()
        };
        let x = make(&mut rng, 120);
        let y = make(&mut rng, 120);
        let fast = copula_mmd(&x, &y, 3).unwrap();
        let direct = mmd_unbiased(&pseudo_observations(&x), &pseudo_observations(&y), fast.bandwidth).unwrap();
        assert!((fast.mmd_squared_unbiased - direct.mmd_squared_unbiased).abs() < 1e-12);
    }

    #[test]
    fn bivariate_path_matches_direct_evaluation() {
        let mut rng = StreamRng::new(6, 0);
        let mut make = |n: usize| {
            let rows: Vec<[f64; 2]> =
                (0..n).map(|_| [libm::round(3.0 * rng.standard_normal()) / 3.0, rng.standard_normal()]).collect();
            DataMatrix::from_rows(&rows).unwrap()
        };
        let (x, y) = (make(150), make(150));
        let fast = copula_mmd(&x, &y, 3).unwrap();
        let direct = mmd_unbiased(&pseudo_observations(&x), &pseudo_observations(&y), fast.bandwidth).unwrap();
        assert!((fast.mmd_squared_unbiased - direct.mmd_squared_unbiased).abs() < 1e-12);
    }
}
