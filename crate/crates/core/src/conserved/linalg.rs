//! Dense numeric helpers: SVD nullspace, reduced row echelon form and
//! least-squares projection.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct Nullspace {
    /// Singular values of the column-normalized matrix, descending.
    pub singular_values: Vec<f64>,
    /// Null vectors in the original (unscaled) coordinates.
    pub basis: Vec<DVector<f64>>,
    /// `σ < threshold` counts as zero.
    pub threshold: f64,
    /// Smallest retained σ over the larger of the largest discarded σ and
    /// the threshold.
    pub gap: f64,
}

/// Numeric nullspace of `a` with relative cutoff `rel_tol·σ_max`.
pub fn nullspace(a: &DMatrix<f64>, rel_tol: f64) -> Nullspace {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Nullspace {
            singular_values: Vec::new(),
            basis: Vec::new(),
            threshold: 0.0,
            gap: f64::INFINITY,
        };
    }
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let largest = norms.iter().copied().fold(0.0, f64::max);
    // columns that vanish up to rounding keep their tiny size
    let floor = if largest > 0.0 { 1e-6 * largest } else { 1.0 };
    let scales: Vec<f64> = norms.iter().map(|n| n.max(floor)).collect();
    let mut m = DMatrix::zeros(rows.max(cols), cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = a[(i, j)] / scales[j];
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let threshold = rel_tol * sigma_max;
    let mut basis = Vec::new();
    let mut retained_min = f64::INFINITY;
    let mut discarded_max: f64 = 0.0;
    for &i in &order {
        let s = svd.singular_values[i];
        if s < threshold || sigma_max == 0.0 {
            discarded_max = discarded_max.max(s);
            let y = v_t.row(i).transpose();
            let x = DVector::from_iterator(cols, (0..cols).map(|j| y[j] / scales[j]));
            let n = x.norm();
            basis.push(if n > 0.0 { x / n } else { x });
        } else {
            retained_min = retained_min.min(s);
        }
    }
    let gap = if retained_min.is_finite() {
        retained_min / discarded_max.max(threshold).max(f64::MIN_POSITIVE)
    } else {
        0.0
    };
    Nullspace {
        singular_values: sv,
        basis,
        threshold,
        gap,
    }
}

/// Reduced row echelon form of the span of `vectors`, pivots normalized to
/// one; rows are returned in pivot order.
pub fn rref(vectors: &[DVector<f64>], tol: f64) -> Vec<DVector<f64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let n = vectors[0].len();
    let mut rows: Vec<DVector<f64>> = vectors.to_vec();
    let mut out_rank = 0;
    for col in 0..n {
        if out_rank == rows.len() {
            break;
        }
        let (best, val) = (out_rank..rows.len())
            .map(|r| (r, rows[r][col].abs()))
            .fold((out_rank, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            continue;
        }
        rows.swap(out_rank, best);
        let piv = rows[out_rank][col];
        rows[out_rank] /= piv;
        let pivot_row = rows[out_rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != out_rank {
                let f = row[col];
                if f != 0.0 {
                    *row -= &pivot_row * f;
                }
            }
        }
        out_rank += 1;
    }
    rows.truncate(out_rank);
    for row in rows.iter_mut() {
        for x in row.iter_mut() {
            if x.abs() <= tol {
                *x = 0.0;
            }
        }
    }
    rows
}

/// Least-squares fit of `target` by the columns of `basis`; returns the
/// coefficients and `‖target − basis·c‖ / ‖target‖`.
pub fn project(basis: &DMatrix<f64>, target: &DVector<f64>) -> (DVector<f64>, f64) {
    let tn = target.norm();
    if basis.ncols() == 0 {
        return (DVector::zeros(0), if tn > 0.0 { 1.0 } else { 0.0 });
    }
    let svd = basis.clone().svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let c = svd.solve(target, eps).unwrap_or_else(|_| DVector::zeros(basis.ncols()));
    let r = target - basis * &c;
    let rel = if tn > 0.0 { r.norm() / tn } else { r.norm() };
    (c, rel)
}

/// Numeric rank by SVD with relative tolerance.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    sv.iter().filter(|s| **s > rel_tol * max).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 1.0, 0.0, 1.0]);
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.basis.len(), 1);
        assert!((&a * &ns.basis[0]).norm() < 1e-12);
        assert!(ns.gap > 1e3);
    }

    #[test]
    fn zero_column_is_free() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 2.0, 0.0]);
        let ns = nullspace(&a, 1e-10);
        assert_eq!(ns.basis.len(), 1);
        assert!((ns.basis[0][1].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rref_recovers_rational_directions() {
        let a = DVector::from_vec(vec![2.0, 1.0, 0.0]);
        let b = DVector::from_vec(vec![0.0, 3.0, 3.0]);
        let r = rref(&[a, b], 1e-12);
        assert_eq!(r.len(), 2);
        assert!((r[0][0] - 1.0).abs() < 1e-12 && (r[0][2] + 0.5).abs() < 1e-12);
        assert!((r[1][1] - 1.0).abs() < 1e-12 && (r[1][2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_residual() {
        let b = DMatrix::from_row_slice(3, 1, &[1.0, 0.0, 0.0]);
        let (_, r) = project(&b, &DVector::from_vec(vec![2.0, 0.0, 0.0]));
        assert!(r < 1e-14);
        let (_, r) = project(&b, &DVector::from_vec(vec![0.0, 1.0, 0.0]));
        assert!((r - 1.0).abs() < 1e-14);
        assert_eq!(rank(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]), 1e-12), 1);
    }
}
