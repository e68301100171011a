//! Determinants and Cramer's rule for the small fixed-size systems used by the
//! reconstructions (2x2 up to 4x4).
//!
//! Matrices are stored as arrays of columns, which is how the systems are
//! assembled: each unknown contributes one column.

/// Determinant of a square matrix given by columns, via LU with partial pivoting.
pub fn det<const N: usize>(cols: &[[f64; N]; N]) -> f64 {
    // Work on rows; the determinant is invariant under transposition.
    let mut a = *cols;
    let mut sign = 1.0;
    for k in 0..N {
        let mut piv = k;
        for r in k + 1..N {
            if a[r][k].abs() > a[piv][k].abs() {
                piv = r;
            }
        }
        if a[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            a.swap(piv, k);
            sign = -sign;
        }
        for r in k + 1..N {
            let factor = a[r][k] / a[k][k];
            for c in k..N {
                a[r][c] -= factor * a[k][c];
            }
        }
    }
    (0..N).fold(sign, |acc, i| acc * a[i][i])
}

/// Product of the Euclidean norms of the rows: Hadamard's bound on `|det|`.
pub fn row_norm_product<const N: usize>(cols: &[[f64; N]; N]) -> f64 {
    (0..N)
        .map(|r| cols.iter().map(|c| c[r] * c[r]).sum::<f64>().sqrt())
        .product()
}

/// `|det| / (product of row norms)`, a scale-free measure in `[0, 1]`.
pub fn relative_det<const N: usize>(cols: &[[f64; N]; N]) -> f64 {
    let bound = row_norm_product(cols);
    if bound == 0.0 {
        0.0
    } else {
        det(cols).abs() / bound
    }
}

/// Replaces column `i` by `rhs`.
pub fn with_column<const N: usize>(cols: &[[f64; N]; N], i: usize, rhs: &[f64; N]) -> [[f64; N]; N] {
    let mut out = *cols;
    out[i] = *rhs;
    out
}

/// Solution of the system with the given columns and right-hand side by Cramer's
/// rule, together with the determinant. Returns `None` when the relative
/// determinant is at or below `rel_tol`.
pub fn cramer<const N: usize>(
    cols: &[[f64; N]; N],
    rhs: &[f64; N],
    rel_tol: f64,
) -> Option<([f64; N], f64)> {
    let d = det(cols);
    let bound = row_norm_product(cols);
    if !(d.is_finite()) || bound == 0.0 || d.abs() <= rel_tol * bound {
        return None;
    }
    let mut x = [0.0; N];
    for (i, xi) in x.iter_mut().enumerate() {
        *xi = det(&with_column(cols, i, rhs)) / d;
    }
    Some((x, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn determinants() {
        assert_eq!(det(&[[2.0]]), 2.0);
        // columns (1,3), (2,4) -> det = 1*4 - 2*3
        assert_relative_eq!(det(&[[1.0, 3.0], [2.0, 4.0]]), -2.0);
        let m = [[2.0, 0.0, 1.0], [1.0, 3.0, 0.0], [0.0, 1.0, 4.0]];
        // rows: [2 1 0; 0 3 1; 1 0 4] -> 2*12 - 1*(0-1) + 0 = 25
        assert_relative_eq!(det(&m), 25.0, epsilon = 1e-12);
        assert_eq!(det(&[[1.0, 2.0], [2.0, 4.0]]), 0.0);
    }

    #[test]
    fn cramer_solves_and_rejects_singular() {
        let cols = [[4.0, 1.0, 0.0, 2.0], [1.0, 3.0, 1.0, 0.0], [0.0, 1.0, 5.0, 1.0], [2.0, 0.0, 1.0, 6.0]];
        let x_true = [1.0, -2.0, 0.5, 3.0];
        let mut rhs = [0.0; 4];
        for (c, x) in cols.iter().zip(x_true) {
            for r in 0..4 {
                rhs[r] += c[r] * x;
            }
        }
        let (x, _) = cramer(&cols, &rhs, 1e-12).unwrap();
        for (a, b) in x.iter().zip(x_true) {
            assert_relative_eq!(*a, b, epsilon = 1e-12);
        }
        assert!(cramer(&[[1.0, 1.0], [1.0, 1.0]], &[1.0, 2.0], 1e-12).is_none());
    }
}
