//! Small dense linear-algebra helpers shared by the modal solver and
//! the chain oracle: orthonormal null-space bases via Householder
//! reflections, and the symmetric positive definite pencil solve.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Orthonormal basis of the null space of `rowsᵀ`, i.e. an
/// n×(n−k) matrix `Z` with `ZᵀZ = I` and `rows · Z = 0`, where `rows`
/// holds k independent row vectors of length n.
///
/// Built from the full Q factor of a Householder QR of `rowsᵀ`: the
/// trailing n−k columns of Q span the orthogonal complement.
pub(crate) fn nullspace_of_rows(rows: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let k = rows.nrows();
    let n = rows.ncols();
    if k >= n {
        return None;
    }
    let mut a = rows.transpose();
    let mut q = DMatrix::<f64>::identity(n, n);
    for col in 0..k {
        // Householder vector annihilating a[col+1.., col]
        let tail = a.view((col, col), (n - col, 1)).clone_owned();
        let alpha = tail.norm();
        if alpha == 0.0 {
            return None; // dependent rows
        }
        let mut v = tail;
        // sign chosen away from cancellation
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * alpha;
        let vnorm2 = v.norm_squared();
        if vnorm2 == 0.0 {
            continue;
        }
        // a ← H a, q ← q H with H = I − 2vvᵀ/vᵀv acting on rows col..
        for target_col in col..k {
            let mut dot = 0.0;
            for i in 0..n - col {
                dot += v[i] * a[(col + i, target_col)];
            }
            let scale = 2.0 * dot / vnorm2;
            for i in 0..n - col {
                a[(col + i, target_col)] -= scale * v[i];
            }
        }
        for row in 0..n {
            let mut dot = 0.0;
            for i in 0..n - col {
                dot += q[(row, col + i)] * v[i];
            }
            let scale = 2.0 * dot / vnorm2;
            for i in 0..n - col {
                q[(row, col + i)] -= scale * v[i];
            }
        }
    }
    // guard against rank deficiency: the leading k diagonal entries of
    // R must be nonzero
    for i in 0..k {
        if a[(i, i)].abs() == 0.0 {
            return None;
        }
    }
    Some(q.columns(k, n - k).clone_owned())
}

/// Solve the symmetric definite pencil `K z = ω² M z` with `M`
/// positive definite, returning ascending eigenvalues ω² and the
/// corresponding vectors as matrix columns (M-orthonormal).
///
/// The pencil is reduced to a standard symmetric problem through the
/// Cholesky factor of `M`.
pub(crate) fn sym_definite_eig(
    stiffness: &DMatrix<f64>,
    mass: &DMatrix<f64>,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = mass.nrows();
    let chol = mass.clone().cholesky().ok_or(Error::IndefiniteMass)?;
    // S = L⁻¹ K L⁻ᵀ, symmetrized to shed roundoff
    let l = chol.l();
    let linv_k = l
        .clone()
        .solve_lower_triangular(stiffness)
        .ok_or(Error::IndefiniteMass)?;
    let s_t = l
        .clone()
        .solve_lower_triangular(&linv_k.transpose())
        .ok_or(Error::IndefiniteMass)?;
    let s = 0.5 * (&s_t + s_t.transpose());
    let eig = s.symmetric_eigen();
    // sort ascending and back-transform: z = L⁻ᵀ y
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (out_col, &i) in order.iter().enumerate() {
        let y = eig.eigenvectors.column(i).clone_owned();
        let z = l
            .transpose()
            .solve_upper_triangular(&y)
            .ok_or(Error::IndefiniteMass)?;
        vectors.set_column(out_col, &z);
    }
    Ok((values, vectors))
}

/// Frobenius norm shortcut.
pub(crate) fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nullspace_is_orthonormal_and_annihilates() {
        let rows = DMatrix::from_row_slice(2, 5, &[1.0, 2.0, -1.0, 0.5, 3.0, 0.0, 1.0, 1.0, -2.0, 0.2]);
        let z = nullspace_of_rows(&rows).unwrap();
        assert_eq!(z.shape(), (5, 3));
        let ztz = z.transpose() * &z;
        let prod = &rows * &z;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(ztz[(i, j)], expect, epsilon = 1e-13);
            }
        }
        for v in prod.iter() {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn dependent_rows_are_detected() {
        let rows = DMatrix::from_row_slice(2, 4, &[1.0, 2.0, 3.0, 4.0, 2.0, 4.0, 6.0, 8.0]);
        assert!(nullspace_of_rows(&rows).is_none());
    }

    #[test]
    fn pencil_solve_recovers_diagonal_case() {
        // K = diag(4, 9), M = I → ω² = 4, 9
        let k = DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 9.0]);
        let m = DMatrix::identity(2, 2);
        let (vals, vecs) = sym_definite_eig(&k, &m).unwrap();
        assert_abs_diff_eq!(vals[0], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 9.0, epsilon = 1e-12);
        // residual check K z = ω² M z
        for i in 0..2 {
            let z = vecs.column(i);
            let r = &k * z - vals[i] * (&m * z);
            assert!(r.norm() < 1e-12);
        }
    }

    #[test]
    fn pencil_solve_satisfies_residuals_on_random_spd() {
        let a = DMatrix::from_fn(5, 5, |i, j| ((i * 7 + j * 3) as f64 * 0.37).sin());
        let m = &a * a.transpose() + DMatrix::identity(5, 5) * 5.0;
        let bmat = DMatrix::from_fn(5, 5, |i, j| ((i + 2 * j) as f64 * 0.59).cos());
        let k = &bmat * bmat.transpose() + DMatrix::identity(5, 5);
        let (vals, vecs) = sym_definite_eig(&k, &m).unwrap();
        for i in 0..5 {
            assert!(vals[i] > 0.0);
            if i > 0 {
                assert!(vals[i] >= vals[i - 1]);
            }
            let z = vecs.column(i);
            let r = &k * z - vals[i] * (&m * z);
            let scale = frobenius(&k) + vals[i] * frobenius(&m);
            assert!(r.norm() <= 1e-12 * scale, "residual {} too big", r.norm());
        }
    }

    #[test]
    fn indefinite_mass_is_reported() {
        let k = DMatrix::identity(2, 2);
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        match sym_definite_eig(&k, &m) {
            Err(Error::IndefiniteMass) => {}
            other => panic!("expected IndefiniteMass, got {other:?}"),
        }
    }
}
