//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

pub fn frobenius(a: &Mat) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm(a: &Mat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.max()
}

/// Largest eigenvalue modulus of a square matrix.
pub fn spectral_radius(a: &Mat) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.clone().complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of a symmetric matrix (symmetrized first).
pub fn sym_eigen(m: &Mat) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let s = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(s)
}

pub fn min_sym_eigenvalue(m: &Mat) -> f64 {
    sym_eigen(m).eigenvalues.min()
}

/// Principal square root of a symmetric positive semidefinite matrix.
/// Eigenvalues in `[-tol·max, 0)` are clamped to zero.
pub fn sym_sqrt(m: &Mat) -> Result<Mat> {
    let e = sym_eigen(m);
    let scale = e.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if e.eigenvalues.iter().any(|&l| l < -1e-10 * scale.max(1.0)) {
        return Err(Error::arg("matrix is not positive semidefinite"));
    }
    let d = Vector::from_iterator(e.eigenvalues.len(), e.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()));
    Ok(&e.eigenvectors * Mat::from_diagonal(&d) * e.eigenvectors.transpose())
}

/// Inverse square root of a symmetric positive definite matrix.
pub fn sym_inv_sqrt(m: &Mat) -> Result<Mat> {
    let e = sym_eigen(m);
    let scale = e.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    if e.eigenvalues.iter().any(|&l| l <= 1e-14 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::Singular("matrix is not positive definite".into()));
    }
    let d = Vector::from_iterator(e.eigenvalues.len(), e.eigenvalues.iter().map(|&l| 1.0 / l.sqrt()));
    Ok(&e.eigenvectors * Mat::from_diagonal(&d) * e.eigenvectors.transpose())
}

/// Moore–Penrose pseudo-inverse with relative singular-value cutoff.
pub fn pinv(a: &Mat, rtol: f64) -> Mat {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Mat::zeros(a.ncols(), a.nrows());
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cut = rtol * smax;
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    let mut out = Mat::zeros(a.ncols(), a.nrows());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cut && s > 0.0 {
            out += vt.row(k).transpose() * u.column(k).transpose() / s;
        }
    }
    out
}

/// Numerical rank with relative cutoff.
pub fn rank(a: &Mat, rtol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let s = a.clone().svd(false, false).singular_values;
    let smax = s.max();
    s.iter().filter(|&&x| x > rtol * smax && x > 0.0).count()
}

/// Orthonormal basis of the null space (columns).
pub fn null_space(a: &Mat, rtol: f64) -> Mat {
    let n = a.ncols();
    if a.nrows() == 0 {
        return Mat::identity(n, n);
    }
    // pad to a square system so the full right singular basis is available
    let padded = if a.nrows() < n {
        let mut p = Mat::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.unwrap();
    let smax = svd.singular_values.max();
    let cols: Vec<Vector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= rtol * smax.max(f64::MIN_POSITIVE))
        .map(|(k, _)| vt.row(k).transpose())
        .collect();
    if cols.is_empty() {
        Mat::zeros(n, 0)
    } else {
        Mat::from_columns(&cols)
    }
}

/// Kronecker product.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = Mat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            out.view_mut((i * br, j * bc), (br, bc)).copy_from(&(b * a[(i, j)]));
        }
    }
    out
}

/// Column-stacking vectorization.
pub fn vec_of(a: &Mat) -> Vector {
    Vector::from_column_slice(a.as_slice())
}

pub fn unvec(v: &[f64], rows: usize, cols: usize) -> Mat {
    Mat::from_column_slice(rows, cols, v)
}

/// Serde adapter storing matrices as row-major nested arrays.
pub mod rows {
    use super::Mat;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn to_rows(m: &Mat) -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    }

    pub fn from_rows(rows: &[Vec<f64>], ncols_if_empty: usize) -> Result<Mat, String> {
        let r = rows.len();
        let c = rows.first().map_or(ncols_if_empty, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err("ragged matrix rows".into());
        }
        Ok(Mat::from_row_iterator(r, c, rows.iter().flatten().copied()))
    }

    pub fn serialize<S: Serializer>(m: &Mat, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        from_rows(&rows, 0).map_err(D::Error::custom)
    }
}

/// Serde adapter storing vectors as plain arrays.
pub mod vector {
    use super::Vector;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vector, s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vector, D::Error> {
        Ok(Vector::from_vec(Vec::<f64>::deserialize(d)?))
    }
}
