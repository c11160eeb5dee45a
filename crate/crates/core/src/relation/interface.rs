use crate::abstraction::ReducedModel;
use crate::error::{Error, Result};
use crate::linalg::{self, frobenius, Mat};
use crate::model::LinearGaussianModel;

/// Relative residual tolerance for the interface equation `PA₁ = A₂P + B₂Q`.
pub const INTERFACE_RTOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct InterfaceSolution {
    pub q: Mat,
    /// `‖PA₁ − A₂P − B₂Q‖_F` relative to the size of its terms.
    pub residual: f64,
}

impl InterfaceSolution {
    pub fn is_valid(&self) -> bool {
        self.residual <= INTERFACE_RTOL
    }
}

/// Relative residual of `PA₁ = A₂P + B₂Q`.
pub fn interface_residual(a1: &Mat, a2: &Mat, b2: &Mat, p: &Mat, q: &Mat) -> f64 {
    let pa = p * a1;
    let ap = a2 * p;
    let bq = b2 * q;
    let scale = frobenius(&pa) + frobenius(&ap) + frobenius(&bq);
    let res = frobenius(&(pa - ap - bq));
    if scale == 0.0 {
        res
    } else {
        res / scale
    }
}

/// Least-squares `Q` with `B₂Q ≈ PA₁ − A₂P`.
pub fn solve_interface(a1: &Mat, a2: &Mat, b2: &Mat, p: &Mat) -> Result<InterfaceSolution> {
    let (n, ns) = p.shape();
    if a1.shape() != (ns, ns) || a2.shape() != (n, n) || b2.nrows() != n {
        return Err(Error::dim("interface equation operands have inconsistent shapes"));
    }
    let rhs = p * a1 - a2 * p;
    let q = linalg::pinv(b2, 1e-12) * &rhs;
    let residual = interface_residual(a1, a2, b2, p, &q);
    if residual > INTERFACE_RTOL && linalg::rank(b2, 1e-12) < b2.ncols() {
        return Err(Error::Singular(format!("B₂ is rank deficient and the interface residual is {residual:e}")));
    }
    Ok(InterfaceSolution { q, residual })
}

/// Closest `(P, Q)` to `(P₀, Q₀)` (Frobenius) with `PA₁ = A₂P + B₂Q` exactly:
/// orthogonal projection onto the null space of the stacked linear map.
pub fn align_projection(a1: &Mat, a2: &Mat, b2: &Mat, p0: &Mat, q0: &Mat) -> Result<(Mat, Mat)> {
    let (n, ns) = p0.shape();
    let m = b2.ncols();
    if q0.shape() != (m, ns) {
        return Err(Error::dim("initial Q has the wrong shape"));
    }
    let i_n = Mat::identity(n, n);
    let i_s = Mat::identity(ns, ns);
    // vec(PA₁ − A₂P − B₂Q) = [A₁ᵀ⊗I − I⊗A₂, −I⊗B₂] [vec P; vec Q]
    let lp = linalg::kron(&a1.transpose(), &i_n) - linalg::kron(&i_s, a2);
    let lq = -linalg::kron(&i_s, b2);
    let mut l = Mat::zeros(n * ns, n * ns + m * ns);
    l.view_mut((0, 0), (n * ns, n * ns)).copy_from(&lp);
    l.view_mut((0, n * ns), (n * ns, m * ns)).copy_from(&lq);
    let basis = linalg::null_space(&l, 1e-10);
    if basis.ncols() == 0 {
        return Err(Error::Infeasible("the interface equation only admits P = 0".into()));
    }
    let mut z0 = linalg::vec_of(p0).as_slice().to_vec();
    z0.extend_from_slice(linalg::vec_of(q0).as_slice());
    let z0 = linalg::Vector::from_vec(z0);
    let z = &basis * (basis.transpose() * z0);
    let p = linalg::unvec(&z.as_slice()[..n * ns], n, ns);
    let q = linalg::unvec(&z.as_slice()[n * ns..], m, ns);
    if frobenius(&p) <= 1e-12 * frobenius(p0).max(f64::MIN_POSITIVE) {
        return Err(Error::Infeasible("no projection consistent with the interface is close to the initial one".into()));
    }
    Ok((p, q))
}

/// `P̂ = (PᵀMP)⁻¹PᵀM`.
pub fn weighted_left_inverse(p: &Mat, m: &Mat) -> Result<Mat> {
    let g = p.transpose() * m * p;
    let inv = g.clone().try_inverse().ok_or_else(|| Error::Singular("PᵀMP is singular".into()))?;
    if !inv.iter().all(|v| v.is_finite()) || linalg::rank(&g, 1e-13) < g.nrows() {
        return Err(Error::Singular("PᵀMP is singular".into()));
    }
    Ok(inv * p.transpose() * m)
}

/// Make a reduced model consistent with the interface: align `P`, set
/// `A₁`'s companion `Q`, `C₁ = C₂P`, and normalize the output scale.
/// Returns the updated model and `Q`.
pub fn align_reduced(model: &LinearGaussianModel, red: &ReducedModel, k: &Mat) -> Result<(ReducedModel, Mat)> {
    let q0 = k * &red.p;
    let (p, _) = align_projection(&red.a1, &model.a, &model.b, &red.p, &q0)?;
    let mut out = red.clone();
    out.p = p;
    out.c1 = &model.c * &out.p;
    out.normalize_output_scale();
    let q = solve_interface(&out.a1, &model.a, &model.b, &out.p)?.q;
    Ok((out, q))
}

/// Input matrices minimizing the M-weighted mismatch: `B₁ = P̂B₂R`, `B_{w1} = P̂B_{w2}`.
pub fn fit_inputs(model: &LinearGaussianModel, red: &ReducedModel, r: &Mat, m: &Mat) -> Result<ReducedModel> {
    let ph = weighted_left_inverse(&red.p, m)?;
    let mut out = red.clone();
    out.b1 = &ph * &model.b * r;
    out.bw1 = &ph * &model.bw;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn similarity_needs_no_correction() {
        let a2 = Mat::from_row_slice(2, 2, &[0.5, 0.1, 0.0, 0.3]);
        let p = Mat::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let a1 = p.clone().try_inverse().unwrap() * &a2 * &p;
        let b2 = Mat::from_row_slice(2, 1, &[1.0, 1.0]);
        let s = solve_interface(&a1, &a2, &b2, &p).unwrap();
        assert!(s.q.norm() < 1e-12);
        assert!(s.is_valid());
    }

    #[test]
    fn identity_input_matrix() {
        let a2 = Mat::from_row_slice(2, 2, &[0.5, 0.1, 0.2, 0.3]);
        let p = Mat::from_row_slice(2, 1, &[1.0, -1.0]);
        let a1 = Mat::from_element(1, 1, 0.7);
        let s = solve_interface(&a1, &a2, &Mat::identity(2, 2), &p).unwrap();
        assert!((s.q - (&p * &a1 - &a2 * &p)).norm() < 1e-14);
    }

    #[test]
    fn aligned_projection_satisfies_interface() {
        let a2 = Mat::from_row_slice(3, 3, &[1.0, -0.3, 0.3, 0.0, 0.8, 0.0, 0.0, 0.0, 0.8]);
        let b2 = Mat::from_row_slice(3, 1, &[-0.03, 1.0, 0.0]);
        let a1 = Mat::from_element(1, 1, 0.7357);
        let p0 = Mat::from_row_slice(3, 1, &[1.0, 0.5, 0.1]);
        let q0 = Mat::from_element(1, 1, 0.0);
        let (p, q) = align_projection(&a1, &a2, &b2, &p0, &q0).unwrap();
        assert!(interface_residual(&a1, &a2, &b2, &p, &q) < 1e-12);
    }
}
