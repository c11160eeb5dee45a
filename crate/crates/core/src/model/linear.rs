use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat, Vector};

/// Concrete model `x⁺ = A x + B u + B_w w`, `y = C x`, `w ~ N(0, I_d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct LinearGaussianModel {
    pub a: Mat,
    pub b: Mat,
    pub bw: Mat,
    pub c: Mat,
    /// Admissible abstract inputs satisfy `‖u₁‖² ≤ input_bound`.
    pub input_bound: f64,
    pub x0: Vector,
}

impl LinearGaussianModel {
    pub fn new(a: Mat, b: Mat, bw: Mat, c: Mat, input_bound: f64, x0: Vector) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n || n == 0 {
            return Err(Error::dim("A must be square and non-empty"));
        }
        if b.nrows() != n || b.ncols() == 0 {
            return Err(Error::dim(format!("B must have {n} rows and at least one column")));
        }
        if bw.nrows() != n || bw.ncols() == 0 {
            return Err(Error::dim(format!("B_w must have {n} rows and at least one column")));
        }
        if c.ncols() != n || c.nrows() == 0 {
            return Err(Error::dim(format!("C must have {n} columns and at least one row")));
        }
        if x0.len() != n {
            return Err(Error::dim(format!("initial state has length {}, expected {n}", x0.len())));
        }
        if !(input_bound >= 0.0) || !input_bound.is_finite() {
            return Err(Error::arg("input bound must be finite and nonnegative"));
        }
        let all = a.iter().chain(b.iter()).chain(bw.iter()).chain(c.iter()).chain(x0.iter());
        if all.clone().any(|v| !v.is_finite()) {
            return Err(Error::arg("model entries must be finite"));
        }
        Ok(LinearGaussianModel { a, b, bw, c, input_bound, x0 })
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }
    pub fn input_dim(&self) -> usize {
        self.b.ncols()
    }
    pub fn noise_dim(&self) -> usize {
        self.bw.ncols()
    }
    pub fn output_dim(&self) -> usize {
        self.c.nrows()
    }

    /// `y = C x`.
    pub fn output(&self, x: &Vector) -> Result<Vector> {
        if x.len() != self.state_dim() {
            return Err(Error::dim(format!("state has length {}, expected {}", x.len(), self.state_dim())));
        }
        Ok(&self.c * x)
    }

    /// One step of the dynamics for a given input and noise realization.
    pub fn step(&self, x: &Vector, u: &Vector, w: &Vector) -> Vector {
        &self.a * x + &self.b * u + &self.bw * w
    }

    /// `A + B K`.
    pub fn closed_loop(&self, k: &Mat) -> Result<Mat> {
        if k.nrows() != self.input_dim() || k.ncols() != self.state_dim() {
            return Err(Error::dim(format!("gain must be {}x{}", self.input_dim(), self.state_dim())));
        }
        Ok(&self.a + &self.b * k)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// JSON form: matrices as row-major nested arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub bw: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
    pub input_bound: f64,
    pub x0: Vec<f64>,
}

impl TryFrom<ModelFile> for LinearGaussianModel {
    type Error = Error;
    fn try_from(f: ModelFile) -> Result<Self> {
        let m = |rows: &[Vec<f64>], name: &str| {
            linalg::rows::from_rows(rows, 0).map_err(|e| Error::dim(format!("{name}: {e}")))
        };
        LinearGaussianModel::new(m(&f.a, "a")?, m(&f.b, "b")?, m(&f.bw, "bw")?, m(&f.c, "c")?, f.input_bound, Vector::from_vec(f.x0))
    }
}

impl From<LinearGaussianModel> for ModelFile {
    fn from(m: LinearGaussianModel) -> Self {
        use linalg::rows::to_rows;
        ModelFile {
            a: to_rows(&m.a),
            b: to_rows(&m.b),
            bw: to_rows(&m.bw),
            c: to_rows(&m.c),
            input_bound: m.input_bound,
            x0: m.x0.as_slice().to_vec(),
        }
    }
}
