//! Gaussian states in the quadrature picture with vacuum variance 1.
//!
//! Mode `i` owns rows and columns `2i` (x) and `2i + 1` (p). A thermal state
//! with mean photon number `n` has covariance `(2n + 1) I`, so a symplectic
//! eigenvalue `nu` contributes `g((nu - 1) / 2)` to the von Neumann entropy.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

use super::g;
use crate::error::{invalid, Error, Result};

/// Physicality slack relative to the covariance scale.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// Block-diagonal symplectic form `Omega = diag([[0, 1], [-1, 0]], ...)`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for i in 0..modes {
        omega[(2 * i, 2 * i + 1)] = 1.0;
        omega[(2 * i + 1, 2 * i)] = -1.0;
    }
    omega
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    covariance: DMatrix<f64>,
    mean: DVector<f64>,
}

impl GaussianState {
    pub fn from_covariance(covariance: DMatrix<f64>) -> Result<Self> {
        let n = covariance.nrows();
        if n == 0 || n % 2 != 0 || covariance.ncols() != n {
            return Err(invalid("covariance", format!("must be square with even size, got {n}x{}", covariance.ncols())));
        }
        let scale = covariance.amax().max(1.0);
        if (&covariance - covariance.transpose()).amax() > 1e-12 * scale {
            return Err(invalid("covariance", "must be symmetric"));
        }
        Ok(Self {
            mean: DVector::zeros(n),
            covariance,
        })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            covariance: DMatrix::identity(2 * modes, 2 * modes),
            mean: DVector::zeros(2 * modes),
        }
    }

    pub fn thermal(mean_photons: f64) -> Result<Self> {
        check_photons(mean_photons)?;
        Ok(Self {
            covariance: DMatrix::identity(2, 2) * (2.0 * mean_photons + 1.0),
            mean: DVector::zeros(2),
        })
    }

    /// Two-mode squeezed vacuum whose marginals are thermal with `mean_photons`.
    pub fn tmsv(mean_photons: f64) -> Result<Self> {
        check_photons(mean_photons)?;
        let a = 2.0 * mean_photons + 1.0;
        let c = 2.0 * (mean_photons * (mean_photons + 1.0)).sqrt();
        #[rustfmt::skip]
        let covariance = DMatrix::from_row_slice(4, 4, &[
            a, 0.0, c, 0.0,
            0.0, a, 0.0, -c,
            c, 0.0, a, 0.0,
            0.0, -c, 0.0, a,
        ]);
        Ok(Self {
            covariance,
            mean: DVector::zeros(4),
        })
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (n, m) = (self.covariance.nrows(), other.covariance.nrows());
        let mut covariance = DMatrix::zeros(n + m, n + m);
        covariance.view_mut((0, 0), (n, n)).copy_from(&self.covariance);
        covariance.view_mut((n, n), (m, m)).copy_from(&other.covariance);
        let mut mean = DVector::zeros(n + m);
        mean.rows_mut(0, n).copy_from(&self.mean);
        mean.rows_mut(n, m).copy_from(&other.mean);
        Self { covariance, mean }
    }

    pub fn modes(&self) -> usize {
        self.covariance.nrows() / 2
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// Mixes modes `i` and `j` on a beamsplitter: `i` keeps amplitude
    /// `sqrt(t)` of itself plus `sqrt(1 - t)` of `j`, and `j` becomes
    /// `sqrt(t) j - sqrt(1 - t) i`.
    pub fn beamsplitter(&self, i: usize, j: usize, transmissivity: f64) -> Result<Self> {
        if i == j || i.max(j) >= self.modes() {
            return Err(invalid("beamsplitter", format!("bad mode pair ({i}, {j}) for {} modes", self.modes())));
        }
        if !(0.0..=1.0).contains(&transmissivity) {
            return Err(invalid("transmissivity", format!("must lie in [0, 1], got {transmissivity}")));
        }
        let (t, r) = (transmissivity.sqrt(), (1.0 - transmissivity).sqrt());
        let dim = self.covariance.nrows();
        let mut s = DMatrix::<f64>::identity(dim, dim);
        for q in 0..2 {
            let (a, b) = (2 * i + q, 2 * j + q);
            s[(a, a)] = t;
            s[(a, b)] = r;
            s[(b, a)] = -r;
            s[(b, b)] = t;
        }
        let covariance = &s * &self.covariance * s.transpose();
        Ok(Self {
            covariance: symmetrize(covariance),
            mean: &s * &self.mean,
        })
    }

    /// Marginal state of the listed modes, in the given order.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        let idx = self.indices(modes)?;
        Ok(Self {
            covariance: self.covariance.select_rows(&idx).select_columns(&idx),
            mean: self.mean.select_rows(&idx),
        })
    }

    /// State of `keep` after heterodyning `measured`, for the covariance part
    /// (independent of the outcome): `V_k - C (V_m + I)^-1 C^T`.
    pub fn heterodyne(&self, keep: &[usize], measured: &[usize]) -> Result<Self> {
        if keep.iter().any(|k| measured.contains(k)) {
            return Err(invalid("heterodyne", "kept and measured modes overlap"));
        }
        let ki = self.indices(keep)?;
        let mi = self.indices(measured)?;
        let vk = self.covariance.select_rows(&ki).select_columns(&ki);
        let vm = self.covariance.select_rows(&mi).select_columns(&mi);
        let c = self.covariance.select_rows(&ki).select_columns(&mi);
        let shifted = vm + DMatrix::identity(mi.len(), mi.len());
        let inv = shifted
            .cholesky()
            .ok_or_else(|| invalid("heterodyne", "measured block is not positive definite"))?
            .inverse();
        Ok(Self {
            covariance: symmetrize(vk - &c * inv * c.transpose()),
            mean: DVector::zeros(ki.len()),
        })
    }

    /// Symplectic eigenvalues in descending order.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.covariance)
    }

    /// Checks `V + i Omega >= 0` with slack `tolerance * max(1, |V|)`.
    pub fn check_physical(&self, tolerance: f64) -> Result<()> {
        let n = self.covariance.nrows();
        let omega = symplectic_form(self.modes());
        // real form of the Hermitian matrix V + i Omega
        let mut big = DMatrix::zeros(2 * n, 2 * n);
        big.view_mut((0, 0), (n, n)).copy_from(&self.covariance);
        big.view_mut((n, n), (n, n)).copy_from(&self.covariance);
        big.view_mut((0, n), (n, n)).copy_from(&(-&omega));
        big.view_mut((n, 0), (n, n)).copy_from(&omega);
        let min = SymmetricEigen::new(big).eigenvalues.min();
        let slack = tolerance * self.covariance.amax().max(1.0);
        if min < -slack {
            let min_nu = self.symplectic_eigenvalues().last().copied().unwrap_or(f64::NAN);
            return Err(Error::Unphysical { min_nu });
        }
        Ok(())
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.symplectic_eigenvalues()
            .iter()
            .map(|&nu| g(((nu - 1.0) / 2.0).max(0.0)))
            .sum()
    }

    fn indices(&self, modes: &[usize]) -> Result<Vec<usize>> {
        if modes.is_empty() {
            return Err(invalid("modes", "empty mode list"));
        }
        if let Some(&m) = modes.iter().find(|&&m| m >= self.modes()) {
            return Err(invalid("modes", format!("mode {m} out of range for {} modes", self.modes())));
        }
        Ok(modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect())
    }
}

fn check_photons(n: f64) -> Result<()> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(invalid("mean_photons", format!("must be finite and >= 0, got {n}")));
    }
    Ok(())
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// Symplectic eigenvalues of a covariance matrix, descending.
///
/// A single mode uses `sqrt(det V)`. Otherwise the eigenvalues of the real
/// antisymmetric `M = V^1/2 Omega V^1/2` are `±i nu`, so `M^T M` has each
/// `nu^2` twice.
pub fn symplectic_eigenvalues(v: &DMatrix<f64>) -> Vec<f64> {
    let n = v.nrows();
    if n == 2 {
        let m = Matrix2::new(v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)]);
        return vec![m.determinant().max(0.0).sqrt()];
    }
    let eig = SymmetricEigen::new(v.clone());
    let roots = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    let half = &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose();
    let m = &half * symplectic_form(n / 2) * &half;
    let mut squares: Vec<f64> = SymmetricEigen::new(m.transpose() * &m).eigenvalues.iter().copied().collect();
    squares.sort_by(|a, b| b.total_cmp(a));
    squares.chunks(2).map(|p| (0.5 * (p[0] + p[1])).max(0.0).sqrt()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tmsv_is_pure() {
        let s = GaussianState::tmsv(3.0).unwrap();
        for nu in s.symplectic_eigenvalues() {
            assert_relative_eq!(nu, 1.0, epsilon = 1e-10);
        }
        assert!(s.entropy().abs() < 1e-9);
        s.check_physical(PHYSICALITY_TOLERANCE).unwrap();
    }

    #[test]
    fn thermal_pair_spectrum() {
        let s = GaussianState::thermal(2.0).unwrap().tensor(&GaussianState::thermal(0.5).unwrap());
        let nus = s.symplectic_eigenvalues();
        assert_relative_eq!(nus[0], 5.0, epsilon = 1e-12);
        assert_relative_eq!(nus[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn beamsplitter_preserves_spectrum() {
        let s = GaussianState::thermal(2.0).unwrap().tensor(&GaussianState::thermal(0.5).unwrap());
        let mixed = s.beamsplitter(0, 1, 0.3).unwrap();
        let nus = mixed.symplectic_eigenvalues();
        assert_relative_eq!(nus[0], 5.0, epsilon = 1e-10);
        assert_relative_eq!(nus[1], 2.0, epsilon = 1e-10);
        let a = mixed.reduced(&[0]).unwrap().covariance()[(0, 0)];
        assert_relative_eq!(a, 0.3 * 5.0 + 0.7 * 2.0, epsilon = 1e-12);
    }

    #[test]
    fn heterodyne_on_tmsv_arm() {
        // Conditioning one arm of a TMSV leaves a coherent-like state:
        // a - c^2 / (a + 1) = 1.
        let s = GaussianState::tmsv(4.0).unwrap();
        let c = s.heterodyne(&[0], &[1]).unwrap();
        assert_relative_eq!(c.covariance()[(0, 0)], 1.0, epsilon = 1e-12);
        assert_relative_eq!(c.covariance()[(1, 1)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn squeezed_below_vacuum_without_partner_is_unphysical() {
        let v = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        let s = GaussianState::from_covariance(v).unwrap();
        assert!(matches!(s.check_physical(PHYSICALITY_TOLERANCE), Err(Error::Unphysical { .. })));
        let ok = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 2.0]);
        GaussianState::from_covariance(ok).unwrap().check_physical(PHYSICALITY_TOLERANCE).unwrap();
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(GaussianState::tmsv(-1.0).is_err());
        let s = GaussianState::vacuum(2);
        assert!(s.beamsplitter(0, 0, 0.5).is_err());
        assert!(s.beamsplitter(0, 1, 1.5).is_err());
        assert!(s.reduced(&[2]).is_err());
        assert!(GaussianState::from_covariance(DMatrix::identity(3, 3)).is_err());
    }
}
