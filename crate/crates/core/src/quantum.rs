//! Hermitian operators, density matrices, Gibbs states and passivity.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{inner, jacobi_eigh, ComplexMatrix};
use crate::tolerance::TOL;

/// Hermitian matrix together with its eigensystem.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<C64>>,
}

impl HermitianOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[Vec<C64>] {
        &self.eigenvectors
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Builds the operator Σ E_n |v_n⟩⟨v_n| from a known spectral decomposition,
    /// keeping the order given. The vectors must be orthonormal.
    pub fn from_spectrum(eigenvalues: Vec<f64>, eigenvectors: Vec<Vec<C64>>) -> Result<Self> {
        let d = eigenvalues.len();
        if eigenvectors.len() != d {
            return Err(Error::LengthMismatch(eigenvectors.len(), d));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("empty spectrum".into()));
        }
        for v in &eigenvectors {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
        }
        if eigenvalues.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite);
        }
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                if (inner(&eigenvectors[i], &eigenvectors[j]) - target).norm() > TOL.eigensystem {
                    return Err(Error::NotOrthonormal);
                }
            }
        }
        let mut matrix = ComplexMatrix::zeros(d);
        for (e, v) in eigenvalues.iter().zip(&eigenvectors) {
            matrix = &matrix + &ComplexMatrix::projector(v).scale(C64::new(*e, 0.0));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
            eigenvalues,
            eigenvectors,
        })
    }

    /// ⟨v|A|v⟩ for a normalized state, imaginary part discarded.
    pub fn expectation_in(&self, v: &[C64]) -> f64 {
        inner(v, &self.matrix.mul_vec(v)).re
    }
}

/// Diagonalizes a Hermitian matrix. Eigenvalues come back ascending; inside a
/// degenerate block the basis is arbitrary.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<HermitianOperator> {
    let (eigenvalues, vectors) = jacobi_eigh(m)?;
    let eigenvectors = (0..m.dim()).map(|j| vectors.column(j)).collect();
    Ok(HermitianOperator {
        matrix: m.hermitian_part(),
        eigenvalues,
        eigenvectors,
    })
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermitian_deviation();
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        if dev > TOL.hermitian {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TOL.trace {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        let (vals, _) = jacobi_eigh(&matrix)?;
        if vals[0] < -TOL.positivity {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {}",
                vals[0]
            )));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    // For outputs of operations that preserve the invariants by construction.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    /// Σ p_n |v_n⟩⟨v_n| for orthonormal `vectors` and a probability vector `pops`.
    pub fn from_populations(pops: &[f64], vectors: &[Vec<C64>]) -> Result<Self> {
        if pops.len() != vectors.len() {
            return Err(Error::LengthMismatch(pops.len(), vectors.len()));
        }
        if pops.is_empty() {
            return Err(Error::InvalidArgument("empty population vector".into()));
        }
        check_probability_vector(pops)?;
        let d = pops.len();
        let mut m = ComplexMatrix::zeros(d);
        for (p, v) in pops.iter().zip(vectors) {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
            m = &m + &ComplexMatrix::projector(v).scale(C64::new(*p, 0.0));
        }
        Ok(Self::from_trusted(m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn pure(v: &[C64]) -> Result<Self> {
        Self::new(ComplexMatrix::projector(v))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// ⟨v|ρ|v⟩
    pub fn population(&self, v: &[C64]) -> f64 {
        inner(v, &self.matrix.mul_vec(v)).re
    }
}

/// Thermal bath at inverse temperature β (k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    beta: f64,
}

impl BathSpec {
    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta > 0.0 {
            Ok(Self { beta })
        } else {
            Err(Error::InvalidBeta(beta))
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Boltzmann populations e^{-βE_n}/Z, with the minimum energy subtracted
/// before exponentiating.
pub fn boltzmann_populations(energies: &[f64], bath: BathSpec) -> Vec<f64> {
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies
        .iter()
        .map(|e| (-bath.beta() * (e - e0)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / z).collect()
}

pub fn gibbs_state(h: &HermitianOperator, bath: BathSpec) -> DensityMatrix {
    let pops = boltzmann_populations(h.eigenvalues(), bath);
    let d = h.dim();
    let mut m = ComplexMatrix::zeros(d);
    for (p, v) in pops.iter().zip(h.eigenvectors()) {
        m = &m + &ComplexMatrix::projector(v).scale(C64::new(*p, 0.0));
    }
    DensityMatrix::from_trusted(m)
}

/// Tr[ρH]
pub fn energy_expectation(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    check_dims(rho.dim(), h.dim())?;
    let tr = rho.matrix().try_mul(h.matrix())?.trace();
    let scale = 1.0 + h.matrix().max_abs();
    if tr.im.abs() > TOL.eigensystem * scale {
        return Err(Error::NotHermitian(tr.im.abs()));
    }
    Ok(tr.re)
}

/// ⟨v_n|ρ|v_n⟩ for each eigenvector of `h`, in the operator's eigenvector order.
pub fn populations_in_basis(rho: &DensityMatrix, h: &HermitianOperator) -> Result<Vec<f64>> {
    check_dims(rho.dim(), h.dim())?;
    Ok(h.eigenvectors().iter().map(|v| rho.population(v)).collect())
}

/// True when no pair of levels has a strictly higher energy carrying a larger
/// population; degenerate levels are unconstrained.
pub fn is_passive(pops: &[f64], energies: &[f64]) -> Result<bool> {
    if pops.len() != energies.len() {
        return Err(Error::LengthMismatch(pops.len(), energies.len()));
    }
    check_probability_vector(pops)?;
    for i in 0..pops.len() {
        for j in 0..pops.len() {
            if energies[i] < energies[j] && pops[i] < pops[j] - TOL.probability {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn check_probability_vector(pops: &[f64]) -> Result<()> {
    let sum: f64 = pops.iter().sum();
    if pops.iter().any(|p| !p.is_finite() || *p < -TOL.probability)
        || (sum - 1.0).abs() > TOL.probability
    {
        return Err(Error::InvalidArgument(format!(
            "not a probability vector (sum {sum})"
        )));
    }
    Ok(())
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn qutrit(b: f64, j: f64) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, b, 0.0], &[b, 0.0, 0.0], &[0.0, 0.0, -j]]).unwrap()
    }

    fn bath(beta: f64) -> BathSpec {
        BathSpec::new(beta).unwrap()
    }

    // independent partition-function evaluation
    fn boltzmann_oracle(energies: &[f64], beta: f64) -> Vec<f64> {
        let z: f64 = energies.iter().map(|e| (-beta * e).exp()).sum();
        energies.iter().map(|e| (-beta * e).exp() / z).collect()
    }

    #[test]
    fn qutrit_eigensystem_matches_table() {
        let h = hermitian_eigensystem(&qutrit(3.0, 2.0)).unwrap();
        let expected = [-3.0, -2.0, 3.0];
        for (a, b) in h.eigenvalues().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let table = [
            vec![C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(0.0, 0.0), ONE],
            vec![C64::new(s, 0.0), C64::new(s, 0.0), C64::new(0.0, 0.0)],
        ];
        for (v, t) in h.eigenvectors().iter().zip(&table) {
            // equal up to a global phase
            assert!((inner(v, t).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_eigenvalues() {
        let h = hermitian_eigensystem(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(h.eigenvalues(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn infinite_temperature_limit() {
        let h = hermitian_eigensystem(&qutrit(3.0, 2.0)).unwrap();
        let rho = gibbs_state(&h, bath(1e-12));
        for p in populations_in_basis(&rho, &h).unwrap() {
            assert!((p - 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn uncoupled_qutrit_gibbs_populations() {
        let h = hermitian_eigensystem(&qutrit(3.0, 0.0)).unwrap();
        let rho = gibbs_state(&h, bath(1.0));
        let pops = populations_in_basis(&rho, &h).unwrap();
        // ascending energies -3, 0, 3
        let oracle = boltzmann_oracle(&[-3.0, 0.0, 3.0], 1.0);
        for (p, q) in pops.iter().zip(&oracle) {
            assert!((p - q).abs() < 1e-14);
        }
        // Z = e^3 + e^-3 + 1
        assert!((pops[0] - 0.950_330_211_697_379_3).abs() < 1e-14);
        let u = energy_expectation(&rho, &h).unwrap();
        assert!((u - (-2.843_923_735_849_748)).abs() < 1e-13);
    }

    #[test]
    fn coupled_qutrit_gibbs_populations() {
        let h = hermitian_eigensystem(&qutrit(3.0, 2.0)).unwrap();
        let rho = gibbs_state(&h, bath(1.0));
        let pops = populations_in_basis(&rho, &h).unwrap();
        let oracle = boltzmann_oracle(&[-3.0, -2.0, 3.0], 1.0);
        for (p, q) in pops.iter().zip(&oracle) {
            assert!((p - q).abs() < 1e-14);
        }
        assert!((energy_expectation(&rho, &h).unwrap() - (-2.720_692_037_972_723_7)).abs() < 1e-13);
    }

    #[test]
    fn gibbs_survives_large_beta() {
        let h = hermitian_eigensystem(&qutrit(300.0, 2.0)).unwrap();
        let pops = populations_in_basis(&gibbs_state(&h, bath(50.0)), &h).unwrap();
        assert!(pops.iter().all(|p| p.is_finite()));
        assert!((pops[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_expectation_examples() {
        let h = hermitian_eigensystem(&qutrit(3.0, 2.0)).unwrap();
        let ground = DensityMatrix::pure(&h.eigenvectors()[0]).unwrap();
        assert!((energy_expectation(&ground, &h).unwrap() + 3.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(3);
        assert!((energy_expectation(&mixed, &h).unwrap() + 2.0 / 3.0).abs() < 1e-12);
        let wrong = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            energy_expectation(&wrong, &h),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn population_examples() {
        let h = hermitian_eigensystem(&qutrit(1.0, 0.5)).unwrap();
        let rho = DensityMatrix::pure(&h.eigenvectors()[0]).unwrap();
        let p = populations_in_basis(&rho, &h).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12 && p[2].abs() < 1e-12);
        let h4 = hermitian_eigensystem(&ComplexMatrix::diagonal(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        let p = populations_in_basis(&DensityMatrix::maximally_mixed(4), &h4).unwrap();
        assert!(p.iter().all(|x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn passivity_examples() {
        assert!(is_passive(&[0.7, 0.2, 0.1], &[-1.0, 0.0, 2.0]).unwrap());
        assert!(!is_passive(&[0.2, 0.7, 0.1], &[-1.0, 0.0, 2.0]).unwrap());
        // degenerate levels impose no order
        assert!(is_passive(&[0.2, 0.7, 0.1], &[0.0, 0.0, 2.0]).unwrap());
        assert_eq!(
            is_passive(&[1.0], &[0.0, 1.0]),
            Err(Error::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let neg = ComplexMatrix::diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(neg),
            Err(Error::NotDensityMatrix(_))
        ));
        assert!(BathSpec::new(0.0).is_err());
        assert!(BathSpec::new(f64::INFINITY).is_err());
    }

    #[test]
    fn from_spectrum_rejects_non_orthonormal() {
        let v = vec![vec![ONE, C64::new(0.0, 0.0)], vec![ONE, C64::new(0.0, 0.0)]];
        assert_eq!(
            HermitianOperator::from_spectrum(vec![0.0, 1.0], v).unwrap_err(),
            Error::NotOrthonormal
        );
    }
}
