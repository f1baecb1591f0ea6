//! Numerical tolerances shared by every module.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum |A - A†| entry accepted as Hermitian.
    pub hermitian: f64,
    /// Orthonormality and spectral reconstruction of eigensystems.
    pub eigensystem: f64,
    /// Trace of a density matrix.
    pub trace: f64,
    /// Most negative eigenvalue accepted in a density matrix.
    pub positivity: f64,
    /// Trace preservation and unitality of Kraus sets, Hermiticity of Kraus operators.
    pub channel: f64,
    /// Probability comparisons (passivity, stochasticity).
    pub probability: f64,
    /// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this.
    pub jacobi_off_diagonal: f64,
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues closer than this form a degenerate block.
    pub degeneracy: f64,
    /// Gap-ratio comparisons for uniform scaling.
    pub gap_ratio: f64,
    /// Norm of a spin direction.
    pub unit_vector: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-12,
        eigensystem: 1e-10,
        trace: 1e-12,
        positivity: 1e-10,
        channel: 1e-10,
        probability: 1e-10,
        jacobi_off_diagonal: 1e-13,
        jacobi_max_sweeps: 100,
        degeneracy: 1e-9,
        gap_ratio: 1e-10,
        unit_vector: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;
