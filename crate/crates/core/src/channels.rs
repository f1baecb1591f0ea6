//! Kraus channels, their structural predicates, and the energy transfer matrix
//! linking pre- and post-channel energy populations.

use itertools::Itertools;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{inner, ComplexMatrix};
use crate::quantum::{check_dims, hermitian_eigensystem, DensityMatrix, HermitianOperator};
use crate::tolerance::TOL;

/// Trace-preserving channel ρ ↦ Σ_α M_α ρ M_α†.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexMatrix>,
    unital: bool,
}

impl KrausChannel {
    /// Requires Σ M_α†M_α = I.
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or(Error::EmptyChannel)?;
        let dim = first.dim();
        for m in &operators {
            check_dims(dim, m.dim())?;
            if !m.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let identity = ComplexMatrix::identity(dim);
        let tp = operators.iter().fold(ComplexMatrix::zeros(dim), |acc, m| {
            &acc + &(&m.adjoint() * m)
        });
        let dev = tp.max_abs_diff(&identity);
        if dev > TOL.channel {
            return Err(Error::NotTracePreserving(dev));
        }
        let unit = operators.iter().fold(ComplexMatrix::zeros(dim), |acc, m| {
            &acc + &(m * &m.adjoint())
        });
        let unital = unit.max_abs_diff(&identity) <= TOL.channel;
        Ok(Self {
            dim,
            operators,
            unital,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
            unital: true,
        }
    }

    /// Non-selective projective measurement onto an orthonormal basis.
    pub fn projective(basis: &[Vec<C64>]) -> Result<Self> {
        Self::new(basis.iter().map(|v| ComplexMatrix::projector(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }
}

pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_dims(ch.dim(), rho.dim())?;
    let out = ch
        .operators()
        .iter()
        .fold(ComplexMatrix::zeros(ch.dim()), |acc, m| {
            &acc + &(&(m * rho.matrix()) * &m.adjoint())
        });
    Ok(DensityMatrix::from_trusted(out))
}

/// Σ M_α M_α† = I
pub fn is_unital(ch: &KrausChannel) -> bool {
    ch.unital
}

/// Every Kraus operator Hermitian.
pub fn is_minimally_disturbing(ch: &KrausChannel) -> bool {
    ch.operators().iter().all(|m| m.is_hermitian(TOL.channel))
}

/// Conditional probabilities T[m][n] = p(m | n) of ending in eigenstate m of a
/// Hamiltonian after the channel, starting from eigenstate n.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl TransferMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.entries[m * self.dim + n]
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|n| (0..self.dim).map(|m| self.get(m, n)).sum())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|m| (0..self.dim).map(|n| self.get(m, n)).sum())
            .collect()
    }

    pub fn is_column_stochastic(&self) -> bool {
        self.column_sums()
            .iter()
            .all(|s| (s - 1.0).abs() <= TOL.probability)
    }

    pub fn is_bistochastic(&self) -> bool {
        self.is_column_stochastic()
            && self
                .row_sums()
                .iter()
                .all(|s| (s - 1.0).abs() <= TOL.probability)
    }

    /// p' = T p
    pub fn apply(&self, pops: &[f64]) -> Result<Vec<f64>> {
        if pops.len() != self.dim {
            return Err(Error::LengthMismatch(pops.len(), self.dim));
        }
        Ok((0..self.dim)
            .map(|m| (0..self.dim).map(|n| self.get(m, n) * pops[n]).sum())
            .collect())
    }
}

pub fn transfer_matrix(ch: &KrausChannel, h: &HermitianOperator) -> Result<TransferMatrix> {
    check_dims(ch.dim(), h.dim())?;
    let d = ch.dim();
    let vecs = h.eigenvectors();
    let mut entries = vec![0.0; d * d];
    for op in ch.operators() {
        // columns M|v_n⟩
        let images: Vec<Vec<C64>> = vecs.iter().map(|v| op.mul_vec(v)).collect();
        for m in 0..d {
            for n in 0..d {
                entries[m * d + n] += inner(&vecs[m], &images[n]).norm_sqr();
            }
        }
    }
    Ok(TransferMatrix { dim: d, entries })
}

/// Tr[(E(ρ) − ρ)H]
pub fn energy_change(ch: &KrausChannel, rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    check_dims(ch.dim(), h.dim())?;
    let after = apply_channel(ch, rho)?;
    let diff = after.matrix() - rho.matrix();
    Ok((&diff * h.matrix()).trace().re)
}

/// Random Hermitian matrix with standard-normal entries.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = C64::new(rng.sample(StandardNormal), 0.0);
        for j in (i + 1)..dim {
            let z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Eigenvector matrix of a random Hermitian matrix times random diagonal phases.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let h = hermitian_eigensystem(&random_hermitian(dim, rng))?;
    let mut u = ComplexMatrix::zeros(dim);
    for (j, v) in h.eigenvectors().iter().enumerate() {
        let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        for i in 0..dim {
            u[(i, j)] = v[i] * phase;
        }
    }
    Ok(u)
}

/// Mixture of `mix_count` random unitaries {√q_j U_j}; deterministic per seed.
pub fn random_unital_channel(dim: usize, seed: u64, mix_count: usize) -> Result<KrausChannel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unital_channel_with(dim, mix_count, &mut rng)
}

pub fn random_unital_channel_with(
    dim: usize,
    mix_count: usize,
    rng: &mut impl Rng,
) -> Result<KrausChannel> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    if mix_count == 0 {
        return Err(Error::InvalidArgument(
            "mix_count must be at least 1".into(),
        ));
    }
    let raw: Vec<f64> = (0..mix_count).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let ops = raw
        .iter()
        .map(|w| Ok(random_unitary(dim, rng)?.scale(C64::new((w / total).sqrt(), 0.0))))
        .collect::<Result<Vec<_>>>()?;
    KrausChannel::new(ops)
}

/// Amplitude-damping style decay towards `basis[0]`: M_0 = |0⟩⟨0| + √(1−γ) Σ_{k>0} |k⟩⟨k|,
/// M_k = √γ |0⟩⟨k|. Trace preserving but not unital for γ > 0.
pub fn amplitude_damping(basis: &[Vec<C64>], gamma: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidArgument(format!(
            "damping must lie in [0, 1], got {gamma}"
        )));
    }
    let d = basis.len();
    let keep = (1.0 - gamma).sqrt();
    let mut m0 = ComplexMatrix::projector(&basis[0]);
    for v in &basis[1..] {
        m0 = &m0 + &ComplexMatrix::projector(v).scale(C64::new(keep, 0.0));
    }
    let mut ops = vec![m0];
    for k in 1..d {
        ops.push(ComplexMatrix::outer(&basis[0], &basis[k]).scale(C64::new(gamma.sqrt(), 0.0)));
    }
    KrausChannel::new(ops)
}

pub const REARRANGEMENT_MAX_DIM: usize = 6;

/// min over permutations σ of Σ_n E_n p_σ(n), by exhaustive enumeration.
pub fn rearrangement_oracle(pops: &[f64], energies: &[f64]) -> Result<f64> {
    if pops.len() != energies.len() {
        return Err(Error::LengthMismatch(pops.len(), energies.len()));
    }
    let d = pops.len();
    if d > REARRANGEMENT_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            max: REARRANGEMENT_MAX_DIM,
            found: d,
        });
    }
    Ok((0..d)
        .permutations(d)
        .map(|perm| {
            energies
                .iter()
                .zip(&perm)
                .map(|(e, &k)| e * pops[k])
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min))
}
