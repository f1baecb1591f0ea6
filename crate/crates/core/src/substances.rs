//! Working substances: a single qubit, the three-level toy model and two
//! XXZ-coupled spins, with closed-form spectra labelled by level.
//!
//! Every level of these models is affine in the field, E(B) = offset + slope·B,
//! and its eigenvector does not depend on B. Levels with zero slope are idle:
//! they exchange heat but cannot exchange work.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ONE, ZERO};
use crate::quantum::{hermitian_eigensystem, HermitianOperator};
use crate::tolerance::TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubstanceSpec {
    /// H = B σ_z
    Qubit,
    /// H = [[0, B, 0], [B, 0, 0], [0, 0, −J]] in the basis |0⟩, |1⟩, |2⟩.
    Qutrit { j: f64 },
    /// H = Jxy(σxσx + σyσy) + Jz(σzσz − 1) + B(σz ⊗ 1 + 1 ⊗ σz).
    ///
    /// The −Jz offset puts the zero of energy where the field-dependent levels
    /// are exactly ±2B, so the coupling lives entirely in the idle levels.
    Xxz { jxy: f64, jz: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LevelLabel {
    /// +B (qubit, qutrit)
    PlusB,
    /// −B (qubit, qutrit)
    MinusB,
    /// −J (qutrit)
    MinusJ,
    /// 2B, |00⟩
    Plus2B,
    /// 2(Jxy − Jz), (|01⟩ + |10⟩)/√2
    Triplet,
    /// −2(Jxy + Jz), (|01⟩ − |10⟩)/√2
    Singlet,
    /// −2B, |11⟩
    Minus2B,
}

impl LevelLabel {
    /// Identifier used for CSV columns.
    pub fn key(self) -> &'static str {
        match self {
            LevelLabel::PlusB => "plus_b",
            LevelLabel::MinusB => "minus_b",
            LevelLabel::MinusJ => "minus_j",
            LevelLabel::Plus2B => "plus_2b",
            LevelLabel::Triplet => "triplet",
            LevelLabel::Singlet => "singlet",
            LevelLabel::Minus2B => "minus_2b",
        }
    }
}

impl fmt::Display for LevelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LevelLabel::PlusB => "+B",
            LevelLabel::MinusB => "-B",
            LevelLabel::MinusJ => "-J",
            LevelLabel::Plus2B => "2B",
            LevelLabel::Triplet => "2(Jxy-Jz)",
            LevelLabel::Singlet => "-2(Jxy+Jz)",
            LevelLabel::Minus2B => "-2B",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub label: LevelLabel,
    pub energy: f64,
    pub idle: bool,
    pub state: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelledSpectrum {
    pub levels: Vec<Level>,
    pub field: f64,
}

impl LabelledSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn labels(&self) -> Vec<LevelLabel> {
        self.levels.iter().map(|l| l.label).collect()
    }

    pub fn states(&self) -> Vec<Vec<C64>> {
        self.levels.iter().map(|l| l.state.clone()).collect()
    }

    /// The Hamiltonian as an operator whose eigenvectors follow label order.
    pub fn operator(&self) -> Result<HermitianOperator> {
        HermitianOperator::from_spectrum(self.energies(), self.states())
    }
}

#[derive(Debug, Clone, Copy)]
struct AffineLevel {
    label: LevelLabel,
    offset: f64,
    slope: f64,
}

impl AffineLevel {
    fn at(&self, b: f64) -> f64 {
        self.offset + self.slope * b
    }
}

fn basis_state(dim: usize, k: usize) -> Vec<C64> {
    (0..dim).map(|i| if i == k { ONE } else { ZERO }).collect()
}

fn two_state(dim: usize, (i, a): (usize, f64), (j, b): (usize, f64)) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[i] = C64::new(a, 0.0);
    v[j] = C64::new(b, 0.0);
    v
}

impl SubstanceSpec {
    pub fn dim(&self) -> usize {
        match self {
            SubstanceSpec::Qubit => 2,
            SubstanceSpec::Qutrit { .. } => 3,
            SubstanceSpec::Xxz { .. } => 4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SubstanceSpec::Qubit => "qubit",
            SubstanceSpec::Qutrit { .. } => "qutrit",
            SubstanceSpec::Xxz { .. } => "xxz",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            SubstanceSpec::Qubit => true,
            SubstanceSpec::Qutrit { j } => j.is_finite(),
            SubstanceSpec::Xxz { jxy, jz } => jxy.is_finite() && jz.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    fn affine_levels(&self) -> Vec<AffineLevel> {
        use LevelLabel::*;
        let lvl = |label, offset, slope| AffineLevel {
            label,
            offset,
            slope,
        };
        match *self {
            SubstanceSpec::Qubit => vec![lvl(PlusB, 0.0, 1.0), lvl(MinusB, 0.0, -1.0)],
            SubstanceSpec::Qutrit { j } => {
                vec![
                    lvl(PlusB, 0.0, 1.0),
                    lvl(MinusB, 0.0, -1.0),
                    lvl(MinusJ, -j, 0.0),
                ]
            }
            SubstanceSpec::Xxz { jxy, jz } => vec![
                lvl(Plus2B, 0.0, 2.0),
                lvl(Triplet, 2.0 * (jxy - jz), 0.0),
                lvl(Singlet, -2.0 * (jxy + jz), 0.0),
                lvl(Minus2B, 0.0, -2.0),
            ],
        }
    }

    fn level_states(&self) -> Vec<Vec<C64>> {
        let s = FRAC_1_SQRT_2;
        match self {
            SubstanceSpec::Qubit => vec![basis_state(2, 0), basis_state(2, 1)],
            SubstanceSpec::Qutrit { .. } => vec![
                two_state(3, (0, s), (1, s)),
                two_state(3, (0, -s), (1, s)),
                basis_state(3, 2),
            ],
            SubstanceSpec::Xxz { .. } => vec![
                basis_state(4, 0),
                two_state(4, (1, s), (2, s)),
                two_state(4, (1, s), (2, -s)),
                basis_state(4, 3),
            ],
        }
    }
}

fn check_field(b: f64) -> Result<()> {
    if b.is_finite() && b > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidField(b))
    }
}

/// Hamiltonian matrix in the computational basis.
pub fn hamiltonian_matrix(spec: &SubstanceSpec, b: f64) -> Result<ComplexMatrix> {
    check_field(b)?;
    spec.validate()?;
    match *spec {
        SubstanceSpec::Qubit => Ok(ComplexMatrix::diagonal(&[b, -b])),
        SubstanceSpec::Qutrit { j } => {
            ComplexMatrix::from_real_rows(&[&[0.0, b, 0.0], &[b, 0.0, 0.0], &[0.0, 0.0, -j]])
        }
        SubstanceSpec::Xxz { jxy, jz } => {
            let mut m = ComplexMatrix::diagonal(&[2.0 * b, -2.0 * jz, -2.0 * jz, -2.0 * b]);
            m[(1, 2)] = C64::new(2.0 * jxy, 0.0);
            m[(2, 1)] = C64::new(2.0 * jxy, 0.0);
            Ok(m)
        }
    }
}

/// Diagonalized Hamiltonian (ascending eigenvalues).
pub fn build_hamiltonian(spec: &SubstanceSpec, b: f64) -> Result<HermitianOperator> {
    hermitian_eigensystem(&hamiltonian_matrix(spec, b)?)
}

pub fn labelled_spectrum(spec: &SubstanceSpec, b: f64) -> Result<LabelledSpectrum> {
    check_field(b)?;
    spec.validate()?;
    let levels = spec
        .affine_levels()
        .into_iter()
        .zip(spec.level_states())
        .map(|(l, state)| Level {
            label: l.label,
            energy: l.at(b),
            idle: l.slope == 0.0,
            state,
        })
        .collect();
    Ok(LabelledSpectrum { levels, field: b })
}

fn check_stroke(bi: f64, bf: f64) -> Result<()> {
    check_field(bi)?;
    check_field(bf)?;
    if bi < bf {
        Ok(())
    } else {
        Err(Error::InvalidCycle(format!(
            "need Bi < Bf, got {bi} and {bf}"
        )))
    }
}

/// Returns r = Bf/Bi when every gap scales by r between the two fields.
pub fn check_uniform_gap_ratio(spec: &SubstanceSpec, bi: f64, bf: f64) -> Option<f64> {
    check_stroke(bi, bf).ok()?;
    let ei = labelled_spectrum(spec, bi).ok()?.energies();
    let ef = labelled_spectrum(spec, bf).ok()?.energies();
    let r = bf / bi;
    let scale = 1.0 + ef.iter().map(|e| e.abs()).fold(0.0, f64::max);
    for n in 0..ei.len() {
        for m in (n + 1)..ei.len() {
            let lhs = ef[n] - ef[m];
            let rhs = r * (ei[n] - ei[m]);
            if (lhs - rhs).abs() > TOL.gap_ratio * scale {
                return None;
            }
        }
    }
    Some(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCrossing {
    pub first: LevelLabel,
    pub second: LevelLabel,
    pub field: f64,
}

/// Fields in [Bi, Bf] at which two labelled levels become degenerate.
/// Levels degenerate at every field (identical lines) are not crossings.
pub fn detect_level_crossing(spec: &SubstanceSpec, bi: f64, bf: f64) -> Vec<LevelCrossing> {
    if check_stroke(bi, bf).is_err() || spec.validate().is_err() {
        return Vec::new();
    }
    let levels = spec.affine_levels();
    let mut out = Vec::new();
    for (n, a) in levels.iter().enumerate() {
        for b in &levels[n + 1..] {
            if a.slope == b.slope {
                continue;
            }
            let field = (b.offset - a.offset) / (a.slope - b.slope);
            if field >= bi && field <= bf {
                out.push(LevelCrossing {
                    first: a.label,
                    second: b.label,
                    field,
                });
            }
        }
    }
    out.sort_by(|x, y| x.field.total_cmp(&y.field));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    #[test]
    fn qutrit_matrix_layout() {
        let m = hamiltonian_matrix(&SubstanceSpec::Qutrit { j: 2.0 }, 3.0).unwrap();
        let expected =
            ComplexMatrix::from_real_rows(&[&[0.0, 3.0, 0.0], &[3.0, 0.0, 0.0], &[0.0, 0.0, -2.0]])
                .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn uncoupled_xxz_is_diagonal() {
        let m = hamiltonian_matrix(&SubstanceSpec::Xxz { jxy: 0.0, jz: 0.0 }, 2.0).unwrap();
        assert_eq!(m, ComplexMatrix::diagonal(&[4.0, 0.0, 0.0, -4.0]));
    }

    #[test]
    fn xxz_eigenvalues() {
        // 2B, 2(Jxy−Jz), −2(Jxy+Jz), −2B sorted
        let h = build_hamiltonian(&SubstanceSpec::Xxz { jxy: 1.0, jz: 0.5 }, 2.0).unwrap();
        for (a, b) in h.eigenvalues().iter().zip([-4.0, -3.0, 1.0, 4.0]) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_non_positive_field() {
        assert_eq!(
            build_hamiltonian(&SubstanceSpec::Qubit, 0.0).unwrap_err(),
            Error::InvalidField(0.0)
        );
        assert!(labelled_spectrum(&SubstanceSpec::Qubit, -1.0).is_err());
    }

    #[test]
    fn qutrit_labelled_spectrum() {
        let s = labelled_spectrum(&SubstanceSpec::Qutrit { j: 1.0 }, 4.0).unwrap();
        let got: Vec<_> = s
            .levels
            .iter()
            .map(|l| (l.label, l.energy, l.idle))
            .collect();
        assert_eq!(
            got,
            vec![
                (LevelLabel::PlusB, 4.0, false),
                (LevelLabel::MinusB, -4.0, false),
                (LevelLabel::MinusJ, -1.0, true)
            ]
        );
        let zero = labelled_spectrum(&SubstanceSpec::Qutrit { j: 0.0 }, 2.5).unwrap();
        assert_eq!(zero.levels[2].energy, 0.0);
        assert!(zero.levels[2].idle);
    }

    #[test]
    fn xxz_labelled_spectrum() {
        let s = labelled_spectrum(&SubstanceSpec::Xxz { jxy: 1.0, jz: 0.0 }, 3.0).unwrap();
        let got: Vec<_> = s
            .levels
            .iter()
            .map(|l| (l.label, l.energy, l.idle))
            .collect();
        assert_eq!(
            got,
            vec![
                (LevelLabel::Plus2B, 6.0, false),
                (LevelLabel::Triplet, 2.0, true),
                (LevelLabel::Singlet, -2.0, true),
                (LevelLabel::Minus2B, -6.0, false)
            ]
        );
    }

    #[test]
    fn labelled_states_are_eigenvectors() {
        for spec in [
            SubstanceSpec::Qubit,
            SubstanceSpec::Qutrit { j: 1.3 },
            SubstanceSpec::Xxz { jxy: 0.7, jz: -0.4 },
        ] {
            let m = hamiltonian_matrix(&spec, 2.2).unwrap();
            for l in labelled_spectrum(&spec, 2.2).unwrap().levels {
                let hv = m.mul_vec(&l.state);
                for (x, y) in hv.iter().zip(&l.state) {
                    assert!((x - y * l.energy).norm() < 1e-12, "{:?}", l.label);
                }
                assert!((inner(&l.state, &l.state).re - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn uniform_gap_ratio_examples() {
        assert_eq!(
            check_uniform_gap_ratio(&SubstanceSpec::Qubit, 3.0, 4.0),
            Some(4.0 / 3.0)
        );
        assert_eq!(
            check_uniform_gap_ratio(&SubstanceSpec::Qutrit { j: 0.0 }, 3.0, 4.0),
            Some(4.0 / 3.0)
        );
        assert_eq!(
            check_uniform_gap_ratio(&SubstanceSpec::Qutrit { j: 1.0 }, 3.0, 4.0),
            None
        );
        assert_eq!(
            check_uniform_gap_ratio(&SubstanceSpec::Xxz { jxy: 0.0, jz: 0.0 }, 3.0, 4.0),
            Some(4.0 / 3.0)
        );
        assert_eq!(
            check_uniform_gap_ratio(&SubstanceSpec::Xxz { jxy: 0.5, jz: 0.0 }, 3.0, 4.0),
            None
        );
        assert_eq!(
            check_uniform_gap_ratio(&SubstanceSpec::Qubit, 4.0, 3.0),
            None
        );
    }

    #[test]
    fn crossing_examples() {
        assert!(detect_level_crossing(&SubstanceSpec::Qutrit { j: 2.0 }, 3.0, 4.0).is_empty());
        let c = detect_level_crossing(&SubstanceSpec::Qutrit { j: 3.5 }, 3.0, 4.0);
        assert_eq!(
            c,
            vec![LevelCrossing {
                first: LevelLabel::MinusB,
                second: LevelLabel::MinusJ,
                field: 3.5
            }]
        );
        assert!(
            detect_level_crossing(&SubstanceSpec::Xxz { jxy: 1.0, jz: 0.0 }, 3.0, 4.0).is_empty()
        );
        // negative J puts the idle level above the ground state: +B meets −J at B = −J
        let c = detect_level_crossing(&SubstanceSpec::Qutrit { j: -3.2 }, 3.0, 4.0);
        assert_eq!(c.len(), 1);
        assert_eq!(
            (c[0].first, c[0].second),
            (LevelLabel::PlusB, LevelLabel::MinusJ)
        );
        // Ising limit: both idle levels coincide at every field, not a crossing
        assert!(
            detect_level_crossing(&SubstanceSpec::Xxz { jxy: 0.0, jz: 1.0 }, 3.0, 4.0).is_empty()
        );
    }
}
