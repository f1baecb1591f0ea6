//! Parametrized projective measurements: a four-angle family of orthonormal
//! qutrit bases and local spin measurements on two qubits.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};
use crate::tolerance::TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su3Angles {
    pub theta: f64,
    pub phi: f64,
    pub chi: f64,
    pub psi: f64,
}

impl Su3Angles {
    pub fn new(theta: f64, phi: f64, chi: f64, psi: f64) -> Result<Self> {
        let a = Self {
            theta,
            phi,
            chi,
            psi,
        };
        if [theta, phi, chi, psi].iter().all(|x| x.is_finite()) {
            Ok(a)
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Angles given as multiples of π.
    pub fn from_pi_units(theta: f64, phi: f64, chi: f64, psi: f64) -> Result<Self> {
        use std::f64::consts::PI;
        Self::new(theta * PI, phi * PI, chi * PI, psi * PI)
    }

    /// Angles reduced to [0, 2π), for reporting.
    pub fn reduced(&self) -> [f64; 4] {
        [self.theta, self.phi, self.chi, self.psi].map(|x| x.rem_euclid(TAU))
    }

    /// The three measurement states, in the computational basis |0⟩, |1⟩, |2⟩.
    pub fn states(&self) -> [Vec<C64>; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        let e_chi = C64::from_polar(1.0, self.chi);
        let e_psi = C64::from_polar(1.0, self.psi);
        let re = |x: f64| C64::new(x, 0.0);
        [
            vec![e_chi * (ct * sp), e_psi * (st * sp), re(cp)],
            vec![e_chi * (ct * cp), e_psi * (st * cp), re(-sp)],
            vec![e_chi * st, -e_psi * ct, ZERO],
        ]
    }
}

/// Non-selective measurement with rank-1 projectors onto [`Su3Angles::states`].
pub fn su3_projective_channel(a: &Su3Angles) -> Result<KrausChannel> {
    KrausChannel::projective(&a.states())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDirection([f64; 3]);

impl SpinDirection {
    pub const X: SpinDirection = SpinDirection([1.0, 0.0, 0.0]);
    pub const Y: SpinDirection = SpinDirection([0.0, 1.0, 0.0]);
    pub const Z: SpinDirection = SpinDirection([0.0, 0.0, 1.0]);

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > TOL.unit_vector {
            return Err(Error::NonUnitVector(norm));
        }
        Ok(Self([x, y, z]))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    /// (1 ± n·σ)/2
    pub fn projectors(&self) -> [ComplexMatrix; 2] {
        let [x, y, z] = self.0;
        let half = 0.5;
        let off = C64::new(x, -y) * half;
        let plus = ComplexMatrix::from_row_major(
            2,
            vec![
                C64::new(half * (1.0 + z), 0.0),
                off,
                off.conj(),
                C64::new(half * (1.0 - z), 0.0),
            ],
        )
        .expect("finite 2x2");
        let minus = &ComplexMatrix::identity(2) - &plus;
        [plus, minus]
    }
}

/// Product measurement of σ·n on the first spin and σ·m on the second.
pub fn local_spin_channel(n: &SpinDirection, m: &SpinDirection) -> Result<KrausChannel> {
    let mut ops = Vec::with_capacity(4);
    for pn in n.projectors() {
        for pm in m.projectors() {
            ops.push(pn.kron(&pm));
        }
    }
    KrausChannel::new(ops)
}

/// Named angle sets used in the efficiency comparisons.
pub fn named_angle_set(name: &str) -> Option<Su3Angles> {
    let set = match name {
        "eta1" => (0.7, 0.7, 0.5, 0.5),
        "eta2" => (0.7, 0.7, 0.7, 0.5),
        "eta3" => (0.3, 0.3, 0.3, 0.3),
        "extreme" => (0.75, 0.75, 0.5, 0.5),
        _ => return None,
    };
    Su3Angles::from_pi_units(set.0, set.1, set.2, set.3).ok()
}
