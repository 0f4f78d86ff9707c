//! 2×2 coupled-mode Hamiltonians and basis transforms.
//!
//! All operators act on the modal amplitudes `(a₁, a₂)` through
//! `i da/dz = H(z) a` and carry units of mm⁻¹.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{CouplerError, Result};
use crate::profiles::{effective_quantities, AllenEberlyScheme, CounterdiabaticSpec};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Tolerance on `|U U† − I|` accepted as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Dense complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[Complex64; 2]; 2]);

impl Matrix2 {
    pub const ZERO: Matrix2 = Matrix2([[Complex64 { re: 0.0, im: 0.0 }; 2]; 2]);
    pub const IDENTITY: Matrix2 = Matrix2([
        [Complex64 { re: 1.0, im: 0.0 }, Complex64 { re: 0.0, im: 0.0 }],
        [Complex64 { re: 0.0, im: 0.0 }, Complex64 { re: 1.0, im: 0.0 }],
    ]);

    pub fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Matrix2([[m11, m12], [m21, m22]])
    }

    pub fn from_real(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Self::new(real(m11), real(m12), real(m21), real(m22))
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let m = &self.0;
        Self::new(m[0][0] * factor, m[0][1] * factor, m[1][0] * factor, m[1][1] * factor)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Matrix2) -> Self {
        *self * *other - *other * *self
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        Matrix2::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + (-rhs)
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self.scale(real(-1.0))
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.0, &rhs.0);
        Matrix2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// A Hermitian 2×2 operator `[[h11, h12], [conj(h12), h22]]` with real diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2 {
    h11: f64,
    h12: Complex64,
    h22: f64,
}

impl HermitianMatrix2 {
    pub fn new(h11: f64, h12: Complex64, h22: f64) -> Self {
        Self { h11, h12, h22 }
    }

    /// Accepts a general matrix if it is Hermitian within `tolerance`.
    pub fn try_from_matrix(m: &Matrix2, tolerance: f64) -> Option<Self> {
        let deviation = (*m - m.adjoint()).max_abs();
        (deviation <= tolerance).then(|| {
            Self::new(
                m.get(0, 0).re,
                (m.get(0, 1) + m.get(1, 0).conj()) / 2.0,
                m.get(1, 1).re,
            )
        })
    }

    pub fn zero() -> Self {
        Self::new(0.0, Complex64::new(0.0, 0.0), 0.0)
    }

    pub fn h11(&self) -> f64 {
        self.h11
    }

    pub fn h12(&self) -> Complex64 {
        self.h12
    }

    pub fn h21(&self) -> Complex64 {
        self.h12.conj()
    }

    pub fn h22(&self) -> f64 {
        self.h22
    }

    pub fn trace(&self) -> f64 {
        self.h11 + self.h22
    }

    pub fn matrix(&self) -> Matrix2 {
        Matrix2::new(real(self.h11), self.h12, self.h21(), real(self.h22))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = (self.h11 + self.h22) / 2.0;
        let half_gap = ((self.h11 - self.h22) / 2.0).hypot(self.h12.norm());
        [mean - half_gap, mean + half_gap]
    }

    /// `−i H v`, the right-hand side of the amplitude equation.
    pub(crate) fn velocity(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let [w1, w2] = self.matrix().apply(v);
        [-I * w1, -I * w2]
    }
}

impl Add for HermitianMatrix2 {
    type Output = HermitianMatrix2;
    fn add(self, rhs: HermitianMatrix2) -> HermitianMatrix2 {
        Self::new(self.h11 + rhs.h11, self.h12 + rhs.h12, self.h22 + rhs.h22)
    }
}

/// A unitary 2×2 change of basis, optionally with its z-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisTransform2 {
    unitary: Matrix2,
    derivative: Matrix2,
}

impl BasisTransform2 {
    pub fn new(unitary: Matrix2, derivative: Option<Matrix2>) -> Result<Self> {
        let deviation = (unitary * unitary.adjoint() - Matrix2::IDENTITY).max_abs();
        if deviation.is_nan() || deviation > UNITARY_TOLERANCE {
            return Err(CouplerError::NonUnitary { deviation });
        }
        Ok(Self {
            unitary,
            derivative: derivative.unwrap_or(Matrix2::ZERO),
        })
    }

    pub fn unitary(&self) -> &Matrix2 {
        &self.unitary
    }

    pub fn derivative(&self) -> &Matrix2 {
        &self.derivative
    }

    pub fn with_derivative(mut self, derivative: Matrix2) -> Self {
        self.derivative = derivative;
        self
    }
}

/// Diabatic operator `[[Δ, κ], [κ, −Δ]]`.
pub fn diabatic_hamiltonian(delta: f64, kappa: f64) -> HermitianMatrix2 {
    HermitianMatrix2::new(delta, real(kappa), -delta)
}

/// Counterdiabatic operator `[[0, −iθ̇/2], [iθ̇/2, 0]]`.
pub fn cd_hamiltonian(theta_dot: f64) -> HermitianMatrix2 {
    HermitianMatrix2::new(0.0, Complex64::new(0.0, -theta_dot / 2.0), 0.0)
}

/// `[[Δ, κ − iκ_a], [κ + iκ_a, −Δ]]` at z.
pub fn effective_hamiltonian(
    scheme: &AllenEberlyScheme,
    spec: &CounterdiabaticSpec,
    z: f64,
) -> Result<HermitianMatrix2> {
    let kappa_a = spec.coupling_at(scheme, z)?;
    Ok(HermitianMatrix2::new(
        scheme.mismatch_at(z),
        Complex64::new(scheme.coupling_at(z), -kappa_a),
        -scheme.mismatch_at(z),
    ))
}

/// Real symmetric form `[[Δ_eff, κ_eff], [κ_eff, −Δ_eff]]` obtained after
/// removing the coupling phase with `diag(e^{−iφ/2}, e^{iφ/2})`.
pub fn phase_rotated_hamiltonian(
    scheme: &AllenEberlyScheme,
    spec: &CounterdiabaticSpec,
    z: f64,
) -> Result<HermitianMatrix2> {
    let eff = effective_quantities(scheme, spec, z)?;
    Ok(diabatic_hamiltonian(eff.delta_eff, eff.kappa_eff))
}

/// Phase-removal transform `diag(e^{−iφ/2}, e^{iφ/2})` with derivative from φ̇.
pub fn phase_transform(phi: f64, phi_dot: f64) -> BasisTransform2 {
    let d1 = Complex64::from_polar(1.0, -phi / 2.0);
    let d2 = Complex64::from_polar(1.0, phi / 2.0);
    let zero = real(0.0);
    BasisTransform2 {
        unitary: Matrix2::new(d1, zero, zero, d2),
        derivative: Matrix2::new(-I * phi_dot / 2.0 * d1, zero, zero, I * phi_dot / 2.0 * d2),
    }
}

/// Rotation `[[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]` into the adiabatic basis.
pub fn mixing_transform(theta: f64) -> BasisTransform2 {
    let (s, c) = (theta / 2.0).sin_cos();
    BasisTransform2 {
        unitary: Matrix2::from_real(c, -s, s, c),
        derivative: Matrix2::ZERO,
    }
}

/// Mixing transform along a path, with `U̇₀ = (θ̇/2)·dU₀/d(θ/2)`.
pub fn mixing_transform_along(theta: f64, theta_dot: f64) -> BasisTransform2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let half = theta_dot / 2.0;
    mixing_transform(theta).with_derivative(Matrix2::from_real(-s * half, -c * half, c * half, -s * half))
}

/// `H' = U⁻¹ H U − i U⁻¹ U̇`.
pub fn transform_hamiltonian(h: &HermitianMatrix2, u: &BasisTransform2) -> Result<HermitianMatrix2> {
    let unitary = *u.unitary();
    let deviation = (unitary * unitary.adjoint() - Matrix2::IDENTITY).max_abs();
    if deviation.is_nan() || deviation > UNITARY_TOLERANCE {
        return Err(CouplerError::NonUnitary { deviation });
    }
    let inverse = unitary.adjoint();
    let transformed = inverse * h.matrix() * unitary - (inverse * *u.derivative()).scale(I);
    // A derivative inconsistent with a unitary path leaves an anti-Hermitian part.
    let scale = 1.0 + transformed.max_abs();
    HermitianMatrix2::try_from_matrix(&transformed, 1e-10 * scale).ok_or(CouplerError::NonUnitary {
        deviation: (transformed - transformed.adjoint()).max_abs(),
    })
}
