//! Single-qubit gate matrices.

use num_complex::Complex64;

use crate::pauli::Pauli;
#[allow(unused_imports)]
use num_traits::Float;

pub type Mat2 = [[Complex64; 2]; 2];
pub type Mat4 = [[Complex64; 4]; 4];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `exp(−iθZ/2)`.
pub fn rz(theta: f64) -> Mat2 {
    let (s, co) = (0.5 * theta).sin_cos();
    [[c(co, -s), c(0.0, 0.0)], [c(0.0, 0.0), c(co, s)]]
}

/// `exp(−iθX/2)`.
pub fn rx(theta: f64) -> Mat2 {
    let (s, co) = (0.5 * theta).sin_cos();
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

/// `exp(−iθY/2)`.
pub fn ry(theta: f64) -> Mat2 {
    let (s, co) = (0.5 * theta).sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `Z_θ1 X_θ2 Z_θ3`; `θ3` acts first.
pub fn euler(theta1: f64, theta2: f64, theta3: f64) -> Mat2 {
    mul2(&rz(theta1), &mul2(&rx(theta2), &rz(theta3)))
}

/// Post-rotation that maps the `+1` eigenstate of `basis` to `|0⟩`.
pub fn measurement_rotation(basis: Pauli) -> Option<Mat2> {
    match basis {
        Pauli::X => Some(ry(-core::f64::consts::FRAC_PI_2)),
        Pauli::Y => Some(rx(core::f64::consts::FRAC_PI_2)),
        Pauli::Z | Pauli::I => None,
    }
}

/// `a ⊗ b` with `a` on the more significant index.
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[i / 2][j / 2] * b[i % 2][j % 2];
        }
    }
    out
}
