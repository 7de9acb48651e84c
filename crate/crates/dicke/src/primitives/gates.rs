//! Exact small-gate emitters shared by the primitives.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::scalar::Scalar;

pub type M2 = [[Complex64; 2]; 2];

pub fn mul(a: &M2, b: &M2) -> M2 {
    let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

pub fn rz(t: f64) -> M2 {
    let z = Complex64::new(0.0, 0.0);
    [[Complex64::from_polar(1.0, -t / 2.0), z], [z, Complex64::from_polar(1.0, t / 2.0)]]
}

pub fn ry(t: f64) -> M2 {
    let (s, c) = (t / 2.0).sin_cos();
    [[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]]
}

/// `(θ, φ, λ, γ)` with `m = e^{iγ} U(θ, φ, λ)`.
pub fn params(m: &M2) -> (f64, f64, f64, f64) {
    let theta = 2.0 * m[1][0].norm().atan2(m[0][0].norm());
    if m[0][0].norm() > 1e-12 {
        let gamma = m[0][0].arg();
        if m[1][0].norm() > 1e-12 {
            (theta, m[1][0].arg() - gamma, (-m[0][1]).arg() - gamma, gamma)
        } else {
            (theta, 0.0, m[1][1].arg() - gamma, gamma)
        }
    } else {
        let gamma = (-m[0][1]).arg();
        (theta, m[1][0].arg() - gamma, 0.0, gamma)
    }
}

/// ZYZ angles `(α, β, δ)` of an SU(2) matrix `m = Rz(α) Ry(β) Rz(δ)`.
fn zyz(m: &M2) -> (f64, f64, f64) {
    let beta = 2.0 * m[1][0].norm().atan2(m[0][0].norm());
    let sum = if m[0][0].norm() > 1e-12 { -2.0 * m[0][0].arg() } else { 0.0 };
    let diff = if m[1][0].norm() > 1e-12 { 2.0 * m[1][0].arg() } else { 0.0 };
    ((sum + diff) / 2.0, beta, (sum - diff) / 2.0)
}

/// `(A, B, C)` with `ABC = I` and `A X B X C = m` for `m ∈ SU(2)`.
pub fn abc(m: &M2) -> (M2, M2, M2) {
    let (alpha, beta, delta) = zyz(m);
    let a = mul(&rz(alpha), &ry(beta / 2.0));
    let b = mul(&ry(-beta / 2.0), &rz(-(delta + alpha) / 2.0));
    let c = rz((delta - alpha) / 2.0);
    (a, b, c)
}

pub fn emit_matrix<T: Scalar>(c: &mut Circuit<T>, q: usize, m: &M2) {
    let (t, p, l, g) = params(m);
    c.u(q, t, p, l, g);
}

/// Controlled `e^{iγ} U(θ, φ, λ)`.
pub fn emit_cu<T: Scalar>(c: &mut Circuit<T>, ctrl: usize, tgt: usize, m: &M2) {
    let (theta, phi, lambda, gamma) = params(m);
    c.phase(ctrl, gamma + (lambda + phi) / 2.0);
    c.phase(tgt, (lambda - phi) / 2.0);
    c.cx(ctrl, tgt);
    c.u(tgt, -theta / 2.0, 0.0, -(phi + lambda) / 2.0, 0.0);
    c.cx(ctrl, tgt);
    c.u(tgt, theta / 2.0, phi, 0.0, 0.0);
}

pub fn t_gate<T: Scalar>(c: &mut Circuit<T>, q: usize, dagger: bool) {
    c.phase(q, if dagger { -PI / 4.0 } else { PI / 4.0 });
}

/// Exact Toffoli with six CNOTs.
pub fn emit_ccx<T: Scalar>(c: &mut Circuit<T>, a: usize, b: usize, t: usize) {
    c.h(t);
    c.cx(b, t);
    t_gate(c, t, true);
    c.cx(a, t);
    t_gate(c, t, false);
    c.cx(b, t);
    t_gate(c, t, true);
    c.cx(a, t);
    t_gate(c, b, false);
    t_gate(c, t, false);
    c.h(t);
    c.cx(a, b);
    t_gate(c, a, false);
    t_gate(c, b, true);
    c.cx(a, b);
}
