//! Dense complex 2×2 matrices: the pointwise values of every matrix-valued function.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{lit, real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<S: Scalar>(pub [[Complex<S>; 2]; 2]);

impl<S: Scalar> Mat2<S> {
    pub fn new(a: Complex<S>, b: Complex<S>, c: Complex<S>, d: Complex<S>) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_real(a: S, b: S, c: S, d: S) -> Self {
        Self::new(real(a), real(b), real(c), real(d))
    }

    pub fn zero() -> Self {
        Self::new(
            Complex::zero(),
            Complex::zero(),
            Complex::zero(),
            Complex::zero(),
        )
    }

    pub fn identity() -> Self {
        Self::diag(Complex::one(), Complex::one())
    }

    pub fn diag(a: Complex<S>, d: Complex<S>) -> Self {
        Self::new(a, Complex::zero(), Complex::zero(), d)
    }

    pub fn scalar(c: Complex<S>) -> Self {
        Self::diag(c, c)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<S> {
        self.0[i][j]
    }

    pub fn scale(&self, c: Complex<S>) -> Self {
        let m = &self.0;
        Self::new(m[0][0] * c, m[0][1] * c, m[1][0] * c, m[1][1] * c)
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn det(&self) -> Complex<S> {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex<S> {
        self.0[0][0] + self.0[1][1]
    }

    /// Operator (spectral) norm, i.e. the largest singular value.
    pub fn op_norm(&self) -> S {
        let g = self.adjoint() * *self;
        let a = g.0[0][0].re;
        let d = g.0[1][1].re;
        let b = g.0[0][1].norm();
        let half_gap = ((a - d) * (a - d) / lit(4.0) + b * b).sqrt();
        let top = (a + d) / lit(2.0) + half_gap;
        top.max(S::zero()).sqrt()
    }

    /// `‖M − M*‖`.
    pub fn hermitian_defect(&self) -> S {
        (*self - self.adjoint()).op_norm()
    }

    /// `‖M*M − I‖`.
    pub fn unitarity_defect(&self) -> S {
        (self.adjoint() * *self - Self::identity()).op_norm()
    }

    /// `max(‖P² − P‖, ‖P − P*‖)`.
    pub fn projection_defect(&self) -> S {
        let idem = (*self * *self - *self).op_norm();
        idem.max(self.hermitian_defect())
    }

    /// `exp(2πi·H)` for Hermitian `H`, by splitting off the trace and using
    /// `K² = r²·I` for the traceless part `K`.
    pub fn hermitian_unitary_exp(&self) -> Self {
        let m = &self.0;
        let tau = S::TAU();
        let mean = (m[0][0].re + m[1][1].re) / lit(2.0);
        let half_diff = (m[0][0].re - m[1][1].re) / lit(2.0);
        let off = m[0][1];
        let r = (half_diff * half_diff + off.norm_sqr()).sqrt();
        let angle = tau * r;
        // sin(2πr)/r, continued through r = 0
        let sinc = if r < lit(1e-8) {
            tau * (S::one() - angle * angle / lit(6.0))
        } else {
            angle.sin() / r
        };
        let traceless = Self::new(real(half_diff), off, off.conj(), real(-half_diff));
        let i_sinc = Complex::new(S::zero(), sinc);
        let core = Self::scalar(real(angle.cos())) + traceless.scale(i_sinc);
        let phase = Complex::new(S::zero(), tau * mean).exp();
        core.scale(phase)
    }
}

impl<S: Scalar> Add for Mat2<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl<S: Scalar> Sub for Mat2<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Scalar> Neg for Mat2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        let a = &self.0;
        Self::new(-a[0][0], -a[0][1], -a[1][0], -a[1][1])
    }
}

impl<S: Scalar> Mul for Mat2<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}
