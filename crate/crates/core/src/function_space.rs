//! Complex-valued functions on the compactified real line and 2×2 matrices over them.
//!
//! Functions are closed-form evaluators with declared limits at `±∞`; nothing
//! is stored as samples. Norms and defects are taken over a [`Grid`] together
//! with the two limit values.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::scalar::{lit, tolerance, Scalar};

/// Half-width of the default sampling window.
pub const DEFAULT_HALF_WIDTH: f64 = 20.0;
/// Number of samples in the default grid.
pub const DEFAULT_SAMPLES: usize = 4001;
/// Tolerance for agreement between boundary samples and declared limits.
pub const TAIL_TOLERANCE: f64 = 1e-6;
/// Self-adjointness tolerance accepted by [`pointwise_unitary_exponential`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// A finite sampling set, strictly increasing, closed under `x ↦ −x`, containing `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<S: Scalar> {
    points: Vec<S>,
}

impl<S: Scalar> Grid<S> {
    /// `samples` equally spaced points on `[−half_width, half_width]`.
    pub fn uniform(half_width: S, samples: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > S::zero()) {
            return Err(Error::Config(format!(
                "grid half-width must be positive and finite, got {half_width}"
            )));
        }
        if samples < 3 || samples.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "grid sample count must be odd and at least 3, got {samples}"
            )));
        }
        let intervals = samples - 1;
        let denom: S = lit(intervals as f64);
        let points = (0..samples)
            .map(|k| lit::<S>(2.0 * k as f64 - intervals as f64) * half_width / denom)
            .collect();
        Ok(Grid { points })
    }

    /// Validates an explicit point set.
    pub fn from_points(points: Vec<S>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config("grid is empty".into()));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("grid contains non-finite points".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("grid is not strictly increasing".into()));
        }
        let n = points.len();
        for i in 0..n {
            if points[i] != -points[n - 1 - i] {
                return Err(Error::Config(format!(
                    "grid is not symmetric: {} has no mirror point",
                    points[i]
                )));
            }
        }
        if !points.iter().any(|x| x.is_zero()) {
            return Err(Error::Config("grid does not contain 0".into()));
        }
        Ok(Grid { points })
    }

    /// The default `4001`-point grid on `[−20, 20]`.
    pub fn standard() -> Self {
        Self::uniform(lit(DEFAULT_HALF_WIDTH), DEFAULT_SAMPLES).expect("default grid is valid")
    }

    pub fn points(&self) -> &[S] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn half_width(&self) -> S {
        *self.points.last().expect("grid is non-empty")
    }

    /// Subdivides every interval into `factor` equal pieces, keeping the
    /// grid exactly symmetric by refining the nonnegative half and mirroring it.
    pub fn refined(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let half: Vec<S> = self
            .points
            .iter()
            .copied()
            .filter(|x| *x >= S::zero())
            .collect();
        let mut fine = Vec::with_capacity(half.len() * factor);
        for w in half.windows(2) {
            for k in 0..factor {
                let frac: S = lit(k as f64 / factor as f64);
                fine.push(w[0] + (w[1] - w[0]) * frac);
            }
        }
        fine.push(*half.last().expect("grid contains 0"));
        let mut points: Vec<S> = fine.iter().skip(1).rev().map(|x| -*x).collect();
        points.extend(fine);
        Grid { points }
    }
}

type Evaluator<S> = Arc<dyn Fn(S) -> Complex<S> + Send + Sync>;

/// A complex-valued function on `ℝ ∪ {±∞}`.
///
/// Evaluating at `±∞` returns the declared limit. The function is *vanishing*
/// (an element of `C₀(ℝ)`) exactly when both declared limits are zero.
#[derive(Clone)]
pub struct RealLineFunction<S: Scalar> {
    eval: Evaluator<S>,
    limit_neg: Complex<S>,
    limit_pos: Complex<S>,
}

impl<S: Scalar> fmt::Debug for RealLineFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealLineFunction")
            .field("limit_neg", &self.limit_neg)
            .field("limit_pos", &self.limit_pos)
            .field("at_zero", &self.evaluate(S::zero()))
            .finish()
    }
}

impl<S: Scalar> RealLineFunction<S> {
    pub fn new<F>(f: F, limit_neg: Complex<S>, limit_pos: Complex<S>) -> Self
    where
        F: Fn(S) -> Complex<S> + Send + Sync + 'static,
    {
        RealLineFunction {
            eval: Arc::new(f),
            limit_neg,
            limit_pos,
        }
    }

    /// A function in `C₀(ℝ)`: both limits are zero.
    pub fn vanishing<F>(f: F) -> Self
    where
        F: Fn(S) -> Complex<S> + Send + Sync + 'static,
    {
        Self::new(f, Complex::zero(), Complex::zero())
    }

    /// Real-valued function with real limits.
    pub fn real<F>(f: F, limit_neg: S, limit_pos: S) -> Self
    where
        F: Fn(S) -> S + Send + Sync + 'static,
    {
        Self::new(
            move |x| Complex::new(f(x), S::zero()),
            Complex::new(limit_neg, S::zero()),
            Complex::new(limit_pos, S::zero()),
        )
    }

    pub fn constant(c: Complex<S>) -> Self {
        Self::new(move |_| c, c, c)
    }

    pub fn zero() -> Self {
        Self::constant(Complex::zero())
    }

    pub fn one() -> Self {
        Self::constant(Complex::one())
    }

    #[inline]
    pub fn evaluate(&self, x: S) -> Complex<S> {
        if x == S::neg_infinity() {
            self.limit_neg
        } else if x == S::infinity() {
            self.limit_pos
        } else {
            (self.eval)(x)
        }
    }

    pub fn limit_neg(&self) -> Complex<S> {
        self.limit_neg
    }

    pub fn limit_pos(&self) -> Complex<S> {
        self.limit_pos
    }

    pub fn is_vanishing(&self) -> bool {
        self.limit_neg.is_zero() && self.limit_pos.is_zero()
    }

    /// `x ↦ f(−x)`, the action of the non-trivial element of `Z₂`.
    pub fn flip(&self) -> Self {
        let eval = Arc::clone(&self.eval);
        Self::new(move |x| eval(-x), self.limit_pos, self.limit_neg)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, c: Complex<S>) -> Self {
        self.map(move |z| z * c)
    }

    /// Post-composition with a complex map, applied to the limits as well.
    pub fn map<G>(&self, g: G) -> Self
    where
        G: Fn(Complex<S>) -> Complex<S> + Send + Sync + 'static,
    {
        let (lneg, lpos) = (g(self.limit_neg), g(self.limit_pos));
        let eval = Arc::clone(&self.eval);
        Self::new(move |x| g(eval(x)), lneg, lpos)
    }

    /// Pre-composition with a change of coordinate. The caller supplies the
    /// limits of the result.
    pub fn pullback<C>(&self, coord: C, limit_neg: Complex<S>, limit_pos: Complex<S>) -> Self
    where
        C: Fn(S) -> S + Send + Sync + 'static,
    {
        let eval = Arc::clone(&self.eval);
        Self::new(move |t| eval(coord(t)), limit_neg, limit_pos)
    }

    fn zip<G>(&self, other: &Self, g: G) -> Self
    where
        G: Fn(Complex<S>, Complex<S>) -> Complex<S> + Send + Sync + 'static,
    {
        let (a, b) = (Arc::clone(&self.eval), Arc::clone(&other.eval));
        let (lneg, lpos) = (
            g(self.limit_neg, other.limit_neg),
            g(self.limit_pos, other.limit_pos),
        );
        Self::new(move |x| g(a(x), b(x)), lneg, lpos)
    }

    /// Checks that the samples at `±half_width` agree with the declared limits.
    pub fn check_tails(&self, grid: &Grid<S>, tol: S) -> Result<()> {
        let l = grid.half_width();
        let lo = (self.evaluate(-l) - self.limit_neg).norm();
        let hi = (self.evaluate(l) - self.limit_pos).norm();
        if lo < tol && hi < tol {
            Ok(())
        } else {
            Err(Error::NumericalTolerance(format!(
                "boundary samples miss declared limits by {lo:.3e} (−∞) and {hi:.3e} (+∞)"
            )))
        }
    }
}

macro_rules! pointwise_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<S: Scalar> $trait<&RealLineFunction<S>> for &RealLineFunction<S> {
            type Output = RealLineFunction<S>;
            fn $method(self, rhs: &RealLineFunction<S>) -> RealLineFunction<S> {
                self.zip(rhs, |a, b| a $op b)
            }
        }
        impl<S: Scalar> $trait for RealLineFunction<S> {
            type Output = RealLineFunction<S>;
            fn $method(self, rhs: RealLineFunction<S>) -> RealLineFunction<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

pointwise_binop!(Add, add, +);
pointwise_binop!(Sub, sub, -);
pointwise_binop!(Mul, mul, *);

impl<S: Scalar> Neg for &RealLineFunction<S> {
    type Output = RealLineFunction<S>;
    fn neg(self) -> RealLineFunction<S> {
        self.map(|z| -z)
    }
}

impl<S: Scalar> Neg for RealLineFunction<S> {
    type Output = RealLineFunction<S>;
    fn neg(self) -> RealLineFunction<S> {
        -&self
    }
}

/// `flip(f)(x) = f(−x)`.
pub fn flip<S: Scalar>(f: &RealLineFunction<S>) -> RealLineFunction<S> {
    f.flip()
}

/// Maximum of `|f|` over the grid samples and the two limits.
pub fn sup_norm<S: Scalar>(f: &RealLineFunction<S>, grid: &Grid<S>) -> S {
    grid.points()
        .iter()
        .map(|&x| f.evaluate(x).norm())
        .chain([f.limit_neg.norm(), f.limit_pos.norm()])
        .fold(S::zero(), S::max)
}

/// `sup_norm(f − g)` without building the difference.
pub fn sup_distance<S: Scalar>(
    f: &RealLineFunction<S>,
    g: &RealLineFunction<S>,
    grid: &Grid<S>,
) -> S {
    grid.points()
        .iter()
        .map(|&x| (f.evaluate(x) - g.evaluate(x)).norm())
        .chain([
            (f.limit_neg - g.limit_neg).norm(),
            (f.limit_pos - g.limit_pos).norm(),
        ])
        .fold(S::zero(), S::max)
}

/// A 2×2 matrix of [`RealLineFunction`]s.
///
/// When `unitized` is false every entry vanishes at `±∞`.
#[derive(Clone, Debug)]
pub struct FunctionMatrix<S: Scalar> {
    entries: [[RealLineFunction<S>; 2]; 2],
    unitized: bool,
}

impl<S: Scalar> FunctionMatrix<S> {
    /// The flag is derived: unitized iff some entry has a nonzero limit.
    pub fn new(entries: [[RealLineFunction<S>; 2]; 2]) -> Self {
        let unitized = !entries.iter().flatten().all(RealLineFunction::is_vanishing);
        FunctionMatrix { entries, unitized }
    }

    /// Marks the matrix as an element of the unitization regardless of its limits.
    pub fn unitized(entries: [[RealLineFunction<S>; 2]; 2]) -> Self {
        FunctionMatrix {
            entries,
            unitized: true,
        }
    }

    /// Builds a matrix from a pointwise `Mat2`-valued map.
    pub fn from_pointwise<F>(f: F, limit_neg: Mat2<S>, limit_pos: Mat2<S>) -> Self
    where
        F: Fn(S) -> Mat2<S> + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let entry = |i: usize, j: usize| {
            let f = Arc::clone(&f);
            RealLineFunction::new(
                move |x| f(x).get(i, j),
                limit_neg.get(i, j),
                limit_pos.get(i, j),
            )
        };
        Self::new([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }

    pub fn constant(m: Mat2<S>) -> Self {
        Self::from_pointwise(move |_| m, m, m)
    }

    pub fn identity() -> Self {
        Self::constant(Mat2::identity())
    }

    pub fn diag(a: RealLineFunction<S>, d: RealLineFunction<S>) -> Self {
        Self::new([[a, RealLineFunction::zero()], [RealLineFunction::zero(), d]])
    }

    pub fn entry(&self, i: usize, j: usize) -> &RealLineFunction<S> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[RealLineFunction<S>; 2]; 2] {
        &self.entries
    }

    pub fn is_unitized(&self) -> bool {
        self.unitized
    }

    pub fn evaluate(&self, x: S) -> Mat2<S> {
        let e = &self.entries;
        Mat2::new(
            e[0][0].evaluate(x),
            e[0][1].evaluate(x),
            e[1][0].evaluate(x),
            e[1][1].evaluate(x),
        )
    }

    pub fn limit_neg(&self) -> Mat2<S> {
        self.evaluate(S::neg_infinity())
    }

    pub fn limit_pos(&self) -> Mat2<S> {
        self.evaluate(S::infinity())
    }

    fn sample_points(grid: &Grid<S>) -> impl Iterator<Item = S> + '_ {
        grid.points()
            .iter()
            .copied()
            .chain([S::neg_infinity(), S::infinity()])
    }

    /// Largest value of `measure(M(x))` over the grid and both limits.
    pub fn sup_over<M: Fn(Mat2<S>) -> S>(&self, grid: &Grid<S>, measure: M) -> S {
        Self::sample_points(grid)
            .map(|x| measure(self.evaluate(x)))
            .fold(S::zero(), S::max)
    }

    /// Sup over the grid of the pointwise operator norm.
    pub fn sup_norm(&self, grid: &Grid<S>) -> S {
        self.sup_over(grid, |m| m.op_norm())
    }

    pub fn sup_distance(&self, other: &Self, grid: &Grid<S>) -> S {
        Self::sample_points(grid)
            .map(|x| (self.evaluate(x) - other.evaluate(x)).op_norm())
            .fold(S::zero(), S::max)
    }

    pub fn unitarity_defect(&self, grid: &Grid<S>) -> S {
        self.sup_over(grid, |m| m.unitarity_defect())
    }

    pub fn hermitian_defect(&self, grid: &Grid<S>) -> S {
        self.sup_over(grid, |m| m.hermitian_defect())
    }

    pub fn projection_defect(&self, grid: &Grid<S>) -> S {
        self.sup_over(grid, |m| m.projection_defect())
    }

    /// Pointwise determinant.
    pub fn determinant(&self) -> RealLineFunction<S> {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let mut m = Self::new([
            [&a[0][0] + &b[0][0], &a[0][1] + &b[0][1]],
            [&a[1][0] + &b[1][0], &a[1][1] + &b[1][1]],
        ]);
        m.unitized |= self.unitized || other.unitized;
        m
    }

    pub fn scale(&self, c: Complex<S>) -> Self {
        let a = &self.entries;
        let mut m = Self::new([
            [a[0][0].scale(c), a[0][1].scale(c)],
            [a[1][0].scale(c), a[1][1].scale(c)],
        ]);
        m.unitized |= self.unitized;
        m
    }

    /// Conjugation `V·M·V*` by a constant unitary.
    pub fn conjugate_by(&self, v: Mat2<S>) -> Self {
        let left = FunctionMatrix::constant(v);
        let right = FunctionMatrix::constant(v.adjoint());
        matrix_product(&matrix_product(&left, self), &right)
    }
}

/// Pointwise product of 2×2 function matrices.
pub fn matrix_product<S: Scalar>(
    a: &FunctionMatrix<S>,
    b: &FunctionMatrix<S>,
) -> FunctionMatrix<S> {
    let (x, y) = (&a.entries, &b.entries);
    let entry = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
    let mut m = FunctionMatrix::new([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]);
    m.unitized |= a.unitized || b.unitized;
    m
}

/// Pointwise conjugate transpose.
pub fn matrix_adjoint<S: Scalar>(a: &FunctionMatrix<S>) -> FunctionMatrix<S> {
    let e = &a.entries;
    let mut m = FunctionMatrix::new([
        [e[0][0].conj(), e[1][0].conj()],
        [e[0][1].conj(), e[1][1].conj()],
    ]);
    m.unitized = a.unitized;
    m
}

/// `x ↦ exp(2πi·H(x))` by direct 2×2 spectral exponentiation at each point.
///
/// `H` must be pointwise self-adjoint to within [`HERMITIAN_TOLERANCE`] on
/// the grid and at both limits.
pub fn pointwise_unitary_exponential<S: Scalar>(
    h: &FunctionMatrix<S>,
    grid: &Grid<S>,
) -> Result<FunctionMatrix<S>> {
    let defect = h.hermitian_defect(grid);
    if !(defect < tolerance(HERMITIAN_TOLERANCE)) {
        return Err(Error::Precondition(format!(
            "exponent is not self-adjoint: ‖H − H*‖ = {defect:.3e}"
        )));
    }
    let h = h.clone();
    let (lneg, lpos) = (
        h.limit_neg().hermitian_unitary_exp(),
        h.limit_pos().hermitian_unitary_exp(),
    );
    Ok(FunctionMatrix::from_pointwise(
        move |x| h.evaluate(x).hermitian_unitary_exp(),
        lneg,
        lpos,
    ))
}
