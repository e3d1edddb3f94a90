//! Traces on the crossed product and their pairings with lifted projections.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::crossed_product::{ev0, CrossedProductElement, GroupAlgebraElement};
use crate::error::{Error, Result};
use crate::function_space::{Grid, TAIL_TOLERANCE};
use crate::scalar::{lit, real, tolerance, Scalar};

/// Pointwise symmetry required of an invariant density.
pub const INVARIANCE_TOLERANCE: f64 = 1e-10;
/// Bound on `‖ρ(e) − I‖` and `‖ρ(ε)² − I‖`.
pub const REPRESENTATION_TOLERANCE: f64 = 1e-12;
/// Idempotency required of `ev₀` of each argument of a pairing.
pub const IDEMPOTENT_TOLERANCE: f64 = 1e-10;

type Density<S> = Arc<dyn Fn(S) -> S + Send + Sync>;

/// A measure on the transversal `ℝ`, given by a density and integrated by
/// the trapezoid rule on a fixed grid whose half-width is the cutoff.
#[derive(Clone)]
pub struct TransverseMeasure<S: Scalar> {
    density: Density<S>,
    grid: Grid<S>,
}

impl<S: Scalar> TransverseMeasure<S> {
    pub fn new<F>(density: F, grid: Grid<S>) -> Result<Self>
    where
        F: Fn(S) -> S + Send + Sync + 'static,
    {
        if grid.len() < 2 {
            return Err(Error::Config(
                "quadrature grid needs at least two points".into(),
            ));
        }
        if let Some(x) = grid.points().iter().find(|&&x| !(density(x) >= S::zero())) {
            return Err(Error::Config(format!(
                "density is negative or undefined at {x}"
            )));
        }
        Ok(TransverseMeasure {
            density: Arc::new(density),
            grid,
        })
    }

    pub fn lebesgue(grid: Grid<S>) -> Self {
        TransverseMeasure {
            density: Arc::new(|_| S::one()),
            grid,
        }
    }

    pub fn density(&self, x: S) -> S {
        (self.density)(x)
    }

    pub fn support_halfwidth(&self) -> S {
        self.grid.half_width()
    }

    pub fn grid(&self) -> &Grid<S> {
        &self.grid
    }

    /// Same density integrated on another grid.
    pub fn on_grid(&self, grid: Grid<S>) -> Self {
        TransverseMeasure {
            density: Arc::clone(&self.density),
            grid,
        }
    }

    /// `∫ f dμ` over the cutoff interval.
    pub fn integrate<F: Fn(S) -> Complex<S>>(&self, f: F) -> Complex<S> {
        let pts = self.grid.points();
        let two: S = lit(2.0);
        let mut acc = Complex::zero();
        let mut prev = (pts[0], f(pts[0]) * self.density(pts[0]));
        for &x in &pts[1..] {
            let cur = (x, f(x) * self.density(x));
            acc = acc + (prev.1 + cur.1) * (cur.0 - prev.0) / two;
            prev = cur;
        }
        acc
    }
}

impl<S: Scalar> fmt::Debug for TransverseMeasure<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransverseMeasure")
            .field("support_halfwidth", &self.support_halfwidth())
            .field("samples", &self.grid.len())
            .finish()
    }
}

/// `μ∘φ = μ`, checked as `|ρ(x) − ρ(−x)| < 1e-10` on the grid.
pub fn is_invariant<S: Scalar>(mu: &TransverseMeasure<S>, grid: &Grid<S>) -> bool {
    let tol: S = tolerance(INVARIANCE_TOLERANCE);
    grid.points()
        .iter()
        .all(|&x| (mu.density(x) - mu.density(-x)).abs() < tol)
}

/// A finite-dimensional representation of `C ⋊ Z₂`, stored as the images
/// of the group elements (row-major square matrices).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupRepresentation<S: Scalar> {
    dim: usize,
    image_e: Vec<Complex<S>>,
    image_eps: Vec<Complex<S>>,
}

impl<S: Scalar> GroupRepresentation<S> {
    pub fn new(dim: usize, image_e: Vec<Complex<S>>, image_eps: Vec<Complex<S>>) -> Result<Self> {
        if dim == 0 || image_e.len() != dim * dim || image_eps.len() != dim * dim {
            return Err(Error::Config(format!(
                "a {dim}-dimensional representation needs {dim}×{dim} images"
            )));
        }
        let tol: S = tolerance(REPRESENTATION_TOLERANCE);
        let id = identity(dim);
        if max_diff(&image_e, &id) > tol {
            return Err(Error::Config(
                "the identity element must act as the identity matrix".into(),
            ));
        }
        let square = mat_mul(dim, &image_eps, &image_eps);
        let defect = max_diff(&square, &id);
        if defect > tol {
            return Err(Error::Config(format!(
                "ρ(ε)² differs from the identity by {defect:.3e}"
            )));
        }
        Ok(GroupRepresentation {
            dim,
            image_e,
            image_eps,
        })
    }

    /// One-dimensional `e ↦ 1`, `ε ↦ sign`.
    pub fn character(sign: S) -> Result<Self> {
        Self::new(1, vec![Complex::one()], vec![real(sign)])
    }

    /// The sign character `e ↦ 1`, `ε ↦ −1`.
    pub fn sign() -> Self {
        Self::character(-S::one()).expect("sign character is a representation")
    }

    /// The regular representation on `C[Z₂]`.
    pub fn regular() -> Self {
        let (o, l) = (Complex::zero(), Complex::one());
        Self::new(2, identity(2), vec![o, l, l, o]).expect("regular representation")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image_e(&self) -> &[Complex<S>] {
        &self.image_e
    }

    pub fn image_eps(&self) -> &[Complex<S>] {
        &self.image_eps
    }

    /// `ρ(a) = a_e·ρ(e) + a_ε·ρ(ε)`.
    pub fn matrix_of(&self, a: &GroupAlgebraElement<S>) -> Vec<Complex<S>> {
        self.image_e
            .iter()
            .zip(&self.image_eps)
            .map(|(&e, &s)| a.c_e * e + a.c_eps * s)
            .collect()
    }

    pub fn trace_of(&self, a: &GroupAlgebraElement<S>) -> Complex<S> {
        trace(self.dim, &self.matrix_of(a))
    }

    /// `Tr ρ(a)ρ(b)`, through matrix multiplication.
    pub fn trace_of_product(
        &self,
        a: &GroupAlgebraElement<S>,
        b: &GroupAlgebraElement<S>,
    ) -> Complex<S> {
        trace(
            self.dim,
            &mat_mul(self.dim, &self.matrix_of(a), &self.matrix_of(b)),
        )
    }
}

fn identity<S: Scalar>(n: usize) -> Vec<Complex<S>> {
    (0..n * n)
        .map(|k| {
            if k / n == k % n {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
        .collect()
}

fn mat_mul<S: Scalar>(n: usize, a: &[Complex<S>], b: &[Complex<S>]) -> Vec<Complex<S>> {
    let mut out = vec![Complex::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i * n + j] = out[i * n + j] + a[i * n + k] * b[k * n + j];
            }
        }
    }
    out
}

fn trace<S: Scalar>(n: usize, a: &[Complex<S>]) -> Complex<S> {
    (0..n).fold(Complex::zero(), |acc, i| acc + a[i * n + i])
}

fn max_diff<S: Scalar>(a: &[Complex<S>], b: &[Complex<S>]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |m, (x, y)| m.max((*x - *y).norm()))
}

/// `τ_μ(F) = ∫ F(e) dμ` or `τ_ρ = Tr∘ρ∘ev₀`.
#[derive(Debug, Clone)]
pub enum TraceFunctional<S: Scalar> {
    Measure(TransverseMeasure<S>),
    Representation(GroupRepresentation<S>),
}

impl<S: Scalar> TraceFunctional<S> {
    /// `τ_ρ` for the sign character.
    pub fn rho() -> Self {
        TraceFunctional::Representation(GroupRepresentation::sign())
    }

    pub fn lebesgue(grid: Grid<S>) -> Self {
        TraceFunctional::Measure(TransverseMeasure::lebesgue(grid))
    }
}

pub fn apply_trace<S: Scalar>(
    tau: &TraceFunctional<S>,
    f: &CrossedProductElement<S>,
) -> Result<Complex<S>> {
    match tau {
        TraceFunctional::Representation(rho) => Ok(rho.trace_of(&ev0(f))),
        TraceFunctional::Measure(mu) => {
            if !f.unit_scalar().is_zero() {
                return Err(Error::Integrability(format!(
                    "unit part {} has no finite measure trace",
                    f.unit_scalar()
                )));
            }
            let tail: S = tolerance(TAIL_TOLERANCE);
            let l = mu.support_halfwidth();
            for x in [-l, l] {
                let v = f.comp_e().evaluate(x).norm() * mu.density(x);
                if !(v <= tail) {
                    return Err(Error::Integrability(format!(
                        "integrand is {v:.3e} at the cutoff {x}; the quadrature does not converge"
                    )));
                }
            }
            Ok(mu.integrate(|x| f.comp_e().evaluate(x)))
        }
    }
}

/// `τ(a) − τ(b)` for lifts `a`, `b` of projections, evaluated as `τ(a − b)`.
pub fn pair_difference<S: Scalar>(
    tau: &TraceFunctional<S>,
    a: &CrossedProductElement<S>,
    b: &CrossedProductElement<S>,
) -> Result<Complex<S>> {
    let tol: S = tolerance(IDEMPOTENT_TOLERANCE);
    for (name, x) in [("first", a), ("second", b)] {
        let p = ev0(x);
        let defect = crate::crossed_product::group_algebra_product(&p, &p).distance(&p);
        if !(defect < tol) {
            return Err(Error::Precondition(format!(
                "ev₀ of the {name} argument is not idempotent (defect {defect:.3e})"
            )));
        }
    }
    apply_trace(tau, &a.sub(b))
}

/// Pairing of diagonal matrices of lifts, `Σᵢ (τ(aᵢ) − τ(bᵢ))`.
pub fn pair_difference_diagonal<S: Scalar>(
    tau: &TraceFunctional<S>,
    a: &[CrossedProductElement<S>],
    b: &[CrossedProductElement<S>],
) -> Result<Complex<S>> {
    if a.len() != b.len() {
        return Err(Error::Config(format!(
            "block sizes differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    a.iter().zip(b).try_fold(Complex::zero(), |acc, (x, y)| {
        Ok(acc + pair_difference(tau, x, y)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed_product::{convolve, group_algebra_product};
    use crate::function_space::RealLineFunction;
    use crate::ktheory::{lift_projection, minimal_projections, LiftProfile};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Grid<f64> {
        Grid::standard()
    }

    fn lifts() -> (CrossedProductElement<f64>, CrossedProductElement<f64>) {
        let (pp, pm) = minimal_projections();
        let profile = LiftProfile::logistic();
        (
            lift_projection(&pp, &profile).unwrap(),
            lift_projection(&pm, &profile).unwrap(),
        )
    }

    fn bump(rng: &mut ChaCha8Rng) -> RealLineFunction<f64> {
        let mut f = RealLineFunction::zero();
        for _ in 0..2 {
            let a = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let s: f64 = rng.gen_range(0.5..2.0);
            let c: f64 = rng.gen_range(-3.0..3.0);
            f = &f + &RealLineFunction::vanishing(move |x: f64| a * (-s * (x - c) * (x - c)).exp());
        }
        f
    }

    fn random_element(rng: &mut ChaCha8Rng) -> CrossedProductElement<f64> {
        CrossedProductElement::new(bump(rng), bump(rng), Complex::zero()).unwrap()
    }

    #[test]
    fn invariance_examples() {
        let g = grid();
        assert!(is_invariant(&TransverseMeasure::lebesgue(g.clone()), &g));
        let skew = TransverseMeasure::new(|x: f64| x.exp(), g.clone()).unwrap();
        assert!(!is_invariant(&skew, &g));
        let gauss = TransverseMeasure::new(|x: f64| (-x * x).exp(), g.clone()).unwrap();
        assert!(is_invariant(&gauss, &g));
        assert!(TransverseMeasure::new(|x: f64| x, g).is_err());
    }

    #[test]
    fn rho_on_lifts() {
        let (a, b) = lifts();
        let rho = TraceFunctional::rho();
        assert_eq!(apply_trace(&rho, &a).unwrap(), Complex::new(0.0, 0.0));
        assert_eq!(apply_trace(&rho, &b).unwrap(), Complex::new(1.0, 0.0));
        assert_eq!(
            pair_difference(&rho, &a, &b).unwrap(),
            Complex::new(-1.0, 0.0)
        );
        assert_eq!(
            pair_difference(&rho, &a, &a).unwrap(),
            Complex::new(0.0, 0.0)
        );
    }

    #[test]
    fn lebesgue_pairing_vanishes() {
        let (a, b) = lifts();
        let tau = TraceFunctional::lebesgue(grid());
        assert!(pair_difference(&tau, &a, &b).unwrap().norm() < 1e-10);
        // χ decays like 1/|x|; the single lift has no finite Lebesgue trace
        assert!(matches!(
            apply_trace(&tau, &a),
            Err(Error::Integrability(_))
        ));
    }

    #[test]
    fn lebesgue_quadrature_against_finer_grid() {
        let f = CrossedProductElement::on_identity(RealLineFunction::real(
            |x: f64| 1.0 / (1.0 + x * x * x * x) * (-x * x / 8.0).exp(),
            0.0,
            0.0,
        ))
        .unwrap();
        let coarse = apply_trace(&TraceFunctional::lebesgue(grid()), &f).unwrap();
        let fine = apply_trace(&TraceFunctional::lebesgue(grid().refined(10)), &f).unwrap();
        assert!((coarse - fine).norm() < 1e-8, "{coarse} vs {fine}");
    }

    #[test]
    fn zero_and_unit_parts() {
        let tau = TraceFunctional::lebesgue(grid());
        assert_eq!(
            apply_trace(&tau, &CrossedProductElement::zero()).unwrap(),
            Complex::new(0.0, 0.0)
        );
        assert!(matches!(
            apply_trace(&tau, &CrossedProductElement::unit()),
            Err(Error::Integrability(_))
        ));
        let rho = TraceFunctional::<f64>::rho();
        assert_eq!(
            apply_trace(&rho, &CrossedProductElement::unit()).unwrap(),
            Complex::new(1.0, 0.0)
        );
    }

    #[test]
    fn pairing_requires_projection_lifts() {
        let rho = TraceFunctional::rho();
        let bad = CrossedProductElement::on_identity(RealLineFunction::vanishing(|x: f64| {
            Complex::new(0.5 * (-x * x).exp(), 0.0)
        }))
        .unwrap();
        let (a, _) = lifts();
        assert!(matches!(
            pair_difference(&rho, &bad, &a),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn measure_traces_are_tracial_only_when_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let lebesgue = TraceFunctional::lebesgue(grid());
        let skew =
            TraceFunctional::Measure(TransverseMeasure::new(|x: f64| x.exp(), grid()).unwrap());
        let mut worst_skew: f64 = 0.0;
        for _ in 0..100 {
            let (f, g) = (random_element(&mut rng), random_element(&mut rng));
            let (fg, gf) = (convolve(&f, &g), convolve(&g, &f));
            let r = (apply_trace(&lebesgue, &fg).unwrap() - apply_trace(&lebesgue, &gf).unwrap())
                .norm();
            assert!(r < 1e-8, "Lebesgue residual {r:e}");
            let s = (apply_trace(&skew, &fg).unwrap() - apply_trace(&skew, &gf).unwrap()).norm();
            worst_skew = worst_skew.max(s);
        }
        assert!(
            worst_skew > 1e-3,
            "non-invariant witness residual {worst_skew:e}"
        );
    }

    #[test]
    fn representation_traces_are_tracial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut draw = || {
            GroupAlgebraElement::new(
                Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            )
        };
        for rho in [
            GroupRepresentation::<f64>::sign(),
            GroupRepresentation::regular(),
        ] {
            for _ in 0..50 {
                let (a, b) = (draw(), draw());
                let ab = rho.trace_of(&group_algebra_product(&a, &b));
                let ba = rho.trace_of(&group_algebra_product(&b, &a));
                assert!((ab - ba).norm() < 1e-12);
                assert!((ab - rho.trace_of_product(&a, &b)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn representation_validation() {
        let o = Complex::new(0.0, 0.0);
        let l = Complex::new(1.0, 0.0);
        assert!(GroupRepresentation::<f64>::character(2.0).is_err());
        assert!(GroupRepresentation::new(2, vec![l, o, o, l], vec![l, l, o, l]).is_err());
        assert!(GroupRepresentation::new(1, vec![l + l], vec![l]).is_err());
        assert!(GroupRepresentation::new(2, vec![l], vec![l]).is_err());
    }

    #[test]
    fn regular_representation_pairing_is_zero() {
        // Tr of the regular representation sees only the identity coefficient
        let (a, b) = lifts();
        let tau = TraceFunctional::Representation(GroupRepresentation::regular());
        assert_eq!(
            pair_difference(&tau, &a, &b).unwrap(),
            Complex::new(0.0, 0.0)
        );
    }

    #[test]
    fn diagonal_pairing_is_additive() {
        let (a, b) = lifts();
        let z = CrossedProductElement::zero();
        let rho = TraceFunctional::rho();
        let both = pair_difference_diagonal(&rho, &[a.clone(), a.clone()], &[b.clone(), z.clone()])
            .unwrap();
        let split = pair_difference(&rho, &a, &b).unwrap() + pair_difference(&rho, &a, &z).unwrap();
        assert_eq!(both, split);
        assert!(pair_difference_diagonal(&rho, &[a], &[]).is_err());
    }
}
