//! The crossed product `C₀(ℝ) ⋊ Z₂` by the flip `x ↦ −x`, its minimal
//! unitization, the group algebra `C ⋊ Z₂`, evaluation at the fixed point,
//! and the chart isomorphism onto `M₂(C₀(ℝ))` for the ideal over `ℝ \ {0}`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::function_space::{sup_distance, FunctionMatrix, Grid, RealLineFunction};
use crate::mat2::Mat2;
use crate::scalar::{lit, tolerance, Scalar};

/// Tolerance for "vanishes at 0" when entering the ideal.
pub const IDEAL_TOLERANCE: f64 = 1e-8;

/// An element `c_e·1_e + c_ε·1_ε` of the group algebra `C ⋊ Z₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupAlgebraElement<S: Scalar> {
    pub c_e: Complex<S>,
    pub c_eps: Complex<S>,
}

impl<S: Scalar> GroupAlgebraElement<S> {
    pub fn new(c_e: Complex<S>, c_eps: Complex<S>) -> Self {
        GroupAlgebraElement { c_e, c_eps }
    }

    pub fn from_real(c_e: S, c_eps: S) -> Self {
        Self::new(Complex::new(c_e, S::zero()), Complex::new(c_eps, S::zero()))
    }

    pub fn zero() -> Self {
        Self::new(Complex::zero(), Complex::zero())
    }

    /// `1_e`, the unit.
    pub fn unit() -> Self {
        Self::new(Complex::one(), Complex::zero())
    }

    /// `1_ε`.
    pub fn flip_element() -> Self {
        Self::new(Complex::zero(), Complex::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.c_e + other.c_e, self.c_eps + other.c_eps)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.c_e - other.c_e, self.c_eps - other.c_eps)
    }

    pub fn scale(&self, c: Complex<S>) -> Self {
        Self::new(self.c_e * c, self.c_eps * c)
    }

    /// `ε⁻¹ = ε`, so the involution conjugates both coefficients.
    pub fn adjoint(&self) -> Self {
        Self::new(self.c_e.conj(), self.c_eps.conj())
    }

    pub fn distance(&self, other: &Self) -> S {
        (self.c_e - other.c_e)
            .norm()
            .max((self.c_eps - other.c_eps).norm())
    }

    /// `max(|a² − a|, |a − a*|)`.
    pub fn projection_defect(&self) -> S {
        let sq = group_algebra_product(self, self);
        sq.distance(self).max(self.distance(&self.adjoint()))
    }
}

/// The Z₂ group-algebra product.
pub fn group_algebra_product<S: Scalar>(
    a: &GroupAlgebraElement<S>,
    b: &GroupAlgebraElement<S>,
) -> GroupAlgebraElement<S> {
    GroupAlgebraElement::new(
        a.c_e * b.c_e + a.c_eps * b.c_eps,
        a.c_e * b.c_eps + a.c_eps * b.c_e,
    )
}

/// The isomorphism `C ⋊ Z₂ ≅ C ⊕ C` given by the two characters of `Z₂`.
pub fn character_iso<S: Scalar>(a: &GroupAlgebraElement<S>) -> (Complex<S>, Complex<S>) {
    (a.c_e + a.c_eps, a.c_e - a.c_eps)
}

/// Inverse of [`character_iso`].
pub fn character_iso_inverse<S: Scalar>(x: Complex<S>, y: Complex<S>) -> GroupAlgebraElement<S> {
    let half: Complex<S> = Complex::new(lit(0.5), S::zero());
    GroupAlgebraElement::new((x + y) * half, (x - y) * half)
}

/// The regular representation: `e ↦ I`, `ε ↦ [[0,1],[1,0]]`.
pub fn regular_representation<S: Scalar>(a: &GroupAlgebraElement<S>) -> Mat2<S> {
    Mat2::new(a.c_e, a.c_eps, a.c_eps, a.c_e)
}

/// An element `F: Z₂ → C₀(ℝ)` of the crossed product, plus a unitization scalar.
#[derive(Clone, Debug)]
pub struct CrossedProductElement<S: Scalar> {
    comp_e: RealLineFunction<S>,
    comp_eps: RealLineFunction<S>,
    unit_scalar: Complex<S>,
}

impl<S: Scalar> CrossedProductElement<S> {
    /// Elements without a unit part must have both components in `C₀(ℝ)`.
    pub fn new(
        comp_e: RealLineFunction<S>,
        comp_eps: RealLineFunction<S>,
        unit_scalar: Complex<S>,
    ) -> Result<Self> {
        if unit_scalar.is_zero() {
            for (name, f) in [("F(e)", &comp_e), ("F(ε)", &comp_eps)] {
                if !f.is_vanishing() {
                    return Err(Error::Precondition(format!(
                        "{name} does not vanish at ±∞ but the element has no unit part"
                    )));
                }
            }
        }
        Ok(CrossedProductElement {
            comp_e,
            comp_eps,
            unit_scalar,
        })
    }

    pub fn zero() -> Self {
        CrossedProductElement {
            comp_e: RealLineFunction::zero(),
            comp_eps: RealLineFunction::zero(),
            unit_scalar: Complex::zero(),
        }
    }

    /// The adjoined unit.
    pub fn unit() -> Self {
        Self::scalar(Complex::one())
    }

    pub fn scalar(c: Complex<S>) -> Self {
        CrossedProductElement {
            unit_scalar: c,
            ..Self::zero()
        }
    }

    /// `f·1_e`.
    pub fn on_identity(f: RealLineFunction<S>) -> Result<Self> {
        Self::new(f, RealLineFunction::zero(), Complex::zero())
    }

    /// `f·1_ε`.
    pub fn on_flip(f: RealLineFunction<S>) -> Result<Self> {
        Self::new(RealLineFunction::zero(), f, Complex::zero())
    }

    /// `f·a`, i.e. components `(a_e·f, a_ε·f)`.
    pub fn weighted(f: &RealLineFunction<S>, a: &GroupAlgebraElement<S>) -> Result<Self> {
        Self::new(f.scale(a.c_e), f.scale(a.c_eps), Complex::zero())
    }

    pub fn comp_e(&self) -> &RealLineFunction<S> {
        &self.comp_e
    }

    pub fn comp_eps(&self) -> &RealLineFunction<S> {
        &self.comp_eps
    }

    pub fn unit_scalar(&self) -> Complex<S> {
        self.unit_scalar
    }

    pub fn add(&self, other: &Self) -> Self {
        CrossedProductElement {
            comp_e: &self.comp_e + &other.comp_e,
            comp_eps: &self.comp_eps + &other.comp_eps,
            unit_scalar: self.unit_scalar + other.unit_scalar,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-Complex::one()))
    }

    pub fn scale(&self, c: Complex<S>) -> Self {
        CrossedProductElement {
            comp_e: self.comp_e.scale(c),
            comp_eps: self.comp_eps.scale(c),
            unit_scalar: self.unit_scalar * c,
        }
    }

    /// Largest pointwise difference over the grid, limits and unit scalars.
    pub fn distance(&self, other: &Self, grid: &Grid<S>) -> S {
        sup_distance(&self.comp_e, &other.comp_e, grid)
            .max(sup_distance(&self.comp_eps, &other.comp_eps, grid))
            .max((self.unit_scalar - other.unit_scalar).norm())
    }

    /// `F(e)(x)` including the unit part.
    pub fn value_e(&self, x: S) -> Complex<S> {
        self.comp_e.evaluate(x) + self.unit_scalar
    }
}

impl<S: Scalar> fmt::Display for CrossedProductElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}·1 + F with F(e)(0) = {}, F(ε)(0) = {}",
            self.unit_scalar,
            self.comp_e.evaluate(S::zero()),
            self.comp_eps.evaluate(S::zero())
        )
    }
}

/// `(F*G)(ξ) = Σₙ F(n)·φ(n)(G(n⁻¹ξ))`, extended to the unitization.
pub fn convolve<S: Scalar>(
    f: &CrossedProductElement<S>,
    g: &CrossedProductElement<S>,
) -> CrossedProductElement<S> {
    let (lam, mu) = (f.unit_scalar, g.unit_scalar);
    let e = &(&f.comp_e * &g.comp_e) + &(&f.comp_eps * &g.comp_eps.flip());
    let eps = &(&f.comp_e * &g.comp_eps) + &(&f.comp_eps * &g.comp_e.flip());
    let cross =
        |own: RealLineFunction<S>, from_f: &RealLineFunction<S>, from_g: &RealLineFunction<S>| {
            let mut out = own;
            if !lam.is_zero() {
                out = &out + &from_g.scale(lam);
            }
            if !mu.is_zero() {
                out = &out + &from_f.scale(mu);
            }
            out
        };
    CrossedProductElement {
        comp_e: cross(e, &f.comp_e, &g.comp_e),
        comp_eps: cross(eps, &f.comp_eps, &g.comp_eps),
        unit_scalar: lam * mu,
    }
}

/// `F*(e) = conj F(e)`, `F*(ε) = conj flip(F(ε))`.
pub fn involution<S: Scalar>(f: &CrossedProductElement<S>) -> CrossedProductElement<S> {
    CrossedProductElement {
        comp_e: f.comp_e.conj(),
        comp_eps: f.comp_eps.flip().conj(),
        unit_scalar: f.unit_scalar.conj(),
    }
}

/// Evaluation at the fixed point `0`, onto `C ⋊ Z₂`.
pub fn ev0<S: Scalar>(f: &CrossedProductElement<S>) -> GroupAlgebraElement<S> {
    GroupAlgebraElement::new(f.value_e(S::zero()), f.comp_eps.evaluate(S::zero()))
}

/// Which half-line a [`HalfLineFunction`] lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Positive,
    Negative,
}

impl Chart {
    fn point<S: Scalar>(self, t: S) -> S {
        match self {
            Chart::Positive => t.exp(),
            Chart::Negative => -t.exp(),
        }
    }
}

type Evaluator<S> = Arc<dyn Fn(S) -> Complex<S> + Send + Sync>;

/// A function on `ℝ⁺` or `ℝ⁻` stored in the logarithmic coordinate `t`,
/// where `x = ±eᵗ`. Vanishes as `t → ±∞` (at `x → 0` and `x → ±∞`).
#[derive(Clone)]
pub struct HalfLineFunction<S: Scalar> {
    evaluate_t: Evaluator<S>,
    chart: Chart,
}

impl<S: Scalar> fmt::Debug for HalfLineFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HalfLineFunction")
            .field("chart", &self.chart)
            .finish()
    }
}

impl<S: Scalar> HalfLineFunction<S> {
    pub fn new<F>(f: F, chart: Chart) -> Self
    where
        F: Fn(S) -> Complex<S> + Send + Sync + 'static,
    {
        HalfLineFunction {
            evaluate_t: Arc::new(f),
            chart,
        }
    }

    /// Restriction of a function on `ℝ` to the chart's half-line.
    pub fn restrict(f: &RealLineFunction<S>, chart: Chart) -> Self {
        let f = f.clone();
        Self::new(move |t| f.evaluate(chart.point(t)), chart)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn evaluate_t(&self, t: S) -> Complex<S> {
        if t.is_infinite() {
            Complex::zero()
        } else {
            (self.evaluate_t)(t)
        }
    }

    /// Value at `x`, or `None` when `x` is not in the chart's open half-line.
    pub fn evaluate_x(&self, x: S) -> Option<Complex<S>> {
        let inside = match self.chart {
            Chart::Positive => x > S::zero(),
            Chart::Negative => x < S::zero(),
        };
        inside.then(|| self.evaluate_t(x.abs().ln()))
    }

    /// The function on all of `ℝ` that agrees on the chart and is zero elsewhere.
    pub fn extend_by_zero(&self) -> RealLineFunction<S> {
        let this = self.clone();
        RealLineFunction::vanishing(move |x| this.evaluate_x(x).unwrap_or_else(Complex::zero))
    }
}

/// `ψ^±`: relabels a half-line function as a function of `t ∈ ℝ`.
pub fn psi_chart<S: Scalar>(f: &HalfLineFunction<S>) -> RealLineFunction<S> {
    let eval = Arc::clone(&f.evaluate_t);
    RealLineFunction::vanishing(move |t| eval(t))
}

/// `(ψ^±)⁻¹`: reads a function of `t` as a half-line function on `chart`.
pub fn psi_chart_inverse<S: Scalar>(g: &RealLineFunction<S>, chart: Chart) -> HalfLineFunction<S> {
    let g = g.clone();
    HalfLineFunction::new(move |t| g.evaluate(t), chart)
}

/// The chart matrix `[[ψ⁻F(e), ψ⁻F(ε)], [ψ⁺F(ε), ψ⁺F(e)]] + λ·I`, as a function of `t`.
///
/// This is the formula behind `Ψ` applied without the ideal precondition, so
/// the `t → −∞` limit is whatever `F` takes at `x = 0`.
pub fn chart_matrix<S: Scalar>(f: &CrossedProductElement<S>) -> FunctionMatrix<S> {
    chart_matrix_with_limits(f, false)
}

fn chart_matrix_with_limits<S: Scalar>(
    f: &CrossedProductElement<S>,
    in_ideal: bool,
) -> FunctionMatrix<S> {
    let lam = f.unit_scalar;
    let entry = |comp: &RealLineFunction<S>, chart: Chart, with_unit: bool| {
        let shift = if with_unit { lam } else { Complex::zero() };
        let at_zero = if in_ideal {
            Complex::zero()
        } else {
            comp.evaluate(S::zero())
        };
        let at_inf = match chart {
            Chart::Positive => comp.limit_pos(),
            Chart::Negative => comp.limit_neg(),
        };
        let c = comp.clone();
        RealLineFunction::new(
            move |t| c.evaluate(chart.point(t)) + shift,
            at_zero + shift,
            at_inf + shift,
        )
    };
    let m = [
        [
            entry(&f.comp_e, Chart::Negative, true),
            entry(&f.comp_eps, Chart::Negative, false),
        ],
        [
            entry(&f.comp_eps, Chart::Positive, false),
            entry(&f.comp_e, Chart::Positive, true),
        ],
    ];
    if lam.is_zero() {
        FunctionMatrix::new(m)
    } else {
        FunctionMatrix::unitized(m)
    }
}

/// `Ψ: (C₀(ℝ⁻) ⊕ C₀(ℝ⁺)) ⋊ Z₂ → M₂(C₀(ℝ))`, extended to the unitization by `λ ↦ λ·I`.
pub fn psi_iso<S: Scalar>(f: &CrossedProductElement<S>) -> Result<FunctionMatrix<S>> {
    let tol: S = tolerance(IDEAL_TOLERANCE);
    for (name, comp) in [("F(e)", &f.comp_e), ("F(ε)", &f.comp_eps)] {
        let at_zero = comp.evaluate(S::zero()).norm();
        if !(at_zero < tol) {
            return Err(Error::Precondition(format!(
                "{name} does not vanish at 0 (|{name}(0)| = {at_zero:.3e}); element is not in the ideal"
            )));
        }
    }
    Ok(chart_matrix_with_limits(f, true))
}

/// `Ψ⁻¹`. The matrix limits at `t = ±∞` must both equal a common `λ·I`.
pub fn psi_inverse<S: Scalar>(m: &FunctionMatrix<S>) -> Result<CrossedProductElement<S>> {
    let lam = m.limit_neg().get(0, 0);
    let scalar = Mat2::scalar(lam);
    let tol: S = tolerance(1e-12);
    if (m.limit_neg() - scalar).op_norm() > tol || (m.limit_pos() - scalar).op_norm() > tol {
        return Err(Error::Precondition(
            "matrix limits are not a common scalar multiple of the identity".into(),
        ));
    }
    let m = m.clone();
    let pick = move |neg: (usize, usize), pos: (usize, usize), shift: Complex<S>| {
        let m = m.clone();
        RealLineFunction::vanishing(move |x: S| {
            if x < S::zero() {
                m.entry(neg.0, neg.1).evaluate((-x).ln()) - shift
            } else if x > S::zero() {
                m.entry(pos.0, pos.1).evaluate(x.ln()) - shift
            } else {
                Complex::zero()
            }
        })
    };
    let comp_e = pick((0, 0), (1, 1), lam);
    let comp_eps = pick((0, 1), (1, 0), Complex::zero());
    Ok(CrossedProductElement {
        comp_e,
        comp_eps,
        unit_scalar: lam,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_space::sup_norm;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn gauss(center: f64) -> RealLineFunction<f64> {
        RealLineFunction::real(move |x: f64| (-(x - center).powi(2)).exp(), 0.0, 0.0)
    }

    fn p_plus() -> GroupAlgebraElement<f64> {
        GroupAlgebraElement::from_real(0.5, 0.5)
    }

    fn p_minus() -> GroupAlgebraElement<f64> {
        GroupAlgebraElement::from_real(0.5, -0.5)
    }

    #[test]
    fn constructor_enforces_vanishing_without_unit() {
        let one = RealLineFunction::<f64>::one();
        assert!(CrossedProductElement::on_identity(one.clone()).is_err());
        assert!(CrossedProductElement::new(one, RealLineFunction::zero(), c(1.0)).is_ok());
    }

    #[test]
    fn identity_components_multiply_pointwise() {
        let g = Grid::standard();
        let (f, h) = (gauss(0.5), gauss(-1.0));
        let prod = convolve(
            &CrossedProductElement::on_identity(f.clone()).unwrap(),
            &CrossedProductElement::on_identity(h.clone()).unwrap(),
        );
        let want = CrossedProductElement::on_identity(&f * &h).unwrap();
        assert_eq!(prod.distance(&want, &g), 0.0);
    }

    #[test]
    fn flip_components_multiply_with_a_twist() {
        // brute-force expansion of Σ_{n∈Z₂} F(n)·φ(n)(G(n⁻¹ξ)) for F = f·1_ε, G = h·1_ε
        let g = Grid::standard();
        let (f, h) = (gauss(0.5), gauss(1.5));
        let prod = convolve(
            &CrossedProductElement::on_flip(f.clone()).unwrap(),
            &CrossedProductElement::on_flip(h.clone()).unwrap(),
        );
        for &x in g.points() {
            // ξ = e: only n = ε contributes, F(ε)(x)·G(ε)(−x)
            let e_val = f.evaluate(x) * h.evaluate(-x);
            // ξ = ε: n = e gives F(e)·G(ε) = 0, n = ε gives F(ε)·φ(ε)(G(e)) = 0
            assert!((prod.comp_e().evaluate(x) - e_val).norm() < 1e-15);
            assert_eq!(prod.comp_eps().evaluate(x), c(0.0));
        }
    }

    #[test]
    fn unit_law() {
        let g = Grid::standard();
        let f = CrossedProductElement::new(
            gauss(0.3),
            gauss(-2.0).scale(Complex::new(0.0, 1.0)),
            c(0.7),
        )
        .unwrap();
        let one = CrossedProductElement::unit();
        assert!(convolve(&one, &f).distance(&f, &g) < 1e-15);
        assert!(convolve(&f, &one).distance(&f, &g) < 1e-15);
    }

    #[test]
    fn involution_examples() {
        let g = Grid::standard();
        let real_e = CrossedProductElement::on_identity(gauss(0.4)).unwrap();
        assert_eq!(involution(&real_e).distance(&real_e, &g), 0.0);

        let f = gauss(1.0).scale(Complex::new(1.0, 2.0));
        let on_eps = CrossedProductElement::on_flip(f.clone()).unwrap();
        let star = involution(&on_eps);
        let want = CrossedProductElement::on_flip(f.flip().conj()).unwrap();
        assert_eq!(star.distance(&want, &g), 0.0);
        assert_eq!(involution(&star).distance(&on_eps, &g), 0.0);
    }

    #[test]
    fn ev0_of_lift_and_kernel() {
        let chi = RealLineFunction::real(|x: f64| 1.0 / (1.0 + x.abs()), 0.0, 0.0);
        let lift = CrossedProductElement::weighted(&chi, &p_plus()).unwrap();
        assert_eq!(ev0(&lift), p_plus());

        let odd = RealLineFunction::real(|x: f64| x * (-x * x).exp(), 0.0, 0.0);
        let k = CrossedProductElement::new(odd.clone(), odd, c(0.0)).unwrap();
        assert_eq!(ev0(&k), GroupAlgebraElement::zero());
    }

    #[test]
    fn minimal_projections_in_group_algebra() {
        assert_eq!(group_algebra_product(&p_plus(), &p_plus()), p_plus());
        assert_eq!(group_algebra_product(&p_minus(), &p_minus()), p_minus());
        assert_eq!(
            group_algebra_product(&p_plus(), &p_minus()),
            GroupAlgebraElement::zero()
        );
        let a = GroupAlgebraElement::new(Complex::new(0.3, -1.0), Complex::new(2.0, 0.5));
        assert_eq!(group_algebra_product(&GroupAlgebraElement::unit(), &a), a);
    }

    #[test]
    fn characters_of_minimal_projections() {
        // idempotents of C⊕C are exactly the four points {0,1}²; the minimal nonzero ones are
        // (1,0) and (0,1)
        let minimal: Vec<(f64, f64)> = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
            .into_iter()
            .filter(|&(x, y)| x + y == 1.0)
            .collect();
        assert_eq!(character_iso(&p_plus()), (c(minimal[0].0), c(minimal[0].1)));
        assert_eq!(
            character_iso(&p_minus()),
            (c(minimal[1].0), c(minimal[1].1))
        );
        assert_eq!(character_iso_inverse(c(1.0), c(0.0)), p_plus());
    }

    #[test]
    fn regular_representation_matrices() {
        assert_eq!(
            regular_representation(&p_plus()),
            Mat2::from_real(0.5, 0.5, 0.5, 0.5)
        );
        assert_eq!(
            regular_representation(&p_minus()),
            Mat2::from_real(0.5, -0.5, -0.5, 0.5)
        );
        assert_eq!(
            regular_representation(&GroupAlgebraElement::<f64>::unit()),
            Mat2::identity()
        );
    }

    #[test]
    fn chart_composition() {
        let f = RealLineFunction::real(|x: f64| x / (1.0 + x * x), 0.0, 0.0);
        let psi = psi_chart(&HalfLineFunction::restrict(&f, Chart::Positive));
        for t in [-5.0_f64, -1.0, 0.0, 0.3, 4.0] {
            let want = f64::exp(t) / (1.0 + f64::exp(2.0 * t));
            assert!((psi.evaluate(t).re - want).abs() < 1e-15);
        }
    }

    #[test]
    fn chart_round_trip() {
        let h = HalfLineFunction::new(
            |t: f64| Complex::new((-t * t).exp(), t.sin() / t.cosh()),
            Chart::Negative,
        );
        let back = psi_chart_inverse(&psi_chart(&h), Chart::Negative);
        assert_eq!(back.chart(), Chart::Negative);
        for t in [-30.0, -2.0, 0.0, 1.5, 19.0] {
            assert!((back.evaluate_t(t) - h.evaluate_t(t)).norm() < 1e-12);
        }
        assert_eq!(h.evaluate_x(1.0), None);
        assert!(h.evaluate_x(-1.0).is_some());
    }

    #[test]
    fn psi_of_identity_supported_element_is_diagonal() {
        let g = Grid::standard();
        let f = RealLineFunction::real(|x: f64| x * x * (-x * x).exp(), 0.0, 0.0);
        let m = psi_iso(&CrossedProductElement::on_identity(f.clone()).unwrap()).unwrap();
        assert!(!m.is_unitized());
        let want = FunctionMatrix::diag(
            psi_chart(&HalfLineFunction::restrict(&f, Chart::Negative)),
            psi_chart(&HalfLineFunction::restrict(&f, Chart::Positive)),
        );
        assert_eq!(m.sup_distance(&want, &g), 0.0);
        assert_eq!(sup_norm(m.entry(0, 1), &g), 0.0);
    }

    #[test]
    fn psi_rejects_elements_outside_the_ideal() {
        let err = psi_iso(&CrossedProductElement::on_flip(gauss(0.0)).unwrap()).unwrap_err();
        match err {
            Error::Precondition(msg) => assert!(msg.contains("F(ε)")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn psi_inverse_round_trip() {
        let g = Grid::standard();
        let f = RealLineFunction::real(|x: f64| x * x * (-(x - 1.0).powi(2)).exp(), 0.0, 0.0);
        let h = RealLineFunction::real(|x: f64| x.powi(2) * (-(x + 0.5).powi(2)).exp(), 0.0, 0.0);
        let el = CrossedProductElement::new(f, h, c(0.0)).unwrap();
        let back = psi_inverse(&psi_iso(&el).unwrap()).unwrap();
        assert!(back.distance(&el, &g) < 1e-12);
    }
}
