//! K-theory representatives and the exponential boundary map
//! `K₀(C ⋊ Z₂) → K₁((C₀(ℝ⁻) ⊕ C₀(ℝ⁺)) ⋊ Z₂)`.
//!
//! A projection `p` of the group algebra is lifted to `χ·p`, exponentiated
//! through `e^{2πiχp} = e^{2πiχ}p + (1 − p)`, moved into `M₂(C₀(ℝ))` by `Ψ`
//! and classified by the winding number of its determinant.
//!
//! Orientation: classes are reported in units of `g_ref = [e^{−2πiθ}]`, whose
//! raw (counter-clockwise) winding is `−1`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::crossed_product::{
    ev0, involution, psi_iso, regular_representation, CrossedProductElement, GroupAlgebraElement,
};
use crate::error::{Error, Result};
use crate::function_space::{sup_distance, FunctionMatrix, Grid, RealLineFunction};
use crate::mat2::Mat2;
use crate::scalar::{lit, tolerance, unit_phase, Scalar};

/// Maximum accepted phase increment between neighbouring samples.
pub const MAX_PHASE_STEP: f64 = PI / 2.0;
/// Minimum modulus a loop may reach before its winding is refused.
pub const MIN_MODULUS: f64 = 0.1;
/// Distance of the raw winding total from the nearest integer.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;
/// Limit checks for loops and unitaries on the compactified line.
pub const LIMIT_TOLERANCE: f64 = 1e-6;
/// Unitarity required of exponential-boundary outputs.
pub const BOUNDARY_UNITARITY: f64 = 1e-9;
/// Unitarity required of `det_winding` inputs.
pub const WINDING_UNITARITY: f64 = 1e-8;
/// Largest sup-distance allowed between consecutive path samples.
pub const CONTINUITY_BOUND: f64 = 0.2;
/// Default number of steps used to discretize a homotopy.
pub const DEFAULT_HOMOTOPY_STEPS: usize = 64;

const PROJECTION_TOLERANCE: f64 = 1e-10;
const PROFILE_TOLERANCE: f64 = 1e-12;

/// The logistic profile `θ(t) = (1 + tanh(t/2)) / 2`, from `0` at `−∞` to `1` at `+∞`.
pub fn logistic_theta<S: Scalar>() -> RealLineFunction<S> {
    scaled_logistic_theta(lit(0.5))
}

/// `θ(t) = (1 + tanh(rate·t)) / 2`.
pub fn scaled_logistic_theta<S: Scalar>(rate: S) -> RealLineFunction<S> {
    let half: S = lit(0.5);
    RealLineFunction::real(
        move |t: S| half * (S::one() + (rate * t).tanh()),
        S::zero(),
        S::one(),
    )
}

/// The pair `(χ, θ)` used to lift projections and to read off boundary classes.
#[derive(Clone, Debug)]
pub struct LiftProfile<S: Scalar> {
    chi: RealLineFunction<S>,
    theta: RealLineFunction<S>,
}

impl<S: Scalar> LiftProfile<S> {
    /// Builds `χ(x) = 1 − θ(ln|x|)`, `χ(0) = 1`, so that both chart pullbacks
    /// of `χ` are exactly `1 − θ`.
    pub fn from_theta(theta: RealLineFunction<S>) -> Result<Self> {
        let th = theta.clone();
        let chi = RealLineFunction::real(
            move |x: S| {
                if x.is_zero() {
                    S::one()
                } else {
                    S::one() - th.evaluate(x.abs().ln()).re
                }
            },
            S::zero(),
            S::zero(),
        );
        Self::new(chi, theta, &Grid::standard())
    }

    /// The default profile: logistic `θ`, hence `χ(x) = 1/(1 + |x|)`.
    pub fn logistic() -> Self {
        Self::from_theta(logistic_theta()).expect("logistic profile is admissible")
    }

    /// Validates an explicit pair against the profile invariants on `grid`.
    pub fn new(
        chi: RealLineFunction<S>,
        theta: RealLineFunction<S>,
        grid: &Grid<S>,
    ) -> Result<Self> {
        let tol: S = tolerance(PROFILE_TOLERANCE);
        if !((chi.evaluate(S::zero()) - Complex::one()).norm() < tol) {
            return Err(Error::Precondition("χ(0) must equal 1".into()));
        }
        if !chi.is_vanishing() {
            return Err(Error::Precondition("χ must vanish at ±∞".into()));
        }
        if !(theta.limit_neg().is_zero() && theta.limit_pos() == Complex::one()) {
            return Err(Error::Precondition(
                "θ must run from 0 at −∞ to 1 at +∞".into(),
            ));
        }
        let one_minus_theta = theta.map(|z: Complex<S>| Complex::<S>::one() - z);
        for sign in [S::one(), -S::one()] {
            let c = chi.clone();
            let pulled = chi.pullback(
                move |t: S| sign * t.exp(),
                c.evaluate(S::zero()),
                Complex::zero(),
            );
            let gap = grid
                .points()
                .iter()
                .map(|&t| (pulled.evaluate(t) - one_minus_theta.evaluate(t)).norm())
                .fold(S::zero(), S::max);
            if !(gap < tol) {
                return Err(Error::Precondition(format!(
                    "χ pulled through a half-line chart differs from 1 − θ by {gap:.3e}"
                )));
            }
        }
        Ok(LiftProfile { chi, theta })
    }

    pub fn chi(&self) -> &RealLineFunction<S> {
        &self.chi
    }

    pub fn theta(&self) -> &RealLineFunction<S> {
        &self.theta
    }

    /// `e^{−2πiθ}`, the loop whose class is the reference generator.
    pub fn reference_loop(&self) -> RealLineFunction<S> {
        self.theta.map(|z| unit_phase(-z.re))
    }

    /// `[[0, e^{−2πiθ}], [−1, 0]]`.
    pub fn k0_generator_representative(&self) -> FunctionMatrix<S> {
        FunctionMatrix::new([
            [RealLineFunction::zero(), self.reference_loop()],
            [
                RealLineFunction::constant(-Complex::one()),
                RealLineFunction::zero(),
            ],
        ])
    }
}

/// A K₁ class as a multiple of `g_ref`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KOneClass {
    pub winding: i64,
}

impl fmt::Display for KOneClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·g_ref", self.winding)
    }
}

/// `(p₊, p₋) = (½(1_e + 1_ε), ½(1_e − 1_ε))`.
pub fn minimal_projections<S: Scalar>() -> (GroupAlgebraElement<S>, GroupAlgebraElement<S>) {
    let h: S = lit(0.5);
    (
        GroupAlgebraElement::from_real(h, h),
        GroupAlgebraElement::from_real(h, -h),
    )
}

/// The self-adjoint lift `χ·p` of a projection `p` of the group algebra.
pub fn lift_projection<S: Scalar>(
    p: &GroupAlgebraElement<S>,
    profile: &LiftProfile<S>,
) -> Result<CrossedProductElement<S>> {
    let defect = p.projection_defect();
    if !(defect < tolerance(PROFILE_TOLERANCE)) {
        return Err(Error::Precondition(format!(
            "cannot lift a non-projection (defect {defect:.3e})"
        )));
    }
    CrossedProductElement::weighted(profile.chi(), p)
}

/// Splits a lift into `(f, p)` with `lift = f·p`, where `p = ev₀(lift)` and
/// `f` is real and even (so that it commutes with `p`).
fn factor_lift<S: Scalar>(
    lift: &CrossedProductElement<S>,
    grid: &Grid<S>,
) -> Result<(RealLineFunction<S>, GroupAlgebraElement<S>)> {
    let tol: S = tolerance(PROJECTION_TOLERANCE);
    if !lift.unit_scalar().is_zero() {
        return Err(Error::Precondition(
            "a lift must not carry a unit part".into(),
        ));
    }
    let p = ev0(lift);
    let defect = p.projection_defect();
    if !(defect < tol) {
        return Err(Error::Precondition(format!(
            "ev₀(lift) is not a projection (defect {defect:.3e})"
        )));
    }
    let sa = involution(lift).distance(lift, grid);
    if !(sa < tol) {
        return Err(Error::Precondition(format!(
            "lift is not self-adjoint (‖F − F*‖ = {sa:.3e})"
        )));
    }
    if p.c_e.norm() < tol {
        // the only projection with vanishing identity coefficient is 0
        let size = lift.distance(&CrossedProductElement::zero(), grid);
        if !(size < tol) {
            return Err(Error::BoundaryMap(
                "lift of the zero projection is not zero; not of the form f·p".into(),
            ));
        }
        return Ok((RealLineFunction::zero(), GroupAlgebraElement::zero()));
    }
    let f = lift.comp_e().scale(p.c_e.inv());
    let rebuilt = f.scale(p.c_eps);
    let gap = sup_distance(&rebuilt, lift.comp_eps(), grid);
    if !(gap < tol) {
        return Err(Error::BoundaryMap(format!(
            "lift is not of the form f·p (ε-component off by {gap:.3e})"
        )));
    }
    if !p.c_eps.is_zero() {
        let odd = sup_distance(&f.flip(), &f, grid);
        if !(odd < tol) {
            return Err(Error::BoundaryMap(format!(
                "lift profile is not even ({odd:.3e}); it does not commute with p"
            )));
        }
    }
    Ok((f, p))
}

/// `u = e^{2πi·lift}` in the unitized crossed product, through
/// `e^{2πifp} = e^{2πif}p + (1 − p)`.
pub fn boundary_unitary<S: Scalar>(
    lift: &CrossedProductElement<S>,
    grid: &Grid<S>,
) -> Result<CrossedProductElement<S>> {
    let (f, p) = factor_lift(lift, grid)?;
    let g = f.map(|z| unit_phase(z.re) - Complex::one());
    let excess = CrossedProductElement::weighted(&g, &p)?;
    Ok(excess.add(&CrossedProductElement::unit()))
}

/// The exponential boundary map at the level of representatives: returns
/// `Ψ(u − 1) + I` for `u = e^{2πi·lift}`.
pub fn exponential_boundary<S: Scalar>(
    lift: &CrossedProductElement<S>,
    grid: &Grid<S>,
) -> Result<FunctionMatrix<S>> {
    let u = boundary_unitary(lift, grid)?;
    let excess = u.sub(&CrossedProductElement::unit());
    let tol: S = tolerance(1e-8);
    for (name, comp) in [("F(e)", excess.comp_e()), ("F(ε)", excess.comp_eps())] {
        let worst = [S::zero(), S::neg_infinity(), S::infinity()]
            .into_iter()
            .map(|x| comp.evaluate(x).norm())
            .fold(S::zero(), S::max);
        if !(worst < tol) {
            return Err(Error::BoundaryMap(format!(
                "u − 1 is not in the ideal: {name} reaches {worst:.3e} at 0 or ±∞"
            )));
        }
    }
    let image = psi_iso(&excess).map_err(|e| Error::BoundaryMap(e.to_string()))?;
    let w = image.add(&FunctionMatrix::identity());
    let defect = w.unitarity_defect(grid);
    if !(defect < tolerance(BOUNDARY_UNITARITY)) {
        return Err(Error::NumericalTolerance(format!(
            "exponential image is not unitary: ‖W*W − I‖ = {defect:.3e}"
        )));
    }
    Ok(w)
}

/// The winding number of a loop `u` on the compactified line.
///
/// Sums principal-branch phase increments from `u(−∞)` through the grid
/// samples to `u(+∞)`. Positive means counter-clockwise.
pub fn winding_number<S: Scalar>(u: &RealLineFunction<S>, grid: &Grid<S>) -> Result<i64> {
    let limit_tol: S = lit(LIMIT_TOLERANCE);
    for (side, lim) in [("−∞", u.limit_neg()), ("+∞", u.limit_pos())] {
        if !((lim - Complex::one()).norm() < limit_tol) {
            return Err(Error::Precondition(format!(
                "loop limit at {side} is {lim}, not 1"
            )));
        }
    }
    let samples: Vec<Complex<S>> = std::iter::once(u.limit_neg())
        .chain(grid.points().iter().map(|&x| u.evaluate(x)))
        .chain(std::iter::once(u.limit_pos()))
        .collect();
    let floor: S = lit(MIN_MODULUS);
    if let Some((index, z)) = samples
        .iter()
        .enumerate()
        .find(|(_, z)| !(z.norm() > floor))
    {
        return Err(Error::NearZero {
            index,
            modulus: z.norm().to_f64().unwrap_or(f64::NAN),
        });
    }
    let max_step: S = lit(MAX_PHASE_STEP);
    let mut total = S::zero();
    for (index, w) in samples.windows(2).enumerate() {
        let step = (w[1] / w[0]).arg();
        if step.abs() >= max_step {
            return Err(Error::Resolution {
                index,
                step: step.to_f64().unwrap_or(f64::NAN),
            });
        }
        total = total + step;
    }
    let turns = total / S::TAU();
    let nearest = turns.round();
    // rounding error accumulates over the samples
    let slack = tolerance::<S>(INTEGRALITY_TOLERANCE).max(S::epsilon() * lit(samples.len() as f64));
    if !((turns - nearest).abs() < slack) {
        return Err(Error::Normalization {
            value: turns.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(nearest.to_i64().expect("winding fits in i64"))
}

/// K₁ class of a unitary loop in `M₂`, via the winding of its determinant,
/// in units of `g_ref`.
///
/// The loop must close (`U(−∞) = U(+∞)`); the determinant is normalized by
/// its limit before winding.
pub fn det_winding<S: Scalar>(u: &FunctionMatrix<S>, grid: &Grid<S>) -> Result<KOneClass> {
    let defect = u.unitarity_defect(grid);
    if !(defect < tolerance(WINDING_UNITARITY)) {
        return Err(Error::Precondition(format!(
            "matrix loop is not unitary ({defect:.3e})"
        )));
    }
    let gap = (u.limit_neg() - u.limit_pos()).op_norm();
    if !(gap < lit(LIMIT_TOLERANCE)) {
        return Err(Error::Precondition(format!(
            "matrix loop does not close (gap {gap:.3e})"
        )));
    }
    let base = u.limit_pos().det();
    let det = u.determinant().map(move |z| z / base);
    let raw = winding_number(&det, grid)?;
    Ok(KOneClass { winding: -raw })
}

/// `u_t = [[cos(tπ/4), −sin(tπ/4)], [sin(tπ/4), cos(tπ/4)]]`.
pub fn rotation_homotopy<S: Scalar>(t: S) -> Result<Mat2<S>> {
    if !(t >= S::zero() && t <= S::one()) {
        return Err(Error::Precondition(format!(
            "rotation parameter {t} is outside [0, 1]"
        )));
    }
    let angle = t * S::FRAC_PI_4();
    let (s, c) = angle.sin_cos();
    Ok(Mat2::from_real(c, -s, s, c))
}

type PathSampler<S> = Arc<dyn Fn(S) -> FunctionMatrix<S> + Send + Sync>;

/// A path `t ∈ [0, 1] ↦ FunctionMatrix`, sampled at `steps + 1` equally spaced times.
#[derive(Clone)]
pub struct HomotopyPath<S: Scalar> {
    sample: PathSampler<S>,
    steps: usize,
}

impl<S: Scalar> fmt::Debug for HomotopyPath<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomotopyPath")
            .field("steps", &self.steps)
            .finish()
    }
}

impl<S: Scalar> HomotopyPath<S> {
    pub fn new<F>(sample: F, steps: usize) -> Result<Self>
    where
        F: Fn(S) -> FunctionMatrix<S> + Send + Sync + 'static,
    {
        if steps == 0 {
            return Err(Error::Config("a homotopy needs at least one step".into()));
        }
        Ok(HomotopyPath {
            sample: Arc::new(sample),
            steps,
        })
    }

    pub fn constant(m: FunctionMatrix<S>, steps: usize) -> Result<Self> {
        Self::new(move |_| m.clone(), steps)
    }

    /// `t ↦ u_t·P·u_tᵀ` for a constant matrix `P`.
    pub fn rotation_conjugation(p: Mat2<S>, steps: usize) -> Result<Self> {
        Self::new(
            move |t| {
                let u = rotation_homotopy(t).expect("path times lie in [0, 1]");
                FunctionMatrix::constant(u * p * u.adjoint())
            },
            steps,
        )
    }

    /// `t ↦ R_t·W·R_t*` with `R_t = diag(e^{iπt/2}, e^{−iπt/2})`. At `t = 1`
    /// this negates the off-diagonal entries of `W`.
    pub fn phase_conjugation(w: FunctionMatrix<S>, steps: usize) -> Result<Self> {
        Self::new(
            move |t| {
                let half_turn = t / lit(4.0);
                let r = Mat2::diag(unit_phase(half_turn), unit_phase(-half_turn));
                w.conjugate_by(r)
            },
            steps,
        )
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn at(&self, t: S) -> FunctionMatrix<S> {
        (self.sample)(t)
    }

    pub fn times(&self) -> Vec<S> {
        let n: S = lit(self.steps as f64);
        (0..=self.steps).map(|k| lit::<S>(k as f64) / n).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomotopyKind {
    Unitary,
    Projection,
}

/// Outcome of [`verify_homotopy`].
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyReport<S: Scalar> {
    pub pass: bool,
    pub first_violation: Option<S>,
    pub detail: String,
    /// Constant K₁ class along a unitary path.
    pub class: Option<KOneClass>,
}

/// Checks a path sample by sample. Discontinuity is an error; a sample
/// failing the unitary or projection test yields a failing report.
pub fn verify_homotopy<S: Scalar>(
    path: &HomotopyPath<S>,
    kind: HomotopyKind,
    grid: &Grid<S>,
    tol: S,
) -> Result<HomotopyReport<S>> {
    let times = path.times();
    let samples: Vec<FunctionMatrix<S>> = times.iter().map(|&t| path.at(t)).collect();
    let bound: S = lit(CONTINUITY_BOUND);
    for (k, pair) in samples.windows(2).enumerate() {
        let jump = pair[0].sup_distance(&pair[1], grid);
        if !(jump < bound) {
            return Err(Error::Path(format!(
                "discontinuity between t = {} and t = {}: sup-distance {jump:.3e}",
                times[k],
                times[k + 1]
            )));
        }
    }
    let fail = |t: S, detail: String| HomotopyReport {
        pass: false,
        first_violation: Some(t),
        detail,
        class: None,
    };
    let mut class = None;
    for (&t, m) in times.iter().zip(&samples) {
        match kind {
            HomotopyKind::Projection => {
                let d = m.projection_defect(grid);
                if !(d < tol) {
                    return Ok(fail(
                        t,
                        format!("sample is not a projection (defect {d:.3e})"),
                    ));
                }
            }
            HomotopyKind::Unitary => {
                let d = m.unitarity_defect(grid);
                if !(d < tol) {
                    return Ok(fail(t, format!("sample is not unitary (defect {d:.3e})")));
                }
                let lim_gap = (m.limit_neg() - Mat2::identity())
                    .op_norm()
                    .max((m.limit_pos() - Mat2::identity()).op_norm());
                if !(lim_gap < lit(LIMIT_TOLERANCE)) {
                    return Ok(fail(
                        t,
                        format!("limits differ from identity by {lim_gap:.3e}"),
                    ));
                }
                let c = match det_winding(m, grid) {
                    Ok(c) => c,
                    Err(e) => return Ok(fail(t, e.to_string())),
                };
                match class {
                    None => class = Some(c),
                    Some(c0) if c0 != c => {
                        return Ok(fail(t, format!("class changes from {c0} to {c}")));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(HomotopyReport {
        pass: true,
        first_violation: None,
        detail: format!("{} samples verified", samples.len()),
        class,
    })
}

/// Conjugates an exponential image by `u₁`, the endpoint of the rotation homotopy.
pub fn rotate_exp_image<S: Scalar>(w: &FunctionMatrix<S>) -> FunctionMatrix<S> {
    let u1 = rotation_homotopy(S::one()).expect("1 is in [0, 1]");
    w.conjugate_by(u1)
}

/// Where the rotation homotopy sends the regular-representation image of `p`.
pub fn rotated_projection<S: Scalar>(p: &GroupAlgebraElement<S>) -> Mat2<S> {
    let u1 = rotation_homotopy(S::one()).expect("1 is in [0, 1]");
    u1 * regular_representation(p) * u1.adjoint()
}
