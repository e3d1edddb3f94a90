use mobius_core::crossed_product::{
    convolve, ev0, group_algebra_product, involution, psi_iso, CrossedProductElement,
    GroupAlgebraElement,
};
use mobius_core::function_space::{
    matrix_adjoint, matrix_product, pointwise_unitary_exponential, sup_distance, FunctionMatrix,
    Grid, RealLineFunction,
};
use mobius_core::ktheory::{
    det_winding, exponential_boundary, lift_projection, minimal_projections, scaled_logistic_theta,
    winding_number, LiftProfile,
};
use mobius_core::mat2::Mat2;
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

#[derive(Debug, Clone, Copy)]
struct Bump {
    amp: (f64, f64),
    width: f64,
    centre: f64,
}

fn bump() -> impl Strategy<Value = Bump> {
    ((-1.0..1.0f64, -1.0..1.0f64), 0.3..2.0f64, -4.0..4.0f64)
        .prop_map(|(amp, width, centre)| Bump { amp, width, centre })
}

impl Bump {
    fn function(self) -> RealLineFunction<f64> {
        let a = C::new(self.amp.0, self.amp.1);
        RealLineFunction::vanishing(move |x: f64| {
            a * (-self.width * (x - self.centre).powi(2)).exp()
        })
    }

    /// Same bump multiplied by `x²`, so it vanishes at the fixed point.
    fn ideal_function(self) -> RealLineFunction<f64> {
        let f = self.function();
        RealLineFunction::vanishing(move |x: f64| f.evaluate(x) * x * x)
    }

    fn real_function(self) -> RealLineFunction<f64> {
        let f = self.function();
        RealLineFunction::vanishing(move |x: f64| C::new(f.evaluate(x).re, 0.0))
    }
}

fn coarse_grid() -> Grid<f64> {
    Grid::uniform(20.0, 801).unwrap()
}

fn element(e: Bump, f: Bump) -> CrossedProductElement<f64> {
    CrossedProductElement::new(e.function(), f.function(), C::new(0.0, 0.0)).unwrap()
}

fn ideal_element(e: Bump, f: Bump) -> CrossedProductElement<f64> {
    CrossedProductElement::new(e.ideal_function(), f.ideal_function(), C::new(0.0, 0.0)).unwrap()
}

fn matrix(b: [Bump; 4]) -> FunctionMatrix<f64> {
    FunctionMatrix::new([
        [b[0].function(), b[1].function()],
        [b[2].function(), b[3].function()],
    ])
}

fn grid_distance_in_log_coordinates(a: &FunctionMatrix<f64>, b: &FunctionMatrix<f64>) -> f64 {
    a.sup_distance(b, &Grid::standard())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn flip_is_an_order_two_automorphism(f in bump(), g in bump()) {
        let grid = coarse_grid();
        let (f, g) = (f.function(), g.function());
        prop_assert!(sup_distance(&(&f * &g).flip(), &(&f.flip() * &g.flip()), &grid) < 1e-12);
        prop_assert!(sup_distance(&f.flip().flip(), &f, &grid) < 1e-15);
    }

    #[test]
    fn matrix_ring_axioms(a in [bump(), bump(), bump(), bump()],
                          b in [bump(), bump(), bump(), bump()],
                          c in [bump(), bump(), bump(), bump()]) {
        let grid = coarse_grid();
        let (a, b, c) = (matrix(a), matrix(b), matrix(c));
        let left = matrix_product(&matrix_product(&a, &b), &c);
        let right = matrix_product(&a, &matrix_product(&b, &c));
        prop_assert!(left.sup_distance(&right, &grid) < 1e-12);
        let distributed = matrix_product(&a, &b).add(&matrix_product(&a, &c));
        prop_assert!(matrix_product(&a, &b.add(&c)).sup_distance(&distributed, &grid) < 1e-12);
        let adj = matrix_adjoint(&matrix_product(&a, &b));
        let swapped = matrix_product(&matrix_adjoint(&b), &matrix_adjoint(&a));
        prop_assert!(adj.sup_distance(&swapped, &grid) < 1e-12);
    }

    #[test]
    fn unitary_exponential_is_unitary(d1 in bump(), d2 in bump(), off in bump()) {
        let grid = coarse_grid();
        let o = off.function();
        let h = FunctionMatrix::new([[d1.real_function(), o.clone()], [o.conj(), d2.real_function()]]);
        let u = pointwise_unitary_exponential(&h, &grid).unwrap();
        prop_assert!(u.unitarity_defect(&grid) < 1e-9);
    }

    #[test]
    fn commuting_projection_exponential(f in bump(), angle in 0.0..std::f64::consts::PI) {
        let grid = coarse_grid();
        let (s, c) = angle.sin_cos();
        let p = Mat2::from_real(c * c, c * s, c * s, s * s);
        let f = f.real_function();
        let h = FunctionMatrix::constant(p);
        let fh = FunctionMatrix::new([
            [&f * h.entry(0, 0), &f * h.entry(0, 1)],
            [&f * h.entry(1, 0), &f * h.entry(1, 1)],
        ]);
        let lhs = pointwise_unitary_exponential(&fh, &grid).unwrap();
        let phase = f.map(|z| C::from_polar(1.0, std::f64::consts::TAU * z.re));
        let rhs = FunctionMatrix::from_pointwise(
            move |x| p.scale(phase.evaluate(x)) + (Mat2::identity() - p),
            Mat2::identity(),
            Mat2::identity(),
        );
        prop_assert!(lhs.sup_distance(&rhs, &grid) < 1e-9);
    }

    #[test]
    fn crossed_product_star_algebra(fe in bump(), fs in bump(), ge in bump(), gs in bump(), lam in -2.0..2.0f64) {
        let grid = coarse_grid();
        let f = element(fe, fs).add(&CrossedProductElement::scalar(C::new(lam, 0.5)));
        let g = element(ge, gs);
        let lhs = involution(&convolve(&f, &g));
        let rhs = convolve(&involution(&g), &involution(&f));
        prop_assert!(lhs.distance(&rhs, &grid) < 1e-10);
        prop_assert!(involution(&involution(&f)).distance(&f, &grid) < 1e-15);
        let hom = ev0(&convolve(&f, &g)).distance(&group_algebra_product(&ev0(&f), &ev0(&g)));
        prop_assert!(hom < 1e-12);
    }

    #[test]
    fn psi_is_multiplicative(fe in bump(), fs in bump(), ge in bump(), gs in bump()) {
        let (f, g) = (ideal_element(fe, fs), ideal_element(ge, gs));
        let lhs = psi_iso(&convolve(&f, &g)).unwrap();
        let rhs = matrix_product(&psi_iso(&f).unwrap(), &psi_iso(&g).unwrap());
        prop_assert!(grid_distance_in_log_coordinates(&lhs, &rhs) < 1e-10);
        let star = psi_iso(&involution(&f)).unwrap();
        prop_assert!(grid_distance_in_log_coordinates(&star, &matrix_adjoint(&psi_iso(&f).unwrap())) < 1e-12);
    }

    #[test]
    fn winding_is_additive(j in -3i64..=3, k in -3i64..=3, a in 0.5..3.0f64, b in 0.5..3.0f64) {
        let grid = Grid::standard();
        let blaschke = |c: f64, n: i64| {
            RealLineFunction::new(
                move |x: f64| (C::new(x, -c) / C::new(x, c)).powi(n as i32),
                C::new(1.0, 0.0),
                C::new(1.0, 0.0),
            )
        };
        let (u, v) = (blaschke(a, j), blaschke(b, k));
        let wu = winding_number(&u, &grid).unwrap();
        let wv = winding_number(&v, &grid).unwrap();
        prop_assert_eq!(wu, j);
        prop_assert_eq!(winding_number(&(&u * &v), &grid).unwrap(), wu + wv);
    }

    #[test]
    fn boundary_class_is_independent_of_the_profile(rate in 0.5..3.0f64) {
        let grid = Grid::standard();
        let profile = LiftProfile::from_theta(scaled_logistic_theta(rate)).unwrap();
        let (pp, pm) = minimal_projections();
        for p in [pp, pm] {
            let w = exponential_boundary(&lift_projection(&p, &profile).unwrap(), &grid).unwrap();
            prop_assert_eq!(det_winding(&w, &grid).unwrap().winding, 1);
        }
        let one = lift_projection(&GroupAlgebraElement::unit(), &profile).unwrap();
        let w = exponential_boundary(&one, &grid).unwrap();
        prop_assert_eq!(det_winding(&w, &grid).unwrap().winding, 2);
    }
}

#[test]
fn boundary_is_additive_over_minimal_projections() {
    let grid = Grid::standard();
    let profile = LiftProfile::logistic();
    let (pp, pm) = minimal_projections();
    let class = |p: &GroupAlgebraElement<f64>| {
        let w = exponential_boundary(&lift_projection(p, &profile).unwrap(), &grid).unwrap();
        det_winding(&w, &grid).unwrap().winding
    };
    assert_eq!(class(&pp) + class(&pm), class(&pp.add(&pm)));
}

#[test]
fn single_precision_pipeline() {
    let grid = Grid::<f32>::standard();
    let profile = LiftProfile::<f32>::logistic();
    let (pp, _) = minimal_projections::<f32>();
    let w = exponential_boundary(&lift_projection(&pp, &profile).unwrap(), &grid).unwrap();
    assert!(w.unitarity_defect(&grid) < 1e-5);
    assert_eq!(det_winding(&w, &grid).unwrap().winding, 1);
}
