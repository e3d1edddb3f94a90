//! Foliated bundles over `S¹` with discrete structure group.
//!
//! The bundle is `ℝ ×_Z F` for a fibre `F = ℝ` and a monodromy
//! diffeomorphism `φ` of finite declared order. Leaves, isotropy and
//! holonomy are computed by probing iterates of `φ`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::function_space::{Grid, DEFAULT_HALF_WIDTH};
use crate::scalar::{lit, tolerance, Scalar};

/// Tolerance for `φⁿ(r) = r`.
pub const FIXED_TOLERANCE: f64 = 1e-10;
/// Tolerance for declared fixed points.
pub const DECLARED_FIXED_TOLERANCE: f64 = 1e-12;
/// Number of one-sided neighbourhood probes.
pub const NEIGHBOURHOOD_PROBES: usize = 8;
/// Smallest neighbourhood probe offset; the others double it.
pub const NEIGHBOURHOOD_BASE_OFFSET: f64 = 1e-3;

type Monodromy<S> = Arc<dyn Fn(S) -> S + Send + Sync>;

/// A flat `ℝ`-bundle over the circle, given by its monodromy.
#[derive(Clone)]
pub struct DiscreteBundle<S: Scalar> {
    generator: Monodromy<S>,
    declared_order: u32,
    declared_fixed_points: Vec<S>,
    probe_half_width: S,
}

impl<S: Scalar> fmt::Debug for DiscreteBundle<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteBundle")
            .field("declared_order", &self.declared_order)
            .field("declared_fixed_points", &self.declared_fixed_points)
            .field("probe_half_width", &self.probe_half_width)
            .finish()
    }
}

impl<S: Scalar> DiscreteBundle<S> {
    /// Checks `φ^order = id` on `probes` and that every declared fixed point is fixed.
    pub fn new<F>(
        generator: F,
        declared_order: u32,
        declared_fixed_points: Vec<S>,
        probes: &Grid<S>,
    ) -> Result<Self>
    where
        F: Fn(S) -> S + Send + Sync + 'static,
    {
        if declared_order == 0 {
            return Err(Error::Inconsistency(
                "declared order must be positive".into(),
            ));
        }
        let bundle = DiscreteBundle {
            generator: Arc::new(generator),
            declared_order,
            declared_fixed_points,
            probe_half_width: probes.half_width(),
        };
        let tol: S = tolerance(FIXED_TOLERANCE);
        for &x in probes.points() {
            let back = bundle.iterate(x, declared_order);
            if !((back - x).abs() < tol) {
                return Err(Error::Inconsistency(format!(
                    "generator^{declared_order}({x}) = {back}, not the identity"
                )));
            }
        }
        let fixed_tol: S = tolerance(DECLARED_FIXED_TOLERANCE);
        for &x in &bundle.declared_fixed_points {
            let image = (bundle.generator)(x);
            if !((image - x).abs() < fixed_tol) {
                return Err(Error::Inconsistency(format!(
                    "declared fixed point {x} is sent to {image}"
                )));
            }
        }
        Ok(bundle)
    }

    /// The Möbius band: monodromy `r ↦ −r`, order 2, fixed point `0`.
    pub fn mobius() -> Self {
        let probes = Grid::uniform(lit(DEFAULT_HALF_WIDTH), 401).expect("valid probe grid");
        Self::new(|r: S| -r, 2, vec![S::zero()], &probes).expect("Möbius data is consistent")
    }

    /// The product foliation of the cylinder.
    pub fn trivial() -> Self {
        let probes = Grid::uniform(lit(DEFAULT_HALF_WIDTH), 401).expect("valid probe grid");
        Self::new(|r: S| r, 1, Vec::new(), &probes).expect("identity is consistent")
    }

    pub fn declared_order(&self) -> u32 {
        self.declared_order
    }

    pub fn declared_fixed_points(&self) -> &[S] {
        &self.declared_fixed_points
    }

    pub fn probe_half_width(&self) -> S {
        self.probe_half_width
    }

    pub fn apply(&self, r: S) -> S {
        (self.generator)(r)
    }

    /// `φⁿ(r)`.
    pub fn iterate(&self, r: S, n: u32) -> S {
        (0..n).fold(r, |x, _| (self.generator)(x))
    }

    fn check_range(&self, r: S) -> Result<()> {
        if r.is_finite() && r.abs() <= self.probe_half_width {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "basepoint {r} is outside the probe range [−{0}, {0}]",
                self.probe_half_width
            )))
        }
    }

    fn fixes(&self, n: u32, r: S) -> bool {
        (self.iterate(r, n) - r).abs() < tolerance(FIXED_TOLERANCE)
    }
}

/// The leaf through fibre coordinate `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leaf<S: Scalar> {
    pub basepoint: S,
    pub isotropy_index: u32,
    pub wrap_count: u32,
}

/// The holonomy group `G_r^r ≅ Z_order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HolonomyGroup {
    pub order: u32,
}

impl HolonomyGroup {
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

/// Description of the holonomy groupoid restricted to the transversal fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalGroupoidDescriptor {
    pub fiber_label: String,
    pub group_order: u32,
    pub identification_note: String,
}

/// Index of the isotropy subgroup `G_r ⊂ Z`: the least `n ≥ 1` with `φⁿ(r) = r`.
pub fn isotropy_index<S: Scalar>(bundle: &DiscreteBundle<S>, r: S) -> Result<u32> {
    bundle.check_range(r)?;
    (1..=bundle.declared_order)
        .find(|&n| bundle.fixes(n, r))
        .ok_or_else(|| {
            Error::Inconsistency(format!(
                "no iterate up to the declared order {} fixes {r}",
                bundle.declared_order
            ))
        })
}

pub fn leaf_through<S: Scalar>(bundle: &DiscreteBundle<S>, r: S) -> Result<Leaf<S>> {
    let index = isotropy_index(bundle, r)?;
    Ok(Leaf {
        basepoint: r,
        isotropy_index: index,
        wrap_count: index,
    })
}

/// Least `m > 0` in `index·Z` whose iterate fixes a punctured neighbourhood of `r`,
/// i.e. the index of the stable isotropy subgroup.
fn stable_isotropy_index<S: Scalar>(bundle: &DiscreteBundle<S>, r: S, index: u32) -> Result<u32> {
    let offsets: Vec<S> = (0..NEIGHBOURHOOD_PROBES)
        .map(|j| lit::<S>(NEIGHBOURHOOD_BASE_OFFSET * f64::from(1u32 << j)))
        .collect();
    let mut m = index;
    while m <= bundle.declared_order {
        let left = offsets.iter().all(|&d| bundle.fixes(m, r - d));
        let right = offsets.iter().all(|&d| bundle.fixes(m, r + d));
        match (left, right) {
            (true, true) => return Ok(m),
            (false, false) => {}
            _ => {
                return Err(Error::Ambiguity {
                    point: r.to_f64().unwrap_or(f64::NAN),
                    detail: format!(
                        "generator^{m} fixes the {} side but not the {} side",
                        if left { "left" } else { "right" },
                        if left { "right" } else { "left" }
                    ),
                })
            }
        }
        m += index;
    }
    Err(Error::Inconsistency(format!(
        "generator^{} does not fix a neighbourhood of {r}",
        bundle.declared_order
    )))
}

/// `G_r^r = G_r / G^r`.
pub fn holonomy_group<S: Scalar>(bundle: &DiscreteBundle<S>, r: S) -> Result<HolonomyGroup> {
    let index = isotropy_index(bundle, r)?;
    let stable = stable_isotropy_index(bundle, r, index)?;
    Ok(HolonomyGroup {
        order: stable / index,
    })
}

/// `G_N^N ≅ (F × G)/∼` over the transversal `N = π⁻¹(0) ≅ ℝ`.
pub fn transversal_groupoid<S: Scalar>(
    bundle: &DiscreteBundle<S>,
) -> TransversalGroupoidDescriptor {
    TransversalGroupoidDescriptor {
        fiber_label: "R".to_string(),
        group_order: bundle.declared_order,
        identification_note: format!(
            "G_N^N = (R x Z_{}) / ~ where (x, g) ~ (y, h) iff x = y and h^-1 g lies in the \
             stable isotropy group at x; equivalently the action groupoid R x| Z_{}",
            bundle.declared_order, bundle.declared_order
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_isotropy() {
        let b = DiscreteBundle::<f64>::mobius();
        assert_eq!(isotropy_index(&b, 1.5).unwrap(), 2);
        assert_eq!(isotropy_index(&b, 0.0).unwrap(), 1);
        assert!(matches!(
            isotropy_index(&b, 25.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn trivial_bundle_has_single_wrap() {
        let b = DiscreteBundle::<f64>::trivial();
        for r in [-4.0, 0.0, 3.3] {
            assert_eq!(isotropy_index(&b, r).unwrap(), 1);
            assert!(holonomy_group(&b, r).unwrap().is_trivial());
        }
        assert_eq!(transversal_groupoid(&b).group_order, 1);
    }

    #[test]
    fn leaves() {
        let b = DiscreteBundle::<f64>::mobius();
        assert_eq!(leaf_through(&b, 0.0).unwrap().wrap_count, 1);
        assert_eq!(leaf_through(&b, -3.2).unwrap().wrap_count, 2);
        for r in [-7.0, 0.4, 12.5] {
            let a = leaf_through(&b, r).unwrap();
            let c = leaf_through(&b, b.apply(r)).unwrap();
            assert_eq!(a.wrap_count, c.wrap_count);
            assert_eq!(a.wrap_count, a.isotropy_index);
        }
    }

    #[test]
    fn mobius_holonomy() {
        let b = DiscreteBundle::<f64>::mobius();
        assert_eq!(holonomy_group(&b, 0.0).unwrap(), HolonomyGroup { order: 2 });
        assert_eq!(holonomy_group(&b, 2.0).unwrap(), HolonomyGroup { order: 1 });
    }

    #[test]
    fn transversal_descriptor() {
        let d = transversal_groupoid(&DiscreteBundle::<f64>::mobius());
        assert_eq!(d.fiber_label, "R");
        assert_eq!(d.group_order, 2);
        assert!(d.identification_note.contains("stable isotropy"));
    }

    #[test]
    fn declared_order_is_reported_as_given() {
        // r ↦ −r also satisfies φ⁴ = id
        let probes = Grid::uniform(20.0, 201).unwrap();
        let b = DiscreteBundle::new(|r: f64| -r, 4, vec![0.0], &probes).unwrap();
        assert_eq!(transversal_groupoid(&b).group_order, 4);
        assert_eq!(isotropy_index(&b, 3.0).unwrap(), 2);
    }

    #[test]
    fn inconsistent_declarations_are_rejected() {
        let probes = Grid::uniform(20.0, 201).unwrap();
        assert!(matches!(
            DiscreteBundle::new(|r: f64| r + 1.0, 2, vec![], &probes),
            Err(Error::Inconsistency(_))
        ));
        assert!(matches!(
            DiscreteBundle::new(|r: f64| -r, 2, vec![1.0], &probes),
            Err(Error::Inconsistency(_))
        ));
    }

    #[test]
    fn one_sided_stable_isotropy_is_ambiguous() {
        // identity on the left half-line, an involution on the right
        let g = |r: f64| if r <= 0.0 { r } else { 1.0 / r };
        let probes = Grid::from_points(vec![-3.0, -1.0, 0.0, 1.0, 3.0]).unwrap();
        let b = DiscreteBundle::new(g, 2, vec![0.0], &probes).unwrap();
        assert!(matches!(
            holonomy_group(&b, 0.0),
            Err(Error::Ambiguity { .. })
        ));
    }

    #[test]
    fn exactly_one_leaf_wraps_once() {
        let b = DiscreteBundle::<f64>::mobius();
        let l = b.probe_half_width();
        let once: Vec<f64> = (0..1000)
            .map(|k| l * (2.0 * k as f64 - 1000.0) / 1000.0)
            .filter(|&r| leaf_through(&b, r).unwrap().wrap_count == 1)
            .collect();
        assert_eq!(once, vec![0.0]);
    }
}
