//! Operator-algebraic invariants of the Möbius foliation.
//!
//! The analytic modules are generic over a real [`Scalar`] (`f32` or `f64`);
//! the integer linear algebra in [`kgroup_solver`] is generic over any
//! signed [`num_integer::Integer`]. Type aliases fixed at `f64` / `i64` are
//! exported at the crate root for everyday use.

// `!(x < tol)` is deliberate throughout: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod crossed_product;
pub mod error;
pub mod foliation;
pub mod function_space;
pub mod kgroup_solver;
pub mod ktheory;
pub mod mat2;
pub mod scalar;
pub mod traces;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use crossed_product::Chart;
pub use foliation::{HolonomyGroup, TransversalGroupoidDescriptor};
pub use kgroup_solver::{ExactnessReport, IntegerScalar};
pub use ktheory::{HomotopyKind, KOneClass};

pub type Grid = function_space::Grid<f64>;
pub type RealLineFunction = function_space::RealLineFunction<f64>;
pub type FunctionMatrix = function_space::FunctionMatrix<f64>;
pub type Mat2 = mat2::Mat2<f64>;
pub type CrossedProductElement = crossed_product::CrossedProductElement<f64>;
pub type GroupAlgebraElement = crossed_product::GroupAlgebraElement<f64>;
pub type HalfLineFunction = crossed_product::HalfLineFunction<f64>;
pub type LiftProfile = ktheory::LiftProfile<f64>;
pub type HomotopyPath = ktheory::HomotopyPath<f64>;
pub type HomotopyReport = ktheory::HomotopyReport<f64>;
pub type DiscreteBundle = foliation::DiscreteBundle<f64>;
pub type Leaf = foliation::Leaf<f64>;
pub type TransverseMeasure = traces::TransverseMeasure<f64>;
pub type GroupRepresentation = traces::GroupRepresentation<f64>;
pub type TraceFunctional = traces::TraceFunctional<f64>;

pub type IntegerMatrix = kgroup_solver::IntegerMatrix<i64>;
pub type AbelianGroup = kgroup_solver::AbelianGroup<i64>;
pub type IntegerMap = kgroup_solver::IntegerMap<i64>;
pub type KernelImage = kgroup_solver::KernelImage<i64>;
pub type SmithDecomposition = kgroup_solver::SmithDecomposition<i64>;
pub type SixTermSolution = kgroup_solver::SixTermSolution<i64>;
