//! Finitely generated abelian groups, Smith normal form, and the bookkeeping
//! of a six-term exact sequence whose `K₀(J)` and `K₁(E/J)` corners vanish.
//!
//! All arithmetic is exact and generic over signed integer types
//! (`i64`, `i128`, `num_bigint::BigInt`, ...).

use std::fmt::{self, Debug, Display};

use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};

/// Exact integer scalar for the lattice computations.
pub trait IntegerScalar:
    Integer + Signed + Clone + Debug + Display + Send + Sync + 'static
{
}

impl<T> IntegerScalar for T where
    T: Integer + Signed + Clone + Debug + Display + Send + Sync + 'static
{
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix<I: IntegerScalar> {
    rows: usize,
    cols: usize,
    data: Vec<I>,
}

impl<I: IntegerScalar> IntegerMatrix<I> {
    pub fn new(rows: usize, cols: usize, data: Vec<I>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Config(format!(
                "{rows}×{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntegerMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<I>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Config("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![I::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, I::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &I {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: I) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vec<I> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<I> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<I>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in integer matrix product"
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = I::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(I::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[target] += factor · row[source]`.
    fn add_row(&mut self, target: usize, source: usize, factor: &I) {
        for j in 0..self.cols {
            let v = self.get(target, j).clone() + factor.clone() * self.get(source, j).clone();
            self.set(target, j, v);
        }
    }

    /// `col[target] += factor · col[source]`.
    fn add_col(&mut self, target: usize, source: usize, factor: &I) {
        for i in 0..self.rows {
            let v = self.get(i, target).clone() + factor.clone() * self.get(i, source).clone();
            self.set(i, target, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }
}

impl<I: IntegerScalar> Display for IntegerMatrix<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `Z^free_rank ⊕ Z/t₁ ⊕ … ⊕ Z/t_k` with `tᵢ ≥ 2` and `tᵢ | tᵢ₊₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup<I: IntegerScalar> {
    free_rank: usize,
    torsion: Vec<I>,
}

impl<I: IntegerScalar> AbelianGroup<I> {
    pub fn new(free_rank: usize, torsion: Vec<I>) -> Result<Self> {
        let two = I::one() + I::one();
        if let Some(t) = torsion.iter().find(|t| **t < two) {
            return Err(Error::Config(format!("torsion coefficient {t} is below 2")));
        }
        if torsion.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::Config(
                "torsion coefficients are not a divisibility chain".into(),
            ));
        }
        Ok(AbelianGroup { free_rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[I] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl<I: IntegerScalar> Display for AbelianGroup<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            n => parts.push(format!("Z^{n}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `D = U·M·V` with `U`, `V` unimodular and `D` diagonal in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition<I: IntegerScalar> {
    pub d: IntegerMatrix<I>,
    pub u: IntegerMatrix<I>,
    pub v: IntegerMatrix<I>,
    /// `U⁻¹`, kept alongside `U` so image bases need no inversion.
    pub u_inv: IntegerMatrix<I>,
}

impl<I: IntegerScalar> SmithDecomposition<I> {
    /// Nonzero diagonal entries of `D`.
    pub fn invariant_factors(&self) -> Vec<I> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form by repeated minimal-pivot elimination.
pub fn smith_normal_form<I: IntegerScalar>(m: &IntegerMatrix<I>) -> SmithDecomposition<I> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut u_inv = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    // row operations act on (d, u) from the left and on u_inv from the right
    let row_swap =
        |d: &mut IntegerMatrix<I>, u: &mut IntegerMatrix<I>, ui: &mut IntegerMatrix<I>, a, b| {
            d.swap_rows(a, b);
            u.swap_rows(a, b);
            ui.swap_cols(a, b);
        };
    let row_add = |d: &mut IntegerMatrix<I>,
                   u: &mut IntegerMatrix<I>,
                   ui: &mut IntegerMatrix<I>,
                   target: usize,
                   source: usize,
                   k: &I| {
        d.add_row(target, source, k);
        u.add_row(target, source, k);
        ui.add_col(source, target, &-k.clone());
    };

    for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !d.get(i, j).is_zero())
                .min_by(|&(a, b), &(c, e)| d.get(a, b).abs().cmp(&d.get(c, e).abs()));
            let Some((pi, pj)) = pivot else { break };
            row_swap(&mut d, &mut u, &mut u_inv, t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t).clone() / p.clone();
                if !q.is_zero() {
                    row_add(&mut d, &mut u, &mut u_inv, i, t, &-q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = d.get(t, j).clone() / p.clone();
                if !q.is_zero() {
                    d.add_col(j, t, &-q.clone());
                    v.add_col(j, t, &-q);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => row_add(&mut d, &mut u, &mut u_inv, t, i, &I::one()),
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    SmithDecomposition { d, u, v, u_inv }
}

/// Canonical (Hermite) basis of the lattice spanned by `vectors`: echelon
/// form with positive pivots and reduced entries above each pivot.
pub fn lattice_basis<I: IntegerScalar>(vectors: &[Vec<I>], dim: usize) -> Vec<Vec<I>> {
    let mut rows: Vec<Vec<I>> = vectors.to_vec();
    let mut r = 0;
    for col in 0..dim {
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(pi) = pivot else { break };
            rows.swap(r, pi);
            let mut done = true;
            for i in r + 1..rows.len() {
                let q = rows[i][col].clone() / rows[r][col].clone();
                let pivot_row = rows[r].clone();
                subtract_multiple(&mut rows[i], &pivot_row, &q);
                done &= rows[i][col].is_zero();
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                rows[r].iter_mut().for_each(|x| *x = -x.clone());
            }
            for i in 0..r {
                let q = rows[i][col].div_floor(&rows[r][col]);
                let pivot_row = rows[r].clone();
                subtract_multiple(&mut rows[i], &pivot_row, &q);
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

fn subtract_multiple<I: IntegerScalar>(target: &mut [I], source: &[I], q: &I) {
    for (x, y) in target.iter_mut().zip(source) {
        *x = x.clone() - q.clone() * y.clone();
    }
}

/// A homomorphism `Z^source → Z^target` given by its matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMap<I: IntegerScalar> {
    matrix: IntegerMatrix<I>,
    source: AbelianGroup<I>,
    target: AbelianGroup<I>,
}

impl<I: IntegerScalar> IntegerMap<I> {
    /// Free source `Z^cols` and free target `Z^rows`.
    pub fn new(matrix: IntegerMatrix<I>) -> Self {
        let source = AbelianGroup::free(matrix.cols());
        let target = AbelianGroup::free(matrix.rows());
        IntegerMap {
            matrix,
            source,
            target,
        }
    }

    pub fn between(
        matrix: IntegerMatrix<I>,
        source: AbelianGroup<I>,
        target: AbelianGroup<I>,
    ) -> Result<Self> {
        if !source.is_free() || !target.is_free() {
            return Err(Error::Config(
                "integer maps need free source and target".into(),
            ));
        }
        if matrix.cols() != source.free_rank() || matrix.rows() != target.free_rank() {
            return Err(Error::Config(format!(
                "{}×{} matrix does not map {source} to {target}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(IntegerMap {
            matrix,
            source,
            target,
        })
    }

    pub fn matrix(&self) -> &IntegerMatrix<I> {
        &self.matrix
    }

    pub fn source(&self) -> &AbelianGroup<I> {
        &self.source
    }

    pub fn target(&self) -> &AbelianGroup<I> {
        &self.target
    }
}

/// Kernel, image and cokernel of an [`IntegerMap`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelImage<I: IntegerScalar> {
    pub kernel: AbelianGroup<I>,
    /// Canonical basis of the kernel, in source coordinates.
    pub kernel_basis: Vec<Vec<I>>,
    pub image: AbelianGroup<I>,
    /// Canonical basis of the image, in target coordinates.
    pub image_basis: Vec<Vec<I>>,
    pub cokernel: AbelianGroup<I>,
    pub snf: SmithDecomposition<I>,
}

pub fn kernel_image<I: IntegerScalar>(f: &IntegerMap<I>) -> KernelImage<I> {
    let m = f.matrix();
    let snf = smith_normal_form(m);
    let factors = snf.invariant_factors();
    let r = factors.len();
    let kernel_vectors: Vec<Vec<I>> = (r..m.cols()).map(|j| snf.v.column(j)).collect();
    let image_vectors: Vec<Vec<I>> = factors
        .iter()
        .enumerate()
        .map(|(i, d)| {
            snf.u_inv
                .column(i)
                .into_iter()
                .map(|x| x * d.clone())
                .collect()
        })
        .collect();
    let torsion: Vec<I> = factors.iter().filter(|d| !d.is_one()).cloned().collect();
    KernelImage {
        kernel: AbelianGroup::free(m.cols() - r),
        kernel_basis: lattice_basis(&kernel_vectors, m.cols()),
        image: AbelianGroup::free(r),
        image_basis: lattice_basis(&image_vectors, m.rows()),
        cokernel: AbelianGroup {
            free_rank: m.rows() - r,
            torsion,
        },
        snf,
    }
}

/// Per-node exactness of the reconstructed sequence
/// `0 → K₀(E) → K₀(E/J) → K₁(J) → K₁(E) → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactnessReport {
    /// `K₀(E) → K₀(E/J)` is injective.
    pub at_k0_middle: bool,
    /// image of `K₀(E)` equals `ker exp`, and the kernel is saturated.
    pub at_k0_quotient: bool,
    /// `im exp` equals the kernel of `K₁(J) → K₁(E)`.
    pub at_k1_ideal: bool,
    /// `K₁(J) → K₁(E)` is onto.
    pub at_k1_middle: bool,
}

impl ExactnessReport {
    pub fn holds(&self) -> bool {
        self.at_k0_middle && self.at_k0_quotient && self.at_k1_ideal && self.at_k1_middle
    }
}

/// The middle groups of the six-term sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SixTermSolution<I: IntegerScalar> {
    pub k0_middle: AbelianGroup<I>,
    /// Generators of `K₀(E)` as integer combinations of the `K₀(E/J)` generators.
    pub k0_generators: Vec<Vec<I>>,
    pub k1_middle: AbelianGroup<I>,
    pub exp_image: AbelianGroup<I>,
    pub exactness: ExactnessReport,
    pub notes: Vec<String>,
}

/// Solves `0 → K₀(E) → K₀(E/J) →exp K₁(J) → K₁(E) → 0` for `K₀(E)` and `K₁(E)`.
///
/// Only the regime with `K₀(J) = K₁(E/J) = 0` determines the middle groups.
pub fn solve_six_term<I: IntegerScalar>(
    k0_quotient: &AbelianGroup<I>,
    k1_ideal: &AbelianGroup<I>,
    exp: &IntegerMap<I>,
    k0_ideal: &AbelianGroup<I>,
    k1_quotient: &AbelianGroup<I>,
) -> Result<SixTermSolution<I>> {
    let nonzero: Vec<String> = [("K0(J)", k0_ideal), ("K1(E/J)", k1_quotient)]
        .into_iter()
        .filter(|(_, g)| !g.is_zero())
        .map(|(name, g)| format!("{name} = {g}"))
        .collect();
    if !nonzero.is_empty() {
        return Err(Error::UnderDetermined(nonzero.join(", ")));
    }
    if exp.source() != k0_quotient || exp.target() != k1_ideal {
        return Err(Error::Config(format!(
            "exp maps {} → {}, expected {k0_quotient} → {k1_ideal}",
            exp.source(),
            exp.target()
        )));
    }
    let ki = kernel_image(exp);
    let exactness = check_exactness(exp, &ki);
    let mut notes = Vec::new();
    if ki.image != ki.cokernel {
        notes.push(format!(
            "K1 of the middle algebra is coker(exp) = {}; im(exp) = {} is a different group",
            ki.cokernel, ki.image
        ));
    }
    Ok(SixTermSolution {
        k0_middle: ki.kernel.clone(),
        k0_generators: ki.kernel_basis.clone(),
        k1_middle: ki.cokernel.clone(),
        exp_image: ki.image.clone(),
        exactness,
        notes,
    })
}

fn check_exactness<I: IntegerScalar>(exp: &IntegerMap<I>, ki: &KernelImage<I>) -> ExactnessReport {
    let m = exp.matrix();
    let (src, tgt) = (m.cols(), m.rows());
    let incl = IntegerMatrix::from_columns(src, &ki.kernel_basis);

    // injective with unit invariant factors: the kernel sublattice is saturated
    let incl_snf = smith_normal_form(&incl);
    let at_k0_middle = incl_snf.rank() == ki.kernel_basis.len();
    let saturated = incl_snf.invariant_factors().iter().all(|d| d.is_one());
    let at_k0_quotient =
        m.mul(&incl).is_zero() && saturated && ki.kernel_basis.len() + ki.image.free_rank() == src;

    // projection onto the cokernel: x ↦ (Ux)_i mod dᵢ for i < r, (Ux)_i for i ≥ r
    let factors = ki.snf.invariant_factors();
    let r = factors.len();
    let um = ki.snf.u.mul(m);
    let kills_image = (0..tgt).all(|i| {
        (0..src).all(|j| {
            let x = um.get(i, j);
            if i < r {
                x.is_multiple_of(&factors[i])
            } else {
                x.is_zero()
            }
        })
    });
    let kernel_of_projection: Vec<Vec<I>> = (0..r)
        .map(|i| {
            ki.snf
                .u_inv
                .column(i)
                .into_iter()
                .map(|x| x * factors[i].clone())
                .collect()
        })
        .collect();
    let column_lattice: Vec<Vec<I>> = (0..src).map(|j| m.column(j)).collect();
    let at_k1_ideal = kills_image
        && lattice_basis(&kernel_of_projection, tgt) == lattice_basis(&column_lattice, tgt);
    let at_k1_middle = ki.snf.u.mul(&ki.snf.u_inv) == IntegerMatrix::identity(tgt);

    ExactnessReport {
        at_k0_middle,
        at_k0_quotient,
        at_k1_ideal,
        at_k1_middle,
    }
}
