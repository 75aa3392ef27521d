//! Differential graded Lie algebras given by structure constants.
//!
//! Conventions: the differential has degree −1, the bracket has degree 0, and the
//! graded Jacobi identity is checked in the form
//!
//! ```text
//! (−1)^{pl}[x,[y,z]] + (−1)^{pq}[y,[z,x]] + (−1)^{ql}[z,[x,y]] = 0
//! ```
//!
//! for `x, y, z` of degrees `p, q, l`.

mod cone;
mod free;
mod model;
mod morphism;

use std::collections::BTreeMap;

use num_traits::Zero;

pub use cone::{cone, Cone};
pub use free::{free_dgla, free_dgla_map, FreeDglaPresentation, Limits};
pub use model::{
    disc_and_boundary, generating_cofibration, is_fibration, is_weak_equivalence, lift_generator,
    DiscAndBoundary, FibrationReport, GeneratingCofibration,
};
pub use morphism::DgLieMorphism;

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::graded::{GradedLinearMap, GradedVectorSpace};
use crate::matrix::Matrix;
use crate::report::{Axiom, ValidationReport};
use crate::scalar::{axpy, is_zero_vector, koszul, sign, zero_vector, Scalar, Vector};

/// One structure constant: `[e_left, e_right]` has coefficient `coeff` on `e_output`.
/// Indices are global basis indices of the underlying space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketEntry {
    pub left: usize,
    pub right: usize,
    pub output: usize,
    pub coeff: Scalar,
}

/// Unvalidated dg-Lie structure data.
///
/// Bracket entries may be given for either order of a pair; an absent order is filled
/// in by graded antisymmetry, while two given orders must agree with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLieData {
    pub space: GradedVectorSpace,
    pub differential: GradedLinearMap,
    pub bracket: Vec<BracketEntry>,
}

type SparseImage = Vec<(usize, Scalar)>;

/// A validated dg-Lie algebra.
///
/// Structure constants are stored for pairs `a < b` (global order) and for the
/// diagonal `a = a` when `a` is odd; every other value follows from antisymmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLieAlgebra {
    complex: ChainComplex,
    degrees: Vec<i32>,
    table: BTreeMap<(usize, usize), SparseImage>,
}

fn sparse(v: &[Scalar]) -> SparseImage {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// The bracket as a full table over ordered pairs, read from raw data.
struct RawTable {
    n: usize,
    degrees: Vec<i32>,
    given: BTreeMap<(usize, usize), Vector>,
}

impl RawTable {
    fn from_data(data: &DgLieData) -> Result<Self> {
        let n = data.space.total_dim();
        if data.differential.shift() != -1
            || data.differential.source() != &data.space
            || data.differential.target() != &data.space
        {
            return Err(Error::MalformedInput("differential must be a degree -1 endomorphism of the space".into()));
        }
        let degrees = data.space.degree_table();
        let mut given: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for e in &data.bracket {
            if e.left >= n || e.right >= n || e.output >= n {
                return Err(Error::MalformedInput("bracket entry refers to a missing basis element".into()));
            }
            if degrees[e.output] != degrees[e.left] + degrees[e.right] {
                return Err(Error::MalformedInput(format!(
                    "bracket [{}, {}] cannot have a component on {} (degree {} ≠ {} + {})",
                    data.space.display_label(e.left),
                    data.space.display_label(e.right),
                    data.space.display_label(e.output),
                    degrees[e.output],
                    degrees[e.left],
                    degrees[e.right]
                )));
            }
            let v = given.entry((e.left, e.right)).or_insert_with(|| zero_vector(n));
            v[e.output] += &e.coeff;
        }
        Ok(RawTable { n, degrees, given })
    }

    fn bracket(&self, a: usize, b: usize) -> Vector {
        if let Some(v) = self.given.get(&(a, b)) {
            return v.clone();
        }
        if let Some(v) = self.given.get(&(b, a)) {
            let s = -sign(koszul(self.degrees[a], self.degrees[b]));
            return v.iter().map(|c| &s * c).collect();
        }
        zero_vector(self.n)
    }

    fn bracket_vec(&self, a: usize, v: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.n);
        for (b, c) in v.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.bracket(a, b));
            }
        }
        out
    }

    fn vec_bracket(&self, v: &[Scalar], b: usize) -> Vector {
        let mut out = zero_vector(self.n);
        for (a, c) in v.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.bracket(a, b));
            }
        }
        out
    }
}

/// Checks every dg-Lie axiom on basis tuples and reports each failure with its
/// witness and defect. Jacobi is evaluated on unordered triples in lexicographic order.
pub fn validate_dgla(data: &DgLieData) -> Result<ValidationReport> {
    let table = RawTable::from_data(data)?;
    let space = &data.space;
    let n = table.n;
    let deg = &table.degrees;
    let d = data.differential.global_matrix();
    let label = |i: usize| space.display_label(i);
    let mut report = ValidationReport::default();

    let dd = d.mul(&d);
    for x in 0..n {
        let defect = dd.column(x);
        if !is_zero_vector(&defect) {
            report.push(Axiom::DifferentialSquare, vec![label(x)], defect);
        }
    }

    for a in 0..n {
        for b in a..n {
            let (p, q) = (deg[a], deg[b]);
            let both_given = table.given.contains_key(&(a, b)) && table.given.contains_key(&(b, a));
            let defect = if a == b {
                match table.given.get(&(a, a)) {
                    Some(v) if !koszul(p, p) => v.iter().map(|c| c + c).collect(),
                    _ => continue,
                }
            } else if both_given {
                let mut v = table.given[&(a, b)].clone();
                axpy(&mut v, &sign(koszul(p, q)), &table.given[&(b, a)]);
                v
            } else {
                continue;
            };
            if !is_zero_vector(&defect) {
                report.push(Axiom::Antisymmetry, vec![label(a), label(b)], defect);
            }
        }
    }

    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let (p, q, l) = (deg[a], deg[b], deg[c]);
                if space.dim(p + q + l) == 0 {
                    continue;
                }
                let mut defect = zero_vector(n);
                axpy(&mut defect, &sign(koszul(p, l)), &table.bracket_vec(a, &table.bracket(b, c)));
                axpy(&mut defect, &sign(koszul(p, q)), &table.bracket_vec(b, &table.bracket(c, a)));
                axpy(&mut defect, &sign(koszul(q, l)), &table.bracket_vec(c, &table.bracket(a, b)));
                if !is_zero_vector(&defect) {
                    report.push(Axiom::Jacobi, vec![label(a), label(b), label(c)], defect);
                }
            }
        }
    }

    for a in 0..n {
        for b in a..n {
            let (p, q) = (deg[a], deg[b]);
            if space.dim(p + q - 1) == 0 {
                continue;
            }
            // d[a,b] − [da,b] − (−1)^p [a,db]
            let mut defect = d.apply(&table.bracket(a, b));
            axpy(&mut defect, &-Scalar::from_integer(1.into()), &table.vec_bracket(&d.column(a), b));
            axpy(&mut defect, &-sign(p.rem_euclid(2) == 1), &table.bracket_vec(a, &d.column(b)));
            if !is_zero_vector(&defect) {
                report.push(Axiom::Derivation, vec![label(a), label(b)], defect);
            }
        }
    }

    Ok(report)
}

impl DgLieAlgebra {
    /// Validates `data` and stores its canonical structure constants.
    pub fn new(data: DgLieData) -> Result<Self> {
        let report = validate_dgla(&data)?;
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        let raw = RawTable::from_data(&data)?;
        let mut table = BTreeMap::new();
        for a in 0..raw.n {
            for b in a..raw.n {
                if a == b && !koszul(raw.degrees[a], raw.degrees[a]) {
                    continue;
                }
                let v = raw.bracket(a, b);
                if !is_zero_vector(&v) {
                    table.insert((a, b), sparse(&v));
                }
            }
        }
        let complex = ChainComplex::new(data.differential)?;
        Ok(DgLieAlgebra { complex, degrees: raw.degrees, table })
    }

    /// The abelian dg-Lie algebra on a chain complex.
    pub fn abelian(complex: ChainComplex) -> Self {
        let degrees = complex.space().degree_table();
        DgLieAlgebra { complex, degrees, table: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Self::abelian(ChainComplex::zero_differential(GradedVectorSpace::zero()))
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn space(&self) -> &GradedVectorSpace {
        self.complex.space()
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, a: usize) -> i32 {
        self.degrees[a]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_empty()
    }

    pub fn label(&self, a: usize) -> String {
        self.space().display_label(a)
    }

    /// `[e_a, e_b]` in global coordinates.
    pub fn bracket_basis(&self, a: usize, b: usize) -> Vector {
        let mut out = zero_vector(self.dim());
        self.add_bracket_basis(&mut out, &Scalar::from_integer(1.into()), a, b);
        out
    }

    fn add_bracket_basis(&self, out: &mut [Scalar], scale: &Scalar, a: usize, b: usize) {
        let (key, s) = if a <= b {
            ((a, b), Scalar::from_integer(1.into()))
        } else {
            ((b, a), -sign(koszul(self.degrees[a], self.degrees[b])))
        };
        if let Some(image) = self.table.get(&key) {
            let factor = scale * s;
            for (k, c) in image {
                out[*k] += &factor * c;
            }
        }
    }

    /// Bilinear extension of the bracket to arbitrary global vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim());
        if self.table.is_empty() {
            return out;
        }
        for (a, ca) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, cb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                self.add_bracket_basis(&mut out, &(ca * cb), a, b);
            }
        }
        out
    }

    pub fn d(&self, x: &[Scalar]) -> Vector {
        self.complex.differential().apply_global(x)
    }

    /// Image of `d` on the basis element `a`.
    pub fn d_basis(&self, a: usize) -> Vector {
        let mut e = zero_vector(self.dim());
        e[a] = Scalar::from_integer(1.into());
        self.d(&e)
    }

    /// Stored structure constants as entries over canonical pairs.
    pub fn entries(&self) -> Vec<BracketEntry> {
        self.table
            .iter()
            .flat_map(|(&(left, right), image)| {
                image.iter().map(move |(output, coeff)| BracketEntry { left, right, output: *output, coeff: coeff.clone() })
            })
            .collect()
    }

    pub fn to_data(&self) -> DgLieData {
        DgLieData {
            space: self.space().clone(),
            differential: self.complex.differential().clone(),
            bracket: self.entries(),
        }
    }

    /// Transports the structure along a per-degree change of basis; column `i` of the
    /// block in degree `n` gives the new `i`-th basis vector in old coordinates.
    pub fn change_basis(&self, blocks: &BTreeMap<i32, Matrix>) -> Result<Self> {
        let space = self.space();
        let n = self.dim();
        let mut p = Matrix::zeros(n, n);
        for deg in space.degrees() {
            let block = blocks.get(&deg).cloned().unwrap_or_else(|| Matrix::identity(space.dim(deg)));
            let r = space.range(deg);
            if block.rows() != r.len() || block.cols() != r.len() {
                return Err(Error::DimensionMismatch(format!("basis change block at degree {deg}")));
            }
            for i in 0..r.len() {
                for j in 0..r.len() {
                    p.set(r.start + i, r.start + j, block.get(i, j).clone());
                }
            }
        }
        let p_inv = p.inverse().ok_or_else(|| Error::MalformedInput("basis change is not invertible".into()))?;
        let columns: Vec<Vector> = (0..n).map(|i| p.column(i)).collect();
        let d_new: Vec<Vector> = columns.iter().map(|c| p_inv.apply(&self.d(c))).collect();
        let differential = GradedLinearMap::from_global_images(space.clone(), space.clone(), -1, &d_new)?;
        let mut bracket = Vec::new();
        for a in 0..n {
            for b in a..n {
                let image = p_inv.apply(&self.bracket(&columns[a], &columns[b]));
                for (k, c) in image.into_iter().enumerate() {
                    if !c.is_zero() {
                        bracket.push(BracketEntry { left: a, right: b, output: k, coeff: c });
                    }
                }
            }
        }
        DgLieAlgebra::new(DgLieData { space: space.clone(), differential, bracket })
    }

    /// `g ⊕ h` with componentwise differential and bracket (and `[g, h] = 0`).
    pub fn direct_sum(&self, other: &DgLieAlgebra) -> Result<Self> {
        let (space, left_index, right_index) = sum_space(self.space(), other.space())?;
        let n = space.total_dim();
        let mut images = vec![zero_vector(n); n];
        for a in 0..self.dim() {
            for (k, c) in self.d_basis(a).into_iter().enumerate() {
                images[left_index[a]][left_index[k]] = c;
            }
        }
        for a in 0..other.dim() {
            for (k, c) in other.d_basis(a).into_iter().enumerate() {
                images[right_index[a]][right_index[k]] = c;
            }
        }
        let differential = GradedLinearMap::from_global_images(space.clone(), space.clone(), -1, &images)?;
        let mut bracket = Vec::new();
        for e in self.entries() {
            bracket.push(BracketEntry { left: left_index[e.left], right: left_index[e.right], output: left_index[e.output], coeff: e.coeff });
        }
        for e in other.entries() {
            bracket.push(BracketEntry { left: right_index[e.left], right: right_index[e.right], output: right_index[e.output], coeff: e.coeff });
        }
        DgLieAlgebra::new(DgLieData { space, differential, bracket })
    }
}

/// `base`, primed as often as needed to avoid the labels already in `taken`.
pub(crate) fn fresh_label(taken: &[String], base: &str) -> String {
    let mut label = base.to_string();
    while taken.contains(&label) {
        label.push('\'');
    }
    label
}

/// The direct sum of two graded spaces (left summand first in each degree) with the
/// global index of each summand's basis inside the sum.
pub(crate) fn sum_space(
    left: &GradedVectorSpace,
    right: &GradedVectorSpace,
) -> Result<(GradedVectorSpace, Vec<usize>, Vec<usize>)> {
    let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for n in left.degrees() {
        degrees.entry(n).or_default().extend(left.labels(n).iter().cloned());
    }
    for n in right.degrees() {
        let labels = degrees.entry(n).or_default();
        for l in right.labels(n) {
            let l = fresh_label(labels, l);
            labels.push(l);
        }
    }
    let space = GradedVectorSpace::new(degrees)?;
    let left_index = (0..left.total_dim())
        .map(|g| {
            let (d, i) = left.locate(g);
            space.global(d, i)
        })
        .collect();
    let right_index = (0..right.total_dim())
        .map(|g| {
            let (d, i) = right.locate(g);
            space.global(d, left.dim(d) + i)
        })
        .collect();
    Ok((space, left_index, right_index))
}
