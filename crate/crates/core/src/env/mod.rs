//! Differential graded associative algebras, their commutator Lie algebras, and
//! truncated universal enveloping algebras with the PBW filtration.
//!
//! The Leibniz rule is `d(xy) = (dx)y + (−1)^p x(dy)` for `x` of degree `p`.

mod envelope;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

pub use envelope::{
    associated_graded, sym_vs_gr_check, symmetrize, universal_enveloping, FilteredEnvelope, LevelCheck, SymGrReport,
    Windowed,
};

use crate::complex::ChainComplex;
use crate::dgla::{BracketEntry, DgLieAlgebra, DgLieData};
use crate::error::{Error, Result};
use crate::graded::{GradedLinearMap, GradedVectorSpace};
use crate::report::{Axiom, ValidationReport};
use crate::scalar::{axpy, is_zero_vector, koszul, sign, sub, zero_vector, Scalar, Vector};

/// One structure constant: `e_left · e_right` has coefficient `coeff` on `e_output`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductEntry {
    pub left: usize,
    pub right: usize,
    pub output: usize,
    pub coeff: Scalar,
}

/// Unvalidated dg-algebra data; `unit` is the global index of the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebraData {
    pub space: GradedVectorSpace,
    pub differential: GradedLinearMap,
    pub unit: usize,
    pub product: Vec<ProductEntry>,
}

/// A validated unital dg associative algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    complex: ChainComplex,
    unit: usize,
    degrees: Vec<i32>,
    table: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
}

fn product_table(data: &DgAlgebraData) -> Result<BTreeMap<(usize, usize), Vector>> {
    let n = data.space.total_dim();
    if data.differential.shift() != -1
        || data.differential.source() != &data.space
        || data.differential.target() != &data.space
    {
        return Err(Error::MalformedInput("differential must be a degree -1 endomorphism of the space".into()));
    }
    if data.unit >= n || data.space.degree_of(data.unit) != 0 {
        return Err(Error::MalformedInput("the unit must be a basis element of degree 0".into()));
    }
    let degrees = data.space.degree_table();
    let mut table: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for e in &data.product {
        if e.left >= n || e.right >= n || e.output >= n {
            return Err(Error::MalformedInput("product entry refers to a missing basis element".into()));
        }
        if degrees[e.output] != degrees[e.left] + degrees[e.right] {
            return Err(Error::MalformedInput(format!(
                "product {}·{} cannot have a component on {}",
                data.space.display_label(e.left),
                data.space.display_label(e.right),
                data.space.display_label(e.output)
            )));
        }
        let v = table.entry((e.left, e.right)).or_insert_with(|| zero_vector(n));
        v[e.output] += &e.coeff;
    }
    Ok(table)
}

/// Checks `d² = 0`, associativity, the unit laws and the Leibniz rule on basis tuples.
pub fn validate_dg_algebra(data: &DgAlgebraData) -> Result<ValidationReport> {
    let table = product_table(data)?;
    let n = data.space.total_dim();
    let deg = data.space.degree_table();
    let label = |i: usize| data.space.display_label(i);
    let d = data.differential.global_matrix();
    let mul = |a: usize, b: usize| table.get(&(a, b)).cloned().unwrap_or_else(|| zero_vector(n));
    let mul_vec_right = |v: &[Scalar], b: usize| {
        let mut out = zero_vector(n);
        for (a, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            axpy(&mut out, c, &mul(a, b));
        }
        out
    };
    let mul_vec_left = |a: usize, v: &[Scalar]| {
        let mut out = zero_vector(n);
        for (b, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            axpy(&mut out, c, &mul(a, b));
        }
        out
    };
    let mut report = ValidationReport::default();

    let dd = d.mul(&d);
    for x in 0..n {
        let defect = dd.column(x);
        if !is_zero_vector(&defect) {
            report.push(Axiom::DifferentialSquare, vec![label(x)], defect);
        }
    }
    let du = d.column(data.unit);
    if !is_zero_vector(&du) {
        report.push(Axiom::Unit, vec![label(data.unit)], du);
    }
    for a in 0..n {
        let mut e = zero_vector(n);
        e[a] = Scalar::one();
        for (lhs, side) in [(mul(data.unit, a), "left"), (mul(a, data.unit), "right")] {
            let defect = sub(&lhs, &e);
            if !is_zero_vector(&defect) {
                report.push(Axiom::Unit, vec![label(a), side.to_string()], defect);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let defect = sub(&mul_vec_right(&mul(a, b), c), &mul_vec_left(a, &mul(b, c)));
                if !is_zero_vector(&defect) {
                    report.push(Axiom::Associativity, vec![label(a), label(b), label(c)], defect);
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let mut defect = d.apply(&mul(a, b));
            axpy(&mut defect, &-Scalar::one(), &mul_vec_right(&d.column(a), b));
            axpy(&mut defect, &-sign(koszul(deg[a], 1)), &mul_vec_left(a, &d.column(b)));
            if !is_zero_vector(&defect) {
                report.push(Axiom::Leibniz, vec![label(a), label(b)], defect);
            }
        }
    }
    Ok(report)
}

impl DgAlgebra {
    pub fn new(data: DgAlgebraData) -> Result<Self> {
        let report = validate_dg_algebra(&data)?;
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        let table = product_table(&data)?
            .into_iter()
            .filter(|(_, v)| !is_zero_vector(v))
            .map(|(k, v)| (k, v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()))
            .collect();
        let degrees = data.space.degree_table();
        Ok(DgAlgebra { complex: ChainComplex::new(data.differential)?, unit: data.unit, degrees, table })
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

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, a: usize) -> i32 {
        self.degrees[a]
    }

    pub fn product_basis(&self, a: usize, b: usize) -> Vector {
        let mut out = zero_vector(self.dim());
        if let Some(image) = self.table.get(&(a, b)) {
            for (k, c) in image {
                out[*k] = c.clone();
            }
        }
        out
    }

    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.dim());
        for (a, ca) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, cb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                axpy(&mut out, &(ca * cb), &self.product_basis(a, b));
            }
        }
        out
    }

    pub fn is_graded_commutative(&self) -> bool {
        (0..self.dim()).all(|a| {
            (a..self.dim()).all(|b| {
                self.product_basis(a, b)
                    == self
                        .product_basis(b, a)
                        .iter()
                        .map(|c| sign(koszul(self.degrees[a], self.degrees[b])) * c)
                        .collect::<Vector>()
            })
        })
    }
}

/// The dg-Lie algebra with bracket `[x, y] = xy − (−1)^{pq} yx`.
pub fn commutator_lie(a: &DgAlgebra) -> Result<DgLieAlgebra> {
    let n = a.dim();
    let mut bracket = Vec::new();
    for x in 0..n {
        for y in x..n {
            let mut v = a.product_basis(x, y);
            axpy(&mut v, &-sign(koszul(a.degrees[x], a.degrees[y])), &a.product_basis(y, x));
            for (output, coeff) in v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                bracket.push(BracketEntry { left: x, right: y, output, coeff });
            }
        }
    }
    DgLieAlgebra::new(DgLieData {
        space: a.space().clone(),
        differential: a.complex().differential().clone(),
        bracket,
    })
}

/// The algebra of `k × k` matrices in degree 0, basis `E{i}{j}` row-major.
pub fn matrix_algebra(k: usize) -> DgAlgebra {
    let labels: Vec<String> = (1..=k).flat_map(|i| (1..=k).map(move |j| format!("E{i}{j}"))).collect();
    let space = GradedVectorSpace::new([(0, labels)]).expect("distinct labels");
    let idx = |i: usize, j: usize| i * k + j;
    let mut product = Vec::new();
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                product.push(ProductEntry { left: idx(i, j), right: idx(j, l), output: idx(i, l), coeff: Scalar::one() });
            }
        }
    }
    // The identity matrix is not a basis element for k > 1, so the unit is adjoined
    // only in the 1 × 1 case; larger sizes are built through `with_unit`.
    let data = DgAlgebraData {
        differential: GradedLinearMap::zero(space.clone(), space.clone(), -1),
        space,
        unit: 0,
        product,
    };
    if k == 1 {
        return DgAlgebra::new(data).expect("k is a dg algebra");
    }
    with_identity_basis(data, k)
}

/// Rewrites the matrix algebra in the basis `{1, E_ij (i ≠ j), E_ii − E_kk (i < k)}`
/// so that the identity is a basis element.
fn with_identity_basis(data: DgAlgebraData, k: usize) -> DgAlgebra {
    let n = k * k;
    let idx = |i: usize, j: usize| i * k + j;
    let mut columns: Vec<Vector> = Vec::new();
    let mut labels = Vec::new();
    let mut one = zero_vector(n);
    for i in 0..k {
        one[idx(i, i)] = Scalar::one();
    }
    columns.push(one);
    labels.push("1".to_string());
    for i in 0..k {
        for j in 0..k {
            if i != j {
                columns.push(crate::scalar::unit_vector(n, idx(i, j)));
                labels.push(format!("E{}{}", i + 1, j + 1));
            }
        }
    }
    for i in 0..k - 1 {
        let mut v = zero_vector(n);
        v[idx(i, i)] = Scalar::one();
        v[idx(k - 1, k - 1)] = -Scalar::one();
        columns.push(v);
        labels.push(format!("H{}", i + 1));
    }
    let p = crate::matrix::Matrix::from_columns(n, &columns);
    let p_inv = p.inverse().expect("basis change is invertible");
    let old = |v: &Vector, w: &Vector| {
        let mut out = zero_vector(n);
        for e in &data.product {
            let c = &v[e.left] * &w[e.right];
            if !c.is_zero() {
                out[e.output] += c * &e.coeff;
            }
        }
        out
    };
    let mut product = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let image = p_inv.apply(&old(&columns[a], &columns[b]));
            for (output, coeff) in image.into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                product.push(ProductEntry { left: a, right: b, output, coeff });
            }
        }
    }
    let space = GradedVectorSpace::new([(0, labels)]).expect("distinct labels");
    DgAlgebra::new(DgAlgebraData {
        differential: GradedLinearMap::zero(space.clone(), space.clone(), -1),
        space,
        unit: 0,
        product,
    })
    .expect("matrix algebra is associative")
}
