//! Integer-graded vector spaces with named bases, graded linear maps, and the
//! symmetric monoidal structure (tensor product with Koszul braiding, shift, dual).

use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{is_odd, koszul, sign, zero_vector, Scalar, Vector};

pub const MIN_DEGREE: i32 = -64;
pub const MAX_DEGREE: i32 = 64;

pub fn check_degree(degree: i64) -> Result<i32> {
    if degree < MIN_DEGREE as i64 || degree > MAX_DEGREE as i64 {
        return Err(Error::DegreeOutOfRange(degree));
    }
    Ok(degree as i32)
}

/// A finitely supported graded vector space given by a labelled basis in each degree.
///
/// Basis elements also carry a global index: degrees ascending, then position within
/// the degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedVectorSpace {
    basis: BTreeMap<i32, Vec<String>>,
    offsets: BTreeMap<i32, usize>,
    total: usize,
}

impl GradedVectorSpace {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new<I>(degrees: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, Vec<String>)>,
    {
        let mut basis: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (degree, labels) in degrees {
            check_degree(degree as i64)?;
            basis.entry(degree).or_default().extend(labels);
        }
        basis.retain(|_, labels| !labels.is_empty());
        for (&degree, labels) in &basis {
            let mut seen = HashSet::new();
            for label in labels {
                if !seen.insert(label.as_str()) {
                    return Err(Error::DuplicateLabel { degree, label: label.clone() });
                }
            }
        }
        let mut offsets = BTreeMap::new();
        let mut total = 0;
        for (&degree, labels) in &basis {
            offsets.insert(degree, total);
            total += labels.len();
        }
        Ok(GradedVectorSpace { basis, offsets, total })
    }

    /// Convenience constructor from `(degree, labels)` pairs of string slices.
    pub fn from_labels(degrees: &[(i32, &[&str])]) -> Result<Self> {
        Self::new(degrees.iter().map(|(d, ls)| (*d, ls.iter().map(|s| s.to_string()).collect())))
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.basis.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn is_zero(&self) -> bool {
        self.total == 0
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.basis.keys().copied()
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.basis.iter().map(|(&d, ls)| (d, ls.len())).collect()
    }

    pub fn labels(&self, degree: i32) -> &[String] {
        self.basis.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, degree: i32, label: &str) -> Option<usize> {
        self.labels(degree).iter().position(|l| l == label)
    }

    /// Global index of the `index`-th basis element of `degree`.
    pub fn global(&self, degree: i32, index: usize) -> usize {
        assert!(index < self.dim(degree), "basis index out of range");
        self.offsets[&degree] + index
    }

    /// Inverse of [`Self::global`].
    pub fn locate(&self, global: usize) -> (i32, usize) {
        assert!(global < self.total, "global index out of range");
        let (&degree, &offset) = self.offsets.range(..).rev().find(|(_, &o)| o <= global).unwrap();
        (degree, global - offset)
    }

    pub fn degree_of(&self, global: usize) -> i32 {
        self.locate(global).0
    }

    pub fn label_of(&self, global: usize) -> &str {
        let (d, i) = self.locate(global);
        &self.basis[&d][i]
    }

    /// Global index of the element with this label, if the label is unique across degrees.
    pub fn find_label(&self, label: &str) -> Option<usize> {
        let mut found = None;
        for (&d, labels) in &self.basis {
            if let Some(i) = labels.iter().position(|l| l == label) {
                if found.is_some() {
                    return None;
                }
                found = Some(self.global(d, i));
            }
        }
        found
    }

    /// Global index range occupied by `degree`.
    pub fn range(&self, degree: i32) -> std::ops::Range<usize> {
        match self.offsets.get(&degree) {
            Some(&o) => o..o + self.dim(degree),
            None => 0..0,
        }
    }

    /// Degree of every basis element, indexed globally.
    pub fn degree_table(&self) -> Vec<i32> {
        self.basis.iter().flat_map(|(&d, ls)| std::iter::repeat_n(d, ls.len())).collect()
    }

    /// A label that identifies the element even if its label repeats in another degree.
    pub fn display_label(&self, global: usize) -> String {
        let (d, i) = self.locate(global);
        let label = &self.basis[&d][i];
        if self.find_label(label).is_some() {
            label.clone()
        } else {
            format!("{label}@{d}")
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.basis.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.basis.keys().next_back().copied()
    }
}

/// Pairs `((p, i), (q, j))` spanning `(V ⊗ W)_n`, in the order used for the basis of the
/// tensor product: by `p` ascending, then `i`, then `j`.
pub fn tensor_layout(v: &GradedVectorSpace, w: &GradedVectorSpace) -> BTreeMap<i32, Vec<((i32, usize), (i32, usize))>> {
    let mut layout: BTreeMap<i32, Vec<_>> = BTreeMap::new();
    for p in v.degrees() {
        for q in w.degrees() {
            let entry = layout.entry(p + q).or_default();
            for i in 0..v.dim(p) {
                for j in 0..w.dim(q) {
                    entry.push(((p, i), (q, j)));
                }
            }
        }
    }
    for pairs in layout.values_mut() {
        pairs.sort();
    }
    layout
}

/// `(V ⊗ W)_n = ⊕_{p+q=n} V_p ⊗ W_q` with labels `"x⊗y"`.
pub fn tensor(v: &GradedVectorSpace, w: &GradedVectorSpace) -> Result<GradedVectorSpace> {
    let layout = tensor_layout(v, w);
    GradedVectorSpace::new(layout.into_iter().map(|(n, pairs)| {
        let labels = pairs
            .into_iter()
            .map(|((p, i), (q, j))| format!("{}⊗{}", v.labels(p)[i], w.labels(q)[j]))
            .collect();
        (n, labels)
    }))
}

/// `V[n]_p = V_{p-n}`; labels are unchanged.
pub fn shift(v: &GradedVectorSpace, n: i32) -> Result<GradedVectorSpace> {
    let mut degrees = Vec::new();
    for p in v.degrees() {
        let target = check_degree(p as i64 + n as i64)?;
        degrees.push((target, v.labels(p).to_vec()));
    }
    GradedVectorSpace::new(degrees)
}

/// `(V^∨)_p = Hom(V_{-p}, k)`; the dual basis element of `x` is labelled `x^∨`.
pub fn graded_dual(v: &GradedVectorSpace) -> Result<GradedVectorSpace> {
    GradedVectorSpace::new(
        v.degrees().map(|p| (-p, v.labels(p).iter().map(|l| format!("{l}^∨")).collect())),
    )
}

/// Degreewise dimensions of the graded-symmetric power `Sym^m` of a space whose basis
/// has the given degrees: polynomial in even elements, exterior in odd ones.
pub fn sym_power_dims(degrees: &[i32], m: usize) -> BTreeMap<i32, usize> {
    // counts[k][n]: monomials of length k and degree n in the elements seen so far
    let mut counts: Vec<BTreeMap<i32, usize>> = vec![BTreeMap::new(); m + 1];
    counts[0].insert(0, 1);
    for &p in degrees {
        let max_power = if is_odd(p) { 1.min(m) } else { m };
        let previous = counts.clone();
        for k in 1..=m {
            for e in 1..=max_power.min(k) {
                for (&n, &c) in &previous[k - e] {
                    *counts[k].entry(n + e as i32 * p).or_insert(0) += c;
                }
            }
        }
    }
    let mut out = std::mem::take(&mut counts[m]);
    out.retain(|_, c| *c > 0);
    out
}

/// A linear map of graded spaces raising degree by `shift`. The block stored under
/// source degree `n` is a `dim target_{n+shift} × dim source_n` matrix; missing blocks
/// are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLinearMap {
    source: GradedVectorSpace,
    target: GradedVectorSpace,
    shift: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedLinearMap {
    pub fn new(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        shift: i32,
        blocks: BTreeMap<i32, Matrix>,
    ) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (n, block) in blocks {
            let rows = target.dim(n + shift);
            let cols = source.dim(n);
            if block.rows() != rows || block.cols() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "block at degree {n} is {}x{}, expected {rows}x{cols}",
                    block.rows(),
                    block.cols()
                )));
            }
            if rows > 0 && cols > 0 && !block.is_zero() {
                kept.insert(n, block);
            }
        }
        Ok(GradedLinearMap { source, target, shift, blocks: kept })
    }

    pub fn zero(source: GradedVectorSpace, target: GradedVectorSpace, shift: i32) -> Self {
        GradedLinearMap { source, target, shift, blocks: BTreeMap::new() }
    }

    pub fn identity(space: &GradedVectorSpace) -> Self {
        let blocks = space.degrees().map(|n| (n, Matrix::identity(space.dim(n)))).collect();
        GradedLinearMap { source: space.clone(), target: space.clone(), shift: 0, blocks }
    }

    /// Builds a map from the images of the source basis, given in global coordinates
    /// of the target. Images must be homogeneous of the right degree.
    pub fn from_global_images(
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        shift: i32,
        images: &[Vector],
    ) -> Result<Self> {
        if images.len() != source.total_dim() {
            return Err(Error::DimensionMismatch("one image per source basis element required".into()));
        }
        let mut blocks = BTreeMap::new();
        for n in source.degrees() {
            let range = target.range(n + shift);
            let mut block = Matrix::zeros(target.dim(n + shift), source.dim(n));
            for (col, g) in source.range(n).enumerate() {
                for (t, c) in images[g].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if !range.contains(&t) {
                        return Err(Error::MalformedInput(format!(
                            "image of `{}` is not homogeneous of degree {}",
                            source.display_label(g),
                            n + shift
                        )));
                    }
                    block.set(t - range.start, col, c.clone());
                }
            }
            blocks.insert(n, block);
        }
        Self::new(source, target, shift, blocks)
    }

    pub fn source(&self) -> &GradedVectorSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedVectorSpace {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// Block from source degree `n`, zero-filled if not stored.
    pub fn block(&self, n: i32) -> Matrix {
        self.blocks
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim(n + self.shift), self.source.dim(n)))
    }

    pub fn stored_blocks(&self) -> impl Iterator<Item = (i32, &Matrix)> {
        self.blocks.iter().map(|(&n, m)| (n, m))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `self ∘ inner`; defined only when `inner.target() == self.source()`.
    pub fn compose(&self, inner: &GradedLinearMap) -> Result<GradedLinearMap> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch("composition of maps with different inner spaces".into()));
        }
        let mut blocks = BTreeMap::new();
        for n in inner.source.degrees() {
            blocks.insert(n, self.block(n + inner.shift).mul(&inner.block(n)));
        }
        GradedLinearMap::new(inner.source.clone(), self.target.clone(), self.shift + inner.shift, blocks)
    }

    /// Applies the map to a global coordinate vector of the source.
    pub fn apply_global(&self, v: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.target.total_dim());
        for (&n, block) in &self.blocks {
            let src = self.source.range(n);
            let tgt = self.target.range(n + self.shift);
            let image = block.apply(&v[src]);
            for (k, c) in image.into_iter().enumerate() {
                if !c.is_zero() {
                    out[tgt.start + k] += c;
                }
            }
        }
        out
    }

    /// The whole map as a single matrix in global coordinates.
    pub fn global_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.target.total_dim(), self.source.total_dim());
        for (&n, block) in &self.blocks {
            let src = self.source.range(n);
            let tgt = self.target.range(n + self.shift);
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    let v = block.get(r, c);
                    if !v.is_zero() {
                        m.set(tgt.start + r, src.start + c, v.clone());
                    }
                }
            }
        }
        m
    }
}

/// The symmetry isomorphism `V ⊗ W → W ⊗ V`, `v ⊗ w ↦ (-1)^{pq} w ⊗ v`.
pub fn braiding(v: &GradedVectorSpace, w: &GradedVectorSpace) -> Result<GradedLinearMap> {
    let source = tensor(v, w)?;
    let target = tensor(w, v)?;
    let src_layout = tensor_layout(v, w);
    let tgt_layout = tensor_layout(w, v);
    let mut blocks = BTreeMap::new();
    for (&n, pairs) in &src_layout {
        let targets = &tgt_layout[&n];
        let mut block = Matrix::zeros(targets.len(), pairs.len());
        for (col, &((p, i), (q, j))) in pairs.iter().enumerate() {
            let row = targets.iter().position(|&t| t == ((q, j), (p, i))).unwrap();
            block.set(row, col, sign(koszul(p, q)));
        }
        blocks.insert(n, block);
    }
    GradedLinearMap::new(source, target, 0, blocks)
}
