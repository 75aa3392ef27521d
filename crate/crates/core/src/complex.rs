//! Chain complexes, chain maps, and homology by exact elimination.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graded::{GradedLinearMap, GradedVectorSpace};
use crate::matrix::{pivots_of, rank_of, reduce_against, span_basis, Matrix};
use crate::scalar::{is_zero_vector, Scalar, Vector};

/// A graded space with a degree −1 differential squaring to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    differential: GradedLinearMap,
}

/// `H_n` of a complex: its dimension and cycles whose classes form a basis.
///
/// Representatives are normalized: each cycle is reduced modulo the boundaries (in
/// reduced echelon form), and the reduced cycles are brought to reduced row-echelon
/// form with unit pivots ordered by basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub degree: i32,
    pub dimension: usize,
    pub representatives: Vec<Vector>,
}

impl ChainComplex {
    pub fn new(differential: GradedLinearMap) -> Result<Self> {
        if differential.shift() != -1 {
            return Err(Error::DimensionMismatch("a differential must have degree -1".into()));
        }
        if differential.source() != differential.target() {
            return Err(Error::DimensionMismatch("a differential must be an endomorphism".into()));
        }
        if let Some(degree) = square_defect(&differential) {
            return Err(Error::InvalidComplex { degree });
        }
        Ok(ChainComplex { differential })
    }

    /// The complex with zero differential.
    pub fn zero_differential(space: GradedVectorSpace) -> Self {
        ChainComplex { differential: GradedLinearMap::zero(space.clone(), space, -1) }
    }

    pub fn space(&self) -> &GradedVectorSpace {
        self.differential.source()
    }

    pub fn differential(&self) -> &GradedLinearMap {
        &self.differential
    }

    /// `d_n : C_n → C_{n−1}`.
    pub fn d(&self, n: i32) -> Matrix {
        self.differential.block(n)
    }

    pub fn homology(&self, n: i32) -> Homology {
        let dim = self.space().dim(n);
        if dim == 0 {
            return Homology { degree: n, dimension: 0, representatives: Vec::new() };
        }
        let cycles = self.d(n).kernel();
        let boundaries = span_basis(dim, &self.d(n + 1).image());
        let pivots = pivots_of(&boundaries);
        let reduced: Vec<Vector> = cycles
            .iter()
            .map(|z| reduce_against(z, &boundaries, &pivots))
            .filter(|z| !is_zero_vector(z))
            .collect();
        let representatives = span_basis(dim, &reduced);
        debug_assert_eq!(representatives.len(), cycles.len() - boundaries.len());
        Homology { degree: n, dimension: representatives.len(), representatives }
    }

    /// Coordinates of the class of a cycle `z ∈ C_n` in the basis of
    /// [`Self::homology`] representatives; `None` if `z` is not a cycle.
    pub fn class_coordinates(&self, n: i32, z: &[Scalar]) -> Option<Vector> {
        if !is_zero_vector(&self.d(n).apply(z)) {
            return None;
        }
        let h = self.homology(n);
        if h.dimension == 0 {
            return Some(Vec::new());
        }
        let dim = self.space().dim(n);
        let mut columns = h.representatives.clone();
        columns.extend(span_basis(dim, &self.d(n + 1).image()));
        let x = Matrix::from_columns(dim, &columns).solve(z)?;
        Some(x[..h.dimension].to_vec())
    }

    /// Homology dimensions over the whole support.
    pub fn betti(&self) -> BTreeMap<i32, usize> {
        self.space().degrees().map(|n| (n, self.homology(n).dimension)).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.space().degrees().all(|n| self.homology(n).dimension == 0)
    }
}

/// First degree `n` where `d_{n−1} ∘ d_n ≠ 0`.
fn square_defect(d: &GradedLinearMap) -> Option<i32> {
    d.source().degrees().find(|&n| {
        let dn = d.block(n);
        let dn1 = d.block(n - 1);
        dn1.rows() > 0 && dn.cols() > 0 && !dn1.mul(&dn).is_zero()
    })
}

/// A degree-0 map of chain complexes commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    map: GradedLinearMap,
}

/// Outcome of [`is_quasi_iso`] with the degrees where the induced map on homology
/// fails to be an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub failures: Vec<i32>,
}

impl QuasiIsoReport {
    pub fn is_quasi_iso(&self) -> bool {
        self.failures.is_empty()
    }
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, map: GradedLinearMap) -> Result<Self> {
        if map.shift() != 0 || map.source() != source.space() || map.target() != target.space() {
            return Err(Error::DimensionMismatch("chain map spaces or degree do not match".into()));
        }
        let degrees: BTreeSet<i32> = source.space().degrees().collect();
        for n in degrees {
            let lhs = target.d(n).mul(&map.block(n));
            let rhs = map.block(n - 1).mul(&source.d(n));
            if lhs != rhs {
                return Err(Error::NotAChainMap { degree: n });
            }
        }
        Ok(ChainMap { source, target, map })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        ChainMap { source: c.clone(), target: c.clone(), map: GradedLinearMap::identity(c.space()) }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn map(&self) -> &GradedLinearMap {
        &self.map
    }

    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch("composition of chain maps with different inner complexes".into()));
        }
        Ok(ChainMap { source: inner.source.clone(), target: self.target.clone(), map: self.map.compose(&inner.map)? })
    }
}

/// Whether `f` induces an isomorphism `H_n(source) → H_n(target)` for every `n` in the
/// union of the supports.
pub fn is_quasi_iso(f: &ChainMap) -> QuasiIsoReport {
    let degrees: BTreeSet<i32> = f.source.space().degrees().chain(f.target.space().degrees()).collect();
    let failures = degrees.into_iter().filter(|&n| !induces_iso(f, n)).collect();
    QuasiIsoReport { failures }
}

fn induces_iso(f: &ChainMap, n: i32) -> bool {
    let hs = f.source.homology(n);
    let ht = f.target.homology(n);
    if hs.dimension != ht.dimension {
        return false;
    }
    if hs.dimension == 0 {
        return true;
    }
    // Images of a homology basis must stay independent modulo boundaries.
    let dim = f.target.space().dim(n);
    let boundaries = span_basis(dim, &f.target.d(n + 1).image());
    let block = f.map.block(n);
    let mut vectors = boundaries.clone();
    vectors.extend(hs.representatives.iter().map(|z| block.apply(z)));
    rank_of(dim, &vectors) == boundaries.len() + hs.dimension
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn two_term(coeff: i64) -> ChainComplex {
        let space = GradedVectorSpace::from_labels(&[(1, &["a"]), (0, &["b"])]).unwrap();
        let d = GradedLinearMap::new(
            space.clone(),
            space,
            -1,
            [(1, Matrix::from_rows(1, vec![vec![int(coeff)]]))].into(),
        )
        .unwrap();
        ChainComplex::new(d).unwrap()
    }

    #[test]
    fn multiplication_by_two_is_acyclic() {
        let c = two_term(2);
        assert_eq!(c.homology(0).dimension, 0);
        assert_eq!(c.homology(1).dimension, 0);
    }

    #[test]
    fn zero_differential_homology_is_the_space() {
        let space = GradedVectorSpace::from_labels(&[(0, &["x", "y"]), (3, &["z"])]).unwrap();
        let c = ChainComplex::zero_differential(space);
        assert_eq!(c.betti(), [(0, 2), (3, 1)].into());
        let h = c.homology(0);
        assert_eq!(h.representatives, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
    }

    #[test]
    fn rejects_nonzero_square() {
        let space = GradedVectorSpace::from_labels(&[(1, &["a"]), (0, &["b"]), (-1, &["c"])]).unwrap();
        let one = || Matrix::from_rows(1, vec![vec![int(1)]]);
        let d = GradedLinearMap::new(space.clone(), space, -1, [(1, one()), (0, one())].into()).unwrap();
        assert!(matches!(ChainComplex::new(d), Err(Error::InvalidComplex { degree: 1 })));
    }

    #[test]
    fn zero_inclusion_is_not_a_quasi_iso() {
        let zero = ChainComplex::zero_differential(GradedVectorSpace::zero());
        let line = ChainComplex::zero_differential(GradedVectorSpace::from_labels(&[(0, &["x"])]).unwrap());
        let f = ChainMap::new(zero, line.clone(), GradedLinearMap::zero(GradedVectorSpace::zero(), line.space().clone(), 0))
            .unwrap();
        assert_eq!(is_quasi_iso(&f).failures, vec![0]);
        assert!(is_quasi_iso(&ChainMap::identity(&line)).is_quasi_iso());
    }

    #[test]
    fn detects_non_chain_maps() {
        let c = two_term(1);
        let map = GradedLinearMap::new(
            c.space().clone(),
            c.space().clone(),
            0,
            [(1, Matrix::from_rows(1, vec![vec![int(1)]]))].into(),
        )
        .unwrap();
        assert!(matches!(ChainMap::new(c.clone(), c, map), Err(Error::NotAChainMap { .. })));
    }

    #[test]
    fn representatives_are_reduced_modulo_boundaries() {
        // C_1 = <a>, C_0 = <x, y>, d a = x + y
        let space = GradedVectorSpace::from_labels(&[(1, &["a"]), (0, &["x", "y"])]).unwrap();
        let d = GradedLinearMap::new(
            space.clone(),
            space,
            -1,
            [(1, Matrix::from_rows(1, vec![vec![int(1)], vec![int(1)]]))].into(),
        )
        .unwrap();
        let c = ChainComplex::new(d).unwrap();
        let h = c.homology(0);
        assert_eq!(h.dimension, 1);
        assert_eq!(h.representatives, vec![vec![int(0), int(1)]]);
        assert_eq!(c.class_coordinates(0, &[int(3), int(0)]), Some(vec![int(-3)]));
    }
}
