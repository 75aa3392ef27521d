use crate::complex::ChainMap;
use crate::error::{Error, Result};
use crate::graded::GradedLinearMap;
use crate::report::{Axiom, ValidationReport};
use crate::scalar::{is_zero_vector, sub, Scalar, Vector};

use super::DgLieAlgebra;

/// A chain map between dg-Lie algebras that preserves the bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLieMorphism {
    source: DgLieAlgebra,
    target: DgLieAlgebra,
    map: ChainMap,
}

impl DgLieMorphism {
    pub fn new(source: DgLieAlgebra, target: DgLieAlgebra, map: GradedLinearMap) -> Result<Self> {
        let map = ChainMap::new(source.complex().clone(), target.complex().clone(), map)?;
        let matrix = map.map().global_matrix();
        let mut report = ValidationReport::default();
        let n = source.dim();
        for a in 0..n {
            for b in a..n {
                let lhs = matrix.apply(&source.bracket_basis(a, b));
                let rhs = target.bracket(&matrix.column(a), &matrix.column(b));
                let defect = sub(&lhs, &rhs);
                if !is_zero_vector(&defect) {
                    report.push(Axiom::BracketPreservation, vec![source.label(a), source.label(b)], defect);
                }
            }
        }
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        Ok(DgLieMorphism { source, target, map })
    }

    pub fn identity(g: &DgLieAlgebra) -> Self {
        DgLieMorphism { source: g.clone(), target: g.clone(), map: ChainMap::identity(g.complex()) }
    }

    /// The unique morphism to the zero algebra.
    pub fn to_zero(g: &DgLieAlgebra) -> Self {
        let zero = DgLieAlgebra::zero();
        let map = GradedLinearMap::zero(g.space().clone(), zero.space().clone(), 0);
        DgLieMorphism::new(g.clone(), zero, map).expect("the zero map is a morphism")
    }

    /// The unique morphism from the zero algebra.
    pub fn from_zero(g: &DgLieAlgebra) -> Self {
        let zero = DgLieAlgebra::zero();
        let map = GradedLinearMap::zero(zero.space().clone(), g.space().clone(), 0);
        DgLieMorphism::new(zero, g.clone(), map).expect("the zero map is a morphism")
    }

    pub fn source(&self) -> &DgLieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &DgLieAlgebra {
        &self.target
    }

    pub fn chain_map(&self) -> &ChainMap {
        &self.map
    }

    pub fn linear_map(&self) -> &GradedLinearMap {
        self.map.map()
    }

    pub fn apply(&self, x: &[Scalar]) -> Vector {
        self.map.map().apply_global(x)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &DgLieMorphism) -> Result<DgLieMorphism> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch("composition of morphisms with different inner algebras".into()));
        }
        let map = self.map.compose(&inner.map)?;
        Ok(DgLieMorphism { source: inner.source.clone(), target: self.target.clone(), map })
    }
}
