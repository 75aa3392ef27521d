//! Discs, generating cofibrations and the fibration / weak-equivalence classifiers.

use num_traits::Zero;

use crate::complex::{is_quasi_iso, ChainComplex, ChainMap, QuasiIsoReport};
use crate::error::{Error, Result};
use crate::graded::{check_degree, GradedLinearMap, GradedVectorSpace};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Vector};

use super::{free_dgla, free_dgla_map, DgLieMorphism, FreeDglaPresentation, Limits};

/// `E(n)` (a line in degrees `n` and `n − 1` joined by the identity), its boundary
/// `∂E(n)` (the degree `n − 1` line), and the inclusion.
#[derive(Clone, Debug)]
pub struct DiscAndBoundary {
    pub disc: ChainComplex,
    pub boundary: ChainComplex,
    pub inclusion: ChainMap,
}

pub fn disc_and_boundary(n: i32) -> Result<DiscAndBoundary> {
    check_degree(n as i64)?;
    let below = check_degree(n as i64 - 1)?;
    let disc_space = GradedVectorSpace::from_labels(&[(n, &["u"]), (below, &["du"])])?;
    let d = GradedLinearMap::new(
        disc_space.clone(),
        disc_space.clone(),
        -1,
        [(n, Matrix::identity(1))].into(),
    )?;
    let disc = ChainComplex::new(d)?;
    let boundary_space = GradedVectorSpace::from_labels(&[(below, &["du"])])?;
    let boundary = ChainComplex::zero_differential(boundary_space.clone());
    let map = GradedLinearMap::new(boundary_space, disc_space, 0, [(below, Matrix::identity(1))].into())?;
    let inclusion = ChainMap::new(boundary.clone(), disc.clone(), map)?;
    Ok(DiscAndBoundary { disc, boundary, inclusion })
}

/// `Free(∂E(n)) → Free(E(n))` together with both truncated free algebras.
#[derive(Clone, Debug)]
pub struct GeneratingCofibration {
    pub source: FreeDglaPresentation,
    pub target: FreeDglaPresentation,
    pub morphism: DgLieMorphism,
}

pub fn generating_cofibration(n: i32, weight_cutoff: usize, limits: Limits) -> Result<GeneratingCofibration> {
    let e = disc_and_boundary(n)?;
    let source = free_dgla(&e.boundary, weight_cutoff, limits)?;
    let target = free_dgla(&e.disc, weight_cutoff, limits)?;
    let morphism = free_dgla_map(&e.inclusion, &source, &target)?;
    Ok(GeneratingCofibration { source, target, morphism })
}

/// Degrees where a morphism fails to be surjective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationReport {
    pub failures: Vec<i32>,
}

impl FibrationReport {
    pub fn is_fibration(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Fibrations are the degreewise surjections.
pub fn is_fibration(f: &DgLieMorphism) -> FibrationReport {
    let map = f.linear_map();
    let failures = f
        .target()
        .space()
        .degrees()
        .filter(|&n| map.block(n).rank() < f.target().space().dim(n))
        .collect();
    FibrationReport { failures }
}

/// Weak equivalences are the quasi-isomorphisms of underlying complexes.
pub fn is_weak_equivalence(f: &DgLieMorphism) -> QuasiIsoReport {
    is_quasi_iso(f.chain_map())
}

/// Solves the lifting problem of `∂E(n) → E(n)` against `p : A → B` on generators.
///
/// The square is given by a cycle `a ∈ A_{n−1}` (image of `du`) and `b ∈ B_n` (image of
/// `u`) with `p(a) = d b`. A lift is `z ∈ A_n` with `dz = a` and `p(z) = b`; it extends
/// to the free algebras by freeness. Returns `None` when no lift exists.
pub fn lift_generator(p: &DgLieMorphism, n: i32, a: &[Scalar], b: &[Scalar]) -> Result<Option<Vector>> {
    let sa = p.source().space();
    let sb = p.target().space();
    if a.len() != sa.dim(n - 1) || b.len() != sb.dim(n) {
        return Err(Error::DimensionMismatch("lifting data has the wrong size".into()));
    }
    let da = p.source().complex().d(n - 1);
    if da.rows() > 0 && !da.apply(a).iter().all(Zero::is_zero) {
        return Err(Error::MalformedInput("the image of du must be a cycle".into()));
    }
    if p.linear_map().block(n - 1).apply(a) != p.target().complex().d(n).apply(b) {
        return Err(Error::MalformedInput("the lifting square does not commute".into()));
    }
    let dn = p.source().complex().d(n);
    let pn = p.linear_map().block(n);
    let cols = sa.dim(n);
    let mut rows = Vec::with_capacity(dn.rows() + pn.rows());
    rows.extend((0..dn.rows()).map(|r| dn.row(r).to_vec()));
    rows.extend((0..pn.rows()).map(|r| pn.row(r).to_vec()));
    let system = Matrix::from_rows(cols, rows);
    let mut rhs = a.to_vec();
    rhs.extend_from_slice(b);
    if cols == 0 {
        return Ok(rhs.iter().all(Zero::is_zero).then(Vec::new));
    }
    Ok(system.solve(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::{cone, DgLieAlgebra};
    use crate::scalar::int;

    #[test]
    fn discs_are_acyclic() {
        for n in [-3, 0, 1, 5] {
            let e = disc_and_boundary(n).unwrap();
            assert!(e.disc.is_acyclic());
            assert_eq!(e.boundary.betti(), [(n - 1, 1)].into());
            assert_eq!(e.inclusion.map().block(n - 1).rank(), 1);
        }
    }

    #[test]
    fn generating_cofibration_weight_one_is_the_inclusion() {
        let c = generating_cofibration(0, 2, Limits::default()).unwrap();
        assert_eq!(c.target.algebra().space().degrees().collect::<Vec<_>>(), vec![-2, -1, 0]);
        assert_eq!(c.source.weight_dims(), vec![1, 1]);
        // weight 2: [u,du] and [du,du], the latter surviving because du is odd
        assert_eq!(c.target.weight_dims(), vec![2, 2]);
        for (s, t) in c.source.weight_dims().iter().zip(c.target.weight_dims()) {
            assert!(*s <= t);
        }
        let one = generating_cofibration(3, 1, Limits::default()).unwrap();
        assert!(!is_weak_equivalence(&one.morphism).is_quasi_iso());
    }

    #[test]
    fn fibration_classifier() {
        let g = DgLieAlgebra::new(crate::dgla::tests::sl2_data(2)).unwrap();
        assert!(is_fibration(&DgLieMorphism::identity(&g)).is_fibration());
        assert!(is_fibration(&DgLieMorphism::to_zero(&g)).is_fibration());
        assert_eq!(is_fibration(&DgLieMorphism::from_zero(&g)).failures, vec![0]);
    }

    #[test]
    fn lift_against_cone_projection() {
        // Cn(g) → 0 is a surjective quasi-isomorphism, so every square lifts.
        let g = DgLieAlgebra::new(crate::dgla::tests::sl2_data(2)).unwrap();
        let c = cone(&g).unwrap();
        let p = DgLieMorphism::to_zero(&c.algebra);
        // a = h in degree 0, n = 1
        let a = vec![int(0), int(0), int(1)];
        let z = lift_generator(&p, 1, &a, &[]).unwrap().unwrap();
        assert_eq!(c.algebra.complex().d(1).apply(&z), a);
    }
}
