//! Weight-truncated free dg-Lie algebras, realized inside the tensor algebra as the
//! span of left-normed brackets of generators.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::graded::{GradedLinearMap, GradedVectorSpace};
use crate::matrix::{sparse_axpy, SparseEchelon, SparseVector};
use crate::scalar::{is_odd, koszul, sign, zero_vector, Scalar};

use super::{BracketEntry, DgLieAlgebra, DgLieData, DgLieMorphism};

/// Size guards for constructions whose dimension grows quickly with a cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest total dimension a construction may realize.
    pub max_dimension: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_dimension: 4000 }
    }
}

impl Limits {
    pub fn check(&self, what: &str, dimension: usize) -> Result<()> {
        if dimension > self.max_dimension {
            return Err(Error::CutoffTooLarge(format!(
                "{what} would have dimension {dimension}, above the bound {}",
                self.max_dimension
            )));
        }
        Ok(())
    }
}

type Word = Vec<usize>;
type TensorElement = SparseVector<Word>;

/// Free graded Lie algebra on a complex of generators, truncated above a bracket weight.
///
/// Brackets whose weights add up past the cutoff are set to zero, so the realized
/// algebra is the free algebra modulo its weight > cutoff ideal.
#[derive(Clone, Debug)]
pub struct FreeDglaPresentation {
    generators: ChainComplex,
    weight_cutoff: usize,
    algebra: DgLieAlgebra,
    weights: Vec<usize>,
    tensors: Vec<TensorElement>,
    /// Per (degree, weight): echelon of the tensor images and the global index of each
    /// inserted basis element.
    components: BTreeMap<(i32, usize), (SparseEchelon<Word>, Vec<usize>)>,
}

fn tensor_product(x: &TensorElement, y: &TensorElement) -> TensorElement {
    let mut out = TensorElement::new();
    for (u, a) in x {
        for (v, b) in y {
            let mut w = u.clone();
            w.extend_from_slice(v);
            let entry = out.entry(w).or_insert_with(Scalar::zero);
            *entry += a * b;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `[x, y] = x ⊗ y − (−1)^{pq} y ⊗ x` for homogeneous `x, y` of degrees `p, q`.
fn commutator(x: &TensorElement, p: i32, y: &TensorElement, q: i32) -> TensorElement {
    let mut out = tensor_product(x, y);
    sparse_axpy(&mut out, &-sign(koszul(p, q)), &tensor_product(y, x));
    out
}

/// Extends a differential on generators to tensors as a derivation with Koszul signs.
fn tensor_differential(t: &TensorElement, degrees: &[i32], d_generators: &[Vec<(usize, Scalar)>]) -> TensorElement {
    let mut out = TensorElement::new();
    for (word, c) in t {
        let mut passed = 0;
        for (i, &letter) in word.iter().enumerate() {
            let s = sign(is_odd(passed)) * c;
            for (image, coeff) in &d_generators[letter] {
                let mut w = word.clone();
                w[i] = *image;
                let entry = out.entry(w).or_insert_with(Scalar::zero);
                *entry += &s * coeff;
            }
            passed += degrees[letter];
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

struct Candidate {
    degree: i32,
    weight: usize,
    label: String,
    tensor: TensorElement,
}

/// Realizes `Free(V)` through bracket weight `weight_cutoff`.
pub fn free_dgla(generators: &ChainComplex, weight_cutoff: usize, limits: Limits) -> Result<FreeDglaPresentation> {
    if weight_cutoff == 0 {
        return Err(Error::MalformedInput("weight cutoff must be at least 1".into()));
    }
    let gspace = generators.space();
    let n = gspace.total_dim();
    let gdeg = gspace.degree_table();
    limits.check("the generator space", n)?;

    let mut per_weight: Vec<Vec<Candidate>> = Vec::new();
    per_weight.push(
        (0..n)
            .map(|i| Candidate {
                degree: gdeg[i],
                weight: 1,
                label: gspace.display_label(i),
                tensor: [(vec![i], Scalar::one())].into_iter().collect(),
            })
            .collect(),
    );
    let mut total = n;
    for w in 2..=weight_cutoff {
        let previous = &per_weight[w - 2];
        limits.check(&format!("the weight-{w} candidate set"), previous.len() * n)?;
        let mut echelons: BTreeMap<i32, SparseEchelon<Word>> = BTreeMap::new();
        let mut kept = Vec::new();
        for b in previous {
            for g in 0..n {
                let t = commutator(&b.tensor, b.degree, &per_weight[0][g].tensor, gdeg[g]);
                if t.is_empty() {
                    continue;
                }
                let degree = b.degree + gdeg[g];
                if echelons.entry(degree).or_default().insert(&t) {
                    kept.push(Candidate { degree, weight: w, label: format!("[{},{}]", b.label, per_weight[0][g].label), tensor: t });
                }
            }
        }
        total += kept.len();
        limits.check(&format!("the free algebra through weight {w}"), total)?;
        per_weight.push(kept);
    }

    let mut all: Vec<Candidate> = per_weight.into_iter().flatten().collect();
    // Stable: keeps weight order, then creation order, inside each degree.
    all.sort_by_key(|c| c.degree);
    let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for c in &all {
        crate::graded::check_degree(c.degree as i64)?;
        degrees.entry(c.degree).or_default().push(c.label.clone());
    }
    let space = GradedVectorSpace::new(degrees)?;
    let weights: Vec<usize> = all.iter().map(|c| c.weight).collect();
    let tensors: Vec<TensorElement> = all.into_iter().map(|c| c.tensor).collect();
    let adeg = space.degree_table();

    let mut components: BTreeMap<(i32, usize), (SparseEchelon<Word>, Vec<usize>)> = BTreeMap::new();
    for (a, t) in tensors.iter().enumerate() {
        let (echelon, index) = components.entry((adeg[a], weights[a])).or_default();
        let independent = echelon.insert(t);
        debug_assert!(independent);
        index.push(a);
    }
    let express = |t: &TensorElement, degree: i32, weight: usize| -> Result<Vec<(usize, Scalar)>> {
        if t.is_empty() {
            return Ok(Vec::new());
        }
        let (echelon, index) = components
            .get(&(degree, weight))
            .ok_or_else(|| Error::Inconsistent("tensor lies outside the realized Lie span".into()))?;
        let coords = echelon
            .coordinates(t)
            .ok_or_else(|| Error::Inconsistent("tensor lies outside the realized Lie span".into()))?;
        Ok(coords.into_iter().map(|(k, c)| (index[k], c)).collect())
    };

    let d_generators: Vec<Vec<(usize, Scalar)>> = (0..n)
        .map(|i| {
            let mut e = zero_vector(n);
            e[i] = Scalar::one();
            generators
                .differential()
                .apply_global(&e)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect();

    let total = space.total_dim();
    let mut images = vec![zero_vector(total); total];
    for a in 0..total {
        let dt = tensor_differential(&tensors[a], &gdeg, &d_generators);
        for (k, c) in express(&dt, adeg[a] - 1, weights[a])? {
            images[a][k] = c;
        }
    }
    let differential = GradedLinearMap::from_global_images(space.clone(), space.clone(), -1, &images)?;

    let mut bracket = Vec::new();
    for a in 0..total {
        for b in a..total {
            if weights[a] + weights[b] > weight_cutoff || (a == b && !is_odd(adeg[a])) {
                continue;
            }
            let t = commutator(&tensors[a], adeg[a], &tensors[b], adeg[b]);
            for (output, coeff) in express(&t, adeg[a] + adeg[b], weights[a] + weights[b])? {
                bracket.push(BracketEntry { left: a, right: b, output, coeff });
            }
        }
    }
    let algebra = DgLieAlgebra::new(DgLieData { space, differential, bracket })?;
    Ok(FreeDglaPresentation { generators: generators.clone(), weight_cutoff, algebra, weights, tensors, components })
}

impl FreeDglaPresentation {
    pub fn algebra(&self) -> &DgLieAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &ChainComplex {
        &self.generators
    }

    pub fn weight_cutoff(&self) -> usize {
        self.weight_cutoff
    }

    pub fn weight_of(&self, a: usize) -> usize {
        self.weights[a]
    }

    /// Total dimension of each weight component, starting at weight 1.
    pub fn weight_dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.weight_cutoff];
        for &w in &self.weights {
            dims[w - 1] += 1;
        }
        dims
    }

    /// The weight-`w` component as a graded space.
    pub fn weight_component(&self, w: usize) -> GradedVectorSpace {
        let space = self.algebra.space();
        let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for a in (0..self.weights.len()).filter(|&a| self.weights[a] == w) {
            degrees.entry(space.degree_of(a)).or_default().push(space.label_of(a).to_string());
        }
        GradedVectorSpace::new(degrees).expect("labels are unique within the algebra")
    }

    /// Image of a basis element in the tensor algebra, as `(word, coefficient)` pairs.
    pub fn tensor_image(&self, a: usize) -> Vec<(Vec<usize>, Scalar)> {
        self.tensors[a].iter().map(|(w, c)| (w.clone(), c.clone())).collect()
    }
}

/// The morphism `Free(V) → Free(W)` induced by a chain map of generators; both sides
/// must use the same weight cutoff.
pub fn free_dgla_map(
    f: &ChainMap,
    source: &FreeDglaPresentation,
    target: &FreeDglaPresentation,
) -> Result<DgLieMorphism> {
    if source.weight_cutoff != target.weight_cutoff
        || f.source() != &source.generators
        || f.target() != &target.generators
    {
        return Err(Error::DimensionMismatch("generator map does not match the free algebras".into()));
    }
    let fm = f.map().global_matrix();
    let letter_images: Vec<Vec<(usize, Scalar)>> = (0..fm.cols())
        .map(|i| fm.column(i).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
        .collect();
    let tdeg = target.algebra.space().degree_table();
    let sdeg = source.algebra.space().degree_table();
    let mut images = Vec::with_capacity(source.tensors.len());
    for (a, t) in source.tensors.iter().enumerate() {
        let mut mapped = TensorElement::new();
        for (word, c) in t {
            let mut partial: Vec<(Word, Scalar)> = vec![(Vec::new(), c.clone())];
            for &letter in word {
                let mut next = Vec::new();
                for (w, coeff) in &partial {
                    for (image, ic) in &letter_images[letter] {
                        let mut w2 = w.clone();
                        w2.push(*image);
                        next.push((w2, coeff * ic));
                    }
                }
                partial = next;
            }
            for (w, coeff) in partial {
                let entry = mapped.entry(w).or_insert_with(Scalar::zero);
                *entry += coeff;
            }
        }
        mapped.retain(|_, c| !c.is_zero());
        let mut image = zero_vector(tdeg.len());
        if !mapped.is_empty() {
            let (echelon, index) = target
                .components
                .get(&(sdeg[a], source.weights[a]))
                .ok_or_else(|| Error::Inconsistent("image outside the target free algebra".into()))?;
            let coords = echelon
                .coordinates(&mapped)
                .ok_or_else(|| Error::Inconsistent("image outside the target free algebra".into()))?;
            for (k, c) in coords {
                image[index[k]] = c;
            }
        }
        images.push(image);
    }
    let map = GradedLinearMap::from_global_images(source.algebra.space().clone(), target.algebra.space().clone(), 0, &images)?;
    DgLieMorphism::new(source.algebra.clone(), target.algebra.clone(), map)
}
