//! Chevalley–Eilenberg chains `Sym(g[1])` with the two-sum differential, its weight
//! filtration, functoriality, and the dual commutative dg algebra of cochains.
//!
//! A basis element `x ∈ g_p` becomes a generator `sx` of degree `p + 1`. Monomials are
//! words of generators sorted by global index; generators of odd shifted degree
//! appear at most once. The differential is the coderivation of the symmetric
//! coalgebra determined by
//!
//! ```text
//! Q1(sx) = s(dx),    Q2(sx · sy) = (−1)^{|x|} s[x, y]
//! ```
//!
//! so that on a monomial
//!
//! ```text
//! D(v_1⋯v_n) = Σ_i (−1)^{|v_1|+⋯+|v_{i−1}|} v_1⋯Q1(v_i)⋯v_n
//!            + Σ_{i<j} ε_{ij} Q2(v_i v_j) · v_1⋯v̂_i⋯v̂_j⋯v_n
//! ```
//!
//! where `ε_{ij}` is the Koszul sign (shifted degrees) of moving `v_i v_j` to the front.

mod cochain;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

pub use cochain::{ce_cochain_algebra, CECochainAlgebra};

use crate::complex::{ChainComplex, ChainMap};
use crate::dgla::{DgLieAlgebra, DgLieMorphism, Limits};
use crate::error::{Error, Result};
use crate::graded::{check_degree, sym_power_dims, GradedLinearMap, GradedVectorSpace};
use crate::matrix::{sparse_axpy, SparseVector};
use crate::scalar::{is_odd, koszul, sign, zero_vector, Scalar};

pub(crate) type Word = Vec<usize>;

/// Sorts a word of generators into canonical order; `None` when a generator of odd
/// shifted degree repeats. The flag is the parity of the Koszul sign of sorting.
pub(crate) fn canonicalize(word: &[usize], shifted: &[i32]) -> Option<(Word, bool)> {
    let mut w = word.to_vec();
    let mut odd = false;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            odd ^= koszul(shifted[w[j - 1]], shifted[w[j]]);
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1] && is_odd(shifted[p[0]])) {
        return None;
    }
    Some((w, odd))
}

fn monomial_words(shifted: &[i32], cutoff: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..cutoff {
        let mut next = Vec::new();
        for w in &frontier {
            let start = w.last().copied().unwrap_or(0);
            for a in start..shifted.len() {
                if w.last() == Some(&a) && is_odd(shifted[a]) {
                    continue;
                }
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Whether a computed homology group is the true one or only that of the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "validity", rename_all = "kebab-case")]
pub enum Validity {
    Exact,
    TruncatedWindow { cutoff: usize },
}

/// The homological Chevalley–Eilenberg complex through a weight cutoff.
#[derive(Clone, Debug)]
pub struct CEChainComplex {
    source: DgLieAlgebra,
    weight_cutoff: usize,
    shifted: Vec<i32>,
    monomials: Vec<Word>,
    index: BTreeMap<Word, usize>,
    complex: ChainComplex,
}

/// Builds `C_*(g)` on monomials of weight at most `weight_cutoff`.
pub fn ce_chain_complex(g: &DgLieAlgebra, weight_cutoff: usize, limits: Limits) -> Result<CEChainComplex> {
    let shifted: Vec<i32> = g.degrees().iter().map(|p| p + 1).collect();
    let expected: usize = (0..=weight_cutoff).map(|m| sym_power_dims(&shifted, m).values().sum::<usize>()).sum();
    limits.check(&format!("the CE complex through weight {weight_cutoff}"), expected)?;
    let mut words = monomial_words(&shifted, weight_cutoff);
    let deg = |w: &Word| w.iter().map(|&a| shifted[a]).sum::<i32>();
    words.sort_by(|a, b| (deg(a), a.len(), a).cmp(&(deg(b), b.len(), b)));
    let mut labels: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for w in &words {
        let label = if w.is_empty() { "1".to_string() } else { w.iter().map(|&a| g.label(a)).collect::<Vec<_>>().join("·") };
        labels.entry(check_degree(deg(w) as i64)?).or_default().push(label);
    }
    let space = GradedVectorSpace::new(labels)?;
    let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut ce = CEChainComplex {
        source: g.clone(),
        weight_cutoff,
        shifted,
        monomials: words,
        index,
        complex: ChainComplex::zero_differential(space.clone()),
    };
    let n = space.total_dim();
    let mut images = vec![zero_vector(n); n];
    for i in 0..n {
        let mut image = ce.d1_word(&ce.monomials[i]);
        sparse_axpy(&mut image, &Scalar::one(), &ce.d2_word(&ce.monomials[i]));
        for (k, c) in image {
            images[i][k] = c;
        }
    }
    let differential = GradedLinearMap::from_global_images(space.clone(), space, -1, &images)?;
    ce.complex = ChainComplex::new(differential)?;
    Ok(ce)
}

impl CEChainComplex {
    pub fn source(&self) -> &DgLieAlgebra {
        &self.source
    }

    pub fn weight_cutoff(&self) -> usize {
        self.weight_cutoff
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn space(&self) -> &GradedVectorSpace {
        self.complex.space()
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Degrees of the generators `sx`.
    pub fn shifted_degrees(&self) -> &[i32] {
        &self.shifted
    }

    pub fn monomial(&self, i: usize) -> &[usize] {
        &self.monomials[i]
    }

    pub fn weight(&self, i: usize) -> usize {
        self.monomials[i].len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.monomials[i].iter().map(|&a| self.shifted[a]).sum()
    }

    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Adds `coeff · ±word` (after canonicalization) to `out`.
    fn add_word(&self, out: &mut SparseVector<usize>, coeff: &Scalar, word: &[usize]) {
        if let Some((w, odd)) = canonicalize(word, &self.shifted) {
            let k = self.index[&w];
            let entry = out.entry(k).or_insert_with(Scalar::zero);
            *entry += sign(odd) * coeff;
            if entry.is_zero() {
                out.remove(&k);
            }
        }
    }

    /// The weight-preserving part `D1` on a canonical word.
    pub(crate) fn d1_word(&self, w: &[usize]) -> SparseVector<usize> {
        let mut out = SparseVector::new();
        let mut passed = 0;
        for i in 0..w.len() {
            let s = sign(is_odd(passed));
            for (b, c) in self.source.d_basis(w[i]).into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let mut v = w.to_vec();
                v[i] = b;
                self.add_word(&mut out, &(&s * c), &v);
            }
            passed += self.shifted[w[i]];
        }
        out
    }

    /// The weight-lowering part `D2` on a canonical word.
    pub(crate) fn d2_word(&self, w: &[usize]) -> SparseVector<usize> {
        let mut out = SparseVector::new();
        if self.source.is_abelian() {
            return out;
        }
        let s = &self.shifted;
        for j in 0..w.len() {
            for i in 0..j {
                let before_i: i32 = w[..i].iter().map(|&a| s[a]).sum();
                let between: i32 = w[i + 1..j].iter().map(|&a| s[a]).sum();
                // v_i jumps over v_1⋯v_{i−1}; v_j over v_1⋯v̂_i⋯v_{j−1}
                let mut odd = koszul(s[w[i]], before_i) ^ koszul(s[w[j]], before_i + between);
                // décalage sign of Q2
                odd ^= is_odd(self.source.degree(w[i]));
                let rest: Vec<usize> = w.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &a)| a).collect();
                let bracket = self.source.bracket_basis(w[i], w[j]);
                for (z, c) in bracket.into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let mut v = vec![z];
                    v.extend_from_slice(&rest);
                    self.add_word(&mut out, &(sign(odd) * c), &v);
                }
            }
        }
        out
    }

    /// `D1` and `D2` as separate maps.
    pub fn differential_parts(&self) -> Result<(GradedLinearMap, GradedLinearMap)> {
        let n = self.dim();
        let mut d1 = vec![zero_vector(n); n];
        let mut d2 = vec![zero_vector(n); n];
        for i in 0..n {
            for (k, c) in self.d1_word(&self.monomials[i]) {
                d1[i][k] = c;
            }
            for (k, c) in self.d2_word(&self.monomials[i]) {
                d2[i][k] = c;
            }
        }
        let sp = self.space();
        Ok((
            GradedLinearMap::from_global_images(sp.clone(), sp.clone(), -1, &d1)?,
            GradedLinearMap::from_global_images(sp.clone(), sp.clone(), -1, &d2)?,
        ))
    }

    /// Largest monomial weight occurring in homological degree `h` of the full
    /// `Sym(g[1])`, or `None` when that degree receives unboundedly many weights.
    fn max_weight_in_degree(&self, h: i32) -> Option<usize> {
        let s = &self.shifted;
        if s.is_empty() {
            return Some(0);
        }
        let positive = s.iter().all(|&d| d > 0);
        let negative = s.iter().all(|&d| d < 0);
        if !positive && !negative {
            return None;
        }
        let smallest = s.iter().map(|d| d.abs()).min().unwrap();
        if (positive && h < 0) || (negative && h > 0) {
            return Some(0);
        }
        let bound = (h.unsigned_abs() / smallest as u32) as usize;
        Some((0..=bound).rev().find(|&m| sym_power_dims(s, m).contains_key(&h)).unwrap_or(0))
    }

    /// Exact when every monomial of degrees `h` and `h + 1` lies inside the window.
    pub fn validity(&self, h: i32) -> Validity {
        let needed = [h, h + 1].iter().map(|&d| self.max_weight_in_degree(d)).collect::<Option<Vec<_>>>();
        match needed {
            Some(ws) if ws.iter().all(|&w| w <= self.weight_cutoff) => Validity::Exact,
            _ => Validity::TruncatedWindow { cutoff: self.weight_cutoff },
        }
    }

    /// Golden-file form: basis monomials as sorted label lists, `D` as sparse triples
    /// `(source, target, coefficient)`.
    pub fn to_json(&self) -> serde_json::Value {
        let basis: Vec<_> = (0..self.dim())
            .map(|i| {
                serde_json::json!({
                    "degree": self.degree(i),
                    "weight": self.weight(i),
                    "monomial": self.monomials[i].iter().map(|&a| self.source.label(a)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let d = self.complex.differential().global_matrix();
        let mut triples = Vec::new();
        for col in 0..d.cols() {
            for row in 0..d.rows() {
                let c = d.get(row, col);
                if !c.is_zero() {
                    triples.push(serde_json::json!([col, row, c.to_string()]));
                }
            }
        }
        serde_json::json!({ "weight_cutoff": self.weight_cutoff, "basis": basis, "differential": triples })
    }
}

/// A CE homology group with its validity annotation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CEHomology {
    pub degree: i32,
    pub dimension: usize,
    #[serde(flatten)]
    pub validity: Validity,
}

pub fn ce_homology(g: &DgLieAlgebra, degree: i32, weight_cutoff: usize, limits: Limits) -> Result<CEHomology> {
    let c = ce_chain_complex(g, weight_cutoff, limits)?;
    Ok(c.homology(degree))
}

impl CEChainComplex {
    pub fn homology(&self, degree: i32) -> CEHomology {
        CEHomology { degree, dimension: self.complex.homology(degree).dimension, validity: self.validity(degree) }
    }
}

/// The weight filtration `C^{≤0} ⊂ ⋯ ⊂ C^{≤cutoff}` and its quotient complexes.
#[derive(Clone, Debug)]
pub struct CEFiltration {
    /// Degreewise dimensions of `C^{≤n}`.
    pub level_dims: Vec<BTreeMap<i32, usize>>,
    /// `C^{≤n} / C^{≤n−1}` with the induced differential.
    pub quotients: Vec<ChainComplex>,
    /// Whether `D` maps every level into itself.
    pub stable: bool,
}

pub fn filtration(c: &CEChainComplex) -> Result<CEFiltration> {
    let d = c.complex.differential().global_matrix();
    let stable = (0..c.dim()).all(|i| (0..c.dim()).all(|k| d.get(k, i).is_zero() || c.weight(k) <= c.weight(i)));
    let mut level_dims = Vec::new();
    let mut quotients = Vec::new();
    for n in 0..=c.weight_cutoff {
        let mut dims = BTreeMap::new();
        for i in (0..c.dim()).filter(|&i| c.weight(i) <= n) {
            *dims.entry(c.degree(i)).or_insert(0) += 1;
        }
        level_dims.push(dims);
        let members: Vec<usize> = (0..c.dim()).filter(|&i| c.weight(i) == n).collect();
        let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for &i in &members {
            degrees.entry(c.degree(i)).or_default().push(c.space().label_of(i).to_string());
        }
        let space = GradedVectorSpace::new(degrees)?;
        let position: BTreeMap<usize, usize> = members
            .iter()
            .map(|&i| {
                let (deg, _) = c.space().locate(i);
                let local = space.index_of(deg, c.space().label_of(i)).unwrap();
                (i, space.global(deg, local))
            })
            .collect();
        let mut images = vec![zero_vector(members.len()); members.len()];
        for &i in &members {
            for &k in &members {
                let v = d.get(k, i);
                if !v.is_zero() {
                    images[position[&i]][position[&k]] = v.clone();
                }
            }
        }
        let differential = GradedLinearMap::from_global_images(space.clone(), space, -1, &images)?;
        quotients.push(ChainComplex::new(differential)?);
    }
    Ok(CEFiltration { level_dims, quotients, stable })
}

/// `C_*(f) : C_*(g) → C_*(h)` applying `f` to every factor of a monomial.
pub fn induced_chain_map(f: &DgLieMorphism, source: &CEChainComplex, target: &CEChainComplex) -> Result<ChainMap> {
    if source.source() != f.source() || target.source() != f.target() || source.weight_cutoff != target.weight_cutoff {
        return Err(Error::DimensionMismatch("CE complexes do not match the morphism".into()));
    }
    let m = f.linear_map().global_matrix();
    let letter_images: Vec<Vec<(usize, Scalar)>> = (0..m.cols())
        .map(|a| m.column(a).into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect())
        .collect();
    let mut images = Vec::with_capacity(source.dim());
    for i in 0..source.dim() {
        let mut partial: Vec<(Word, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for &a in source.monomial(i) {
            let mut next = Vec::new();
            for (w, c) in &partial {
                for (b, cb) in &letter_images[a] {
                    let mut v = w.clone();
                    v.push(*b);
                    next.push((v, c * cb));
                }
            }
            partial = next;
        }
        let mut out = SparseVector::new();
        for (w, c) in partial {
            target.add_word(&mut out, &c, &w);
        }
        let mut image = zero_vector(target.dim());
        for (k, c) in out {
            image[k] = c;
        }
        images.push(image);
    }
    let map = GradedLinearMap::from_global_images(source.space().clone(), target.space().clone(), 0, &images)?;
    ChainMap::new(source.complex.clone(), target.complex.clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgla::{cone, DgLieData};
    use crate::scalar::int;

    fn sl2() -> DgLieAlgebra {
        DgLieAlgebra::new(crate::dgla::tests::sl2_data(2)).unwrap()
    }

    fn abelian(degrees: &[(i32, &[&str])]) -> DgLieAlgebra {
        let space = GradedVectorSpace::from_labels(degrees).unwrap();
        DgLieAlgebra::new(DgLieData {
            differential: GradedLinearMap::zero(space.clone(), space.clone(), -1),
            space,
            bracket: vec![],
        })
        .unwrap()
    }

    #[test]
    fn canonical_order_signs() {
        // two odd shifted generators anticommute; even ones commute
        assert_eq!(canonicalize(&[1, 0], &[1, 1]), Some((vec![0, 1], true)));
        assert_eq!(canonicalize(&[1, 0], &[2, 1]), Some((vec![0, 1], false)));
        assert_eq!(canonicalize(&[0, 0], &[1]), None);
        assert_eq!(canonicalize(&[0, 0], &[2]), Some((vec![0, 0], false)));
    }

    #[test]
    fn sl2_chains() {
        let c = ce_chain_complex(&sl2(), 3, Limits::default()).unwrap();
        assert_eq!(c.space().dims(), [(0, 1), (1, 3), (2, 3), (3, 1)].into());
        let dims: Vec<usize> = (0..4).map(|h| c.homology(h).dimension).collect();
        assert_eq!(dims, vec![1, 0, 0, 1]);
        assert!((0..4).all(|h| c.validity(h) == Validity::Exact));
    }

    #[test]
    fn one_dimensional_abelian() {
        let c = ce_chain_complex(&abelian(&[(0, &["x"])]), 4, Limits::default()).unwrap();
        assert_eq!(c.space().dims(), [(0, 1), (1, 1)].into());
        assert!(c.complex().differential().is_zero());
        let c2 = ce_chain_complex(&abelian(&[(0, &["x", "y"])]), 2, Limits::default()).unwrap();
        let dims: Vec<usize> = (0..3).map(|h| c2.homology(h).dimension).collect();
        assert_eq!(dims, vec![1, 2, 1]);
    }

    #[test]
    fn cone_of_sl2() {
        let cn = cone(&sl2()).unwrap().algebra;
        let c = ce_chain_complex(&cn, 3, Limits::default()).unwrap();
        assert_eq!(c.homology(0).dimension, 1);
        for h in 1..=2 {
            let hom = c.homology(h);
            assert_eq!(hom.dimension, 0, "degree {h}");
            assert_eq!(hom.validity, Validity::Exact);
        }
        // degree 4 needs at most weight 3 (sε·sε'·sε'' is impossible), degree 5 needs 4
        assert_eq!(c.validity(3), Validity::Exact);
        assert_eq!(c.validity(4), Validity::TruncatedWindow { cutoff: 3 });
    }

    #[test]
    fn weight_bookkeeping() {
        let cn = cone(&sl2()).unwrap().algebra;
        let c = ce_chain_complex(&cn, 3, Limits::default()).unwrap();
        let (d1, d2) = c.differential_parts().unwrap();
        let (m1, m2) = (d1.global_matrix(), d2.global_matrix());
        for i in 0..c.dim() {
            for k in 0..c.dim() {
                if !m1.get(k, i).is_zero() {
                    assert_eq!(c.weight(k), c.weight(i));
                }
                if !m2.get(k, i).is_zero() {
                    assert_eq!(c.weight(k) + 1, c.weight(i));
                }
            }
        }
        let f = filtration(&c).unwrap();
        assert!(f.stable);
        assert_eq!(f.level_dims[0], [(0, 1)].into());
    }

    #[test]
    fn filtration_quotients_are_symmetric_powers() {
        let c = ce_chain_complex(&sl2(), 3, Limits::default()).unwrap();
        let f = filtration(&c).unwrap();
        assert_eq!(f.quotients[2].space().dims(), [(2, 3)].into());
        for (n, q) in f.quotients.iter().enumerate() {
            assert_eq!(q.space().dims(), sym_power_dims(c.shifted_degrees(), n));
        }
    }

    #[test]
    fn identity_induces_identity() {
        let g = sl2();
        let c = ce_chain_complex(&g, 3, Limits::default()).unwrap();
        let id = induced_chain_map(&DgLieMorphism::identity(&g), &c, &c).unwrap();
        assert_eq!(id, ChainMap::identity(c.complex()));
        let zero = ce_chain_complex(&DgLieAlgebra::zero(), 3, Limits::default()).unwrap();
        let p = induced_chain_map(&DgLieMorphism::to_zero(&g), &c, &zero).unwrap();
        assert_eq!(p.map().global_matrix().rank(), 1);
        assert_eq!(p.map().global_matrix().get(0, 0), &int(1));
    }
}
