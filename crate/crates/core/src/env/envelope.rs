use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::ChainComplex;
use crate::dgla::{DgLieAlgebra, Limits};
use crate::error::{Error, Result};
use crate::graded::{sym_power_dims, GradedLinearMap, GradedVectorSpace};
use crate::matrix::{sparse_axpy, SparseEchelon, SparseVector};
use crate::scalar::{factorial, frac, is_odd, koszul, sign, zero_vector, Scalar};

type Word = Vec<usize>;

/// Result of an operation that may leave the truncation window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Windowed<T> {
    InWindow(T),
    /// The true result involves words of `length` letters, beyond the cutoff.
    OutOfWindow { length: usize, cutoff: usize },
}

impl<T> Windowed<T> {
    pub fn in_window(self) -> Option<T> {
        match self {
            Windowed::InWindow(t) => Some(t),
            Windowed::OutOfWindow { .. } => None,
        }
    }
}

/// `U(g)^{≤n}` in its PBW monomial basis.
///
/// A monomial is a weakly increasing word in the global basis order of `g` (degree,
/// then index) in which odd elements do not repeat. Elements of the envelope are
/// sparse vectors over monomial indices.
#[derive(Clone, Debug)]
pub struct FilteredEnvelope {
    lie: DgLieAlgebra,
    cutoff: usize,
    monomials: Vec<Word>,
    index: BTreeMap<Word, usize>,
    complex: ChainComplex,
    /// Vectors added at each filtration level, with their degree.
    level_additions: Vec<Vec<(i32, SparseVector<usize>)>>,
}

fn is_pbw(word: &[usize], degrees: &[i32]) -> bool {
    word.windows(2).all(|p| p[0] < p[1] || (p[0] == p[1] && !is_odd(degrees[p[0]])))
}

fn pbw_words(degrees: &[i32], cutoff: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..cutoff {
        let mut next = Vec::new();
        for w in &frontier {
            let start = w.last().copied().unwrap_or(0);
            for a in start..degrees.len() {
                if w.last() == Some(&a) && is_odd(degrees[a]) {
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

/// Builds `U(g)^{≤cutoff}` and its filtration.
pub fn universal_enveloping(g: &DgLieAlgebra, cutoff: usize, limits: Limits) -> Result<FilteredEnvelope> {
    let degrees = g.degrees();
    let expected: usize = (0..=cutoff).map(|m| sym_power_dims(degrees, m).values().sum::<usize>()).sum();
    limits.check(&format!("U(g) through filtration level {cutoff}"), expected)?;
    let mut words = pbw_words(degrees, cutoff);
    let word_degree = |w: &Word| w.iter().map(|&a| degrees[a]).sum::<i32>();
    words.sort_by(|a, b| (word_degree(a), a.len(), a).cmp(&(word_degree(b), b.len(), b)));

    let mut labels: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for w in &words {
        let label = if w.is_empty() {
            "1".to_string()
        } else {
            w.iter().map(|&a| g.label(a)).collect::<Vec<_>>().join("·")
        };
        labels.entry(crate::graded::check_degree(word_degree(w) as i64)?).or_default().push(label);
    }
    let space = GradedVectorSpace::new(labels)?;
    let index: BTreeMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();

    let mut env = FilteredEnvelope {
        lie: g.clone(),
        cutoff,
        monomials: words,
        index,
        complex: ChainComplex::zero_differential(space.clone()),
        level_additions: Vec::new(),
    };

    let total = space.total_dim();
    let mut images = vec![zero_vector(total); total];
    for (i, w) in env.monomials.iter().enumerate() {
        for (k, c) in env.differential_word(w) {
            images[i][k] = c;
        }
    }
    let differential = GradedLinearMap::from_global_images(space.clone(), space, -1, &images)?;
    env.complex = ChainComplex::new(differential)?;
    env.build_filtration();
    Ok(env)
}

impl FilteredEnvelope {
    pub fn lie(&self) -> &DgLieAlgebra {
        &self.lie
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn space(&self) -> &GradedVectorSpace {
        self.complex.space()
    }

    /// `U^{≤cutoff}` with the differential extended from `g` as a derivation.
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomial(&self, i: usize) -> &[usize] {
        &self.monomials[i]
    }

    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn unit(&self) -> usize {
        self.index[&Vec::new()]
    }

    /// Degree of an envelope basis monomial.
    pub fn degree(&self, i: usize) -> i32 {
        self.monomials[i].iter().map(|&a| self.lie.degree(a)).sum()
    }

    /// The image of a vector of `g` in `U^{≤1}`.
    pub fn embed(&self, x: &[Scalar]) -> SparseVector<usize> {
        x.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| (self.index[&vec![a]], c.clone()))
            .collect()
    }

    /// Normal form of an arbitrary word of `g`-basis letters (leftmost rewriting).
    pub fn normal_form(&self, word: &[usize]) -> SparseVector<usize> {
        self.normal_form_with(word, &mut |_| 0)
    }

    /// Normal form where `choose` picks which of the current violations to rewrite;
    /// it receives the violating positions and returns an index into that list.
    pub fn normal_form_with(&self, word: &[usize], choose: &mut dyn FnMut(&[usize]) -> usize) -> SparseVector<usize> {
        let degrees = self.lie.degrees();
        let mut pending: SparseVector<Word> = [(word.to_vec(), Scalar::one())].into_iter().collect();
        let mut done: SparseVector<Word> = SparseVector::new();
        while let Some((w, c)) = pending.pop_first() {
            let violations: Vec<usize> = (0..w.len().saturating_sub(1))
                .filter(|&i| w[i] > w[i + 1] || (w[i] == w[i + 1] && is_odd(degrees[w[i]])))
                .collect();
            if violations.is_empty() {
                sparse_axpy(&mut done, &c, &[(w, Scalar::one())].into_iter().collect());
                continue;
            }
            let i = violations[choose(&violations).min(violations.len() - 1)];
            let (y, x) = (w[i], w[i + 1]);
            let mut terms: SparseVector<Word> = SparseVector::new();
            let bracket_scale = if y == x {
                // x x = ½ [x, x] for odd x
                frac(1, 2)
            } else {
                // y x = (−1)^{|x||y|} x y + [y, x]
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                terms.insert(swapped, sign(koszul(degrees[x], degrees[y])));
                Scalar::one()
            };
            for (z, bc) in self.lie.bracket_basis(y, x).into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let mut shorter = w[..i].to_vec();
                shorter.push(z);
                shorter.extend_from_slice(&w[i + 2..]);
                sparse_axpy(&mut terms, &(&bracket_scale * bc), &[(shorter, Scalar::one())].into_iter().collect());
            }
            sparse_axpy(&mut pending, &c, &terms);
        }
        done.into_iter().map(|(w, c)| (self.index[&w], c)).collect()
    }

    fn differential_word(&self, word: &[usize]) -> SparseVector<usize> {
        let mut out = SparseVector::new();
        let mut passed = 0;
        for (i, &a) in word.iter().enumerate() {
            let s = sign(is_odd(passed));
            for (b, c) in self.lie.d_basis(a).into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let mut w = word.to_vec();
                w[i] = b;
                sparse_axpy(&mut out, &(&s * c), &self.normal_form(&w));
            }
            passed += self.lie.degree(a);
        }
        out
    }

    pub fn d(&self, x: &SparseVector<usize>) -> SparseVector<usize> {
        let mut out = SparseVector::new();
        for (&i, c) in x {
            sparse_axpy(&mut out, c, &self.differential_word(&self.monomials[i]));
        }
        out
    }

    pub fn product_basis(&self, i: usize, j: usize) -> Windowed<SparseVector<usize>> {
        let (u, v) = (&self.monomials[i], &self.monomials[j]);
        if u.len() + v.len() > self.cutoff {
            return Windowed::OutOfWindow { length: u.len() + v.len(), cutoff: self.cutoff };
        }
        let mut w = u.clone();
        w.extend_from_slice(v);
        Windowed::InWindow(self.normal_form(&w))
    }

    /// Product of two elements; out of window as soon as one pair of terms is.
    pub fn product(&self, x: &SparseVector<usize>, y: &SparseVector<usize>) -> Windowed<SparseVector<usize>> {
        let mut out = SparseVector::new();
        for (&i, a) in x {
            for (&j, b) in y {
                match self.product_basis(i, j) {
                    Windowed::InWindow(p) => sparse_axpy(&mut out, &(a * b), &p),
                    Windowed::OutOfWindow { length, cutoff } => return Windowed::OutOfWindow { length, cutoff },
                }
            }
        }
        Windowed::InWindow(out)
    }

    /// Filtration level of a monomial-supported element: its longest word.
    pub fn length(&self, x: &SparseVector<usize>) -> usize {
        x.keys().map(|&i| self.monomials[i].len()).max().unwrap_or(0)
    }

    fn build_filtration(&mut self) {
        let n = self.lie.dim();
        let mut echelons: BTreeMap<i32, SparseEchelon<usize>> = BTreeMap::new();
        let unit: SparseVector<usize> = [(self.unit(), Scalar::one())].into_iter().collect();
        echelons.entry(0).or_default().insert(&unit);
        self.level_additions.push(vec![(0, unit)]);
        for _ in 1..=self.cutoff {
            let previous = self.level_additions.last().cloned().unwrap_or_default();
            let mut added = Vec::new();
            for (deg, v) in &previous {
                for a in 0..n {
                    let ga = self.embed(&crate::scalar::unit_vector(n, a));
                    let Windowed::InWindow(p) = self.product(&ga, v) else {
                        unreachable!("level below the cutoff times a generator stays in the window")
                    };
                    let degree = deg + self.lie.degree(a);
                    if echelons.entry(degree).or_default().insert(&p) {
                        added.push((degree, p));
                    }
                }
            }
            self.level_additions.push(added);
        }
    }

    /// Degreewise dimensions of `U^{≤m}` spanned by products of at most `m` elements.
    pub fn level_dims(&self, m: usize) -> Result<BTreeMap<i32, usize>> {
        if m > self.cutoff {
            return Err(Error::IndexOutOfFiltration { index: m, cutoff: self.cutoff });
        }
        let mut dims = BTreeMap::new();
        for level in &self.level_additions[..=m] {
            for (deg, _) in level {
                *dims.entry(*deg).or_insert(0) += 1;
            }
        }
        Ok(dims)
    }

    /// A basis of `U^{≤m}`.
    pub fn level_basis(&self, m: usize) -> Result<Vec<(i32, SparseVector<usize>)>> {
        if m > self.cutoff {
            return Err(Error::IndexOutOfFiltration { index: m, cutoff: self.cutoff });
        }
        Ok(self.level_additions[..=m].iter().flatten().cloned().collect())
    }

    fn gr_dims(&self, m: usize) -> BTreeMap<i32, usize> {
        let mut dims = BTreeMap::new();
        for (deg, _) in &self.level_additions[m] {
            *dims.entry(*deg).or_insert(0) += 1;
        }
        dims
    }
}

/// `gr^m U = U^{≤m} / U^{≤m−1}` as a graded space.
///
/// Dimensions come from the filtration ranks; basis labels are those of the length-`m`
/// PBW monomials when their count matches, and positional labels otherwise.
pub fn associated_graded(e: &FilteredEnvelope, m: usize) -> Result<GradedVectorSpace> {
    if m > e.cutoff {
        return Err(Error::IndexOutOfFiltration { index: m, cutoff: e.cutoff });
    }
    let dims = e.gr_dims(m);
    let mut degrees = Vec::new();
    for (&deg, &dim) in &dims {
        let pbw: Vec<String> = e
            .space()
            .range(deg)
            .filter(|&i| e.monomials[i].len() == m)
            .map(|i| e.space().label_of(i).to_string())
            .collect();
        let labels = if pbw.len() == dim { pbw } else { (0..dim).map(|i| format!("gr{m}[{i}]")).collect() };
        degrees.push((deg, labels));
    }
    GradedVectorSpace::new(degrees)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// The averaging map `Sym^m(g) → U(g)`:
/// `x_1 ⋯ x_m ↦ (1/m!) Σ_σ ε(σ) x_{σ(1)} ⋯ x_{σ(m)}` with Koszul signs `ε(σ)`.
pub fn symmetrize(e: &FilteredEnvelope, word: &[usize]) -> Windowed<SparseVector<usize>> {
    let m = word.len();
    if m > e.cutoff {
        return Windowed::OutOfWindow { length: m, cutoff: e.cutoff };
    }
    let degrees = e.lie.degrees();
    let mut out = SparseVector::new();
    for perm in permutations(m) {
        let mut odd = false;
        for i in 0..m {
            for j in i + 1..m {
                if perm[i] > perm[j] {
                    odd ^= koszul(degrees[word[perm[i]]], degrees[word[perm[j]]]);
                }
            }
        }
        let permuted: Vec<usize> = perm.iter().map(|&k| word[k]).collect();
        sparse_axpy(&mut out, &sign(odd), &e.normal_form(&permuted));
    }
    let scale = Scalar::one() / factorial(m);
    Windowed::InWindow(out.into_iter().map(|(k, c)| (k, c * &scale)).collect())
}

/// Per level and degree: `Sym^m` dimension, `gr^m` dimension from the filtration, and
/// the rank of the symmetrized `Sym^m` basis modulo `U^{≤m−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub level: usize,
    pub degree: i32,
    pub sym: usize,
    pub gr: usize,
    pub symmetrized: usize,
}

impl LevelCheck {
    pub fn passes(&self) -> bool {
        self.sym == self.gr && self.gr == self.symmetrized
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymGrReport {
    pub checks: Vec<LevelCheck>,
}

impl SymGrReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(LevelCheck::passes)
    }

    pub fn failures(&self) -> Vec<&LevelCheck> {
        self.checks.iter().filter(|c| !c.passes()).collect()
    }
}

/// Compares `gr^m U(g)` with `Sym^m(g)` degreewise for `m ≤ cutoff`.
pub fn sym_vs_gr_check(g: &DgLieAlgebra, cutoff: usize, limits: Limits) -> Result<SymGrReport> {
    let e = universal_enveloping(g, cutoff, limits)?;
    let degrees = g.degrees();
    let words = pbw_words(degrees, cutoff);
    let mut checks = Vec::new();
    for m in 0..=cutoff {
        let sym = sym_power_dims(degrees, m);
        let gr = e.gr_dims(m);
        let mut below: BTreeMap<i32, SparseEchelon<usize>> = BTreeMap::new();
        if m > 0 {
            for (deg, v) in e.level_basis(m - 1)? {
                below.entry(deg).or_default().insert(&v);
            }
        }
        let mut symmetrized: BTreeMap<i32, usize> = BTreeMap::new();
        for w in words.iter().filter(|w| w.len() == m) {
            debug_assert!(is_pbw(w, degrees));
            let deg: i32 = w.iter().map(|&a| degrees[a]).sum();
            let Windowed::InWindow(v) = symmetrize(&e, w) else { unreachable!() };
            if below.entry(deg).or_default().insert(&v) {
                *symmetrized.entry(deg).or_insert(0) += 1;
            }
        }
        let all: std::collections::BTreeSet<i32> = sym.keys().chain(gr.keys()).chain(symmetrized.keys()).copied().collect();
        for degree in all {
            checks.push(LevelCheck {
                level: m,
                degree,
                sym: sym.get(&degree).copied().unwrap_or(0),
                gr: gr.get(&degree).copied().unwrap_or(0),
                symmetrized: symmetrized.get(&degree).copied().unwrap_or(0),
            });
        }
    }
    Ok(SymGrReport { checks })
}
