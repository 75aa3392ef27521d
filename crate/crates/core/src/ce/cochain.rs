//! `C^*(g)`, the linear dual of the CE chains, as a commutative dg algebra.
//!
//! The dual of a chain monomial of degree `h` sits in internal degree `−h`, so the
//! dual differential `δλ = (−1)^{|λ|} λ ∘ D` again lowers internal degree by one;
//! cohomological degree `c` is internal degree `−c`. For a monomial `x_1⋯x_n`,
//!
//! ```text
//! (λμ)(x_1⋯x_n) = Σ_{S ⊔ S'} Π_{i∈S, j∈S', i<j} (−1)^{|x_i||x_j|} λ(x_S) μ(x_{S'})
//! ```
//!
//! with the degrees of the shifted generators.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{canonicalize, ce_chain_complex, CEChainComplex, CEHomology};
use crate::complex::ChainComplex;
use crate::dgla::{DgLieAlgebra, Limits};
use crate::env::Windowed;
use crate::error::{Error, Result};
use crate::graded::{GradedLinearMap, GradedVectorSpace};
use crate::matrix::{sparse_axpy, SparseVector};
use crate::report::{Axiom, ValidationReport};
use crate::scalar::{is_odd, koszul, sign, zero_vector, Scalar};

#[derive(Clone, Debug)]
pub struct CECochainAlgebra {
    chains: CEChainComplex,
    complex: ChainComplex,
    /// Dual basis position of each chain monomial, and back.
    dual_of: Vec<usize>,
    chain_of: Vec<usize>,
}

/// Builds `C^*(g)` through a weight cutoff and verifies the CDGA axioms in the window.
pub fn ce_cochain_algebra(g: &DgLieAlgebra, weight_cutoff: usize, limits: Limits) -> Result<CECochainAlgebra> {
    let chains = ce_chain_complex(g, weight_cutoff, limits)?;
    let n = chains.dim();
    let mut degrees: BTreeMap<i32, Vec<(usize, String)>> = BTreeMap::new();
    for i in 0..n {
        degrees.entry(-chains.degree(i)).or_default().push((i, format!("{}^∨", chains.space().label_of(i))));
    }
    let mut chain_of = Vec::with_capacity(n);
    let mut labelled = Vec::new();
    for (deg, entries) in degrees {
        let mut labels = Vec::new();
        for (i, l) in entries {
            chain_of.push(i);
            labels.push(l);
        }
        labelled.push((deg, labels));
    }
    let space = GradedVectorSpace::new(labelled)?;
    let mut dual_of = vec![0; n];
    for (j, &i) in chain_of.iter().enumerate() {
        dual_of[i] = j;
    }
    let d = chains.complex().differential().global_matrix();
    let mut images = vec![zero_vector(n); n];
    for j in 0..n {
        let a = chain_of[j];
        // |λ_a| = −h_a
        let s = sign(is_odd(chains.degree(a)));
        for m in 0..n {
            let c = d.get(a, m);
            if !c.is_zero() {
                images[j][dual_of[m]] = &s * c;
            }
        }
    }
    let differential = GradedLinearMap::from_global_images(space.clone(), space, -1, &images)?;
    let algebra = CECochainAlgebra { chains, complex: ChainComplex::new(differential)?, dual_of, chain_of };
    let report = algebra.verify();
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    Ok(algebra)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

impl CECochainAlgebra {
    pub fn chains(&self) -> &CEChainComplex {
        &self.chains
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn space(&self) -> &GradedVectorSpace {
        self.complex.space()
    }

    pub fn dim(&self) -> usize {
        self.chain_of.len()
    }

    /// Internal degree of a dual basis element.
    pub fn degree(&self, j: usize) -> i32 {
        -self.chains.degree(self.chain_of[j])
    }

    pub fn weight(&self, j: usize) -> usize {
        self.chains.weight(self.chain_of[j])
    }

    /// Dual basis element of a chain monomial.
    pub fn dual_index(&self, chain_index: usize) -> usize {
        self.dual_of[chain_index]
    }

    pub fn unit(&self) -> usize {
        self.dual_of[self.chains.index_of(&[]).expect("the empty monomial")]
    }

    /// Projection to weight 0.
    pub fn augmentation(&self, x: &SparseVector<usize>) -> Scalar {
        x.get(&self.unit()).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn product_basis(&self, a: usize, b: usize) -> Windowed<SparseVector<usize>> {
        let wa = self.chains.monomial(self.chain_of[a]);
        let wb = self.chains.monomial(self.chain_of[b]);
        let cutoff = self.chains.weight_cutoff();
        if wa.len() + wb.len() > cutoff {
            return Windowed::OutOfWindow { length: wa.len() + wb.len(), cutoff };
        }
        let shifted = self.chains.shifted_degrees();
        let mut joined = wa.to_vec();
        joined.extend_from_slice(wb);
        let mut out = SparseVector::new();
        let Some((m, _)) = canonicalize(&joined, shifted) else {
            return Windowed::InWindow(out);
        };
        let mut coeff = Scalar::zero();
        for s in combinations(m.len(), wa.len()) {
            let picked: Vec<usize> = s.iter().map(|&i| m[i]).collect();
            let rest: Vec<usize> = (0..m.len()).filter(|i| !s.contains(i)).map(|i| m[i]).collect();
            if picked != wa || rest != wb {
                continue;
            }
            let mut odd = false;
            for &i in &s {
                for j in (i + 1..m.len()).filter(|j| !s.contains(j)) {
                    odd ^= koszul(shifted[m[i]], shifted[m[j]]);
                }
            }
            coeff += sign(odd);
        }
        if !coeff.is_zero() {
            out.insert(self.dual_of[self.chains.index_of(&m).unwrap()], coeff);
        }
        Windowed::InWindow(out)
    }

    pub fn product(&self, x: &SparseVector<usize>, y: &SparseVector<usize>) -> Windowed<SparseVector<usize>> {
        let mut out = SparseVector::new();
        for (&a, ca) in x {
            for (&b, cb) in y {
                match self.product_basis(a, b) {
                    Windowed::InWindow(p) => sparse_axpy(&mut out, &(ca * cb), &p),
                    other => return other,
                }
            }
        }
        Windowed::InWindow(out)
    }

    pub fn delta(&self, x: &SparseVector<usize>) -> SparseVector<usize> {
        let mut dense = zero_vector(self.dim());
        for (&j, c) in x {
            dense[j] = c.clone();
        }
        self.complex
            .differential()
            .apply_global(&dense)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// `H^c`, with the validity of the matching chain degree.
    pub fn cohomology(&self, c: i32) -> CEHomology {
        CEHomology {
            degree: c,
            dimension: self.complex.homology(-c).dimension,
            validity: self.chains.validity(c),
        }
    }

    /// Unit, graded commutativity, Leibniz and associativity on in-window basis tuples.
    pub fn verify(&self) -> ValidationReport {
        let n = self.dim();
        let cutoff = self.chains.weight_cutoff();
        let label = |j: usize| self.space().label_of(j).to_string();
        let basis = |j: usize| -> SparseVector<usize> { [(j, Scalar::one())].into_iter().collect() };
        let mut report = ValidationReport::default();
        let defect = |v: SparseVector<usize>| {
            let mut d = zero_vector(n);
            for (k, c) in v {
                d[k] = c;
            }
            d
        };
        let unit = self.unit();
        for a in 0..n {
            for (p, side) in [(self.product_basis(unit, a), "left"), (self.product_basis(a, unit), "right")] {
                let mut v = p.in_window().expect("unit products stay in the window");
                sparse_axpy(&mut v, &-Scalar::one(), &basis(a));
                if !v.is_empty() {
                    report.push(Axiom::Unit, vec![label(a), side.into()], defect(v));
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                let (wa, wb) = (self.weight(a), self.weight(b));
                if wa + wb > cutoff {
                    continue;
                }
                let ab = self.product_basis(a, b).in_window().unwrap();
                let mut v = ab.clone();
                let s = -sign(koszul(self.degree(a), self.degree(b)));
                sparse_axpy(&mut v, &s, &self.product_basis(b, a).in_window().unwrap());
                if !v.is_empty() {
                    report.push(Axiom::Commutativity, vec![label(a), label(b)], defect(v));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.weight(a) + self.weight(b) + 1 > cutoff {
                    continue;
                }
                let mut v = self.delta(&self.product_basis(a, b).in_window().unwrap());
                let left = self.product(&self.delta(&basis(a)), &basis(b)).in_window().unwrap();
                let right = self.product(&basis(a), &self.delta(&basis(b))).in_window().unwrap();
                sparse_axpy(&mut v, &-Scalar::one(), &left);
                sparse_axpy(&mut v, &-sign(is_odd(self.degree(a))), &right);
                if !v.is_empty() {
                    report.push(Axiom::Leibniz, vec![label(a), label(b)], defect(v));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.weight(a) + self.weight(b) > cutoff {
                    continue;
                }
                let ab = self.product_basis(a, b).in_window().unwrap();
                for c in (0..n).filter(|&c| self.weight(a) + self.weight(b) + self.weight(c) <= cutoff) {
                    let lhs = self.product(&ab, &basis(c)).in_window().unwrap();
                    let bc = self.product_basis(b, c).in_window().unwrap();
                    let mut v = self.product(&basis(a), &bc).in_window().unwrap();
                    sparse_axpy(&mut v, &-Scalar::one(), &lhs);
                    if !v.is_empty() {
                        report.push(Axiom::Associativity, vec![label(a), label(b), label(c)], defect(v));
                    }
                }
            }
        }
        report
    }
}
