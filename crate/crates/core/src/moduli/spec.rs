//! Augmented maps out of a finitely presented algebra `A = ℚ[x_1, …, x_n]/(f_1, …)`
//! into artinian algebras, and the Zariski tangent space of `A` at the origin.

use std::collections::BTreeSet;

use num_traits::Zero;

use super::artin::ArtinAlgebra;
use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::matrix::{LinearSolver, Matrix};
use crate::scalar::Vector;

/// Bounds keeping exact enumeration fast.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PresentationBounds {
    pub max_degree: u32,
    pub max_generators: usize,
}

impl Default for PresentationBounds {
    fn default() -> Self {
        PresentationBounds { max_degree: 6, max_generators: 8 }
    }
}

/// Generators and relations, augmented by sending every generator to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relations: Vec<Polynomial>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relations: Vec<Polynomial>, bounds: PresentationBounds) -> Result<Self> {
        let mut seen = BTreeSet::new();
        if let Some(dup) = generators.iter().find(|g| !seen.insert(g.as_str())) {
            return Err(Error::DuplicateLabel { degree: 0, label: dup.clone() });
        }
        if generators.len() > bounds.max_generators {
            return Err(Error::UnsupportedPresentation(format!(
                "{} generators exceed the bound {}",
                generators.len(),
                bounds.max_generators
            )));
        }
        for (i, f) in relations.iter().enumerate() {
            if f.nvars() != generators.len() {
                return Err(Error::DimensionMismatch(format!("relation {i} is not in the generators")));
            }
            if f.degree().unwrap_or(0) > bounds.max_degree {
                return Err(Error::UnsupportedPresentation(format!(
                    "relation {i} has degree {} above the bound {}",
                    f.degree().unwrap_or(0),
                    bounds.max_degree
                )));
            }
            if !f.constant_term().is_zero() {
                return Err(Error::UnsupportedPresentation(format!(
                    "relation {i} does not vanish at the augmentation point"
                )));
            }
        }
        Ok(Presentation { generators, relations })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    /// Rows are relations, columns generators: the linear parts at the origin.
    pub fn jacobian_at_origin(&self) -> Matrix {
        Matrix::from_rows(self.generators.len(), self.relations.iter().map(|f| f.linear_part()).collect())
    }
}

/// The augmented maps `A → R`, as the common zeros of polynomial equations in the
/// coefficients `c_{ik}` of `x_i ↦ Σ_k c_{ik} t_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecPoints {
    pub variables: Vec<String>,
    pub equations: Vec<Polynomial>,
    pub solutions: SolutionSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionSet {
    /// All equations linear: the solutions form a subspace with this basis.
    Linear { dimension: usize, basis: Vec<Vector> },
    /// Genuinely polynomial: the variety cut out by the equations, with the dimension
    /// of its tangent space at the origin.
    Polynomial { tangent_dimension: usize },
}

impl SpecPoints {
    pub fn parameter_count(&self) -> Option<usize> {
        match &self.solutions {
            SolutionSet::Linear { dimension, .. } => Some(*dimension),
            SolutionSet::Polynomial { .. } => None,
        }
    }
}

/// `x ∈ R[c]` as one polynomial per basis coordinate of `R`.
type Element = Vec<Polynomial>;

fn multiply(r: &ArtinAlgebra, x: &Element, y: &Element, nvars: usize) -> Element {
    let mut out = vec![Polynomial::zero(nvars); r.dim()];
    for (a, p) in x.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
        for (b, q) in y.iter().enumerate().filter(|(_, q)| !q.is_zero()) {
            let pq = p.mul(q);
            for (k, c) in r.mul_basis(a, b).iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                out[k].add_assign(&pq.scale(c));
            }
        }
    }
    out
}

fn evaluate(r: &ArtinAlgebra, f: &Polynomial, images: &[Element], nvars: usize) -> Element {
    let mut total = vec![Polynomial::zero(nvars); r.dim()];
    for (e, c) in f.terms() {
        let mut term: Element = (0..r.dim()).map(|k| if k == 0 { Polynomial::constant(nvars, c.clone()) } else { Polynomial::zero(nvars) }).collect();
        for (i, &power) in e.iter().enumerate() {
            for _ in 0..power {
                term = multiply(r, &term, &images[i], nvars);
            }
        }
        for (k, p) in term.into_iter().enumerate() {
            total[k].add_assign(&p);
        }
    }
    total
}

pub fn spec_points(a: &Presentation, r: &ArtinAlgebra) -> Result<SpecPoints> {
    let n = a.generators.len();
    let rdim = r.m_dim();
    let nvars = n * rdim;
    let variables = (0..n)
        .flat_map(|i| (0..rdim).map(move |k| (i, k)))
        .map(|(i, k)| format!("{}[{}]", a.generators[i], r.m_label(k)))
        .collect();
    let images: Vec<Element> = (0..n)
        .map(|i| {
            let mut x = vec![Polynomial::zero(nvars); r.dim()];
            for (k, t) in r.max_ideal_basis().iter().enumerate() {
                let c = Polynomial::var(nvars, i * rdim + k);
                for (b, coeff) in t.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    x[b].add_assign(&c.scale(coeff));
                }
            }
            x
        })
        .collect();
    let mut equations = Vec::new();
    for f in &a.relations {
        for p in evaluate(r, f, &images, nvars) {
            if !p.is_zero() && !equations.contains(&p) {
                equations.push(p);
            }
        }
    }
    if equations.iter().any(|p| !p.constant_term().is_zero()) {
        return Err(Error::Inconsistent("relation has a constant term after substitution".into()));
    }
    let linear = Matrix::from_rows(nvars, equations.iter().map(|p| p.linear_part()).collect());
    let solutions = if equations.iter().all(|p| p.degree() == Some(1)) {
        let basis = linear.kernel();
        SolutionSet::Linear { dimension: basis.len(), basis }
    } else {
        SolutionSet::Polynomial { tangent_dimension: nvars - linear.rank() }
    };
    Ok(SpecPoints { variables, equations, solutions })
}

/// `(m/m²)^∨` for `m` the augmentation ideal of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiTangent {
    pub dimension: usize,
    /// Tangent vectors as coefficient vectors over the generators.
    pub basis: Vec<Vector>,
}

pub fn zariski_tangent(a: &Presentation) -> ZariskiTangent {
    let jacobian = a.jacobian_at_origin();
    let basis = if a.generators.is_empty() { Vec::new() } else { jacobian.kernel() };
    debug_assert_eq!(basis.len(), a.generators.len() - LinearSolver::new(&jacobian).rank());
    ZariskiTangent { dimension: basis.len(), basis }
}
