use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::graded::{check_degree, GradedLinearMap, GradedVectorSpace};
use crate::scalar::{is_odd, sign, zero_vector, Scalar};

use super::{BracketEntry, DgLieAlgebra, DgLieData, DgLieMorphism};

/// The cone on a dg-Lie algebra together with the inclusion `g → Cn(g)`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub algebra: DgLieAlgebra,
    pub inclusion: DgLieMorphism,
    /// Global index in the cone of `x` (for `x ∈ g`) and of `εx`.
    pub plain_index: Vec<usize>,
    pub epsilon_index: Vec<usize>,
}

/// `Cn(g)_n = g_n ⊕ ε g_{n−1}` with
///
/// ```text
/// d(x + εy) = dx + y − ε dy
/// [x + εy, x' + εy'] = [x, x'] + ε([y, x'] + (−1)^p [x, y'])     (x ∈ g_p)
/// ```
///
/// In each degree the plain elements come first, then the `ε`-elements.
pub fn cone(g: &DgLieAlgebra) -> Result<Cone> {
    let space = g.space();
    let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for n in space.degrees() {
        degrees.entry(n).or_default().extend(space.labels(n).iter().cloned());
    }
    for n in space.degrees() {
        let target = check_degree(n as i64 + 1)?;
        let labels = degrees.entry(target).or_default();
        for l in space.labels(n) {
            let l = super::fresh_label(labels, &format!("ε{l}"));
            labels.push(l);
        }
    }
    let cone_space = GradedVectorSpace::new(degrees)?;
    let plain_index: Vec<usize> = (0..g.dim())
        .map(|a| {
            let (n, i) = space.locate(a);
            cone_space.global(n, i)
        })
        .collect();
    let epsilon_index: Vec<usize> = (0..g.dim())
        .map(|a| {
            let (n, i) = space.locate(a);
            cone_space.global(n + 1, space.dim(n + 1) + i)
        })
        .collect();

    let total = cone_space.total_dim();
    let mut images = vec![zero_vector(total); total];
    for a in 0..g.dim() {
        let da = g.d_basis(a);
        for (k, c) in da.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            images[plain_index[a]][plain_index[k]] = c.clone();
            images[epsilon_index[a]][epsilon_index[k]] = -c.clone();
        }
        images[epsilon_index[a]][plain_index[a]] += Scalar::one();
    }
    let differential = GradedLinearMap::from_global_images(cone_space.clone(), cone_space.clone(), -1, &images)?;

    let mut bracket = Vec::new();
    for e in g.entries() {
        let p = g.degree(e.left);
        let q = g.degree(e.right);
        // [x, x']
        bracket.push(BracketEntry { left: plain_index[e.left], right: plain_index[e.right], output: plain_index[e.output], coeff: e.coeff.clone() });
        // [εy, x'] = ε[y, x']
        bracket.push(BracketEntry { left: epsilon_index[e.left], right: plain_index[e.right], output: epsilon_index[e.output], coeff: e.coeff.clone() });
        // [x, εy'] = (−1)^p ε[x, y']
        bracket.push(BracketEntry {
            left: plain_index[e.left],
            right: epsilon_index[e.right],
            output: epsilon_index[e.output],
            coeff: sign(is_odd(p)) * &e.coeff,
        });
        if e.left != e.right {
            // Stored pairs are canonical, so also record [εx', y] and [x', εy] for the
            // swapped pair through antisymmetry of g.
            let swap = -sign(crate::scalar::koszul(p, q)) * &e.coeff;
            bracket.push(BracketEntry { left: epsilon_index[e.right], right: plain_index[e.left], output: epsilon_index[e.output], coeff: swap.clone() });
            bracket.push(BracketEntry {
                left: plain_index[e.right],
                right: epsilon_index[e.left],
                output: epsilon_index[e.output],
                coeff: sign(is_odd(q)) * swap,
            });
        }
    }
    let algebra = DgLieAlgebra::new(DgLieData { space: cone_space.clone(), differential, bracket })?;

    let inclusion_images: Vec<_> = (0..g.dim())
        .map(|a| {
            let mut v = zero_vector(total);
            v[plain_index[a]] = Scalar::one();
            v
        })
        .collect();
    let map = GradedLinearMap::from_global_images(space.clone(), cone_space, 0, &inclusion_images)?;
    let inclusion = DgLieMorphism::new(g.clone(), algebra.clone(), map)?;
    Ok(Cone { algebra, inclusion, plain_index, epsilon_index })
}
