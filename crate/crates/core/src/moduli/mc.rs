//! Maurer–Cartan elements of `m_R ⊗ g`, solved level by level along the `m`-adic
//! filtration, with obstruction classes, the gauge action and the resulting
//! deformation functor values.
//!
//! With `x = Σ_k t_k ⊗ X_k` over the adapted basis of `m`, the equation
//! `dx + κ[x, x] = 0` splits into one equation per basis element `t_m`:
//!
//! ```text
//! d X_m + κ Σ_{k,l} c^m_{kl} [X_k, X_l] = 0
//! ```
//!
//! where `c^m_{kl}` vanishes unless `t_m` sits strictly above `t_k` and `t_l`. So the
//! quadratic part of the level-`ℓ` equations only involves levels below `ℓ`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::artin::{fiber_product, AlgebraSurjection, ArtinAlgebra};
use super::poly::{Exponent, Polynomial};
use crate::dgla::{BracketEntry, DgLieAlgebra, DgLieData};
use crate::error::{Error, Result};
use crate::graded::{GradedLinearMap, GradedVectorSpace};
use crate::matrix::{rank_of, LinearSolver, Matrix};
use crate::scalar::{axpy, factorial, frac, is_zero_vector, scaled, unit_vector, zero_vector, Scalar, Vector};

/// Normalization of the Maurer–Cartan equation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// `dx + ½[x, x] = 0`.
    #[default]
    Standard,
    /// `dx = [x, x]`.
    PaperLiteral,
}

impl Convention {
    /// The coefficient `κ` in `dx + κ[x, x]`.
    pub fn kappa(self) -> Scalar {
        match self {
            Convention::Standard => frac(1, 2),
            Convention::PaperLiteral => frac(-1, 1),
        }
    }

    /// Rescaling factor taking a solution of this convention to a standard one.
    fn to_standard(self) -> Scalar {
        match self {
            Convention::Standard => Scalar::one(),
            Convention::PaperLiteral => frac(-2, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Standard => "standard",
            Convention::PaperLiteral => "paper-literal",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Convention::Standard),
            "paper-literal" => Ok(Convention::PaperLiteral),
            _ => Err(Error::MalformedInput(format!("unknown convention `{s}`"))),
        }
    }
}

/// `m_R ⊗ g` with bracket `[a ⊗ x, b ⊗ y] = ab ⊗ [x, y]`.
///
/// In each degree the basis is `t_k ⊗ e_a` with `k` (adapted basis of `m`) outermost.
#[derive(Clone, Debug)]
pub struct TensorDgla {
    algebra: ArtinAlgebra,
    lie: DgLieAlgebra,
    tensor: DgLieAlgebra,
}

pub fn tensor_dgla(r: &ArtinAlgebra, g: &DgLieAlgebra) -> Result<TensorDgla> {
    let rdim = r.m_dim();
    let gs = g.space();
    let mut labels = Vec::new();
    let mut global = BTreeMap::new();
    let mut next = 0;
    for n in gs.degrees() {
        let mut in_degree = Vec::new();
        for k in 0..rdim {
            for a in gs.range(n) {
                in_degree.push(format!("{}⊗{}", r.m_label(k), g.label(a)));
                global.insert((k, a), next);
                next += 1;
            }
        }
        if !in_degree.is_empty() {
            labels.push((n, in_degree));
        }
    }
    let space = GradedVectorSpace::new(labels)?;
    let total = space.total_dim();
    let mut images = vec![zero_vector(total); total];
    for (&(k, a), &i) in &global {
        for (b, c) in g.d_basis(a).into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            images[i][global[&(k, b)]] = c;
        }
    }
    let differential = GradedLinearMap::from_global_images(space.clone(), space.clone(), -1, &images)?;
    let structure = r.m_structure();
    let mut bracket = Vec::new();
    for (&(k, a), &i) in &global {
        for (&(l, b), &j) in &global {
            if j < i {
                continue;
            }
            let br = g.bracket_basis(a, b);
            if is_zero_vector(&br) {
                continue;
            }
            for (m, c) in structure[k][l].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (out, e) in br.iter().enumerate().filter(|(_, e)| !e.is_zero()) {
                    bracket.push(BracketEntry { left: i, right: j, output: global[&(m, out)], coeff: c * e });
                }
            }
        }
    }
    let tensor = DgLieAlgebra::new(DgLieData { space, differential, bracket })?;
    Ok(TensorDgla { algebra: r.clone(), lie: g.clone(), tensor })
}

impl TensorDgla {
    pub fn algebra(&self) -> &ArtinAlgebra {
        &self.algebra
    }

    pub fn lie(&self) -> &DgLieAlgebra {
        &self.lie
    }

    pub fn tensor(&self) -> &DgLieAlgebra {
        &self.tensor
    }

    /// `dim (m_R ⊗ g)_n`.
    pub fn dim(&self, n: i32) -> usize {
        self.tensor.space().dim(n)
    }

    /// Position of `t_k ⊗ e_a` (with `a` local to degree `n` of `g`) inside degree `n`.
    pub fn local_index(&self, n: i32, k: usize, a: usize) -> usize {
        k * self.lie.space().dim(n) + a
    }

    /// Embeds degree-`n` coordinates into the global basis of the tensor.
    pub fn to_global(&self, n: i32, x: &[Scalar]) -> Vector {
        let mut v = zero_vector(self.tensor.dim());
        let start = self.tensor.space().range(n).start;
        for (i, c) in x.iter().enumerate() {
            v[start + i] = c.clone();
        }
        v
    }

    pub fn to_local(&self, n: i32, v: &[Scalar]) -> Vector {
        v[self.tensor.space().range(n)].to_vec()
    }
}

/// The induced map `(m_R ⊗ g)_n → (m_{R'} ⊗ g)_n`.
pub fn tensor_map(f: &AlgebraSurjection, g: &DgLieAlgebra, n: i32) -> Matrix {
    let on_m = f.on_max_ideal();
    let gd = g.space().dim(n);
    let mut out = Matrix::zeros(on_m.rows() * gd, on_m.cols() * gd);
    for kp in 0..on_m.rows() {
        for k in 0..on_m.cols() {
            let c = on_m.get(kp, k);
            if c.is_zero() {
                continue;
            }
            for a in 0..gd {
                out.set(kp * gd + a, k * gd + a, c.clone());
            }
        }
    }
    out
}

/// The Maurer–Cartan equations in the coordinates of `(m_R ⊗ g)_{−1}`, one per basis
/// element of `(m_R ⊗ g)_{−2}`; each is quadratic without constant term.
#[derive(Clone, Debug)]
pub struct MCSystem {
    pub variables: Vec<String>,
    pub equation_labels: Vec<String>,
    pub equations: Vec<Polynomial>,
}

pub fn mc_system(l: &TensorDgla, convention: Convention) -> MCSystem {
    let t = l.tensor();
    let (vars, eqs) = (t.space().range(-1), t.space().range(-2));
    let nv = vars.len();
    let kappa = convention.kappa();
    let mut equations = vec![Polynomial::zero(nv); eqs.len()];
    for (i, gi) in vars.clone().enumerate() {
        for (e, c) in t.d_basis(gi)[eqs.clone()].iter().enumerate() {
            equations[e].add_term(unit_exponent(nv, &[i]), c.clone());
        }
        for (j, gj) in vars.clone().enumerate() {
            let br = t.bracket_basis(gi, gj);
            for (e, c) in br[eqs.clone()].iter().enumerate() {
                equations[e].add_term(unit_exponent(nv, &[i, j]), &kappa * c);
            }
        }
    }
    MCSystem {
        variables: vars.map(|i| t.space().display_label(i)).collect(),
        equation_labels: eqs.map(|i| t.space().display_label(i)).collect(),
        equations,
    }
}

fn unit_exponent(n: usize, vars: &[usize]) -> Exponent {
    let mut e = vec![0; n];
    for &v in vars {
        e[v] += 1;
    }
    e
}

/// The solution set as the image of a polynomial parametrization, cut out by
/// polynomial constraints on the parameters.
///
/// Parameter `t·z<i>` is the coefficient of `t ⊗ z_i`, with `z_i` the basis of the
/// cycles in `g_{−1}`; the map from constrained parameters to solutions is a bijection.
#[derive(Clone, Debug)]
pub struct MCSolution {
    pub params: Vec<String>,
    /// One polynomial in the parameters per coordinate of `(m_R ⊗ g)_{−1}`.
    pub coordinates: Vec<Polynomial>,
    pub constraints: Vec<Polynomial>,
}

impl MCSolution {
    /// Linear subspace: no constraints and a linear parametrization.
    pub fn is_linear(&self) -> bool {
        self.constraints.is_empty() && self.coordinates.iter().all(|p| p.degree().unwrap_or(0) <= 1)
    }

    /// Dimension of the solution space when it is linear.
    pub fn dimension(&self) -> Option<usize> {
        self.is_linear().then_some(self.params.len())
    }

    pub fn evaluate(&self, params: &[Scalar]) -> Vector {
        self.coordinates.iter().map(|p| p.eval(params)).collect()
    }

    /// Solutions spanned by single parameters, a basis in the linear case.
    pub fn linear_basis(&self) -> Vec<Vector> {
        let np = self.params.len();
        (0..np).map(|i| self.evaluate(&unit_vector(np, i))).collect()
    }

    pub fn satisfies_constraints(&self, params: &[Scalar]) -> bool {
        self.constraints.iter().all(|c| c.eval(params).is_zero())
    }
}

/// Obstruction class of one adapted basis element at the current order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub basis: String,
    /// Coordinates in the homology representatives of `H_{−2}(g)`.
    pub class: Vector,
}

impl Obstruction {
    pub fn vanishes(&self) -> bool {
        is_zero_vector(&self.class)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftStage {
    pub order: usize,
    pub obstructions: Vec<Obstruction>,
    pub lifted: bool,
}

/// Lifts of one first-order solution, taking the particular lift (free cycle
/// parameters at zero) at every order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftBranch {
    pub root: String,
    /// Coordinates in `(m_R ⊗ g)_{−1}` of the deepest lift reached.
    pub lift: Vector,
    pub reached_order: usize,
    pub stages: Vec<LiftStage>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftTree {
    /// `N − 1`, the order of the top of the filtration.
    pub max_order: usize,
    pub branches: Vec<LiftBranch>,
}

impl LiftTree {
    pub fn is_full(&self) -> bool {
        self.branches.iter().all(|b| b.reached_order == self.max_order)
    }

    /// Branches surviving to `order`.
    pub fn surviving(&self, order: usize) -> usize {
        self.branches.iter().filter(|b| b.reached_order >= order).count()
    }

    /// Nonvanishing obstructions met at `order`.
    pub fn obstructions_at(&self, order: usize) -> Vec<&Obstruction> {
        self.branches
            .iter()
            .flat_map(|b| b.stages.iter().filter(|s| s.order == order))
            .flat_map(|s| s.obstructions.iter().filter(|o| !o.vanishes()))
            .collect()
    }
}

/// Maurer–Cartan elements of `m_R ⊗ g`: the raw system, its exact solution and the
/// lift tree over first-order solutions.
#[derive(Clone, Debug)]
pub struct MCElements {
    pub convention: Convention,
    pub tensor: TensorDgla,
    pub system: MCSystem,
    pub solution: MCSolution,
    pub lift_tree: LiftTree,
}

struct Leveled {
    solution: MCSolution,
    /// Quadratic part of the equations of each adapted basis element, in parameters.
    pressure: Vec<Vec<Polynomial>>,
    /// Parameter indices of the first-order solutions.
    roots: Vec<usize>,
}

fn solve_leveled(l: &TensorDgla, system: &MCSystem) -> Result<Leveled> {
    let r = l.algebra();
    let g = l.lie();
    let (d1, d2) = (g.space().dim(-1), g.space().dim(-2));
    let d = g.complex().d(-1);
    let solver = LinearSolver::new(&d);
    let particular = solver.particular_map();
    let cokernel = solver.cokernel_functionals();
    let cycles = d.kernel();
    let rdim = r.m_dim();
    let mut order: Vec<usize> = (0..rdim).collect();
    order.sort_by_key(|&k| (r.level(k), k));
    let mut params = Vec::new();
    let mut param_of = vec![Vec::new(); rdim];
    for &k in &order {
        for i in 0..cycles.len() {
            param_of[k].push(params.len());
            params.push(format!("{}·z{i}", r.m_label(k)));
        }
    }
    let np = params.len();
    let nv = system.variables.len();
    let mut coordinates = vec![Polynomial::zero(np); nv];
    let mut solved = vec![false; rdim];
    let mut pressure = vec![Vec::new(); rdim];
    let mut constraints = Vec::new();
    for &k in &order {
        let level = r.level(k);
        let mut p_k = Vec::with_capacity(d2);
        for b in 0..d2 {
            let eq = &system.equations[l.local_index(-2, k, b)];
            let mut quadratic = Polynomial::zero(nv);
            for (e, c) in eq.terms() {
                if e.iter().sum::<u32>() >= 2 {
                    for v in e.iter().enumerate().filter(|(_, &p)| p > 0).map(|(v, _)| v) {
                        let owner = v / d1.max(1);
                        if !solved[owner] || r.level(owner) >= level {
                            return Err(Error::Inconsistent(format!(
                                "equation for {} involves a coordinate of level {} ≥ {level}",
                                r.m_label(k),
                                r.level(owner)
                            )));
                        }
                    }
                    quadratic.add_term(e.clone(), c.clone());
                }
            }
            p_k.push(quadratic.substitute(&coordinates));
        }
        for (a, coordinate) in (0..d1).map(|a| (a, l.local_index(-1, k, a))) {
            let mut x = Polynomial::zero(np);
            for (b, p) in p_k.iter().enumerate() {
                x.add_assign(&p.scale(&-particular.get(a, b).clone()));
            }
            for (i, z) in cycles.iter().enumerate() {
                x.add_assign(&Polynomial::var(np, param_of[k][i]).scale(&z[a]));
            }
            coordinates[coordinate] = x;
        }
        for y in &cokernel {
            let mut c = Polynomial::zero(np);
            for (b, p) in p_k.iter().enumerate() {
                c.add_assign(&p.scale(&y[b]));
            }
            if !c.is_zero() {
                constraints.push(c);
            }
        }
        pressure[k] = p_k;
        solved[k] = true;
    }
    let roots = order.iter().filter(|&&k| r.level(k) == 1).flat_map(|&k| param_of[k].clone()).collect();
    Ok(Leveled { solution: MCSolution { params, coordinates, constraints }, pressure, roots })
}

fn lift_tree(l: &TensorDgla, leveled: &Leveled) -> Result<LiftTree> {
    let r = l.algebra();
    let g = l.lie();
    let solver = LinearSolver::new(&g.complex().d(-1));
    let max_order = r.nilpotence().saturating_sub(1);
    let np = leveled.solution.params.len();
    let mut branches = Vec::new();
    for &root in &leveled.roots {
        let point = unit_vector(np, root);
        let mut reached_order = 1;
        let mut stages = Vec::new();
        for order in 2..=max_order {
            let mut obstructions = Vec::new();
            let mut lifted = true;
            for k in (0..r.m_dim()).filter(|&k| r.level(k) == order) {
                let p: Vector = leveled.pressure[k].iter().map(|q| q.eval(&point)).collect();
                let class = g.complex().class_coordinates(-2, &p).ok_or_else(|| {
                    Error::Inconsistent(format!("obstruction for {} at order {order} is not a cycle", r.m_label(k)))
                })?;
                let solvable = solver.solve(&scaled(&-Scalar::one(), &p)).is_some();
                if solvable != is_zero_vector(&class) {
                    return Err(Error::Inconsistent(format!(
                        "obstruction class for {} disagrees with solvability at order {order}",
                        r.m_label(k)
                    )));
                }
                lifted &= solvable;
                obstructions.push(Obstruction { basis: r.m_label(k).to_string(), class });
            }
            stages.push(LiftStage { order, obstructions, lifted });
            if !lifted {
                break;
            }
            reached_order = order;
        }
        let mut lift = leveled.solution.evaluate(&point);
        for k in (0..r.m_dim()).filter(|&k| r.level(k) > reached_order) {
            for a in 0..g.space().dim(-1) {
                lift[l.local_index(-1, k, a)] = Scalar::zero();
            }
        }
        branches.push(LiftBranch { root: leveled.solution.params[root].clone(), lift, reached_order, stages });
    }
    Ok(LiftTree { max_order, branches })
}

/// Solves the Maurer–Cartan equation in `m_R ⊗ g` order by order.
pub fn mc_elements(r: &ArtinAlgebra, g: &DgLieAlgebra, convention: Convention) -> Result<MCElements> {
    let tensor = tensor_dgla(r, g)?;
    let system = mc_system(&tensor, convention);
    let leveled = solve_leveled(&tensor, &system)?;
    let lift_tree = lift_tree(&tensor, &leveled)?;
    Ok(MCElements { convention, tensor, system, solution: leveled.solution, lift_tree })
}

impl MCElements {
    /// Evaluates the raw equations at a point of `(m_R ⊗ g)_{−1}`.
    pub fn residual(&self, x: &[Scalar]) -> Vector {
        self.system.equations.iter().map(|e| e.eval(x)).collect()
    }

    pub fn is_solution(&self, x: &[Scalar]) -> bool {
        is_zero_vector(&self.residual(x))
    }
}

/// `a · x = exp(ad_a) x − Σ_n (ad_a)^n / (n+1)! (da)` for `a ∈ (m_R ⊗ g)_0` and
/// `x ∈ (m_R ⊗ g)_{−1}`, in local coordinates; the sums stop by nilpotence.
pub fn gauge_action(l: &TensorDgla, a: &[Scalar], x: &[Scalar], convention: Convention) -> Vector {
    let t = l.tensor();
    let a = l.to_global(0, a);
    let x = scaled(&convention.to_standard(), &l.to_global(-1, x));
    let mut out = zero_vector(t.dim());
    let mut term = x;
    let mut n = 0;
    while !is_zero_vector(&term) {
        axpy(&mut out, &(Scalar::one() / factorial(n)), &term);
        term = t.bracket(&a, &term);
        n += 1;
    }
    let mut term = t.d(&a);
    let mut n = 0;
    while !is_zero_vector(&term) {
        axpy(&mut out, &(-Scalar::one() / factorial(n + 1)), &term);
        term = t.bracket(&a, &term);
        n += 1;
    }
    let back = Scalar::one() / convention.to_standard();
    scaled(&back, &l.to_local(-1, &out))
}

/// Orbit representatives of the gauge action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaugeOrbits {
    /// Abelian `m_R ⊗ g`: orbits are the cosets of `d(m_R ⊗ g)_0` in the cycles, and the
    /// representatives span a complement.
    Linear { dimension: usize, representatives: Vec<Vector> },
    /// Otherwise only the orbit space at first order around the base point,
    /// `H_{−1}(m_R ⊗ g)`, is computed.
    Nonlinear { linearized_dimension: usize },
}

/// Value of the deformation functor `R ↦ MC(m_R ⊗ g)/gauge`.
#[derive(Clone, Debug)]
pub struct DeformationValue {
    pub mc: MCElements,
    pub gauge_orbits: GaugeOrbits,
    /// `dim H_{−1}(g) · dim m_R/m_R²`.
    pub tangent_dimension: usize,
}

pub fn gauge_quotient(mc: MCElements) -> Result<DeformationValue> {
    let l = &mc.tensor;
    let t = l.tensor();
    let gauge_orbits = if t.is_abelian() {
        let n1 = l.dim(-1);
        let cycles = t.complex().d(-1).kernel();
        if mc.solution.dimension() != Some(cycles.len()) {
            return Err(Error::Inconsistent("linear Maurer–Cartan set differs from the cycles".into()));
        }
        let mut chosen = t.complex().d(0).image();
        let mut representatives = Vec::new();
        for z in cycles {
            let before = rank_of(n1, &chosen);
            chosen.push(z.clone());
            if rank_of(n1, &chosen) > before {
                representatives.push(z);
            } else {
                chosen.pop();
            }
        }
        GaugeOrbits::Linear { dimension: representatives.len(), representatives }
    } else {
        GaugeOrbits::Nonlinear { linearized_dimension: t.complex().homology(-1).dimension }
    };
    let tangent_dimension = l.lie().complex().homology(-1).dimension * l.algebra().cotangent_dim();
    Ok(DeformationValue { mc, gauge_orbits, tangent_dimension })
}

/// Both computations of the tangent space of the deformation functor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TangentSpace {
    pub gauge_route: usize,
    pub homology_route: usize,
}

/// The value on dual numbers, as a gauge quotient and as `dim H_{−1}(g)`; the two
/// must agree.
pub fn tangent_space(g: &DgLieAlgebra) -> Result<TangentSpace> {
    let value = gauge_quotient(mc_elements(&ArtinAlgebra::dual_numbers(), g, Convention::Standard)?)?;
    let GaugeOrbits::Linear { dimension, .. } = value.gauge_orbits else {
        return Err(Error::Inconsistent("m ⊗ g is not abelian over the dual numbers".into()));
    };
    let homology_route = g.complex().homology(-1).dimension;
    if dimension != homology_route {
        return Err(Error::Inconsistent(format!("gauge quotient has dimension {dimension}, H_-1 has {homology_route}")));
    }
    Ok(TangentSpace { gauge_route: dimension, homology_route })
}

/// Image of a Maurer–Cartan point under an algebra map.
pub fn push_forward(f: &AlgebraSurjection, g: &DgLieAlgebra, x: &[Scalar]) -> Vector {
    tensor_map(f, g, -1).apply(x)
}

/// Outcome of comparing `MC(R_0 ×_{R_01} R_1)` with `MC(R_0) ×_{MC(R_01)} MC(R_1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProductCheck {
    pub fiber_dimension: usize,
    /// `x ↦ (p_0 x, p_1 x)` is a bijection onto the fiber product of coordinate spaces.
    pub coordinates_identified: bool,
    /// The equations of the fiber product and the pulled-back equations of the two
    /// factors span the same space of polynomials.
    pub equations_match: bool,
    /// `(dim MC(P), dim MC(R_0) ×_{MC(R_01)} MC(R_1))` when all four sets are linear.
    pub linear_dimensions: Option<(usize, usize)>,
}

impl FiberProductCheck {
    pub fn passes(&self) -> bool {
        self.coordinates_identified && self.equations_match && self.linear_dimensions.is_none_or(|(a, b)| a == b)
    }
}

fn polynomial_rank(polys: &[Polynomial]) -> usize {
    let mut monomials: BTreeMap<Exponent, usize> = BTreeMap::new();
    for p in polys {
        for (e, _) in p.terms() {
            let next = monomials.len();
            monomials.entry(e.clone()).or_insert(next);
        }
    }
    let rows: Vec<Vector> = polys
        .iter()
        .map(|p| {
            let mut v = zero_vector(monomials.len());
            for (e, c) in p.terms() {
                v[monomials[e]] = c.clone();
            }
            v
        })
        .collect();
    rank_of(monomials.len(), &rows)
}

fn stack(top: &Matrix, bottom: &Matrix) -> Matrix {
    let rows = (0..top.rows()).map(|r| top.row(r).to_vec()).chain((0..bottom.rows()).map(|r| bottom.row(r).to_vec())).collect();
    Matrix::from_rows(top.cols(), rows)
}

fn side_by_side(left: &Matrix, right: &Matrix) -> Matrix {
    let rows = (0..left.rows()).map(|r| [left.row(r), right.row(r)].concat()).collect();
    Matrix::from_rows(left.cols() + right.cols(), rows)
}

pub fn mc_fiber_product_check(f0: &AlgebraSurjection, f1: &AlgebraSurjection, g: &DgLieAlgebra) -> Result<FiberProductCheck> {
    let fp = fiber_product(f0, f1)?;
    let conv = Convention::Standard;
    let mc_p = mc_elements(&fp.algebra, g, conv)?;
    let mc_0 = mc_elements(f0.source(), g, conv)?;
    let mc_1 = mc_elements(f1.source(), g, conv)?;
    let (a0, a1) = (tensor_map(&fp.p0, g, -1), tensor_map(&fp.p1, g, -1));
    let (b0, b1) = (tensor_map(f0, g, -1), tensor_map(f1, g, -1));
    let np = mc_p.system.variables.len();
    let fiber = side_by_side(&b0, &b1.scale(&-Scalar::one()));
    let fiber_dimension = fiber.cols() - fiber.rank();
    let coordinates_identified = stack(&a0, &a1).rank() == np && fiber_dimension == np && b0.mul(&a0) == b1.mul(&a1);

    let pull = |a: &Matrix, eqs: &[Polynomial]| -> Vec<Polynomial> {
        let images: Vec<Polynomial> = (0..a.rows()).map(|r| Polynomial::linear(a.row(r))).collect();
        eqs.iter().map(|e| if images.is_empty() { Polynomial::zero(np) } else { e.substitute(&images) }).collect()
    };
    let own = mc_p.system.equations.clone();
    let mut pulled = pull(&a0, &mc_0.system.equations);
    pulled.extend(pull(&a1, &mc_1.system.equations));
    let mut both = own.clone();
    both.extend(pulled.iter().cloned());
    let (r_own, r_pulled, r_both) = (polynomial_rank(&own), polynomial_rank(&pulled), polynomial_rank(&both));
    let equations_match = r_own == r_both && r_pulled == r_both;

    let mc_01 = mc_elements(f0.target(), g, conv)?;
    let linear_dimensions = match (mc_p.solution.dimension(), mc_0.solution.is_linear(), mc_1.solution.is_linear(), mc_01.solution.is_linear()) {
        (Some(dp), true, true, true) => {
            let s0 = mc_0.solution.linear_basis();
            let s1 = mc_1.solution.linear_basis();
            let n01 = b0.rows();
            let columns: Vec<Vector> = s0
                .iter()
                .map(|v| b0.apply(v))
                .chain(s1.iter().map(|v| scaled(&-Scalar::one(), &b1.apply(v))))
                .collect();
            let joint = if columns.is_empty() { 0 } else { Matrix::from_columns(n01, &columns).rank() };
            Some((dp, s0.len() + s1.len() - joint))
        }
        _ => None,
    };
    Ok(FiberProductCheck { fiber_dimension, coordinates_identified, equations_match, linear_dimensions })
}
