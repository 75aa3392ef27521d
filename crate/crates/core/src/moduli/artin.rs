//! Local artinian ℚ-algebras given by multiplication tables, surjections between
//! them, fiber products, and chains of elementary quotients.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{rank_of, span_basis, LinearSolver, Matrix};
use crate::report::{Axiom, ValidationReport};
use crate::scalar::{axpy, is_zero_vector, unit_vector, zero_vector, Scalar, Vector};

/// `e_left · e_right` has coefficient `coeff` on `e_output`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTriple {
    pub left: usize,
    pub right: usize,
    pub output: usize,
    pub coeff: Scalar,
}

/// Unvalidated algebra data. Basis element 0 is the unit.
///
/// Products with the unit may be omitted, and so may one of the two orders of a pair;
/// both are then filled in, by the unit law and by commutativity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinAlgebraData {
    pub labels: Vec<String>,
    pub product: Vec<ProductTriple>,
    pub augmentation: Vector,
}

/// Outcome of [`validate_artin`]: axiom failures, and the nilpotence index `N` (least
/// `N` with `m^N = 0`) when the maximal ideal is nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinReport {
    pub report: ValidationReport,
    pub nilpotence: Option<usize>,
}

impl ArtinReport {
    pub fn is_ok(&self) -> bool {
        self.report.is_ok()
    }
}

type Table = Vec<Vec<Vector>>;

fn structural_checks(data: &ArtinAlgebraData) -> Result<()> {
    let n = data.labels.len();
    if n == 0 {
        return Err(Error::MalformedInput("an algebra needs at least the unit".into()));
    }
    let mut seen = BTreeSet::new();
    for l in &data.labels {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel { degree: 0, label: l.clone() });
        }
    }
    if data.augmentation.len() != n {
        return Err(Error::DimensionMismatch(format!("augmentation has {} entries for {n} basis elements", data.augmentation.len())));
    }
    let mut keys = BTreeSet::new();
    for t in &data.product {
        if t.left >= n || t.right >= n || t.output >= n {
            return Err(Error::MalformedInput(format!("product triple ({}, {}, {}) out of range", t.left, t.right, t.output)));
        }
        if !keys.insert((t.left, t.right, t.output)) {
            return Err(Error::MalformedInput(format!(
                "product {}·{} lists {} twice",
                data.labels[t.left], data.labels[t.right], data.labels[t.output]
            )));
        }
    }
    Ok(())
}

/// Completes the given products by the unit law and commutativity, recording
/// entries that contradict either.
fn fill_table(data: &ArtinAlgebraData, report: &mut ValidationReport) -> Table {
    let n = data.labels.len();
    let mut given: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    for t in &data.product {
        given.entry((t.left, t.right)).or_insert_with(|| zero_vector(n))[t.output] += &t.coeff;
    }
    let mut table = vec![vec![zero_vector(n); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mine = given.get(&(a, b));
            let theirs = given.get(&(b, a));
            table[a][b] = if a == 0 || b == 0 {
                let expected = unit_vector(n, if a == 0 { b } else { a });
                if let Some(v) = mine.filter(|v| **v != expected) {
                    report.push(Axiom::Unit, vec![data.labels[a].clone(), data.labels[b].clone()], crate::scalar::sub(v, &expected));
                }
                expected
            } else {
                match (mine, theirs) {
                    (Some(v), Some(w)) => {
                        if a < b && v != w {
                            report.push(
                                Axiom::Commutativity,
                                vec![data.labels[a].clone(), data.labels[b].clone()],
                                crate::scalar::sub(v, w),
                            );
                        }
                        v.clone()
                    }
                    (Some(v), None) | (None, Some(v)) => v.clone(),
                    (None, None) => zero_vector(n),
                }
            };
        }
    }
    table
}

fn multiply(table: &Table, x: &[Scalar], y: &[Scalar]) -> Vector {
    let n = x.len();
    let mut out = zero_vector(n);
    for (a, ca) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (b, cb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            axpy(&mut out, &(ca * cb), &table[a][b]);
        }
    }
    out
}

fn dot(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
}

/// Row-reduced bases of `m, m^2, …` up to the first zero power, or `Err` with a
/// nonzero element of `m^{n+1}` when `m` is not nilpotent.
fn ideal_powers(table: &Table, augmentation: &[Scalar]) -> std::result::Result<Vec<Vec<Vector>>, Vector> {
    let n = augmentation.len();
    let m = span_basis(n, &Matrix::from_rows(n, vec![augmentation.to_vec()]).kernel());
    let mut powers = vec![m.clone()];
    while !powers.last().unwrap().is_empty() {
        if powers.len() > n {
            return Err(powers.last().unwrap()[0].clone());
        }
        let last = powers.last().unwrap();
        let products: Vec<Vector> = last.iter().flat_map(|p| m.iter().map(|q| multiply(table, p, q))).collect();
        powers.push(span_basis(n, &products));
    }
    Ok(powers)
}

/// Checks unit, commutativity, associativity, multiplicativity of the augmentation
/// and nilpotence of its kernel on all basis tuples.
pub fn validate_artin(data: &ArtinAlgebraData) -> Result<ArtinReport> {
    structural_checks(data)?;
    let n = data.labels.len();
    let mut report = ValidationReport::default();
    let table = fill_table(data, &mut report);
    let l = |a: usize| data.labels[a].clone();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let left = multiply(&table, &table[a][b], &unit_vector(n, c));
                let right = multiply(&table, &unit_vector(n, a), &table[b][c]);
                if left != right {
                    report.push(Axiom::Associativity, vec![l(a), l(b), l(c)], crate::scalar::sub(&left, &right));
                }
            }
        }
    }
    let eps = &data.augmentation;
    if !eps[0].is_one() {
        report.push(Axiom::Augmentation, vec![l(0)], vec![&eps[0] - Scalar::one()]);
    }
    for a in 0..n {
        for b in a..n {
            let defect = dot(eps, &table[a][b]) - &eps[a] * &eps[b];
            if !defect.is_zero() {
                report.push(Axiom::Augmentation, vec![l(a), l(b)], vec![defect]);
            }
        }
    }
    let nilpotence = match ideal_powers(&table, eps) {
        Ok(powers) => Some(powers.len()),
        Err(witness) => {
            report.push(Axiom::Nilpotence, vec![format!("m^{}", n + 1)], witness);
            None
        }
    };
    Ok(ArtinReport { report, nilpotence })
}

/// A validated local artinian algebra with its `m`-adic data.
///
/// The maximal-ideal basis is adapted to the filtration: its elements of level `j`
/// span a complement of `m^{j+1}` in `m^j`, so every `m^j` is spanned by the
/// elements of level at least `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinAlgebra {
    labels: Vec<String>,
    table: Table,
    augmentation: Vector,
    powers: Vec<Vec<Vector>>,
    m_basis: Vec<Vector>,
    m_levels: Vec<usize>,
    m_labels: Vec<String>,
}

impl ArtinAlgebra {
    pub fn new(data: ArtinAlgebraData) -> Result<Self> {
        let checked = validate_artin(&data)?;
        if !checked.is_ok() {
            return Err(Error::Invalid(checked.report));
        }
        let mut ignored = ValidationReport::default();
        let table = fill_table(&data, &mut ignored);
        let n = data.labels.len();
        let powers = ideal_powers(&table, &data.augmentation).expect("validated");
        let mut m_basis = Vec::new();
        let mut m_levels = Vec::new();
        for j in 1..powers.len() {
            let mut chosen = powers[j].clone();
            for row in &powers[j - 1] {
                let before = rank_of(n, &chosen);
                chosen.push(row.clone());
                if rank_of(n, &chosen) > before {
                    m_basis.push(row.clone());
                    m_levels.push(j);
                } else {
                    chosen.pop();
                }
            }
        }
        let m_labels = m_basis
            .iter()
            .enumerate()
            .map(|(k, v)| match unit_position(v) {
                Some(i) => data.labels[i].clone(),
                None => format!("m{k}"),
            })
            .collect();
        Ok(ArtinAlgebra { labels: data.labels, table, augmentation: data.augmentation, powers, m_basis, m_levels, m_labels })
    }

    /// `ℚ` itself.
    pub fn field() -> Self {
        Self::truncated_polynomial(1)
    }

    /// `ℚ[t]/(t^k)` on the basis `1, t, …, t^{k−1}`.
    pub fn truncated_polynomial(k: usize) -> Self {
        assert!(k >= 1, "ℚ[t]/(t^0) is the zero ring");
        let labels: Vec<String> = (0..k)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            })
            .collect();
        let mut product = Vec::new();
        for a in 1..k {
            for b in a..k {
                if a + b < k {
                    product.push(ProductTriple { left: a, right: b, output: a + b, coeff: Scalar::one() });
                }
            }
        }
        Self::new(ArtinAlgebraData { labels, product, augmentation: unit_vector(k, 0) }).expect("truncated polynomial ring")
    }

    pub fn dual_numbers() -> Self {
        Self::truncated_polynomial(2)
    }

    /// `ℚ ⊕ V` with `V·V = 0`, on the given labels for `V`.
    pub fn square_zero(labels: &[&str]) -> Self {
        let mut all = vec!["1".to_string()];
        all.extend(labels.iter().map(|s| s.to_string()));
        let n = all.len();
        Self::new(ArtinAlgebraData { labels: all, product: Vec::new(), augmentation: unit_vector(n, 0) }).expect("square-zero algebra")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn one(&self) -> Vector {
        unit_vector(self.dim(), 0)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        multiply(&self.table, x, y)
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> &Vector {
        &self.table[a][b]
    }

    pub fn augmentation(&self) -> &Vector {
        &self.augmentation
    }

    pub fn augment(&self, x: &[Scalar]) -> Scalar {
        dot(&self.augmentation, x)
    }

    /// Least `N` with `m^N = 0`.
    pub fn nilpotence(&self) -> usize {
        self.powers.len()
    }

    /// Row-reduced basis of `m^k` for `k ≥ 1`.
    pub fn m_power(&self, k: usize) -> &[Vector] {
        assert!(k >= 1);
        self.powers.get(k - 1).map_or(&[], |v| v.as_slice())
    }

    /// The adapted basis of `m`.
    pub fn max_ideal_basis(&self) -> &[Vector] {
        &self.m_basis
    }

    pub fn m_dim(&self) -> usize {
        self.m_basis.len()
    }

    /// Filtration level of the `k`-th adapted basis element.
    pub fn level(&self, k: usize) -> usize {
        self.m_levels[k]
    }

    pub fn m_label(&self, k: usize) -> &str {
        &self.m_labels[k]
    }

    /// `dim m/m²`.
    pub fn cotangent_dim(&self) -> usize {
        self.m_levels.iter().filter(|&&l| l == 1).count()
    }

    pub fn is_square_zero(&self) -> bool {
        self.nilpotence() <= 2
    }

    /// Coordinates of `v ∈ m` in the adapted basis; `None` when `v ∉ m`.
    pub fn m_coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if self.m_basis.is_empty() {
            return is_zero_vector(v).then(Vec::new);
        }
        LinearSolver::new(&Matrix::from_columns(self.dim(), &self.m_basis)).solve(v)
    }

    /// `t_k t_l` in the adapted basis of `m`.
    pub fn m_structure(&self) -> Vec<Vec<Vector>> {
        let r = self.m_dim();
        if r == 0 {
            return Vec::new();
        }
        let solver = LinearSolver::new(&Matrix::from_columns(self.dim(), &self.m_basis));
        (0..r)
            .map(|k| {
                (0..r)
                    .map(|l| solver.solve(&self.mul(&self.m_basis[k], &self.m_basis[l])).expect("m is an ideal"))
                    .collect()
            })
            .collect()
    }

    /// Canonical data: upper-triangular products away from the unit.
    pub fn to_data(&self) -> ArtinAlgebraData {
        let mut product = Vec::new();
        for a in 1..self.dim() {
            for b in a..self.dim() {
                for (k, c) in self.table[a][b].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    product.push(ProductTriple { left: a, right: b, output: k, coeff: c.clone() });
                }
            }
        }
        ArtinAlgebraData { labels: self.labels.clone(), product, augmentation: self.augmentation.clone() }
    }

    /// Quotient by the line spanned by `v`, which must lie in `m` and be killed by `m`.
    ///
    /// The basis vector at the last nonzero non-unit coordinate of `v` is dropped.
    pub fn quotient_by_socle_vector(&self, v: &[Scalar]) -> Result<AlgebraSurjection> {
        let n = self.dim();
        if is_zero_vector(v) || !self.augment(v).is_zero() {
            return Err(Error::Inconsistent("quotient vector must be a nonzero element of m".into()));
        }
        if self.m_basis.iter().any(|t| !is_zero_vector(&self.mul(t, v))) {
            return Err(Error::Inconsistent("quotient vector is not annihilated by m".into()));
        }
        let p = (1..n).rev().find(|&i| !v[i].is_zero()).expect("v ∈ m has a non-unit coordinate");
        let kept: Vec<usize> = (0..n).filter(|&i| i != p).collect();
        let mut projection = Matrix::zeros(n - 1, n);
        for (row, &i) in kept.iter().enumerate() {
            projection.set(row, i, Scalar::one());
            projection.set(row, p, -(&v[i] / &v[p]));
        }
        let mut product = Vec::new();
        for (a, &i) in kept.iter().enumerate().skip(1) {
            for (b, &j) in kept.iter().enumerate().skip(a) {
                for (k, c) in projection.apply(&self.table[i][j]).into_iter().enumerate() {
                    if !c.is_zero() {
                        product.push(ProductTriple { left: a, right: b, output: k, coeff: c });
                    }
                }
            }
        }
        let target = ArtinAlgebra::new(ArtinAlgebraData {
            labels: kept.iter().map(|&i| self.labels[i].clone()).collect(),
            product,
            augmentation: kept.iter().map(|&i| self.augmentation[i].clone()).collect(),
        })?;
        AlgebraSurjection::new(self.clone(), target, projection)
    }
}

fn unit_position(v: &[Scalar]) -> Option<usize> {
    let mut support = v.iter().enumerate().filter(|(_, c)| !c.is_zero());
    match (support.next(), support.next()) {
        (Some((i, c)), None) if c.is_one() => Some(i),
        _ => None,
    }
}

/// A surjective map of augmented algebras, as a matrix in the two bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSurjection {
    source: ArtinAlgebra,
    target: ArtinAlgebra,
    matrix: Matrix,
}

impl AlgebraSurjection {
    pub fn new(source: ArtinAlgebra, target: ArtinAlgebra, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "algebra map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        let mut report = ValidationReport::default();
        let image_of_one = matrix.column(0);
        if image_of_one != target.one() {
            report.push(Axiom::Unit, vec![source.label(0).to_string()], crate::scalar::sub(&image_of_one, &target.one()));
        }
        for a in 0..source.dim() {
            for b in a..source.dim() {
                let left = matrix.apply(source.mul_basis(a, b));
                let right = target.mul(&matrix.column(a), &matrix.column(b));
                if left != right {
                    report.push(
                        Axiom::Multiplicativity,
                        vec![source.label(a).to_string(), source.label(b).to_string()],
                        crate::scalar::sub(&left, &right),
                    );
                }
            }
            let defect = target.augment(&matrix.column(a)) - &source.augmentation()[a];
            if !defect.is_zero() {
                report.push(Axiom::Augmentation, vec![source.label(a).to_string()], vec![defect]);
            }
        }
        if matrix.rank() != target.dim() {
            report.push(Axiom::Surjectivity, Vec::new(), Vec::new());
        }
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        Ok(AlgebraSurjection { source, target, matrix })
    }

    pub fn identity(r: &ArtinAlgebra) -> Self {
        AlgebraSurjection { source: r.clone(), target: r.clone(), matrix: Matrix::identity(r.dim()) }
    }

    /// The augmentation `R → ℚ`.
    pub fn to_field(r: &ArtinAlgebra) -> Self {
        let matrix = Matrix::from_rows(r.dim(), vec![r.augmentation().clone()]);
        AlgebraSurjection::new(r.clone(), ArtinAlgebra::field(), matrix).expect("the augmentation is an algebra map")
    }

    pub fn source(&self) -> &ArtinAlgebra {
        &self.source
    }

    pub fn target(&self) -> &ArtinAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Scalar]) -> Vector {
        self.matrix.apply(x)
    }

    pub fn kernel(&self) -> Vec<Vector> {
        self.matrix.kernel()
    }

    /// The restriction `m_source → m_target` in the adapted bases.
    pub fn on_max_ideal(&self) -> Matrix {
        let columns: Vec<Vector> = self
            .source
            .max_ideal_basis()
            .iter()
            .map(|t| self.target.m_coordinates(&self.apply(t)).expect("augmented maps preserve m"))
            .collect();
        Matrix::from_columns(self.target.m_dim(), &columns)
    }

    pub fn compose(&self, inner: &AlgebraSurjection) -> Result<AlgebraSurjection> {
        if inner.target != self.source {
            return Err(Error::TargetMismatch);
        }
        AlgebraSurjection::new(inner.source.clone(), self.target.clone(), self.matrix.mul(&inner.matrix))
    }
}

/// `R_0 ×_{R_01} R_1` with its two projections.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub algebra: ArtinAlgebra,
    pub p0: AlgebraSurjection,
    pub p1: AlgebraSurjection,
}

/// Pairs `(a, b)` with `f0(a) = f1(b)`, multiplied componentwise.
///
/// The basis is the unit followed by a basis of the pairs with `ε(a) = 0`; pairs of
/// the form `(e_i, 0)` and `(0, e_i)` are labelled `<label>_0` and `<label>_1`.
pub fn fiber_product(f0: &AlgebraSurjection, f1: &AlgebraSurjection) -> Result<FiberProduct> {
    if f0.target != f1.target {
        return Err(Error::TargetMismatch);
    }
    let (r0, r1) = (&f0.source, &f1.source);
    let (n0, n1) = (r0.dim(), r1.dim());
    let n01 = f0.target.dim();
    let mut constraints = Matrix::zeros(n01 + 1, n0 + n1);
    for r in 0..n01 {
        for c in 0..n0 {
            constraints.set(r, c, f0.matrix.get(r, c).clone());
        }
        for c in 0..n1 {
            constraints.set(r, n0 + c, -f1.matrix.get(r, c).clone());
        }
    }
    for c in 0..n0 {
        constraints.set(n01, c, r0.augmentation()[c].clone());
    }
    let mut basis: Vec<Vector> = vec![{
        let mut u = zero_vector(n0 + n1);
        u[0] = Scalar::one();
        u[n0] = Scalar::one();
        u
    }];
    basis.extend(constraints.kernel());
    let n = basis.len();
    let mut labels = vec!["1".to_string()];
    let mut used: BTreeSet<String> = labels.iter().cloned().collect();
    for (k, w) in basis.iter().enumerate().skip(1) {
        let (a, b) = w.split_at(n0);
        let candidate = match (unit_position(a), unit_position(b), is_zero_vector(a), is_zero_vector(b)) {
            (Some(i), _, _, true) => format!("{}_0", r0.label(i)),
            (_, Some(i), true, _) => format!("{}_1", r1.label(i)),
            _ => format!("p{k}"),
        };
        let label = if used.contains(&candidate) { format!("p{k}") } else { candidate };
        used.insert(label.clone());
        labels.push(label);
    }
    let solver = LinearSolver::new(&Matrix::from_columns(n0 + n1, &basis));
    let mut product = Vec::new();
    for i in 1..n {
        for j in i..n {
            let (a, b) = basis[i].split_at(n0);
            let (c, d) = basis[j].split_at(n0);
            let mut w = r0.mul(a, c);
            w.extend(r1.mul(b, d));
            let coords = solver.solve(&w).ok_or_else(|| Error::Inconsistent("fiber product is not closed under products".into()))?;
            for (k, x) in coords.into_iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                product.push(ProductTriple { left: i, right: j, output: k, coeff: x });
            }
        }
    }
    let augmentation = basis.iter().map(|w| r0.augment(&w[..n0])).collect();
    let algebra = ArtinAlgebra::new(ArtinAlgebraData { labels, product, augmentation })?;
    let p0 = Matrix::from_columns(n0, &basis.iter().map(|w| w[..n0].to_vec()).collect::<Vec<_>>());
    let p1 = Matrix::from_columns(n1, &basis.iter().map(|w| w[n0..].to_vec()).collect::<Vec<_>>());
    Ok(FiberProduct {
        p0: AlgebraSurjection::new(algebra.clone(), r0.clone(), p0)?,
        p1: AlgebraSurjection::new(algebra.clone(), r1.clone(), p1)?,
        algebra,
    })
}

/// One elementary quotient `A → A/(v)` with `v` spanning the kernel and `m·v = 0`.
#[derive(Clone, Debug)]
pub struct ElementaryStep {
    pub map: AlgebraSurjection,
    pub kernel: Vector,
    pub kernel_dimension: usize,
    pub annihilated: bool,
}

/// A chain `R = A_0 → A_1 → … → A_n = ℚ` of elementary quotients.
#[derive(Clone, Debug)]
pub struct SmallnessCertificate {
    pub steps: Vec<ElementaryStep>,
}

impl SmallnessCertificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-derives every witness from the maps alone.
    pub fn verify(&self, r: &ArtinAlgebra) -> Result<()> {
        let mut current = r;
        for (i, step) in self.steps.iter().enumerate() {
            let fail = |what: &str| Err(Error::Inconsistent(format!("step {i}: {what}")));
            if step.map.source() != current {
                return fail("source is not the previous target");
            }
            let kernel = step.map.kernel();
            if kernel.len() != 1 || step.kernel_dimension != 1 {
                return fail("kernel is not one-dimensional");
            }
            if is_zero_vector(&step.kernel) || !is_zero_vector(&step.map.apply(&step.kernel)) {
                return fail("recorded kernel vector does not span the kernel");
            }
            let killed = current.max_ideal_basis().iter().all(|t| is_zero_vector(&current.mul(t, &step.kernel)));
            if !killed || !step.annihilated {
                return fail("kernel is not annihilated by m");
            }
            current = step.map.target();
        }
        if current.dim() != 1 {
            return Err(Error::Inconsistent("chain does not end at the field".into()));
        }
        Ok(())
    }
}

/// Peels off socle lines from the top of the `m`-adic filtration until only the field
/// remains; the chain has length `dim R − 1`.
pub fn smallness_certificate(r: &ArtinAlgebra) -> Result<SmallnessCertificate> {
    let mut steps = Vec::new();
    let mut current = r.clone();
    while current.dim() > 1 {
        let top = current.m_power(current.nilpotence() - 1);
        let v = top[0].clone();
        let annihilated = current.max_ideal_basis().iter().all(|t| is_zero_vector(&current.mul(t, &v)));
        let map = current.quotient_by_socle_vector(&v)?;
        let kernel_dimension = map.kernel().len();
        let next = map.target().clone();
        steps.push(ElementaryStep { map, kernel: v, kernel_dimension, annihilated });
        current = next;
    }
    let certificate = SmallnessCertificate { steps };
    certificate.verify(r)?;
    Ok(certificate)
}
