//! Reference computations written without the library's algorithms: dense
//! elimination, brute-force axiom checks with explicit sign arithmetic, necklace
//! counts, and multiset enumeration.

use std::collections::{BTreeMap, BTreeSet};

use dglie::complex::{ChainComplex, ChainMap};
use dglie::dgla::DgLieData;
use dglie::matrix::Matrix;
use dglie::report::{Axiom, ValidationReport};
use dglie::scalar::Scalar;
use num_traits::{One, Zero};

pub type Rows = Vec<Vec<Scalar>>;

/// `(-1)^e` as a rational, computed from the integer exponent.
pub fn minus_one_pow(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

pub fn rows_of(m: &Matrix) -> Rows {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).clone()).collect()).collect()
}

pub fn transpose(rows: &Rows, cols: usize) -> Rows {
    (0..cols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
}

/// Row reduction to reduced echelon form; returns the pivot columns.
fn reduce(rows: &mut Rows) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Scalar::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &Rows) -> usize {
    let mut m = rows.clone();
    reduce(&mut m).len()
}

/// Rank of a family of vectors, taken as rows.
pub fn rank_vectors(vectors: &[Vec<Scalar>]) -> usize {
    rank(&vectors.to_vec())
}

/// Kernel basis of the matrix with the given rows and `cols` columns.
pub fn kernel(rows: &Rows, cols: usize) -> Vec<Vec<Scalar>> {
    let mut m = rows.clone();
    let pivots = reduce(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

fn apply(rows: &Rows, v: &[Scalar]) -> Vec<Scalar> {
    rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `dim C_n − rank d_n − rank d_{n+1}`.
pub fn homology_dims(c: &ChainComplex) -> BTreeMap<i32, usize> {
    c.space()
        .degrees()
        .map(|n| (n, c.space().dim(n) - rank(&rows_of(&c.d(n))) - rank(&rows_of(&c.d(n + 1)))))
        .collect()
}

/// Cohomology of the dual complex, through ranks of transposed differentials.
pub fn transpose_rank_cohomology(c: &ChainComplex, n: i32) -> usize {
    let dim = c.space().dim(n);
    if dim == 0 {
        return 0;
    }
    // δ^n = d_{n+1}^T : C^n → C^{n+1}, δ^{n−1} = d_n^T : C^{n−1} → C^n
    let dn = c.d(n);
    let dn1 = c.d(n + 1);
    let delta_n = transpose(&rows_of(&dn1), dn1.cols());
    let delta_prev = transpose(&rows_of(&dn), dn.cols());
    dim - rank(&delta_n) - rank(&delta_prev)
}

/// Whether `f` induces isomorphisms in every degree, by dense ranks.
pub fn quasi_iso(f: &ChainMap) -> bool {
    let degrees: BTreeSet<i32> = f.source().space().degrees().chain(f.target().space().degrees()).collect();
    degrees.into_iter().all(|n| quasi_iso_at(f, n))
}

/// Whether `H_n(f)` is an isomorphism: the image of the cycles modulo target
/// boundaries must have the dimension of both homology groups.
pub fn quasi_iso_at(f: &ChainMap, n: i32) -> bool {
    let (s, t) = (f.source(), f.target());
    let (sd, td) = (s.space().dim(n), t.space().dim(n));
    let hs = sd - rank(&rows_of(&s.d(n))) - rank(&rows_of(&s.d(n + 1)));
    let ht = td - rank(&rows_of(&t.d(n))) - rank(&rows_of(&t.d(n + 1)));
    if hs != ht {
        return false;
    }
    if hs == 0 {
        return true;
    }
    let fm = rows_of(&f.map().block(n));
    let cycles = kernel(&rows_of(&s.d(n)), sd);
    let images: Vec<Vec<Scalar>> = cycles.iter().map(|z| apply(&fm, z)).collect();
    let bd = t.d(n + 1);
    let boundaries = transpose(&rows_of(&bd), bd.cols());
    let mut both = images;
    both.extend(boundaries.iter().cloned());
    rank_vectors(&both) - rank_vectors(&boundaries) == hs
}

/// Failures found by a brute-force dg-Lie axiom check, as index sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BruteReport {
    pub square: BTreeSet<Vec<usize>>,
    pub antisymmetry: BTreeSet<Vec<usize>>,
    pub jacobi: BTreeSet<Vec<usize>>,
    pub derivation: BTreeSet<Vec<usize>>,
}

impl BruteReport {
    pub fn is_ok(&self) -> bool {
        self.square.is_empty() && self.antisymmetry.is_empty() && self.jacobi.is_empty() && self.derivation.is_empty()
    }

    /// The same information read off a library report through witness labels.
    pub fn from_report(report: &ValidationReport, data: &DgLieData) -> BruteReport {
        let n = data.space.total_dim();
        let index: BTreeMap<String, usize> = (0..n).map(|i| (data.space.display_label(i), i)).collect();
        let mut out = BruteReport::default();
        for v in &report.violations {
            let mut key: Vec<usize> = v.witness.iter().map(|l| index[l]).collect();
            key.sort();
            let set = match v.axiom {
                Axiom::DifferentialSquare => &mut out.square,
                Axiom::Antisymmetry => &mut out.antisymmetry,
                Axiom::Jacobi => &mut out.jacobi,
                Axiom::Derivation => &mut out.derivation,
                other => panic!("unexpected axiom {other:?} in a dg-Lie report"),
            };
            set.insert(key);
        }
        out
    }
}

/// Evaluates every axiom on every ordered basis tuple. Bracket values of pairs with no
/// entry in either order are zero; a pair given in one order only determines the other
/// by `[b, a] = −(−1)^{|a||b|}[a, b]`.
pub fn brute_force_dgla(data: &DgLieData) -> BruteReport {
    let n = data.space.total_dim();
    let deg: Vec<i64> = (0..n).map(|i| data.space.degree_of(i) as i64).collect();
    let zero = || vec![Scalar::zero(); n];
    let mut given: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
    for e in &data.bracket {
        given.entry((e.left, e.right)).or_insert_with(zero)[e.output] += e.coeff.clone();
    }
    let mut table = vec![vec![zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            table[a][b] = match (given.get(&(a, b)), given.get(&(b, a))) {
                (Some(v), _) => v.clone(),
                (None, Some(v)) => {
                    let s = -minus_one_pow(deg[a] * deg[b]);
                    v.iter().map(|c| c * &s).collect()
                }
                (None, None) => zero(),
            }
        }
    }
    let br = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = zero();
        for (a, ca) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, cb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (k, v) in table[a][b].iter().enumerate() {
                    out[k] += ca * cb * v;
                }
            }
        }
        out
    };
    let unit = |i: usize| {
        let mut v = zero();
        v[i] = Scalar::one();
        v
    };
    let d = |x: &[Scalar]| data.differential.apply_global(x);
    let nonzero = |v: &[Scalar]| v.iter().any(|c| !c.is_zero());
    let lin = |terms: &[(Scalar, Vec<Scalar>)]| -> Vec<Scalar> {
        let mut out = zero();
        for (s, v) in terms {
            for (k, c) in v.iter().enumerate() {
                out[k] += s * c;
            }
        }
        out
    };
    let one = Scalar::one();
    let mut out = BruteReport::default();
    for x in 0..n {
        if nonzero(&d(&d(&unit(x)))) {
            out.square.insert(vec![x]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            let defect = lin(&[(one.clone(), table[a][b].clone()), (minus_one_pow(deg[a] * deg[b]), table[b][a].clone())]);
            if nonzero(&defect) {
                let mut key = vec![a, b];
                key.sort();
                out.antisymmetry.insert(key);
            }
            // d[a, b] = [da, b] + (−1)^{|a|}[a, db]
            let (ea, eb) = (unit(a), unit(b));
            let defect = lin(&[
                (one.clone(), d(&table[a][b])),
                (-one.clone(), br(&d(&ea), &eb)),
                (-minus_one_pow(deg[a]), br(&ea, &d(&eb))),
            ]);
            if nonzero(&defect) {
                let mut key = vec![a, b];
                key.sort();
                out.derivation.insert(key);
            }
            for c in 0..n {
                // [a, [b, c]] = [[a, b], c] + (−1)^{|a||b|}[b, [a, c]]
                let ec = unit(c);
                let defect = lin(&[
                    (one.clone(), br(&ea, &table[b][c])),
                    (-one.clone(), br(&table[a][b], &ec)),
                    (-minus_one_pow(deg[a] * deg[b]), br(&eb, &table[a][c])),
                ]);
                if nonzero(&defect) {
                    let mut key = vec![a, b, c];
                    key.sort();
                    out.jacobi.insert(key);
                }
            }
        }
    }
    out
}

fn mobius(n: u64) -> i64 {
    let mut m = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

/// Number of primitive necklaces of length `n` in `k` colours: the weight-`n`
/// dimension of the free Lie algebra on `k` even generators.
pub fn witt(k: u64, n: u64) -> u64 {
    let total: i64 = (1..=n).filter(|d| n % d == 0).map(|d| mobius(d) * (k.pow((n / d) as u32) as i64)).sum();
    (total / n as i64) as u64
}

/// Degreewise dimensions of the graded-symmetric `m`-th power, by listing multisets of
/// basis elements in which odd elements occur at most once.
pub fn sym_dims(degrees: &[i32], m: usize) -> BTreeMap<i32, usize> {
    fn go(degrees: &[i32], start: usize, left: usize, total: i32, out: &mut BTreeMap<i32, usize>) {
        if left == 0 {
            *out.entry(total).or_insert(0) += 1;
            return;
        }
        for i in start..degrees.len() {
            let odd = degrees[i].rem_euclid(2) == 1;
            go(degrees, if odd { i + 1 } else { i }, left - 1, total + degrees[i], out);
        }
    }
    let mut out = BTreeMap::new();
    go(degrees, 0, m, 0, &mut out);
    out
}
