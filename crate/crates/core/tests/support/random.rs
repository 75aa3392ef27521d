//! Seeded random structures: chain complexes and chain maps, valid dg-Lie algebras,
//! perturbations of structure constants, and square-zero artinian algebras.

use std::collections::BTreeMap;

use dglie::complex::{ChainComplex, ChainMap};
use dglie::dgla::{free_dgla, BracketEntry, DgLieAlgebra, DgLieData, Limits};
use dglie::graded::{GradedLinearMap, GradedVectorSpace};
use dglie::matrix::Matrix;
use dglie::moduli::ArtinAlgebra;
use dglie::scalar::{int, zero_vector, Scalar};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_scalar(r: &mut ChaCha8Rng) -> Scalar {
    int(r.gen_range(-3..=3))
}

fn nonzero_scalar(r: &mut ChaCha8Rng) -> Scalar {
    let v: i64 = *[-2, -1, 1, 2, 3].choose(r).unwrap();
    int(v)
}

/// A random invertible matrix: unit lower triangular times upper triangular with
/// nonzero diagonal, then a row permutation.
pub fn invertible(r: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        u.set(i, i, nonzero_scalar(r));
        for j in 0..i {
            l.set(i, j, small_scalar(r));
        }
        for j in i + 1..n {
            u.set(i, j, small_scalar(r));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let lu = l.mul(&u);
    let mut out = Matrix::zeros(n, n);
    for (i, &p) in perm.iter().enumerate() {
        for j in 0..n {
            out.set(i, j, lu.get(p, j).clone());
        }
    }
    out
}

/// Per-degree label lists `e0, e1, …` with the given dimensions.
pub fn space(dims: &BTreeMap<i32, usize>, prefix: &str) -> GradedVectorSpace {
    let mut k = 0;
    let mut degrees = BTreeMap::new();
    for (&n, &d) in dims {
        let labels: Vec<String> = (0..d)
            .map(|_| {
                k += 1;
                format!("{prefix}{}", k - 1)
            })
            .collect();
        degrees.insert(n, labels);
    }
    GradedVectorSpace::new(degrees).unwrap()
}

/// Block-diagonal conjugation `P d P⁻¹` of a differential, one random block per degree.
fn conjugators(r: &mut ChaCha8Rng, s: &GradedVectorSpace) -> BTreeMap<i32, Matrix> {
    s.degrees().map(|n| (n, invertible(r, s.dim(n)))).collect()
}

fn conjugate(map: &GradedLinearMap, src: &BTreeMap<i32, Matrix>, tgt: &BTreeMap<i32, Matrix>) -> GradedLinearMap {
    let mut blocks = BTreeMap::new();
    for n in map.source().degrees() {
        let m = map.target().dim(n + map.shift());
        if m == 0 {
            continue;
        }
        let block = map.block(n);
        let p_inv = src[&n].inverse().unwrap();
        blocks.insert(n, tgt[&(n + map.shift())].mul(&block).mul(&p_inv));
    }
    GradedLinearMap::new(map.source().clone(), map.target().clone(), map.shift(), blocks).unwrap()
}

/// Summands of a split complex: spheres `S(n)` and discs `E(n)` (degrees `n`, `n−1`).
#[derive(Clone, Copy, Debug)]
enum Summand {
    Sphere(i32),
    Disc(i32),
}

fn summands(r: &mut ChaCha8Rng, max_dim: usize) -> Vec<Summand> {
    let mut out = Vec::new();
    let mut dim = 0;
    let count = r.gen_range(1..=max_dim.max(1));
    while dim < count {
        let n = r.gen_range(-2..=2);
        if r.gen_bool(0.5) && dim + 2 <= max_dim {
            out.push(Summand::Disc(n));
            dim += 2;
        } else {
            out.push(Summand::Sphere(n));
            dim += 1;
        }
    }
    out
}

/// Global layout: `(degree, local index)` of every summand generator, and the complex.
fn split_complex(parts: &[Summand], prefix: &str) -> (ChainComplex, Vec<Vec<usize>>) {
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let mut slots = Vec::new();
    for p in parts {
        match *p {
            Summand::Sphere(n) => {
                let e = dims.entry(n).or_insert(0);
                slots.push(vec![(n, *e)]);
                *e += 1;
            }
            Summand::Disc(n) => {
                let top = {
                    let e = dims.entry(n).or_insert(0);
                    *e += 1;
                    (n, *e - 1)
                };
                let bottom = {
                    let e = dims.entry(n - 1).or_insert(0);
                    *e += 1;
                    (n - 1, *e - 1)
                };
                slots.push(vec![top, bottom]);
            }
        }
    }
    let sp = space(&dims, prefix);
    let global: Vec<Vec<usize>> = slots.iter().map(|s| s.iter().map(|&(n, i)| sp.global(n, i)).collect()).collect();
    let n = sp.total_dim();
    let mut images = vec![zero_vector(n); n];
    for (p, g) in parts.iter().zip(&global) {
        if let Summand::Disc(_) = p {
            images[g[0]][g[1]] = Scalar::one();
        }
    }
    let d = GradedLinearMap::from_global_images(sp.clone(), sp, -1, &images).unwrap();
    (ChainComplex::new(d).unwrap(), global)
}

/// A random chain map between random complexes of total dimension at most `max_dim`
/// each, in disguised bases. Blocks between summands are of the kinds that commute
/// with the split differentials.
pub fn chain_map(r: &mut ChaCha8Rng, max_dim: usize) -> ChainMap {
    let sp = summands(r, max_dim);
    // Often the target repeats the source and adds discs, so that the spheres can be
    // matched isomorphically.
    let matched = r.gen_bool(0.5);
    let tp = if matched {
        let mut tp = sp.clone();
        let mut dim: usize = tp.iter().map(|p| if let Summand::Disc(_) = p { 2 } else { 1 }).sum();
        while dim + 2 <= max_dim && r.gen_bool(0.5) {
            tp.push(Summand::Disc(r.gen_range(-2..=2)));
            dim += 2;
        }
        tp
    } else {
        summands(r, max_dim)
    };
    let (s, sg) = split_complex(&sp, "s");
    let (t, tg) = split_complex(&tp, "t");
    let (ns, nt) = (s.space().total_dim(), t.space().total_dim());
    let mut images = vec![zero_vector(nt); ns];
    if matched {
        for (i, a) in sp.iter().enumerate() {
            if let Summand::Sphere(_) = a {
                images[sg[i][0]][tg[i][0]] = nonzero_scalar(r);
            }
        }
    }
    for (a, ga) in sp.iter().zip(&sg) {
        for (b, gb) in tp.iter().zip(&tg) {
            if r.gen_bool(0.4) {
                continue;
            }
            let c = small_scalar(r);
            match (*a, *b) {
                (Summand::Sphere(n), Summand::Sphere(m)) if n == m => images[ga[0]][gb[0]] += c,
                // s ↦ c·dy lands in the boundary of the disc
                (Summand::Sphere(n), Summand::Disc(m)) if n == m - 1 => images[ga[0]][gb[1]] += c,
                // x ↦ c·s, dx ↦ 0
                (Summand::Disc(n), Summand::Sphere(m)) if n == m => images[ga[0]][gb[0]] += c,
                (Summand::Disc(n), Summand::Disc(m)) if n == m => {
                    images[ga[0]][gb[0]] += c.clone();
                    images[ga[1]][gb[1]] += c;
                }
                _ => {}
            }
        }
    }
    let f = GradedLinearMap::from_global_images(s.space().clone(), t.space().clone(), 0, &images).unwrap();
    let (ps, pt) = (conjugators(r, s.space()), conjugators(r, t.space()));
    let ds = conjugate(s.differential(), &ps, &ps);
    let dt = conjugate(t.differential(), &pt, &pt);
    let fc = conjugate(&f, &ps, &pt);
    ChainMap::new(ChainComplex::new(ds).unwrap(), ChainComplex::new(dt).unwrap(), fc).unwrap()
}

/// A random chain complex of total dimension at most `max_dim`, in a disguised basis.
pub fn complex(r: &mut ChaCha8Rng, max_dim: usize) -> ChainComplex {
    let parts = summands(r, max_dim);
    let (c, _) = split_complex(&parts, "c");
    let p = conjugators(r, c.space());
    ChainComplex::new(conjugate(c.differential(), &p, &p)).unwrap()
}

/// A two-step nilpotent dg-Lie algebra: generators bracket into a central layer and
/// the differential maps generators into the centre.
fn two_step(r: &mut ChaCha8Rng, max_dim: usize) -> DgLieAlgebra {
    let gens = r.gen_range(1..=max_dim.saturating_sub(1).clamp(1, 4));
    let centre = r.gen_range(1..=(max_dim - gens).max(1));
    let gdeg: Vec<i32> = (0..gens).map(|_| r.gen_range(-2..=1)).collect();
    let cdeg: Vec<i32> = (0..centre)
        .map(|_| {
            let (a, b) = (gdeg[r.gen_range(0..gens)], gdeg[r.gen_range(0..gens)]);
            if r.gen_bool(0.7) {
                a + b
            } else {
                a - 1
            }
        })
        .collect();
    // labels g* for generators and c* for the centre, kept in separate maps
    let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for (i, &p) in gdeg.iter().enumerate() {
        degrees.entry(p).or_default().push(format!("g{i}"));
    }
    for (i, &p) in cdeg.iter().enumerate() {
        degrees.entry(p).or_default().push(format!("c{i}"));
    }
    let space = GradedVectorSpace::new(degrees).unwrap();
    let g_idx: Vec<usize> = (0..gens).map(|i| space.find_label(&format!("g{i}")).unwrap()).collect();
    let c_idx: Vec<usize> = (0..centre).map(|i| space.find_label(&format!("c{i}")).unwrap()).collect();
    let mut bracket = Vec::new();
    for a in 0..gens {
        for b in a..gens {
            let (p, q) = (gdeg[a], gdeg[b]);
            if a == b && p.rem_euclid(2) == 0 {
                continue;
            }
            for (k, &cd) in cdeg.iter().enumerate() {
                if cd == p + q && r.gen_bool(0.6) {
                    bracket.push(BracketEntry { left: g_idx[a], right: g_idx[b], output: c_idx[k], coeff: small_scalar(r) });
                }
            }
        }
    }
    let n = space.total_dim();
    let mut images = vec![zero_vector(n); n];
    for a in 0..gens {
        for (k, &cd) in cdeg.iter().enumerate() {
            if cd == gdeg[a] - 1 && r.gen_bool(0.5) {
                images[g_idx[a]][c_idx[k]] = small_scalar(r);
            }
        }
    }
    let differential = GradedLinearMap::from_global_images(space.clone(), space.clone(), -1, &images).unwrap();
    DgLieAlgebra::new(DgLieData { space, differential, bracket }).expect("two-step construction is a dgla")
}

/// A truncated free dg-Lie algebra on a small random complex.
fn free_truncation(r: &mut ChaCha8Rng, max_dim: usize) -> Option<DgLieAlgebra> {
    let c = complex(r, 2);
    let f = free_dgla(&c, r.gen_range(1..=3), Limits::default()).ok()?;
    (f.algebra().dim() <= max_dim).then(|| f.algebra().clone())
}

/// A random valid dg-Lie algebra of dimension at most `max_dim` in a disguised basis.
pub fn dgla(r: &mut ChaCha8Rng, max_dim: usize) -> DgLieAlgebra {
    let g = loop {
        let candidate = if r.gen_bool(0.5) { Some(two_step(r, max_dim)) } else { free_truncation(r, max_dim) };
        if let Some(g) = candidate.filter(|g| g.dim() > 0) {
            break g;
        }
    };
    let blocks = conjugators(r, g.space());
    g.change_basis(&blocks).expect("basis change preserves validity")
}

/// Changes structure constants and differential entries at random. Entries are only
/// ever written in one order, so graded antisymmetry holds by construction unless an
/// even element is bracketed with itself.
pub fn perturb(r: &mut ChaCha8Rng, data: &DgLieData) -> DgLieData {
    let mut out = data.clone();
    let n = out.space.total_dim();
    let deg: Vec<i32> = (0..n).map(|i| out.space.degree_of(i)).collect();
    let edits = r.gen_range(1..=3);
    for _ in 0..edits {
        match r.gen_range(0..4) {
            0 if !out.bracket.is_empty() => {
                let k = r.gen_range(0..out.bracket.len());
                out.bracket[k].coeff += nonzero_scalar(r);
            }
            1 | 0 => {
                let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
                let outputs: Vec<usize> = (0..n).filter(|&k| deg[k] == deg[a] + deg[b]).collect();
                if a == b && deg[a].rem_euclid(2) == 0 || outputs.is_empty() {
                    continue;
                }
                // only extend an order that is already in use, or a fresh pair
                let reversed = out.bracket.iter().any(|e| e.left == b && e.right == a) && a != b;
                let (left, right) = if reversed { (b, a) } else { (a, b) };
                out.bracket.push(BracketEntry { left, right, output: *outputs.choose(r).unwrap(), coeff: nonzero_scalar(r) });
            }
            _ => {
                let a = r.gen_range(0..n);
                let targets: Vec<usize> = (0..n).filter(|&k| deg[k] == deg[a] - 1).collect();
                let Some(&b) = targets.choose(r) else { continue };
                let mut images: Vec<Vec<Scalar>> = (0..n).map(|i| out.differential.apply_global(&unit(n, i))).collect();
                images[a][b] += nonzero_scalar(r);
                out.differential = GradedLinearMap::from_global_images(out.space.clone(), out.space.clone(), -1, &images).unwrap();
            }
        }
    }
    out
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

/// Writes the reverse order of one stored structure constant with a value that
/// contradicts graded antisymmetry.
pub fn conflicting_orders(r: &mut ChaCha8Rng, data: &DgLieData) -> Option<DgLieData> {
    let candidates: Vec<&BracketEntry> = data.bracket.iter().filter(|e| e.left != e.right).collect();
    let e = (*candidates.choose(r)?).clone();
    let mut out = data.clone();
    let p = data.space.degree_of(e.left) as i64 * data.space.degree_of(e.right) as i64;
    let consistent = if p.rem_euclid(2) == 0 { -e.coeff.clone() } else { e.coeff.clone() };
    out.bracket.push(BracketEntry { left: e.right, right: e.left, output: e.output, coeff: consistent + nonzero_scalar(r) });
    Some(out)
}

/// `ℚ ⊕ V` with `V² = 0`, of dimension `1 + k`.
pub fn square_zero(k: usize) -> ArtinAlgebra {
    let labels: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    ArtinAlgebra::square_zero(&refs)
}

/// `ℚ[t]/(t^k)`, of dimension `k`.
pub fn truncated(k: usize) -> ArtinAlgebra {
    ArtinAlgebra::truncated_polynomial(k)
}

pub fn is_zero(x: &Scalar) -> bool {
    x.is_zero()
}
