//! Input documents: one JSON envelope (`schema_version`, `kind`, `metadata`,
//! `payload`) around kind-specific bodies. Scalars are `"p/q"` strings and structure
//! constants refer to basis elements by label.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use dglie::dgla::{BracketEntry, DgLieAlgebra, DgLieData, DgLieMorphism};
use dglie::env::{DgAlgebraData, ProductEntry};
use dglie::graded::{check_degree, GradedLinearMap, GradedVectorSpace};
use dglie::moduli::{ArtinAlgebraData, Polynomial, Presentation, PresentationBounds, ProductTriple};
use dglie::scalar::{parse_scalar, zero_vector, Scalar};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Dgla,
    DgAlgebra,
    ArtinAlgebra,
    Presentation,
    Morphism,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Dgla => "dgla",
            Kind::DgAlgebra => "dg_algebra",
            Kind::ArtinAlgebra => "artin_algebra",
            Kind::Presentation => "presentation",
            Kind::Morphism => "morphism",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub name: String,
    #[serde(default)]
    pub description: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: u32,
    pub kind: Kind,
    pub metadata: Metadata,
    pub payload: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
}

/// `[from, to, coeff]`: `d(from)` has coefficient `coeff` on `to`.
pub type MapTriple = (String, String, String);
/// `[left, right, output, coeff]`.
pub type StructureQuad = (String, String, String, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DglaPayload {
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub differential: Vec<MapTriple>,
    #[serde(default)]
    pub bracket: Vec<StructureQuad>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgAlgebraPayload {
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub differential: Vec<MapTriple>,
    pub unit: String,
    #[serde(default)]
    pub product: Vec<StructureQuad>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtinPayload {
    /// The first label names the unit.
    pub basis: Vec<String>,
    #[serde(default)]
    pub product: Vec<StructureQuad>,
    pub augmentation: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationPayload {
    pub generators: Vec<String>,
    /// Each relation maps monomials such as `"x^3*y"` (or `"1"`) to coefficients.
    #[serde(default)]
    pub relations: Vec<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileRef {
    /// Path of a dgla document, relative to the referring document.
    pub file: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    File(FileRef),
    Inline(DglaPayload),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismPayload {
    pub source: Endpoint,
    pub target: Endpoint,
    /// `[from, to, coeff]`: `f(from)` has coefficient `coeff` on `to`.
    #[serde(default)]
    pub map: Vec<MapTriple>,
}

/// A document read from disk with the digests of every file it touched.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub path: PathBuf,
    pub document: Document,
    pub digests: Vec<InputDigest>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

fn parse_error(path: &Path, what: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {what}", path.display()))
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let document: Document = serde_json::from_slice(&bytes).map_err(|e| parse_error(path, e))?;
    if document.schema_version != SCHEMA_VERSION {
        return Err(parse_error(path, format!("unsupported schema_version {}", document.schema_version)));
    }
    let digest = InputDigest { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) };
    Ok(Loaded { path: path.to_path_buf(), document, digests: vec![digest] })
}

pub fn expect_kind(loaded: &Loaded, kinds: &[Kind]) -> Result<(), CliError> {
    if kinds.contains(&loaded.document.kind) {
        return Ok(());
    }
    let wanted: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    Err(parse_error(&loaded.path, format!("expected {} document, found {}", wanted.join(" or "), loaded.document.kind.name())))
}

pub fn payload<T: for<'de> Deserialize<'de>>(loaded: &Loaded) -> Result<T, CliError> {
    serde_json::from_value(loaded.document.payload.clone()).map_err(|e| parse_error(&loaded.path, e))
}

fn scalar(path: &Path, text: &str) -> Result<Scalar, CliError> {
    parse_scalar(text).map_err(|e| parse_error(path, e))
}

/// Labels are unique across the whole document, so every reference is unambiguous.
fn space_of(path: &Path, basis: &[BasisElement]) -> Result<(GradedVectorSpace, BTreeMap<String, usize>), CliError> {
    let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for b in basis {
        if !seen.insert(b.label.clone()) {
            return Err(parse_error(path, format!("basis label `{}` appears twice", b.label)));
        }
        let n = check_degree(b.degree).map_err(|e| parse_error(path, e))?;
        degrees.entry(n).or_default().push(b.label.clone());
    }
    let space = GradedVectorSpace::new(degrees).map_err(|e| parse_error(path, e))?;
    let index = (0..space.total_dim()).map(|i| (space.label_of(i).to_string(), i)).collect();
    Ok((space, index))
}

fn lookup(path: &Path, index: &BTreeMap<String, usize>, label: &str) -> Result<usize, CliError> {
    index.get(label).copied().ok_or_else(|| parse_error(path, format!("unknown basis label `{label}`")))
}

fn differential_of(
    path: &Path,
    space: &GradedVectorSpace,
    index: &BTreeMap<String, usize>,
    triples: &[MapTriple],
) -> Result<GradedLinearMap, CliError> {
    let n = space.total_dim();
    let mut images = vec![zero_vector(n); n];
    for (from, to, c) in triples {
        let (a, b) = (lookup(path, index, from)?, lookup(path, index, to)?);
        if space.degree_of(b) != space.degree_of(a) - 1 {
            return Err(parse_error(path, format!("d({from}) cannot have a component on `{to}`: degrees differ by more than one")));
        }
        images[a][b] += scalar(path, c)?;
    }
    GradedLinearMap::from_global_images(space.clone(), space.clone(), -1, &images).map_err(|e| parse_error(path, e))
}

pub fn dgla_data(path: &Path, p: &DglaPayload) -> Result<DgLieData, CliError> {
    let (space, index) = space_of(path, &p.basis)?;
    let differential = differential_of(path, &space, &index, &p.differential)?;
    let mut bracket = Vec::new();
    for (l, r, o, c) in &p.bracket {
        let (left, right, output) = (lookup(path, &index, l)?, lookup(path, &index, r)?, lookup(path, &index, o)?);
        if space.degree_of(output) != space.degree_of(left) + space.degree_of(right) {
            return Err(parse_error(path, format!("[{l}, {r}] cannot have a component on `{o}`: degrees do not add up")));
        }
        bracket.push(BracketEntry { left, right, output, coeff: scalar(path, c)? });
    }
    Ok(DgLieData { space, differential, bracket })
}

pub fn dg_algebra_data(path: &Path, p: &DgAlgebraPayload) -> Result<DgAlgebraData, CliError> {
    let (space, index) = space_of(path, &p.basis)?;
    let differential = differential_of(path, &space, &index, &p.differential)?;
    let unit = lookup(path, &index, &p.unit)?;
    let mut product = Vec::new();
    for (l, r, o, c) in &p.product {
        let (left, right, output) = (lookup(path, &index, l)?, lookup(path, &index, r)?, lookup(path, &index, o)?);
        if space.degree_of(output) != space.degree_of(left) + space.degree_of(right) {
            return Err(parse_error(path, format!("{l}·{r} cannot have a component on `{o}`: degrees do not add up")));
        }
        product.push(ProductEntry { left, right, output, coeff: scalar(path, c)? });
    }
    Ok(DgAlgebraData { space, differential, unit, product })
}

pub fn artin_data(path: &Path, p: &ArtinPayload) -> Result<ArtinAlgebraData, CliError> {
    let mut index = BTreeMap::new();
    for (i, l) in p.basis.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(parse_error(path, format!("basis label `{l}` appears twice")));
        }
    }
    let mut product = Vec::new();
    for (l, r, o, c) in &p.product {
        product.push(ProductTriple {
            left: lookup(path, &index, l)?,
            right: lookup(path, &index, r)?,
            output: lookup(path, &index, o)?,
            coeff: scalar(path, c)?,
        });
    }
    let augmentation = p.augmentation.iter().map(|c| scalar(path, c)).collect::<Result<_, _>>()?;
    Ok(ArtinAlgebraData { labels: p.basis.clone(), product, augmentation })
}

pub fn presentation(path: &Path, p: &PresentationPayload, bounds: PresentationBounds) -> Result<Presentation, CliError> {
    let relations = p
        .relations
        .iter()
        .map(|r| Polynomial::from_coefficients(&p.generators, r).map_err(|e| parse_error(path, e)))
        .collect::<Result<Vec<_>, _>>()?;
    Presentation::new(p.generators.clone(), relations, bounds).map_err(CliError::from)
}

/// Resolves a morphism endpoint, loading referenced files relative to `base`.
fn endpoint(base: &Path, e: &Endpoint, digests: &mut Vec<InputDigest>) -> Result<(PathBuf, DglaPayload), CliError> {
    match e {
        Endpoint::Inline(p) => Ok((base.to_path_buf(), p.clone())),
        Endpoint::File(FileRef { file }) => {
            let path = base.parent().unwrap_or(Path::new(".")).join(file);
            let loaded = load(&path)?;
            expect_kind(&loaded, &[Kind::Dgla])?;
            digests.extend(loaded.digests.iter().cloned());
            Ok((path, payload(&loaded)?))
        }
    }
}

/// The morphism with source and target validated; the map itself is checked by
/// [`DgLieMorphism::new`].
pub fn morphism(loaded: &mut Loaded) -> Result<DgLieMorphism, CliError> {
    let p: MorphismPayload = payload(loaded)?;
    let mut extra = Vec::new();
    let (spath, spayload) = endpoint(&loaded.path, &p.source, &mut extra)?;
    let (tpath, tpayload) = endpoint(&loaded.path, &p.target, &mut extra)?;
    loaded.digests.extend(extra);
    let source = DgLieAlgebra::new(dgla_data(&spath, &spayload)?)?;
    let target = DgLieAlgebra::new(dgla_data(&tpath, &tpayload)?)?;
    let (_, sindex) = space_of(&spath, &spayload.basis)?;
    let (_, tindex) = space_of(&tpath, &tpayload.basis)?;
    let mut images = vec![zero_vector(target.dim()); source.dim()];
    for (from, to, c) in &p.map {
        let (a, b) = (lookup(&loaded.path, &sindex, from)?, lookup(&loaded.path, &tindex, to)?);
        if source.degree(a) != target.degree(b) {
            return Err(parse_error(&loaded.path, format!("`{from}` and `{to}` have different degrees")));
        }
        images[a][b] += scalar(&loaded.path, c)?;
    }
    let map = GradedLinearMap::from_global_images(source.space().clone(), target.space().clone(), 0, &images)
        .map_err(|e| parse_error(&loaded.path, e))?;
    Ok(DgLieMorphism::new(source, target, map)?)
}

/// The payload of a validated algebra, labelled so that labels stay unique.
pub fn dgla_payload(g: &DgLieAlgebra) -> DglaPayload {
    let space = g.space();
    let label = |i: usize| space.display_label(i);
    let basis = (0..g.dim()).map(|i| BasisElement { label: label(i), degree: space.degree_of(i) as i64 }).collect();
    let mut differential = Vec::new();
    for a in 0..g.dim() {
        for (b, c) in g.d_basis(a).into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            differential.push((label(a), label(b), c.to_string()));
        }
    }
    let bracket = g.entries().into_iter().map(|e| (label(e.left), label(e.right), label(e.output), e.coeff.to_string())).collect();
    DglaPayload { basis, differential, bracket }
}

pub fn dgla_document(g: &DgLieAlgebra, metadata: Metadata) -> Document {
    Document {
        schema_version: SCHEMA_VERSION,
        kind: Kind::Dgla,
        metadata,
        payload: serde_json::to_value(dgla_payload(g)).expect("payloads serialize"),
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize");
    s.push('\n');
    s
}
