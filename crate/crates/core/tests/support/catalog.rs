//! Reads the bundled catalog documents directly, without the CLI parser.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use dglie::dgla::{BracketEntry, DgLieAlgebra, DgLieData, DgLieMorphism};
use dglie::graded::{GradedLinearMap, GradedVectorSpace};
use dglie::moduli::{ArtinAlgebra, ArtinAlgebraData, Polynomial, Presentation, ProductTriple};
use dglie::scalar::{parse_scalar, zero_vector, Scalar};
use serde_json::Value;

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

pub fn read(name: &str) -> Value {
    let path = dir().join(name);
    let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap()
}

fn files_of_kind(kind: &str) -> Vec<(String, Value)> {
    let mut names: Vec<String> = fs::read_dir(dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), read(&n))).filter(|(_, v)| v["kind"] == kind).collect()
}

fn scalar(v: &Value) -> Scalar {
    parse_scalar(v.as_str().unwrap()).unwrap()
}

pub fn dgla_data(payload: &Value) -> DgLieData {
    let mut degrees: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for b in payload["basis"].as_array().unwrap() {
        degrees.entry(b["degree"].as_i64().unwrap() as i32).or_default().push(b["label"].as_str().unwrap().to_string());
    }
    let space = GradedVectorSpace::new(degrees).unwrap();
    let index = |l: &Value| space.find_label(l.as_str().unwrap()).unwrap();
    let n = space.total_dim();
    let mut images = vec![zero_vector(n); n];
    for t in payload["differential"].as_array().into_iter().flatten() {
        images[index(&t[0])][index(&t[1])] += scalar(&t[2]);
    }
    let differential = GradedLinearMap::from_global_images(space.clone(), space.clone(), -1, &images).unwrap();
    let bracket = payload["bracket"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|q| BracketEntry { left: index(&q[0]), right: index(&q[1]), output: index(&q[2]), coeff: scalar(&q[3]) })
        .collect();
    DgLieData { space, differential, bracket }
}

/// Every dgla document, valid or not.
pub fn dgla_documents() -> Vec<(String, DgLieData)> {
    files_of_kind("dgla").into_iter().map(|(n, v)| (n, dgla_data(&v["payload"]))).collect()
}

/// The valid dgla documents.
pub fn dglas() -> Vec<(String, DgLieAlgebra)> {
    dgla_documents().into_iter().filter_map(|(n, d)| DgLieAlgebra::new(d).ok().map(|g| (n, g))).collect()
}

pub fn dgla(name: &str) -> DgLieAlgebra {
    DgLieAlgebra::new(dgla_data(&read(name)["payload"])).unwrap()
}

pub fn artin(name: &str) -> ArtinAlgebra {
    artin_from(&read(name)["payload"])
}

fn artin_from(payload: &Value) -> ArtinAlgebra {
    let labels: Vec<String> = payload["basis"].as_array().unwrap().iter().map(|l| l.as_str().unwrap().to_string()).collect();
    let index = |l: &Value| labels.iter().position(|x| x == l.as_str().unwrap()).unwrap();
    let product = payload["product"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|q| ProductTriple { left: index(&q[0]), right: index(&q[1]), output: index(&q[2]), coeff: scalar(&q[3]) })
        .collect();
    let augmentation = payload["augmentation"].as_array().unwrap().iter().map(scalar).collect();
    ArtinAlgebra::new(ArtinAlgebraData { labels: labels.clone(), product, augmentation }).unwrap()
}

pub fn artins() -> Vec<(String, ArtinAlgebra)> {
    files_of_kind("artin_algebra").into_iter().map(|(n, v)| (n, artin_from(&v["payload"]))).collect()
}

pub fn presentations() -> Vec<(String, Presentation)> {
    files_of_kind("presentation")
        .into_iter()
        .map(|(n, v)| {
            let p = &v["payload"];
            let generators: Vec<String> = p["generators"].as_array().unwrap().iter().map(|g| g.as_str().unwrap().to_string()).collect();
            let relations = p["relations"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|r| {
                    let map: BTreeMap<String, String> = serde_json::from_value(r.clone()).unwrap();
                    Polynomial::from_coefficients(&generators, &map).unwrap()
                })
                .collect();
            (n, Presentation::new(generators, relations, Default::default()).unwrap())
        })
        .collect()
}

fn endpoint(v: &Value) -> DgLieAlgebra {
    match v.get("file") {
        Some(f) => dgla(f.as_str().unwrap()),
        None => DgLieAlgebra::new(dgla_data(v)).unwrap(),
    }
}

/// Every morphism document, with its file name.
pub fn morphisms() -> Vec<(String, DgLieMorphism)> {
    files_of_kind("morphism")
        .into_iter()
        .map(|(n, v)| {
            let p = &v["payload"];
            let (source, target) = (endpoint(&p["source"]), endpoint(&p["target"]));
            let mut images = vec![zero_vector(target.dim()); source.dim()];
            for t in p["map"].as_array().into_iter().flatten() {
                let a = source.space().find_label(t[0].as_str().unwrap()).unwrap();
                let b = target.space().find_label(t[1].as_str().unwrap()).unwrap();
                images[a][b] += scalar(&t[2]);
            }
            let map = GradedLinearMap::from_global_images(source.space().clone(), target.space().clone(), 0, &images).unwrap();
            (n, DgLieMorphism::new(source, target, map).unwrap())
        })
        .collect()
}
