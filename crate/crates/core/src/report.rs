//! Axiom-violation reports shared by all structure validators.

use std::fmt;

use serde::Serialize;

use crate::scalar::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    DifferentialSquare,
    Antisymmetry,
    Jacobi,
    Derivation,
    Associativity,
    Unit,
    Leibniz,
    Commutativity,
    Augmentation,
    Nilpotence,
    ChainMap,
    BracketPreservation,
    Surjectivity,
    Multiplicativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::DifferentialSquare => "d∘d = 0",
            Axiom::Antisymmetry => "graded antisymmetry",
            Axiom::Jacobi => "graded Jacobi identity",
            Axiom::Derivation => "d is a derivation of the bracket",
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit law",
            Axiom::Leibniz => "Leibniz rule",
            Axiom::Commutativity => "commutativity",
            Axiom::Augmentation => "augmentation is an algebra map",
            Axiom::Nilpotence => "maximal ideal is nilpotent",
            Axiom::ChainMap => "commutes with differentials",
            Axiom::BracketPreservation => "preserves the bracket",
            Axiom::Surjectivity => "surjective",
            Axiom::Multiplicativity => "multiplicative",
        };
        f.write_str(name)
    }
}

/// One failed axiom instance: the basis tuple it was evaluated on and the nonzero
/// defect (in the coordinates of the ambient basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
    pub defect: Vector,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, axiom: Axiom, witness: Vec<String>, defect: Vector) {
        self.violations.push(Violation { axiom, witness, defect });
    }

    pub fn first(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    pub fn failed_axioms(&self) -> Vec<Axiom> {
        let mut axioms: Vec<Axiom> = self.violations.iter().map(|v| v.axiom).collect();
        axioms.sort();
        axioms.dedup();
        axioms
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("all axioms hold");
        }
        let first = &self.violations[0];
        write!(
            f,
            "{} violation(s); first: {} fails on ({})",
            self.violations.len(),
            first.axiom,
            first.witness.join(", ")
        )
    }
}
