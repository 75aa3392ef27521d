//! Sparse multivariate polynomials over ℚ.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{parse_scalar, Scalar};

pub type Exponent = Vec<u32>;

/// A polynomial in a fixed number of variables, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Scalar::one());
        p
    }

    /// `Σ c_i x_i`.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let mut p = Self::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            p.add_assign(&Self::var(coeffs.len(), i).scale(c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponent, c: Scalar) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, a: &Scalar) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        if a.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * a);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                let g = e.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(g, c * d);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Self::constant(self.nvars, Scalar::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The least total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficients of the degree-one part.
    pub fn linear_part(&self) -> Vec<Scalar> {
        (0..self.nvars)
            .map(|i| {
                let mut e = vec![0; self.nvars];
                e[i] = 1;
                self.terms.get(&e).cloned().unwrap_or_else(Scalar::zero)
            })
            .collect()
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars, "evaluation point length");
        let mut total = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Replaces variable `i` by `images[i]`; all images share one variable count.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let nvars = images.first().map_or(0, |p| p.nvars);
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut t = Self::constant(nvars, c.clone());
            for (p, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&p.pow(k));
                }
            }
            out.add_assign(&t);
        }
        out
    }

    /// Renders with the given variable names, e.g. `x^3*y - 1/2*z`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(e, _), (f, _)| (f.iter().sum::<u32>(), f).cmp(&(e.iter().sum::<u32>(), e)));
        let mut out = String::new();
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let mono = monomial_text(e, names);
            let (neg, abs) = if *c < Scalar::zero() { (true, -c.clone()) } else { (false, c.clone()) };
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => out.push_str(&abs.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => out.push_str(&format!("{abs}*{mono}")),
            }
        }
        out
    }

    /// Parses a coefficient map such as `{"y^2": "1", "x^3": "-1"}`; `"1"` names the
    /// constant monomial.
    pub fn from_coefficients(names: &[String], coefficients: &BTreeMap<String, String>) -> Result<Polynomial> {
        let mut p = Self::zero(names.len());
        for (mono, coeff) in coefficients {
            p.add_term(parse_monomial(names, mono)?, parse_scalar(coeff)?);
        }
        Ok(p)
    }

    pub fn to_coefficients(&self, names: &[String]) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m = monomial_text(e, names);
                (if m.is_empty() { "1".into() } else { m }, c.to_string())
            })
            .collect()
    }
}

fn monomial_text(e: &[u32], names: &[String]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Parses `x^3*y`; repeated factors multiply.
pub fn parse_monomial(names: &[String], text: &str) -> Result<Exponent> {
    let mut e = vec![0; names.len()];
    let text = text.trim();
    if text == "1" {
        return Ok(e);
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let (name, power) = match factor.split_once('^') {
            Some((n, k)) => {
                let k: u32 = k.trim().parse().map_err(|_| Error::MalformedInput(format!("bad exponent in monomial `{text}`")))?;
                (n.trim(), k)
            }
            None => (factor, 1),
        };
        let i = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::MalformedInput(format!("unknown generator `{name}` in monomial `{text}`")))?;
        e[i] += power;
    }
    Ok(e)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("u{i}")).collect();
        f.write_str(&self.render(&names))
    }
}
