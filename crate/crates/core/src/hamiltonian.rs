//! Hamiltonian container and the `.ham` text format.
//!
//! One term per line, `<coefficient> <pauli string>`. `#` starts a comment
//! and blank lines are skipped. On load, duplicate strings are merged by
//! summing coefficients, the all-identity term is dropped (it only
//! contributes a global phase) and zero results are removed. Terms keep the
//! order of their first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{HsimError, Result};
use crate::pauli::{Pauli, PauliString, PauliTerm};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hamiltonian {
    width: usize,
    terms: Vec<PauliTerm>,
}

impl Hamiltonian {
    /// Builds a Hamiltonian, applying the same normalization as the parser.
    pub fn new(terms: Vec<PauliTerm>) -> Result<Hamiltonian> {
        let width = match terms.first() {
            Some(t) => t.string.width(),
            None => return Err(HsimError::input("Hamiltonian has no terms")),
        };
        let mut merged: Vec<PauliTerm> = Vec::with_capacity(terms.len());
        let mut slot: HashMap<PauliString, usize> = HashMap::new();
        for term in terms {
            if term.string.width() != width {
                return Err(HsimError::input(format!(
                    "term {} has width {}, expected {width}",
                    term.string,
                    term.string.width()
                )));
            }
            if !term.coefficient.is_finite() {
                return Err(HsimError::input(format!(
                    "non-finite coefficient on {}",
                    term.string
                )));
            }
            if term.string.is_identity() {
                continue;
            }
            match slot.get(&term.string) {
                Some(&i) => merged[i].coefficient += term.coefficient,
                None => {
                    slot.insert(term.string.clone(), merged.len());
                    merged.push(term);
                }
            }
        }
        merged.retain(|t| t.coefficient != 0.0);
        if merged.is_empty() {
            return Err(HsimError::input(
                "Hamiltonian is empty after merging and identity removal",
            ));
        }
        Ok(Hamiltonian {
            width,
            terms: merged,
        })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (f64, &'a str)>) -> Result<Hamiltonian> {
        let terms = pairs
            .into_iter()
            .map(|(c, s)| PauliTerm::new(c, s.parse()?))
            .collect::<Result<Vec<_>>>()?;
        Hamiltonian::new(terms)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn strings(&self) -> Vec<PauliString> {
        self.terms.iter().map(|t| t.string.clone()).collect()
    }
}

/// Parses the `.ham` text format. Errors carry 1-based line numbers.
pub fn parse_hamiltonian(text: &str) -> Result<Hamiltonian> {
    let mut terms = Vec::new();
    let mut width: Option<usize> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let err = |message: String| HsimError::Parse {
            line: line_no,
            message,
        };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let (coef_txt, string_txt) = match (fields.next(), fields.next(), fields.next()) {
            (Some(c), Some(s), None) => (c, s),
            _ => {
                return Err(err(format!(
                    "expected `<coefficient> <pauli string>`, got {content:?}"
                )))
            }
        };
        let coefficient: f64 = coef_txt
            .parse()
            .map_err(|_| err(format!("invalid coefficient {coef_txt:?}")))?;
        if !coefficient.is_finite() {
            return Err(err(format!("non-finite coefficient {coef_txt:?}")));
        }
        let string: PauliString = string_txt
            .parse()
            .map_err(|e: HsimError| err(e.to_string()))?;
        match width {
            Some(w) if w != string.width() => {
                return Err(err(format!(
                    "width mismatch: {} has width {}, expected {w}",
                    string,
                    string.width()
                )))
            }
            _ => width = Some(string.width()),
        }
        terms.push(PauliTerm {
            coefficient,
            string,
        });
    }
    if terms.is_empty() {
        return Err(HsimError::Parse {
            line: last_line.max(1),
            message: "no terms".into(),
        });
    }
    Hamiltonian::new(terms).map_err(|e| HsimError::Parse {
        line: last_line.max(1),
        message: e.to_string(),
    })
}

/// Writes the `.ham` format with 17 significant digits per coefficient.
pub fn serialize_hamiltonian(h: &Hamiltonian) -> String {
    let mut out = String::new();
    for t in &h.terms {
        let _ = writeln!(out, "{:.16e} {}", t.coefficient, t.string);
    }
    out
}

/// Seeded random Hamiltonian: `n_terms` distinct non-identity strings drawn
/// uniformly without replacement, coefficients uniform on `[-1, 1]` minus
/// zero.
///
/// The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`.
pub fn random_hamiltonian(width: usize, n_terms: usize, seed: u64) -> Result<Hamiltonian> {
    if width == 0 || n_terms == 0 {
        return Err(HsimError::input("width and term count must be positive"));
    }
    let available = if width >= 32 {
        u64::MAX
    } else {
        (1u64 << (2 * width)) - 1
    };
    if n_terms as u64 > available {
        return Err(HsimError::input(format!(
            "{n_terms} distinct non-identity strings requested but width {width} only has {available}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strings: Vec<PauliString> = if width <= 10 {
        // Index k in 1..4^width encodes symbol q in base-4 digit (width-1-q).
        index::sample(&mut rng, available as usize, n_terms)
            .into_iter()
            .map(|k| decode_index(width, k as u64 + 1))
            .collect()
    } else {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(n_terms);
        while out.len() < n_terms {
            let paulis: Vec<Pauli> = (0..width)
                .map(|_| Pauli::ALL[rng.random_range(0..4)])
                .collect();
            let s = PauliString::from_paulis(&paulis)?;
            if !s.is_identity() && seen.insert(s.clone()) {
                out.push(s);
            }
        }
        out
    };
    let terms = strings
        .into_iter()
        .map(|string| {
            let coefficient = loop {
                let c: f64 = rng.random_range(-1.0..=1.0);
                if c != 0.0 {
                    break c;
                }
            };
            PauliTerm {
                coefficient,
                string,
            }
        })
        .collect();
    Hamiltonian::new(terms)
}

fn decode_index(width: usize, mut k: u64) -> PauliString {
    let mut paulis = vec![Pauli::I; width];
    for q in (0..width).rev() {
        paulis[q] = Pauli::ALL[(k % 4) as usize];
        k /= 4;
    }
    PauliString::from_paulis(&paulis).expect("width is positive")
}
