//! Pauli strings in a packed symplectic layout.
//!
//! Each position is stored as an `(x, z)` bit pair spread over two word
//! vectors: `I = (0,0)`, `X = (1,0)`, `Y = (1,1)`, `Z = (0,1)`. Qubit `q`
//! lives in bit `q % 64` of word `q / 64`. Position 0 is the leftmost symbol
//! of the text form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HsimError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

/// A tensor product of single-qubit Paulis, without phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    width: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

fn words_for(width: usize) -> usize {
    width.div_ceil(64)
}

impl PauliString {
    /// The all-identity string on `width` qubits.
    pub fn identity(width: usize) -> Result<PauliString> {
        if width == 0 {
            return Err(HsimError::input("Pauli string width must be at least 1"));
        }
        let n = words_for(width);
        Ok(PauliString {
            width,
            x: vec![0; n],
            z: vec![0; n],
        })
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Result<PauliString> {
        let mut s = PauliString::identity(paulis.len())?;
        for (q, &p) in paulis.iter().enumerate() {
            s.set(q, p);
        }
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(
            q < self.width,
            "qubit {q} out of range for width {}",
            self.width
        );
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(
            q < self.width,
            "qubit {q} out of range for width {}",
            self.width
        );
        let (w, b) = (q / 64, q % 64);
        let (xb, zb) = p.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn iter(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.width).map(|q| self.get(q))
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Qubits carrying a non-identity Pauli, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.width)
            .filter(|&q| self.get(q) != Pauli::I)
            .collect()
    }

    /// Number of non-identity positions.
    pub fn hamming_weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    fn check_width(&self, other: &PauliString) -> Result<()> {
        if self.width != other.width {
            return Err(HsimError::input(format!(
                "width mismatch: {} vs {}",
                self.width, other.width
            )));
        }
        Ok(())
    }

    /// Whether the two operators commute: the count of positions where both
    /// are non-identity and different must be even.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_width(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        let mut parity = 0u32;
        for w in 0..self.x.len() {
            let anti = (self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w]);
            parity ^= anti.count_ones() & 1;
        }
        parity == 0
    }

    /// CNOTs left at the interface between the two term subcircuits after
    /// cancellation: each differing position costs 1, or 2 if neither side
    /// is the identity there.
    pub fn cnot_distance(&self, other: &PauliString) -> Result<usize> {
        self.check_width(other)?;
        Ok(self.cnot_distance_unchecked(other))
    }

    pub(crate) fn cnot_distance_unchecked(&self, other: &PauliString) -> usize {
        let mut total = 0;
        for w in 0..self.x.len() {
            let differ = (self.x[w] ^ other.x[w]) | (self.z[w] ^ other.z[w]);
            let both = (self.x[w] | self.z[w]) & (other.x[w] | other.z[w]);
            total += differ.count_ones() as usize + (differ & both).count_ones() as usize;
        }
        total
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic over positions with `I < X < Y < Z`; shorter strings first.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.iter() {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = HsimError;

    fn from_str(s: &str) -> Result<PauliString> {
        let paulis = s
            .chars()
            .map(|c| {
                Pauli::from_char(c)
                    .ok_or_else(|| HsimError::input(format!("invalid Pauli symbol {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::from_paulis(&paulis)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A real-weighted Pauli string, `c·P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: f64, string: PauliString) -> Result<PauliTerm> {
        if !coefficient.is_finite() {
            return Err(HsimError::input(format!(
                "non-finite coefficient {coefficient}"
            )));
        }
        Ok(PauliTerm {
            coefficient,
            string,
        })
    }
}

/// CNOT count of one Trotter step after interface cancellation: the weight
/// of the first term, the distances between neighbours, and the weight of
/// the last term.
pub fn sequence_cnot_cost(order: &[PauliString]) -> Result<usize> {
    let (first, last) = match (order.first(), order.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(HsimError::input("empty term sequence")),
    };
    let mut cost = first.hamming_weight() + last.hamming_weight();
    for pair in order.windows(2) {
        cost += pair[0].cnot_distance(&pair[1])?;
    }
    Ok(cost)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn commutation_examples() {
        assert!(ps("XXXX").commutes(&ps("XXYY")).unwrap());
        assert!(ps("XXX").commutes(&ps("XXX")).unwrap());
        // Z·X anticommutes at two positions, so the strings commute.
        assert!(ps("XZZ").commutes(&ps("XXX")).unwrap());
        assert!(!ps("ZXX").commutes(&ps("XXX")).unwrap());
        assert!(ps("XZZ").commutes(&ps("XX")).is_err());
    }

    #[test]
    fn hamming_weight_examples() {
        assert_eq!(ps("XZZ").hamming_weight(), 3);
        assert_eq!(ps("III").hamming_weight(), 0);
        assert_eq!(ps("IXIY").hamming_weight(), 2);
    }

    #[test]
    fn cnot_distance_examples() {
        assert_eq!(ps("XXXX").cnot_distance(&ps("XXYY")).unwrap(), 4);
        assert_eq!(ps("XYYX").cnot_distance(&ps("YXXY")).unwrap(), 8);
        assert_eq!(ps("XXX").cnot_distance(&ps("XXX")).unwrap(), 0);
        assert_eq!(ps("IX").cnot_distance(&ps("ZX")).unwrap(), 1);
        assert!(ps("X").cnot_distance(&ps("XX")).is_err());
    }

    #[test]
    fn sequence_costs() {
        let lex: Vec<_> = [
            "XXXX", "XXYY", "XYXY", "XYYX", "YXXY", "YXYX", "YYXX", "YYYY",
        ]
        .iter()
        .map(|s| ps(s))
        .collect();
        assert_eq!(sequence_cnot_cost(&lex).unwrap(), 40);
        let mut tsp = lex.clone();
        tsp.swap(4, 5);
        assert_eq!(sequence_cnot_cost(&tsp).unwrap(), 36);
        assert_eq!(sequence_cnot_cost(&[ps("XZZ")]).unwrap(), 6);
        assert!(sequence_cnot_cost(&[]).is_err());
    }

    #[test]
    fn ordering_is_ixyz() {
        assert!(ps("XXX") < ps("XZZ"));
        assert!(ps("IZ") < ps("XI"));
        assert!(ps("XY") < ps("XZ"));
    }

    #[test]
    fn wide_strings_span_words() {
        let mut a = PauliString::identity(130).unwrap();
        a.set(0, Pauli::X);
        a.set(64, Pauli::Y);
        a.set(129, Pauli::Z);
        assert_eq!(a.hamming_weight(), 3);
        assert_eq!(a.support(), vec![0, 64, 129]);
        let b: PauliString = a.to_string().parse().unwrap();
        assert_eq!(a, b);
        let mut c = a.clone();
        c.set(129, Pauli::X);
        assert_eq!(a.cnot_distance(&c).unwrap(), 2);
        assert!(!a.commutes(&c).unwrap());
    }

    #[test]
    fn rejects_bad_text() {
        assert!("".parse::<PauliString>().is_err());
        assert!("XQ".parse::<PauliString>().is_err());
        assert!(PauliTerm::new(f64::NAN, ps("X")).is_err());
    }
}
