use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bitvec::BitVec;
use crate::error::{Error, Result};

/// Single-qubit letter. `Y` stands for the real operator iY = ZX.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const NONTRIVIAL: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' | '_' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// An n-qubit Pauli operator `i^phase * prod_q Z_q^{z_q} X_q^{x_q}`.
///
/// With `phase` in {0, 2} the operator is real (sign +1 or -1); letters are
/// I, X, iY = ZX and Z. Odd phases only arise when a non-real Clifford such
/// as SQRTZ is applied, and are kept exact rather than rounded away.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp { x: BitVec::zeros(n), z: BitVec::zeros(n), phase: 0 }
    }

    pub fn from_parts(x: BitVec, z: BitVec, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch(x.len(), z.len()));
        }
        Ok(PauliOp { x, z, phase: phase & 3 })
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliOp::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    pub fn single(n: usize, q: usize, letter: Letter) -> Self {
        let mut p = PauliOp::identity(n);
        p.set_letter(q, letter);
        p
    }

    /// Product of `letter` over the listed qubits.
    pub fn on(n: usize, qubits: &[usize], letter: Letter) -> Self {
        let mut p = PauliOp::identity(n);
        for &q in qubits {
            p.set_letter(q, letter);
        }
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub(crate) fn x_mut(&mut self) -> &mut BitVec {
        &mut self.x
    }

    pub(crate) fn z_mut(&mut self) -> &mut BitVec {
        &mut self.z
    }

    /// Exponent k of the global factor i^k.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub(crate) fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    pub fn is_real(&self) -> bool {
        self.phase & 1 == 0
    }

    /// +1 or -1 for real operators, `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn negated(&self) -> PauliOp {
        let mut p = self.clone();
        p.add_phase(2);
        p
    }

    /// Same letters with phase 0.
    pub fn unsigned(&self) -> PauliOp {
        PauliOp { x: self.x.clone(), z: self.z.clone(), phase: 0 }
    }

    pub fn letter(&self, q: usize) -> Letter {
        Letter::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set_letter(&mut self, q: usize, letter: Letter) {
        let (x, z) = letter.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.num_qubits()).map(|q| self.letter(q)).collect()
    }

    pub fn weight(&self) -> usize {
        self.x.or(&self.z).count_ones()
    }

    pub fn support(&self) -> Vec<usize> {
        self.x.or(&self.z).iter_ones().collect()
    }

    pub fn is_identity_mod_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of iY letters.
    pub fn y_count(&self) -> usize {
        self.x.and_count(&self.z) as usize
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize + self.y_count()) % 2 == 0
    }

    /// Sign of P*P (always ±1).
    pub fn square_sign(&self) -> i8 {
        if (self.phase as usize + self.y_count()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Fallible product `a * b`.
    pub fn multiply(a: &PauliOp, b: &PauliOp) -> Result<PauliOp> {
        if a.num_qubits() != b.num_qubits() {
            return Err(Error::LengthMismatch(a.num_qubits(), b.num_qubits()));
        }
        Ok(a.mul(b))
    }

    /// Product `self * other` with exact phase.
    pub fn mul(&self, other: &PauliOp) -> PauliOp {
        let mut out = self.clone();
        out.mul_assign_right(other);
        out
    }

    /// `self <- self * other`
    pub fn mul_assign_right(&mut self, other: &PauliOp) {
        assert_eq!(self.num_qubits(), other.num_qubits(), "qubit count mismatch");
        let cross = self.x.and_count(&other.z);
        self.phase = ((self.phase as u32 + other.phase as u32 + 2 * cross) & 3) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// `self <- other * self`
    pub fn mul_assign_left(&mut self, other: &PauliOp) {
        let mut out = other.clone();
        out.mul_assign_right(self);
        *self = out;
    }

    pub fn try_commutes(&self, other: &PauliOp) -> Result<bool> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::LengthMismatch(self.num_qubits(), other.num_qubits()));
        }
        Ok(self.commutes(other))
    }

    pub fn commutes(&self, other: &PauliOp) -> bool {
        assert_eq!(self.num_qubits(), other.num_qubits(), "qubit count mismatch");
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)) % 2 == 0
    }

    /// Restriction to the listed qubits, keeping the phase.
    pub fn restrict(&self, qubits: &[usize]) -> PauliOp {
        let mut p = PauliOp::identity(qubits.len());
        for (j, &q) in qubits.iter().enumerate() {
            p.set_letter(j, self.letter(q));
        }
        p.phase = self.phase;
        p
    }

    /// Place `local` on `qubits` of an n-qubit register.
    pub fn embed(n: usize, qubits: &[usize], local: &PauliOp) -> PauliOp {
        assert_eq!(qubits.len(), local.num_qubits());
        let mut p = PauliOp::identity(n);
        for (j, &q) in qubits.iter().enumerate() {
            p.set_letter(q, local.letter(j));
        }
        p.phase = local.phase;
        p
    }

    pub fn tensor(&self, other: &PauliOp) -> PauliOp {
        PauliOp {
            x: self.x.concat(&other.x),
            z: self.z.concat(&other.z),
            phase: (self.phase + other.phase) & 3,
        }
    }

    /// Symplectic row with x_q at bit 2q and z_q at bit 2q+1.
    pub fn to_symplectic(&self) -> BitVec {
        let n = self.num_qubits();
        let mut words = vec![0u64; super::bitvec::word_count(2 * n)];
        for q in self.x.iter_ones() {
            words[(2 * q) >> 6] |= 1 << ((2 * q) & 63);
        }
        for q in self.z.iter_ones() {
            words[(2 * q + 1) >> 6] |= 1 << ((2 * q + 1) & 63);
        }
        BitVec::from_words(words, 2 * n)
    }

    pub fn from_symplectic(v: &BitVec, phase: u8) -> PauliOp {
        let n = v.len() / 2;
        let mut p = PauliOp::identity(n);
        for b in v.iter_ones() {
            if b & 1 == 0 {
                p.x.set(b / 2, true);
            } else {
                p.z.set(b / 2, true);
            }
        }
        p.phase = phase & 3;
        p
    }

    /// Phase that turns these letters into the tensor product of the
    /// Hermitian single-qubit Paulis: Y = -i(iY), so `-y_count mod 4`.
    pub fn hermitian_phase(&self) -> u8 {
        ((4 - self.y_count() % 4) % 4) as u8
    }
}

/// Symplectic form of two interleaved rows.
pub fn symplectic_dot(a: &BitVec, b: &BitVec) -> bool {
    const LOW: u64 = 0x5555_5555_5555_5555;
    let mut acc = 0u32;
    for (&u, &v) in a.words().iter().zip(b.words()) {
        let swapped = ((v & LOW) << 1) | ((v >> 1) & LOW);
        acc += (u & swapped).count_ones();
    }
    acc & 1 == 1
}

/// Exchange the x and z bit of every qubit in an interleaved row.
pub fn symplectic_swap(v: &BitVec) -> BitVec {
    const LOW: u64 = 0x5555_5555_5555_5555;
    let words = v.words().iter().map(|&w| ((w & LOW) << 1) | ((w >> 1) & LOW)).collect();
    BitVec::from_words(words, v.len())
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        })?;
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.letter(q).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self})")
    }
}

impl FromStr for PauliOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else {
            (0, s)
        };
        let mut letters = Vec::with_capacity(body.len());
        for c in body.chars() {
            let l = Letter::from_char(c).ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("invalid Pauli character `{c}` in `{s}`"),
            })?;
            letters.push(l);
        }
        let mut p = PauliOp::from_letters(&letters);
        p.phase = phase;
        Ok(p)
    }
}

impl Serialize for PauliOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOp {
        s.parse().unwrap()
    }

    #[test]
    fn products_of_letters() {
        assert_eq!(p("X").mul(&p("Z")), p("-Y"));
        assert_eq!(p("Z").mul(&p("X")), p("Y"));
        assert_eq!(p("XX").mul(&p("ZZ")), p("YY"));
        assert_eq!(p("II").mul(&p("XY")), p("XY"));
        assert_eq!(p("Y").mul(&p("Y")), p("-I"));
    }

    #[test]
    fn commutation() {
        assert!(!p("X").commutes(&p("Z")));
        assert!(p("XX").commutes(&p("ZZ")));
        assert!(p("XYZ").commutes(&p("III")));
        assert!(p("Y").commutes(&p("Y")));
    }

    #[test]
    fn weights() {
        assert_eq!(p("XIZ").weight(), 2);
        assert_eq!(p("IIIII").weight(), 0);
        assert_eq!(p("YY").weight(), 2);
    }

    #[test]
    fn text_roundtrip() {
        for s in ["XYZI", "-ZZ", "iX", "-iYI", ""] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("XQ".parse::<PauliOp>().is_err());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(PauliOp::multiply(&p("X"), &p("XX")).is_err());
        assert!(p("X").try_commutes(&p("XX")).is_err());
    }

    #[test]
    fn symplectic_layout() {
        let a = p("XYZ");
        let v = a.to_symplectic();
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
        assert_eq!(PauliOp::from_symplectic(&v, 0), a);
        assert!(symplectic_dot(&p("X").to_symplectic(), &p("Z").to_symplectic()));
        assert!(!symplectic_dot(&p("XX").to_symplectic(), &p("ZZ").to_symplectic()));
    }
}
