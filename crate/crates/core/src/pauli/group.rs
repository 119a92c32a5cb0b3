use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::bitvec::BitVec;
use super::matrix::{null_space_from_rref, BinaryMatrix, Rref};
use super::op::{symplectic_dot, symplectic_swap, PauliOp};
use crate::error::{Error, Result};

/// Parameters of a subsystem code: `k = n - r - g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeStructure {
    pub n: usize,
    pub r: usize,
    pub g: usize,
    pub k: usize,
}

/// A Pauli group given by generators, with lazily cached elimination data.
#[derive(Clone, Debug)]
pub struct PauliGroup {
    n: usize,
    generators: Vec<PauliOp>,
    cache: OnceLock<Cache>,
}

#[derive(Clone, Debug)]
struct Cache {
    rref: Rref,
    // words over generators realizing i^k * I for k = 1, 2, 3
    scalar_words: [Option<Vec<usize>>; 3],
}

impl PauliGroup {
    pub fn new(n: usize, generators: Vec<PauliOp>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.num_qubits() != n) {
            return Err(Error::LengthMismatch(g.num_qubits(), n));
        }
        Ok(PauliGroup { n, generators, cache: OnceLock::new() })
    }

    pub fn trivial(n: usize) -> Self {
        PauliGroup { n, generators: Vec::new(), cache: OnceLock::new() }
    }

    pub fn parse(lines: &[&str]) -> Result<Self> {
        let ops: Vec<PauliOp> = lines.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        let n = ops.first().map_or(0, |p| p.num_qubits());
        PauliGroup::new(n, ops)
    }

    /// Parse generators as Hermitian operators: `Y` is the Pauli Y and an
    /// optional leading `-` or `+` gives the sign.
    pub fn parse_hermitian(lines: &[&str]) -> Result<Self> {
        let ops: Vec<PauliOp> = lines
            .iter()
            .map(|s| {
                let s = s.trim();
                let (neg, body) = match s.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, s.strip_prefix('+').unwrap_or(s)),
                };
                let mut p: PauliOp = body.parse()?;
                if p.phase() != 0 {
                    return Err(Error::Parse { line: 0, msg: format!("`{s}` is not Hermitian") });
                }
                p.set_phase(p.hermitian_phase() + if neg { 2 } else { 0 });
                Ok(p)
            })
            .collect::<Result<_>>()?;
        let n = ops.first().map_or(0, |p| p.num_qubits());
        PauliGroup::new(n, ops)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn symplectic_matrix(&self) -> BinaryMatrix {
        let rows = self.generators.iter().map(|g| g.to_symplectic()).collect();
        BinaryMatrix::from_rows(rows, 2 * self.n).expect("consistent lengths")
    }

    fn cache(&self) -> &Cache {
        self.cache.get_or_init(|| {
            let rref = self.symplectic_matrix().rref(true);
            let scalar_words = self.scalar_words(&rref);
            Cache { rref, scalar_words }
        })
    }

    fn product(&self, word: &[usize]) -> PauliOp {
        let mut p = PauliOp::identity(self.n);
        for &i in word {
            p.mul_assign_right(&self.generators[i]);
        }
        p
    }

    fn scalar_words(&self, rref: &Rref) -> [Option<Vec<usize>>; 3] {
        let mut found: [Option<Vec<usize>>; 3] = [None, None, None];
        let record = |word: Vec<usize>, phase: u8, found: &mut [Option<Vec<usize>>; 3]| {
            if phase != 0 && found[phase as usize - 1].is_none() {
                found[phase as usize - 1] = Some(word);
            }
        };
        for (i, g) in self.generators.iter().enumerate() {
            if g.square_sign() < 0 {
                record(vec![i, i], 2, &mut found);
            }
        }
        'pairs: for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                if !self.generators[i].commutes(&self.generators[j]) {
                    let w = vec![i, j, i, j];
                    let ph = self.product(&w).phase();
                    record(w, ph, &mut found);
                    break 'pairs;
                }
            }
        }
        for dep in rref.dependencies() {
            let w: Vec<usize> = dep.iter_ones().collect();
            let ph = self.product(&w).phase();
            record(w, ph, &mut found);
        }
        // close under products
        for _ in 0..2 {
            for a in 1..=3u8 {
                for b in 1..=3u8 {
                    let c = (a + b) & 3;
                    if c == 0 || found[c as usize - 1].is_some() {
                        continue;
                    }
                    if let (Some(wa), Some(wb)) = (&found[a as usize - 1], &found[b as usize - 1]) {
                        let mut w = wa.clone();
                        w.extend(wb);
                        found[c as usize - 1] = Some(w);
                    }
                }
            }
        }
        found
    }

    pub fn contains_minus_identity(&self) -> bool {
        self.cache().scalar_words[1].is_some()
    }

    /// Rank of the generator rows modulo phase.
    pub fn rank(&self) -> usize {
        self.cache().rref.rank
    }

    pub fn rref(&self) -> &Rref {
        &self.cache().rref
    }

    /// Ordered generator word whose product is `p`, or `None`.
    pub fn member(&self, p: &PauliOp, mod_phase: bool) -> Result<Option<Vec<usize>>> {
        if p.num_qubits() != self.n {
            return Err(Error::LengthMismatch(p.num_qubits(), self.n));
        }
        let cache = self.cache();
        let Some(combo) = cache.rref.express(&p.to_symplectic()) else {
            return Ok(None);
        };
        let mut word: Vec<usize> = combo.iter_ones().collect();
        if mod_phase {
            return Ok(Some(word));
        }
        let got = self.product(&word).phase();
        let diff = (p.phase() + 4 - got) & 3;
        if diff == 0 {
            return Ok(Some(word));
        }
        match &cache.scalar_words[diff as usize - 1] {
            Some(w) => {
                word.extend(w);
                Ok(Some(word))
            }
            None => Ok(None),
        }
    }

    pub fn contains(&self, p: &PauliOp, mod_phase: bool) -> bool {
        matches!(self.member(p, mod_phase), Ok(Some(_)))
    }

    /// Product of the generators listed in `word`, in order.
    pub fn evaluate(&self, word: &[usize]) -> PauliOp {
        self.product(word)
    }

    /// Generators of the center. Elements are exact products of generators;
    /// a scalar generator is appended when the group holds a nontrivial phase.
    pub fn center(&self) -> PauliGroup {
        let cache = self.cache();
        let rr = &cache.rref;
        let t = rr.transform.as_ref().expect("transform");
        let basis = rr.reduced.rows();
        let gram = gram_matrix(basis);
        let kernel = gram.null_space();
        let mut gens = Vec::with_capacity(kernel.len() + 1);
        for c in &kernel {
            let mut combo = BitVec::zeros(self.generators.len());
            for i in c.iter_ones() {
                combo.xor_assign(t.row(i));
            }
            let word: Vec<usize> = combo.iter_ones().collect();
            gens.push(self.product(&word));
        }
        for k in [1u8, 2] {
            if cache.scalar_words[k as usize - 1].is_some() {
                let mut s = PauliOp::identity(self.n);
                s.set_phase(k);
                gens.push(s);
                break;
            }
        }
        PauliGroup::new(self.n, gens).expect("consistent lengths")
    }

    /// Generators (mod phase) of the normalizer in the full Pauli group.
    pub fn normalizer(&self) -> PauliGroup {
        let rr = &self.cache().rref;
        let gens = null_space_from_rref(rr, 2 * self.n)
            .iter()
            .map(|v| PauliOp::from_symplectic(&symplectic_swap(v), 0))
            .collect();
        PauliGroup::new(self.n, gens).expect("consistent lengths")
    }

    pub fn code_structure(&self) -> CodeStructure {
        let d = Decomposition::new(self.n, &self.cache().rref);
        d.structure()
    }

    pub fn decomposition(&self) -> Decomposition {
        Decomposition::new(self.n, &self.cache().rref)
    }
}

pub(crate) fn gram_matrix(rows: &[BitVec]) -> BinaryMatrix {
    use rayon::prelude::*;
    let m = rows.len();
    let out: Vec<BitVec> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut r = BitVec::zeros(m);
            for j in 0..m {
                if symplectic_dot(&rows[i], &rows[j]) {
                    r.set(j, true);
                }
            }
            r
        })
        .collect();
    BinaryMatrix::from_rows(out, m).expect("square")
}

/// Normalizer, stabilizer and bare-logical bases of a gauge group, all as
/// interleaved symplectic rows.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub n: usize,
    pub gauge_rank: usize,
    pub normalizer: Vec<BitVec>,
    pub stabilizer: Vec<BitVec>,
    pub logical_pairs: Vec<(BitVec, BitVec)>,
}

impl Decomposition {
    /// `rref` is the reduced form of the gauge generator rows.
    pub fn new(n: usize, rref: &Rref) -> Self {
        let normalizer: Vec<BitVec> = null_space_from_rref(rref, 2 * n)
            .iter()
            .map(symplectic_swap)
            .collect();
        let gram = gram_matrix(&normalizer);
        let stabilizer: Vec<BitVec> = gram
            .null_space()
            .iter()
            .map(|c| {
                let mut v = BitVec::zeros(2 * n);
                for i in c.iter_ones() {
                    v.xor_assign(&normalizer[i]);
                }
                v
            })
            .collect();
        // echelon basis: each row's pivot is clear in every later row
        let mut basis: Vec<(usize, BitVec)> = Vec::new();
        let reduce = |basis: &[(usize, BitVec)], v: &BitVec| {
            let mut v = v.clone();
            for (p, b) in basis {
                if v.get(*p) {
                    v.xor_assign(b);
                }
            }
            v
        };
        for v in &stabilizer {
            let r = reduce(&basis, v);
            if let Some(p) = r.first_one() {
                basis.push((p, r));
            }
        }
        let mut complement = Vec::new();
        for v in &normalizer {
            let r = reduce(&basis, v);
            if let Some(p) = r.first_one() {
                complement.push(v.clone());
                basis.push((p, r));
            }
        }
        let logical_pairs = symplectic_gram_schmidt(complement);
        Decomposition { n, gauge_rank: rref.rank, normalizer, stabilizer, logical_pairs }
    }

    pub fn structure(&self) -> CodeStructure {
        let r = self.stabilizer.len();
        let g = (self.gauge_rank - r) / 2;
        debug_assert_eq!((self.gauge_rank - r) % 2, 0);
        debug_assert_eq!(self.normalizer.len(), r + 2 * self.logical_pairs.len());
        CodeStructure { n: self.n, r, g, k: self.n - r - g }
    }

    pub fn stabilizer_ops(&self) -> Vec<PauliOp> {
        self.stabilizer
            .iter()
            .map(|v| {
                let mut p = PauliOp::from_symplectic(v, 0);
                p.set_phase(p.hermitian_phase());
                p
            })
            .collect()
    }

    pub fn logical_ops(&self) -> Vec<(PauliOp, PauliOp)> {
        self.logical_pairs
            .iter()
            .map(|(a, b)| (PauliOp::from_symplectic(a, 0), PauliOp::from_symplectic(b, 0)))
            .collect()
    }
}

/// Pair up vectors of a nondegenerate symplectic space: `<a_i, b_j> = δ_ij`
/// and `<a_i, a_j> = <b_i, b_j> = 0`.
pub(crate) fn symplectic_gram_schmidt(mut pool: Vec<BitVec>) -> Vec<(BitVec, BitVec)> {
    let mut pairs = Vec::new();
    while let Some(a) = (!pool.is_empty()).then(|| pool.remove(0)) {
        let Some(j) = pool.iter().position(|v| symplectic_dot(&a, v)) else {
            panic!("degenerate vector in symplectic complement");
        };
        let b = pool.remove(j);
        for c in pool.iter_mut() {
            let ca = symplectic_dot(c, &a);
            let cb = symplectic_dot(c, &b);
            if cb {
                c.xor_assign(&a);
            }
            if ca {
                c.xor_assign(&b);
            }
        }
        pairs.push((a, b));
    }
    pairs
}
