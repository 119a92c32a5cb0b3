use serde::{Deserialize, Serialize};

use crate::analysis::CodeAnalysis;
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliGroup, PauliOp};

/// Largest concatenated code built explicitly.
pub const CONCAT_QUBIT_LIMIT: usize = 4096;

/// Generator count and weight at one concatenation level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelInventory {
    pub level: usize,
    pub count: usize,
    pub max_weight: usize,
    /// `n0^(m+1-j)`
    pub count_bound: usize,
    /// `n0^j`
    pub weight_bound: usize,
}

/// `C_0` concatenated with itself `m` times.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConcatCode {
    pub n0: usize,
    pub m: usize,
    pub n: usize,
    pub generators: Vec<PauliOp>,
    /// Concatenation level of each generator, starting at 1.
    pub levels: Vec<usize>,
    pub logical_x: PauliOp,
    pub logical_z: PauliOp,
    pub inventory: Vec<LevelInventory>,
    pub rank: usize,
}

impl ConcatCode {
    pub fn group(&self) -> PauliGroup {
        PauliGroup::new(self.n, self.generators.clone()).expect("lengths")
    }

    /// Rank is `n - 1` and every level respects its count and weight bounds.
    pub fn structurally_valid(&self) -> bool {
        self.rank + 1 == self.n
            && self.inventory.iter().all(|l| l.count <= l.count_bound && l.max_weight <= l.weight_bound)
    }
}

fn sign_negative(p: &PauliOp) -> bool {
    (p.phase() + 4 - p.hermitian_phase()) % 4 == 2
}

/// Replace each letter of `outer` by the matching logical on its sub-block.
/// `inner` holds the Hermitian X, Y, Z logicals of a block of `s` qubits.
fn substitute(outer: &PauliOp, inner: &[PauliOp; 3], s: usize) -> PauliOp {
    let n0 = outer.num_qubits();
    let mut out = PauliOp::identity(n0 * s);
    for i in 0..n0 {
        let l = match outer.letter(i) {
            Letter::I => continue,
            Letter::X => &inner[0],
            Letter::Y => &inner[1],
            Letter::Z => &inner[2],
        };
        let qubits: Vec<usize> = (i * s..(i + 1) * s).collect();
        out.mul_assign_right(&PauliOp::embed(n0 * s, &qubits, l));
    }
    if sign_negative(outer) {
        out = out.negated();
    }
    out
}

fn hermitian_y(x: &PauliOp, z: &PauliOp) -> PauliOp {
    let mut y = x.mul(z);
    y.set_phase(y.phase() + 1);
    y
}

/// Concatenate a `[[n0, 1, d0]]` stabilizer code with itself `m` times.
pub fn concatenate(base: &PauliGroup, m: usize) -> Result<ConcatCode> {
    if m == 0 {
        return Err(Error::InvalidArgument("concatenation level must be at least 1".into()));
    }
    let a = CodeAnalysis::new(base);
    let st = a.structure();
    if st.g != 0 {
        return Err(Error::InvalidCode("base must be a stabilizer code".into()));
    }
    if st.k != 1 {
        return Err(Error::InvalidCode(format!("concatenation needs k0 = 1, base has k0 = {}", st.k)));
    }
    let n0 = base.num_qubits();
    let n = (0..m).try_fold(1usize, |acc, _| acc.checked_mul(n0)).filter(|&n| n <= CONCAT_QUBIT_LIMIT);
    let Some(n) = n else {
        return Err(Error::ResourceLimit(format!("{n0}^{m} qubits exceed the limit of {CONCAT_QUBIT_LIMIT}")));
    };
    let (bx, bz) = a.bare_logicals().remove(0);
    let mut logical = [PauliOp::single(1, 0, Letter::X), PauliOp::single(1, 0, Letter::Z)];
    let mut generators = Vec::new();
    let mut levels = Vec::new();
    let mut inventory = Vec::new();
    let mut s = 1usize;
    for j in 1..=m {
        let inner = [logical[0].clone(), hermitian_y(&logical[0], &logical[1]), logical[1].clone()];
        let block: Vec<PauliOp> = base.generators().iter().map(|g| substitute(g, &inner, s)).collect();
        let size = s * n0;
        let copies = n / size;
        let mut max_weight = 0;
        for b in 0..copies {
            let qubits: Vec<usize> = (b * size..(b + 1) * size).collect();
            for g in &block {
                max_weight = max_weight.max(g.weight());
                generators.push(PauliOp::embed(n, &qubits, g));
                levels.push(j);
            }
        }
        inventory.push(LevelInventory {
            level: j,
            count: copies * block.len(),
            max_weight,
            count_bound: n0.pow((m + 1 - j) as u32),
            weight_bound: size,
        });
        logical = [substitute(&bx, &inner, s), substitute(&bz, &inner, s)];
        s = size;
    }
    let rank = PauliGroup::new(n, generators.clone())?.rank();
    let [logical_x, logical_z] = logical;
    Ok(ConcatCode { n0, m, n, generators, levels, logical_x, logical_z, inventory, rank })
}
