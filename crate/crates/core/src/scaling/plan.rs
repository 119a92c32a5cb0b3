use serde::{Deserialize, Serialize};

use super::routing::coords;
use crate::analysis::CodeAnalysis;
use crate::error::{Error, Result};
use crate::pauli::PauliGroup;

/// Accounting for one concatenation level of a local layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelPlan {
    pub level: usize,
    /// Level-j blocks, `n0^(m-j)`.
    pub blocks: u64,
    pub generators: u64,
    /// `n0^j`
    pub max_weight: u64,
    /// Data, vertex and edge tokens of one gadget at this weight.
    pub gadget_tokens: u64,
    /// Side of the cube holding one level-j block's data, `a^j`.
    pub block_side: u64,
    /// Side of the cube holding one gadget's tokens.
    pub gadget_side: u64,
    /// Two routings, a sweep along the snake, and the H steps, for each of
    /// the `n0 - 1` sequential layers.
    pub depth: u64,
    /// Sites in use times depth.
    pub volume: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcatLocalPlan {
    pub n0: usize,
    pub m: usize,
    pub dimension: usize,
    /// Cube side per level step, `ceil(n0^(1/(D-1)))`.
    pub scale: u64,
    pub levels: Vec<LevelPlan>,
    /// Lattice coordinate of each data qubit, when `n0^m` is small enough to list.
    pub placement: Option<Vec<Vec<u64>>>,
    pub total_depth: u64,
    pub total_volume: u64,
    pub final_level_dominates: bool,
}

/// Vertices and edges of the gadget graph used for weight `w`: the complete
/// graph up to 6, a 6-regular graph on `max(w, 7)` vertices beyond.
fn gadget_size(w: u64) -> (u64, u64) {
    if w <= 6 {
        (w, w * (w - 1) / 2)
    } else {
        let v = w.max(7);
        (v, 3 * v)
    }
}

fn ceil_root(x: u64, k: u32) -> u64 {
    let mut a = 1u64;
    while a.checked_pow(k).is_some_and(|v| v < x) {
        a += 1;
    }
    a
}

const PLACEMENT_LIMIT: u64 = 1 << 16;

/// Hierarchical layout of `m`-fold concatenation of `base` in `D - 1`
/// spatial dimensions. Qubit `q` with base-`n0` digits `q_{m-1} .. q_0` sits at
/// `sum_j a^j c(q_j)`, where `c` places a digit inside an `a`-cube; so every
/// level-j block fills its own cube of side `a^j`.
pub fn concat_local_plan(base: &PauliGroup, m: usize, dimension: usize) -> Result<ConcatLocalPlan> {
    if dimension < 2 {
        return Err(Error::InvalidArgument(format!("need at least one spatial dimension, got D = {dimension}")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("concatenation level must be at least 1".into()));
    }
    let st = CodeAnalysis::new(base).structure();
    if st.k != 1 || st.g != 0 {
        return Err(Error::InvalidCode(format!("need a stabilizer code with k0 = 1, got k0 = {}", st.k)));
    }
    let n0 = base.num_qubits() as u64;
    let dims = (dimension - 1) as u32;
    let overflow = || Error::ResourceLimit(format!("{n0}^{m} overflows"));
    let n = n0.checked_pow(m as u32).ok_or_else(overflow)?;
    let a = ceil_root(n0, dims);
    let mut levels = Vec::new();
    for j in 1..=m as u32 {
        let w = n0.pow(j);
        let (v, e) = gadget_size(w);
        let tokens = w + v + e;
        let gadget_side = ceil_root(tokens, dims);
        let block_side = a.checked_pow(j).ok_or_else(overflow)?;
        let side = gadget_side.max(block_side);
        let route = 3 * dims as u64 * side;
        let depth = (n0 - 1) * (2 * route + tokens + 2);
        let blocks = n / w;
        let sites = blocks * side.pow(dims);
        levels.push(LevelPlan {
            level: j as usize,
            blocks,
            generators: blocks * (n0 - 1),
            max_weight: w,
            gadget_tokens: tokens,
            block_side,
            gadget_side,
            depth,
            volume: sites * depth,
        });
    }
    let placement = (n <= PLACEMENT_LIMIT).then(|| {
        let cube = vec![a as usize; dims as usize];
        (0..n)
            .map(|q| {
                let mut c = vec![0u64; dims as usize];
                let mut rest = q;
                let mut scale = 1u64;
                for _ in 0..m {
                    let digit = (rest % n0) as usize;
                    rest /= n0;
                    for (x, d) in c.iter_mut().zip(coords(&cube, digit)) {
                        *x += scale * d as u64;
                    }
                    scale *= a;
                }
                c
            })
            .collect()
    });
    let total_depth = levels.iter().map(|l| l.depth).sum();
    let total_volume = levels.iter().map(|l| l.volume).sum();
    let last = levels.last().expect("m >= 1");
    let final_level_dominates = levels.iter().all(|l| l.volume <= last.volume && l.depth <= last.depth);
    Ok(ConcatLocalPlan {
        n0: n0 as usize,
        m,
        dimension,
        scale: a,
        levels,
        placement,
        total_depth,
        total_volume,
        final_level_dominates,
    })
}

impl ConcatLocalPlan {
    /// Per-level table as CSV.
    pub fn levels_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for l in &self.levels {
            w.serialize(l).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}
