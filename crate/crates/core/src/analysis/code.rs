use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{symplectic_dot, BitVec, CodeStructure, Decomposition, Letter, PauliGroup, PauliOp};

const LETTERS: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

/// Stabilizer group, bare logicals and structure of a gauge group.
#[derive(Clone, Debug)]
pub struct CodeAnalysis {
    gauge: PauliGroup,
    decomposition: Decomposition,
}

impl CodeAnalysis {
    pub fn new(gauge: &PauliGroup) -> Self {
        CodeAnalysis { gauge: gauge.clone(), decomposition: gauge.decomposition() }
    }

    pub fn gauge(&self) -> &PauliGroup {
        &self.gauge
    }

    pub fn structure(&self) -> CodeStructure {
        self.decomposition.structure()
    }

    pub fn stabilizers(&self) -> PauliGroup {
        PauliGroup::new(self.gauge.num_qubits(), self.decomposition.stabilizer_ops()).expect("lengths")
    }

    /// Symplectic pairs of bare logical representatives.
    pub fn bare_logicals(&self) -> Vec<(PauliOp, PauliOp)> {
        self.decomposition
            .logical_ops()
            .into_iter()
            .map(|(mut a, mut b)| {
                a.set_phase(a.hermitian_phase());
                b.set_phase(b.hermitian_phase());
                (a, b)
            })
            .collect()
    }

    /// Minimum weight over N(S) minus G.
    pub fn distance(&self, max_w: Option<usize>, threads: Option<usize>) -> Result<Distance> {
        let logical: Vec<BitVec> =
            self.decomposition.logical_pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
        DistanceSearch::new(self.gauge.num_qubits(), &self.decomposition.stabilizer, &logical).run(max_w, threads)
    }

    /// Minimum weight over N(S) minus S.
    pub fn distance_literal(&self, max_w: Option<usize>, threads: Option<usize>) -> Result<Distance> {
        let n = self.gauge.num_qubits();
        let s = self.stabilizers();
        let inner = s.decomposition();
        let detect: Vec<BitVec> = inner.logical_pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
        DistanceSearch::new(n, &self.decomposition.stabilizer, &detect).run(max_w, threads)
    }
}

/// Max generator weight and max per-qubit incidence.
pub fn sparsity(g: &PauliGroup) -> (usize, usize) {
    let mut inc = vec![0usize; g.num_qubits()];
    let mut s_g = 0;
    for p in g.generators() {
        s_g = s_g.max(p.weight());
        for q in p.support() {
            inc[q] += 1;
        }
    }
    (s_g, inc.into_iter().max().unwrap_or(0))
}

/// Outcome of a bounded distance search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distance {
    /// Exact distance, when found within the radius.
    pub exact: Option<usize>,
    pub radius: usize,
    /// No operator of the searched kind exists at any weight.
    pub none_exist: bool,
    pub witness: Option<PauliOp>,
}

impl Distance {
    /// Exact value or certified lower bound.
    pub fn value(&self) -> Option<usize> {
        match (self.exact, self.none_exist) {
            (Some(d), _) => Some(d),
            (None, true) => None,
            (None, false) => Some(self.radius + 1),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some() || self.none_exist
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.exact, self.none_exist) {
            (Some(d), _) => write!(f, "{d}"),
            (None, true) => write!(f, "none"),
            (None, false) => write!(f, "> {}", self.radius),
        }
    }
}

/// Exhaustive weight-ordered search for the lightest Pauli with zero
/// syndrome against `stab` and nonzero syndrome against `detect`.
struct DistanceSearch {
    n: usize,
    cols_s: Vec<BitVec>,
    cols_l: Vec<BitVec>,
    none_exist: bool,
}

fn columns(n: usize, ops: &[BitVec]) -> Vec<BitVec> {
    let mut cols = vec![BitVec::zeros(ops.len()); 3 * n];
    for (i, o) in ops.iter().enumerate() {
        for q in 0..n {
            let (ox, oz) = (o.get(2 * q), o.get(2 * q + 1));
            // X anticommutes with z, Z with x, Y with either
            let flips = [oz, ox ^ oz, ox];
            for (l, &f) in flips.iter().enumerate() {
                if f {
                    cols[3 * q + l].set(i, true);
                }
            }
        }
    }
    cols
}

impl DistanceSearch {
    fn new(n: usize, stab: &[BitVec], detect: &[BitVec]) -> Self {
        debug_assert!(detect.iter().all(|d| stab.iter().all(|s| !symplectic_dot(d, s))));
        DistanceSearch { n, cols_s: columns(n, stab), cols_l: columns(n, detect), none_exist: detect.is_empty() }
    }

    fn witness(&self, entries: &[usize]) -> PauliOp {
        let mut p = PauliOp::identity(self.n);
        for &e in entries {
            p.set_letter(e / 3, LETTERS[e % 3]);
        }
        p.set_phase(p.hermitian_phase());
        p
    }

    fn run(&self, max_w: Option<usize>, threads: Option<usize>) -> Result<Distance> {
        let radius = max_w.unwrap_or(self.n).min(self.n);
        if max_w == Some(0) {
            return Err(Error::InvalidArgument("distance search radius must be at least 1".into()));
        }
        if self.none_exist {
            return Ok(Distance { exact: None, radius, none_exist: true, witness: None });
        }
        let search = || -> Distance {
            let mut by_syndrome: HashMap<&BitVec, Vec<usize>> = HashMap::new();
            for (e, s) in self.cols_s.iter().enumerate() {
                by_syndrome.entry(s).or_default().push(e);
            }
            for w in 1..=radius {
                if let Some(found) = self.search_weight(w, &by_syndrome) {
                    return Distance { exact: Some(w), radius, none_exist: false, witness: Some(self.witness(&found)) };
                }
            }
            // with a full radius, every Pauli was tried
            Distance { exact: None, radius, none_exist: radius == self.n, witness: None }
        };
        match threads {
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                Ok(pool.install(search))
            }
            None => Ok(search()),
        }
    }

    fn search_weight(&self, w: usize, by_syndrome: &HashMap<&BitVec, Vec<usize>>) -> Option<Vec<usize>> {
        if w == 1 {
            return (0..3 * self.n)
                .find(|&e| self.cols_s[e].is_zero() && !self.cols_l[e].is_zero())
                .map(|e| vec![e]);
        }
        (0..=self.n - w).into_par_iter().find_map_first(|p0| {
            let mut prefix = Vec::with_capacity(w);
            for l in 0..3 {
                let e = 3 * p0 + l;
                prefix.push(e);
                let found = self.extend(&mut prefix, w, self.cols_s[e].clone(), self.cols_l[e].clone(), by_syndrome);
                if found.is_some() {
                    return found;
                }
                prefix.pop();
            }
            None
        })
    }

    fn extend(
        &self,
        prefix: &mut Vec<usize>,
        w: usize,
        acc_s: BitVec,
        acc_l: BitVec,
        by_syndrome: &HashMap<&BitVec, Vec<usize>>,
    ) -> Option<Vec<usize>> {
        let last_pos = prefix.last().expect("nonempty") / 3;
        if prefix.len() + 1 == w {
            let hits = by_syndrome.get(&acc_s)?;
            let start = hits.partition_point(|&e| e / 3 <= last_pos);
            for &e in &hits[start..] {
                let mut l = acc_l.clone();
                l.xor_assign(&self.cols_l[e]);
                if !l.is_zero() {
                    let mut out = prefix.clone();
                    out.push(e);
                    return Some(out);
                }
            }
            return None;
        }
        let remaining = w - prefix.len();
        for q in last_pos + 1..=self.n - remaining {
            for l in 0..3 {
                let e = 3 * q + l;
                let mut s = acc_s.clone();
                s.xor_assign(&self.cols_s[e]);
                let mut lv = acc_l.clone();
                lv.xor_assign(&self.cols_l[e]);
                prefix.push(e);
                if let Some(found) = self.extend(prefix, w, s, lv, by_syndrome) {
                    return Some(found);
                }
                prefix.pop();
            }
        }
        None
    }
}

/// Machine-readable summary of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeReport {
    pub n: usize,
    pub k: usize,
    /// Exact distance, or the certified lower bound when `d_is_exact` is false.
    pub d: Option<usize>,
    pub d_is_exact: bool,
    pub search_radius: usize,
    pub s_g: usize,
    pub s_q: usize,
    pub witness: Option<String>,
    pub r: usize,
    pub gauge_qubits: usize,
    pub stabilizer_weights: Vec<usize>,
    /// Same search over N(S) minus S.
    pub d_literal: Option<usize>,
    pub d_literal_is_exact: bool,
    pub witness_literal: Option<String>,
}

impl CodeReport {
    pub fn distance_display(&self) -> String {
        match (self.d, self.d_is_exact) {
            (Some(d), true) => d.to_string(),
            (None, _) => "none".into(),
            (Some(_), false) => format!("> {}", self.search_radius),
        }
    }
}

pub fn analyze(gauge: &PauliGroup, max_w: Option<usize>, threads: Option<usize>) -> Result<CodeReport> {
    let a = CodeAnalysis::new(gauge);
    let st = a.structure();
    let d = a.distance(max_w, threads)?;
    let lit = a.distance_literal(max_w, threads)?;
    let (s_g, s_q) = sparsity(gauge);
    let mut stabilizer_weights: Vec<usize> = a.stabilizers().generators().iter().map(|s| s.weight()).collect();
    stabilizer_weights.sort_unstable();
    Ok(CodeReport {
        n: st.n,
        k: st.k,
        d: d.value(),
        d_is_exact: d.is_exact(),
        search_radius: d.radius,
        s_g,
        s_q,
        witness: d.witness.as_ref().map(|w| w.to_string()),
        r: st.r,
        gauge_qubits: st.g,
        stabilizer_weights,
        d_literal: lit.value(),
        d_literal_is_exact: lit.is_exact(),
        witness_literal: lit.witness.as_ref().map(|w| w.to_string()),
    })
}
