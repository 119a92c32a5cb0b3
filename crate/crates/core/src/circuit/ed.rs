use serde::{Deserialize, Serialize};

use super::ir::{ErrorPattern, SpacetimeCircuit};
use super::sim::{post_pullbacks, simulate_accept_prob, AcceptProb};
use crate::error::{Error, Result};
use crate::pauli::{BinaryMatrix, BitVec, PauliGroup, PauliOp, Rref};

/// Pulled-back measurement group of a circuit, split into the part that
/// acts diagonally on the ancillas (H) and its complement.
///
/// Ancillas are the initialized wires, M is generated by Z on the
/// postselected wires, `u(m) = U† m U`.
#[derive(Clone, Debug)]
pub struct MeasurementAlgebra {
    pub num_wires: usize,
    pub data: Vec<usize>,
    pub ancillas: Vec<usize>,
    pub posts: Vec<usize>,
    pub pullbacks: Vec<PauliOp>,
    /// Combinations over `posts` spanning H.
    pub h_basis: Vec<BitVec>,
    /// u(h) for each element of `h_basis`.
    pub h_images: Vec<PauliOp>,
    /// u(k) for a basis of the kernel K ⊆ H (identity on data).
    pub kernel_images: Vec<PauliOp>,
    coset: Rref,
    n_ax: usize,
}

fn layout_row(p: &PauliOp, ancillas: &[usize], data: &[usize]) -> BitVec {
    let mut v = BitVec::zeros(ancillas.len() + 2 * data.len());
    for (j, &a) in ancillas.iter().enumerate() {
        v.set(j, p.x().get(a));
    }
    let off = ancillas.len();
    for (j, &d) in data.iter().enumerate() {
        v.set(off + 2 * j, p.x().get(d));
        v.set(off + 2 * j + 1, p.z().get(d));
    }
    v
}

fn product(ops: &[PauliOp], combo: &BitVec, n: usize) -> PauliOp {
    let mut q = PauliOp::identity(n);
    for i in combo.iter_ones() {
        q.mul_assign_right(&ops[i]);
    }
    q
}

impl MeasurementAlgebra {
    pub fn new(c: &SpacetimeCircuit) -> Self {
        let nw = c.num_wires();
        let data = c.data_wires();
        let ancillas = c.init_wires();
        let posts = c.post_wires();
        let pullbacks = post_pullbacks(c);

        let ax_rows: Vec<BitVec> = pullbacks
            .iter()
            .map(|u| BitVec::from_bools(&ancillas.iter().map(|&a| u.x().get(a)).collect::<Vec<_>>()))
            .collect();
        let ax = BinaryMatrix::from_rows(ax_rows, ancillas.len()).expect("lengths").rref(true);
        let h_basis: Vec<BitVec> = ax.dependencies().to_vec();
        let h_images: Vec<PauliOp> = h_basis.iter().map(|h| product(&pullbacks, h, nw)).collect();

        let data_rows: Vec<BitVec> = h_images.iter().map(|u| u.restrict(&data).to_symplectic()).collect();
        let dr = BinaryMatrix::from_rows(data_rows, 2 * data.len()).expect("lengths").rref(true);
        let kernel_images = dr.dependencies().iter().map(|k| product(&h_images, k, nw)).collect();

        let rows: Vec<BitVec> = pullbacks.iter().map(|u| layout_row(u, &ancillas, &data)).collect();
        let coset = BinaryMatrix::from_rows(rows, ancillas.len() + 2 * data.len()).expect("lengths").rref(false);

        MeasurementAlgebra {
            num_wires: nw,
            data,
            ancillas: ancillas.clone(),
            posts,
            pullbacks,
            h_basis,
            h_images,
            kernel_images,
            coset,
            n_ax: ancillas.len(),
        }
    }

    /// Data restrictions `λ D(h)` of the H basis, with exact phase.
    pub fn data_images(&self) -> Vec<PauliOp> {
        self.h_images.iter().map(|u| u.restrict(&self.data)).collect()
    }

    /// True when some kernel element acts as -1 on the ancilla `|0>`
    /// (then V = 0).
    pub fn kernel_sign_conflict(&self) -> bool {
        self.kernel_images.iter().any(|k| k.phase() != 0)
    }

    /// Data-only part of the trivially acting input group, as symplectic
    /// rows over the data wires.
    pub fn data_coset_basis(&self) -> Vec<BitVec> {
        let off = self.n_ax;
        self.coset
            .pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= off)
            .map(|(i, _)| self.coset.reduced.row(i).slice(off, self.coset.reduced.n_cols()))
            .collect()
    }

    /// Evaluate `V_E` symbolically from the time-0 equivalent `e0` of the
    /// error pattern (exact phase, on all wires).
    pub fn evaluate(&self, e0: &PauliOp) -> Result<SymbolicEval> {
        for k in &self.kernel_images {
            let flip = !k.commutes(e0);
            let minus = k.phase() == 2;
            if flip != minus {
                return Ok(SymbolicEval { zero: true, e0: e0.clone(), e_prime: None });
            }
        }
        let mut v = layout_row(e0, &self.ancillas, &self.data);
        for (i, &p) in self.coset.pivots.iter().enumerate() {
            if p >= self.n_ax {
                break;
            }
            if v.get(p) {
                v.xor_assign(self.coset.reduced.row(i));
            }
        }
        if (0..self.n_ax).any(|j| v.get(j)) {
            return Ok(SymbolicEval { zero: false, e0: e0.clone(), e_prime: None });
        }
        let d = v.slice(self.n_ax, v.len());
        let basis = self.data_coset_basis();
        let best = minimize_coset(&d, &basis)?;
        Ok(SymbolicEval { zero: false, e0: e0.clone(), e_prime: Some(PauliOp::from_symplectic(&best, 0)) })
    }
}

fn sym_weight(v: &BitVec) -> usize {
    const LOW: u64 = 0x5555_5555_5555_5555;
    v.words().iter().map(|&w| ((w | (w >> 1)) & LOW).count_ones() as usize).sum()
}

/// Lowest-weight element of `d + span(basis)`; ties broken by first found
/// in Gray-code order.
pub(crate) fn minimize_coset(d: &BitVec, basis: &[BitVec]) -> Result<BitVec> {
    const LIMIT: usize = 24;
    if basis.len() > LIMIT {
        return Err(Error::ResourceLimit(format!(
            "coset group of dimension {} exceeds 2^{LIMIT}",
            basis.len()
        )));
    }
    let mut cur = d.clone();
    let mut best = cur.clone();
    let mut best_w = sym_weight(&cur);
    for i in 1u64..(1u64 << basis.len()) {
        cur.xor_assign(&basis[i.trailing_zeros() as usize]);
        let w = sym_weight(&cur);
        if w < best_w {
            best_w = w;
            best = cur.clone();
        }
    }
    Ok(best)
}

/// Symbolic value of `V_E`: zero, or `V E'` with E' on the data inputs,
/// or neither (E' is `None` and `zero` is false).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicEval {
    pub zero: bool,
    pub e0: PauliOp,
    pub e_prime: Option<PauliOp>,
}

/// Pull every slice of the pattern back to time 0:
/// `U_E = U * Ẽ_T ... Ẽ_0` with `Ẽ_t = U_{<=t-1/2}† E_t U_{<=t-1/2}`.
pub fn time_zero_equivalent(c: &SpacetimeCircuit, e: &ErrorPattern) -> Result<PauliOp> {
    e.validate(c)?;
    let nw = c.num_wires();
    let mut e0 = PauliOp::identity(nw);
    let times: std::collections::BTreeSet<u32> = e.iter().map(|(_, t, _)| t).collect();
    for &t in &times {
        let pulled = c.pull_back(&e.slice(nw, t), t);
        e0.mul_assign_left(&pulled);
    }
    Ok(e0)
}

pub fn evaluate_error_pattern(c: &SpacetimeCircuit, e: &ErrorPattern) -> Result<SymbolicEval> {
    let e0 = time_zero_equivalent(c, e)?;
    MeasurementAlgebra::new(c).evaluate(&e0)
}

/// Outcome of the good error-detecting circuit check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodEdReport {
    pub good: bool,
    pub accept_prob: Option<AcceptProb>,
    pub dim_h: usize,
    pub num_post: usize,
    pub inputs_checked: usize,
    pub failures: Vec<String>,
}

/// Check that `V†V` is proportional to the projector onto the code of
/// `base`, algebraically and by simulation over spanning stabilizer inputs.
pub fn verify_good_ed(c: &SpacetimeCircuit, base: &PauliGroup) -> Result<GoodEdReport> {
    let data = c.data_wires();
    if data.len() != base.num_qubits() {
        return Err(Error::LengthMismatch(data.len(), base.num_qubits()));
    }
    if base.contains_minus_identity() {
        return Err(Error::InvalidCode("base stabilizer group contains -I".into()));
    }
    let alg = MeasurementAlgebra::new(c);
    let mut failures = Vec::new();
    if alg.kernel_sign_conflict() {
        failures.push("circuit annihilates every input (V = 0)".to_string());
    }
    let images = alg.data_images();
    for (i, img) in images.iter().enumerate() {
        if !base.contains(img, false) {
            failures.push(format!("measured operator {img} (element {i} of H) is not in the base group"));
        }
    }
    let r_rank = PauliGroup::new(data.len(), images.clone())?.rank();
    if r_rank != base.rank() {
        failures.push(format!("measured group has rank {r_rank}, base has rank {}", base.rank()));
    }
    let expected = AcceptProb::InvPow2((alg.posts.len() - alg.h_basis.len()) as u32);

    // simulation over code states and single-generator violations
    let dec = base.decomposition();
    let herm = |p: PauliOp| {
        let mut p = p;
        p.set_phase(p.hermitian_phase());
        p
    };
    let logicals: Vec<(PauliOp, PauliOp)> =
        dec.logical_ops().into_iter().map(|(a, b)| (herm(a), herm(b))).collect();
    let base_gens = independent_generators(base);
    let mut inputs: Vec<(Vec<PauliOp>, bool)> = Vec::new();
    let code_state = |pick: &dyn Fn(usize) -> PauliOp| {
        let mut g = base_gens.clone();
        g.extend((0..logicals.len()).map(pick));
        g
    };
    inputs.push((code_state(&|j| logicals[j].0.clone()), true));
    if !logicals.is_empty() {
        inputs.push((code_state(&|j| logicals[j].1.clone()), true));
        inputs.push((
            code_state(&|j| if j == 0 { herm(logicals[0].0.mul(&logicals[0].1)) } else { logicals[j].0.clone() }),
            true,
        ));
    }
    for i in 0..base_gens.len() {
        let mut g = code_state(&|j| logicals[j].0.clone());
        g[i] = g[i].negated();
        inputs.push((g, false));
    }
    let mut common: Option<AcceptProb> = None;
    for (gens, in_code) in &inputs {
        let group = PauliGroup::new(data.len(), gens.clone())?;
        let p = simulate_accept_prob(c, &group)?;
        if *in_code {
            if p == AcceptProb::Zero {
                failures.push("a code state is rejected".to_string());
            }
            match common {
                None => common = Some(p),
                Some(q) if q != p => failures.push(format!("accept probabilities differ: {q} vs {p}")),
                _ => {}
            }
        } else if p != AcceptProb::Zero {
            failures.push(format!("input violating a generator accepted with probability {p}"));
        }
    }
    if let Some(p) = common {
        if failures.is_empty() && p != expected {
            failures.push(format!("simulated probability {p} differs from algebraic {expected}"));
        }
    }
    Ok(GoodEdReport {
        good: failures.is_empty(),
        accept_prob: common,
        dim_h: alg.h_basis.len(),
        num_post: alg.posts.len(),
        inputs_checked: inputs.len(),
        failures,
    })
}

fn independent_generators(g: &PauliGroup) -> Vec<PauliOp> {
    let mut out: Vec<PauliOp> = Vec::new();
    let mut m = BinaryMatrix::new(2 * g.num_qubits());
    for p in g.generators() {
        m.push(p.to_symplectic());
        if m.rank() > out.len() {
            out.push(p.clone());
        } else {
            m = BinaryMatrix::from_rows(m.rows()[..out.len()].to_vec(), m.n_cols()).expect("lengths");
        }
    }
    out
}

/// Result of splitting M into H and a complement H⊥.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasurementDecomposition {
    pub h: Vec<PauliOp>,
    pub h_perp: Vec<PauliOp>,
    pub h_data_restriction: Vec<PauliOp>,
    pub properties: Vec<(String, bool)>,
    pub witness: Option<String>,
}

impl MeasurementDecomposition {
    pub fn holds(&self) -> bool {
        self.properties.iter().all(|(_, ok)| *ok)
    }
}

/// Split the measurement group and check the four structural properties.
/// Property 2 (data restriction equals the base group) is only checked
/// when `base` is given.
pub fn decompose_measurement_group(c: &SpacetimeCircuit, base: Option<&PauliGroup>) -> Result<MeasurementDecomposition> {
    let alg = MeasurementAlgebra::new(c);
    let nw = c.num_wires();
    let m = alg.posts.len();
    let as_m = |combo: &BitVec| {
        let mut p = PauliOp::identity(nw);
        for i in combo.iter_ones() {
            p.set_letter(alg.posts[i], crate::pauli::Letter::Z);
        }
        p
    };
    let h_mat = BinaryMatrix::from_rows(alg.h_basis.clone(), m)?;
    let hr = h_mat.rref(false);
    let mut is_pivot = vec![false; m];
    for &p in &hr.pivots {
        is_pivot[p] = true;
    }
    let perp: Vec<BitVec> = (0..m).filter(|&i| !is_pivot[i]).map(|i| BitVec::from_ones(m, [i])).collect();
    let mut properties = Vec::new();
    let mut witness = None;

    let mut all = alg.h_basis.clone();
    all.extend(perp.iter().cloned());
    let full = BinaryMatrix::from_rows(all, m)?.rank() == m && alg.h_basis.len() + perp.len() == m;
    properties.push(("H·H⊥ = M and H ∩ H⊥ = {I}".to_string(), full));

    if let Some(base) = base {
        let imgs = alg.data_images();
        let mut ok = PauliGroup::new(alg.data.len(), imgs.clone())?.rank() == base.rank();
        for img in &imgs {
            if !base.contains(img, false) {
                ok = false;
                witness.get_or_insert_with(|| format!("data restriction {img} not in base group"));
            }
        }
        properties.push(("restriction of u(H) to data equals S0".to_string(), ok));
    }

    let anc_z_only = alg.h_images.iter().all(|u| alg.ancillas.iter().all(|&a| !u.x().get(a)));
    properties.push(("restriction of u(H) to ancillas lies in M".to_string(), anc_z_only));

    let perp_images: Vec<PauliOp> = perp.iter().map(|p| product(&alg.pullbacks, p, nw)).collect();
    let ax_rows: Vec<BitVec> = perp_images
        .iter()
        .map(|u| BitVec::from_bools(&alg.ancillas.iter().map(|&a| u.x().get(a)).collect::<Vec<_>>()))
        .collect();
    let injective = BinaryMatrix::from_rows(ax_rows, alg.ancillas.len())?.rank() == perp.len();
    let commuting = perp_images.iter().all(|a| alg.h_images.iter().all(|b| a.commutes(b)));
    if !injective {
        witness.get_or_insert_with(|| "some element of u(H⊥) has no X on any ancilla".to_string());
    }
    properties.push(("u(H⊥) anticommutes with M and commutes with u(H)".to_string(), injective && commuting));

    Ok(MeasurementDecomposition {
        h: alg.h_basis.iter().map(as_m).collect(),
        h_perp: perp.iter().map(as_m).collect(),
        h_data_restriction: alg.data_images(),
        properties,
        witness,
    })
}
