use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliOp};

/// Built-in gate types.
///
/// `Fanout` is the gadget block: slot 0 is the control, slot j+1 receives a
/// controlled `letters[j]`. With `hadamard` set the control is conjugated by
/// H, i.e. controlled on the X basis, so a vertex wire reads
/// `init, HFANOUT, I, post` and prepares/postselects |+>.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    I,
    H,
    SqrtZ,
    X,
    Y,
    Z,
    Cnot,
    Swap,
    Controlled(Letter),
    /// Controlled letter from slot 0 to slot 1, then SWAP: a control token
    /// passing a target on a line.
    ControlledSwap(Letter),
    Fanout { letters: Vec<Letter>, hadamard: bool },
}

/// Elementary operations on local slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Elem {
    H(usize),
    S(usize),
    Cx(usize, usize),
    Cz(usize, usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl GateKind {
    pub fn from_name(name: &str) -> Result<GateKind> {
        let kind = match name {
            "I" => GateKind::I,
            "H" => GateKind::H,
            "SQRTZ" | "S" => GateKind::SqrtZ,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "CNOT" | "CX" => GateKind::Cnot,
            "SWAP" => GateKind::Swap,
            "CP_X" => GateKind::Controlled(Letter::X),
            "CP_Y" => GateKind::Controlled(Letter::Y),
            "CP_Z" | "CZ" => GateKind::Controlled(Letter::Z),
            "CPSWAP_X" => GateKind::ControlledSwap(Letter::X),
            "CPSWAP_Y" => GateKind::ControlledSwap(Letter::Y),
            "CPSWAP_Z" => GateKind::ControlledSwap(Letter::Z),
            _ => return Self::parse_fanout(name),
        };
        Ok(kind)
    }

    fn parse_fanout(name: &str) -> Result<GateKind> {
        let unknown = || Error::UnknownGate(name.to_string());
        let (hadamard, rest) = if let Some(r) = name.strip_prefix("HFANOUT") {
            (true, r)
        } else if let Some(r) = name.strip_prefix("FANOUT") {
            (false, r)
        } else {
            return Err(unknown());
        };
        let (k, letters) = match rest.split_once('.') {
            Some((k, l)) => (k, Some(l)),
            None => (rest, None),
        };
        let k: usize = k.parse().map_err(|_| unknown())?;
        if k < 2 {
            return Err(unknown());
        }
        let letters = match letters {
            Some(l) => {
                let v: Vec<Letter> = l.chars().map(Letter::from_char).collect::<Option<_>>().ok_or_else(unknown)?;
                if v.len() != k - 1 {
                    return Err(unknown());
                }
                v
            }
            None => vec![Letter::X; k - 1],
        };
        Ok(GateKind::Fanout { letters, hadamard })
    }

    pub fn name(&self) -> String {
        match self {
            GateKind::I => "I".into(),
            GateKind::H => "H".into(),
            GateKind::SqrtZ => "SQRTZ".into(),
            GateKind::X => "X".into(),
            GateKind::Y => "Y".into(),
            GateKind::Z => "Z".into(),
            GateKind::Cnot => "CNOT".into(),
            GateKind::Swap => "SWAP".into(),
            GateKind::Controlled(l) => format!("CP_{}", l.to_char()),
            GateKind::ControlledSwap(l) => format!("CPSWAP_{}", l.to_char()),
            GateKind::Fanout { letters, hadamard } => {
                let prefix = if *hadamard { "HFANOUT" } else { "FANOUT" };
                let k = letters.len() + 1;
                if letters.iter().all(|&l| l == Letter::X) {
                    format!("{prefix}{k}")
                } else {
                    let s: String = letters.iter().map(|l| l.to_char()).collect();
                    format!("{prefix}{k}.{s}")
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::I | GateKind::H | GateKind::SqrtZ | GateKind::X | GateKind::Y | GateKind::Z => 1,
            GateKind::Cnot | GateKind::Swap | GateKind::Controlled(_) | GateKind::ControlledSwap(_) => 2,
            GateKind::Fanout { letters, .. } => letters.len() + 1,
        }
    }

    pub(crate) fn elems(&self) -> Vec<Elem> {
        fn controlled(l: Letter, c: usize, t: usize, out: &mut Vec<Elem>) {
            match l {
                Letter::I => {}
                Letter::X => out.push(Elem::Cx(c, t)),
                Letter::Z => out.push(Elem::Cz(c, t)),
                // controlled-(ZX) = controlled-(iY), then S† on the control
                Letter::Y => {
                    out.push(Elem::Cx(c, t));
                    out.push(Elem::Cz(c, t));
                    out.extend([Elem::S(c); 3]);
                }
            }
        }
        let mut out = Vec::new();
        match self {
            GateKind::I => {}
            GateKind::H => out.push(Elem::H(0)),
            GateKind::SqrtZ => out.push(Elem::S(0)),
            GateKind::X => out.push(Elem::X(0)),
            GateKind::Y => out.push(Elem::Y(0)),
            GateKind::Z => out.push(Elem::Z(0)),
            GateKind::Cnot => out.push(Elem::Cx(0, 1)),
            GateKind::Swap => out.extend([Elem::Cx(0, 1), Elem::Cx(1, 0), Elem::Cx(0, 1)]),
            GateKind::Controlled(l) => controlled(*l, 0, 1, &mut out),
            GateKind::ControlledSwap(l) => {
                controlled(*l, 0, 1, &mut out);
                out.extend([Elem::Cx(0, 1), Elem::Cx(1, 0), Elem::Cx(0, 1)]);
            }
            GateKind::Fanout { letters, hadamard } => {
                if *hadamard {
                    out.push(Elem::H(0));
                }
                for (j, &l) in letters.iter().enumerate() {
                    controlled(l, 0, j + 1, &mut out);
                }
                if *hadamard {
                    out.push(Elem::H(0));
                }
            }
        }
        out
    }

    /// Conjugation images of X_j and Z_j for every slot.
    pub fn tableau(&self) -> Tableau {
        let k = self.arity();
        let wires: Vec<usize> = (0..k).collect();
        let image = |q: usize, l: Letter| {
            let mut p = PauliOp::single(k, q, l);
            conjugate(&mut p, self, &wires, false);
            p
        };
        Tableau {
            x_images: (0..k).map(|q| image(q, Letter::X)).collect(),
            z_images: (0..k).map(|q| image(q, Letter::Z)).collect(),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Images `U X_j U†` and `U Z_j U†`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    pub x_images: Vec<PauliOp>,
    pub z_images: Vec<PauliOp>,
}

impl Tableau {
    /// Commutation relations of the images match those of X_j, Z_j.
    pub fn is_symplectic(&self) -> bool {
        let k = self.x_images.len();
        for i in 0..k {
            for j in 0..k {
                let xx = self.x_images[i].commutes(&self.x_images[j]);
                let zz = self.z_images[i].commutes(&self.z_images[j]);
                let xz = self.x_images[i].commutes(&self.z_images[j]);
                if !xx || !zz || xz != (i != j) {
                    return false;
                }
            }
        }
        true
    }
}

/// Look up the tableau of a named gate, checking the arity.
pub fn gate_tableau(name: &str, arity: usize) -> Result<Tableau> {
    let kind = GateKind::from_name(name)?;
    if kind.arity() != arity {
        return Err(Error::InvalidArgument(format!(
            "gate {name} has arity {}, not {arity}",
            kind.arity()
        )));
    }
    Ok(kind.tableau())
}

fn conj_elem(p: &mut PauliOp, e: Elem, w: &[usize], inverse: bool) {
    match e {
        Elem::H(a) => {
            let q = w[a];
            let (x, z) = (p.x().get(q), p.z().get(q));
            p.x_mut().set(q, z);
            p.z_mut().set(q, x);
            if x && z {
                p.add_phase(2);
            }
        }
        Elem::S(a) => {
            let q = w[a];
            if p.x().get(q) {
                p.z_mut().flip(q);
                p.add_phase(if inverse { 1 } else { 3 });
            }
        }
        Elem::Cx(a, b) => {
            let (c, t) = (w[a], w[b]);
            if p.x().get(c) {
                p.x_mut().flip(t);
            }
            if p.z().get(t) {
                p.z_mut().flip(c);
            }
        }
        Elem::Cz(a, b) => {
            let (qa, qb) = (w[a], w[b]);
            let (xa, xb) = (p.x().get(qa), p.x().get(qb));
            if xb {
                p.z_mut().flip(qa);
            }
            if xa {
                p.z_mut().flip(qb);
            }
            if xa && xb {
                p.add_phase(2);
            }
        }
        Elem::X(a) => {
            if p.z().get(w[a]) {
                p.add_phase(2);
            }
        }
        Elem::Z(a) => {
            if p.x().get(w[a]) {
                p.add_phase(2);
            }
        }
        Elem::Y(a) => {
            if p.x().get(w[a]) != p.z().get(w[a]) {
                p.add_phase(2);
            }
        }
    }
}

/// `p <- U p U†` (or `U† p U` with `inverse`) for a gate acting on `wires`.
pub fn conjugate(p: &mut PauliOp, kind: &GateKind, wires: &[usize], inverse: bool) {
    let elems = kind.elems();
    if inverse {
        for &e in elems.iter().rev() {
            conj_elem(p, e, wires, true);
        }
    } else {
        for &e in &elems {
            conj_elem(p, e, wires, false);
        }
    }
}

/// Apply an elementary op to a state vector; bit q of the index is qubit q.
fn apply_elem(state: &mut [Complex64], e: Elem, w: &[usize]) {
    let dim = state.len();
    match e {
        Elem::H(a) => {
            let m = 1usize << w[a];
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..dim {
                if i & m == 0 {
                    let (u, v) = (state[i], state[i | m]);
                    state[i] = (u + v) * s;
                    state[i | m] = (u - v) * s;
                }
            }
        }
        Elem::S(a) => {
            let m = 1usize << w[a];
            for (i, amp) in state.iter_mut().enumerate() {
                if i & m != 0 {
                    *amp *= Complex64::i();
                }
            }
        }
        Elem::Cx(a, b) => {
            let (mc, mt) = (1usize << w[a], 1usize << w[b]);
            for i in 0..dim {
                if i & mc != 0 && i & mt == 0 {
                    state.swap(i, i | mt);
                }
            }
        }
        Elem::Cz(a, b) => {
            let m = (1usize << w[a]) | (1usize << w[b]);
            for (i, amp) in state.iter_mut().enumerate() {
                if i & m == m {
                    *amp = -*amp;
                }
            }
        }
        Elem::X(a) => apply_x(state, w[a]),
        Elem::Z(a) => apply_z(state, w[a]),
        Elem::Y(a) => {
            apply_x(state, w[a]);
            apply_z(state, w[a]);
        }
    }
}

fn apply_x(state: &mut [Complex64], q: usize) {
    let m = 1usize << q;
    for i in 0..state.len() {
        if i & m == 0 {
            state.swap(i, i | m);
        }
    }
}

fn apply_z(state: &mut [Complex64], q: usize) {
    let m = 1usize << q;
    for (i, amp) in state.iter_mut().enumerate() {
        if i & m != 0 {
            *amp = -*amp;
        }
    }
}

pub(crate) fn apply_gate(state: &mut [Complex64], kind: &GateKind, wires: &[usize]) {
    for e in kind.elems() {
        apply_elem(state, e, wires);
    }
}

/// Apply `i^k prod Z^z X^x` to a state vector.
pub(crate) fn apply_pauli(state: &mut [Complex64], p: &PauliOp) {
    for q in p.x().iter_ones() {
        apply_x(state, q);
    }
    for q in p.z().iter_ones() {
        apply_z(state, q);
    }
    let f = match p.phase() {
        0 => return,
        1 => Complex64::i(),
        2 => Complex64::new(-1.0, 0.0),
        _ => -Complex64::i(),
    };
    for amp in state.iter_mut() {
        *amp *= f;
    }
}
