use std::fmt::Write as _;
use std::str::FromStr;

use super::build::{Provenance, SubsystemCode};
use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliGroup, PauliOp};

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, msg: format!("bad provenance tag `{s}`") };
        let parts: Vec<&str> = s.split(':').collect();
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["init", w] => Ok(Provenance::Init { wire: num(w)? }),
            ["post", w] => Ok(Provenance::Post { wire: num(w)? }),
            ["gate", at, slot, l, dir] => {
                let (gate, step) = at.split_once('@').ok_or_else(bad)?;
                let step = step.strip_suffix(".5").ok_or_else(bad)?;
                let slot = slot.strip_prefix("slot").ok_or_else(bad)?;
                let mut chars = l.chars();
                let letter = match (chars.next().and_then(Letter::from_char), chars.next()) {
                    (Some(letter), None) => letter,
                    _ => return Err(bad()),
                };
                let backward = match *dir {
                    "fwd" => false,
                    "bwd" => true,
                    _ => return Err(bad()),
                };
                Ok(Provenance::Gate {
                    gate: num(gate)?,
                    slot: num(slot)?,
                    letter,
                    step: step.parse().map_err(|_| bad())?,
                    backward,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// Contents of a code file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub num_qubits: usize,
    /// (qubit, wire, time) rows; empty for plain generator lists.
    pub coordinates: Vec<(usize, usize, u32)>,
    pub generators: Vec<PauliOp>,
    pub tags: Vec<Option<String>>,
}

impl CodeFile {
    pub fn group(&self) -> Result<PauliGroup> {
        PauliGroup::new(self.num_qubits, self.generators.clone())
    }

    pub fn from_code(code: &SubsystemCode) -> Self {
        let coordinates =
            code.index().coordinates().iter().enumerate().map(|(q, &(w, t))| (q, w, t)).collect();
        CodeFile {
            num_qubits: code.num_qubits(),
            coordinates,
            generators: code.gauge().generators().to_vec(),
            tags: code.provenance().iter().map(|p| Some(p.to_string())).collect(),
        }
    }

    pub fn from_group(g: &PauliGroup) -> Self {
        CodeFile {
            num_qubits: g.num_qubits(),
            coordinates: Vec::new(),
            generators: g.generators().to_vec(),
            tags: vec![None; g.len()],
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "n {}", self.num_qubits).unwrap();
        for &(q, w, t) in &self.coordinates {
            writeln!(s, "qubit {q} {w} {t}").unwrap();
        }
        for (g, tag) in self.generators.iter().zip(&self.tags) {
            match tag {
                Some(tag) => writeln!(s, "{g} {tag}").unwrap(),
                None => writeln!(s, "{g}").unwrap(),
            }
        }
        s
    }

    /// Parse a code file. The `n` header and `qubit` rows are optional; a
    /// bare list of signed Pauli strings is a valid file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut num_qubits = None;
        let mut coordinates = Vec::new();
        let mut generators = Vec::new();
        let mut tags = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "n" => {
                    if tokens.len() != 2 || num_qubits.is_some() || !generators.is_empty() {
                        return Err(err("misplaced or malformed `n` header".into()));
                    }
                    num_qubits = Some(tokens[1].parse().map_err(|_| err("bad qubit count".into()))?);
                }
                "qubit" => {
                    let vals: Vec<u64> = tokens[1..]
                        .iter()
                        .map(|t| t.parse().map_err(|_| err("bad coordinate row".into())))
                        .collect::<Result<_>>()?;
                    if vals.len() != 3 {
                        return Err(err("coordinate row needs qubit, wire, time".into()));
                    }
                    coordinates.push((vals[0] as usize, vals[1] as usize, vals[2] as u32));
                }
                _ => {
                    if tokens.len() > 2 {
                        return Err(err("expected a Pauli string and an optional tag".into()));
                    }
                    let p: PauliOp = tokens[0].parse().map_err(|e: Error| err(e.to_string()))?;
                    let n = *num_qubits.get_or_insert(p.num_qubits());
                    if p.num_qubits() != n {
                        return Err(err(format!("generator on {} qubits, expected {n}", p.num_qubits())));
                    }
                    if let Some(tag) = tokens.get(1) {
                        tag.parse::<Provenance>().map_err(|_| err(format!("bad tag `{tag}`")))?;
                    }
                    generators.push(p);
                    tags.push(tokens.get(1).map(|t| t.to_string()));
                }
            }
        }
        let num_qubits = num_qubits.ok_or(Error::Parse { line: 0, msg: "empty code file".into() })?;
        if !coordinates.is_empty() && coordinates.len() != num_qubits {
            return Err(Error::Parse { line: 0, msg: "coordinate table does not cover every qubit".into() });
        }
        Ok(CodeFile { num_qubits, coordinates, generators, tags })
    }
}

/// Read a stabilizer code file: one signed Pauli string per line, where `Y`
/// is the Hermitian Pauli Y. An `n` header and `#` comments are allowed.
pub fn parse_stabilizer_file(text: &str) -> Result<PauliGroup> {
    let mut n = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "n" {
            if tokens.len() != 2 || n.is_some() || !lines.is_empty() {
                return Err(err("misplaced or malformed `n` header".into()));
            }
            n = Some(tokens[1].parse::<usize>().map_err(|_| err("bad qubit count".into()))?);
            continue;
        }
        if tokens.len() != 1 {
            return Err(err("expected one Pauli string per line".into()));
        }
        let g = PauliGroup::parse_hermitian(&[tokens[0]]).map_err(|e| err(e.to_string()))?;
        let p = g.generators()[0].clone();
        let expected = *n.get_or_insert(p.num_qubits());
        if p.num_qubits() != expected {
            return Err(err(format!("generator on {} qubits, expected {expected}", p.num_qubits())));
        }
        lines.push(p);
    }
    let n = n.ok_or(Error::Parse { line: 0, msg: "empty stabilizer file".into() })?;
    PauliGroup::new(n, lines)
}

/// Canonical text of a stabilizer code: `n` header, then `+`/`-` and letters.
pub fn stabilizer_text(g: &PauliGroup) -> String {
    let mut s = format!("n {}\n", g.num_qubits());
    for p in g.generators() {
        let negative = (p.phase() + 4 - p.hermitian_phase()) % 4 == 2;
        let letters: String = (0..p.num_qubits()).map(|q| p.letter(q).to_char()).collect();
        let sign = if !p.is_hermitian() {
            "?"
        } else if negative {
            "-"
        } else {
            "+"
        };
        writeln!(s, "{sign}{letters}").unwrap();
    }
    s
}
