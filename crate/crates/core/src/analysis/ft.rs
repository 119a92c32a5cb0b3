use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{
    dense_operator, dense_operator_with_errors, DenseOperator, ErrorPattern, MeasurementAlgebra, SpacetimeCircuit,
    DENSE_WIRE_LIMIT,
};
use super::code::CodeAnalysis;
use crate::codemap::{build_code, pattern_operator, time_zero_pullbacks, SpacetimeQubitIndex};
use crate::error::{Error, Result};
use crate::pauli::{BitVec, Letter, PauliOp};

/// Largest number of patterns a single check will enumerate.
pub const FT_PATTERN_LIMIT: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FtMode {
    /// Pauli propagation with coset minimization over the trivially acting input group.
    #[default]
    Symbolic,
    /// Dense statevector oracle, at most 12 wires.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Verdict {
    Zero,
    Reduced { e_prime: PauliOp },
    Violation { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternVerdict {
    pub pattern: String,
    pub weight: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FtReport {
    pub max_weight: usize,
    pub mode: FtMode,
    pub patterns_checked: u64,
    pub zero: u64,
    pub reduced: u64,
    pub violations: Vec<PatternVerdict>,
    /// Violations whose spacetime operator commutes with every stabilizer
    /// of the circuit's own code, so no stabilizer can flag them.
    pub undetectable_violations: Vec<PatternVerdict>,
    /// Every verdict, when requested.
    pub verdicts: Vec<PatternVerdict>,
    /// No violations at all.
    pub fault_tolerant: bool,
    /// No undetectable violations.
    pub undetectable_fault_tolerant: bool,
}

/// Render a pattern as `X0@2 Z3@5` (letter, wire, time).
pub fn format_pattern(e: &ErrorPattern) -> String {
    let parts: Vec<String> = e.iter().map(|(w, t, l)| format!("{}{w}@{t}", l.to_char())).collect();
    if parts.is_empty() {
        "I".into()
    } else {
        parts.join(" ")
    }
}

struct Dense {
    v_times: Vec<(PauliOp, DenseOperator)>,
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn is_unit_multiple(a: &DenseOperator, b: &DenseOperator) -> bool {
    a.proportionality(b, 1e-9).is_some_and(|k| (k.norm() - 1.0).abs() < 1e-9)
}

/// Exhaustively check every error pattern of weight at most `max_weight`.
/// Patterns range over code qubits, so an idle stretch of a wire counts once.
pub fn verify_fault_tolerance(
    c: &SpacetimeCircuit,
    max_weight: usize,
    mode: FtMode,
    record_all: bool,
) -> Result<FtReport> {
    if !c.is_canonical() {
        return Err(Error::NotCanonical("fault-tolerance check needs a canonical circuit".into()));
    }
    if mode == FtMode::Exact && c.num_wires() > DENSE_WIRE_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "exact mode is limited to {DENSE_WIRE_LIMIT} wires, circuit has {}",
            c.num_wires()
        )));
    }
    let index = SpacetimeQubitIndex::new(c);
    let n = index.num_qubits() as u64;
    let total: u64 = (1..=max_weight as u64).map(|w| binomial(n, w).saturating_mul(3u64.pow(w as u32))).sum();
    if total > FT_PATTERN_LIMIT {
        return Err(Error::ResourceLimit(format!("{total} error patterns exceed the limit of {FT_PATTERN_LIMIT}")));
    }
    let alg = MeasurementAlgebra::new(c);
    let pulls = time_zero_pullbacks(c, &index);
    let dense = if mode == FtMode::Exact { Some(dense_setup(c, &alg.data, max_weight)?) } else { None };

    let mut report = FtReport {
        max_weight,
        mode,
        patterns_checked: 0,
        zero: 0,
        reduced: 0,
        violations: Vec::new(),
        undetectable_violations: Vec::new(),
        verdicts: Vec::new(),
        fault_tolerant: true,
        undetectable_fault_tolerant: true,
    };
    let stabilizers = CodeAnalysis::new(build_code(c)?.gauge()).stabilizers();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for w in 1..=max_weight.min(index.num_qubits()) {
        enumerate(index.num_qubits(), w, 0, &mut chosen, &mut |sel| {
            let mut e = ErrorPattern::new();
            let mut v = BitVec::zeros(2 * c.num_wires());
            for &(q, l) in sel {
                let (wire, t) = index.coordinate(q);
                let letter = [Letter::X, Letter::Y, Letter::Z][l];
                e.insert(wire, t, letter);
                let (hx, hz) = letter.bits();
                if hx {
                    v.xor_assign(&pulls[q][0].to_symplectic());
                }
                if hz {
                    v.xor_assign(&pulls[q][1].to_symplectic());
                }
            }
            let verdict = match &dense {
                None => symbolic_verdict(&alg, &PauliOp::from_symplectic(&v, 0), w)?,
                Some(d) => dense_verdict(c, d, &e, w)?,
            };
            report.patterns_checked += 1;
            let pv = PatternVerdict { pattern: format_pattern(&e), weight: w, verdict };
            match pv.verdict {
                Verdict::Zero => report.zero += 1,
                Verdict::Reduced { .. } => report.reduced += 1,
                Verdict::Violation { .. } => {
                    let op = pattern_operator(&index, &e)?;
                    if stabilizers.generators().iter().all(|s| s.commutes(&op)) {
                        report.undetectable_violations.push(pv.clone());
                    }
                    report.violations.push(pv.clone());
                }
            }
            if record_all {
                report.verdicts.push(pv);
            }
            Ok(())
        })?;
    }
    report.fault_tolerant = report.violations.is_empty();
    report.undetectable_fault_tolerant = report.undetectable_violations.is_empty();
    Ok(report)
}

fn enumerate(
    n: usize,
    w: usize,
    start: usize,
    chosen: &mut Vec<(usize, usize)>,
    f: &mut dyn FnMut(&[(usize, usize)]) -> Result<()>,
) -> Result<()> {
    if chosen.len() == w {
        return f(chosen);
    }
    for q in start..=n - (w - chosen.len()) {
        for l in 0..3 {
            chosen.push((q, l));
            enumerate(n, w, q + 1, chosen, f)?;
            chosen.pop();
        }
    }
    Ok(())
}

fn symbolic_verdict(alg: &MeasurementAlgebra, e0: &PauliOp, w: usize) -> Result<Verdict> {
    let ev = alg.evaluate(e0)?;
    Ok(match (ev.zero, ev.e_prime) {
        (true, _) => Verdict::Zero,
        (false, _) if alg.kernel_sign_conflict() => {
            Verdict::Violation { detail: "V is zero but V_E is not".into() }
        }
        (false, Some(ep)) if ep.weight() <= w => Verdict::Reduced { e_prime: ep },
        (false, Some(ep)) => Verdict::Violation { detail: format!("lightest equivalent input error {ep} has weight {}", ep.weight()) },
        (false, None) => Verdict::Violation { detail: "error flips an ancilla and is not equivalent to an input error".into() },
    })
}

fn dense_setup(c: &SpacetimeCircuit, data: &[usize], max_weight: usize) -> Result<Dense> {
    let v = dense_operator(c)?;
    let n0 = data.len();
    let mut v_times = Vec::new();
    for code in 0u64..(1u64 << (2 * n0)) {
        let mut p = PauliOp::identity(n0);
        for j in 0..n0 {
            let b = (code >> (2 * j)) & 3;
            p.set_letter(j, Letter::from_bits(b & 1 == 1, b & 2 == 2));
        }
        if p.weight() > max_weight {
            continue;
        }
        let m = v.matmul(&DenseOperator::from_pauli(&p));
        v_times.push((p, m));
    }
    v_times.sort_by_key(|(p, _)| p.weight());
    Ok(Dense { v_times })
}

fn dense_verdict(c: &SpacetimeCircuit, d: &Dense, e: &ErrorPattern, w: usize) -> Result<Verdict> {
    let ve = dense_operator_with_errors(c, e)?;
    if ve.is_zero(1e-9) {
        return Ok(Verdict::Zero);
    }
    for (p, m) in &d.v_times {
        if p.weight() > w {
            break;
        }
        if is_unit_multiple(&ve, m) {
            return Ok(Verdict::Reduced { e_prime: p.clone() });
        }
    }
    Ok(Verdict::Violation { detail: format!("no input error of weight <= {w} reproduces V_E") })
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Zero => write!(f, "zero"),
            Verdict::Reduced { e_prime } => write!(f, "reduced to {e_prime}"),
            Verdict::Violation { detail } => write!(f, "VIOLATION: {detail}"),
        }
    }
}
