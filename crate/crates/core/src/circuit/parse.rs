use super::gate::GateKind;
use super::ir::{GadgetInfo, SpacetimeCircuit};
use crate::error::{Error, Result};

enum Stmt {
    Init(usize),
    Post(usize),
    Gate(GateKind, Vec<usize>, Option<u32>),
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_wire(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| perr(line, format!("invalid wire `{tok}`")))
}

fn parse_time(tok: &str, line: usize) -> Result<u32> {
    let t: f64 = tok.parse().map_err(|_| perr(line, format!("invalid time `{tok}`")))?;
    if t < 0.5 || (t - 0.5).fract() != 0.0 {
        return Err(perr(line, format!("gate time `{tok}` is not a positive half-integer")));
    }
    Ok((t - 0.5) as u32)
}

fn parse_list(s: &str, line: usize) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| parse_wire(t, line)).collect()
}

fn parse_gadget(rest: &str, line: usize) -> Result<GadgetInfo> {
    let mut toks = rest.split_whitespace();
    let target = toks.next().ok_or_else(|| perr(line, "GADGET without target"))?.parse()?;
    let mut info = GadgetInfo {
        target,
        data_wires: Vec::new(),
        vertex_wires: Vec::new(),
        edge_wires: Vec::new(),
        edges: Vec::new(),
    };
    for tok in toks {
        let (key, val) = tok.split_once('=').ok_or_else(|| perr(line, format!("bad field `{tok}`")))?;
        match key {
            "data" => info.data_wires = parse_list(val, line)?,
            "vertices" => info.vertex_wires = parse_list(val, line)?,
            "edge_wires" => info.edge_wires = parse_list(val, line)?,
            "graph" => {
                for e in val.split(',').filter(|e| !e.is_empty()) {
                    let (a, b) = e.split_once('-').ok_or_else(|| perr(line, format!("bad edge `{e}`")))?;
                    info.edges.push((parse_wire(a, line)?, parse_wire(b, line)?));
                }
            }
            _ => return Err(perr(line, format!("unknown GADGET field `{key}`"))),
        }
    }
    Ok(info)
}

/// Parse the line-based circuit format.
///
/// ```text
/// INIT <wire>
/// <GATE> <wire>... [@ <half-integer>]
/// POST <wire>
/// ```
pub fn parse_circuit(text: &str) -> Result<SpacetimeCircuit> {
    let mut stmts = Vec::new();
    let mut gadgets = Vec::new();
    let mut max_wire: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix("# GADGET ") {
            gadgets.push(parse_gadget(rest, line)?);
            continue;
        }
        let body = trimmed.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (body, time) = match body.split_once('@') {
            Some((b, t)) => (b.trim(), Some(parse_time(t.trim(), line)?)),
            None => (body, None),
        };
        let mut toks = body.split_whitespace();
        let name = toks.next().expect("nonempty");
        let wires: Vec<usize> = toks.map(|t| parse_wire(t, line)).collect::<Result<_>>()?;
        if let Some(&m) = wires.iter().max() {
            max_wire = Some(max_wire.map_or(m, |x| x.max(m)));
        }
        let upper = name.to_ascii_uppercase();
        let stmt = match upper.as_str() {
            "INIT" | "POST" => {
                if wires.len() != 1 || time.is_some() {
                    return Err(perr(line, format!("{upper} takes exactly one wire")));
                }
                if upper == "INIT" {
                    Stmt::Init(wires[0])
                } else {
                    Stmt::Post(wires[0])
                }
            }
            _ => {
                let kind = GateKind::from_name(&upper).map_err(|e| perr(line, e.to_string()))?;
                Stmt::Gate(kind, wires, time)
            }
        };
        stmts.push((line, stmt));
    }
    let mut c = SpacetimeCircuit::new(max_wire.map_or(0, |m| m + 1));
    for (line, stmt) in stmts {
        let res = match stmt {
            Stmt::Init(w) => c.init(w),
            Stmt::Post(w) => c.post(w),
            Stmt::Gate(kind, wires, Some(t)) => c.push_at(kind, &wires, t).map(|_| ()),
            Stmt::Gate(kind, wires, None) => c.push(kind, &wires).map(|_| ()),
        };
        res.map_err(|e| perr(line, e.to_string()))?;
    }
    for g in gadgets {
        c.add_gadget_info(g);
    }
    Ok(c)
}
