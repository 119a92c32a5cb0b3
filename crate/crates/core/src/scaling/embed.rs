use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::routing::{color_layers, coords, route_permutation};
use crate::circuit::{GateKind, SpacetimeCircuit};
use crate::codemap::{build_code_with, Orientation, SubsystemCode};
use crate::error::{Error, Result};
use crate::gadgets::{make_graph, GraphPolicy};
use crate::gadgets::target_parts;
use crate::pauli::{Letter, PauliGroup, PauliOp};

/// Box size every gauge generator must fit in: one lattice step in space,
/// three time steps (a gate plus an idle gap of two before it).
pub const SPATIAL_BOUND: usize = 1;
pub const TIME_BOUND: u32 = 3;

/// Role of a token (a logical qubit carried between sites by SWAPs).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "lowercase")]
pub enum Token {
    Data { qubit: usize },
    Vertex { gadget: usize, vertex: usize },
    Edge { gadget: usize, edge: usize },
    Blank,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalGadget {
    pub target: PauliOp,
    pub seed: u64,
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub layer: usize,
    /// First step of its H / sweep / H block.
    pub start: u32,
    pub sweep_rounds: usize,
}

/// Layout and locality record of an embedded circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedSpec {
    /// Spacetime dimension; sites form a (D-1)-dimensional grid.
    pub dimension: usize,
    pub sides: Vec<usize>,
    /// Lattice coordinate of each wire (one wire per site).
    pub placement: Vec<Vec<usize>>,
    /// Token whose home is each site.
    pub tokens: Vec<Token>,
    /// Gadget ids per layer, in execution order.
    pub layers: Vec<Vec<usize>>,
    pub gadgets: Vec<LocalGadget>,
    /// Depth of each SWAP routing stage (one before each layer, one to return home).
    pub routing_depths: Vec<usize>,
    pub depth: u32,
    pub spatial_diameter: usize,
    pub time_diameter: u32,
    pub spatial_bound: usize,
    pub time_bound: u32,
    pub local: bool,
}

impl EmbedSpec {
    /// `wire,coord0,coord1,..` table.
    pub fn placement_csv(&self) -> String {
        let mut out = String::from("wire");
        for a in 0..self.sides.len() {
            out += &format!(",x{a}");
        }
        out.push('\n');
        for (w, c) in self.placement.iter().enumerate() {
            out += &w.to_string();
            for x in c {
                out += &format!(",{x}");
            }
            out.push('\n');
        }
        out
    }
}

/// Boustrophedon path through a grid; consecutive cells are neighbours.
pub fn snake(sides: &[usize]) -> Vec<usize> {
    if sides.len() == 1 {
        return (0..sides[0]).collect();
    }
    let inner = snake(&sides[1..]);
    let r = inner.len();
    let mut out = Vec::with_capacity(sides[0] * r);
    for c in 0..sides[0] {
        if c % 2 == 0 {
            out.extend(inner.iter().map(|&x| c * r + x));
        } else {
            out.extend(inner.iter().rev().map(|&x| c * r + x));
        }
    }
    out
}

struct Plan {
    support: Vec<usize>,
    letters: Vec<Letter>,
    negative: bool,
    target: PauliOp,
    vertices: usize,
    edges: Vec<(usize, usize)>,
    seed: u64,
    /// Token ids of vertex and edge blocks.
    vtok: Vec<usize>,
    etok: Vec<usize>,
}

struct Layout {
    site_of: Vec<usize>,
    token_at: Vec<usize>,
}

impl Layout {
    fn swap_sites(&mut self, a: usize, b: usize) {
        self.token_at.swap(a, b);
        self.site_of[self.token_at[a]] = a;
        self.site_of[self.token_at[b]] = b;
    }
}

/// Place SWAP layers realizing "token at site i moves to site perm[i]".
fn route(c: &mut SpacetimeCircuit, sides: &[usize], perm: &[usize], t: &mut u32, lay: &mut Layout) -> Result<usize> {
    let net = route_permutation(sides, perm)?;
    for layer in &net.layers {
        for &(a, b) in layer {
            c.push_at(GateKind::Swap, &[a, b], *t)?;
            lay.swap_sites(a, b);
        }
        *t += 1;
    }
    Ok(net.depth())
}

/// Fill idle stretches with identities so every idle run has length 0 or 2.
fn fill_idle(c: &mut SpacetimeCircuit) -> Result<()> {
    let t_end = c.depth() + c.depth() % 2;
    let busy: Vec<Vec<u32>> =
        c.wire_gates().iter().map(|ids| ids.iter().map(|&i| c.gates()[i].step).collect()).collect();
    for (w, steps) in busy.iter().enumerate() {
        let mut runs = Vec::new();
        let mut prev = 0u32;
        for &s in steps {
            runs.push((prev, s - prev));
            prev = s + 1;
        }
        runs.push((prev, t_end - prev));
        for (mut p, mut r) in runs {
            while r != 0 && r != 2 {
                if r % 2 == 1 {
                    c.push_at(GateKind::I, &[w], p)?;
                    p += 1;
                    r -= 1;
                } else {
                    c.push_at(GateKind::I, &[w], p + 2)?;
                    p += 3;
                    r -= 3;
                }
            }
        }
    }
    Ok(())
}

/// Largest spatial and temporal extent of any gauge generator, with sites
/// at their lattice coordinates and qubits at their segment start times.
pub fn generator_extent(code: &SubsystemCode, sides: &[usize]) -> (usize, u32) {
    let index = code.index();
    let mut space = 0;
    let mut time = 0;
    for g in code.gauge().generators() {
        let pts: Vec<(Vec<usize>, u32)> = g
            .support()
            .into_iter()
            .map(|q| {
                let (w, t) = index.coordinate(q);
                (coords(sides, w), t)
            })
            .collect();
        if pts.is_empty() {
            continue;
        }
        for a in 0..sides.len() {
            let lo = pts.iter().map(|p| p.0[a]).min().unwrap();
            let hi = pts.iter().map(|p| p.0[a]).max().unwrap();
            space = space.max(hi - lo);
        }
        let lo = pts.iter().map(|p| p.1).min().unwrap();
        let hi = pts.iter().map(|p| p.1).max().unwrap();
        time = time.max(hi - lo);
    }
    (space, time)
}

/// Embed the error-detecting circuit of `base` into a (D-1)-dimensional
/// grid of sites with nearest-neighbour gates only.
///
/// Each site is one wire. Data qubits sit on sites `0..n0` (row-major by
/// qubit id), followed by the vertex and edge blocks of each gadget and any
/// blank sites. Gadgets are grouped into layers of disjoint supports. Before
/// a layer, a SWAP network lines each of its gadgets up along a snake path
/// as `[vertices][edges][data]`; the vertex tokens then get H, sweep right
/// through the block applying controlled letters as they pass their targets,
/// and get H again. A final SWAP network returns every token home.
pub fn embed_local(
    base: &PauliGroup,
    dimension: usize,
    policy: GraphPolicy,
    seed: u64,
) -> Result<(SpacetimeCircuit, SubsystemCode, EmbedSpec)> {
    if dimension < 2 {
        return Err(Error::InvalidArgument(format!("need at least one spatial dimension, got D = {dimension}")));
    }
    let n0 = base.num_qubits();
    if base.rank() != base.len() {
        return Err(Error::InvalidCode("base generators are not independent".into()));
    }
    let mut tokens: Vec<Token> = (0..n0).map(|q| Token::Data { qubit: q }).collect();
    let mut plans = Vec::new();
    for (i, p) in base.generators().iter().enumerate() {
        let (support, letters, negative) = target_parts(p)?;
        if support.len() < 2 {
            return Err(Error::InvalidCode(format!("generator {i} ({p}) has weight {}", support.len())));
        }
        let gseed = seed.wrapping_add(i as u64);
        let g = make_graph(support.len(), policy, gseed)?.graph;
        let vtok: Vec<usize> = (0..g.num_vertices())
            .map(|v| {
                tokens.push(Token::Vertex { gadget: i, vertex: v });
                tokens.len() - 1
            })
            .collect();
        let etok: Vec<usize> = (0..g.edges().len())
            .map(|e| {
                tokens.push(Token::Edge { gadget: i, edge: e });
                tokens.len() - 1
            })
            .collect();
        plans.push(Plan {
            support,
            letters,
            negative,
            target: p.clone(),
            vertices: g.num_vertices(),
            edges: g.edges().to_vec(),
            seed: gseed,
            vtok,
            etok,
        });
    }
    let used = tokens.len();
    let dims = dimension - 1;
    let mut a = 1usize;
    while a.checked_pow(dims as u32).is_some_and(|v| v < used) {
        a += 1;
    }
    let sides = vec![a; dims];
    let cells: usize = a.checked_pow(dims as u32).ok_or_else(|| Error::ResourceLimit("grid too large".into()))?;
    tokens.resize(cells, Token::Blank);
    let path = snake(&sides);
    let mut pos_on_path = vec![0; cells];
    for (i, &s) in path.iter().enumerate() {
        pos_on_path[s] = i;
    }

    // layers of gadgets with disjoint data supports
    let supports: Vec<Vec<usize>> = plans.iter().map(|p| p.support.clone()).collect();
    let mut load = vec![0usize; n0];
    supports.iter().flatten().for_each(|&q| load[q] += 1);
    let k = supports.iter().map(Vec::len).chain(load.iter().copied()).max().unwrap_or(1);
    let colors = color_layers(&supports, k)?;
    let mut by_color: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (g, &col) in colors.iter().enumerate() {
        by_color.entry(col).or_default().push(g);
    }
    let layers: Vec<Vec<usize>> = by_color.into_values().collect();

    let mut c = SpacetimeCircuit::new(cells);
    for s in n0..cells {
        c.init(s)?;
    }
    let mut lay = Layout { site_of: (0..cells).collect(), token_at: (0..cells).collect() };
    let mut t = 0u32;
    let mut routing_depths = Vec::new();
    let mut gadgets: Vec<Option<LocalGadget>> = vec![None; plans.len()];
    for (li, layer) in layers.iter().enumerate() {
        // line up the layer's gadgets at the head of the path
        let mut seq: Vec<usize> = Vec::new();
        let mut blocks = Vec::new();
        for &g in layer {
            let p = &plans[g];
            blocks.push((g, seq.len()));
            seq.extend(&p.vtok);
            seq.extend(&p.etok);
            seq.extend(&p.support);
        }
        let mut in_seq = vec![false; cells];
        seq.iter().for_each(|&x| in_seq[x] = true);
        let mut rest: Vec<usize> = (0..cells).filter(|&x| !in_seq[x]).collect();
        rest.sort_by_key(|&x| pos_on_path[lay.site_of[x]]);
        seq.extend(rest);
        let mut perm = vec![0; cells];
        for (i, &tok) in seq.iter().enumerate() {
            perm[lay.site_of[tok]] = path[i];
        }
        routing_depths.push(route(&mut c, &sides, &perm, &mut t, &mut lay)?);

        let start = t;
        if layer.iter().any(|&g| plans[g].negative) {
            for &g in layer.iter().filter(|&&g| plans[g].negative) {
                c.push_at(GateKind::X, &[lay.site_of[plans[g].vtok[0]]], t)?;
            }
            t += 1;
        }
        for &g in layer {
            for &v in &plans[g].vtok {
                c.push_at(GateKind::H, &[lay.site_of[v]], t)?;
            }
        }
        t += 1;
        // per gadget: target letter of (vertex token, other token)
        let mut lines: Vec<(usize, usize, Vec<usize>, BTreeMap<(usize, usize), Letter>)> = Vec::new();
        for &(g, off) in &blocks {
            let p = &plans[g];
            let len = p.vertices + p.edges.len() + p.support.len();
            let line: Vec<usize> = (off..off + len).map(|i| lay.token_at[path[i]]).collect();
            let mut targets = BTreeMap::new();
            for (v, &vt) in p.vtok.iter().enumerate() {
                if v < p.support.len() {
                    targets.insert((vt, p.support[v]), p.letters[v]);
                }
            }
            for (e, &(x, y)) in p.edges.iter().enumerate() {
                targets.insert((p.vtok[x], p.etok[e]), Letter::X);
                targets.insert((p.vtok[y], p.etok[e]), Letter::X);
            }
            lines.push((g, off, line, targets));
        }
        let mut round = 0usize;
        let mut rounds = vec![0usize; plans.len()];
        loop {
            let mut any = false;
            let mut pending = false;
            for (g, off, line, targets) in lines.iter_mut() {
                let is_v = |x: usize| plans[*g].vtok.contains(&x);
                let mut j = round % 2;
                while j + 1 < line.len() {
                    if is_v(line[j]) && !is_v(line[j + 1]) {
                        let (sa, sb) = (path[*off + j], path[*off + j + 1]);
                        let kind = match targets.get(&(line[j], line[j + 1])) {
                            Some(&l) => GateKind::ControlledSwap(l),
                            None => GateKind::Swap,
                        };
                        c.push_at(kind, &[sa, sb], t)?;
                        lay.swap_sites(sa, sb);
                        line.swap(j, j + 1);
                        any = true;
                        rounds[*g] = round + 1;
                    }
                    j += 2;
                }
                pending |= line.windows(2).any(|w| is_v(w[0]) && !is_v(w[1]));
            }
            if any {
                t += 1;
            }
            if !pending {
                break;
            }
            round += 1;
        }
        for &g in layer {
            for &v in &plans[g].vtok {
                c.push_at(GateKind::H, &[lay.site_of[v]], t)?;
            }
        }
        t += 1;
        for &g in layer {
            let p = &plans[g];
            gadgets[g] = Some(LocalGadget {
                target: p.target.clone(),
                seed: p.seed,
                num_vertices: p.vertices,
                edges: p.edges.clone(),
                layer: li,
                start,
                sweep_rounds: rounds[g],
            });
        }
    }
    let perm: Vec<usize> = (0..cells).map(|s| lay.token_at[s]).collect();
    routing_depths.push(route(&mut c, &sides, &perm, &mut t, &mut lay)?);
    debug_assert!(lay.token_at.iter().enumerate().all(|(s, &x)| s == x));
    fill_idle(&mut c)?;
    for s in n0..cells {
        c.post(s)?;
    }
    let circuit = c.pad_and_canonicalize();
    let code = build_code_with(&circuit, Orientation::Balanced)?;
    let (spatial_diameter, time_diameter) = generator_extent(&code, &sides);
    let spec = EmbedSpec {
        dimension,
        placement: (0..cells).map(|s| coords(&sides, s)).collect(),
        sides,
        tokens,
        layers,
        gadgets: gadgets.into_iter().map(|g| g.expect("every gadget scheduled")).collect(),
        routing_depths,
        depth: circuit.depth(),
        spatial_diameter,
        time_diameter,
        spatial_bound: SPATIAL_BOUND,
        time_bound: TIME_BOUND,
        local: spatial_diameter <= SPATIAL_BOUND && time_diameter <= TIME_BOUND,
    };
    Ok((circuit, code, spec))
}
