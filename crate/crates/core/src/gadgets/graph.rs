use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count for exhaustive expansion certification.
pub const EXPANSION_LIMIT: usize = 24;

/// Simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidGraph(format!("bad edge {a}-{b} on {n} vertices")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("repeated edge {}-{}", e.0, e.1)));
            }
            norm.push(e);
        }
        Ok(Graph { n, edges: norm })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Graph { n, edges }
    }

    pub fn path(n: usize) -> Self {
        Graph { n, edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Edge indices incident to each vertex, in edge order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push(i);
            inc[b].push(i);
        }
        inc
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Edge list as `a-b,c-d`.
    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(",")
    }
}

/// Exact edge expansion: min |∂S|/|S| over nonempty S with |S| ≤ |V|/2.
pub fn edge_expansion(g: &Graph) -> Result<Ratio<u64>> {
    let n = g.num_vertices();
    if n < 2 {
        return Err(Error::InvalidGraph("edge expansion needs at least two vertices".into()));
    }
    if n > EXPANSION_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "exhaustive expansion limited to {EXPANSION_LIMIT} vertices, graph has {n}"
        )));
    }
    let mut adj = vec![0u32; n];
    for &(a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let deg: Vec<i64> = adj.iter().map(|m| m.count_ones() as i64).collect();
    let half = n / 2;
    let mut best = Ratio::new(u64::MAX, 1);
    // Gray-code walk keeps S and its boundary size current
    let mut set = 0u32;
    let mut size = 0usize;
    let mut boundary = 0i64;
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let inside = (adj[v] & set).count_ones() as i64;
        if set >> v & 1 == 1 {
            set &= !(1 << v);
            size -= 1;
            boundary -= deg[v] - 2 * inside;
        } else {
            set |= 1 << v;
            size += 1;
            boundary += deg[v] - 2 * inside;
        }
        if size <= half {
            let r = Ratio::new(boundary as u64, size as u64);
            if r < best {
                best = r;
            }
        }
    }
    Ok(best)
}

/// How gadget graphs are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphPolicy {
    /// K_w, for w ≤ 6.
    Complete,
    /// Seeded random 6-regular graph on max(w, 7) vertices, certified φ ≥ 1.
    Random6,
    /// Complete for w ≤ 6, otherwise random6.
    Auto,
}

impl FromStr for GraphPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(GraphPolicy::Complete),
            "random6" => Ok(GraphPolicy::Random6),
            "auto" => Ok(GraphPolicy::Auto),
            _ => Err(Error::InvalidArgument(format!("unknown graph policy `{s}`"))),
        }
    }
}

impl fmt::Display for GraphPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphPolicy::Complete => "complete",
            GraphPolicy::Random6 => "random6",
            GraphPolicy::Auto => "auto",
        })
    }
}

/// A graph together with its certified expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedGraph {
    pub graph: Graph,
    pub expansion: Ratio<u64>,
    /// Number of random graphs drawn before this one was accepted.
    pub attempts: usize,
}

pub const RANDOM_GRAPH_BUDGET: usize = 1000;

pub fn make_graph(w: usize, policy: GraphPolicy, seed: u64) -> Result<CertifiedGraph> {
    if w < 2 {
        return Err(Error::InvalidArgument(format!(
            "weight-{w} generators need no gadget and are not supported"
        )));
    }
    let policy = match policy {
        GraphPolicy::Auto if w <= 6 => GraphPolicy::Complete,
        GraphPolicy::Auto => GraphPolicy::Random6,
        p => p,
    };
    match policy {
        GraphPolicy::Complete => {
            if w > 6 {
                return Err(Error::InvalidArgument(format!("complete policy is limited to w ≤ 6, got {w}")));
            }
            let graph = Graph::complete(w);
            let expansion = edge_expansion(&graph)?;
            Ok(CertifiedGraph { graph, expansion, attempts: 1 })
        }
        GraphPolicy::Random6 => {
            let n = w.max(7);
            if n > EXPANSION_LIMIT {
                return Err(Error::ResourceLimit(format!(
                    "random6 certification is exhaustive and limited to {EXPANSION_LIMIT} vertices, need {n}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for attempt in 1..=RANDOM_GRAPH_BUDGET {
                let Some(graph) = random_regular(n, 6, &mut rng) else { continue };
                if !graph.is_connected() {
                    continue;
                }
                let expansion = edge_expansion(&graph)?;
                if expansion >= Ratio::from_integer(1) {
                    return Ok(CertifiedGraph { graph, expansion, attempts: attempt });
                }
            }
            Err(Error::GraphSearchExhausted { seed, tried: RANDOM_GRAPH_BUDGET })
        }
        GraphPolicy::Auto => unreachable!(),
    }
}

/// Random d-regular simple graph by stub matching with local rejection;
/// `None` if the matching gets stuck.
fn random_regular(n: usize, d: usize, rng: &mut impl Rng) -> Option<Graph> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut adj = vec![vec![false; n]; n];
    let mut edges = Vec::with_capacity(n * d / 2);
    stubs.shuffle(rng);
    while !stubs.is_empty() {
        let mut placed = false;
        for _ in 0..100 {
            let i = rng.gen_range(0..stubs.len());
            let j = rng.gen_range(0..stubs.len());
            let (a, b) = (stubs[i], stubs[j]);
            if i == j || a == b || adj[a][b] {
                continue;
            }
            adj[a][b] = true;
            adj[b][a] = true;
            edges.push((a.min(b), a.max(b)));
            let (hi, lo) = (i.max(j), i.min(j));
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
            placed = true;
            break;
        }
        if !placed {
            return None;
        }
    }
    edges.sort_unstable();
    Some(Graph { n, edges })
}
