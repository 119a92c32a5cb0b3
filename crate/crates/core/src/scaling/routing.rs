use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Greedy layer assignment for subcircuits given by the wires they touch.
/// Fails unless every subcircuit touches at most `k` wires and every wire is
/// touched by at most `k` subcircuits. Uses at most `k(k-1)+1` layers.
pub fn color_layers(subcircuits: &[Vec<usize>], k: usize) -> Result<Vec<usize>> {
    let mut users: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, s) in subcircuits.iter().enumerate() {
        if s.len() > k {
            return Err(Error::InvalidArgument(format!("subcircuit {i} touches {} > {k} wires", s.len())));
        }
        for &w in s {
            users.entry(w).or_default().push(i);
        }
    }
    if let Some((w, u)) = users.iter().find(|(_, u)| u.len() > k) {
        return Err(Error::InvalidArgument(format!("wire {w} is used by {} > {k} subcircuits", u.len())));
    }
    let mut color = vec![usize::MAX; subcircuits.len()];
    for i in 0..subcircuits.len() {
        let mut taken: Vec<usize> = subcircuits[i]
            .iter()
            .flat_map(|w| users[w].iter())
            .filter(|&&j| j != i && color[j] != usize::MAX)
            .map(|&j| color[j])
            .collect();
        taken.sort_unstable();
        taken.dedup();
        color[i] = (0..).find(|c| taken.binary_search(c).is_err()).unwrap();
    }
    Ok(color)
}

/// Layers of disjoint nearest-neighbour swaps on a grid.
/// Cells are indexed row-major with the first side slowest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapNetwork {
    pub sides: Vec<usize>,
    pub layers: Vec<Vec<(usize, usize)>>,
}

impl SwapNetwork {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn swap_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Contents of every cell after the network runs.
    pub fn apply<T: Clone>(&self, cells: &[T]) -> Vec<T> {
        let mut v = cells.to_vec();
        for layer in &self.layers {
            for &(a, b) in layer {
                v.swap(a, b);
            }
        }
        v
    }

    /// Every swap joins grid neighbours and no cell is used twice in a layer.
    pub fn is_valid(&self) -> bool {
        let n: usize = self.sides.iter().product();
        self.layers.iter().all(|layer| {
            let mut used = vec![false; n];
            layer.iter().all(|&(a, b)| {
                let ok = a < n && b < n && !used[a] && !used[b] && adjacent(&self.sides, a, b);
                if ok {
                    used[a] = true;
                    used[b] = true;
                }
                ok
            })
        })
    }
}

pub fn coords(sides: &[usize], mut idx: usize) -> Vec<usize> {
    let mut c = vec![0; sides.len()];
    for a in (0..sides.len()).rev() {
        c[a] = idx % sides[a];
        idx /= sides[a];
    }
    c
}

pub fn index(sides: &[usize], c: &[usize]) -> usize {
    c.iter().zip(sides).fold(0, |acc, (&x, &s)| acc * s + x)
}

fn adjacent(sides: &[usize], a: usize, b: usize) -> bool {
    let (ca, cb) = (coords(sides, a), coords(sides, b));
    ca.iter().zip(&cb).map(|(x, y)| x.abs_diff(*y)).sum::<usize>() == 1
}

/// Swap network sending the token at cell `i` to cell `perm[i]`.
/// Depth is at most `2 s_0 + 2 s_1 + ... + s_last`.
pub fn route_permutation(sides: &[usize], perm: &[usize]) -> Result<SwapNetwork> {
    if sides.is_empty() || sides.contains(&0) {
        return Err(Error::InvalidArgument("grid sides must be positive".into()));
    }
    let n: usize = sides.iter().product();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidArgument(format!("not a permutation of {n} cells")));
    }
    let cells: Vec<usize> = (0..n).collect();
    // a token is named by its destination
    let mut tok = perm.to_vec();
    let mut layers = route(sides, &cells, &mut tok, &|t| t);
    layers.retain(|l| !l.is_empty());
    Ok(SwapNetwork { sides: sides.to_vec(), layers })
}

type Layers = Vec<Vec<(usize, usize)>>;

/// Merge layer lists acting on disjoint cells.
fn merge(into: &mut Layers, from: Layers) {
    if into.len() < from.len() {
        into.resize(from.len(), Vec::new());
    }
    for (t, l) in from.into_iter().enumerate() {
        into[t].extend(l);
    }
}

/// Route tokens within the sub-grid `cells` (row-major, shape `sides`);
/// `target(token)` is the token's goal as an index into `cells`.
fn route(sides: &[usize], cells: &[usize], tok: &mut [usize], target: &dyn Fn(usize) -> usize) -> Layers {
    if sides.len() == 1 {
        return route_line(cells, tok, target);
    }
    let s0 = sides[0];
    let r: usize = sides[1..].iter().product();
    let line = |rho: usize| -> Vec<usize> { (0..s0).map(|c| cells[c * r + rho]).collect() };

    // The (source line, goal line) multigraph is s0-regular; each perfect
    // matching of a decomposition picks the tokens for one hyperplane.
    let mut cnt = vec![vec![0usize; r]; r];
    for rho in 0..r {
        for g in line(rho) {
            cnt[rho][target(tok[g]) % r] += 1;
        }
    }
    let mut row: HashMap<usize, usize> = HashMap::new();
    for i in 0..s0 {
        let m = perfect_matching(&cnt);
        for rho in 0..r {
            cnt[rho][m[rho]] -= 1;
            let t = line(rho)
                .into_iter()
                .map(|g| tok[g])
                .find(|t| !row.contains_key(t) && target(*t) % r == m[rho])
                .expect("matching edge has a token");
            row.insert(t, i);
        }
    }

    let mut layers = Layers::new();
    let mut phase = Layers::new();
    for rho in 0..r {
        merge(&mut phase, route_line(&line(rho), tok, &|t| row[&t]));
    }
    layers.extend(phase);
    let mut phase = Layers::new();
    for i in 0..s0 {
        let plane = &cells[i * r..(i + 1) * r];
        merge(&mut phase, route(&sides[1..], plane, tok, &|t| target(t) % r));
    }
    layers.extend(phase);
    let mut phase = Layers::new();
    for rho in 0..r {
        merge(&mut phase, route_line(&line(rho), tok, &|t| target(t) / r));
    }
    layers.extend(phase);
    layers
}

/// Odd-even transposition sort along a line.
fn route_line(cells: &[usize], tok: &mut [usize], target: &dyn Fn(usize) -> usize) -> Layers {
    let mut layers = Layers::new();
    let mut round = 0;
    let key = |tok: &[usize], j: usize| target(tok[cells[j]]);
    while (1..cells.len()).any(|j| key(tok, j - 1) > key(tok, j)) {
        let mut layer = Vec::new();
        let mut j = round % 2;
        while j + 1 < cells.len() {
            if key(tok, j) > key(tok, j + 1) {
                tok.swap(cells[j], cells[j + 1]);
                layer.push((cells[j], cells[j + 1]));
            }
            j += 2;
        }
        if !layer.is_empty() {
            layers.push(layer);
        }
        round += 1;
    }
    layers
}
/// Perfect matching in the support of a regular bipartite multigraph, by augmenting paths.
fn perfect_matching(cnt: &[Vec<usize>]) -> Vec<usize> {
    let r = cnt.len();
    let mut match_right = vec![usize::MAX; r];
    fn augment(u: usize, cnt: &[Vec<usize>], seen: &mut [bool], match_right: &mut [usize]) -> bool {
        for v in 0..cnt.len() {
            if cnt[u][v] > 0 && !seen[v] {
                seen[v] = true;
                if match_right[v] == usize::MAX || augment(match_right[v], cnt, seen, match_right) {
                    match_right[v] = u;
                    return true;
                }
            }
        }
        false
    }
    for u in 0..r {
        let mut seen = vec![false; r];
        assert!(augment(u, cnt, &mut seen, &mut match_right), "regular multigraph has a perfect matching");
    }
    let mut m = vec![0; r];
    for (v, &u) in match_right.iter().enumerate() {
        m[u] = v;
    }
    m
}
