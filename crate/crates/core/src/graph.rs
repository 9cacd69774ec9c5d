//! Directed n-graphs without tadpoles, cycle machinery, the cocomposition
//! maps Δ^{m_1…m_n}, externally connected sets, and the symmetric group
//! action on graphs.
//!
//! Vertices are 1-indexed. The edge list is a multiset: parallel and
//! opposite edges are allowed, loops (tadpoles) are not. Graphs compare by
//! their sorted edge lists; they are never identified up to isomorphism.

use crate::lambda::{Mono, SPoly, Var};
use crate::perm::Perm;
use crate::scalar::Scalar;
use std::fmt;

/// A directed graph on vertices {1,…,n} with a multiset of edges i→j, i ≠ j.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl DiGraph {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> DiGraph {
        for &(a, b) in &edges {
            assert!(a != b, "tadpole {}->{}", a, b);
            assert!(a >= 1 && a <= n && b >= 1 && b <= n, "vertex out of range");
        }
        edges.sort();
        DiGraph { n, edges }
    }

    pub fn edgeless(n: usize) -> DiGraph {
        DiGraph { n, edges: Vec::new() }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// True iff the underlying undirected multigraph has no cycle; parallel
    /// or opposite edges between the same pair already form one.
    pub fn is_acyclic(&self) -> bool {
        // union-find; a cycle appears exactly when an edge joins two vertices
        // already in the same component
        let mut parent: Vec<usize> = (0..=self.n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for &(a, b) in &self.edges {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// All minimal oriented cycles: closed directed edge sequences
    /// i_1→i_2→…→i_s→i_1 without repeated edges and without revisiting an
    /// intermediate vertex. Each cycle is reported once, as a sorted list of
    /// edge positions into `edges()`.
    pub fn oriented_cycles(&self) -> Vec<Vec<usize>> {
        let mut found: Vec<Vec<usize>> = Vec::new();
        let m = self.edges.len();
        // DFS over edge paths starting at each vertex; only keep cycles whose
        // smallest vertex is the start, to avoid rotations.
        for start in 1..=self.n {
            let mut used = vec![false; m];
            let mut path: Vec<usize> = Vec::new();
            self.cycle_dfs(start, start, &mut used, &mut path, &mut found);
        }
        found.sort();
        found.dedup();
        found
    }

    fn cycle_dfs(
        &self,
        start: usize,
        at: usize,
        used: &mut Vec<bool>,
        path: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        for (idx, &(a, b)) in self.edges.iter().enumerate() {
            if a != at || used[idx] {
                continue;
            }
            if b == start {
                let mut c: Vec<usize> = path.iter().cloned().chain(std::iter::once(idx)).collect();
                c.sort();
                found.push(c);
                continue;
            }
            if b < start || path.iter().any(|&e| self.edges[e].0 == b) {
                continue;
            }
            used[idx] = true;
            path.push(idx);
            self.cycle_dfs(start, b, used, path, found);
            path.pop();
            used[idx] = false;
        }
    }

    /// Remove one edge (by position in `edges()`).
    pub fn without_edge(&self, idx: usize) -> DiGraph {
        let mut edges = self.edges.clone();
        edges.remove(idx);
        DiGraph { n: self.n, edges }
    }

    /// Relabel vertices by σ: the vertex labelled v becomes σ(v). Left action.
    pub fn relabel(&self, sigma: &Perm) -> DiGraph {
        assert_eq!(sigma.len(), self.n, "arity mismatch");
        DiGraph::new(
            self.n,
            self.edges
                .iter()
                .map(|&(a, b)| (sigma.apply(a), sigma.apply(b)))
                .collect(),
        )
    }

    /// Reverse every descending edge to ascending orientation, accumulating
    /// one sign flip per reversal; returns the canonical graph and the sign.
    pub fn canonical_form(&self) -> (DiGraph, i64) {
        let mut sign = 1i64;
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                if a > b {
                    sign = -sign;
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        (DiGraph::new(self.n, edges), sign)
    }

    /// Is every edge oriented i→j with i < j?
    pub fn is_canonical(&self) -> bool {
        self.edges.iter().all(|&(a, b)| a < b)
    }

    /// Text form `n; a->b, c->d, ...` used by reports and fixtures.
    pub fn to_text(&self) -> String {
        let mut s = format!("{};", self.n);
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            s.push_str(&format!(" {}->{}", a, b));
        }
        s
    }

    /// Parse the text form produced by `to_text`.
    pub fn from_text(s: &str) -> Result<DiGraph, String> {
        let (head, rest) = s.split_once(';').ok_or("missing ';'")?;
        let n: usize = head.trim().parse().map_err(|_| "bad vertex count")?;
        let mut edges = Vec::new();
        for part in rest.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (a, b) = part.split_once("->").ok_or(format!("bad edge '{}'", part))?;
            let a: usize = a.trim().parse().map_err(|_| "bad edge tail")?;
            let b: usize = b.trim().parse().map_err(|_| "bad edge head")?;
            if a == b || a < 1 || b < 1 || a > n || b > n {
                return Err(format!("bad edge {}->{}", a, b));
            }
            edges.push((a, b));
        }
        Ok(DiGraph::new(n, edges))
    }
}

impl fmt::Display for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// The cocomposition Δ^{m_1…m_n}(Γ): the collapsed graph Δ_0 ∈ G(n) and the
/// relabelled block subgraphs Δ_i ∈ G(m_i), together with the block layout.
#[derive(Clone, Debug)]
pub struct Cocomp {
    pub delta0: DiGraph,
    pub blocks: Vec<DiGraph>,
    /// Block sizes m_1..m_n.
    pub sizes: Vec<usize>,
    /// offsets[i] = m_1 + … + m_i, with offsets[0] = 0.
    pub offsets: Vec<usize>,
    /// For every edge of Γ: `External(pos)` with its position in Δ_0's edge
    /// list, or `Internal(i, pos)` with its position in Δ_i's edge list.
    pub edge_images: Vec<EdgeImage>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeImage {
    External(usize),
    Internal(usize, usize),
}

impl Cocomp {
    /// Which block (1-based) a Γ-vertex belongs to.
    pub fn block_of(&self, v: usize) -> usize {
        let mut i = 1;
        while self.offsets[i] < v {
            i += 1;
        }
        i
    }
}

/// Compute the cocomposition of Γ along block sizes m_1..m_n (Σm_i = |V(Γ)|).
pub fn cocompose(gamma: &DiGraph, sizes: &[usize]) -> Cocomp {
    let total: usize = sizes.iter().sum();
    assert_eq!(total, gamma.num_vertices(), "block sizes inconsistent");
    let n = sizes.len();
    let mut offsets = vec![0usize; n + 1];
    for i in 0..n {
        offsets[i + 1] = offsets[i] + sizes[i];
    }
    let block_of = |v: usize| -> usize {
        let mut i = 1;
        while offsets[i] < v {
            i += 1;
        }
        i
    };
    let mut d0_edges: Vec<(usize, usize)> = Vec::new();
    let mut block_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    // classify edges, remembering which original edge produced which image
    let mut images_raw: Vec<(bool, usize, (usize, usize))> = Vec::new();
    for &(a, b) in gamma.edges() {
        let (ba, bb) = (block_of(a), block_of(b));
        if ba == bb {
            let e = (a - offsets[ba - 1], b - offsets[ba - 1]);
            block_edges[ba - 1].push(e);
            images_raw.push((false, ba - 1, e));
        } else {
            d0_edges.push((ba, bb));
            images_raw.push((true, 0, (ba, bb)));
        }
    }
    let delta0 = DiGraph::new(n, d0_edges);
    let blocks: Vec<DiGraph> = block_edges
        .iter()
        .enumerate()
        .map(|(i, es)| DiGraph::new(sizes[i], es.clone()))
        .collect();
    // resolve positions in the sorted edge lists, consuming duplicates in order
    let mut d0_used = vec![false; delta0.num_edges()];
    let mut blk_used: Vec<Vec<bool>> = blocks.iter().map(|b| vec![false; b.num_edges()]).collect();
    let edge_images = images_raw
        .into_iter()
        .map(|(external, i, e)| {
            if external {
                let pos = delta0
                    .edges()
                    .iter()
                    .enumerate()
                    .position(|(k, &f)| f == e && !d0_used[k])
                    .unwrap();
                d0_used[pos] = true;
                EdgeImage::External(pos)
            } else {
                let pos = blocks[i]
                    .edges()
                    .iter()
                    .enumerate()
                    .position(|(k, &f)| f == e && !blk_used[i][k])
                    .unwrap();
                blk_used[i][pos] = true;
                EdgeImage::Internal(i, pos)
            }
        })
        .collect();
    Cocomp { delta0, blocks, sizes: sizes.to_vec(), offsets, edge_images }
}

/// The externally connected set 𝓔(k) ⊂ {1,…,n}: block indices j joined to
/// block(k) by an unoriented edge-path of Δ_0 whose edge at block(k) is the
/// image of a Γ-edge incident to k. Computed as connectivity in Δ_0 minus
/// that edge, starting from its far endpoint.
pub fn externally_connected(gamma: &DiGraph, co: &Cocomp, k: usize) -> Vec<usize> {
    let n = co.delta0.num_vertices();
    let bk = co.block_of(k);
    let mut member = vec![false; n + 1];
    for (pos, &(a, b)) in gamma.edges().iter().enumerate() {
        if a != k && b != k {
            continue;
        }
        let e = match co.edge_images[pos] {
            EdgeImage::External(p) => p,
            EdgeImage::Internal(..) => continue,
        };
        let (da, db) = co.delta0.edges()[e];
        let far = if da == bk { db } else { da };
        // reach everything connected to `far` in Δ_0 without the seed edge
        let mut seen = vec![false; n + 1];
        seen[far] = true;
        let mut stack = vec![far];
        while let Some(v) = stack.pop() {
            for (q, &(x, y)) in co.delta0.edges().iter().enumerate() {
                if q == e {
                    continue;
                }
                let w = if x == v {
                    y
                } else if y == v {
                    x
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        for v in 1..=n {
            if seen[v] {
                member[v] = true;
            }
        }
    }
    (1..=n).filter(|&v| member[v]).collect()
}

/// X(k) = Σ_{j ∈ 𝓔(k)} x_j as a scalar polynomial in the slot variables.
pub fn x_sum(gamma: &DiGraph, co: &Cocomp, k: usize) -> SPoly {
    let mut p = SPoly::zero();
    for j in externally_connected(gamma, co, k) {
        p.sadd_term(Mono::var(Var::Aux(j as u16 - 1)), Scalar::one());
    }
    p
}

/// All acyclic graphs on n vertices with exactly r edges, every edge in
/// canonical ascending orientation. Hard-capped at n ≤ 5 by default because
/// the counts grow super-exponentially.
pub fn acyclic_canonical_graphs(n: usize, r: usize, cap: usize) -> Vec<DiGraph> {
    assert!(n <= cap.max(5), "vertex count exceeds enumeration cap");
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|a| ((a + 1)..=n).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(
        pairs: &[(usize, usize)],
        from: usize,
        r: usize,
        n: usize,
        pick: &mut Vec<(usize, usize)>,
        out: &mut Vec<DiGraph>,
    ) {
        if pick.len() == r {
            let g = DiGraph::new(n, pick.clone());
            if g.is_acyclic() {
                out.push(g);
            }
            return;
        }
        for i in from..pairs.len() {
            pick.push(pairs[i]);
            rec(pairs, i + 1, r, n, pick, out);
            pick.pop();
        }
    }
    rec(&pairs, 0, r, n, &mut pick, &mut out);
    out
}

/// All acyclic canonical graphs on n vertices with at most `max_edges` edges.
pub fn acyclic_canonical_graphs_upto(n: usize, max_edges: usize) -> Vec<DiGraph> {
    (0..=max_edges.min(n.saturating_sub(1)))
        .flat_map(|r| acyclic_canonical_graphs(n, r, 5))
        .collect()
}
