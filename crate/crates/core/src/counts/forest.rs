//! Partitioning edges into `k` forests by matroid-union augmentation.

use std::collections::VecDeque;

/// Incremental union of `k` graphic matroids on a fixed vertex set.
#[derive(Clone, Debug)]
pub struct ForestPacking {
    vertex_count: usize,
    forests: usize,
    ends: Vec<(usize, usize)>,
    owner: Vec<Option<usize>>,
}

impl ForestPacking {
    pub fn new(vertex_count: usize, forests: usize) -> Self {
        Self {
            vertex_count,
            forests,
            ends: Vec::new(),
            owner: Vec::new(),
        }
    }

    /// Forest index of each inserted edge, or `None` if it was rejected.
    pub fn owners(&self) -> &[Option<usize>] {
        &self.owner
    }

    /// Tries to add an edge, rearranging earlier edges along a shortest
    /// augmenting path. On failure returns the vertex set of a subgraph with
    /// more than `k(|U| − 1)` edges among those inserted plus this one.
    pub fn insert(&mut self, tail: usize, head: usize) -> Result<usize, Vec<usize>> {
        let x = self.ends.len();
        self.ends.push((tail, head));
        self.owner.push(None);

        let adjacency: Vec<Vec<Vec<(usize, usize)>>> = (0..self.forests).map(|k| self.forest_adjacency(k)).collect();
        // pred[f] = (edge whose insertion into forest k displaces f, k)
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; x + 1];
        let mut labelled = vec![false; x + 1];
        labelled[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(f) = queue.pop_front() {
            let (u, v) = self.ends[f];
            for k in 0..self.forests {
                if self.owner[f] == Some(k) {
                    continue;
                }
                match tree_path(&adjacency[k], u, v) {
                    None => {
                        self.augment(f, k, &pred);
                        return Ok(x);
                    }
                    Some(path) => {
                        for g in path {
                            if !labelled[g] {
                                labelled[g] = true;
                                pred[g] = Some((f, k));
                                queue.push_back(g);
                            }
                        }
                    }
                }
            }
        }
        self.owner[x] = None;
        Err(self.blocking_component(x, &labelled))
    }

    fn augment(&mut self, mut f: usize, mut k: usize, pred: &[Option<(usize, usize)>]) {
        loop {
            self.owner[f] = Some(k);
            match pred[f] {
                Some((p, forest)) => {
                    f = p;
                    k = forest;
                }
                None => break,
            }
        }
    }

    fn forest_adjacency(&self, k: usize) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            if self.owner[e] == Some(k) {
                adj[a].push((e, b));
                adj[b].push((e, a));
            }
        }
        adj
    }

    /// Vertices of the component containing `x` in the graph of labelled edges.
    fn blocking_component(&self, x: usize, labelled: &[bool]) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            if labelled[e] {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let start = self.ends[x].0;
        let mut seen = vec![false; self.vertex_count];
        seen[start] = true;
        let mut out = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Edge indices on the forest path from `u` to `v`, or `None` if they are in
/// different trees.
fn tree_path(adj: &[Vec<(usize, usize)>], u: usize, v: usize) -> Option<Vec<usize>> {
    if u == v {
        return Some(Vec::new());
    }
    let mut back: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[u] = true;
    let mut queue = VecDeque::from([u]);
    while let Some(a) = queue.pop_front() {
        for &(e, b) in &adj[a] {
            if seen[b] {
                continue;
            }
            seen[b] = true;
            back[b] = Some((e, a));
            if b == v {
                let mut path = Vec::new();
                let mut w = v;
                while let Some((e, prev)) = back[w] {
                    path.push(e);
                    w = prev;
                }
                return Some(path);
            }
            queue.push_back(b);
        }
    }
    None
}
