//! Partitioning a 3-uniform hypergraph into few stars and matchings of
//! bounded size.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph3 {
    vertices: usize,
    edges: Vec<[usize; 3]>,
}

impl Hypergraph3 {
    /// Rejects edges with a repeated or out-of-range vertex and repeated edges.
    pub fn new(vertices: usize, edges: Vec<[usize; 3]>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for &e in &edges {
            if e.iter().any(|&v| v >= vertices) || e[0] == e[1] || e[0] == e[2] || e[1] == e[2] {
                return Err(Error::BadEdge(e));
            }
            let mut key = e;
            key.sort_unstable();
            if !seen.insert(key) {
                return Err(Error::MultiEdge(e));
            }
        }
        Ok(Hypergraph3 { vertices, edges })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[[usize; 3]] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

fn meet(a: &[usize; 3], b: &[usize; 3]) -> bool {
    a.iter().any(|v| b.contains(v))
}

/// A part of the partition; edges are indices into the hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Part {
    Star { center: usize, edges: Vec<usize> },
    Matching { edges: Vec<usize> },
}

impl Part {
    pub fn edges(&self) -> &[usize] {
        match self {
            Part::Star { edges, .. } | Part::Matching { edges } => edges,
        }
    }

    pub fn is_star(&self) -> bool {
        matches!(self, Part::Star { .. })
    }
}

/// Greedy proper colouring of the listed edges in the given order: each edge
/// takes the least colour unused by earlier edges it meets.
pub fn greedy_edge_colouring(h: &Hypergraph3, order: &[usize]) -> Vec<usize> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); h.vertices];
    let mut colour = vec![usize::MAX; h.len()];
    for &e in order {
        let used: HashSet<usize> = h.edges[e]
            .iter()
            .flat_map(|&v| incident[v].iter().map(|&f| colour[f]))
            .collect();
        colour[e] = (0..).find(|c| !used.contains(c)).expect("unbounded");
        for &v in &h.edges[e] {
            incident[v].push(e);
        }
    }
    order.iter().map(|&e| colour[e]).collect()
}

/// Stars of exactly `r` edges are peeled off while some vertex (lowest id
/// first) still has degree at least `r`, taking its lowest-index edges. The
/// rest is greedily edge-coloured and each colour class cut into matchings of
/// at most `r` edges.
pub fn star_matching_partition(h: &Hypergraph3, r: usize) -> Result<Vec<Part>> {
    if r == 0 {
        return Err(Error::RNonPositive);
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); h.vertices];
    for (i, e) in h.edges.iter().enumerate() {
        for &v in e {
            incident[v].push(i);
        }
    }
    let mut alive = vec![true; h.len()];
    let mut degree: Vec<usize> = incident.iter().map(Vec::len).collect();
    let mut parts = Vec::new();
    let mut v = 0;
    while v < h.vertices {
        if degree[v] < r {
            v += 1;
            continue;
        }
        let star: Vec<usize> = incident[v].iter().copied().filter(|&e| alive[e]).take(r).collect();
        for &e in &star {
            alive[e] = false;
            for &u in &h.edges[e] {
                degree[u] -= 1;
            }
        }
        parts.push(Part::Star { center: v, edges: star });
        // Degrees only drop, so no lower vertex can have reached r.
    }
    let rest: Vec<usize> = (0..h.len()).filter(|&e| alive[e]).collect();
    let colours = greedy_edge_colouring(h, &rest);
    let classes = colours.iter().max().map_or(0, |&c| c + 1);
    let mut by_colour: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (&e, &c) in rest.iter().zip(&colours) {
        by_colour[c].push(e);
    }
    for class in by_colour {
        for chunk in class.chunks(r) {
            parts.push(Part::Matching { edges: chunk.to_vec() });
        }
    }
    Ok(parts)
}

/// Every violated postcondition of a partition, as text; empty when valid.
pub fn check_partition(h: &Hypergraph3, r: usize, parts: &[Part]) -> Vec<String> {
    let mut problems = Vec::new();
    let m = h.len();
    let mut seen = vec![0usize; m];
    for p in parts {
        for &e in p.edges() {
            if e < m {
                seen[e] += 1;
            } else {
                problems.push(format!("edge index {e} out of range"));
            }
        }
    }
    if let Some(e) = seen.iter().position(|&c| c != 1) {
        problems.push(format!("edge {e} covered {} times", seen[e]));
    }
    let stars = parts.iter().filter(|p| p.is_star()).count();
    let matchings = parts.len() - stars;
    if stars * r > m {
        problems.push(format!("{stars} stars exceed m/r = {m}/{r}"));
    }
    if matchings * r > 3 * r * r + m {
        problems.push(format!("{matchings} matchings exceed 3r + m/r"));
    }
    for (i, p) in parts.iter().enumerate() {
        let es = p.edges();
        if es.len() > r {
            problems.push(format!("part {i} has {} > r edges", es.len()));
        }
        if es.iter().any(|&e| e >= m) {
            continue;
        }
        match p {
            Part::Star { center, edges } => {
                if edges.iter().any(|&e| !h.edges[e].contains(center)) {
                    problems.push(format!("star {i} has an edge missing its centre"));
                }
            }
            Part::Matching { edges } => {
                for (a, &e) in edges.iter().enumerate() {
                    if edges[a + 1..].iter().any(|&f| meet(&h.edges[e], &h.edges[f])) {
                        problems.push(format!("matching {i} has intersecting edges"));
                        break;
                    }
                }
            }
        }
    }
    problems
}
