//! Directed pulse-delivery graphs.
//!
//! An edge `(i, j)` means oscillator `j` hears the pulses of oscillator `i`.

use std::collections::VecDeque;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    out_edges: Vec<Vec<usize>>,
}

impl Graph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Recipients of oscillator `i`'s pulses, ascending.
    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out_edges[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_edges[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_edges.iter().enumerate().flat_map(|(i, out)| out.iter().map(move |&j| (i, j)))
    }

    pub fn all_to_all(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("a network needs at least one oscillator".into()));
        }
        let out_edges = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
        Ok(Graph { n, out_edges })
    }

    /// Bidirectional ring.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph(format!("a ring needs at least 2 oscillators, got {n}")));
        }
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| {
                let next = (i + 1) % n;
                [(i, next), (next, i)]
            })
            .collect();
        Self::from_edges(n, &edges)
    }

    /// Build from zero-based `(sender, recipient)` pairs. Duplicates are dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("a network needs at least one oscillator".into()));
        }
        let mut out_edges = vec![Vec::new(); n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("edge ({i}, {j}) references an oscillator outside 0..{n}")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-edge on oscillator {i}")));
            }
            out_edges[i].push(j);
        }
        for out in &mut out_edges {
            out.sort_unstable();
            out.dedup();
        }
        Ok(Graph { n, out_edges })
    }

    pub fn is_strongly_connected(&self) -> bool {
        let forward = reachable_from(0, self.n, |i| self.out_edges[i].clone());
        if forward.iter().any(|r| !r) {
            return false;
        }
        let mut reversed = vec![Vec::new(); self.n];
        for (i, j) in self.edges() {
            reversed[j].push(i);
        }
        reachable_from(0, self.n, |i| reversed[i].clone()).into_iter().all(|r| r)
    }
}

fn reachable_from(start: usize, n: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(i) = queue.pop_front() {
        for j in next(i) {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen
}

/// Parse the edge-list text format: one whitespace-separated `i j` pair per
/// line with one-based indices. Blank lines and `#` comments are skipped.
pub fn parse_edge_list(n: usize, text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || Error::InvalidGraph(format!("line {}: expected `i j`, got {raw:?}", lineno + 1));
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad());
        };
        let a: usize = a.parse().map_err(|_| bad())?;
        let b: usize = b.parse().map_err(|_| bad())?;
        if a == 0 || b == 0 {
            return Err(Error::InvalidGraph(format!("line {}: indices are 1-based", lineno + 1)));
        }
        edges.push((a - 1, b - 1));
    }
    Graph::from_edges(n, &edges)
}

pub fn read_edge_list(n: usize, path: &Path) -> Result<Graph> {
    parse_edge_list(n, &std::fs::read_to_string(path)?)
}

/// Render in the edge-list text format.
pub fn format_edge_list(g: &Graph) -> String {
    g.edges().map(|(i, j)| format!("{} {}\n", i + 1, j + 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn edge_set(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    /// Warshall transitive closure.
    fn closure_connected(n: usize, edges: &[(usize, usize)]) -> bool {
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in edges {
            reach[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        reach.iter().all(|row| row.iter().all(|&r| r))
    }

    #[test]
    fn all_to_all_examples() {
        assert_eq!(edge_set(&Graph::all_to_all(2).unwrap()), vec![(0, 1), (1, 0)]);
        assert_eq!(Graph::all_to_all(6).unwrap().edge_count(), 30);
        assert_eq!(Graph::all_to_all(1).unwrap().edge_count(), 0);
        assert!(Graph::all_to_all(0).is_err());
    }

    #[test]
    fn ring_examples() {
        assert_eq!(Graph::ring(3).unwrap().edge_count(), 6);
        assert_eq!(Graph::ring(6).unwrap().edge_count(), 12);
        assert_eq!(edge_set(&Graph::ring(2).unwrap()), vec![(0, 1), (1, 0)]);
        assert!(Graph::ring(1).is_err());
    }

    #[test]
    fn from_edges_examples() {
        let cycle = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(cycle.edge_count(), 3);
        assert!(cycle.is_strongly_connected());

        let one_way = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(!one_way.is_strongly_connected());

        let dup = Graph::from_edges(3, &[(0, 1), (0, 1), (1, 0), (1, 2), (2, 1)]).unwrap();
        assert_eq!(dup.edge_count(), 4);

        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn connectivity_examples() {
        assert!(Graph::all_to_all(6).unwrap().is_strongly_connected());
        assert!(Graph::all_to_all(1).unwrap().is_strongly_connected());
    }

    #[test]
    fn edge_list_parsing() {
        let g = parse_edge_list(3, "# cycle\n1 2\n2 3\n\n3 1  # back\n").unwrap();
        assert_eq!(edge_set(&g), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(format_edge_list(&g), "1 2\n2 3\n3 1\n");
        assert!(parse_edge_list(3, "1 2 3\n").is_err());
        assert!(parse_edge_list(3, "0 1\n").is_err());
        assert!(parse_edge_list(3, "1 x\n").is_err());
        assert!(parse_edge_list(2, "1 3\n").is_err());
    }

    #[test]
    fn standard_topologies_connected() {
        for n in 1..10 {
            assert!(Graph::all_to_all(n).unwrap().is_strongly_connected());
            if n >= 2 {
                assert!(Graph::ring(n).unwrap().is_strongly_connected());
            }
        }
    }

    proptest! {
        #[test]
        fn connectivity_matches_closure(n in 1usize..=6, bits in prop::collection::vec(any::<bool>(), 36)) {
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j && bits[i * 6 + j])
                .collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            prop_assert_eq!(g.is_strongly_connected(), closure_connected(n, &edges));
        }
    }
}
