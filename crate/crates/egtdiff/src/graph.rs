//! Network generation, edge-list loading, and degree statistics.
//!
//! Graphs are simple and undirected, with dense node ids `0..n` and
//! array-backed adjacency lists so the simulation hot loops stay
//! index-addressed. Generators are deterministic given their RNG.

use std::collections::HashMap;
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Simple undirected graph over node ids `0..n`.
#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    fn with_nodes(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    fn add_edge(&mut self, a: u32, b: u32) {
        self.adj[a as usize].push(b);
        self.adj[b as usize].push(a);
        self.edge_count += 1;
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adj[node].len()
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.adj[node]
    }

    pub fn mean_degree(&self) -> f64 {
        if self.adj.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.adj.len() as f64
        }
    }

    /// Iterates every edge once as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, nbrs)| {
            nbrs.iter()
                .filter(move |&&b| (a as u32) < b)
                .map(move |&b| (a as u32, b))
        })
    }

    /// Whether every node can reach every other node.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w as usize);
                }
            }
        }
        count == n
    }
}

/// Empirical degree distribution with its first two moments.
#[derive(Debug, Clone)]
pub struct DegreeProfile {
    /// Sorted `(degree, probability)` pairs with positive probability.
    pub support: Vec<(usize, f64)>,
    pub mean: f64,
    pub mean_sq: f64,
}

impl DegreeProfile {
    /// Builds a profile from explicit degree weights; weights are normalized.
    pub fn from_weights(weights: &[(usize, f64)]) -> Result<Self> {
        let total: f64 = weights.iter().map(|(_, w)| w).sum();
        if !(total > 0.0) {
            return Err(Error::arg("degree weights must have positive total"));
        }
        let mut support: Vec<(usize, f64)> = weights
            .iter()
            .filter(|(_, w)| *w > 0.0)
            .map(|&(k, w)| (k, w / total))
            .collect();
        support.sort_by_key(|&(k, _)| k);
        let mean = support.iter().map(|&(k, p)| k as f64 * p).sum();
        let mean_sq = support.iter().map(|&(k, p)| (k as f64).powi(2) * p).sum();
        Ok(Self {
            support,
            mean,
            mean_sq,
        })
    }

    /// Mean degree of a node reached by following a uniformly random edge,
    /// i.e. the mean of the size-biased distribution `k * p(k) / mean`.
    /// Always at least the plain mean degree.
    pub fn neighbor_degree_mean(&self) -> Result<f64> {
        if self.mean <= 0.0 {
            return Err(Error::domain(
                "neighbor degree mean undefined for zero mean degree",
            ));
        }
        Ok(self.mean_sq / self.mean)
    }
}

/// Empirical degree profile of a graph.
pub fn degree_profile(graph: &Graph) -> Result<DegreeProfile> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::arg("degree profile of an empty graph"));
    }
    let mut counts: HashMap<usize, f64> = HashMap::new();
    for v in 0..n {
        *counts.entry(graph.degree(v)).or_insert(0.0) += 1.0;
    }
    let weights: Vec<(usize, f64)> = counts.into_iter().collect();
    DegreeProfile::from_weights(&weights)
}

/// Complete graph on `n >= 2` nodes.
pub fn gen_complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::arg(format!("complete graph needs n >= 2, got {n}")));
    }
    let mut g = Graph::with_nodes(n);
    for a in 0..n as u32 {
        for b in (a + 1)..n as u32 {
            g.add_edge(a, b);
        }
    }
    Ok(g)
}

/// Random k-regular graph via the pairing model with retries.
///
/// Stubs are shuffled and matched; a matching that produces a self-loop or a
/// duplicate edge is discarded and re-drawn, up to 100 attempts.
/// Connectivity is not guaranteed (check with [`Graph::is_connected`]).
pub fn gen_regular(n: usize, k: usize, rng: &mut impl Rng) -> Result<Graph> {
    if k >= n {
        return Err(Error::arg(format!(
            "regular degree k={k} must be below the node count n={n}"
        )));
    }
    if n * k % 2 != 0 {
        return Err(Error::arg(format!(
            "n*k must be even to pair stubs, got n={n}, k={k}"
        )));
    }
    if k == 0 {
        return Ok(Graph::with_nodes(n));
    }
    if k == n - 1 {
        return gen_complete(n);
    }

    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat(v).take(k)).collect();
    'attempt: for _ in 0..100 {
        stubs.shuffle(rng);
        let mut seen = std::collections::HashSet::with_capacity(n * k / 2);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue 'attempt;
            }
            if !seen.insert((a.min(b), a.max(b))) {
                continue 'attempt;
            }
        }
        let mut g = Graph::with_nodes(n);
        for pair in stubs.chunks_exact(2) {
            g.add_edge(pair[0], pair[1]);
        }
        return Ok(g);
    }
    Err(Error::Internal(format!(
        "pairing model failed to produce a simple {k}-regular graph on {n} nodes in 100 attempts"
    )))
}

/// Erdős–Rényi graph G(n, p) with `p = target_mean_degree / (n - 1)`.
///
/// Uses geometric skipping over the pair sequence, so the cost is linear in
/// nodes plus realized edges.
pub fn gen_er(n: usize, target_mean_degree: f64, rng: &mut impl Rng) -> Result<Graph> {
    if n < 2 {
        return Err(Error::arg(format!("ER graph needs n >= 2, got {n}")));
    }
    let p = target_mean_degree / (n as f64 - 1.0);
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::arg(format!(
            "edge probability {p} from mean degree {target_mean_degree} not in [0, 1]"
        )));
    }
    let mut g = Graph::with_nodes(n);
    if p == 0.0 {
        return Ok(g);
    }
    if p == 1.0 {
        return gen_complete(n);
    }

    // Skip-sampling: jump over non-edges with geometric gaps.
    let log_q = (1.0 - p).ln();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen_range(f64::EPSILON..1.0);
        w += 1 + (r.ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            g.add_edge(w as u32, v as u32);
        }
    }
    Ok(g)
}

/// Barabási–Albert preferential attachment: grow from a complete seed on
/// `m + 1` nodes, each new node attaching `m` edges to existing nodes chosen
/// proportionally to degree (without duplicates).
pub fn gen_ba(n: usize, m: usize, rng: &mut impl Rng) -> Result<Graph> {
    if m < 1 {
        return Err(Error::arg("BA attachment count m must be >= 1"));
    }
    if n <= m {
        return Err(Error::arg(format!(
            "BA graph needs n > m, got n={n}, m={m}"
        )));
    }
    let mut g = gen_complete(m + 1)?;
    g.adj.resize(n, Vec::new());

    // One entry per edge endpoint: sampling uniformly from it is
    // degree-proportional sampling.
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * (m * (m + 1) / 2 + (n - m - 1) * m));
    for (v, nbrs) in g.adj.iter().enumerate() {
        for _ in 0..nbrs.len() {
            endpoints.push(v as u32);
        }
    }

    let mut targets: Vec<u32> = Vec::with_capacity(m);
    for v in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let candidate = endpoints[rng.gen_range(0..endpoints.len())];
            if candidate != v as u32 && !targets.contains(&candidate) {
                targets.push(candidate);
            }
        }
        for &t in &targets {
            g.add_edge(v as u32, t);
            endpoints.push(v as u32);
            endpoints.push(t);
        }
    }
    Ok(g)
}

/// Outcome counters of [`load_edge_list`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub lines_read: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

/// Loads a whitespace-separated edge list (`a b` per line, `#` comments).
///
/// Node ids are compacted to `0..n` in first-appearance order; self-loops
/// and duplicate edges are dropped and counted.
pub fn load_edge_list(reader: impl BufRead) -> Result<(Graph, LoadStats)> {
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut seen: std::collections::HashSet<(u32, u32)> = std::collections::HashSet::new();
    let mut stats = LoadStats::default();

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        stats.lines_read += 1;
        let mut tokens = body.split_whitespace();
        let mut parse = |tok: Option<&str>| -> Result<u64> {
            let tok = tok.ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected two node ids".into(),
            })?;
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("non-integer token {tok:?}"),
            })
        };
        let a = parse(tokens.next())?;
        let b = parse(tokens.next())?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected exactly two node ids".into(),
            });
        }
        let next_id = ids.len() as u32;
        let ai = *ids.entry(a).or_insert(next_id);
        let next_id = ids.len() as u32;
        let bi = *ids.entry(b).or_insert(next_id);
        if ai == bi {
            stats.self_loops_dropped += 1;
            continue;
        }
        let key = (ai.min(bi), ai.max(bi));
        if seen.insert(key) {
            edges.push(key);
        } else {
            stats.duplicates_dropped += 1;
        }
    }

    if stats.lines_read == 0 {
        return Err(Error::arg("edge list input contains no edges"));
    }
    let mut g = Graph::with_nodes(ids.len());
    for (a, b) in edges {
        g.add_edge(a, b);
    }
    Ok((g, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_simple(g: &Graph) {
        let mut degree_sum = 0;
        for v in 0..g.node_count() {
            degree_sum += g.degree(v);
            let nbrs = g.neighbors(v);
            let mut sorted: Vec<u32> = nbrs.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            assert_eq!(sorted.len(), nbrs.len(), "duplicate edge at node {v}");
            assert!(!nbrs.contains(&(v as u32)), "self-loop at node {v}");
            for &w in nbrs {
                assert!(
                    g.neighbors(w as usize).contains(&(v as u32)),
                    "asymmetric edge {v}-{w}"
                );
            }
        }
        assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn complete_graph_edge_counts() {
        assert_eq!(gen_complete(1000).unwrap().edge_count(), 499_500);
        let k2 = gen_complete(2).unwrap();
        assert_eq!(k2.edge_count(), 1);
        let k3 = gen_complete(3).unwrap();
        assert_relative_eq!(degree_profile(&k3).unwrap().mean, 2.0);
        check_simple(&k3);
        assert!(gen_complete(1).is_err());
    }

    #[test]
    fn regular_graph_has_exact_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = gen_regular(1000, 20, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 10_000);
        assert!((0..1000).all(|v| g.degree(v) == 20));
        check_simple(&g);

        let prof = degree_profile(&g).unwrap();
        assert_relative_eq!(prof.mean, 20.0);
        assert_relative_eq!(prof.mean_sq, 400.0);
    }

    #[test]
    fn regular_graph_argument_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(gen_regular(5, 3, &mut rng).is_err()); // odd n*k
        assert!(gen_regular(4, 4, &mut rng).is_err()); // k >= n
        let k4 = gen_regular(4, 3, &mut rng).unwrap(); // complete graph
        assert_eq!(k4.edge_count(), 6);
    }

    #[test]
    fn er_moments_match_poisson() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = gen_er(5000, 20.0, &mut rng).unwrap();
        check_simple(&g);
        let prof = degree_profile(&g).unwrap();
        // concentration of the empirical mean degree around the target
        assert!(
            (prof.mean - 20.0).abs() <= 3.0 * (20.0f64 / 5000.0).sqrt(),
            "mean degree {} too far from 20",
            prof.mean
        );
        // Poisson second moment: k2 = kbar * (kbar + 1)
        let ratio = prof.mean_sq / (prof.mean * (prof.mean + 1.0));
        assert!((0.95..=1.05).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn er_degenerate_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let empty = gen_er(100, 0.0, &mut rng).unwrap();
        assert_eq!(empty.edge_count(), 0);
        let full = gen_er(100, 99.0, &mut rng).unwrap();
        assert_eq!(full.edge_count(), 99 * 100 / 2);
        assert!(gen_er(100, 120.0, &mut rng).is_err());
    }

    #[test]
    fn ba_growth_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = gen_ba(10_000, 10, &mut rng).unwrap();
        check_simple(&g);
        let prof = degree_profile(&g).unwrap();
        // m edges per added node: mean degree near 2m
        assert!((prof.mean - 20.0).abs() < 0.5, "mean {}", prof.mean);

        // Maximum-likelihood power-law exponent over degrees >= m.
        let min_k = 10.0;
        let (n_tail, log_sum) = (0..g.node_count())
            .map(|v| g.degree(v) as f64)
            .filter(|&k| k >= min_k)
            .fold((0usize, 0.0), |(c, s), k| (c + 1, s + (k / (min_k - 0.5)).ln()));
        let exponent = 1.0 + n_tail as f64 / log_sum;
        assert!(
            (2.5..=3.5).contains(&exponent),
            "fitted exponent {exponent}"
        );

        // seed-only case: initial clique
        let seed = gen_ba(4, 3, &mut rng).unwrap();
        assert_eq!(seed.edge_count(), 6);
        assert!(gen_ba(10, 10, &mut rng).is_err());
    }

    #[test]
    fn edge_list_roundtrip_and_dedup() {
        let input = "# comment\n0 1\n1 0\n2 2\n1 3\n";
        let (g, stats) = load_edge_list(input.as_bytes()).unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(stats.duplicates_dropped, 1);
        assert_eq!(stats.self_loops_dropped, 1);
        check_simple(&g);

        let (tiny, _) = load_edge_list("0 1\n".as_bytes()).unwrap();
        assert_eq!(tiny.node_count(), 2);
        assert_eq!(tiny.edge_count(), 1);
    }

    #[test]
    fn edge_list_errors() {
        let err = load_edge_list("0 1\nfoo 2\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(load_edge_list("".as_bytes()).is_err());
        assert!(load_edge_list("# only comments\n".as_bytes()).is_err());
    }

    #[test]
    fn degree_profile_k4() {
        let prof = degree_profile(&gen_complete(4).unwrap()).unwrap();
        assert_eq!(prof.support, vec![(3, 1.0)]);
        assert_relative_eq!(prof.mean, 3.0);
        assert_relative_eq!(prof.mean_sq, 9.0);
    }

    #[test]
    fn neighbor_degree_mean_values() {
        let regular = DegreeProfile::from_weights(&[(20, 1.0)]).unwrap();
        assert_relative_eq!(regular.neighbor_degree_mean().unwrap(), 20.0);

        let two_point = DegreeProfile::from_weights(&[(1, 0.5), (3, 0.5)]).unwrap();
        assert_relative_eq!(
            two_point.neighbor_degree_mean().unwrap(),
            2.5,
            max_relative = 1e-12
        );

        let zero = DegreeProfile::from_weights(&[(0, 1.0)]);
        assert!(zero.is_err() || zero.unwrap().neighbor_degree_mean().is_err());
    }

    #[test]
    fn size_bias_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let ks: Vec<(usize, f64)> = (1..=6)
                .map(|k| (k, rand::Rng::gen_range(&mut rng, 0.0..1.0)))
                .collect();
            let prof = DegreeProfile::from_weights(&ks).unwrap();
            assert!(prof.neighbor_degree_mean().unwrap() >= prof.mean - 1e-12);
        }
        // equality iff the degree is constant
        let constant = DegreeProfile::from_weights(&[(7, 2.0)]).unwrap();
        assert_relative_eq!(constant.neighbor_degree_mean().unwrap(), constant.mean);
    }

    #[test]
    fn profile_probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = gen_er(2000, 8.0, &mut rng).unwrap();
        let prof = degree_profile(&g).unwrap();
        let total: f64 = prof.support.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(prof.mean_sq >= prof.mean * prof.mean - 1e-9);
    }
}
