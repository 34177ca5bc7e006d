//! Finite directed graphs, graph homomorphisms and walks.
//!
//! A graph is a finite vertex set `0..n` with an edge relation. Vertex ids are
//! only meaningful inside the graph that issued them; the tower layer is the
//! one place that gives vertices level-independent names.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Opaque vertex id inside one [`DirectedGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(usize);

impl VertexId {
    pub fn new(index: usize) -> Self {
        VertexId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    edge_count: usize,
}

impl DirectedGraph {
    /// Builds a graph on vertices `0..vertex_count`. Duplicate edges collapse.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut succ = vec![Vec::new(); vertex_count];
        let mut pred = vec![Vec::new(); vertex_count];
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::GraphMismatch(format!(
                    "edge ({u},{v}) leaves vertex set of size {vertex_count}"
                )));
            }
            succ[u].push(v);
            pred[v].push(u);
        }
        let mut edge_count = 0;
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        for list in &succ {
            edge_count += list.len();
        }
        Ok(DirectedGraph {
            succ,
            pred,
            edge_count,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (VertexId(u), VertexId(v))))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.vertex_count()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.succ
            .get(u.0)
            .is_some_and(|list| list.binary_search(&v.0).is_ok())
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.succ[v.0].iter().map(|&w| VertexId(w))
    }

    pub fn predecessors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.pred[v.0].iter().map(|&w| VertexId(w))
    }

    pub fn is_edge_surjective(&self) -> bool {
        self.succ
            .iter()
            .zip(&self.pred)
            .all(|(out, inc)| !out.is_empty() && !inc.is_empty())
    }

    /// DOT rendering with numeric node names, ordered by id.
    pub fn to_dot(&self, name: &str) -> String {
        self.to_dot_with(name, |v| v.to_string())
    }

    /// DOT rendering with a caller-supplied label per vertex.
    pub fn to_dot_with<F>(&self, name: &str, label: F) -> String
    where
        F: Fn(VertexId) -> String,
    {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        for v in self.vertices() {
            let _ = writeln!(out, "  {} [label=\"{}\"];", v.0, label(v));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {} -> {};", u.0, v.0);
        }
        out.push_str("}\n");
        out
    }
}

pub fn check_edge_surjective(g: &DirectedGraph) -> bool {
    g.is_edge_surjective()
}

/// A total vertex map between two graphs. Whether it respects edges is a
/// property checked by [`GraphHom::is_homomorphism`], not a construction
/// requirement, so that the predicates below can reject bad maps.
#[derive(Debug, Clone)]
pub struct GraphHom {
    source: Arc<DirectedGraph>,
    target: Arc<DirectedGraph>,
    vmap: Vec<usize>,
}

impl GraphHom {
    pub fn new(
        source: Arc<DirectedGraph>,
        target: Arc<DirectedGraph>,
        vmap: Vec<usize>,
    ) -> Result<Self> {
        if vmap.len() != source.vertex_count() {
            return Err(Error::GraphMismatch(format!(
                "vertex map has {} entries, source has {} vertices",
                vmap.len(),
                source.vertex_count()
            )));
        }
        if let Some(bad) = vmap.iter().find(|&&w| w >= target.vertex_count()) {
            return Err(Error::GraphMismatch(format!(
                "vertex map sends a vertex to {bad}, target has {} vertices",
                target.vertex_count()
            )));
        }
        Ok(GraphHom {
            source,
            target,
            vmap,
        })
    }

    pub fn identity(g: Arc<DirectedGraph>) -> Self {
        let vmap = (0..g.vertex_count()).collect();
        GraphHom {
            source: g.clone(),
            target: g,
            vmap,
        }
    }

    pub fn source(&self) -> &Arc<DirectedGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DirectedGraph> {
        &self.target
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        VertexId(self.vmap[v.0])
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vmap
    }

    pub fn is_homomorphism(&self) -> bool {
        self.source
            .edges()
            .all(|(u, v)| self.target.has_edge(self.apply(u), self.apply(v)))
    }

    /// Every target edge is the image of some source edge.
    pub fn is_edge_onto(&self) -> bool {
        let image: HashSet<(usize, usize)> = self
            .source
            .edges()
            .map(|(u, v)| (self.vmap[u.0], self.vmap[v.0]))
            .collect();
        self.target
            .edges()
            .all(|(a, b)| image.contains(&(a.0, b.0)))
    }

    fn constant_on(&self, lists: &[Vec<usize>]) -> bool {
        lists.iter().all(|list| match list.split_first() {
            Some((first, rest)) => rest.iter().all(|w| self.vmap[*w] == self.vmap[*first]),
            None => true,
        })
    }
}

fn same_graph(a: &Arc<DirectedGraph>, b: &Arc<DirectedGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `(u,v),(u,v')` edges imply `h(v) = h(v')`.
pub fn check_plus_directional(h: &GraphHom) -> bool {
    h.is_homomorphism() && h.constant_on(&h.source.succ)
}

/// +directional and, symmetrically, `(u,v),(u',v)` edges imply `h(u) = h(u')`.
pub fn check_bidirectional(h: &GraphHom) -> bool {
    check_plus_directional(h) && h.constant_on(&h.source.pred)
}

/// A +directional, edge-surjective homomorphism between edge-surjective graphs.
pub fn check_cover(h: &GraphHom) -> bool {
    h.source.is_edge_surjective()
        && h.target.is_edge_surjective()
        && check_plus_directional(h)
        && h.is_edge_onto()
}

/// `outer ∘ inner`.
pub fn compose(outer: &GraphHom, inner: &GraphHom) -> Result<GraphHom> {
    if !same_graph(&inner.target, &outer.source) {
        return Err(Error::GraphMismatch(
            "inner target is not the outer source".into(),
        ));
    }
    let vmap = inner.vmap.iter().map(|&w| outer.vmap[w]).collect();
    Ok(GraphHom {
        source: inner.source.clone(),
        target: outer.target.clone(),
        vmap,
    })
}

/// Vertex sequence `v_0..v_l` with consecutive pairs joined by edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WalkSeq {
    verts: Vec<VertexId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    Walk,
    Path,
    Cycle,
    Circuit,
}

impl WalkSeq {
    pub fn new(g: &DirectedGraph, verts: Vec<VertexId>) -> Result<Self> {
        let walk = WalkSeq { verts };
        walk.validate(g)?;
        Ok(walk)
    }

    pub fn trivial(v: VertexId) -> Self {
        WalkSeq { verts: vec![v] }
    }

    pub(crate) fn from_raw(verts: Vec<VertexId>) -> Self {
        WalkSeq { verts }
    }

    pub fn validate(&self, g: &DirectedGraph) -> Result<()> {
        if self.verts.is_empty() {
            return Err(Error::InvalidWalk("a walk has at least one vertex".into()));
        }
        if let Some(v) = self.verts.iter().find(|v| !g.contains(**v)) {
            return Err(Error::InvalidWalk(format!("vertex {v} not in graph")));
        }
        for (t, pair) in self.verts.windows(2).enumerate() {
            if !g.has_edge(pair[0], pair[1]) {
                return Err(Error::InvalidWalk(format!(
                    "step {t}: ({},{}) is not an edge",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.verts
    }

    pub fn first(&self) -> VertexId {
        self.verts[0]
    }

    pub fn last(&self) -> VertexId {
        *self.verts.last().expect("walks are non-empty")
    }
}

pub fn map_walk(h: &GraphHom, w: &WalkSeq) -> Result<WalkSeq> {
    w.validate(&h.source)?;
    Ok(WalkSeq {
        verts: w.verts.iter().map(|&v| h.apply(v)).collect(),
    })
}

/// `w1 + w2`: the shared endpoint appears once.
pub fn concat_walks(w1: &WalkSeq, w2: &WalkSeq) -> Result<WalkSeq> {
    if w1.last() != w2.first() {
        return Err(Error::InvalidWalk(format!(
            "endpoint mismatch: {} then {}",
            w1.last(),
            w2.first()
        )));
    }
    let mut verts = w1.verts.clone();
    verts.extend_from_slice(&w2.verts[1..]);
    Ok(WalkSeq { verts })
}

/// Most specific kind. The trivial walk counts as a path.
pub fn classify_walk(w: &WalkSeq) -> WalkKind {
    fn distinct(vs: &[VertexId]) -> bool {
        let mut seen = HashSet::with_capacity(vs.len());
        vs.iter().all(|v| seen.insert(*v))
    }
    let l = w.len();
    if l >= 1 && w.first() == w.last() {
        if distinct(&w.verts[..l]) {
            WalkKind::Circuit
        } else {
            WalkKind::Cycle
        }
    } else if distinct(&w.verts) {
        WalkKind::Path
    } else {
        WalkKind::Walk
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Arc<DirectedGraph> {
        Arc::new(DirectedGraph::new(n, edges.iter().copied()).unwrap())
    }

    fn walk(vs: &[usize]) -> WalkSeq {
        WalkSeq::from_raw(vs.iter().map(|&v| VertexId(v)).collect())
    }

    #[test]
    fn edge_surjectivity() {
        assert!(check_edge_surjective(&g(1, &[(0, 0)])));
        assert!(!check_edge_surjective(&g(2, &[(0, 1)])));
        assert!(check_edge_surjective(&g(3, &[(0, 1), (1, 2), (2, 0)])));
    }

    #[test]
    fn edges_outside_vertex_set_rejected() {
        assert!(DirectedGraph::new(2, [(0, 2)]).is_err());
    }

    #[test]
    fn identity_passes_everything() {
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let id = GraphHom::identity(c3);
        assert!(check_plus_directional(&id));
        assert!(check_bidirectional(&id));
        assert!(check_cover(&id));
    }

    #[test]
    fn fork_to_distinct_targets_is_not_plus_directional() {
        // 0 -> 1, 0 -> 2 mapped onto a 3-cycle with 1 and 2 kept apart.
        let src = g(3, &[(0, 1), (0, 2), (1, 0), (2, 0)]);
        let tgt = g(3, &[(0, 1), (0, 2), (1, 0), (2, 0)]);
        let h = GraphHom::new(src, tgt, vec![0, 1, 2]).unwrap();
        assert!(h.is_homomorphism());
        assert!(!check_plus_directional(&h));
    }

    #[test]
    fn merged_predecessors_break_bidirectionality() {
        // x=0, y=1, a=2, b=3, c=4: a and b both feed c, c feeds x and y.
        let src = g(5, &[(0, 2), (1, 3), (2, 4), (3, 4), (4, 0), (4, 1)]);
        // X=0, A=1, B=2, C=3.
        let tgt = g(4, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 0)]);
        let h = GraphHom::new(src, tgt, vec![0, 0, 1, 2, 3]).unwrap();
        assert!(h.is_homomorphism());
        assert!(check_plus_directional(&h));
        assert!(!check_bidirectional(&h));
    }

    #[test]
    fn subgraph_inclusion_is_not_a_cover() {
        let full = g(2, &[(0, 0), (0, 1), (1, 0)]);
        let sub = g(2, &[(0, 0), (0, 1)]);
        let h = GraphHom::new(sub, full, vec![0, 1]).unwrap();
        assert!(h.is_homomorphism());
        assert!(!check_cover(&h));
    }

    #[test]
    fn non_homomorphism_fails_every_check() {
        let c2 = g(2, &[(0, 1), (1, 0)]);
        let h = GraphHom::new(c2.clone(), c2, vec![0, 0]).unwrap();
        assert!(!h.is_homomorphism());
        assert!(!check_plus_directional(&h));
        assert!(!check_cover(&h));
    }

    #[test]
    fn compose_with_identity() {
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let loop1 = g(1, &[(0, 0)]);
        let h = GraphHom::new(c3.clone(), loop1.clone(), vec![0, 0, 0]).unwrap();
        let left = compose(&GraphHom::identity(loop1), &h).unwrap();
        assert_eq!(left.vertex_map(), h.vertex_map());
        let right = compose(&h, &GraphHom::identity(c3)).unwrap();
        assert_eq!(right.vertex_map(), h.vertex_map());
        assert!(compose(&h, &h).is_err());
    }

    #[test]
    fn concat_and_lengths() {
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let w = WalkSeq::new(&c3, walk(&[0, 1, 2, 0]).verts).unwrap();
        let t = WalkSeq::trivial(VertexId(0));
        assert_eq!(concat_walks(&w, &t).unwrap(), w);
        let w4 = walk(&[0, 1, 2, 0, 1]);
        assert_eq!(concat_walks(&w, &w4).unwrap().len(), 7);
        let twice = concat_walks(&w, &w).unwrap();
        assert_eq!(twice.len(), 6);
        assert_eq!(classify_walk(&twice), WalkKind::Cycle);
        assert!(concat_walks(&w4, &w).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(classify_walk(&walk(&[0, 1, 2])), WalkKind::Path);
        assert_eq!(classify_walk(&walk(&[0, 1, 0])), WalkKind::Circuit);
        assert_eq!(classify_walk(&walk(&[0, 1, 0, 1, 0])), WalkKind::Cycle);
        assert_eq!(classify_walk(&walk(&[0, 1, 0, 1])), WalkKind::Walk);
        assert_eq!(classify_walk(&walk(&[3])), WalkKind::Path);
    }

    #[test]
    fn invalid_walks_rejected() {
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(WalkSeq::new(&c3, walk(&[0, 2]).verts).is_err());
        assert!(WalkSeq::new(&c3, walk(&[0, 5]).verts).is_err());
        let h = GraphHom::identity(g(1, &[(0, 0)]));
        assert!(map_walk(&h, &walk(&[0, 1])).is_err());
    }

    #[test]
    fn dot_is_ordered() {
        let c = g(2, &[(1, 0), (0, 1)]);
        let dot = c.to_dot("c");
        assert_eq!(
            dot,
            "digraph \"c\" {\n  0 [label=\"0\"];\n  1 [label=\"1\"];\n  0 -> 1;\n  1 -> 0;\n}\n"
        );
    }
}
