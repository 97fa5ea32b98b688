//! Embedded graphs: finitely many sampled arcs meeting at vertices of
//! valence at least two.
//!
//! Edges are geodesic polylines through their samples. Every edge carries its
//! own arclength parameters `s` (cumulative geodesic chord lengths, `s[0] = 0`).

use std::collections::{BTreeMap, HashMap, HashSet};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaceform::{Model, Point, SpaceForm, TangentVector};

/// Minimum number of samples an edge is stored with.
pub const MIN_SAMPLES: usize = 8;
/// Allowed gap between an edge end sample and its vertex.
pub const ENDPOINT_TOL: f64 = 1e-8;
/// Default on-manifold gate for ingested coordinates.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCurve {
    pub id: String,
    /// Indices into the graph's vertex list.
    pub endpoints: (usize, usize),
    pub samples: Vec<Point>,
    pub s: Vec<f64>,
}

impl EdgeCurve {
    /// Builds an edge from samples, computing arclength from geodesic chords.
    pub fn from_samples(
        space: &SpaceForm,
        id: impl Into<String>,
        endpoints: (usize, usize),
        samples: Vec<Point>,
    ) -> Result<Self> {
        let id = id.into();
        let s = chord_arclength(space, &id, &samples)?;
        Ok(EdgeCurve {
            id,
            endpoints,
            samples,
            s,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn length(&self) -> f64 {
        *self.s.last().unwrap_or(&0.0)
    }

    pub fn is_loop(&self) -> bool {
        self.endpoints.0 == self.endpoints.1
    }
}

fn chord_arclength(space: &SpaceForm, id: &str, samples: &[Point]) -> Result<Vec<f64>> {
    let mut s = Vec::with_capacity(samples.len());
    s.push(0.0);
    for w in samples.windows(2) {
        let d = space.dist(&w[0], &w[1])?;
        if d <= 0.0 {
            return Err(Error::DegenerateEdge {
                edge: id.to_string(),
                reason: "consecutive samples coincide".into(),
            });
        }
        s.push(s.last().unwrap() + d);
    }
    Ok(s)
}

/// Input description of one edge, referring to vertices by id.
#[derive(Debug, Clone)]
pub struct EdgeSpec {
    pub id: String,
    pub endpoints: (String, String),
    pub samples: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedGraph {
    pub space: SpaceForm,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeCurve>,
}

/// One edge-end at a vertex with its inward unit tangent.
#[derive(Debug, Clone)]
pub struct StarTangent {
    pub edge: usize,
    /// True when the end is the edge's first sample.
    pub at_start: bool,
    pub tangent: TangentVector,
}

/// One directed pass over an edge in a closed walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Traversal {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
}

impl EmbeddedGraph {
    /// Validates and assembles a graph. End samples are snapped onto their
    /// vertices and edges with fewer than `MIN_SAMPLES` samples are refined
    /// by geodesic subdivision.
    pub fn from_parts(
        space: SpaceForm,
        vertices: Vec<(String, Point)>,
        edges: Vec<EdgeSpec>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        let mut verts = Vec::with_capacity(vertices.len());
        for (id, point) in vertices {
            if index.insert(id.clone(), verts.len()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {id}")));
            }
            verts.push(Vertex { id, point });
        }
        if verts.is_empty() {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }

        let mut seen = HashSet::new();
        let mut curves = Vec::with_capacity(edges.len());
        for spec in edges {
            if !seen.insert(spec.id.clone()) {
                return Err(Error::InvalidGraph(format!("duplicate edge id {}", spec.id)));
            }
            let a = *index
                .get(&spec.endpoints.0)
                .ok_or_else(|| Error::UnknownVertex(spec.endpoints.0.clone()))?;
            let b = *index
                .get(&spec.endpoints.1)
                .ok_or_else(|| Error::UnknownVertex(spec.endpoints.1.clone()))?;
            let mut samples = spec.samples;
            if samples.len() < 2 {
                return Err(Error::InvalidGraph(format!(
                    "edge {} has {} samples; need at least 2",
                    spec.id,
                    samples.len()
                )));
            }
            for (end, v) in [(0, a), (samples.len() - 1, b)] {
                let gap = space
                    .dist(&samples[end], &verts[v].point)
                    .map_err(|e| Error::InvalidGraph(format!("edge {}: {e}", spec.id)))?;
                if gap > ENDPOINT_TOL {
                    return Err(Error::InvalidGraph(format!(
                        "edge {} does not meet vertex {} (gap {gap:.3e})",
                        spec.id, verts[v].id
                    )));
                }
                samples[end] = verts[v].point.clone();
            }
            let samples = densify(&space, &spec.id, samples)?;
            curves.push(EdgeCurve::from_samples(&space, spec.id, (a, b), samples)?);
        }

        let graph = EmbeddedGraph {
            space,
            vertices: verts,
            edges: curves,
        };
        for (v, vertex) in graph.vertices.iter().enumerate() {
            let valence = graph.valence(v);
            if valence < 2 {
                return Err(Error::LowValence {
                    vertex: vertex.id.clone(),
                    valence,
                });
            }
        }
        if space.model() == Model::Spherical {
            graph.check_diameter()?;
        }
        Ok(graph)
    }

    fn check_diameter(&self) -> Result<()> {
        // Pairwise distance < π/b  ⟺  ⟨x, y⟩ > −1/b² (strictly).
        let pts: Vec<&DVector<f64>> = self.samples().map(|p| p.coords()).collect();
        let b2 = self.space.curv() * self.space.curv();
        let bound = -(1.0 - 1e-12);
        for (i, x) in pts.iter().enumerate() {
            for y in &pts[i + 1..] {
                if x.dot(y) * b2 <= bound {
                    return Err(Error::InvalidGraph(format!(
                        "spherical diameter bound violated: samples at distance >= pi/b = {}",
                        self.space.diameter_limit()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Number of edge-ends at vertex `v` (a loop counts twice).
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.endpoints.0 == v) as usize + (e.endpoints.1 == v) as usize)
            .sum()
    }

    /// All samples of all edges, vertices included once per edge-end.
    pub fn samples(&self) -> impl Iterator<Item = &Point> {
        self.edges.iter().flat_map(|e| e.samples.iter())
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(EdgeCurve::length).sum()
    }

    /// Connected components as lists of vertex indices, in order of first vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.endpoints.0), find(&mut parent, e.endpoints.1));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// True when the graph is a single closed curve: connected with every
    /// vertex of valence two.
    pub fn is_simple_cycle(&self) -> bool {
        self.is_connected() && (0..self.vertices.len()).all(|v| self.valence(v) == 2)
    }

    /// Inward unit tangents of every edge-end at vertex `q`.
    pub fn vertex_star(&self, q: usize) -> Result<Vec<StarTangent>> {
        if q >= self.vertices.len() {
            return Err(Error::UnknownVertex(format!("#{q}")));
        }
        let mut star = Vec::new();
        for (k, edge) in self.edges.iter().enumerate() {
            if edge.endpoints.0 == q {
                star.push(StarTangent {
                    edge: k,
                    at_start: true,
                    tangent: end_tangent(&self.space, edge, true)?,
                });
            }
            if edge.endpoints.1 == q {
                star.push(StarTangent {
                    edge: k,
                    at_start: false,
                    tangent: end_tangent(&self.space, edge, false)?,
                });
            }
        }
        Ok(star)
    }

    /// Re-samples every edge at spacing close to `h` by cubic Hermite
    /// interpolation of the samples, keeping the end points fixed.
    pub fn resample_arclength(&self, h: f64) -> Result<EmbeddedGraph> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("sampling step {h}")));
        }
        let shortest = self
            .edges
            .iter()
            .map(EdgeCurve::length)
            .fold(f64::INFINITY, f64::min);
        if h > shortest {
            return Err(Error::StepTooLarge { h, shortest });
        }
        let space = self.space;
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let m = ((e.length() / h).round() as usize).max(MIN_SAMPLES - 1);
                let samples = hermite_resample(&space, e, m)?;
                EdgeCurve::from_samples(&space, e.id.clone(), e.endpoints, samples)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EmbeddedGraph {
            space,
            vertices: self.vertices.clone(),
            edges,
        })
    }

    /// A closed walk traversing every edge exactly twice (Euler circuit of
    /// the doubled multigraph, Hierholzer's algorithm).
    pub fn euler_double_circuit(&self) -> Result<Vec<Traversal>> {
        let comps = self.components();
        if comps.len() > 1 {
            return Err(Error::Disconnected(
                comps
                    .iter()
                    .map(|c| c.iter().map(|&v| self.vertices[v].id.clone()).collect())
                    .collect(),
            ));
        }
        if self.edges.is_empty() {
            return Ok(Vec::new());
        }
        // Copy 2k and 2k+1 of edge k; adjacency holds (copy, neighbour).
        let n = self.vertices.len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (k, e) in self.edges.iter().enumerate() {
            let (a, b) = e.endpoints;
            for copy in [2 * k, 2 * k + 1] {
                adj[a].push((copy, b));
                adj[b].push((copy, a));
            }
        }
        let mut used = vec![false; 2 * self.edges.len()];
        let mut next = vec![0usize; n];
        let start = self.edges[0].endpoints.0;
        let mut stack: Vec<(usize, Option<Traversal>)> = vec![(start, None)];
        let mut walk = Vec::with_capacity(used.len());
        while let Some(&(v, via)) = stack.last() {
            while next[v] < adj[v].len() && used[adj[v][next[v]].0] {
                next[v] += 1;
            }
            if next[v] < adj[v].len() {
                let (copy, w) = adj[v][next[v]];
                used[copy] = true;
                stack.push((
                    w,
                    Some(Traversal {
                        edge: copy / 2,
                        from: v,
                        to: w,
                    }),
                ));
            } else {
                stack.pop();
                if let Some(t) = via {
                    walk.push(t);
                }
            }
        }
        walk.reverse();
        Ok(walk)
    }

    /// Serializable document form of the graph.
    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            space: SpaceSpec {
                model: self.space.model(),
                dim: self.space.dim(),
                curv: self.space.curv(),
            },
            tolerance: None,
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexSpec {
                    id: v.id.clone(),
                    coords: v.point.coords().iter().copied().collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    endpoints: [
                        self.vertices[e.endpoints.0].id.clone(),
                        self.vertices[e.endpoints.1].id.clone(),
                    ],
                    samples: e
                        .samples
                        .iter()
                        .map(|p| p.coords().iter().copied().collect())
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Inward unit tangent at one end of an edge from a 3-point one-sided
/// difference, projected to the tangent space.
pub fn end_tangent(space: &SpaceForm, edge: &EdgeCurve, at_start: bool) -> Result<TangentVector> {
    let n = edge.len();
    if n < 3 {
        return Err(Error::DegenerateEdge {
            edge: edge.id.clone(),
            reason: "fewer than 3 samples".into(),
        });
    }
    let (i0, i1, i2) = if at_start { (0, 1, 2) } else { (n - 1, n - 2, n - 3) };
    let h1 = (edge.s[i1] - edge.s[i0]).abs();
    let h2 = (edge.s[i2] - edge.s[i1]).abs();
    if h1 <= 0.0 || h2 <= 0.0 {
        return Err(Error::DegenerateEdge {
            edge: edge.id.clone(),
            reason: "first two samples coincide".into(),
        });
    }
    let x = |i: usize| edge.samples[i].coords();
    let d = x(i0) * (-(2.0 * h1 + h2) / (h1 * (h1 + h2)))
        + x(i1) * ((h1 + h2) / (h1 * h2))
        - x(i2) * (h1 / (h2 * (h1 + h2)));
    let base = edge.samples[i0].clone();
    space
        .normalize(&space.tangent(&base, d))
        .map_err(|_| Error::DegenerateEdge {
            edge: edge.id.clone(),
            reason: "vanishing end tangent".into(),
        })
}

/// Derivative dx/ds at every sample in embedding coordinates: central
/// differences inside, one-sided 3-point differences at the ends.
pub(crate) fn raw_derivatives(edge: &EdgeCurve) -> Vec<DVector<f64>> {
    let n = edge.len();
    let x = |i: usize| edge.samples[i].coords();
    let s = &edge.s;
    (0..n)
        .map(|i| {
            if i == 0 {
                let (h1, h2) = (s[1] - s[0], s[2] - s[1]);
                x(0) * (-(2.0 * h1 + h2) / (h1 * (h1 + h2))) + x(1) * ((h1 + h2) / (h1 * h2))
                    - x(2) * (h1 / (h2 * (h1 + h2)))
            } else if i == n - 1 {
                let (h1, h2) = (s[n - 1] - s[n - 2], s[n - 2] - s[n - 3]);
                x(n - 1) * ((2.0 * h1 + h2) / (h1 * (h1 + h2))) - x(n - 2) * ((h1 + h2) / (h1 * h2))
                    + x(n - 3) * (h1 / (h2 * (h1 + h2)))
            } else {
                let (hm, hp) = (s[i] - s[i - 1], s[i + 1] - s[i]);
                x(i - 1) * (-hp / (hm * (hm + hp)))
                    + x(i) * ((hp - hm) / (hm * hp))
                    + x(i + 1) * (hm / (hp * (hm + hp)))
            }
        })
        .collect()
}

/// Unit tangents (direction of increasing s) at every sample.
pub fn edge_tangents(space: &SpaceForm, edge: &EdgeCurve) -> Result<Vec<TangentVector>> {
    if edge.len() < 3 {
        return Err(Error::DegenerateEdge {
            edge: edge.id.clone(),
            reason: "fewer than 3 samples".into(),
        });
    }
    raw_derivatives(edge)
        .into_iter()
        .zip(&edge.samples)
        .map(|(d, p)| {
            space
                .normalize(&space.tangent(p, d))
                .map_err(|_| Error::DegenerateEdge {
                    edge: edge.id.clone(),
                    reason: "vanishing tangent".into(),
                })
        })
        .collect()
}

/// Inserts geodesic midpoints into the longest segments until the edge has
/// at least `MIN_SAMPLES` samples. The geodesic polyline is unchanged.
fn densify(space: &SpaceForm, id: &str, mut samples: Vec<Point>) -> Result<Vec<Point>> {
    while samples.len() < MIN_SAMPLES {
        let mut longest = (0, -1.0);
        for (i, w) in samples.windows(2).enumerate() {
            let d = space.dist(&w[0], &w[1])?;
            if d > longest.1 {
                longest = (i, d);
            }
        }
        let i = longest.0;
        let v = space.log_map(&samples[i], &samples[i + 1]).map_err(|_| Error::DegenerateEdge {
            edge: id.to_string(),
            reason: "consecutive samples coincide".into(),
        })?;
        let mid = space.exp_map(&samples[i], &v.scaled(0.5))?;
        samples.insert(i + 1, mid);
    }
    Ok(samples)
}

/// `m` equal arclength steps along the cubic Hermite interpolant of the edge.
fn hermite_resample(space: &SpaceForm, edge: &EdgeCurve, m: usize) -> Result<Vec<Point>> {
    let derivs = raw_derivatives(edge);
    let total = edge.length();
    let n = edge.len();
    let mut out = Vec::with_capacity(m + 1);
    out.push(edge.samples[0].clone());
    let mut seg = 0;
    for j in 1..m {
        let target = total * j as f64 / m as f64;
        while seg + 2 < n && edge.s[seg + 1] < target {
            seg += 1;
        }
        let (s0, s1) = (edge.s[seg], edge.s[seg + 1]);
        let h = s1 - s0;
        let t = (target - s0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let x = edge.samples[seg].coords() * (2.0 * t3 - 3.0 * t2 + 1.0)
            + &derivs[seg] * ((t3 - 2.0 * t2 + t) * h)
            + edge.samples[seg + 1].coords() * (-2.0 * t3 + 3.0 * t2)
            + &derivs[seg + 1] * ((t3 - t2) * h);
        out.push(Point::new(space.project(&x)));
    }
    out.push(edge.samples[n - 1].clone());
    Ok(out)
}

/// `space` block of a graph document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub model: Model,
    pub dim: usize,
    #[serde(default)]
    pub curv: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    pub coords: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub endpoints: [String; 2],
    pub samples: Vec<Vec<f64>>,
}

/// On-disk graph document (JSON).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeDoc>,
}

/// Validates a document and builds the graph, projecting coordinates onto
/// the model manifold.
pub fn load_graph(doc: &GraphDocument) -> Result<EmbeddedGraph> {
    let space = SpaceForm::new(doc.space.model, doc.space.dim, doc.space.curv)?;
    let tol = doc.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tol}")));
    }
    let vertices = doc
        .vertices
        .iter()
        .map(|v| Ok((v.id.clone(), space.point_with_tol(&v.coords, tol)?)))
        .collect::<Result<Vec<_>>>()?;
    let edges = doc
        .edges
        .iter()
        .map(|e| {
            Ok(EdgeSpec {
                id: e.id.clone(),
                endpoints: (e.endpoints[0].clone(), e.endpoints[1].clone()),
                samples: e
                    .samples
                    .iter()
                    .map(|c| space.point_with_tol(c, tol))
                    .collect::<Result<Vec<_>>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    EmbeddedGraph::from_parts(space, vertices, edges)
}

/// Parses and validates a JSON graph document.
pub fn parse_graph(text: &str) -> Result<EmbeddedGraph> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    load_graph(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::PI;

    fn count_edges(walk: &[Traversal], m: usize) -> Vec<usize> {
        let mut c = vec![0; m];
        for t in walk {
            c[t.edge] += 1;
        }
        c
    }

    fn assert_closed_double_walk(g: &EmbeddedGraph) {
        let walk = g.euler_double_circuit().unwrap();
        assert_eq!(walk.len(), 2 * g.edges.len());
        assert!(count_edges(&walk, g.edges.len()).iter().all(|&c| c == 2));
        for w in walk.windows(2) {
            assert_eq!(w[0].to, w[1].from);
        }
        assert_eq!(walk.last().unwrap().to, walk[0].from);
        for t in &walk {
            let (a, b) = g.edges[t.edge].endpoints;
            assert!((t.from, t.to) == (a, b) || (t.from, t.to) == (b, a));
        }
    }

    #[test]
    fn circle_is_a_legal_graph() {
        let g = fixtures::flat_circle(1.0, 64);
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.valence(0), 2);
    }

    #[test]
    fn segment_is_rejected() {
        let space = SpaceForm::flat(3);
        let a = Point::from_slice(&[0.0, 0.0, 0.0]);
        let b = Point::from_slice(&[1.0, 0.0, 0.0]);
        let err = EmbeddedGraph::from_parts(
            space,
            vec![("a".into(), a.clone()), ("b".into(), b.clone())],
            vec![EdgeSpec {
                id: "e".into(),
                endpoints: ("a".into(), "b".into()),
                samples: vec![a, b],
            }],
        )
        .unwrap_err();
        assert!(matches!(err, Error::LowValence { valence: 1, .. }));
        assert!(err.is_validation());
    }

    #[test]
    fn theta_graph_valences() {
        let g = fixtures::theta_graph(1.0, 32);
        assert_eq!(g.edges.len(), 3);
        assert_eq!((g.valence(0), g.valence(1)), (3, 3));
    }

    #[test]
    fn endpoint_mismatch_is_rejected() {
        let space = SpaceForm::flat(2);
        let a = Point::from_slice(&[0.0, 0.0]);
        let pts: Vec<Point> = (0..=8)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / 8.0;
                Point::from_slice(&[t.cos() - 1.0, t.sin() + 1e-6])
            })
            .collect();
        let err = EmbeddedGraph::from_parts(
            space,
            vec![("a".into(), a)],
            vec![EdgeSpec {
                id: "e".into(),
                endpoints: ("a".into(), "a".into()),
                samples: pts,
            }],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidGraph(_)));
    }

    #[test]
    fn document_errors() {
        let off = r#"{"space":{"model":"spherical","dim":2,"curv":1},
            "vertices":[{"id":"a","coords":[1.1,0,0]}],"edges":[]}"#;
        assert!(matches!(parse_graph(off), Err(Error::OffManifold { .. })));
        let loose = r#"{"space":{"model":"spherical","dim":2,"curv":1},"tolerance":0.5,
            "vertices":[{"id":"a","coords":[1.1,0,0]}],"edges":[]}"#;
        assert!(matches!(parse_graph(loose), Err(Error::LowValence { .. })));
        assert!(matches!(parse_graph("{"), Err(Error::Json(_))));
    }

    #[test]
    fn spherical_diameter_is_enforced() {
        assert!(fixtures::spherical_circle(1.0, 1.2, 32).is_ok());
        // A great circle contains antipodal sample pairs.
        let err = fixtures::spherical_circle(1.0, PI / 2.0, 32).unwrap_err();
        assert!(matches!(err, Error::InvalidGraph(_)));
    }

    #[test]
    fn short_edges_are_densified() {
        let g = fixtures::flat_square(1.0);
        for e in &g.edges {
            assert!(e.len() >= MIN_SAMPLES);
            assert!((e.length() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_circle() {
        let g = fixtures::flat_circle(1.0, 1024);
        let r = g.resample_arclength(2.0 * PI / 256.0).unwrap();
        let n = r.edges[0].len();
        assert!((254..=258).contains(&n), "{n}");
        // Geodesic polyline: the chord length is that of the inscribed polygon.
        let m = (n - 1) as f64;
        let polygon = 2.0 * m * (PI / m).sin();
        assert!((r.edges[0].length() - polygon).abs() < 1e-6);
        assert!((r.edges[0].length() - 2.0 * PI).abs() < 1e-4 * 2.0 * PI);
    }

    #[test]
    fn resample_square() {
        let g = fixtures::flat_square(1.0);
        let r = g.resample_arclength(0.01).unwrap();
        for e in &r.edges {
            assert!((e.length() - 1.0).abs() < 1e-6);
            for w in e.s.windows(2) {
                let d = w[1] - w[0];
                assert!((0.005..=0.015).contains(&d));
            }
        }
        assert!(matches!(g.resample_arclength(2.0), Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn resample_is_idempotent() {
        for g in [
            fixtures::flat_circle(1.3, 500),
            fixtures::hyperbolic_circle(1.0, 1.0, 600),
            fixtures::spherical_circle(1.0, 0.7, 400).unwrap(),
        ] {
            let h = 0.02;
            let once = g.resample_arclength(h).unwrap();
            let twice = once.resample_arclength(h).unwrap();
            for (a, b) in once.edges.iter().zip(&twice.edges) {
                assert_eq!(a.len(), b.len());
                for (p, q) in a.samples.iter().zip(&b.samples) {
                    assert!(g.space.dist(p, q).unwrap() < 1e-6);
                }
                assert!((a.length() - g.edges[0].length()).abs() < 1e-4 * a.length());
            }
        }
    }

    #[test]
    fn star_of_straight_line_is_antiparallel() {
        let g = fixtures::flat_polygon(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, 1.0, 0.0]]);
        let star = g.vertex_star(1).unwrap();
        assert_eq!(star.len(), 2);
        let a = g.space.angle(&star[0].tangent, &star[1].tangent).unwrap();
        assert!((a - PI).abs() < 1e-6);
    }

    #[test]
    fn star_of_y_vertex() {
        let g = fixtures::theta_graph(1.0, 64);
        let star = g.vertex_star(0).unwrap();
        assert_eq!(star.len(), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                let a = g.space.angle(&star[i].tangent, &star[j].tangent).unwrap();
                assert!((a - 2.0 * PI / 3.0).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn star_of_cube_corner() {
        let g = fixtures::cube_skeleton(1.0);
        for q in 0..8 {
            let star = g.vertex_star(q).unwrap();
            assert_eq!(star.len(), 3);
            for i in 0..3 {
                for j in i + 1..3 {
                    let a = g.space.angle(&star[i].tangent, &star[j].tangent).unwrap();
                    assert!((a - PI / 2.0).abs() < 1e-4);
                }
            }
        }
    }

    #[test]
    fn loop_contributes_two_tangents() {
        let g = fixtures::flat_circle(1.0, 128);
        let star = g.vertex_star(0).unwrap();
        assert_eq!(star.len(), 2);
        assert!(star[0].at_start && !star[1].at_start);
    }

    #[test]
    fn double_circuits_of_fixtures() {
        let cycle = fixtures::flat_polygon(&[
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.5, 1.5, 0.0],
            [0.0, 1.0, 0.0],
        ]);
        assert_eq!(cycle.euler_double_circuit().unwrap().len(), 10);
        assert_closed_double_walk(&cycle);
        let theta = fixtures::theta_graph(1.0, 16);
        assert_eq!(theta.euler_double_circuit().unwrap().len(), 6);
        assert_closed_double_walk(&theta);
        let cube = fixtures::cube_skeleton(1.0);
        assert_eq!(cube.euler_double_circuit().unwrap().len(), 24);
        assert_closed_double_walk(&cube);
        assert_closed_double_walk(&fixtures::flat_circle(1.0, 16));
    }

    #[test]
    fn disconnected_graph_lists_components() {
        let a = fixtures::flat_circle(1.0, 16);
        let mut doc = a.to_document();
        let mut other = fixtures::flat_circle(0.5, 16).to_document();
        other.vertices[0].id = "z".into();
        other.edges[0].id = "f".into();
        other.edges[0].endpoints = ["z".into(), "z".into()];
        doc.vertices.extend(other.vertices);
        doc.edges.extend(other.edges);
        let g = load_graph(&doc).unwrap();
        match g.euler_double_circuit() {
            Err(Error::Disconnected(c)) => assert_eq!(c.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn document_roundtrip() {
        let g = fixtures::theta_graph(1.0, 16);
        let text = serde_json::to_string(&g.to_document()).unwrap();
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, g);
    }
}
