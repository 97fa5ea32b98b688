//! Cone total curvature: curvature integrals over edge interiors plus the
//! vertex contributions tc(q).

use std::f64::consts::FRAC_PI_2;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeCurve, EmbeddedGraph, StarTangent};
use crate::spaceform::{gaussian, SpaceForm, TangentVector};

/// Curvature vector at one interior sample.
#[derive(Debug, Clone)]
pub struct CurvatureSample {
    pub s: f64,
    pub kvec: TangentVector,
    pub kmag: f64,
}

#[derive(Debug, Clone)]
pub struct EdgeIntegral {
    pub edge: String,
    pub integral: f64,
}

#[derive(Debug, Clone)]
pub struct VertexTc {
    pub vertex: String,
    pub tc: f64,
    pub argmax_dir: TangentVector,
}

#[derive(Debug, Clone)]
pub struct TcReport {
    pub per_edge: Vec<EdgeIntegral>,
    pub per_vertex: Vec<VertexTc>,
    pub total: f64,
}

impl TcReport {
    pub fn edge_sum(&self) -> f64 {
        self.per_edge.iter().map(|e| e.integral).sum()
    }

    pub fn vertex_sum(&self) -> f64 {
        self.per_vertex.iter().map(|v| v.tc).sum()
    }
}

/// Geodesic curvature vectors at the interior samples of an edge: the
/// second difference in the embedding, projected to the tangent space and
/// then orthogonally to the unit tangent.
pub fn edge_curvature(space: &SpaceForm, edge: &EdgeCurve) -> Result<Vec<CurvatureSample>> {
    let n = edge.len();
    if n < 3 {
        return Err(Error::DegenerateEdge {
            edge: edge.id.clone(),
            reason: "fewer than 3 samples".into(),
        });
    }
    let x = |i: usize| edge.samples[i].coords();
    (1..n - 1)
        .map(|i| {
            let hm = edge.s[i] - edge.s[i - 1];
            let hp = edge.s[i + 1] - edge.s[i];
            let p = &edge.samples[i];
            let vel = x(i - 1) * (-hp / (hm * (hm + hp)))
                + x(i) * ((hp - hm) / (hm * hp))
                + x(i + 1) * (hm / (hp * (hm + hp)));
            let acc = ((x(i + 1) - x(i)) / hp - (x(i) - x(i - 1)) / hm) * (2.0 / (hm + hp));
            let t = space.project_tangent(p, &vel);
            let tn = space.norm(&t);
            if tn == 0.0 {
                return Err(Error::DegenerateEdge {
                    edge: edge.id.clone(),
                    reason: format!("vanishing tangent at sample {i}"),
                });
            }
            let t = t / tn;
            let a = space.project_tangent(p, &acc);
            let k = &a - &t * space.form(&a, &t);
            let kmag = space.norm(&k);
            Ok(CurvatureSample {
                s: edge.s[i],
                kvec: TangentVector::new(p.clone(), k),
                kmag,
            })
        })
        .collect()
}

/// Trapezoid rule over all samples of an edge for a quantity known at the
/// interior samples; the two end values are linearly extrapolated from the
/// nearest interior pair.
pub fn integrate_interior(s: &[f64], interior: &[f64]) -> f64 {
    let n = s.len();
    debug_assert_eq!(interior.len() + 2, n);
    let full = extend_interior(s, interior);
    trapezoid(s, &full)
}

/// Interior values extended to the end samples by linear extrapolation.
pub fn extend_interior(s: &[f64], interior: &[f64]) -> Vec<f64> {
    let n = s.len();
    let m = interior.len();
    let mut full = Vec::with_capacity(n);
    let first = if m >= 2 {
        let slope = (interior[1] - interior[0]) / (s[2] - s[1]);
        interior[0] - slope * (s[1] - s[0])
    } else {
        interior[0]
    };
    let last = if m >= 2 {
        let slope = (interior[m - 1] - interior[m - 2]) / (s[n - 2] - s[n - 3]);
        interior[m - 1] + slope * (s[n - 1] - s[n - 2])
    } else {
        interior[m - 1]
    };
    full.push(first);
    full.extend_from_slice(interior);
    full.push(last);
    full
}

pub fn trapezoid(s: &[f64], y: &[f64]) -> f64 {
    s.windows(2)
        .zip(y.windows(2))
        .map(|(sw, yw)| 0.5 * (sw[1] - sw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// ∫|k| ds over the edge.
pub fn edge_total_curvature(space: &SpaceForm, edge: &EdgeCurve) -> Result<f64> {
    let samples = edge_curvature(space, edge)?;
    let kmag: Vec<f64> = samples.iter().map(|c| c.kmag).collect();
    let full: Vec<f64> = extend_interior(&edge.s, &kmag)
        .into_iter()
        .map(|k| k.max(0.0))
        .collect();
    Ok(trapezoid(&edge.s, &full))
}

/// Objective Σ_k (π/2 − ∠(T_k, e)) for a unit `e`, in orthonormal
/// tangent-space coordinates.
pub fn star_objective(tangents: &[DVector<f64>], e: &DVector<f64>) -> f64 {
    tangents
        .iter()
        .map(|t| FRAC_PI_2 - unit_angle(t, e))
        .sum()
}

/// Options for the multistart maximization of the star objective.
#[derive(Debug, Clone, Copy)]
pub struct TcOptions {
    pub seed: u64,
    pub random_starts: usize,
}

impl Default for TcOptions {
    fn default() -> Self {
        TcOptions {
            seed: 0,
            random_starts: 32,
        }
    }
}

const ACOS_GUARD: f64 = 1e-9;

/// Angle between unit vectors, accurate near 0 and π.
pub fn unit_angle(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    2.0 * (a - b).norm().atan2((a + b).norm())
}

fn objective_gradient(tangents: &[DVector<f64>], e: &DVector<f64>) -> DVector<f64> {
    let mut g = DVector::zeros(e.len());
    for t in tangents {
        let c = t.dot(e).clamp(-1.0 + ACOS_GUARD, 1.0 - ACOS_GUARD);
        g += t * (1.0 / (1.0 - c * c).sqrt());
    }
    let radial = g.dot(e);
    g - e * radial
}

fn normalized(v: DVector<f64>) -> Option<DVector<f64>> {
    let n = v.norm();
    (n > 1e-12).then(|| v / n)
}

/// Projected-gradient ascent on the unit sphere with backtracking.
fn gradient_ascent(tangents: &[DVector<f64>], mut e: DVector<f64>) -> (DVector<f64>, f64) {
    let mut val = star_objective(tangents, &e);
    let mut step = 0.5;
    for _ in 0..500 {
        let g = objective_gradient(tangents, &e);
        let gn = g.norm();
        if gn < 1e-12 {
            break;
        }
        let mut improved = false;
        let mut t = step;
        while t > 1e-12 {
            if let Some(cand) = normalized(&e + &g * (t / gn)) {
                let cv = star_objective(tangents, &cand);
                if cv > val + 1e-4 * t * gn {
                    e = cand;
                    val = cv;
                    improved = true;
                    step = (2.0 * t).min(1.0);
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (e, val)
}

/// Compass search on the sphere along an orthonormal frame of T_eS,
/// which also handles maxima sitting on the kinks e = ±T_k.
fn pattern_polish(tangents: &[DVector<f64>], mut e: DVector<f64>, mut val: f64) -> (DVector<f64>, f64) {
    let d = e.len();
    let mut delta = 0.05;
    while delta > 1e-11 {
        let mut moved = false;
        let frame = sphere_frame(&e);
        for dir in frame.iter().take(d - 1) {
            for sign in [1.0, -1.0] {
                if let Some(cand) = normalized(&e + dir * (sign * delta)) {
                    let cv = star_objective(tangents, &cand);
                    if cv > val {
                        e = cand;
                        val = cv;
                        moved = true;
                    }
                }
            }
        }
        if !moved {
            delta *= 0.5;
        }
    }
    (e, val)
}

/// Orthonormal basis of the tangent space of the unit sphere at `e`.
fn sphere_frame(e: &DVector<f64>) -> Vec<DVector<f64>> {
    let d = e.len();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(d - 1);
    for i in 0..d {
        let mut v = DVector::zeros(d);
        v[i] = 1.0;
        v -= e * e[i];
        for b in &out {
            let c = v.dot(b);
            v -= b * c;
        }
        if let Some(v) = normalized(v) {
            if v.norm() > 0.5 {
                out.push(v);
            }
        }
        if out.len() == d - 1 {
            break;
        }
    }
    out
}

/// Maximizes Σ_k (π/2 − ∠(T_k, e)) over unit e ∈ ℝᵈ for unit `tangents`
/// given in orthonormal coordinates. Returns (argmax, max).
pub fn maximize_star(tangents: &[DVector<f64>], opts: &TcOptions) -> (DVector<f64>, f64) {
    let d = tangents[0].len();
    let mut starts: Vec<DVector<f64>> = Vec::new();
    for t in tangents {
        starts.push(t.clone());
        starts.push(-t);
    }
    for i in 0..tangents.len() {
        for j in i + 1..tangents.len() {
            if let Some(v) = normalized(&tangents[i] + &tangents[j]) {
                starts.push(v);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_starts {
        let v = DVector::from_fn(d, |_, _| gaussian(&mut rng));
        if let Some(v) = normalized(v) {
            starts.push(v);
        }
    }
    let mut best: Option<(DVector<f64>, f64)> = None;
    for s in starts {
        let (e, v) = gradient_ascent(tangents, s);
        let (e, v) = pattern_polish(tangents, e, v);
        if best.as_ref().is_none_or(|b| v > b.1) {
            best = Some((e, v));
        }
    }
    best.expect("at least one start")
}

/// Expresses the inward tangents of a star in an orthonormal basis of T_qM.
pub(crate) fn star_coordinates(
    space: &SpaceForm,
    star: &[StarTangent],
    basis: &[DVector<f64>],
) -> Vec<DVector<f64>> {
    star.iter()
        .map(|t| {
            let c = DVector::from_iterator(basis.len(), basis.iter().map(|b| space.form(&t.tangent.vec, b)));
            normalized(c.clone()).unwrap_or(c)
        })
        .collect()
}

/// tc(q): the supremum over unit directions of the star objective.
pub fn vertex_tc(graph: &EmbeddedGraph, q: usize, opts: &TcOptions) -> Result<VertexTc> {
    let space = &graph.space;
    let star = graph.vertex_star(q)?;
    if star.len() < 2 {
        return Err(Error::LowValence {
            vertex: graph.vertices[q].id.clone(),
            valence: star.len(),
        });
    }
    let base = graph.vertices[q].point.clone();
    let basis = space.tangent_basis(&base);
    let coords = star_coordinates(space, &star, &basis);
    let (e, tc) = maximize_star(&coords, opts);
    let mut dir = DVector::zeros(space.ambient_dim());
    for (c, b) in e.iter().zip(&basis) {
        dir += b * *c;
    }
    Ok(VertexTc {
        vertex: graph.vertices[q].id.clone(),
        tc,
        argmax_dir: TangentVector::new(base, dir),
    })
}

/// TC(Γ) with its per-edge and per-vertex breakdown.
pub fn cone_total_curvature(graph: &EmbeddedGraph, opts: &TcOptions) -> Result<TcReport> {
    let space = &graph.space;
    let per_edge = graph
        .edges
        .par_iter()
        .map(|e| {
            Ok(EdgeIntegral {
                edge: e.id.clone(),
                integral: edge_total_curvature(space, e)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let per_vertex = (0..graph.vertices.len())
        .into_par_iter()
        .map(|q| vertex_tc(graph, q, opts))
        .collect::<Result<Vec<_>>>()?;
    let total = per_edge.iter().map(|e| e.integral).sum::<f64>()
        + per_vertex.iter().map(|v| v.tc).sum::<f64>();
    Ok(TcReport {
        per_edge,
        per_vertex,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::PI;

    fn unit(v: &[f64]) -> DVector<f64> {
        normalized(DVector::from_column_slice(v)).unwrap()
    }

    #[test]
    fn straight_polyline_has_zero_curvature() {
        let g = fixtures::flat_square(1.0).resample_arclength(0.01).unwrap();
        for e in &g.edges {
            for c in edge_curvature(&g.space, e).unwrap() {
                assert!(c.kmag < 1e-8);
            }
            assert!(edge_total_curvature(&g.space, e).unwrap() < 1e-8);
        }
    }

    #[test]
    fn unit_circle_curvature() {
        let g = fixtures::flat_circle(1.0, 512);
        for c in edge_curvature(&g.space, &g.edges[0]).unwrap() {
            assert!((c.kmag - 1.0).abs() < 1e-3);
        }
        let g = fixtures::flat_circle(1.0, 1024);
        let total = edge_total_curvature(&g.space, &g.edges[0]).unwrap();
        assert!((total - 2.0 * PI).abs() < 1e-4, "{total}");
    }

    #[test]
    fn hyperbolic_circle_curvature() {
        for r in [0.5, 1.0, 2.0] {
            let g = fixtures::hyperbolic_circle(1.0, r, 1024);
            for c in edge_curvature(&g.space, &g.edges[0]).unwrap() {
                assert!((c.kmag - 1.0 / r.tanh()).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn spherical_circle_curvature() {
        let g = fixtures::spherical_circle(1.0, 0.8, 1024).unwrap();
        for c in edge_curvature(&g.space, &g.edges[0]).unwrap() {
            assert!((c.kmag - 1.0 / 0.8f64.tan()).abs() < 1e-3);
        }
    }

    #[test]
    fn half_circle_radius_two() {
        let space = SpaceForm::flat(3);
        let n = 2048;
        let pts: Vec<_> = (0..=n)
            .map(|i| {
                let a = PI * i as f64 / n as f64;
                crate::spaceform::Point::from_slice(&[2.0 * a.cos(), 2.0 * a.sin(), 0.0])
            })
            .collect();
        let e = EdgeCurve::from_samples(&space, "h", (0, 1), pts).unwrap();
        assert!((edge_total_curvature(&space, &e).unwrap() - PI).abs() < 1e-4);
    }

    #[test]
    fn geodesic_edges_have_zero_curvature_in_every_model() {
        for space in [SpaceForm::flat(3), SpaceForm::hyperbolic(3, 1.0), SpaceForm::spherical(3, 1.0)] {
            let g = fixtures::regular_polygon(&space, 5, 0.8, 64).unwrap();
            for e in &g.edges {
                assert!(edge_total_curvature(&space, e).unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn tc_of_smooth_point_is_zero() {
        let t = vec![unit(&[1.0, 0.0, 0.0]), unit(&[-1.0, 0.0, 0.0])];
        let (_, tc) = maximize_star(&t, &TcOptions::default());
        assert!(tc.abs() < 1e-9);
    }

    #[test]
    fn tc_of_right_corner_is_exterior_angle() {
        let t = vec![unit(&[1.0, 0.0, 0.0]), unit(&[0.0, 1.0, 0.0])];
        let (e, tc) = maximize_star(&t, &TcOptions::default());
        assert!((tc - PI / 2.0).abs() < 1e-9);
        // Every direction on the short arc between the tangents is optimal.
        assert!(e[2].abs() < 1e-6 && e[0] > -1e-9 && e[1] > -1e-9);
    }

    #[test]
    fn tc_of_planar_y() {
        let t: Vec<_> = (0..3)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 3.0;
                unit(&[a.cos(), a.sin(), 0.0])
            })
            .collect();
        let (_, tc) = maximize_star(&t, &TcOptions::default());
        assert!((tc - PI / 6.0).abs() < 1e-9);
    }

    #[test]
    fn tc_of_cube_corner() {
        let t = vec![unit(&[1.0, 0.0, 0.0]), unit(&[0.0, 1.0, 0.0]), unit(&[0.0, 0.0, 1.0])];
        let (e, tc) = maximize_star(&t, &TcOptions::default());
        let expect = 3.0 * (PI / 2.0 - (1.0 / 3f64.sqrt()).acos());
        assert!((tc - expect).abs() < 1e-9);
        assert!((e - unit(&[1.0, 1.0, 1.0])).norm() < 1e-4);
    }

    #[test]
    fn tc_report_bookkeeping() {
        let g = fixtures::theta_graph(1.0, 256);
        let r = cone_total_curvature(&g, &TcOptions::default()).unwrap();
        assert!((r.total - r.edge_sum() - r.vertex_sum()).abs() < 1e-12);
        for v in &r.per_vertex {
            assert!((v.tc - PI / 6.0).abs() < 1e-4);
        }
    }

    #[test]
    fn tc_circle_square_cube() {
        let opts = TcOptions::default();
        let c = cone_total_curvature(&fixtures::flat_circle(1.0, 1024), &opts).unwrap();
        assert!((c.total - 2.0 * PI).abs() < 1e-4);
        let s = cone_total_curvature(&fixtures::flat_square(1.0), &opts).unwrap();
        assert!((s.total - 2.0 * PI).abs() < 1e-6);
        let k = cone_total_curvature(&fixtures::cube_skeleton(1.0), &opts).unwrap();
        let corner = 3.0 * (PI / 2.0 - (1.0 / 3f64.sqrt()).acos());
        assert!((k.total - 8.0 * corner).abs() < 1e-3);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let g = fixtures::theta_graph(1.0, 64);
        let a = cone_total_curvature(&g, &TcOptions { seed: 5, random_starts: 32 }).unwrap();
        let b = cone_total_curvature(&g, &TcOptions { seed: 5, random_starts: 32 }).unwrap();
        assert_eq!(a.total.to_bits(), b.total.to_bits());
    }
}
