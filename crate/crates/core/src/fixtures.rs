//! Standard test graphs and random instance generators.
//!
//! Shapes are described in tangent coordinates at the model's origin and
//! pushed onto the manifold with the exponential map, so a circle of radius
//! `R` about the origin is a geodesic circle in every model.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::Rng;

use crate::error::Result;
use crate::graph::{EdgeSpec, EmbeddedGraph};
use crate::spaceform::{gaussian, Point, SpaceForm};

/// Maps tangent coordinates at the origin (first `dim` axes, zero padded)
/// to a point of the model.
pub fn embed(space: &SpaceForm, v: &[f64]) -> Point {
    let o = space.origin();
    let offset = space.ambient_dim() - space.dim();
    let mut vec = DVector::zeros(space.ambient_dim());
    for (i, c) in v.iter().take(space.dim()).enumerate() {
        vec[offset + i] = *c;
    }
    space.exp_unchecked(&o, &vec)
}

/// Samples `curve(t)` for t in [0, 1] at `n + 1` parameters.
fn sample_curve(space: &SpaceForm, n: usize, curve: impl Fn(f64) -> Vec<f64>) -> Vec<Point> {
    (0..=n)
        .map(|i| embed(space, &curve(i as f64 / n as f64)))
        .collect()
}

/// Single closed curve, one vertex at parameter 0. `curve` is given in
/// tangent coordinates over t ∈ [0, 1] with curve(0) = curve(1).
pub fn closed_curve(
    space: &SpaceForm,
    n: usize,
    curve: impl Fn(f64) -> Vec<f64>,
) -> Result<EmbeddedGraph> {
    let mut samples = sample_curve(space, n, curve);
    let v = samples[0].clone();
    *samples.last_mut().unwrap() = v.clone();
    EmbeddedGraph::from_parts(
        *space,
        vec![("q0".into(), v)],
        vec![EdgeSpec {
            id: "c0".into(),
            endpoints: ("q0".into(), "q0".into()),
            samples,
        }],
    )
}

/// Circle of radius `r` about the origin in the first coordinate plane.
pub fn circle(space: &SpaceForm, r: f64, n: usize) -> Result<EmbeddedGraph> {
    closed_curve(space, n, |t| {
        let a = 2.0 * PI * t;
        vec![r * a.cos(), r * a.sin()]
    })
}

/// Circle of radius `r` about the origin of ℝ³ with `n` segments.
pub fn flat_circle(r: f64, n: usize) -> EmbeddedGraph {
    circle(&SpaceForm::flat(3), r, n).expect("valid circle")
}

/// Geodesic circle of radius `r` about the origin of H³(−κ²).
pub fn hyperbolic_circle(kappa: f64, r: f64, n: usize) -> EmbeddedGraph {
    circle(&SpaceForm::hyperbolic(3, kappa), r, n).expect("valid circle")
}

/// Geodesic circle of radius `r` about the pole of S³(b²).
pub fn spherical_circle(b: f64, r: f64, n: usize) -> Result<EmbeddedGraph> {
    circle(&SpaceForm::spherical(3, b), r, n)
}

/// Closed polygon with geodesic edges through `corners`, each edge sampled
/// with `per_edge` segments.
pub fn geodesic_polygon(space: &SpaceForm, corners: &[Point], per_edge: usize) -> Result<EmbeddedGraph> {
    let m = corners.len();
    let vertices = corners
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("q{i}"), p.clone()))
        .collect();
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let (a, b) = (&corners[i], &corners[(i + 1) % m]);
        let v = space.log_map(a, b)?;
        let samples = (0..=per_edge)
            .map(|k| space.exp_map(a, &v.scaled(k as f64 / per_edge as f64)))
            .collect::<Result<Vec<_>>>()?;
        edges.push(EdgeSpec {
            id: format!("e{i}"),
            endpoints: (format!("q{i}"), format!("q{}", (i + 1) % m)),
            samples,
        });
    }
    EmbeddedGraph::from_parts(*space, vertices, edges)
}

/// Straight-edged closed polygon in ℝ³ (edges stored with their end points
/// only, refined on load).
pub fn flat_polygon(corners: &[[f64; 3]]) -> EmbeddedGraph {
    let pts: Vec<Point> = corners.iter().map(|c| Point::from_slice(c)).collect();
    geodesic_polygon(&SpaceForm::flat(3), &pts, 1).expect("valid polygon")
}

/// Unit-style square of the given side in the xy-plane of ℝ³.
pub fn flat_square(side: f64) -> EmbeddedGraph {
    flat_polygon(&[
        [0.0, 0.0, 0.0],
        [side, 0.0, 0.0],
        [side, side, 0.0],
        [0.0, side, 0.0],
    ])
}

/// Regular polygon with `m` corners at distance `r` from the origin in the
/// first coordinate plane, geodesic edges.
pub fn regular_polygon(space: &SpaceForm, m: usize, r: f64, per_edge: usize) -> Result<EmbeddedGraph> {
    let corners: Vec<Point> = (0..m)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / m as f64;
            embed(space, &[r * a.cos(), r * a.sin()])
        })
        .collect();
    geodesic_polygon(space, &corners, per_edge)
}

/// Theta-graph in ℝ³: three half circles of radius `r` joining the poles
/// (0, 0, ±r) in planes 120° apart. Each pole is a planar symmetric Y vertex.
pub fn theta_graph(r: f64, n: usize) -> EmbeddedGraph {
    theta_in(&SpaceForm::flat(3), r, n).expect("valid theta graph")
}

/// The theta-graph shape pushed into any model of dimension ≥ 3.
pub fn theta_in(space: &SpaceForm, r: f64, n: usize) -> Result<EmbeddedGraph> {
    let top = embed(space, &[0.0, 0.0, r]);
    let bottom = embed(space, &[0.0, 0.0, -r]);
    let edges = (0..3)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / 3.0;
            let mut samples = sample_curve(space, n, |t| {
                let a = PI * t;
                vec![r * a.sin() * phi.cos(), r * a.sin() * phi.sin(), r * a.cos()]
            });
            samples[0] = top.clone();
            samples[n] = bottom.clone();
            EdgeSpec {
                id: format!("arc{k}"),
                endpoints: ("top".into(), "bottom".into()),
                samples,
            }
        })
        .collect();
    EmbeddedGraph::from_parts(
        *space,
        vec![("top".into(), top), ("bottom".into(), bottom)],
        edges,
    )
}

/// 1-skeleton of the cube [0, side]³ with straight edges.
pub fn cube_skeleton(side: f64) -> EmbeddedGraph {
    let space = SpaceForm::flat(3);
    let corner = |i: usize| {
        Point::from_slice(&[
            side * (i & 1) as f64,
            side * ((i >> 1) & 1) as f64,
            side * ((i >> 2) & 1) as f64,
        ])
    };
    let vertices = (0..8).map(|i| (format!("v{i}"), corner(i))).collect();
    let mut edges = Vec::new();
    for i in 0..8usize {
        for bit in [1usize, 2, 4] {
            let j = i | bit;
            if j != i {
                edges.push(EdgeSpec {
                    id: format!("e{i}{j}"),
                    endpoints: (format!("v{i}"), format!("v{j}")),
                    samples: vec![corner(i), corner(j)],
                });
            }
        }
    }
    EmbeddedGraph::from_parts(space, vertices, edges).expect("valid cube")
}

/// Bound on the tangent-coordinate extent of random shapes in `space`.
fn random_extent(space: &SpaceForm) -> f64 {
    (0.2 * space.diameter_limit()).min(1.0)
}

fn random_vec<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim).map(|_| scale * gaussian(rng)).collect()
}

/// Random smooth closed curve: a low-order trigonometric loop in tangent
/// coordinates, scaled into the model's comfortable range. Loops with
/// near-cusps or tight bends are redrawn.
pub fn random_closed_curve<R: Rng>(space: &SpaceForm, rng: &mut R, n: usize) -> Result<EmbeddedGraph> {
    let d = space.dim();
    let extent = random_extent(space);
    loop {
        let center = random_vec(rng, d, 0.2 * extent);
        let modes: Vec<(Vec<f64>, Vec<f64>)> = (1..=3)
            .map(|k| {
                let w = 1.0 / (k * k) as f64;
                (random_vec(rng, d, w), random_vec(rng, d, w))
            })
            .collect();
        let raw = |t: f64| -> Vec<f64> {
            let mut v = vec![0.0; d];
            for (k, (a, b)) in modes.iter().enumerate() {
                let arg = 2.0 * PI * (k + 1) as f64 * t;
                for i in 0..d {
                    v[i] += a[i] * arg.cos() + b[i] * arg.sin();
                }
            }
            v
        };
        let pts: Vec<Vec<f64>> = (0..CHECK_POINTS).map(|i| raw(i as f64 / CHECK_POINTS as f64)).collect();
        let size = pts
            .iter()
            .map(|p| p.iter().map(|c| c * c).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
            .max(1e-9);
        if !is_tame(&pts, size, true) {
            continue;
        }
        let scale = 0.6 * extent / size;
        return closed_curve(space, n, |t| {
            raw(t).iter().zip(&center).map(|(c, o)| o + scale * c).collect()
        });
    }
}

const CHECK_POINTS: usize = 512;

/// Speed ratio and curvature (relative to `size`) of a sampled curve stay
/// moderate.
fn is_tame(pts: &[Vec<f64>], size: f64, closed: bool) -> bool {
    let m = pts.len();
    let range = if closed { 0..m } else { 1..m - 1 };
    let diff = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut speeds = Vec::with_capacity(m);
    let mut max_curv: f64 = 0.0;
    for i in range {
        let prev = &pts[(i + m - 1) % m];
        let next = &pts[(i + 1) % m];
        let v: Vec<f64> = diff(next, prev).iter().map(|c| 0.5 * c).collect();
        let a: Vec<f64> = pts[i].iter().zip(prev.iter().zip(next)).map(|(x, (p, q))| p + q - 2.0 * x).collect();
        let sv = norm(&v);
        speeds.push(sv);
        if sv > 0.0 {
            let va: f64 = v.iter().zip(&a).map(|(x, y)| x * y).sum();
            let perp: Vec<f64> = a.iter().zip(&v).map(|(y, x)| y - x * va / (sv * sv)).collect();
            max_curv = max_curv.max(norm(&perp) / (sv * sv));
        }
    }
    let lo = speeds.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = speeds.iter().copied().fold(0.0, f64::max);
    lo > 0.0 && hi <= 4.0 * lo && max_curv * size <= 3.5
}

/// Random theta-graph: two random vertices joined by three distinct smooth
/// arcs bulging in random directions.
pub fn random_theta<R: Rng>(space: &SpaceForm, rng: &mut R, n: usize) -> Result<EmbeddedGraph> {
    let d = space.dim();
    let extent = random_extent(space);
    let a = random_vec(rng, d, 0.3 * extent);
    let b = random_vec(rng, d, 0.3 * extent);
    let top = embed(space, &a);
    let bottom = embed(space, &b);
    let mut edges = Vec::with_capacity(3);
    while edges.len() < 3 {
        let w1 = random_vec(rng, d, 0.25 * extent);
        let w2 = random_vec(rng, d, 0.08 * extent);
        let arc = |t: f64| -> Vec<f64> {
            let s1 = (PI * t).sin();
            let s2 = (2.0 * PI * t).sin();
            (0..d)
                .map(|i| a[i] + (b[i] - a[i]) * t + s1 * w1[i] + s2 * w2[i])
                .collect()
        };
        let pts: Vec<Vec<f64>> = (0..=CHECK_POINTS).map(|i| arc(i as f64 / CHECK_POINTS as f64)).collect();
        let size = pts
            .iter()
            .map(|p| p.iter().zip(&a).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
            .max(1e-9);
        if !is_tame(&pts, size, false) {
            continue;
        }
        let mut samples = sample_curve(space, n, arc);
        samples[0] = top.clone();
        samples[n] = bottom.clone();
        edges.push(EdgeSpec {
            id: format!("arc{}", edges.len()),
            endpoints: ("top".into(), "bottom".into()),
            samples,
        });
    }
    EmbeddedGraph::from_parts(
        *space,
        vec![("top".into(), top), ("bottom".into(), bottom)],
        edges,
    )
}

/// Random geodesic polygon with 3 to 6 corners.
pub fn random_polygon<R: Rng>(space: &SpaceForm, rng: &mut R, per_edge: usize) -> Result<EmbeddedGraph> {
    let m = rng.gen_range(3..=6);
    let extent = random_extent(space);
    let corners: Vec<Point> = (0..m)
        .map(|_| embed(space, &random_vec(rng, space.dim(), 0.4 * extent)))
        .collect();
    geodesic_polygon(space, &corners, per_edge)
}

/// One of the random graph families above, chosen uniformly.
pub fn random_graph<R: Rng>(space: &SpaceForm, rng: &mut R, n: usize) -> Result<EmbeddedGraph> {
    match rng.gen_range(0..3) {
        0 => random_closed_curve(space, rng, n),
        1 => random_theta(space, rng, n),
        _ => random_polygon(space, rng, n / 3),
    }
}

/// Random apex at distance at least `clearance` from every sample of `graph`.
pub fn random_apex<R: Rng>(graph: &EmbeddedGraph, rng: &mut R, clearance: f64) -> Point {
    let space = &graph.space;
    let extent = random_extent(space);
    loop {
        let p = embed(space, &random_vec(rng, space.dim(), 0.5 * extent));
        let ok = graph
            .samples()
            .all(|q| space.dist(&p, q).map(|d| d > clearance).unwrap_or(false));
        if ok {
            return p;
        }
    }
}
