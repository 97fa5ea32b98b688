//! Geodesic cones over a graph and their constant-curvature developments.
//!
//! The development re-draws every edge in the 2-D model of the same
//! curvature, in polar coordinates (r, θ) about the developed apex, keeping
//! the distance r(s) to the apex and the arclength of the edge. Along the
//! edge ds² = dr² + f(r)²dθ², hence θ′(s) = √(1 − r′²)/f(r).

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DVector;
use rayon::prelude::*;

use crate::curvature::{edge_curvature, extend_interior, trapezoid};
use crate::error::{Error, Result};
use crate::graph::{edge_tangents, end_tangent, EdgeCurve, EmbeddedGraph};
use crate::spaceform::{Model, Point, SpaceForm, TangentVector};

/// Minimum distance between the apex and the graph.
pub const APEX_CLEARANCE: f64 = 1e-6;
/// Slack on |r′| ≤ 1 and on the θ′ radicand before reporting an error.
pub const RADIAL_SLACK: f64 = 1e-6;
/// Intervals of the composite Simpson rule along each cone ruling.
pub const RULING_INTERVALS: usize = 32;

/// Distance to the apex along an edge and its arclength derivative.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    pub rprime: Vec<f64>,
    /// Unit radial direction at each sample, pointing away from the apex.
    pub u: Vec<TangentVector>,
    /// Unit curve tangent at each sample.
    pub tangents: Vec<TangentVector>,
}

pub fn radial_profile(space: &SpaceForm, p: &Point, edge: &EdgeCurve) -> Result<RadialProfile> {
    let tangents = edge_tangents(space, edge)?;
    let n = edge.len();
    let mut r = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut rprime = Vec::with_capacity(n);
    let limit = space.diameter_limit() - APEX_CLEARANCE;
    for (x, t) in edge.samples.iter().zip(&tangents) {
        let d = space.dist(p, x).map_err(|e| match e {
            Error::DiameterBound { distance, limit } => Error::ConjugatePoint { r: distance, limit },
            other => other,
        })?;
        if d <= APEX_CLEARANCE {
            return Err(Error::ApexOnGraph {
                edge: edge.id.clone(),
                distance: d,
            });
        }
        if d >= limit {
            return Err(Error::ConjugatePoint {
                r: d,
                limit: space.diameter_limit(),
            });
        }
        let back = space.log_map(x, p)?;
        let radial = space.normalize(&back)?.neg();
        let mut rp = space.inner(&radial, t)?;
        if rp.abs() > 1.0 + RADIAL_SLACK {
            return Err(Error::ArclengthInconsistency {
                edge: edge.id.clone(),
                radicand: 1.0 - rp * rp,
            });
        }
        rp = rp.clamp(-1.0, 1.0);
        r.push(d);
        u.push(radial);
        rprime.push(rp);
    }
    Ok(RadialProfile {
        r,
        rprime,
        u,
        tangents,
    })
}

/// Development of one edge.
#[derive(Debug, Clone)]
pub struct EdgeDevelopment {
    pub edge: String,
    pub s: Vec<f64>,
    pub r: Vec<f64>,
    pub rprime: Vec<f64>,
    /// Swept angle, starting at 0 on every edge.
    pub theta: Vec<f64>,
    /// Developed curvature against the outward conormal. Interior values
    /// come from the developed curve; the end values are extrapolated.
    pub khat_nu: Vec<f64>,
    /// ∫ F(r) θ′ ds.
    pub area: f64,
}

impl EdgeDevelopment {
    pub fn swept_angle(&self) -> f64 {
        *self.theta.last().unwrap_or(&0.0)
    }
}

#[derive(Debug, Clone)]
pub struct ConeDevelopment {
    pub apex: Point,
    pub model: SpaceForm,
    pub per_edge: Vec<EdgeDevelopment>,
    pub hat_density: f64,
    pub hat_area: f64,
}

/// Point with polar coordinates (r, θ) about the origin of a 2-D model,
/// together with the unit polar frame (e_r, e_θ) there.
pub fn polar_point(surface: &SpaceForm, r: f64, theta: f64) -> (Point, DVector<f64>, DVector<f64>) {
    let (c, s) = (theta.cos(), theta.sin());
    match surface.model() {
        Model::Flat => (
            Point::from_slice(&[r * c, r * s]),
            DVector::from_vec(vec![c, s]),
            DVector::from_vec(vec![-s, c]),
        ),
        Model::Hyperbolic => {
            let k = surface.curv();
            let (ch, sh) = ((k * r).cosh(), (k * r).sinh());
            (
                Point::from_slice(&[ch / k, sh / k * c, sh / k * s]),
                DVector::from_vec(vec![sh, ch * c, ch * s]),
                DVector::from_vec(vec![0.0, -s, c]),
            )
        }
        Model::Spherical => {
            let b = surface.curv();
            let (cb, sb) = ((b * r).cos(), (b * r).sin());
            (
                Point::from_slice(&[cb / b, sb / b * c, sb / b * s]),
                DVector::from_vec(vec![-sb, cb * c, cb * s]),
                DVector::from_vec(vec![0.0, -s, c]),
            )
        }
    }
}

/// Develops one edge about apex `p`.
pub fn develop_edge(space: &SpaceForm, p: &Point, edge: &EdgeCurve) -> Result<EdgeDevelopment> {
    let prof = radial_profile(space, p, edge)?;
    let n = edge.len();
    let mut area_density = Vec::with_capacity(n);
    for (&r, &rp) in prof.r.iter().zip(&prof.rprime) {
        let radicand = 1.0 - rp * rp;
        if radicand < -RADIAL_SLACK {
            return Err(Error::ArclengthInconsistency {
                edge: edge.id.clone(),
                radicand,
            });
        }
        let c = space.comparison_fns(r)?;
        let w = radicand.max(0.0).sqrt() / c.f;
        area_density.push(c.big_f * w);
    }
    // Between samples the edge is a geodesic segment, over which θ′
    // integrates exactly to the apex angle of the developed triangle.
    let mut theta = Vec::with_capacity(n);
    theta.push(0.0);
    for i in 1..n {
        let h = edge.s[i] - edge.s[i - 1];
        theta.push(theta[i - 1] + triangle_apex_angle(space, prof.r[i - 1], prof.r[i], h));
    }
    let area = trapezoid(&edge.s, &area_density);

    // Re-embed the developed edge and measure its curvature there.
    let surface = space.surface();
    let mut pts = Vec::with_capacity(n);
    let mut frames = Vec::with_capacity(n);
    for (&r, &th) in prof.r.iter().zip(&theta) {
        let (x, er, et) = polar_point(&surface, r, th);
        pts.push(x);
        frames.push((er, et));
    }
    let developed = EdgeCurve::from_samples(&surface, edge.id.clone(), edge.endpoints, pts)?;
    let dev_tangents = edge_tangents(&surface, &developed)?;
    let curv = edge_curvature(&surface, &developed)?;
    let interior: Vec<f64> = curv
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let i = j + 1;
            let t = &dev_tangents[i].vec;
            let (er, et) = &frames[i];
            let nu = er * surface.form(t, et) - et * surface.form(t, er);
            let nn = surface.norm(&nu);
            surface.form(&c.kvec.vec, &nu) / nn
        })
        .collect();
    let khat_nu = extend_interior(&edge.s, &interior);

    Ok(EdgeDevelopment {
        edge: edge.id.clone(),
        s: edge.s.clone(),
        r: prof.r,
        rprime: prof.rprime,
        theta,
        khat_nu,
        area,
    })
}

/// Angle at the apex of a triangle with sides `a`, `b` from the apex and
/// opposite side `c`, in the 2-D model of the space's curvature. Uses the
/// half-angle form S(c)² = S(a − b)² + g(a)g(b)·sin²(γ/2).
pub fn triangle_apex_angle(space: &SpaceForm, a: f64, b: f64, c: f64) -> f64 {
    let k = space.curv();
    let (sc, sd, g) = match space.model() {
        Model::Flat => (0.5 * c, 0.5 * (a - b), a * b),
        Model::Hyperbolic => (
            (0.5 * k * c).sinh(),
            (0.5 * k * (a - b)).sinh(),
            (k * a).sinh() * (k * b).sinh(),
        ),
        Model::Spherical => (
            (0.5 * k * c).sin(),
            (0.5 * k * (a - b)).sin(),
            (k * a).sin() * (k * b).sin(),
        ),
    };
    let q = ((sc * sc - sd * sd) / g).clamp(0.0, 1.0);
    2.0 * q.sqrt().asin()
}

/// Develops the cone p × Γ into the 2-D model of the same curvature.
pub fn develop_cone(graph: &EmbeddedGraph, p: &Point) -> Result<ConeDevelopment> {
    let space = &graph.space;
    let per_edge = graph
        .edges
        .par_iter()
        .map(|e| develop_edge(space, p, e))
        .collect::<Result<Vec<_>>>()?;
    let total_angle: f64 = per_edge.iter().map(EdgeDevelopment::swept_angle).sum();
    let hat_area = per_edge.iter().map(|e| e.area).sum();
    Ok(ConeDevelopment {
        apex: p.clone(),
        model: space.surface(),
        per_edge,
        hat_density: total_angle / (2.0 * PI),
        hat_area,
    })
}

/// Unit initial directions at `p` of the geodesics to every sample of `edge`.
fn apex_directions(space: &SpaceForm, p: &Point, edge: &EdgeCurve) -> Result<Vec<(f64, TangentVector)>> {
    edge.samples
        .iter()
        .map(|x| {
            let v = space.log_map(p, x).map_err(|e| match e {
                Error::CoincidentPoints => Error::ApexOnGraph {
                    edge: edge.id.clone(),
                    distance: 0.0,
                },
                other => other,
            })?;
            let d = space.norm(&v.vec);
            if d <= APEX_CLEARANCE {
                return Err(Error::ApexOnGraph {
                    edge: edge.id.clone(),
                    distance: d,
                });
            }
            Ok((d, v.scaled(1.0 / d)))
        })
        .collect()
}

/// Θ(C, p): length of the spherical image of the graph in the unit sphere
/// of T_pM, divided by 2π.
pub fn ambient_cone_density(graph: &EmbeddedGraph, p: &Point) -> Result<f64> {
    let space = &graph.space;
    let mut total = 0.0;
    for e in &graph.edges {
        let dirs = apex_directions(space, p, e)?;
        for w in dirs.windows(2) {
            total += space.angle(&w[0].1, &w[1].1)?;
        }
    }
    Ok(total / (2.0 * PI))
}

/// Area of the cone patch over one edge: the ruled surface
/// G(t, s) = exp_p(t·u₀(s)), t ∈ [0, r(s)].
pub fn ambient_edge_cone_area(space: &SpaceForm, p: &Point, edge: &EdgeCurve) -> Result<f64> {
    edge_cone_area(space, p, edge, RULING_INTERVALS)
}

/// Ruled-patch area with `m` (even) Simpson intervals along each ruling.
/// Rulings are parametrized by the fraction τ of their length, so the
/// s-derivative at fixed τ reuses one node grid G(τ_j, s_i).
pub(crate) fn edge_cone_area(space: &SpaceForm, p: &Point, edge: &EdgeCurve, m: usize) -> Result<f64> {
    let dirs = apex_directions(space, p, edge)?;
    let n = edge.len();
    let s = &edge.s;
    let nodes: Vec<Vec<Point>> = dirs
        .iter()
        .map(|(r, u)| {
            (0..=m)
                .map(|j| space.exp_unchecked(p, &(&u.vec * (r * j as f64 / m as f64))))
                .collect()
        })
        .collect();
    let mut element = vec![0.0; n];
    for (i, elem) in element.iter_mut().enumerate() {
        let r = dirs[i].0;
        let (idx, coef): ([usize; 3], [f64; 3]) = if i == 0 {
            let (h1, h2) = (s[1] - s[0], s[2] - s[1]);
            (
                [0, 1, 2],
                [-(2.0 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2))],
            )
        } else if i == n - 1 {
            let (h1, h2) = (s[n - 1] - s[n - 2], s[n - 2] - s[n - 3]);
            (
                [n - 1, n - 2, n - 3],
                [(2.0 * h1 + h2) / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), h1 / (h2 * (h1 + h2))],
            )
        } else {
            let (hm, hp) = (s[i] - s[i - 1], s[i + 1] - s[i]);
            (
                [i - 1, i, i + 1],
                [-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))],
            )
        };
        let mut acc = 0.0;
        #[allow(clippy::needless_range_loop)]
        for j in 1..=m {
            let mut ds = DVector::zeros(space.ambient_dim());
            for (&k, &c) in idx.iter().zip(&coef) {
                ds += nodes[k][j].coords() * c;
            }
            let here = &nodes[i][j];
            let ds = space.project_tangent(here, &ds);
            let dt = space.geodesic_velocity(p, &dirs[i].1.vec, r * j as f64 / m as f64);
            // The radial part of ∂_s G lies along the ruling and drops out.
            let perp = &ds - &dt * space.form(&ds, &dt);
            let w = if j == m {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * space.norm(&perp);
        }
        *elem = acc * r / (3.0 * m as f64);
    }
    Ok(trapezoid(s, &element))
}

/// Area(p × Γ) in the ambient metric.
pub fn ambient_cone_area(graph: &EmbeddedGraph, p: &Point) -> Result<f64> {
    cone_area_with(graph, p, RULING_INTERVALS)
}

pub(crate) fn cone_area_with(graph: &EmbeddedGraph, p: &Point, m: usize) -> Result<f64> {
    let space = &graph.space;
    graph
        .edges
        .par_iter()
        .map(|e| edge_cone_area(space, p, e, m))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().sum())
}

/// k⃗·ν_C at the interior samples, ν_C the unit conormal of the cone along
/// the edge pointing away from the apex. `None` where the edge runs radially.
pub fn cone_conormal_curvature(space: &SpaceForm, p: &Point, edge: &EdgeCurve) -> Result<Vec<Option<f64>>> {
    let prof = radial_profile(space, p, edge)?;
    let curv = edge_curvature(space, edge)?;
    Ok(curv
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let i = j + 1;
            let nu = &prof.u[i].vec - &prof.tangents[i].vec * prof.rprime[i];
            let nn = space.norm(&nu);
            (nn >= 1e-8).then(|| space.form(&c.kvec.vec, &nu) / nn)
        })
        .collect())
}

/// Σ over edge-ends at each vertex of (π/2 − ∠(T, direction to p)).
pub fn apex_angle_terms(graph: &EmbeddedGraph, p: &Point) -> Result<Vec<f64>> {
    let space = &graph.space;
    let mut terms = vec![0.0; graph.vertices.len()];
    for e in &graph.edges {
        for (at_start, v) in [(true, e.endpoints.0), (false, e.endpoints.1)] {
            let t = end_tangent(space, e, at_start)?;
            let q = &graph.vertices[v].point;
            let to_apex = space.log_map(q, p).map_err(|err| match err {
                Error::CoincidentPoints => Error::ApexOnGraph {
                    edge: e.id.clone(),
                    distance: 0.0,
                },
                other => other,
            })?;
            terms[v] += FRAC_PI_2 - space.angle(&t, &to_apex)?;
        }
    }
    Ok(terms)
}

/// Terms of the Gauss–Bonnet identity for the developed cone:
/// 2πΘ(Ĉ,p) − K·Area(Ĉ) + Σ∫k̂·ν̂ ds − Σ(π/2 − ∠) = 0.
#[derive(Debug, Clone, Copy)]
pub struct GaussBonnet {
    pub density_term: f64,
    pub area_term: f64,
    pub boundary_term: f64,
    pub vertex_term: f64,
}

impl GaussBonnet {
    pub fn residual(&self) -> f64 {
        (self.density_term - self.area_term + self.boundary_term - self.vertex_term).abs()
    }
}

pub fn gauss_bonnet_terms(graph: &EmbeddedGraph, p: &Point, dev: &ConeDevelopment) -> Result<GaussBonnet> {
    let boundary_term = dev
        .per_edge
        .iter()
        .map(|e| trapezoid(&e.s, &e.khat_nu))
        .sum();
    let vertex_term = apex_angle_terms(graph, p)?.iter().sum();
    Ok(GaussBonnet {
        density_term: 2.0 * PI * dev.hat_density,
        area_term: graph.space.sectional_curvature() * dev.hat_area,
        boundary_term,
        vertex_term,
    })
}

pub fn gauss_bonnet_residual(graph: &EmbeddedGraph, p: &Point) -> Result<f64> {
    let dev = develop_cone(graph, p)?;
    Ok(gauss_bonnet_terms(graph, p, &dev)?.residual())
}
