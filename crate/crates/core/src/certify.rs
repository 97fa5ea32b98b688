//! Density bounds, cone-area extrema over the convex hull, and regularity
//! certificates derived from the total-curvature thresholds.
//!
//! The convex hull of the graph is replaced by a geodesic ball about the
//! Riemannian center of mass of the samples. Extremizing over the ball is
//! conservative for both the hyperbolic infimum and the spherical supremum.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DVector;
use rayon::prelude::*;

use crate::cone::{ambient_cone_area, cone_area_with};
use crate::curvature::TcReport;
use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;
use crate::spaceform::{Model, Point, SpaceForm};

/// Density of the Y-cone.
pub const C_Y: f64 = 1.5;
/// Minimum density at a self-intersection or branch point.
pub const C_X: f64 = 2.0;

/// Density of the T-cone, (3/π)·arccos(−1/3).
pub fn c_t() -> f64 {
    3.0 / PI * (-1.0f64 / 3.0).acos()
}

const CENTER_STEP_TOL: f64 = 1e-10;
const CENTER_MAX_ITER: usize = 200;
/// Grid points closer than this to the graph are always skipped.
pub const EXCLUSION: f64 = 1e-4;
/// Target sample count of the reduced graph used while searching.
const SEARCH_SAMPLES: usize = 256;
const SEARCH_RULING_INTERVALS: usize = 8;
const SIMPLEX_TOL: f64 = 1e-6;
/// Relative score differences below this are ties, resolved toward the
/// earlier grid point (the hull center comes first).
const TIE_TOL: f64 = 1e-5;
const SIMPLEX_MAX_EVALS: usize = 4000;

/// Heuristic spread beyond which spherical hull extremization is flagged.
const SPREAD_WARNING: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    EmbeddedOrY,
    YSingularitiesOnly,
    SimpleCurveEmbedded,
    NoCertificate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::EmbeddedOrY => "EmbeddedOrY",
            Verdict::YSingularitiesOnly => "YSingularitiesOnly",
            Verdict::SimpleCurveEmbedded => "SimpleCurveEmbedded",
            Verdict::NoCertificate => "NoCertificate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Heuristic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Heuristic => "heuristic",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub verdict: Verdict,
    pub tc_total: f64,
    pub threshold: f64,
    /// Signed correction added to the threshold: +κ²A or −b²Ā.
    pub cone_area_term: f64,
    pub margin: f64,
    pub mode: Mode,
    pub extremal_apex: Option<Point>,
    pub notes: String,
}

#[derive(Debug, Clone)]
pub struct HullApprox {
    pub center: Point,
    pub radius: f64,
    pub grid: Vec<Point>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

#[derive(Debug, Clone)]
pub struct ConeAreaExtremum {
    pub value: f64,
    pub apex: Point,
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub mode: Mode,
    pub simple_curve: bool,
    pub grid_n: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            mode: Mode::Strict,
            simple_curve: false,
            grid_n: 1000,
        }
    }
}

/// −1 hyperbolic, 0 flat, +1 spherical.
fn area_sign(space: &SpaceForm) -> f64 {
    match space.model() {
        Model::Flat => 0.0,
        Model::Hyperbolic => -1.0,
        Model::Spherical => 1.0,
    }
}

/// Upper bound (TC ± curv²·Area(p × Γ))/2π for the density at p of a
/// stationary surface spanning the graph.
pub fn density_bound(graph: &EmbeddedGraph, p: &Point, tc: &TcReport) -> Result<f64> {
    let space = &graph.space;
    let sign = area_sign(space);
    let area_term = if sign == 0.0 {
        0.0
    } else {
        sign * space.curv().powi(2) * ambient_cone_area(graph, p)?
    };
    Ok((tc.total + area_term) / (2.0 * PI))
}

/// Every sample once: vertices, then the interior samples of each edge.
fn distinct_samples(graph: &EmbeddedGraph) -> Vec<&Point> {
    graph
        .vertices
        .iter()
        .map(|v| &v.point)
        .chain(
            graph
                .edges
                .iter()
                .flat_map(|e| e.samples[1..e.len() - 1].iter()),
        )
        .collect()
}

/// Riemannian center of mass by fixed-point iteration on log-map averages.
pub fn center_of_mass(space: &SpaceForm, points: &[&Point]) -> Result<Point> {
    if points.is_empty() {
        return Err(Error::InvalidGraph("no samples".into()));
    }
    let mut mean = DVector::zeros(space.ambient_dim());
    for p in points {
        mean += p.coords();
    }
    mean /= points.len() as f64;
    if space.model() == Model::Spherical && mean.norm() < 1e-12 {
        return Err(Error::CenterDiverged("samples have no preferred hemisphere".into()));
    }
    let mut c = Point::new(space.project(&mean));
    for _ in 0..CENTER_MAX_ITER {
        let mut step = DVector::zeros(space.ambient_dim());
        for p in points {
            match space.log_map(&c, p) {
                Ok(v) => step += v.vec,
                Err(Error::CoincidentPoints) => {}
                Err(e) => return Err(Error::CenterDiverged(e.to_string())),
            }
        }
        step /= points.len() as f64;
        let len = space.norm(&step);
        if !len.is_finite() {
            return Err(Error::CenterDiverged("non-finite update".into()));
        }
        c = space.exp_unchecked(&c, &step);
        if len < CENTER_STEP_TOL {
            return Ok(c);
        }
    }
    Err(Error::CenterDiverged(format!(
        "no convergence in {CENTER_MAX_ITER} iterations"
    )))
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut x = 0.0;
    while i > 0 {
        x += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    x
}

fn primes(count: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(count);
    let mut k = 2;
    while out.len() < count {
        if out.iter().all(|p| k % p != 0) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// `count` points of the Halton sequence lying in the unit ball of ℝ^d.
fn halton_ball(d: usize, count: usize) -> Vec<Vec<f64>> {
    let bases = primes(d);
    let mut out = Vec::with_capacity(count);
    let mut i = 1;
    while out.len() < count {
        let y: Vec<f64> = bases.iter().map(|&b| 2.0 * radical_inverse(i, b) - 1.0).collect();
        if y.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
            out.push(y);
        }
        i += 1;
    }
    out
}

/// Geodesic-ball outer approximation of the convex hull.
pub fn hull_approx(graph: &EmbeddedGraph, grid_n: usize) -> Result<HullApprox> {
    if grid_n == 0 {
        return Err(Error::InvalidArgument("grid size must be at least 1".into()));
    }
    let space = &graph.space;
    let pts = distinct_samples(graph);
    let center = center_of_mass(space, &pts)?;
    let mut radius: f64 = 0.0;
    for p in &pts {
        radius = radius.max(space.dist(&center, p)?);
    }
    let mut warnings = Vec::new();
    if space.model() == Model::Spherical {
        let limit = space.diameter_limit();
        if radius >= 0.5 * limit {
            return Err(Error::DiameterBound {
                distance: 2.0 * radius,
                limit,
            });
        }
        if 2.0 * radius > SPREAD_WARNING * limit {
            warnings.push(format!(
                "hull ball diameter {:.6} exceeds {SPREAD_WARNING}·pi/b; cone areas near the ball boundary are poorly conditioned",
                2.0 * radius
            ));
        }
    }
    let basis = space.tangent_basis(&center);
    let mut grid = Vec::with_capacity(grid_n);
    grid.push(center.clone());
    for y in halton_ball(space.dim(), grid_n - 1) {
        grid.push(ball_point(space, &center, &basis, &y, radius));
    }
    Ok(HullApprox {
        center,
        radius,
        grid,
        warnings,
    })
}

fn ball_point(space: &SpaceForm, c: &Point, basis: &[DVector<f64>], y: &[f64], scale: f64) -> Point {
    let mut v = DVector::zeros(space.ambient_dim());
    for (b, yi) in basis.iter().zip(y) {
        v += b * (scale * yi);
    }
    space.exp_unchecked(c, &v)
}

/// Copy of the graph with about `SEARCH_SAMPLES` samples in total, used for
/// the many cone-area evaluations of the search.
fn search_graph(graph: &EmbeddedGraph) -> EmbeddedGraph {
    let total: usize = graph.edges.iter().map(|e| e.len()).sum();
    if total <= SEARCH_SAMPLES + SEARCH_SAMPLES / 4 {
        return graph.clone();
    }
    let shortest = graph
        .edges
        .iter()
        .map(|e| e.length())
        .fold(f64::INFINITY, f64::min);
    let h = (graph.total_length() / SEARCH_SAMPLES as f64).min(shortest);
    graph.resample_arclength(h).unwrap_or_else(|_| graph.clone())
}

struct Search<'a> {
    graph: &'a EmbeddedGraph,
    coarse: EmbeddedGraph,
    center: &'a Point,
    basis: Vec<DVector<f64>>,
    radius: f64,
    sign: f64,
    clearance: f64,
}

impl Search<'_> {
    fn clear_of_graph(&self, p: &Point) -> bool {
        let space = &self.graph.space;
        self.coarse
            .samples()
            .all(|q| space.dist(p, q).map(|d| d > self.clearance).unwrap_or(false))
    }

    /// Signed score of an apex (lower is better); infinite when inadmissible.
    fn score_point(&self, p: &Point) -> f64 {
        if !self.clear_of_graph(p) {
            return f64::INFINITY;
        }
        match cone_area_with(&self.coarse, p, SEARCH_RULING_INTERVALS) {
            Ok(a) if a.is_finite() => self.sign * a,
            _ => f64::INFINITY,
        }
    }

    fn point(&self, y: &DVector<f64>) -> Point {
        ball_point(&self.graph.space, self.center, &self.basis, y.as_slice(), 1.0)
    }

    fn score(&self, y: &DVector<f64>) -> f64 {
        if y.norm() > self.radius * (1.0 + 1e-12) {
            return f64::INFINITY;
        }
        self.score_point(&self.point(y))
    }

    fn coords(&self, p: &Point) -> DVector<f64> {
        let space = &self.graph.space;
        match space.log_map(self.center, p) {
            Ok(v) => DVector::from_iterator(
                self.basis.len(),
                self.basis.iter().map(|b| space.form(b, &v.vec)),
            ),
            Err(_) => DVector::zeros(self.basis.len()),
        }
    }
}

/// Nelder–Mead on `f` from `x0` with initial edge length `step`, until the
/// simplex diameter falls below `SIMPLEX_TOL`.
fn nelder_mead(f: impl Fn(&DVector<f64>) -> f64, x0: DVector<f64>, f0: f64, step: f64) -> (DVector<f64>, f64) {
    let d = x0.len();
    let mut simplex = vec![(x0.clone(), f0)];
    for i in 0..d {
        let mut x = x0.clone();
        x[i] += step;
        let mut fx = f(&x);
        if !fx.is_finite() {
            x[i] -= 2.0 * step;
            fx = f(&x);
        }
        simplex.push((x, fx));
    }
    let mut evals = d;
    while evals < SIMPLEX_MAX_EVALS {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| (x - &simplex[0].0).norm())
            .fold(0.0, f64::max);
        if diameter < SIMPLEX_TOL {
            break;
        }
        let centroid = simplex[..d]
            .iter()
            .fold(DVector::zeros(d), |acc, (x, _)| acc + x)
            / d as f64;
        let worst = simplex[d].clone();
        let reflect = &centroid + (&centroid - &worst.0);
        let fr = f(&reflect);
        evals += 1;
        if fr < simplex[0].1 {
            let expand = &centroid + (&centroid - &worst.0) * 2.0;
            let fe = f(&expand);
            evals += 1;
            simplex[d] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (reflect, fr);
        } else {
            let contract = if fr < worst.1 {
                &centroid + (&reflect - &centroid) * 0.5
            } else {
                &centroid + (&worst.0 - &centroid) * 0.5
            };
            let fc = f(&contract);
            evals += 1;
            if fc < worst.1.min(fr) {
                simplex[d] = (contract, fc);
            } else {
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    v.0 = &best + (&v.0 - &best) * 0.5;
                    v.1 = f(&v.0);
                }
                evals += d;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

/// Minimum or maximum of the ambient cone area over the hull ball: grid
/// search, then simplex refinement in tangent coordinates at the center.
pub fn extremal_cone_area(graph: &EmbeddedGraph, hull: &HullApprox, mode: Extremum) -> Result<ConeAreaExtremum> {
    let space = &graph.space;
    let coarse = search_graph(graph);
    // Between samples the quadrature is only trusted a few spacings away
    // from the curve.
    let spacing = coarse
        .edges
        .iter()
        .flat_map(|e| e.s.windows(2).map(|w| w[1] - w[0]))
        .fold(0.0, f64::max);
    let search = Search {
        graph,
        clearance: EXCLUSION.max(2.0 * spacing),
        coarse,
        center: &hull.center,
        basis: space.tangent_basis(&hull.center),
        radius: hull.radius,
        sign: if mode == Extremum::Min { 1.0 } else { -1.0 },
    };
    let scores: Vec<f64> = hull.grid.par_iter().map(|p| search.score_point(p)).collect();
    let lowest = scores.iter().copied().fold(f64::INFINITY, f64::min);
    if !lowest.is_finite() {
        return Err(Error::InvalidArgument(
            "no grid point of the hull ball is clear of the graph".into(),
        ));
    }
    let tie = TIE_TOL * (1.0 + lowest.abs());
    let best = scores.iter().position(|&s| s <= lowest + tie).unwrap_or(0);
    let best_score = scores[best];
    let grid_step = hull.radius * (hull.grid.len() as f64).powf(-1.0 / space.dim() as f64);
    let step = grid_step.max(10.0 * SIMPLEX_TOL);
    let y0 = search.coords(&hull.grid[best]);
    let (y, refined) = nelder_mead(|y| search.score(y), y0.clone(), best_score, step);
    let y = if refined < best_score - tie { y } else { y0 };
    let apex = search.point(&y);
    let value = ambient_cone_area(graph, &apex)?;
    Ok(ConeAreaExtremum { value, apex })
}

const NOTE_HEURISTIC: &str = "non-rigorous: cone area from a sampled extremum over the hull ball";
const NOTE_Y: &str = "assumes the spanning surface is (M,0,delta)-minimizing in a 3-manifold; only the curvature inequality is checked; \
the conclusion does not apply if the surface is a subset of the T stationary cone";
const NOTE_SIMPLE: &str = "applies to branched minimal surfaces bounded by the simple closed curve";

/// Regularity certificates for surfaces spanning the graph. All verdicts
/// whose threshold is met are returned, strongest first; otherwise a single
/// `NoCertificate` measured against the 3π threshold.
pub fn certify(graph: &EmbeddedGraph, tc: &TcReport, opts: &CertifyOptions) -> Result<Vec<Certificate>> {
    let space = &graph.space;
    if opts.simple_curve && !graph.is_simple_cycle() {
        return Err(Error::InvalidArgument(
            "the simple-curve threshold needs a graph that is a single closed curve".into(),
        ));
    }
    let curv2 = space.curv().powi(2);
    let mut notes = Vec::new();
    let mut apex = None;
    // Signed correction to the thresholds; None when no bound is available.
    let correction: Option<f64> = match (space.model(), opts.mode) {
        (Model::Flat, _) => Some(0.0),
        (Model::Hyperbolic, Mode::Strict) => {
            notes.push("hyperbolic cone-area term omitted (A >= 0)".to_string());
            Some(0.0)
        }
        (Model::Hyperbolic, Mode::Heuristic) => {
            let hull = hull_approx(graph, opts.grid_n)?;
            notes.extend(hull.warnings.iter().cloned());
            let ext = extremal_cone_area(graph, &hull, Extremum::Min)?;
            notes.push(NOTE_HEURISTIC.to_string());
            apex = Some(ext.apex);
            Some(curv2 * ext.value)
        }
        (Model::Spherical, Mode::Strict) => {
            let hull = hull_approx(graph, 1)?;
            notes.extend(hull.warnings.iter().cloned());
            let r_max = 2.0 * hull.radius;
            match space.comparison_fns(r_max) {
                Ok(c) => {
                    let bound = graph.total_length() * c.big_f / c.f;
                    notes.push(format!(
                        "spherical cone area bounded by Length*F(r_max)/f(r_max) = {bound:.6} with r_max = {r_max:.6}"
                    ));
                    Some(-curv2 * bound)
                }
                Err(_) => {
                    notes.push(format!(
                        "r_max = {r_max:.6} reaches pi/b; no rigorous cone-area bound"
                    ));
                    None
                }
            }
        }
        (Model::Spherical, Mode::Heuristic) => {
            let hull = hull_approx(graph, opts.grid_n)?;
            notes.extend(hull.warnings.iter().cloned());
            let ext = extremal_cone_area(graph, &hull, Extremum::Max)?;
            notes.push(NOTE_HEURISTIC.to_string());
            apex = Some(ext.apex);
            Some(-curv2 * ext.value)
        }
    };
    let tc_total = tc.total;
    let base_note = notes.join("; ");
    let make = |verdict: Verdict, threshold: f64, term: f64, extra: Option<&str>| {
        let notes = match extra {
            Some(x) if base_note.is_empty() => x.to_string(),
            Some(x) => format!("{base_note}; {x}"),
            None => base_note.clone(),
        };
        Certificate {
            verdict,
            tc_total,
            threshold,
            cone_area_term: term,
            margin: threshold + term - tc_total,
            mode: opts.mode,
            extremal_apex: apex.clone(),
            notes,
        }
    };
    let Some(term) = correction else {
        return Ok(vec![make(Verdict::NoCertificate, 3.0 * PI, f64::NEG_INFINITY, None)]);
    };
    let mut out = Vec::new();
    if tc_total <= 3.0 * PI + term {
        out.push(make(Verdict::EmbeddedOrY, 3.0 * PI, term, None));
    }
    if space.dim() == 3 && tc_total <= 2.0 * PI * c_t() + term {
        out.push(make(Verdict::YSingularitiesOnly, 2.0 * PI * c_t(), term, Some(NOTE_Y)));
    }
    if opts.simple_curve {
        let threshold = 2.0 * PI * C_X;
        let ok = if space.model() == Model::Spherical {
            tc_total < threshold + term
        } else {
            tc_total <= threshold + term
        };
        if ok {
            out.push(make(Verdict::SimpleCurveEmbedded, threshold, term, Some(NOTE_SIMPLE)));
        }
    }
    if out.is_empty() {
        out.push(make(Verdict::NoCertificate, 3.0 * PI, term, None));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{cone_total_curvature, TcOptions};
    use crate::fixtures;

    #[test]
    fn thresholds() {
        assert!((2.0 * PI * c_t() - 11.46380).abs() < 1e-5);
        assert!((c_t() - 1.8245).abs() < 1e-4);
        assert!((2.0 * c_t() - 3.649).abs() < 1e-3);
        assert_eq!(2.0 * PI * C_Y, 3.0 * PI);
    }

    #[test]
    fn halton_points_in_ball() {
        let pts = halton_ball(3, 500);
        assert_eq!(pts.len(), 500);
        assert!(pts.iter().all(|y| y.iter().map(|c| c * c).sum::<f64>() <= 1.0));
        assert!((radical_inverse(6, 2) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn circle_center_is_centroid() {
        let g = fixtures::flat_circle(1.0, 256);
        let hull = hull_approx(&g, 50).unwrap();
        assert!(hull.center.coords().norm() < 1e-8);
        assert!((hull.radius - 1.0).abs() < 1e-12);
        assert_eq!(hull.grid.len(), 50);
        for p in &hull.grid {
            assert!(g.space.dist(&hull.center, p).unwrap() <= hull.radius + 1e-12);
        }
    }

    #[test]
    fn hyperbolic_center_of_symmetric_circle() {
        let g = fixtures::hyperbolic_circle(1.0, 0.8, 256);
        let hull = hull_approx(&g, 1).unwrap();
        let d = g.space.dist(&hull.center, &g.space.origin()).unwrap();
        assert!(d < 1e-8);
        assert!((hull.radius - 0.8).abs() < 1e-9);
    }

    #[test]
    fn spread_spherical_graph_is_flagged() {
        let space = SpaceForm::spherical(3, 1.0);
        let g = fixtures::regular_polygon(&space, 4, 0.45 * PI, 16).unwrap();
        let hull = hull_approx(&g, 1).unwrap();
        assert!(!hull.warnings.is_empty());
        let g = fixtures::regular_polygon(&space, 3, 0.2, 16).unwrap();
        assert!(hull_approx(&g, 1).unwrap().warnings.is_empty());
    }

    #[test]
    fn density_bound_examples() {
        let opts = TcOptions::default();
        let g = fixtures::flat_circle(1.0, 1024);
        let tc = cone_total_curvature(&g, &opts).unwrap();
        let b = density_bound(&g, &g.space.origin(), &tc).unwrap();
        assert!((b - 1.0).abs() < 1e-4);
        let elsewhere = density_bound(&g, &Point::from_slice(&[0.3, 0.2, 0.5]), &tc).unwrap();
        assert_eq!(b, elsewhere);

        let h = fixtures::hyperbolic_circle(1.0, 1.0, 1024);
        let tc = cone_total_curvature(&h, &opts).unwrap();
        let b = density_bound(&h, &h.space.origin(), &tc).unwrap();
        assert!((b - 1.0).abs() < 1e-3, "{b}");
    }

    #[test]
    fn circle_certificates() {
        let g = fixtures::flat_circle(1.0, 1024);
        let tc = cone_total_curvature(&g, &TcOptions::default()).unwrap();
        let opts = CertifyOptions {
            simple_curve: true,
            ..Default::default()
        };
        let certs = certify(&g, &tc, &opts).unwrap();
        let verdicts: Vec<Verdict> = certs.iter().map(|c| c.verdict).collect();
        assert_eq!(
            verdicts,
            [Verdict::EmbeddedOrY, Verdict::YSingularitiesOnly, Verdict::SimpleCurveEmbedded]
        );
        assert!(certs.iter().all(|c| c.margin >= 0.0));
    }

    #[test]
    fn cube_has_no_certificate() {
        let g = fixtures::cube_skeleton(1.0);
        let tc = cone_total_curvature(&g, &TcOptions::default()).unwrap();
        let certs = certify(&g, &tc, &CertifyOptions::default()).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].verdict, Verdict::NoCertificate);
        assert!((certs[0].margin - (3.0 * PI - tc.total)).abs() < 1e-12);
        assert!(certs[0].margin < 0.0);
    }

    #[test]
    fn simple_curve_flag_needs_a_cycle() {
        let g = fixtures::theta_graph(1.0, 64);
        let tc = cone_total_curvature(&g, &TcOptions::default()).unwrap();
        let opts = CertifyOptions {
            simple_curve: true,
            ..Default::default()
        };
        assert!(matches!(certify(&g, &tc, &opts), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn circle_minimal_cone_area() {
        let g = fixtures::flat_circle(1.0, 1024);
        let hull = hull_approx(&g, 1000).unwrap();
        let ext = extremal_cone_area(&g, &hull, Extremum::Min).unwrap();
        assert!((ext.value - PI).abs() < 1e-3, "{}", ext.value);
        assert!(ext.apex.coords().norm() < 1e-2, "{:?}", ext.apex);
    }

    #[test]
    fn circle_maximal_cone_area() {
        let g = fixtures::flat_circle(1.0, 512);
        let hull = hull_approx(&g, 200).unwrap();
        let ext = extremal_cone_area(&g, &hull, Extremum::Max).unwrap();
        assert!((ext.value - PI * 2f64.sqrt()).abs() < 1e-2, "{}", ext.value);
    }
}
