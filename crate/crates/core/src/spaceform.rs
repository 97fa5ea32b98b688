//! Geometry kernel for the three constant-curvature model spaces.
//!
//! * `Flat`: Euclidean ℝⁿ with coordinates in ℝⁿ.
//! * `Hyperbolic`: Hⁿ(−κ²) as the upper sheet of the hyperboloid
//!   ⟨x,x⟩ = −1/κ² in Minkowski space ℝ^{1,n}, time coordinate first.
//! * `Spherical`: Sⁿ(b²) as the round sphere |x| = 1/b in ℝⁿ⁺¹.
//!
//! Every operation is a pure function of immutable values.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest argument violation absorbed by clamping before arccos/acosh.
pub const CLAMP_SLACK: f64 = 1e-9;
/// On-manifold residual accepted after projection.
pub const MANIFOLD_TOL: f64 = 1e-9;
/// Tangency residual accepted for tangent vectors.
pub const TANGENT_TOL: f64 = 1e-9;
/// Distance below which two base points are considered identical.
pub const SAME_BASE_TOL: f64 = 1e-9;
/// Margin kept from the antipodal distance π/b on the sphere.
pub const DIAMETER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Flat,
    Hyperbolic,
    Spherical,
}

/// A constant-curvature model space: flat, hyperbolic with sectional
/// curvature −κ², or spherical with sectional curvature +b².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceForm {
    model: Model,
    dim: usize,
    curv: f64,
}

/// A point given by its embedding coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(DVector<f64>);

impl Point {
    /// Wraps raw embedding coordinates without any validation.
    pub fn new(coords: DVector<f64>) -> Self {
        Point(coords)
    }

    pub fn from_slice(coords: &[f64]) -> Self {
        Point(DVector::from_column_slice(coords))
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn into_coords(self) -> DVector<f64> {
        self.0
    }
}

/// A vector in the tangent space at `base`, in embedding coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub base: Point,
    pub vec: DVector<f64>,
}

impl TangentVector {
    pub fn new(base: Point, vec: DVector<f64>) -> Self {
        TangentVector { base, vec }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        TangentVector::new(self.base.clone(), &self.vec * factor)
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1.0)
    }
}

/// Radial comparison functions at distance `r`: the warping function `f`
/// of the polar metric dr² + f(r)²dθ², its derivative and its integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub f: f64,
    pub fprime: f64,
    pub big_f: f64,
}

impl SpaceForm {
    pub fn new(model: Model, dim: usize, curv: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidSpace(format!("dimension {dim} < 2")));
        }
        let curv = match model {
            Model::Flat => 0.0,
            _ if !(curv.is_finite() && curv > 0.0) => {
                return Err(Error::InvalidSpace(format!(
                    "{model:?} model needs curv > 0, got {curv}"
                )))
            }
            _ => curv,
        };
        Ok(SpaceForm { model, dim, curv })
    }

    pub fn flat(dim: usize) -> Self {
        Self::new(Model::Flat, dim, 0.0).expect("dim >= 2")
    }

    /// Hyperbolic space of sectional curvature −κ².
    pub fn hyperbolic(dim: usize, kappa: f64) -> Self {
        Self::new(Model::Hyperbolic, dim, kappa).expect("dim >= 2, kappa > 0")
    }

    /// Round sphere of sectional curvature +b².
    pub fn spherical(dim: usize, b: f64) -> Self {
        Self::new(Model::Spherical, dim, b).expect("dim >= 2, b > 0")
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// κ for hyperbolic, b for spherical, 0 for flat.
    pub fn curv(&self) -> f64 {
        self.curv
    }

    /// Number of embedding coordinates.
    pub fn ambient_dim(&self) -> usize {
        match self.model {
            Model::Flat => self.dim,
            _ => self.dim + 1,
        }
    }

    /// Signed sectional curvature: −κ², 0 or +b².
    pub fn sectional_curvature(&self) -> f64 {
        match self.model {
            Model::Flat => 0.0,
            Model::Hyperbolic => -self.curv * self.curv,
            Model::Spherical => self.curv * self.curv,
        }
    }

    /// The same model in dimension 2.
    pub fn surface(&self) -> SpaceForm {
        SpaceForm { dim: 2, ..*self }
    }

    /// π/b on the sphere, infinite otherwise.
    pub fn diameter_limit(&self) -> f64 {
        match self.model {
            Model::Spherical => PI / self.curv,
            _ => f64::INFINITY,
        }
    }

    /// Ambient bilinear form: Euclidean, or Minkowski with the time
    /// coordinate first.
    pub fn form(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        match self.model {
            Model::Hyperbolic => a.dot(b) - 2.0 * a[0] * b[0],
            _ => a.dot(b),
        }
    }

    /// Value of ⟨x,x⟩ that defines the model manifold.
    fn level(&self) -> f64 {
        match self.model {
            Model::Flat => 0.0,
            Model::Hyperbolic => -1.0 / (self.curv * self.curv),
            Model::Spherical => 1.0 / (self.curv * self.curv),
        }
    }

    /// The distinguished base point: the origin, the hyperboloid vertex or
    /// the "north pole" (1/b, 0, …).
    pub fn origin(&self) -> Point {
        let mut x = DVector::zeros(self.ambient_dim());
        if self.model != Model::Flat {
            x[0] = 1.0 / self.curv;
        }
        Point(x)
    }

    fn check_len(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Relative residual of the defining equation.
    pub fn manifold_residual(&self, x: &DVector<f64>) -> f64 {
        match self.model {
            Model::Flat => 0.0,
            Model::Hyperbolic => {
                let r = (self.form(x, x) - self.level()).abs() * self.curv * self.curv;
                if x[0] <= 0.0 {
                    r.max(1.0)
                } else {
                    r
                }
            }
            Model::Spherical => (self.form(x, x) - self.level()).abs() * self.curv * self.curv,
        }
    }

    /// Nearest point of the model manifold (radial rescaling in the
    /// embedding, which is exact for on-manifold input).
    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        match self.model {
            Model::Flat => x.clone(),
            Model::Spherical => {
                let n = x.norm();
                if n == 0.0 {
                    self.origin().0
                } else {
                    x / (n * self.curv)
                }
            }
            Model::Hyperbolic => {
                // Keep the spatial part, solve for the time coordinate.
                let mut y = x.clone();
                let spatial = x.rows(1, x.len() - 1).norm_squared();
                y[0] = (1.0 / (self.curv * self.curv) + spatial).sqrt();
                y
            }
        }
    }

    /// Validates embedding coordinates against the manifold with the given
    /// tolerance and returns the projected point.
    pub fn point_with_tol(&self, coords: &[f64], tol: f64) -> Result<Point> {
        let x = DVector::from_column_slice(coords);
        self.check_len(&x)?;
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        let residual = self.manifold_residual(&x);
        if residual > tol {
            return Err(Error::OffManifold {
                residual,
                tolerance: tol,
            });
        }
        Ok(Point(self.project(&x)))
    }

    /// Validating constructor with the default 1e-6 gate.
    pub fn point(&self, coords: &[f64]) -> Result<Point> {
        self.point_with_tol(coords, 1e-6)
    }

    /// Projects an embedding vector onto T_pM.
    pub fn project_tangent(&self, p: &Point, v: &DVector<f64>) -> DVector<f64> {
        match self.model {
            Model::Flat => v.clone(),
            Model::Hyperbolic => v + &p.0 * (self.curv * self.curv * self.form(&p.0, v)),
            Model::Spherical => v - &p.0 * (self.curv * self.curv * self.form(&p.0, v)),
        }
    }

    pub fn tangent(&self, p: &Point, v: DVector<f64>) -> TangentVector {
        let vec = self.project_tangent(p, &v);
        TangentVector::new(p.clone(), vec)
    }

    fn tangency_residual(&self, u: &TangentVector) -> f64 {
        match self.model {
            Model::Flat => 0.0,
            _ => {
                let scale = u.base.0.norm() * u.vec.norm();
                self.form(&u.base.0, &u.vec).abs() / scale.max(1.0)
            }
        }
    }

    fn check_tangent(&self, u: &TangentVector) -> Result<()> {
        self.check_len(&u.vec)?;
        let res = self.tangency_residual(u);
        if res > TANGENT_TOL {
            return Err(Error::NotTangent(res));
        }
        Ok(())
    }

    /// Riemannian inner product of two tangent vectors at a common base.
    pub fn inner(&self, u: &TangentVector, v: &TangentVector) -> Result<f64> {
        if (&u.base.0 - &v.base.0).norm() > SAME_BASE_TOL {
            return Err(Error::BaseMismatch);
        }
        Ok(self.form(&u.vec, &v.vec))
    }

    /// Riemannian norm of a tangent vector (assumed tangent).
    pub fn norm(&self, v: &DVector<f64>) -> f64 {
        self.form(v, v).max(0.0).sqrt()
    }

    /// Unit-norm copy, or `ZeroVector`.
    pub fn normalize(&self, v: &TangentVector) -> Result<TangentVector> {
        let n = self.norm(&v.vec);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(v.scaled(1.0 / n))
    }

    /// Geodesic distance without the spherical diameter check.
    fn raw_dist(&self, p: &DVector<f64>, q: &DVector<f64>) -> f64 {
        let d = p - q;
        match self.model {
            Model::Flat => d.norm(),
            Model::Spherical => {
                let half_chord = (0.5 * self.curv * d.norm()).min(1.0);
                2.0 * half_chord.asin() / self.curv
            }
            Model::Hyperbolic => {
                let chord = self.form(&d, &d).max(0.0).sqrt();
                2.0 * (0.5 * self.curv * chord).asinh() / self.curv
            }
        }
    }

    /// Geodesic distance. On the sphere, pairs at distance ≥ π/b − tol are
    /// rejected.
    pub fn dist(&self, p: &Point, q: &Point) -> Result<f64> {
        self.check_len(&p.0)?;
        self.check_len(&q.0)?;
        let d = self.raw_dist(&p.0, &q.0);
        if self.model == Model::Spherical && d >= self.diameter_limit() - DIAMETER_TOL {
            return Err(Error::DiameterBound {
                distance: d,
                limit: self.diameter_limit(),
            });
        }
        Ok(d)
    }

    /// Initial velocity of the minimizing geodesic from `p` to `q`, with
    /// length dist(p, q).
    pub fn log_map(&self, p: &Point, q: &Point) -> Result<TangentVector> {
        let d = self.dist(p, q)?;
        if d == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        let dir = match self.model {
            Model::Flat => &q.0 - &p.0,
            _ => self.project_tangent(p, &q.0),
        };
        let n = self.norm(&dir);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::CoincidentPoints);
        }
        Ok(TangentVector::new(p.clone(), dir * (d / n)))
    }

    /// Point reached at unit time along the geodesic with initial velocity `v`.
    pub fn exp_map(&self, p: &Point, v: &TangentVector) -> Result<Point> {
        if (&v.base.0 - &p.0).norm() > SAME_BASE_TOL {
            return Err(Error::BaseMismatch);
        }
        self.check_tangent(v)?;
        Ok(self.exp_unchecked(p, &v.vec))
    }

    pub(crate) fn exp_unchecked(&self, p: &Point, v: &DVector<f64>) -> Point {
        let t = self.norm(v);
        if t == 0.0 {
            return p.clone();
        }
        let x = match self.model {
            Model::Flat => &p.0 + v,
            Model::Hyperbolic => {
                let a = self.curv * t;
                &p.0 * a.cosh() + v * (a.sinh() / a)
            }
            Model::Spherical => {
                let a = self.curv * t;
                &p.0 * a.cos() + v * (a.sin() / a)
            }
        };
        Point(self.project(&x))
    }

    /// Velocity at time `t` of the unit-speed geodesic t ↦ exp_p(t·u).
    pub(crate) fn geodesic_velocity(&self, p: &Point, u: &DVector<f64>, t: f64) -> DVector<f64> {
        match self.model {
            Model::Flat => u.clone(),
            Model::Hyperbolic => {
                let a = self.curv * t;
                &p.0 * (self.curv * a.sinh()) + u * a.cosh()
            }
            Model::Spherical => {
                let a = self.curv * t;
                &p.0 * (-self.curv * a.sin()) + u * a.cos()
            }
        }
    }

    /// Angle in [0, π] between two nonzero tangent vectors at a common base.
    pub fn angle(&self, u: &TangentVector, v: &TangentVector) -> Result<f64> {
        let uv = self.inner(u, v)?;
        let nu = self.norm(&u.vec);
        let nv = self.norm(&v.vec);
        if nu == 0.0 || nv == 0.0 {
            return Err(Error::ZeroVector);
        }
        let cos = uv / (nu * nv);
        if !cos.is_finite() || cos.abs() > 1.0 + CLAMP_SLACK {
            return Err(Error::InvalidArgument(format!("arccos argument {cos}")));
        }
        // Half-chord form: equal to arccos(cos) but accurate near 0 and π.
        let a = &u.vec / nu;
        let b = &v.vec / nv;
        let diff = &a - &b;
        let sum = &a + &b;
        Ok(2.0 * self.norm(&diff).atan2(self.norm(&sum)))
    }

    /// f, f′ and F = ∫₀ʳ f at distance `r`.
    pub fn comparison_fns(&self, r: f64) -> Result<Comparison> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::InvalidArgument(format!("negative radius {r}")));
        }
        Ok(match self.model {
            Model::Flat => Comparison {
                f: r,
                fprime: 1.0,
                big_f: 0.5 * r * r,
            },
            Model::Hyperbolic => {
                let k = self.curv;
                let a = k * r;
                let sh = (0.5 * a).sinh();
                Comparison {
                    f: a.sinh() / k,
                    fprime: a.cosh(),
                    big_f: 2.0 * sh * sh / (k * k),
                }
            }
            Model::Spherical => {
                let b = self.curv;
                if r >= self.diameter_limit() {
                    return Err(Error::ConjugatePoint {
                        r,
                        limit: self.diameter_limit(),
                    });
                }
                let a = b * r;
                let sh = (0.5 * a).sin();
                Comparison {
                    f: a.sin() / b,
                    fprime: a.cos(),
                    big_f: 2.0 * sh * sh / (b * b),
                }
            }
        })
    }

    /// Geodesic curvature f′(r)/f(r) of the geodesic circle of radius `r`.
    pub fn circle_curvature(&self, r: f64) -> Result<f64> {
        let c = self.comparison_fns(r)?;
        if c.f == 0.0 {
            return Err(Error::InvalidArgument("zero radius".into()));
        }
        Ok(c.fprime / c.f)
    }

    /// Orthonormal basis of T_pM (n vectors in embedding coordinates).
    pub fn tangent_basis(&self, p: &Point) -> Vec<DVector<f64>> {
        let m = self.ambient_dim();
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(self.dim);
        // Start from the coordinate axes, most-tangent first.
        let mut axes: Vec<DVector<f64>> = (0..m)
            .map(|i| {
                let mut e = DVector::zeros(m);
                e[i] = 1.0;
                self.project_tangent(p, &e)
            })
            .collect();
        axes.sort_by(|a, b| self.norm(b).total_cmp(&self.norm(a)));
        for mut v in axes {
            for b in &basis {
                let c = self.form(&v, b);
                v -= b * c;
            }
            let n = self.norm(&v);
            if n > 1e-6 {
                basis.push(v / n);
            }
            if basis.len() == self.dim {
                break;
            }
        }
        basis
    }
}

/// arccos with arguments outside [−1, 1] by at most `CLAMP_SLACK` clamped;
/// larger violations are errors.
pub fn clamped_acos(c: f64) -> Result<f64> {
    if !c.is_finite() || c.abs() > 1.0 + CLAMP_SLACK {
        return Err(Error::InvalidArgument(format!("arccos argument {c}")));
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// A distance-preserving map of the model space: x ↦ A·x + t with A
/// orthogonal (flat, spherical) or Lorentzian (hyperbolic), t = 0 unless flat.
#[derive(Debug, Clone)]
pub struct Isometry {
    linear: DMatrix<f64>,
    shift: DVector<f64>,
}

impl Isometry {
    pub fn apply(&self, p: &Point) -> Point {
        Point(&self.linear * &p.0 + &self.shift)
    }

    /// A random isometry: a random rotation composed with a random
    /// translation (flat) or Lorentz boost (hyperbolic).
    pub fn random<R: Rng>(space: &SpaceForm, rng: &mut R) -> Isometry {
        let m = space.ambient_dim();
        let rot_dim = if space.model == Model::Hyperbolic {
            m - 1
        } else {
            m
        };
        let rot = random_orthogonal(rot_dim, rng);
        match space.model {
            Model::Flat => Isometry {
                linear: rot,
                shift: DVector::from_fn(m, |_, _| rng.gen_range(-2.0..2.0)),
            },
            Model::Spherical => Isometry {
                linear: rot,
                shift: DVector::zeros(m),
            },
            Model::Hyperbolic => {
                let mut spatial = DMatrix::identity(m, m);
                spatial.view_mut((1, 1), (m - 1, m - 1)).copy_from(&rot);
                let rapidity: f64 = rng.gen_range(-1.0..1.0);
                let axis = rng.gen_range(1..m);
                let mut boost = DMatrix::identity(m, m);
                boost[(0, 0)] = rapidity.cosh();
                boost[(axis, axis)] = rapidity.cosh();
                boost[(0, axis)] = rapidity.sinh();
                boost[(axis, 0)] = rapidity.sinh();
                Isometry {
                    linear: boost * spatial,
                    shift: DVector::zeros(m),
                }
            }
        }
    }
}

fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    g.qr().q()
}

/// Standard normal sample by Box–Muller.
pub(crate) fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spaces() -> Vec<SpaceForm> {
        vec![
            SpaceForm::flat(3),
            SpaceForm::hyperbolic(3, 1.0),
            SpaceForm::hyperbolic(2, 0.5),
            SpaceForm::spherical(3, 1.0),
            SpaceForm::spherical(2, 2.0),
        ]
    }

    /// Random point within geodesic distance `spread` of the origin.
    fn random_point(space: &SpaceForm, rng: &mut ChaCha8Rng, spread: f64) -> Point {
        let o = space.origin();
        let basis = space.tangent_basis(&o);
        let mut v = DVector::zeros(space.ambient_dim());
        for b in &basis {
            v += b * rng.gen_range(-1.0..1.0);
        }
        let n = space.norm(&v).max(1e-12);
        v *= spread * rng.gen_range(0.0..1.0) / n;
        space.exp_unchecked(&o, &v)
    }

    fn random_tangent(space: &SpaceForm, p: &Point, rng: &mut ChaCha8Rng, len: f64) -> TangentVector {
        let v = DVector::from_fn(space.ambient_dim(), |_, _| gaussian(rng));
        let t = space.tangent(p, v);
        space.normalize(&t).unwrap().scaled(len)
    }

    #[test]
    fn inner_examples() {
        let s = SpaceForm::flat(3);
        let o = s.origin();
        let e1 = TangentVector::new(o.clone(), DVector::from_vec(vec![1.0, 0.0, 0.0]));
        let e2 = TangentVector::new(o.clone(), DVector::from_vec(vec![0.0, 1.0, 0.0]));
        assert_eq!(s.inner(&e1, &e1).unwrap(), 1.0);
        assert_eq!(s.inner(&e1, &e2).unwrap(), 0.0);

        let h = SpaceForm::hyperbolic(2, 1.0);
        let base = h.point(&[1.0, 0.0, 0.0]).unwrap();
        let v = TangentVector::new(base, DVector::from_vec(vec![0.0, 2.0, 0.0]));
        assert_eq!(h.inner(&v, &v).unwrap(), 4.0);
    }

    #[test]
    fn inner_rejects_base_mismatch() {
        let s = SpaceForm::flat(2);
        let u = TangentVector::new(Point::from_slice(&[0.0, 0.0]), DVector::from_vec(vec![1.0, 0.0]));
        let v = TangentVector::new(Point::from_slice(&[1.0, 0.0]), DVector::from_vec(vec![1.0, 0.0]));
        assert!(matches!(s.inner(&u, &v), Err(Error::BaseMismatch)));
    }

    #[test]
    fn dist_examples() {
        let s = SpaceForm::flat(3);
        let p = Point::from_slice(&[0.0, 0.0, 0.0]);
        let q = Point::from_slice(&[3.0, 4.0, 0.0]);
        assert_eq!(s.dist(&p, &p).unwrap(), 0.0);
        assert!((s.dist(&p, &q).unwrap() - 5.0).abs() < 1e-15);

        let h = SpaceForm::hyperbolic(2, 1.0);
        let a = h.point(&[1.0, 0.0, 0.0]).unwrap();
        let b = h.point(&[1f64.cosh(), 1f64.sinh(), 0.0]).unwrap();
        assert!((h.dist(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dist_rejects_antipodes() {
        let s = SpaceForm::spherical(2, 1.0);
        let p = s.point(&[1.0, 0.0, 0.0]).unwrap();
        let q = s.point(&[-1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(s.dist(&p, &q), Err(Error::DiameterBound { .. })));
        assert!(s.log_map(&p, &q).is_err());
    }

    #[test]
    fn log_examples() {
        let s = SpaceForm::flat(3);
        let p = Point::from_slice(&[0.0, 0.0, 0.0]);
        let q = Point::from_slice(&[1.0, 2.0, 2.0]);
        let v = s.log_map(&p, &q).unwrap();
        assert!((v.vec - DVector::from_vec(vec![1.0, 2.0, 2.0])).norm() < 1e-14);
        assert!(matches!(s.log_map(&p, &p), Err(Error::CoincidentPoints)));

        let sph = SpaceForm::spherical(2, 1.0);
        let p = sph.point(&[1.0, 0.0, 0.0]).unwrap();
        let q = sph.point(&[0.0, 1.0, 0.0]).unwrap();
        let v = sph.log_map(&p, &q).unwrap();
        assert!((v.vec - DVector::from_vec(vec![0.0, PI / 2.0, 0.0])).norm() < 1e-12);
    }

    #[test]
    fn exp_examples() {
        let h = SpaceForm::hyperbolic(2, 1.0);
        let p = h.origin();
        assert_eq!(h.exp_map(&p, &p.clone().into_tangent_zero(3)).unwrap(), p);
        for t in [0.1, 1.0, 2.5] {
            let v = TangentVector::new(p.clone(), DVector::from_vec(vec![0.0, t, 0.0]));
            let q = h.exp_map(&p, &v).unwrap();
            let expect = DVector::from_vec(vec![t.cosh(), t.sinh(), 0.0]);
            assert!((q.coords() - expect).norm() < 1e-12 * t.cosh());
        }
        let bad = TangentVector::new(p.clone(), DVector::from_vec(vec![1.0, 0.0, 0.0]));
        assert!(matches!(h.exp_map(&p, &bad), Err(Error::NotTangent(_))));
    }

    impl Point {
        fn into_tangent_zero(self, m: usize) -> TangentVector {
            TangentVector::new(self, DVector::zeros(m))
        }
    }

    #[test]
    fn exp_log_roundtrip_all_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for space in spaces() {
            let spread = (0.45 * space.diameter_limit()).min(2.0);
            for _ in 0..100 {
                let p = random_point(&space, &mut rng, spread);
                let q = random_point(&space, &mut rng, spread);
                let v = space.log_map(&p, &q).unwrap();
                let d = space.dist(&p, &q).unwrap();
                assert!((space.norm(&v.vec) - d).abs() < 1e-9);
                let back = space.exp_map(&p, &v).unwrap();
                assert!(space.dist(&back, &q).unwrap() < 1e-8, "{space:?}");
            }
        }
    }

    #[test]
    fn exp_preserves_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for space in spaces() {
            let reach = (0.9 * space.diameter_limit()).min(3.0);
            for _ in 0..100 {
                let p = random_point(&space, &mut rng, 1.0_f64.min(reach));
                let len = rng.gen_range(0.0..reach);
                let v = random_tangent(&space, &p, &mut rng, len);
                let q = space.exp_map(&p, &v).unwrap();
                assert!(space.manifold_residual(q.coords()) < MANIFOLD_TOL);
                assert!((space.dist(&p, &q).unwrap() - len).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for space in spaces() {
            let spread = (0.3 * space.diameter_limit()).min(2.0);
            for _ in 0..200 {
                let a = random_point(&space, &mut rng, spread);
                let b = random_point(&space, &mut rng, spread);
                let c = random_point(&space, &mut rng, spread);
                let ab = space.dist(&a, &b).unwrap();
                let bc = space.dist(&b, &c).unwrap();
                let ac = space.dist(&a, &c).unwrap();
                assert!(ac <= ab + bc + 1e-10);
                assert!((ab - space.dist(&b, &a).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn angle_examples() {
        let s = SpaceForm::spherical(2, 1.0);
        let p = s.origin();
        let u = TangentVector::new(p.clone(), DVector::from_vec(vec![0.0, 1.0, 0.0]));
        let w = TangentVector::new(p.clone(), DVector::from_vec(vec![0.0, 0.0, 3.0]));
        assert_eq!(s.angle(&u, &u).unwrap(), 0.0);
        assert!((s.angle(&u, &u.neg()).unwrap() - PI).abs() < 1e-15);
        assert!((s.angle(&u, &w).unwrap() - PI / 2.0).abs() < 1e-15);
        let z = TangentVector::new(p, DVector::zeros(3));
        assert!(matches!(s.angle(&u, &z), Err(Error::ZeroVector)));
    }

    #[test]
    fn comparison_examples() {
        let f = SpaceForm::flat(3).comparison_fns(1.7).unwrap();
        assert_eq!((f.f, f.fprime, f.big_f), (1.7, 1.0, 0.5 * 1.7 * 1.7));

        let h = SpaceForm::hyperbolic(3, 1.0).comparison_fns(1.0).unwrap();
        assert!((h.f - 1.175201).abs() < 1e-6);
        assert!((h.big_f - 0.543081).abs() < 1e-6);

        let s = SpaceForm::spherical(3, 1.0).comparison_fns(PI / 2.0).unwrap();
        assert!((s.f - 1.0).abs() < 1e-15);
        assert!((s.big_f - 1.0).abs() < 1e-15);

        for space in spaces() {
            let c = space.comparison_fns(0.0).unwrap();
            assert_eq!((c.f, c.fprime, c.big_f), (0.0, 1.0, 0.0));
        }
        assert!(matches!(
            SpaceForm::spherical(2, 1.0).comparison_fns(PI),
            Err(Error::ConjugatePoint { .. })
        ));
    }

    #[test]
    fn big_f_is_antiderivative() {
        for space in spaces() {
            for &r in &[0.1, 0.5, 1.0] {
                let h = 1e-5;
                let fp = space.comparison_fns(r + h).unwrap().big_f;
                let fm = space.comparison_fns(r - h).unwrap().big_f;
                let f = space.comparison_fns(r).unwrap().f;
                assert!(((fp - fm) / (2.0 * h) - f).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn small_curvature_reduces_to_flat() {
        let k = 1e-4;
        for space in [SpaceForm::hyperbolic(3, k), SpaceForm::spherical(3, k)] {
            for &r in &[0.5, 1.0, 5.0, 20.0] {
                let c = space.comparison_fns(r).unwrap();
                assert!((c.f - r).abs() <= k * k * r.powi(3));
                assert!((c.big_f - 0.5 * r * r).abs() <= k * k * r.powi(4));
            }
        }
    }

    #[test]
    fn circle_curvature_matches_closed_forms() {
        for &r in &[0.2, 0.7, 1.3] {
            let h = SpaceForm::hyperbolic(3, 1.5).circle_curvature(r).unwrap();
            assert!((h - 1.5 / (1.5 * r).tanh()).abs() < 1e-10);
            let f = SpaceForm::flat(3).circle_curvature(r).unwrap();
            assert!((f - 1.0 / r).abs() < 1e-10);
            let s = SpaceForm::spherical(3, 0.8).circle_curvature(r).unwrap();
            assert!((s - 0.8 / (0.8 * r).tan()).abs() < 1e-10);
        }
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for space in spaces() {
            let p = random_point(&space, &mut rng, 1.0_f64.min(0.4 * space.diameter_limit()));
            let basis = space.tangent_basis(&p);
            assert_eq!(basis.len(), space.dim());
            for (i, a) in basis.iter().enumerate() {
                if space.model() != Model::Flat {
                    assert!(space.form(&p.0, a).abs() < 1e-10);
                }
                for (j, b) in basis.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((space.form(a, b) - expect).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn isometries_preserve_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for space in spaces() {
            let iso = Isometry::random(&space, &mut rng);
            for _ in 0..20 {
                let spread = 1.0_f64.min(0.4 * space.diameter_limit());
                let a = random_point(&space, &mut rng, spread);
                let b = random_point(&space, &mut rng, spread);
                let (ia, ib) = (iso.apply(&a), iso.apply(&b));
                assert!(space.manifold_residual(ia.coords()) < 1e-9);
                let d0 = space.dist(&a, &b).unwrap();
                let d1 = space.dist(&ia, &ib).unwrap();
                assert!((d0 - d1).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rejects_bad_spaces_and_points() {
        assert!(SpaceForm::new(Model::Flat, 1, 0.0).is_err());
        assert!(SpaceForm::new(Model::Hyperbolic, 3, 0.0).is_err());
        assert!(SpaceForm::new(Model::Spherical, 3, -1.0).is_err());
        let s = SpaceForm::spherical(2, 1.0);
        assert!(matches!(s.point(&[2.0, 0.0, 0.0]), Err(Error::OffManifold { .. })));
        assert!(matches!(s.point(&[1.0, 0.0]), Err(Error::DimensionMismatch { .. })));
        let h = SpaceForm::hyperbolic(2, 1.0);
        assert!(h.point(&[-1.0, 0.0, 0.0]).is_err());
    }
}
