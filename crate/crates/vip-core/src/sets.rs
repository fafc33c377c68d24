use std::fmt;
use std::sync::Arc;

use crate::vector::Vector;

/// Closed half-space `{ z : <normal, z> <= offset }`.
///
/// A zero normal denotes the whole space (the degenerate case produced when a
/// projection has a fixed point); the offset must then be nonnegative so the
/// set is nonempty.
#[derive(Clone, Debug)]
pub struct HalfSpace {
    normal: Vector,
    offset: f64,
}

impl HalfSpace {
    pub fn new(normal: Vector, offset: f64) -> Self {
        assert!(offset.is_finite(), "half-space offset must be finite");
        assert!(
            normal.norm_sq() > 0.0 || offset >= 0.0,
            "zero-normal half-space requires a nonnegative offset"
        );
        HalfSpace { normal, offset }
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// True when the normal vanishes, i.e. the half-space is all of space.
    pub fn is_whole_space(&self) -> bool {
        self.normal.norm_sq() == 0.0
    }

    pub fn contains(&self, z: &Vector, tol: f64) -> bool {
        self.is_whole_space() || self.normal.dot(z) <= self.offset + tol
    }
}

/// Componentwise clamp at zero: projection onto the nonnegative orthant.
pub fn project_nonneg_orthant(u: &Vector) -> Vector {
    Vector::new(u.iter().map(|&v| v.max(0.0)).collect())
}

/// Projection onto the centered Euclidean ball of the given radius: identity
/// inside, radial rescale outside.
pub fn project_l2_ball(u: &Vector, radius: f64) -> Vector {
    assert!(radius > 0.0, "ball radius must be positive");
    let n = u.norm();
    if n <= radius {
        u.clone()
    } else {
        u.scale(radius / n)
    }
}

/// Euclidean projection onto the probability simplex `{ x : sum x_i = 1,
/// x_i >= 0 }` by the sort-and-threshold method: sort entries descending,
/// find the largest k with `u_(k) - (sum of top k - 1)/k > 0`, subtract that
/// threshold and clamp.
///
/// ```
/// use vip_core::{project_simplex, Vector};
/// let p = project_simplex(&Vector::from_slice(&[0.6, 0.3, -0.4]));
/// assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
/// assert_eq!(p[2], 0.0);
/// ```
pub fn project_simplex(u: &Vector) -> Vector {
    let d = u.dim();
    assert!(d >= 1, "simplex projection needs dimension >= 1");
    let mut sorted: Vec<f64> = u.as_slice().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = sorted[0] - 1.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumsum += v;
        let t = (cumsum - 1.0) / (k as f64 + 1.0);
        if v - t > 0.0 {
            theta = t;
        }
    }
    Vector::new(u.iter().map(|&v| (v - theta).max(0.0)).collect())
}

/// Closed-form projection onto a half-space: identity when the constraint
/// holds, otherwise the affine correction `u - ((<a,u> - b)/||a||^2) a`.
/// A degenerate (zero-normal) half-space projects to the point itself.
pub fn project_halfspace(u: &Vector, h: &HalfSpace) -> Vector {
    let a = h.normal();
    let norm_sq = a.norm_sq();
    if norm_sq == 0.0 {
        return u.clone();
    }
    let violation = a.dot(u) - h.offset();
    if violation <= 0.0 {
        u.clone()
    } else {
        u.combine(1.0, a, -violation / norm_sq)
    }
}

/// Supporting half-space of a convex set `C` at `projected = P_C(pre)`:
/// `{ z : <pre - projected, z - projected> <= 0 }`, which contains `C` by
/// the variational characterization of the projection. Returned in
/// normal/offset form with `a = pre - projected`, `b = <a, projected>`.
pub fn supporting_halfspace(pre_projection: &Vector, projected: &Vector) -> HalfSpace {
    let a = pre_projection - projected;
    let b = a.dot(projected);
    // A fixed point of the projection yields the whole space (a = 0, b = 0
    // exactly, since b = <0, projected>).
    HalfSpace::new(a, b)
}

type ProjectFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;
type ContainsFn = Arc<dyn Fn(&Vector, f64) -> bool + Send + Sync>;

/// A closed convex feasible set, carried as a projection rule plus a
/// membership test. Idempotence of `project` and feasibility of projected
/// points are contracts on every constructor.
#[derive(Clone)]
pub struct FeasibleSet {
    label: String,
    project: ProjectFn,
    contains: ContainsFn,
}

impl FeasibleSet {
    pub fn new(
        label: impl Into<String>,
        project: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
        contains: impl Fn(&Vector, f64) -> bool + Send + Sync + 'static,
    ) -> Self {
        FeasibleSet {
            label: label.into(),
            project: Arc::new(project),
            contains: Arc::new(contains),
        }
    }

    pub fn nonneg_orthant() -> Self {
        FeasibleSet::new("nonneg-orthant", project_nonneg_orthant, |u, tol| {
            u.iter().all(|&v| v >= -tol)
        })
    }

    pub fn ball(radius: f64) -> Self {
        assert!(radius > 0.0, "ball radius must be positive");
        FeasibleSet::new(
            format!("ball(r={radius})"),
            move |u| project_l2_ball(u, radius),
            move |u, tol| u.norm() <= radius + tol,
        )
    }

    pub fn simplex() -> Self {
        FeasibleSet::new("simplex", project_simplex, |u, tol| {
            let sum: f64 = u.iter().sum();
            (sum - 1.0).abs() <= tol && u.iter().all(|&v| v >= -tol)
        })
    }

    pub fn whole_space() -> Self {
        FeasibleSet::new("whole-space", Vector::clone, |_, _| true)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn project(&self, u: &Vector) -> Vector {
        (self.project)(u)
    }

    pub fn contains(&self, u: &Vector, tol: f64) -> bool {
        (self.contains)(u, tol)
    }
}

impl fmt::Debug for FeasibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FeasibleSet")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}
