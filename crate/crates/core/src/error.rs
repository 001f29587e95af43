use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("metric is degenerate at {point:?}")]
    DegenerateMetric { point: Vec<f64> },

    #[error("plane is degenerate (Gram determinant {gram:.3e}); use the lightlike sectional")]
    DegeneratePlane { gram: f64 },

    #[error("vector is not lightlike (g(v,v) = {norm:.3e})")]
    NotLightlike { norm: f64 },

    #[error("plane is not orthogonal to the lightlike direction (g(xi,x) = {inner:.3e})")]
    NotLightlikePlane { inner: f64 },

    #[error("point {point:?} is outside the chart domain")]
    OutsideDomain { point: Vec<f64> },

    #[error("point is outside the fiber chart (distance {dist:.6} >= bound {bound:.6})")]
    OutsideChart { dist: f64, bound: f64 },

    #[error("no cone point: fiber distance {dist:.6} is not reachable within the interval")]
    OutsideConeDomain { dist: f64 },

    #[error("evaluation at the cone vertex is singular")]
    VertexSingularity,

    #[error("rigging is tangent to the hypersurface at {point:?} (g(zeta,xi0) = {pairing:.3e})")]
    RiggingNotTransversal { point: Vec<f64>, pairing: f64 },

    #[error("induced metric is not positive definite (transversality violation)")]
    InducedMetricNotRiemannian,

    #[error("geodesic exits the interval at parameter {s:.6}")]
    IntervalExit { s: f64 },

    #[error("scalar reduction rejected: umbilicity residual {residual:.3e} exceeds {limit:.1e}")]
    NotUmbilicEnough { residual: f64, limit: f64 },

    #[error("too few screen directions: need at least {needed}, have {have}")]
    ScreenTooSmall { needed: usize, have: usize },

    #[error("integration failure: {0}")]
    Integration(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("expression error: {0}")]
    Expr(String),
}

pub type Result<T> = std::result::Result<T, Error>;
