use thiserror::Error;

/// Errors raised by the algebra, predicates and the optimizer.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("generalized product order {0} outside 0..=8")]
    InvalidOrder(usize),
    #[error("metric is not symmetric (max asymmetry {0:e})")]
    AsymmetricMetric(f64),
    #[error("metric is not positive definite (smallest eigenvalue {0:e})")]
    DegenerateMetric(f64),
    #[error("metric entry is not finite")]
    NonFiniteMetric,
    #[error("expected a pure rank-{expected} form")]
    MixedRank { expected: usize },
    #[error("zero form rejected")]
    ZeroForm,
    #[error("form is not self-dual (residual {0:e})")]
    NotSelfDual(f64),
    #[error("zero spinor rejected")]
    ZeroSpinor,
    #[error("spinor is not chiral (residual {0:e})")]
    NotChiral(f64),
    #[error("spin action needs an even number of one-forms, got {0}")]
    OddCount(usize),
    #[error("one-form {index} is not unit length (norm {norm})")]
    NotUnit { index: usize, norm: f64 },
    #[error("polyform is not a signed spinor square (eigenvalue ratio {0:e})")]
    NotSquare(f64),
    #[error("Clifford representation check failed: {0}")]
    Representation(&'static str),
    #[error("form is not a conformal Spin(7) form (residual {0:e})")]
    NotSpin7(f64),
    #[error("spectral projector residual {0:e} too large; reference form drifted")]
    SpectralDrift(f64),
    #[error("retraction degenerate, step too large")]
    StepTooLarge,
    #[error("form is off the sphere (|phi| = {0})")]
    OffSphere(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("index {0} outside 1..=8")]
    BadIndex(usize),
    #[error("repeated index in blade")]
    RepeatedIndex,
}

pub type Result<T> = core::result::Result<T, Error>;
