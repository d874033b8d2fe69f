use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element does not live in the ambient group")]
    AmbientMismatch,
    #[error("map is not surjective")]
    NotSurjective,
    #[error("elements do not generate a submonoid of the monoid")]
    NotSubmonoid,
    #[error("modules are defined over different monoids")]
    OwnerMismatch,
    #[error("unsupported module class: {0}")]
    UnsupportedModuleClass(String),
    #[error("module is not finitely generated")]
    NotFinitelyGenerated,
    #[error("ideal or module is not homogeneous")]
    NotHomogeneous,
    #[error("unsupported ideal class: {0}")]
    UnsupportedIdealClass(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("invalid chart: {0}")]
    ChartInvalid(String),
    #[error("the chart morphism h is not injective")]
    NotInjectiveH,
    #[error("charts are not related: {0}")]
    ChartsUnrelated(String),
    #[error("invalid homotopy data: {0}")]
    HomotopyInvalid(String),
    #[error("lifts are incompatible: {0}")]
    LiftsIncompatible(String),
    #[error("kernel is not finitely generated")]
    KernelNotFinitelyGenerated,
    #[error("Tor gate failed: {0}")]
    GateFailed(String),
    #[error("module is not finite dimensional over the base field")]
    NotFiniteDimensional,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
