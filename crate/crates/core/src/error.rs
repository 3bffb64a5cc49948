use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix entries are polynomials; evaluate at a point first")]
    PolynomialEntries,
    #[error("differential does not square to zero at degree {degree}")]
    NotAComplex { degree: i32 },
    #[error("map is not surjective in degree {degree} (rank deficit {deficit})")]
    NotSurjective { degree: i32, deficit: usize },
    #[error("map is not injective in degree {degree}")]
    NotInjective { degree: i32 },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("point is not classical: curvature does not vanish")]
    NotClassical,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("perturbation series did not stabilize after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid contraction: {0}")]
    InvalidContraction(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("linear part is not surjective on the kernel in degree {degree}")]
    NotSurjectiveOnKernel { degree: i32 },
    #[error("kernel of the linear part does not have constant coefficients")]
    NonConstantKernel,
    #[error("regularity fails at point {0}")]
    RegularityFails(String),
    #[error("section not synthesizable: {0}")]
    SectionNotSynthesizable(String),
    #[error("section does not vanish on the zero locus of the fiber coordinates")]
    NotVanishingOnY,
    #[error("transfer result carries no deformed contraction")]
    MissingEtaTilde,
    #[error("section is not in Euler form")]
    NotEulerForm,
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("cohomology over a chart base is not supported")]
    ChartBase,
    #[error("degree rule violated: {0}")]
    DegreeRule(String),
    #[error("non-canonical word: {0}")]
    NonCanonicalWord(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
}
