use thiserror::Error;

/// Errors raised by the computational modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no generators given")]
    NoGenerators,
    #[error("zero generator (row {row})")]
    ZeroGenerator { row: usize },
    #[error("negative entry at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize },
    #[error("not pointed: the cone contains a line")]
    NotPointed,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid facet index {index} (cone has {facets} facets)")]
    InvalidFacet { index: usize, facets: usize },
    #[error("ambient dimension {0} exceeds the supported maximum of {max}", max = crate::cone::MAX_AMBIENT_DIM)]
    DimensionTooLarge(usize),
    #[error("{0} facets exceeds the supported maximum of {max}", max = crate::homology::MAX_VERTICES)]
    TooManyFacets(usize),
    #[error("entry does not fit in a 64-bit enumeration frame")]
    EntryTooLarge,
    #[error("arithmetic overflow during enumeration")]
    Overflow,
    #[error("vector is not in the lattice generated by the semigroup")]
    NotInLattice,
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("vertex {vertex} out of range 1..={max}")]
    VertexOutOfRange { vertex: usize, max: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("not a toric surface in P4")]
    NotToricSurfaceInP4,
}

pub type Result<T> = std::result::Result<T, Error>;
