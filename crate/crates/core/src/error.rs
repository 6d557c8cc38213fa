use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} is outside 1..=16")]
    DegreeOutOfRange(usize),
    #[error("GF({p}^{k}) does not fit the 62-bit element encoding")]
    FieldTooLarge { p: u64, k: usize },
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("invalid group descriptor: {0}")]
    Descriptor(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not a {0}-group")]
    NotPGroup(u64),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("structure constants violate {0}")]
    InvalidAlgebra(String),
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("input ideal is not nilpotent")]
    NotNilpotent,
    #[error("element does not lie in the radical")]
    NotInRadical,
    #[error("field does not split the algebra: irreducible factor of degree {0} at a local summand")]
    NonSplitting(usize),
    #[error("splitting field degree {needed} exceeds the cap {cap}")]
    FieldDegreeCap { needed: usize, cap: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
