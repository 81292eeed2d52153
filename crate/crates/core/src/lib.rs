//! Exact computations with algebraic cycles with modulus on `A^r x cube^n`.
//!
//! [`field`] and [`poly`] provide exact arithmetic over prime fields, their
//! extensions and `Q`. [`cycle`] implements the cubical cycle complex with
//! modulus: admissibility, faces, boundaries and push-forwards. [`milnor`]
//! covers Milnor K-theory over these fields and the maps between 0-cycles
//! and symbols. [`witness`] builds certificates that re-verify from JSON,
//! and [`suite`] runs seeded randomized checks of the main identities.

pub mod field;
pub mod poly;
pub mod cycle;
pub mod milnor;
pub mod wire;
pub mod witness;
pub mod suite;

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Cycle(#[from] cycle::CycleError),
    #[error(transparent)]
    Milnor(#[from] milnor::MilnorError),
    #[error(transparent)]
    Wire(#[from] wire::WireError),
    #[error(transparent)]
    Witness(#[from] witness::WitnessError),
}

impl Error {
    /// Short machine-readable kind, e.g. `"Poly"`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Field(_) => "Field",
            Error::Poly(_) => "Poly",
            Error::Cycle(_) => "Cycle",
            Error::Milnor(_) => "Milnor",
            Error::Wire(_) => "Wire",
            Error::Witness(_) => "Witness",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
