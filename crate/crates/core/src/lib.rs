pub mod carvefill;
pub mod cli;
pub mod cell;
pub mod complex;
pub mod constructions;
pub mod cyclic;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod rng;
pub mod simplex;
pub mod topology;
pub mod vertex;

/// Exact scalar used by the command line and the acceptance suite.
pub type Rational = num_rational::BigRational;
pub type RationalPoint = geometry::Point<Rational>;
pub type RationalLift = geometry::LiftedConfiguration<vertex::VertexId, Rational>;
