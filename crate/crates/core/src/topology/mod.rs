mod certify;
mod homology;
mod shelling;

pub use certify::{certify, Evidence, TopologyCertificate, TopologyKind, MAX_LINK_RECURSION_DIM};
pub use homology::betti_gf2;
pub use shelling::{verify_shelling, ShellingOrder};
