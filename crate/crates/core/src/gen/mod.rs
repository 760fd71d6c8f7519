//! Instance generators: random DAGs and the two hardness-gadget families.

pub mod clique;
pub mod mcc;
pub mod psi;
pub mod random;

use crate::graph::Solution;

/// What a generator planted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// One vertex per color, in color order (0-based vertex ids).
    Clique(Vec<usize>),
    /// Image index `j` (1-based within its class) per pattern vertex.
    Homomorphism(Vec<usize>),
}

/// A planted witness and the routing it induces on the generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenCertificate {
    pub witness: Witness,
    pub expected_solution: Solution,
}
