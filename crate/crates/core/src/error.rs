//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial degree too low: {0}")]
    DegreeTooLow(&'static str),
    #[error("the polynomial pair is not an automorphism: {0}")]
    NotAnAutomorphism(&'static str),
    #[error("operation requires a hyperbolic element, input is elliptic")]
    EllipticInput,
    #[error("intersection exceeds the window; rerun with a larger window")]
    WindowTooSmall,
    #[error("path does not have the required type: {0}")]
    WrongPathType(&'static str),
    #[error("degenerate path: the two outer vertices coincide")]
    DegeneratePath,
    #[error("parameter must be nonzero: {0}")]
    ZeroParameter(&'static str),
    #[error("the product r1*r2 is trivial")]
    TrivialProduct,
    #[error("start vertex is not on the boundary of the region")]
    StartNotOnBoundary,
    #[error("diagram is not connected and simply connected")]
    NotSimplyConnected,
    #[error("identification precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("the outer vertices of the two segments coincide; use the final-step variant")]
    VerticesCoincide,
    #[error("the two regions share no half-segment")]
    NotAdjacent,
    #[error("automorphism has Jacobian determinant != 1, not in G")]
    NotInG,
    #[error("input is the identity")]
    IdentityInput,
    #[error("geometric length {0} exceeds 8; trivialization is only available up to length 8")]
    LengthTooLarge(usize),
    #[error("certificate did not verify: {0}")]
    UnverifiedCertificate(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("malformed diagram: {0}")]
    InvalidDiagram(String),
    #[error("descent guarantee violated on {0}; this input contradicts the construction")]
    DescentFailed(String),
}
