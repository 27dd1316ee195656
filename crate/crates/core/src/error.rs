use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid boost: |v| = {speed} m/s is not below c = {c} m/s")]
    InvalidBoost { speed: f64, c: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Frame time along a worldline failed to increase between two vertices.
    #[error("frame time is not strictly increasing at vertex {index} (t = {t_prev} -> {t_next})")]
    NonMonotoneTime { index: usize, t_prev: f64, t_next: f64 },

    #[error("worldline segment {index} is not subluminal (speed {speed} m/s, c = {c} m/s)")]
    Superluminal { index: usize, speed: f64, c: f64 },

    #[error("invalid worldline pair: {0}")]
    InvalidPair(String),

    #[error("nonzero field on the path of packet {path} at t = {t}")]
    FieldOnPath { path: char, t: f64 },

    #[error(
        "quadrature tolerance not met: estimated error {estimated_error:e} > tol {tol:e} \
         after {panels} panels (max depth {max_depth})"
    )]
    ToleranceNotMet {
        estimated_error: f64,
        tol: f64,
        panels: usize,
        max_depth: u32,
    },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
