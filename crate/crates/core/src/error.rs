use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by every stage of the deblurring pipeline.
#[derive(Debug, Error)]
pub enum DeblurError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("expected {expected} channel(s), got {got}")]
    Channels { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("background too small: {0}")]
    BackgroundTooSmall(String),
    #[error("segmentation degenerate: {0}")]
    DegenerateSegmentation(String),
    #[error("masks {first} and {second} overlap")]
    MaskOverlap { first: usize, second: usize },
    #[error("no structure: gradient pairs carry no energy")]
    NoStructure,
    #[error("degenerate kernel: no positive weight")]
    DegenerateKernel,
    #[error("no iterations configured")]
    NoIterations,
    #[error(
        "image too small: {width}x{height} cannot support a {kernel_size}x{kernel_size} kernel"
    )]
    ImageTooSmall {
        width: usize,
        height: usize,
        kernel_size: usize,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
}

pub type Result<T> = std::result::Result<T, DeblurError>;
