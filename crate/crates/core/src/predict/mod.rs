//! Latent-image prediction: bilateral pre-smoothing followed by an
//! anisotropic edge-enhancing flow, plus a shock-filter baseline.

mod bilateral;
mod pde;
mod shock;

pub use bilateral::bilateral_filter;
pub use pde::{
    pde_tensors, predict_latent, weight_across, weight_along, PdeTensors, PredictParams,
    Prediction, FLAT_GRADIENT,
};
pub use shock::shock_filter;
