//! Residual CNN inference: layers, forward pass, model bank and tiled
//! frame reconstruction.

mod bank;
mod layers;
mod model;
mod reconstruct;

pub use bank::{
    decode_bank, encode_bank, load_weights, save_weights, select_model, select_qp_group,
    AdaptationVersion, ModelKey, QpGroup, WeightBank, BANK_FORMAT_VERSION, BANK_MAGIC,
};
pub use layers::{conv2d, prelu, ConvParams, PReluParams, Tensor3, KERNEL};
pub use model::{network_forward, ModelWeights, NetworkSpec, ResidualBlock, IO_CHANNELS};
pub use reconstruct::{reconstruct_frame, Tiling};
