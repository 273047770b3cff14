//! Shift-aggregate-extract networks.
//!
//! For each level `l` the aggregate matrix is `A_0 = X` and, above the
//! bottom, `A_l = [R_{l,1} H_{l-1}, ..., R_{l,n(l)} H_{l-1}]`; the level
//! representation is `H_l = f_l(A_l)` with `f_l` a Leaky ReLU MLP applied
//! row-wise. A final affine head maps `H_L` to class logits.
//!
//! The same code runs on compressed inputs: `X^comp` and `R^comp` replace
//! the originals, and the top representations are expanded with `D_L`
//! before the head, so logits and gradients are those of the uncompressed
//! network.

mod adam;
mod checkpoint;
mod forward;
mod layer;
mod loss;
mod model;
mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use checkpoint::{read_checkpoint, write_checkpoint, SAEN_MAGIC};
pub use forward::{backward, forward, logits, shift_aggregate, ForwardTrace, NetInput};
pub use layer::{extract, leaky_relu, Dense, LevelNet, MlpCache};
pub use loss::{cross_entropy_loss, cross_entropy_loss_rows};
pub use model::{flatten_gradients, Gradients, ModelSpec, SaenModel};
pub use train::{accuracy, evaluate, predict, row_labels, train, Evaluation, TrainConfig};
