//! Supervised text categorization with class-score word representations.
//!
//! Words are represented by their smoothed per-class conditional
//! probabilities, estimated by counting over a labeled corpus. The
//! resulting score table serves directly as a feature map for simple
//! baselines and as the initialization of a convolutional classifier's
//! embedding layer, which is then fine-tuned end to end.
//!
//! The crate bundles the corpus loaders, the score table, the
//! convolutional model with its training loop, reference baselines,
//! evaluation metrics, cross-validation, model persistence, and a
//! day-level timeline aggregator. All training and evaluation entry
//! points are deterministic for a fixed seed, independent of thread
//! count.

pub mod baselines;
pub mod corpus;
pub mod error;
pub mod model;
pub mod optim;
pub mod par;
pub mod persist;
pub mod scorerep;
pub mod timeline;

pub use crate::error::{Error, Result};
pub use crate::corpus::{Dataset, Example, LabelSet, Vocabulary};
pub use crate::model::{Activation, ModelConfig, ModelParams};
pub use crate::optim::{TrainConfig, TrainOutcome, train};
pub use crate::scorerep::{Aggregation, CountMode, ScoreTable};
