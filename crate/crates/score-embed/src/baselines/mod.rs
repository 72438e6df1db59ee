//! Reference baselines: a polarity-lexicon counting rule, multinomial naive
//! Bayes, and a linear classifier over sentence score features.

mod lexicon;
mod linear;
mod nb;

pub use lexicon::{load_lexicon, Lexicon, LexiconLoad, Polarity};
pub use linear::{
    linear_grad_check, predict_linear, train_linear_on_scores, LinearScoreModel,
    LinearTrainConfig,
};
pub use nb::{train_nb, NbModel};
