use crate::corpus::PAD_INDEX;
use crate::error::{Error, Result};
use crate::model::{
    backward, embed_sentence, forward, Activation, ForwardMode, Gradients, ModelParams,
};

/// Relative error between an analytic and a numeric derivative, guarded so
/// that near-zero pairs do not blow up.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8)
}

fn loss_of(params: &ModelParams, indices: &[usize], label: usize) -> Result<f64> {
    let (logits, _) = forward(params, indices, ForwardMode::Eval)?;
    Ok(-crate::model::log_likelihood(&logits, label))
}

/// Address of one trainable scalar.
#[derive(Debug, Clone, Copy)]
enum Slot {
    Embedding(usize),
    ConvWeight(usize, usize),
    ConvBias(usize, usize),
    DenseWeight(usize),
    DenseBias(usize),
}

fn slot_mut(params: &mut ModelParams, slot: Slot) -> &mut f64 {
    match slot {
        Slot::Embedding(i) => &mut params.embedding.values_mut()[i],
        Slot::ConvWeight(b, i) => &mut params.banks[b].weights[i],
        Slot::ConvBias(b, i) => &mut params.banks[b].bias[i],
        Slot::DenseWeight(i) => &mut params.dense_weights[i],
        Slot::DenseBias(i) => &mut params.dense_bias[i],
    }
}

fn slot_analytic(grads: &Gradients, slot: Slot) -> f64 {
    match slot {
        Slot::Embedding(i) => grads.embedding[i],
        Slot::ConvWeight(b, i) => grads.banks[b].weights[i],
        Slot::ConvBias(b, i) => grads.banks[b].bias[i],
        Slot::DenseWeight(i) => grads.dense_weights[i],
        Slot::DenseBias(i) => grads.dense_bias[i],
    }
}

fn trainable_slots(params: &ModelParams) -> Vec<Slot> {
    let c = params.classes();
    let mut slots = Vec::new();
    for r in 0..params.embedding.n_rows() {
        if r == PAD_INDEX {
            continue;
        }
        for k in 0..c {
            slots.push(Slot::Embedding(r * c + k));
        }
    }
    for (b, bank) in params.banks.iter().enumerate() {
        for i in 0..bank.weights.len() {
            slots.push(Slot::ConvWeight(b, i));
        }
        for i in 0..bank.bias.len() {
            slots.push(Slot::ConvBias(b, i));
        }
    }
    for i in 0..params.dense_weights.len() {
        slots.push(Slot::DenseWeight(i));
    }
    for i in 0..params.dense_bias.len() {
        slots.push(Slot::DenseBias(i));
    }
    slots
}

/// Reports whether finite differences are trustworthy at this input: no
/// relu unit may sit within `margin` of zero, and each pooling decision
/// must lead its competitors by more than `margin`. Inside those margins a
/// probe step can flip a relu branch or the argmax, the loss is locally
/// non-differentiable, and a numeric-vs-analytic comparison is
/// meaningless rather than failed.
///
/// A relu filter that is inactive at every position is safe: its map is
/// pinned at zero, the loss is locally constant in its parameters, and
/// both gradients are zero. Positions pinned that way also cannot contest
/// the pooled maximum, so only active positions enter the gap test.
pub fn fd_well_conditioned(
    params: &ModelParams,
    indices: &[usize],
    margin: f64,
) -> Result<bool> {
    let c = params.classes();
    let sentence = embed_sentence(params, indices)?;
    let n = indices.len();
    for bank in &params.banks {
        if n < bank.width {
            return Err(Error::invalid(format!(
                "sentence of length {n} is shorter than filter width {}",
                bank.width
            )));
        }
        for f in 0..bank.n_filters() {
            let weights = bank.filter(f, c);
            let mut best = f64::NEG_INFINITY;
            let mut runner_up = f64::NEG_INFINITY;
            let mut active = 0usize;
            for t in 0..=(n - bank.width) {
                let window = &sentence[t * c..(t + bank.width) * c];
                let pre: f64 = bank.bias[f]
                    + weights.iter().zip(window).map(|(w, x)| w * x).sum::<f64>();
                if params.activation == Activation::Relu {
                    if pre.abs() <= margin {
                        return Ok(false);
                    }
                    if pre < 0.0 {
                        continue;
                    }
                }
                active += 1;
                let value = params.activation.apply(pre);
                if value > best {
                    runner_up = best;
                    best = value;
                } else if value > runner_up {
                    runner_up = value;
                }
            }
            if active >= 2 && best - runner_up <= margin {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Compares the analytic gradient of one example's loss against central
/// finite differences over every trainable scalar (the PAD embedding row is
/// not trainable). Dropout is disabled throughout. Returns the maximum
/// relative error.
///
/// Finite differences are only meaningful where the loss is differentiable;
/// use [`fd_well_conditioned`] to screen inputs before comparing.
pub fn grad_check(
    params: &ModelParams,
    indices: &[usize],
    label: usize,
    epsilon: f64,
) -> Result<f64> {
    let c = params.classes();
    let (_, trace) = forward(params, indices, ForwardMode::Eval)?;
    let eg = backward(params, &trace, label)?;
    let mut analytic = Gradients::zeros_like(params);
    analytic.add_example(&eg, 1.0, c);

    let mut work = params.clone();
    let mut max_err = 0.0f64;
    for slot in trainable_slots(params) {
        let orig = *slot_mut(&mut work, slot);
        *slot_mut(&mut work, slot) = orig + epsilon;
        let up = loss_of(&work, indices, label)?;
        *slot_mut(&mut work, slot) = orig - epsilon;
        let down = loss_of(&work, indices, label)?;
        *slot_mut(&mut work, slot) = orig;
        let gn = (up - down) / (2.0 * epsilon);
        let err = relative_error(slot_analytic(&analytic, slot), gn);
        if err > max_err {
            max_err = err;
        }
    }
    Ok(max_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tiny_fixture;

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let (params, vocab) = tiny_fixture(21);
        let indices = vocab.encode(
            &["red".into(), "blue".into(), "gold".into(), "green".into()],
            3,
        );
        for label in 0..3 {
            let err = grad_check(&params, &indices, label, 1e-5).unwrap();
            assert!(err < 1e-4, "label {label}: max relative error {err}");
        }
    }

    #[test]
    fn check_holds_across_seeds_and_unknown_tokens() {
        for seed in [100u64, 101, 102] {
            let (params, vocab) = tiny_fixture(seed);
            let indices = vocab.encode(
                &["zzz".into(), "red".into(), "zzz".into(), "blue".into()],
                3,
            );
            let err = grad_check(&params, &indices, 2, 1e-5).unwrap();
            assert!(err < 1e-4, "seed {seed}: max relative error {err}");
        }
    }

    #[test]
    fn tanh_activation_also_passes() {
        use crate::model::Activation;
        let (mut params, vocab) = tiny_fixture(33);
        params.activation = Activation::Tanh;
        let indices = vocab.encode(&["green".into(), "gold".into(), "red".into()], 3);
        let err = grad_check(&params, &indices, 0, 1e-5).unwrap();
        assert!(err < 1e-4, "max relative error {err}");
    }

    #[test]
    fn frozen_relu_filters_are_well_conditioned() {
        // Weights of zero and a bias of -1 pin every map at zero. The
        // loss is locally constant in the conv parameters, so finite
        // differences are valid there and the probe must be accepted.
        let (mut params, vocab) = tiny_fixture(7);
        for bank in &mut params.banks {
            bank.weights.fill(0.0);
            bank.bias.fill(-1.0);
        }
        let indices = vocab.encode(
            &["red".into(), "blue".into(), "gold".into(), "green".into()],
            3,
        );
        assert!(fd_well_conditioned(&params, &indices, 1e-3).unwrap());
        let err = grad_check(&params, &indices, 1, 1e-5).unwrap();
        assert!(err < 1e-4, "max relative error {err}");
    }

    #[test]
    fn relu_preactivation_near_zero_is_rejected() {
        let (mut params, vocab) = tiny_fixture(7);
        for bank in &mut params.banks {
            bank.weights.fill(0.0);
            bank.bias.fill(5e-4);
        }
        let indices = vocab.encode(
            &["red".into(), "blue".into(), "gold".into(), "green".into()],
            3,
        );
        assert!(!fd_well_conditioned(&params, &indices, 1e-3).unwrap());
    }

    #[test]
    fn pooled_near_ties_are_rejected() {
        use crate::model::Activation;
        // A constant positive map ties every pooling candidate, for both
        // activations.
        let (mut params, vocab) = tiny_fixture(7);
        for bank in &mut params.banks {
            bank.weights.fill(0.0);
            bank.bias.fill(1.0);
        }
        let indices = vocab.encode(
            &["red".into(), "blue".into(), "gold".into(), "green".into()],
            3,
        );
        assert!(!fd_well_conditioned(&params, &indices, 1e-3).unwrap());
        params.activation = Activation::Tanh;
        assert!(!fd_well_conditioned(&params, &indices, 1e-3).unwrap());
    }

    #[test]
    fn negated_gradient_is_loud() {
        // A sign error shows up as a relative error of exactly 2.
        assert_eq!(relative_error(-0.37, 0.37), 2.0);
        assert_eq!(relative_error(5.0, -5.0), 2.0);
    }

    #[test]
    fn all_zero_parameters_stay_finite() {
        let (mut params, vocab) = tiny_fixture(3);
        params.embedding.values_mut().fill(0.0);
        for bank in &mut params.banks {
            bank.weights.fill(0.0);
            bank.bias.fill(0.0);
        }
        params.dense_weights.fill(0.0);
        params.dense_bias.fill(0.0);
        let indices = vocab.encode(&["red".into(), "blue".into(), "gold".into()], 3);
        let err = grad_check(&params, &indices, 1, 1e-5).unwrap();
        assert!(err.is_finite());
        assert!(err < 1e-4, "max relative error {err}");
    }
}
