//! End-to-end acceptance suite. Each test prints one PASS line with its
//! measurements; a failed assertion is the FAIL line. The sentiment
//! treebank split and the opinion lexicon are looked up under `data/` in
//! the repository root, or under `SST_DIR` / `LEXICON_DIR` when set.

mod common;

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use score_embed::baselines::{train_nb, Lexicon, LinearTrainConfig, Polarity};
use score_embed::baselines::{predict_linear, train_linear_on_scores};
use score_embed::corpus::{
    load_sst, stratified_kfold, Dataset, Example, LabelSet, Vocabulary, PAD_INDEX, RESERVED,
};
use score_embed::model::{
    fd_well_conditioned, grad_check, init_params, softmax, ModelConfig,
};
use score_embed::optim::{
    adagrad_update, cohen_kappa, cross_validate, evaluate, split_train_dev, train, AdaGradState,
    TrainConfig,
};
use score_embed::model::{Activation, BankTensors, Gradients};
use score_embed::persist::save_model;
use score_embed::scorerep::{Aggregation, CountMode, ScoreTable};

fn data_dir(env_key: &str, fallback: &str) -> PathBuf {
    match std::env::var_os(env_key) {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(fallback),
    }
}

fn sst_dir() -> PathBuf {
    data_dir("SST_DIR", "sst")
}

/// Accuracy in percentage points.
fn pct(fraction: f64) -> f64 {
    fraction * 100.0
}

#[test]
fn acceptance_sst5_reproduction() {
    let started = Instant::now();
    let dir = sst_dir();
    let train_data = load_sst(&dir.join("train.txt"), false).unwrap();
    let dev_data = load_sst(&dir.join("dev.txt"), false).unwrap();
    let test_data = load_sst(&dir.join("test.txt"), false).unwrap();
    assert_eq!(train_data.len(), 8544);
    assert_eq!(dev_data.len(), 1101);
    assert_eq!(test_data.len(), 2210);

    let config = TrainConfig {
        lr: 0.01,
        epsilon: 0.1,
        dropout_rate: 0.6,
        epochs: 40,
        patience: 8,
        min_freq: 3,
        smoothing: 3.0,
        seed: 15,
        ..TrainConfig::default()
    };
    let vocab = Vocabulary::build(&train_data, config.min_freq).unwrap();
    let table = ScoreTable::learn(&train_data, &vocab, config.smoothing, config.count_mode);

    let outcome = train(&train_data, &dev_data, &table, &vocab, &config).unwrap();
    let se = pct(
        evaluate(&outcome.params, &test_data, &vocab, config.effective_min_len())
            .unwrap()
            .accuracy,
    );

    let base_vocab = Vocabulary::build(&train_data, 2).unwrap();
    let base_table = ScoreTable::learn(&train_data, &base_vocab, 0.5, CountMode::TokenOccurrences);

    let (linear_model, _) = train_linear_on_scores(
        &train_data,
        &base_table,
        &base_vocab,
        Aggregation::Mean,
        &LinearTrainConfig::default(),
    )
    .unwrap();
    let mut linear_hits = 0usize;
    for ex in &test_data.examples {
        let feature = base_table
            .sentence_feature(&ex.tokens, &base_vocab, Aggregation::Mean)
            .unwrap();
        if predict_linear(&linear_model, &feature).unwrap() == ex.label {
            linear_hits += 1;
        }
    }
    let linear = pct(linear_hits as f64 / test_data.len() as f64);

    let nb_model = train_nb(&train_data, &base_vocab, 0.5).unwrap();
    let nb_hits = test_data
        .examples
        .iter()
        .filter(|ex| nb_model.predict(&ex.tokens, &base_vocab) == ex.label)
        .count();
    let nb = pct(nb_hits as f64 / test_data.len() as f64);

    let minutes = started.elapsed().as_secs_f64() / 60.0;
    assert!(se >= 42.0, "score-embedding test accuracy {se:.2} below 42.0");
    assert!(
        (40.0..=49.0).contains(&linear),
        "linear baseline accuracy {linear:.2} outside [40, 49]"
    );
    assert!(
        (37.0..=45.0).contains(&nb),
        "naive bayes accuracy {nb:.2} outside [37, 45]"
    );
    assert!(
        se >= linear - 1.0,
        "score embedding {se:.2} fell more than a point behind the linear baseline {linear:.2}"
    );
    assert!(minutes < 30.0, "run took {minutes:.1} minutes");
    println!(
        "acceptance sst5: PASS (SE {se:.2}, linear {linear:.2}, NB {nb:.2}, {minutes:.1} min)"
    );
}

/// Three-class corpus where polarity words flip under a preceding "not":
/// composition that counting methods cannot read. Balanced classes, then
/// 20% of labels are resampled to a wrong class.
fn synthetic_corpus(n: usize, seed: u64) -> Dataset {
    let labels = LabelSet::new(vec![
        "negative".into(),
        "neutral".into(),
        "positive".into(),
    ])
    .unwrap();
    let pos: Vec<String> = (0..20).map(|i| format!("pos{i:02}")).collect();
    let neg: Vec<String> = (0..20).map(|i| format!("neg{i:02}")).collect();
    let fil: Vec<String> = (0..40).map(|i| format!("fil{i:02}")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng, pool: &[String]| pool[rng.random_range(0..pool.len())].clone();
    let mut examples = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % 3;
        let mut units: Vec<Vec<String>> = Vec::new();
        if class == 1 {
            for _ in 0..10 {
                units.push(vec![pick(&mut rng, &fil)]);
            }
            if rng.random::<f64>() < 0.3 {
                units.push(vec![pick(&mut rng, &pos)]);
                units.push(vec![pick(&mut rng, &neg)]);
            }
        } else {
            let (own, other) = if class == 2 { (&pos, &neg) } else { (&neg, &pos) };
            for _ in 0..4 {
                if rng.random::<f64>() < 0.45 {
                    units.push(vec!["not".to_string(), pick(&mut rng, other)]);
                } else {
                    units.push(vec![pick(&mut rng, own)]);
                }
            }
            for _ in 0..6 {
                units.push(vec![pick(&mut rng, &fil)]);
            }
        }
        units.shuffle(&mut rng);
        let label = if rng.random::<f64>() < 0.2 {
            (class + 1 + rng.random_range(0..2usize)) % 3
        } else {
            class
        };
        examples.push(Example {
            tokens: units.concat(),
            label,
            timestamp: None,
        });
    }
    Dataset::new(examples, labels).unwrap()
}

#[test]
fn acceptance_synthetic_ordering() {
    let data = synthetic_corpus(2000, 9001);
    let train_idx: Vec<usize> = (0..1600).collect();
    let test_idx: Vec<usize> = (1600..2000).collect();
    let train_part = data.subset(&train_idx);
    let test_part = data.subset(&test_idx);

    let config = TrainConfig {
        widths: vec![1, 2, 3],
        filters_per_width: 32,
        epochs: 15,
        ..TrainConfig::default()
    };
    let vocab = Vocabulary::build(&train_part, config.min_freq).unwrap();
    let table = ScoreTable::learn(&train_part, &vocab, config.smoothing, config.count_mode);
    let (tr, dev) = split_train_dev(&train_part, config.dev_fraction, config.seed).unwrap();
    let outcome = train(&tr, &dev, &table, &vocab, &config).unwrap();
    let se = pct(
        evaluate(&outcome.params, &test_part, &vocab, config.effective_min_len())
            .unwrap()
            .accuracy,
    );

    let nb_model = train_nb(&train_part, &vocab, 1.0).unwrap();
    let nb_hits = test_part
        .examples
        .iter()
        .filter(|ex| nb_model.predict(&ex.tokens, &vocab) == ex.label)
        .count();
    let nb = pct(nb_hits as f64 / test_part.len() as f64);

    let lexicon = Lexicon::new(
        (0..20).map(|i| format!("pos{i:02}")),
        (0..20).map(|i| format!("neg{i:02}")),
    );
    let lex_hits = test_part
        .examples
        .iter()
        .filter(|ex| lexicon.classify(&ex.tokens).as_label() == ex.label)
        .count();
    let lex = pct(lex_hits as f64 / test_part.len() as f64);

    assert!(
        se >= nb + 3.0,
        "score embedding {se:.2} not 3 points above naive bayes {nb:.2}"
    );
    assert!(
        se >= lex + 10.0,
        "score embedding {se:.2} not 10 points above the lexicon rule {lex:.2}"
    );
    println!("acceptance synthetic: PASS (SE {se:.2}, NB {nb:.2}, lexicon {lex:.2})");
}

fn probe_corpus() -> Dataset {
    let labels = LabelSet::new(vec!["low".into(), "mid".into(), "high".into()]).unwrap();
    let mk = |text: &str, label| Example {
        tokens: text.split_whitespace().map(String::from).collect(),
        label,
        timestamp: None,
    };
    Dataset::new(
        vec![
            mk("cold slow dim", 0),
            mk("slow cold cold", 0),
            mk("dim dim slow", 0),
            mk("plain even flat", 1),
            mk("even plain plain", 1),
            mk("flat flat even", 1),
            mk("warm bright quick", 2),
            mk("bright warm warm", 2),
            mk("quick quick bright", 2),
        ],
        labels,
    )
    .unwrap()
}

#[test]
fn acceptance_gradient_check() {
    let started = Instant::now();
    let data = probe_corpus();
    let vocab = Vocabulary::build(&data, 1).unwrap();
    let table = ScoreTable::learn(&data, &vocab, 0.0, CountMode::TokenOccurrences);
    let n_rows = vocab.len() + RESERVED;
    let mut worst = 0.0f64;
    for trial in 0..10u64 {
        let config = ModelConfig {
            widths: vec![2, 3],
            filters_per_width: 2,
            activation: if trial % 2 == 0 { Activation::Relu } else { Activation::Tanh },
            dropout_rate: 0.5,
            seed: 42 + trial,
        };
        let params = init_params(&table, &vocab, &config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64((42 + trial) ^ 0x5EED_51DE);
        let label = (trial % 3) as usize;
        let mut probe = None;
        for _ in 0..200 {
            let len = rng.random_range(4..=8usize);
            let mut rows: Vec<usize> = (1..n_rows).collect();
            rows.shuffle(&mut rng);
            rows.truncate(len);
            if fd_well_conditioned(&params, &rows, 1e-3).unwrap() {
                probe = Some(rows);
                break;
            }
        }
        let probe = probe.expect("a well-conditioned probe sentence");
        let err = grad_check(&params, &probe, label, 1e-5).unwrap();
        assert!(err < 1e-4, "trial {trial}: max relative error {err:.3e}");
        worst = worst.max(err);
    }
    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 10.0, "gradient checks took {secs:.1} s");
    println!("acceptance gradcheck: PASS (worst relative error {worst:.3e}, {secs:.2} s)");
}

#[test]
fn acceptance_score_table_properties() {
    let dir = sst_dir();
    let data = load_sst(&dir.join("train.txt"), false).unwrap();
    let c = data.n_classes();
    let vocab = Vocabulary::build(&data, 1).unwrap();
    let table = ScoreTable::learn(&data, &vocab, 0.0, CountMode::TokenOccurrences);

    for r in 0..table.vocab_size() {
        let sum: f64 = table.row(r).iter().sum();
        assert!(
            (sum - 1.0).abs() <= 1e-9,
            "row {r} sums to {sum}"
        );
    }

    let mut independent: HashMap<(usize, usize), u64> = HashMap::new();
    let mut in_vocab_tokens = 0u64;
    for ex in &data.examples {
        for tok in &ex.tokens {
            if let Some(idx) = vocab.index_of(tok) {
                *independent.entry((idx - RESERVED, ex.label)).or_insert(0) += 1;
                in_vocab_tokens += 1;
            }
        }
    }
    let mut table_total = 0u64;
    for r in 0..table.vocab_size() {
        for (class, &n) in table.count_row(r).iter().enumerate() {
            assert_eq!(
                n,
                independent.get(&(r, class)).copied().unwrap_or(0),
                "count mismatch at row {r} class {class}"
            );
            table_total += n;
        }
    }
    assert_eq!(table_total, in_vocab_tokens, "token counts not conserved");

    let perm = [4usize, 0, 3, 1, 2];
    let mut new_names = vec![String::new(); c];
    for (old, &new) in perm.iter().enumerate() {
        new_names[new] = data.labels.name(old).to_string();
    }
    let permuted = Dataset::new(
        data.examples
            .iter()
            .map(|ex| Example {
                tokens: ex.tokens.clone(),
                label: perm[ex.label],
                timestamp: ex.timestamp,
            })
            .collect(),
        LabelSet::new(new_names).unwrap(),
    )
    .unwrap();
    let ptable = ScoreTable::learn(&permuted, &vocab, 0.0, CountMode::TokenOccurrences);
    for r in 0..table.vocab_size() {
        for class in 0..c {
            assert_eq!(
                table.row(r)[class].to_bits(),
                ptable.row(r)[perm[class]].to_bits(),
                "permutation equivariance broken at row {r} class {class}"
            );
        }
    }
    println!(
        "acceptance score-table: PASS ({} rows, {} tokens conserved, permutation exact)",
        table.vocab_size(),
        table_total
    );
}

#[test]
fn acceptance_oracle_equivalence() {
    let mut rng = common::oracle_rng();
    for case in 0..100 {
        let params = common::random_params(&mut rng);
        params.validate().unwrap();
        let indices = common::random_sentence(&mut rng, &params);
        common::assert_forward_matches(&params, &indices, 1e-12, &format!("case {case}"));
    }
    println!("acceptance oracle: PASS (100 random configurations within 1e-12)");
}

#[test]
fn acceptance_determinism() {
    let data = synthetic_corpus(300, 7);
    let config = TrainConfig {
        widths: vec![2],
        filters_per_width: 8,
        epochs: 4,
        batch_size: 25,
        dropout_rate: 0.3,
        seed: 11,
        ..TrainConfig::default()
    };
    let vocab = Vocabulary::build(&data, config.min_freq).unwrap();
    let table = ScoreTable::learn(&data, &vocab, config.smoothing, config.count_mode);
    let (tr, dev) = split_train_dev(&data, config.dev_fraction, config.seed).unwrap();

    let tag = std::process::id();
    let paths: Vec<PathBuf> = (0..3)
        .map(|i| std::env::temp_dir().join(format!("se-accept-{tag}-{i}.json")))
        .collect();
    for (i, threads) in [(0usize, 1usize), (1, 1), (2, 2)] {
        let outcome = score_embed::par::run_with_threads(threads, || {
            train(&tr, &dev, &table, &vocab, &config)
        })
        .unwrap();
        save_model(&paths[i], &outcome.params, &vocab, &data.labels, &config).unwrap();
    }
    let bytes: Vec<Vec<u8>> = paths.iter().map(|p| std::fs::read(p).unwrap()).collect();
    for p in &paths {
        let _ = std::fs::remove_file(p);
    }
    assert_eq!(bytes[0], bytes[1], "two identical runs wrote different model files");
    assert_eq!(bytes[0], bytes[2], "thread count changed the model file");

    let reports: Vec<String> = [1usize, 1, 2]
        .iter()
        .map(|&threads| {
            score_embed::par::run_with_threads(threads, || cross_validate(&data, &config, 3))
                .unwrap()
                .to_csv()
        })
        .collect();
    assert_eq!(reports[0], reports[1], "repeated cross-validation reports differ");
    assert_eq!(reports[0], reports[2], "thread count changed the cross-validation report");
    println!(
        "acceptance determinism: PASS (model files {} bytes, reports identical across runs and thread counts)",
        bytes[0].len()
    );
}

#[test]
fn acceptance_closed_forms() {
    let p = softmax(&[(2.0f64).ln(), 0.0, 0.0]);
    let expected = [0.5, 0.25, 0.25];
    for (got, want) in p.iter().zip(expected) {
        assert!((got - want).abs() <= 1e-12, "softmax {got} vs {want}");
    }

    let data = probe_corpus();
    let vocab = Vocabulary::build(&data, 1).unwrap();
    let table = ScoreTable::learn(&data, &vocab, 0.0, CountMode::TokenOccurrences);
    let config = ModelConfig {
        widths: vec![2],
        filters_per_width: 2,
        activation: Activation::Relu,
        dropout_rate: 0.0,
        seed: 1,
    };
    let mut params = init_params(&table, &vocab, &config).unwrap();
    let c = params.classes();
    let mut grads = Gradients {
        embedding: vec![0.0; params.embedding.values().len()],
        banks: params
            .banks
            .iter()
            .map(|b| BankTensors {
                weights: vec![0.0; b.weights.len()],
                bias: vec![0.0; b.bias.len()],
            })
            .collect(),
        dense_weights: vec![0.0; params.dense_weights.len()],
        dense_bias: vec![0.0; params.dense_bias.len()],
    };
    let lr = 0.1;
    let eps = 1e-8;
    grads.dense_weights[0] = 0.25;
    grads.dense_bias[1] = -0.5;
    grads.embedding[PAD_INDEX * c] = 0.7;
    let touched_row = RESERVED * c;
    grads.embedding[touched_row] = 0.125;

    let w_before = params.dense_weights[0];
    let b_before = params.dense_bias[1];
    let e_before = params.embedding.values()[touched_row];
    let w_spare = params.dense_weights[1];
    let mut state = AdaGradState::new(&params, lr, eps);
    adagrad_update(&mut state, &mut params, &grads).unwrap();

    // From a zero accumulator, one step moves by lr * g / (|g| + eps).
    let step = |g: f64| lr * g / (g.abs() + eps);
    assert!((params.dense_weights[0] - (w_before - step(0.25))).abs() <= 1e-9);
    assert!((params.dense_bias[1] - (b_before - step(-0.5))).abs() <= 1e-9);
    assert!((params.embedding.values()[touched_row] - (e_before - step(0.125))).abs() <= 1e-9);
    assert_eq!(params.dense_weights[1], w_spare, "zero-gradient element moved");
    assert_eq!(params.embedding.values()[PAD_INDEX * c], 0.0, "padding row moved");

    assert_eq!(cohen_kappa(&[0, 0, 1, 1], &[1, 1, 0, 0]).unwrap(), -1.0);

    let lexicon = Lexicon::new(["good".to_string()], ["bad".to_string()]);
    let toks = |s: &str| -> Vec<String> { s.split_whitespace().map(String::from).collect() };
    assert_eq!(lexicon.classify(&toks("good bad")), Polarity::Neutral);
    assert_eq!(lexicon.classify(&toks("plain words only")), Polarity::Neutral);
    assert_eq!(lexicon.classify(&toks("good good bad")), Polarity::Positive);
    println!("acceptance closed-forms: PASS (softmax, adagrad step, kappa -1, lexicon ties)");
}

#[test]
fn acceptance_cross_validation() {
    let dir = sst_dir();
    let full = load_sst(&dir.join("train.txt"), false).unwrap();
    let idx: Vec<usize> = (0..1000).collect();
    let data = full.subset(&idx);
    let config = TrainConfig {
        filters_per_width: 32,
        epochs: 8,
        patience: 3,
        ..TrainConfig::default()
    };

    let report = cross_validate(&data, &config, 5).unwrap();
    assert_eq!(report.folds.len(), 5);
    let covered: usize = report.folds.iter().map(|f| f.metrics.n).sum();
    assert_eq!(covered, 1000);

    // A word appearing only in the held-out fold must be out of vocabulary
    // for every table built from the remaining folds, hence scored
    // uniformly.
    let fold_of = stratified_kfold(&data, 5, config.seed).unwrap();
    let pool_idx: Vec<usize> = (0..data.len()).filter(|&i| fold_of[i] != 0).collect();
    let pool = data.subset(&pool_idx);
    let pool_words: HashSet<&str> = pool
        .examples
        .iter()
        .flat_map(|e| e.tokens.iter().map(String::as_str))
        .collect();
    let sentinel = data
        .examples
        .iter()
        .enumerate()
        .filter(|(i, _)| fold_of[*i] == 0)
        .flat_map(|(_, e)| e.tokens.iter())
        .find(|t| !pool_words.contains(t.as_str()))
        .expect("held-out fold should contain some word unseen elsewhere");
    let pool_vocab = Vocabulary::build(&pool, config.min_freq).unwrap();
    let pool_table = ScoreTable::learn(&pool, &pool_vocab, config.smoothing, config.count_mode);
    assert_eq!(pool_vocab.index_of(sentinel), None);
    let c = data.n_classes();
    assert_eq!(pool_table.word_score(sentinel, &pool_vocab), vec![1.0 / c as f64; c]);
    println!(
        "acceptance cross-validation: PASS (5 folds cover 1000 examples, mean accuracy {:.3}, held-out word \"{sentinel}\" scored uniformly)",
        report.mean_accuracy
    );
}
