//! Canonical config text round-trips for arbitrary valid configs.

use monoform::config::{format_num, Command, ExperimentConfig, Kind, Source, KEYS};
use proptest::prelude::*;

fn raw_value(kind: Kind, seed: &[f64], word: usize) -> String {
    let x = seed[0];
    match kind {
        Kind::Num => format!("{x:e}"),
        Kind::Count => format!("{}", (x.abs() * 1e3) as u64),
        Kind::Vector => seed
            .iter()
            .map(|v| format!("{v}"))
            .collect::<Vec<_>>()
            .join(", "),
        Kind::Grid => format!("{}:{}:{}", x, x + 1.0 + seed[1].abs(), 2 + word),
        Kind::Choice(words) => words[word % words.len()].to_owned(),
        Kind::Flag => word.is_multiple_of(2).to_string(),
        Kind::Path => format!("out/run{word}.csv"),
        Kind::VectorOr(words) if word.is_multiple_of(2) => words[0].to_owned(),
        Kind::VectorOr(_) => format_num(x),
    }
}

proptest! {
    #[test]
    fn canonical_form_is_a_fixed_point(
        cmd in 0usize..7,
        picks in proptest::collection::vec((any::<bool>(), proptest::collection::vec(-1e6f64..1e6, 3), 0usize..50), KEYS.len()),
    ) {
        let command = Command::ALL[cmd];
        let mut cfg = ExperimentConfig::new(command);
        let mut text = format!("# generated\ncommand = {command}\n");
        for (key, (on, seed, word)) in KEYS.iter().zip(&picks) {
            if *on && key.applies(command) {
                let raw = raw_value(key.kind, seed, *word);
                cfg.set(key.name, &raw, Source::Flag).unwrap();
                text.push_str(&format!("  {} =  {raw}  # note\n", key.name));
            }
        }
        let parsed = ExperimentConfig::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &cfg);
        let canon = cfg.canonical();
        let reparsed = ExperimentConfig::parse(&canon).unwrap();
        prop_assert_eq!(&reparsed, &cfg);
        prop_assert_eq!(reparsed.canonical(), canon);
    }
}
