//! Smallest possible decode: two tokens, delta distributions.
//!
//! Run with `cargo run -p cespan --example decode_minimal`.

use cespan::{bss_decode, DecodeConfig, SpanProbabilityField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = SpanProbabilityField {
        id: "s1".into(),
        tokens: vec!["rain".into(), "flood".into()],
        cause_start: vec![1.0, 0.0],
        cause_end: vec![1.0, 0.0],
        effect_start: vec![0.0, 1.0],
        effect_end: vec![0.0, 1.0],
        signal: None,
        signal_presence: None,
        normalized: true,
    };
    let config = DecodeConfig::new(8, 3)?; // beam width k, answers m
    for hypothesis in bss_decode(&field, &config)? {
        println!(
            "{} cause={} effect={} score={}",
            hypothesis.orientation(),
            hypothesis.cause(),
            hypothesis.effect(),
            hypothesis.score()
        );
    }
    Ok(())
}
