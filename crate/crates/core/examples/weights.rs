//! Composed representations of F[f/x] and the weight q(tau) of a
//! convolution functional, with a positivity scan.
//!
//! cargo run --example weights

use klortho::kl::{kl_forward, lemma1_forms, lemma2_positivity_scan, weight_q, Lemma1Form, RealFunction, TransformSpec, WeightVariant};
use klortho::quad::QuadSpec;

fn main() -> klortho::Result<()> {
    let quad = QuadSpec::default();
    let f = RealFunction::exp_moment(1.0, 1.0);
    let direct = kl_forward(&RealFunction::exp_moment(0.0, 1.0), 1.5, &TransformSpec::default(), &quad)?;
    for form in [Lemma1Form::CosineLaplace, Lemma1Form::SineForm] {
        println!("{form:?}: {:.15e} (direct {direct:.15e})", lemma1_forms(&f, 1.5, form, &quad)?);
    }

    let omega = RealFunction::exp_moment(1.0, 1.0);
    for variant in [WeightVariant::Plain, WeightVariant::SineForm, WeightVariant::Hat] {
        println!("q(1) {variant:?}: {:.15e}", weight_q(&omega, 1.0, variant, &quad)?);
    }

    let taus: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();
    let scan = lemma2_positivity_scan(&omega, &taus, &quad)?;
    println!("positivity scan: min {:.3e}, {} negative nodes", scan.min, scan.negatives.len());
    Ok(())
}
