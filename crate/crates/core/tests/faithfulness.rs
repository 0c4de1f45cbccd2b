//! Evidence, not proof: every nontrivial element of length at most 6 over
//! `a, b, h1, h2` and inverses moves some point of `I_id`.

use rigidity_core::action_models::{ActionModel, GroupElement, ModelConfig, Variant};

fn check(variant: Variant, max_len: usize) {
    let model = ActionModel::build(ModelConfig::default_for(variant, max_len)).unwrap();
    let gens = model.generators().clone();
    let (l, r) = model.identity_gap();
    let samples: Vec<f64> = [0.2, 0.5, 0.7].iter().map(|s| l + s * (r - l)).collect();
    let mut trivial = 0;
    for len in 1..=max_len {
        for g in GroupElement::reduced_words(len) {
            let (w, v) = g.normal_form(&gens);
            if w.is_empty() && v.is_zero() {
                // commutators of translations
                trivial += 1;
                assert!(samples.iter().all(|&x| (model.evaluate(&g, x) - x).abs() < 1e-12), "{g:?}");
                continue;
            }
            let moved = samples.iter().any(|&x| model.displacement(&g, x).abs() > 1e-6);
            assert!(moved, "{variant}: {g:?} fixes every sample");
        }
    }
    assert!(trivial > 0);
}

#[test]
fn interval_words_act_nontrivially() {
    check(Variant::Interval, 6);
}

#[test]
fn circle_words_act_nontrivially() {
    check(Variant::Circle, 5);
}
