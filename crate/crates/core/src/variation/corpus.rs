use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::base::{BaseDocSpec, TypeMix};
use super::VariationKind;

/// Base documents per depth 2..=7 in a 75-document reference corpus.
const DEPTH_COUNTS: [usize; 6] = [8, 7, 44, 13, 2, 1];

/// `(min fields, max fields, documents)` per field-count bucket.
const FIELD_BUCKETS: [(usize, usize, usize); 5] = [(4, 10, 6), (11, 25, 22), (26, 50, 27), (51, 100, 16), (101, 228, 4)];

/// Independent seed `index` of a family rooted at `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

/// Splits `count` across `weights` by largest remainder, earliest bucket first on ties.
fn apportion(weights: &[usize], count: usize) -> Vec<usize> {
    let total: usize = weights.iter().sum();
    let mut out: Vec<usize> = weights.iter().map(|w| w * count / total).collect();
    let mut rest: Vec<(usize, usize)> = weights.iter().enumerate().map(|(i, w)| (w * count % total, i)).collect();
    rest.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let missing = count - out.iter().sum::<usize>();
    for &(_, i) in rest.iter().take(missing) {
        out[i] += 1;
    }
    out
}

/// Base document specifications whose depth and field-count histograms
/// follow the reference corpus, scaled to `count`.
pub fn plan_corpus(count: usize, seed: u64, mix: TypeMix) -> Vec<BaseDocSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut depths: Vec<usize> = apportion(&DEPTH_COUNTS, count)
        .into_iter()
        .enumerate()
        .flat_map(|(i, n)| core::iter::repeat_n(i + 2, n))
        .collect();
    let bucket_weights: Vec<usize> = FIELD_BUCKETS.iter().map(|b| b.2).collect();
    let mut fields: Vec<usize> = Vec::with_capacity(count);
    for (&(lo, hi, _), n) in FIELD_BUCKETS.iter().zip(apportion(&bucket_weights, count)) {
        for _ in 0..n {
            fields.push(rng.gen_range(lo..=hi));
        }
    }
    depths.shuffle(&mut rng);
    fields.shuffle(&mut rng);
    depths
        .into_iter()
        .zip(fields)
        .enumerate()
        .map(|(i, (depth, f))| BaseDocSpec {
            target_depth: depth,
            target_fields: f.max(depth - 1),
            type_mix: mix,
            seed: derive_seed(seed, i as u64),
        })
        .collect()
}

/// One variant to produce from base document `base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub case_id: String,
    pub base: usize,
    pub kind: VariationKind,
    /// `None` for structural kinds.
    pub ratio: Option<f64>,
    pub seed: u64,
}

/// Cases for every base and kind; gradual kinds get one case per entry of
/// `ratios` (ids carry the ratio in percent), all sharing one seed per
/// (base, kind) so variants are nested across ratios.
pub fn enumerate_cases(bases: &[BaseDocSpec], kinds: &[VariationKind], ratios: &[f64]) -> Vec<CaseSpec> {
    let mut cases = Vec::new();
    for (b, spec) in bases.iter().enumerate() {
        for &kind in kinds {
            let seed = derive_seed(spec.seed, 1 + VariationKind::ALL.iter().position(|k| *k == kind).unwrap_or(0) as u64);
            if kind.is_gradual() {
                for &ratio in ratios {
                    cases.push(CaseSpec {
                        case_id: format!("b{b:03}-{kind}-r{:03}", libm::round(ratio * 100.0) as u32),
                        base: b,
                        kind,
                        ratio: Some(ratio),
                        seed,
                    });
                }
            } else {
                cases.push(CaseSpec { case_id: format!("b{b:03}-{kind}"), base: b, kind, ratio: None, seed });
            }
        }
    }
    cases
}
