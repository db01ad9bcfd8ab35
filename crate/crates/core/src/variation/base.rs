use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tables::{paraphrased, renamed, CONTAINER_KEYS, LEAF_KEYS, PHRASES};
use super::VariationError;
use crate::tree::{DocumentTree, Number, TreeNode};

pub const MIN_DEPTH: usize = 2;
pub const MAX_DEPTH: usize = 7;
pub const MIN_FIELDS: usize = 4;
pub const MAX_FIELDS: usize = 228;

/// Share of root-level primitives among all primitive members.
const ROOT_LEAF_SHARE: f64 = 0.1;

/// Proportions of member value types.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeMix {
    pub string: f64,
    pub integer: f64,
    pub array: f64,
    pub object: f64,
}

impl Default for TypeMix {
    fn default() -> Self {
        TypeMix { string: 0.682, integer: 0.184, array: 0.085, object: 0.049 }
    }
}

impl TypeMix {
    fn validate(&self) -> Result<(), VariationError> {
        let parts = [self.string, self.integer, self.array, self.object];
        if parts.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(VariationError::InvalidSpec("type mix proportions must be non-negative"));
        }
        if (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(VariationError::InvalidSpec("type mix proportions must sum to 1"));
        }
        if self.string + self.integer == 0.0 {
            return Err(VariationError::InvalidSpec("type mix needs a primitive share"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseDocSpec {
    pub target_depth: usize,
    pub target_fields: usize,
    #[serde(default)]
    pub type_mix: TypeMix,
    pub seed: u64,
}

impl BaseDocSpec {
    pub fn new(target_depth: usize, target_fields: usize, seed: u64) -> Self {
        BaseDocSpec { target_depth, target_fields, type_mix: TypeMix::default(), seed }
    }

    pub fn validate(&self) -> Result<(), VariationError> {
        self.type_mix.validate()?;
        if !(MIN_DEPTH..=MAX_DEPTH).contains(&self.target_depth) {
            return Err(VariationError::InvalidSpec("target depth must be in 2..=7"));
        }
        if !(MIN_FIELDS..=MAX_FIELDS).contains(&self.target_fields) {
            return Err(VariationError::InvalidSpec("target fields must be in 4..=228"));
        }
        // A depth-d document needs a chain of d-2 objects ending in a leaf.
        if self.target_fields + 1 < self.target_depth {
            return Err(VariationError::InfeasibleSpec {
                depth: self.target_depth,
                fields: self.target_fields,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Prim {
    Str,
    Int,
}

struct Slot {
    depth: usize,
    members: Vec<Member>,
}

enum Member {
    /// A string member whose key and value both have default table entries.
    Anchor,
    Leaf(Prim),
    Array,
    Object(usize),
}

fn round(x: f64) -> usize {
    libm::floor(x + 0.5) as usize
}

struct Counts {
    objects: usize,
    arrays: usize,
    strings: usize,
    integers: usize,
}

fn counts(spec: &BaseDocSpec) -> Counts {
    let f = spec.target_fields;
    let d = spec.target_depth;
    let mix = &spec.type_mix;
    if d == MIN_DEPTH {
        let integers = round(f as f64 * mix.integer / (mix.string + mix.integer)).min(f);
        return Counts { objects: 0, arrays: 0, strings: f - integers, integers };
    }
    let chain = d - 2;
    let mut objects = round(f as f64 * mix.object).max(chain);
    let mut arrays = round(f as f64 * mix.array);
    // Every extra object holds at least one primitive, and the chain ends in one.
    loop {
        let leaves = f.saturating_sub(objects + arrays);
        if objects + arrays <= f && leaves > objects - chain {
            break;
        }
        if arrays > 0 {
            arrays -= 1;
        } else {
            objects -= 1;
        }
    }
    let leaves = f - objects - arrays;
    let integers = round(f as f64 * mix.integer).min(leaves - if mix.string > 0.0 { 1 } else { 0 });
    Counts { objects, arrays, strings: leaves - integers, integers }
}

/// A seeded base document with exactly `target_fields` object members and
/// maximum depth `target_depth` (root at depth 1).
pub fn gen_base_document(spec: &BaseDocSpec) -> Result<DocumentTree, VariationError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let d = spec.target_depth;
    let c = counts(spec);

    let mut slots = alloc::vec![Slot { depth: 1, members: Vec::new() }];
    for k in 0..d.saturating_sub(2) {
        let parent = if k == 0 { 0 } else { k };
        let id = slots.len();
        slots.push(Slot { depth: k + 2, members: Vec::new() });
        slots[parent].members.push(Member::Object(id));
    }
    let chain_end = slots.len() - 1;
    for _ in 0..c.objects - d.saturating_sub(2) {
        let parents: Vec<usize> = (0..slots.len()).filter(|&i| slots[i].depth + 2 <= d).collect();
        let parent = *parents.choose(&mut rng).expect("root always qualifies for depth >= 3");
        let id = slots.len();
        slots.push(Slot { depth: slots[parent].depth + 1, members: Vec::new() });
        slots[parent].members.push(Member::Object(id));
    }
    let extra_objects: Vec<usize> = (chain_end + 1..slots.len()).collect();
    for _ in 0..c.arrays {
        let mut parents: Vec<usize> = (1..slots.len()).filter(|&i| slots[i].depth + 2 <= d).collect();
        if parents.is_empty() {
            parents.push(0);
        }
        let parent = *parents.choose(&mut rng).expect("non-empty");
        slots[parent].members.push(Member::Array);
    }

    let anchor = if c.strings > 0 { 1 } else { 0 };
    let mut prims: Vec<Prim> = core::iter::repeat_n(Prim::Str, c.strings - anchor)
        .chain(core::iter::repeat_n(Prim::Int, c.integers))
        .collect();
    prims.shuffle(&mut rng);
    let mut prims = prims.into_iter();
    if anchor == 1 {
        slots[chain_end].members.push(Member::Anchor);
    }
    if d == MIN_DEPTH {
        slots[0].members.extend(prims.map(Member::Leaf));
    } else {
        let chain_needs = usize::from(anchor == 0);
        for &slot in core::iter::once(&chain_end).take(chain_needs).chain(&extra_objects) {
            slots[slot].members.push(Member::Leaf(prims.next().expect("counted")));
        }
        let rest: Vec<Prim> = prims.collect();
        let root_share = ROOT_LEAF_SHARE * (c.strings + c.integers) as f64;
        let root_leaves = (libm::floor(root_share + rng.gen::<f64>()) as usize).min(rest.len());
        let (root, nested) = rest.split_at(root_leaves);
        slots[0].members.extend(root.iter().map(|&p| Member::Leaf(p)));
        for &p in nested {
            let slot = rng.gen_range(1..slots.len());
            slots[slot].members.push(Member::Leaf(p));
        }
    }

    let string_share = spec.type_mix.string / (spec.type_mix.string + spec.type_mix.integer);
    let root = build(0, &mut slots, string_share, &mut rng);
    Ok(DocumentTree::new(root))
}

fn build(id: usize, slots: &mut [Slot], string_share: f64, rng: &mut ChaCha8Rng) -> TreeNode {
    let mut members = core::mem::take(&mut slots[id].members);
    members.shuffle(rng);
    let mut leaf_keys = KeyDraw::new(LEAF_KEYS);
    let mut container_keys = KeyDraw::new(CONTAINER_KEYS);
    let mut anchor_key = None;
    if members.iter().any(|m| matches!(m, Member::Anchor)) {
        anchor_key = Some(leaf_keys.take_covered(rng));
    }
    let mut entries = Vec::with_capacity(members.len());
    for member in members {
        let (key, node) = match member {
            Member::Anchor => {
                let key = anchor_key.take().expect("one anchor per object");
                let covered: Vec<&str> = PHRASES.iter().copied().filter(|p| paraphrased(p)).collect();
                (key, TreeNode::string(*covered.choose(rng).expect("non-empty")))
            }
            Member::Leaf(p) => (leaf_keys.next(rng), primitive(p, rng)),
            Member::Array => {
                let len = rng.gen_range(1..=4);
                let items: Vec<TreeNode> = (0..len)
                    .map(|_| primitive(if rng.gen_bool(string_share) { Prim::Str } else { Prim::Int }, rng))
                    .collect();
                (container_keys.next(rng), TreeNode::array(items))
            }
            Member::Object(child) => (container_keys.next(rng), build(child, slots, string_share, rng)),
        };
        entries.push((key, node));
    }
    TreeNode::object(entries)
}

fn primitive(p: Prim, rng: &mut ChaCha8Rng) -> TreeNode {
    match p {
        Prim::Str => TreeNode::string(*PHRASES.choose(rng).expect("non-empty")),
        Prim::Int => TreeNode::number(Number::from_i64(rng.gen_range(0..1000))),
    }
}

/// Draws distinct keys from a vocabulary; once it runs dry, suffixed keys.
struct KeyDraw {
    order: Option<Vec<&'static str>>,
    vocab: &'static [&'static str],
    taken: usize,
    reserved: Option<&'static str>,
}

impl KeyDraw {
    fn new(vocab: &'static [&'static str]) -> Self {
        KeyDraw { order: None, vocab, taken: 0, reserved: None }
    }

    /// A key with a default rename entry, excluded from later draws. Must
    /// be called before [`KeyDraw::next`].
    fn take_covered(&mut self, rng: &mut ChaCha8Rng) -> String {
        let covered: Vec<&'static str> = self.vocab.iter().copied().filter(|k| renamed(k)).collect();
        let key = *covered.choose(rng).expect("vocabulary has covered keys");
        self.reserved = Some(key);
        key.to_string()
    }

    fn next(&mut self, rng: &mut ChaCha8Rng) -> String {
        let (vocab, reserved) = (self.vocab, self.reserved);
        let order = self.order.get_or_insert_with(|| {
            let mut v: Vec<&'static str> = vocab.iter().copied().filter(|k| Some(*k) != reserved).collect();
            v.shuffle(rng);
            v
        });
        let n = order.len();
        let key = order[self.taken % n];
        let round = self.taken / n;
        self.taken += 1;
        if round == 0 {
            key.to_string()
        } else {
            alloc::format!("{key}_{}", round + 1)
        }
    }
}
