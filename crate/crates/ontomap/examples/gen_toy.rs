//! Regenerates the bundled toy benchmark under `fixtures/toy`:
//! two ~200-class anatomy-like ontologies, 120 reference pairs whose source
//! labels carry controlled noise, and a ranking file with 100 negatives per
//! reference pair.
//!
//! cargo run -p ontomap --example gen_toy -- crates/ontomap/fixtures/toy

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const SEED: u64 = 20_240_611;

const REGIONS: [(&str, &str); 16] = [
    ("thoracic", "thorax"),
    ("abdominal", "abdomen"),
    ("pelvic", "pelvis"),
    ("cranial", "cranium"),
    ("cervical", "neck"),
    ("lumbar", "loin"),
    ("sacral", "sacrum"),
    ("femoral", "thigh"),
    ("brachial", "arm"),
    ("gluteal", "buttock"),
    ("inguinal", "groin"),
    ("axillary", "axilla"),
    ("popliteal", "knee"),
    ("palmar", "palm"),
    ("plantar", "sole"),
    ("temporal", "temple"),
];

const STRUCTURES: [(&str, &str); 14] = [
    ("wall", "walls"),
    ("artery", "arteries"),
    ("vein", "veins"),
    ("nerve", "nerves"),
    ("muscle", "muscles"),
    ("fascia", "fascias"),
    ("ligament", "ligaments"),
    ("lymph node", "lymph nodes"),
    ("skin", "skins"),
    ("bone", "bones"),
    ("joint", "joints"),
    ("tendon", "tendons"),
    ("bursa", "bursas"),
    ("septum", "septa"),
];

const TARGET_COMPOSITES: usize = 165;
const MATCHED: usize = 120;

/// Label noise applied to a matched source class.
#[derive(Clone, Copy)]
enum Noise {
    Identical,
    Capitalized,
    Plural,
    TargetSynonym,
    StructureSuffix,
    Typo,
    Reordered,
}

const NOISE_MIX: [(Noise, usize); 7] = [
    (Noise::Identical, 15),
    (Noise::Capitalized, 15),
    (Noise::Plural, 20),
    (Noise::TargetSynonym, 20),
    (Noise::StructureSuffix, 20),
    (Noise::Typo, 15),
    (Noise::Reordered, 15),
];

fn class_line(id: &str, label: &str, synonyms: &[String], parents: &[String]) -> String {
    let mut value = json!({ "id": id, "label": label });
    if !synonyms.is_empty() {
        value["synonyms"] = json!(synonyms);
    }
    if !parents.is_empty() {
        value["parents"] = json!(parents);
    }
    format!("{value}\n")
}

fn typo(label: &str, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = label.chars().collect();
    loop {
        let i = rng.random_range(1..chars.len());
        if chars[i] == ' ' {
            continue;
        }
        let replacement = (b'a' + rng.random_range(0..26u8)) as char;
        if replacement != chars[i] {
            chars[i] = replacement;
            return chars.into_iter().collect();
        }
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    chars
        .next()
        .map(|c| c.to_uppercase().chain(chars).collect())
        .unwrap_or_default()
}

fn main() {
    let out: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/ontomap/fixtures/toy".into())
        .into();
    fs::create_dir_all(&out).expect("create output directory");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    // every (region, structure) combination; the target keeps a subset
    let mut combos: Vec<(usize, usize)> = (0..REGIONS.len())
        .flat_map(|r| (0..STRUCTURES.len()).map(move |s| (r, s)))
        .collect();
    combos.shuffle(&mut rng);
    let (in_target, absent) = combos.split_at(TARGET_COMPOSITES);

    // target: root, two groupings, regions, structure kinds, composites
    let mut target = String::new();
    let mut next_id = 10_000 + rng.random_range(0..1000);
    let mut fresh = |prefix: &str, rng: &mut ChaCha8Rng| {
        next_id += rng.random_range(1..40);
        format!("{prefix}:{next_id}")
    };
    let root = fresh("fma", &mut rng);
    target.push_str(&class_line(&root, "anatomical entity", &[], &[]));
    let region_group = fresh("fma", &mut rng);
    target.push_str(&class_line(
        &region_group,
        "body region",
        &[],
        std::slice::from_ref(&root),
    ));
    let kind_group = fresh("fma", &mut rng);
    target.push_str(&class_line(
        &kind_group,
        "organ component",
        &[],
        std::slice::from_ref(&root),
    ));
    let region_ids: Vec<String> = REGIONS
        .iter()
        .map(|(adj, noun)| {
            let id = fresh("fma", &mut rng);
            let synonyms = [format!("{noun} region")];
            target.push_str(&class_line(
                &id,
                &format!("{adj} region"),
                &synonyms,
                std::slice::from_ref(&region_group),
            ));
            id
        })
        .collect();
    let kind_ids: Vec<String> = STRUCTURES
        .iter()
        .map(|(singular, _)| {
            let id = fresh("fma", &mut rng);
            target.push_str(&class_line(&id, singular, &[], std::slice::from_ref(&kind_group)));
            id
        })
        .collect();
    let mut composite_ids = Vec::new();
    let mut composite_synonym = Vec::new();
    for &(r, s) in in_target {
        let id = fresh("fma", &mut rng);
        let label = format!("{} {}", REGIONS[r].0, STRUCTURES[s].0);
        let synonyms = if rng.random_bool(0.45) {
            vec![format!("{} of {}", STRUCTURES[s].0, REGIONS[r].1)]
        } else {
            Vec::new()
        };
        let parents = [region_ids[r].clone(), kind_ids[s].clone()];
        target.push_str(&class_line(&id, &label, &synonyms, &parents));
        composite_synonym.push(synonyms.first().cloned());
        composite_ids.push(id);
    }
    let target_ids: Vec<String> = [root.clone(), region_group.clone(), kind_group.clone()]
        .into_iter()
        .chain(region_ids.iter().cloned())
        .chain(kind_ids.iter().cloned())
        .chain(composite_ids.iter().cloned())
        .collect();

    // source: a tree of regions, 120 noisy copies of target composites and
    // every combination the target lacks
    let mut noise: Vec<Noise> = NOISE_MIX
        .iter()
        .flat_map(|&(n, count)| std::iter::repeat_n(n, count))
        .collect();
    assert_eq!(noise.len(), MATCHED);
    noise.shuffle(&mut rng);
    let matched = index::sample(&mut rng, TARGET_COMPOSITES, MATCHED).into_vec();

    let mut source = String::new();
    let mut next_id = 200_000 + rng.random_range(0..1000);
    let mut fresh = |rng: &mut ChaCha8Rng| {
        next_id += rng.random_range(1..90);
        format!("snomed:{next_id}")
    };
    let source_root = fresh(&mut rng);
    source.push_str(&class_line(&source_root, "body structure", &[], &[]));
    let source_regions: Vec<String> = REGIONS
        .iter()
        .map(|(_, noun)| {
            let id = fresh(&mut rng);
            source.push_str(&class_line(
                &id,
                &format!("structure of {noun}"),
                &[],
                std::slice::from_ref(&source_root),
            ));
            id
        })
        .collect();
    let mut reference = Vec::new();
    for (&i, &kind) in matched.iter().zip(&noise) {
        let (r, s) = in_target[i];
        let (adj, noun) = REGIONS[r];
        let (singular, plural) = STRUCTURES[s];
        let base = format!("{adj} {singular}");
        let mut synonyms = Vec::new();
        let label = match kind {
            Noise::Identical => base.clone(),
            Noise::Capitalized => capitalize(&base),
            Noise::Plural => format!("{adj} {plural}"),
            Noise::TargetSynonym => composite_synonym[i]
                .clone()
                .unwrap_or_else(|| format!("{singular} of {noun}")),
            Noise::StructureSuffix => {
                if rng.random_bool(0.5) {
                    synonyms.push(capitalize(&base));
                }
                format!("{} structure", capitalize(&base))
            }
            Noise::Typo => typo(&base, &mut rng),
            Noise::Reordered => format!("{singular}, {adj}"),
        };
        let id = fresh(&mut rng);
        source.push_str(&class_line(&id, &label, &synonyms, &[source_regions[r].clone()]));
        reference.push((id, composite_ids[i].clone()));
    }
    for &(r, s) in absent {
        let id = fresh(&mut rng);
        let label = format!("{} {}", REGIONS[r].0, STRUCTURES[s].0);
        source.push_str(&class_line(&id, &label, &[], &[source_regions[r].clone()]));
    }

    let mut reference_tsv = String::from("SrcEntity\tTgtEntity\tScore\n");
    let mut ranking_tsv = String::from("SrcEntity\tTgtEntity\tTgtCandidates\n");
    reference.sort();
    for (src, tgt) in &reference {
        writeln!(reference_tsv, "{src}\t{tgt}\t1.0").unwrap();
        let pool: Vec<&String> = target_ids.iter().filter(|t| *t != tgt).collect();
        let negatives: Vec<String> = index::sample(&mut rng, pool.len(), 100)
            .into_iter()
            .map(|k| format!("'{}'", pool[k]))
            .collect();
        writeln!(ranking_tsv, "{src}\t{tgt}\t({})", negatives.join(", ")).unwrap();
    }

    fs::write(out.join("target.jsonl"), target).unwrap();
    fs::write(out.join("source.jsonl"), source).unwrap();
    fs::write(out.join("reference.tsv"), reference_tsv).unwrap();
    fs::write(out.join("ranking.tsv"), ranking_tsv).unwrap();
    eprintln!(
        "wrote {} target classes, {} source classes, {} reference pairs to {}",
        target_ids.len(),
        1 + REGIONS.len() + MATCHED + absent.len(),
        reference.len(),
        out.display()
    );
}
