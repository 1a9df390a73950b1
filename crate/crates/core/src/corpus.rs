//! Pre-training and fine-tuning corpora.
//!
//! Pre-training instances are relation templates over one ontology (a
//! child and its parent, a label and its SmartID, ...) with some units
//! replaced by sentinels `<m0>`, `<m1>`, ... The masking ratio grows
//! linearly over the epoch. Fine-tuning instances translate a class
//! description into the class's SmartID.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CorpusError;
use crate::ontology::{record_descriptions, ClassRecord, DescriptionOptions, OntologyGraph};
use crate::smartid::{PathId, SmartIdTable};
use crate::text::normalize_term;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusInstance {
    pub task_tag: String,
    pub input_text: String,
    pub target_text: String,
}

/// Linear masking schedule from `start_ratio` at step 0 to `end_ratio` at
/// the last step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskingSchedule {
    pub start_ratio: f64,
    pub end_ratio: f64,
    pub total_steps: u64,
}

impl MaskingSchedule {
    pub fn new(start_ratio: f64, end_ratio: f64, total_steps: u64) -> Result<Self, CorpusError> {
        let schedule = Self {
            start_ratio,
            end_ratio,
            total_steps,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let ok = self.start_ratio > 0.0
            && self.start_ratio <= self.end_ratio
            && self.end_ratio < 1.0
            && self.total_steps >= 1;
        ok.then_some(()).ok_or(CorpusError::InvalidSchedule)
    }
}

impl Default for MaskingSchedule {
    fn default() -> Self {
        Self {
            start_ratio: 0.10,
            end_ratio: 0.35,
            total_steps: 1000,
        }
    }
}

pub fn masking_ratio(step: u64, schedule: &MaskingSchedule) -> Result<f64, CorpusError> {
    schedule.validate()?;
    if step >= schedule.total_steps {
        return Err(CorpusError::StepOutOfRange {
            step,
            total: schedule.total_steps,
        });
    }
    if schedule.total_steps == 1 {
        return Ok(schedule.start_ratio);
    }
    let t = step as f64 / (schedule.total_steps - 1) as f64;
    Ok(schedule.start_ratio + (schedule.end_ratio - schedule.start_ratio) * t)
}

/// `max(1, round(ratio * units))`, never more than `units`.
pub fn mask_count(units: usize, ratio: f64) -> usize {
    (libm::round(ratio * units as f64) as usize).clamp(1, units.max(1))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Per-instance seed derived from a run seed.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// `count` distinct positions in `0..units`, ascending.
pub fn mask_positions(units: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = rand::seq::index::sample(&mut rng, units, count.min(units)).into_vec();
    positions.sort_unstable();
    positions
}

fn sentinel(i: usize) -> String {
    format!("<m{i}>")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedText {
    pub input: String,
    pub target: String,
    pub masked: usize,
}

/// Replaces `max(1, round(ratio * |units|))` randomly chosen units with
/// sentinels. The input joins units with spaces; the target lists each
/// sentinel followed by the unit it hides.
pub fn mask_instance<S: AsRef<str>>(units: &[S], ratio: f64, seed: u64) -> Result<MaskedText, CorpusError> {
    if units.is_empty() {
        return Err(CorpusError::EmptyInstance);
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(CorpusError::InvalidRatio);
    }
    let positions = mask_positions(units.len(), mask_count(units.len(), ratio), seed);
    let mut input: Vec<String> = units.iter().map(|u| u.as_ref().to_string()).collect();
    let mut target = Vec::new();
    for (i, &pos) in positions.iter().enumerate() {
        target.push(sentinel(i));
        target.push(core::mem::replace(&mut input[pos], sentinel(i)));
    }
    Ok(MaskedText {
        input: input.join(" "),
        target: target.join(" "),
        masked: positions.len(),
    })
}

/// Pre-training relation templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Template {
    ChildParent,
    DefinitionSmartId,
    LabelSmartId,
    LabelSynonym,
    SmartIdSynonymId,
    SynonymSmartId,
}

impl Template {
    pub const ALL: [Template; 6] = [
        Template::ChildParent,
        Template::DefinitionSmartId,
        Template::LabelSmartId,
        Template::LabelSynonym,
        Template::SmartIdSynonymId,
        Template::SynonymSmartId,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Template::ChildParent => "child_parent",
            Template::DefinitionSmartId => "definition_smartid",
            Template::LabelSmartId => "label_smartid",
            Template::LabelSynonym => "label_synonym",
            Template::SmartIdSynonymId => "smartid_synonymid",
            Template::SynonymSmartId => "synonym_smartid",
        }
    }

    pub fn task_tag(self, ontology_id: &str) -> String {
        format!("pretrain:{}:{}", self.as_str(), ontology_id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FieldKind {
    /// Words are units, joined by spaces.
    Text,
    /// Level tokens are units, joined by `-`.
    Path,
    /// The whole keyword is one unit.
    Keyword,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Field {
    name: &'static str,
    kind: FieldKind,
    units: Vec<String>,
}

impl Field {
    fn text(name: &'static str, value: &str) -> Self {
        Self {
            name,
            kind: FieldKind::Text,
            units: value.split_whitespace().map(String::from).collect(),
        }
    }

    fn path(name: &'static str, id: &PathId) -> Self {
        Self {
            name,
            kind: FieldKind::Path,
            units: id.tokens().map(String::from).collect(),
        }
    }

    fn keyword(value: &'static str) -> Self {
        Self {
            name: "relation",
            kind: FieldKind::Keyword,
            units: alloc::vec![String::from(value)],
        }
    }
}

/// Serializes fields as `name: value | name: value`, replacing the units at
/// `masked` (indices over all units, in order) by sentinels. Returns the
/// input and target texts.
fn render_masked(fields: &[Field], masked: &[usize]) -> (String, String) {
    let mut next_mask = masked.iter().copied().peekable();
    let mut unit_index = 0;
    let mut sentinel_index = 0;
    let mut target = Vec::new();
    let mut parts = Vec::with_capacity(fields.len());
    for field in fields {
        let mut values = Vec::with_capacity(field.units.len());
        for unit in &field.units {
            if next_mask.peek() == Some(&unit_index) {
                next_mask.next();
                let s = sentinel(sentinel_index);
                sentinel_index += 1;
                target.push(s.clone());
                target.push(unit.clone());
                values.push(s);
            } else {
                values.push(unit.clone());
            }
            unit_index += 1;
        }
        let joiner = if field.kind == FieldKind::Path { "-" } else { " " };
        parts.push(format!("{}: {}", field.name, values.join(joiner)));
    }
    (parts.join(" | "), target.join(" "))
}

/// A pre-training instance plus the bookkeeping needed to audit masking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PretrainRecord {
    pub instance: CorpusInstance,
    pub ontology_id: String,
    pub class_id: String,
    pub template: Template,
    pub step: u64,
    pub units: usize,
    pub masked: usize,
}

struct Draft {
    ontology_id: String,
    class_id: String,
    template: Template,
    fields: Vec<Field>,
}

fn class_drafts(graph: &OntologyGraph, table: &SmartIdTable, record: &ClassRecord, out: &mut Vec<Draft>) {
    let smart = table.smart_id(&record.class_id);
    let mut push = |template, fields| {
        out.push(Draft {
            ontology_id: graph.ontology_id().to_string(),
            class_id: record.class_id.clone(),
            template,
            fields,
        })
    };

    for parent in &record.parents {
        let Some(parent_record) = graph.class(parent) else {
            continue;
        };
        let mut fields = alloc::vec![Field::text("child", &record.label)];
        if let Some(id) = smart {
            fields.push(Field::path("child_id", id));
        }
        fields.push(Field::keyword("isa"));
        fields.push(Field::text("parent", &parent_record.label));
        if let Some(id) = table.smart_id(parent) {
            fields.push(Field::path("parent_id", id));
        }
        push(Template::ChildParent, fields);
    }

    let Some(smart) = smart else {
        // the anchor root only takes part in child/parent relations
        for synonym in &record.synonyms {
            push(
                Template::LabelSynonym,
                alloc::vec![
                    Field::text("label", &record.label),
                    Field::keyword("synonym"),
                    Field::text("synonym", synonym),
                ],
            );
        }
        return;
    };

    for definition in &record.definitions {
        push(
            Template::DefinitionSmartId,
            alloc::vec![
                Field::text("definition", definition),
                Field::keyword("defines"),
                Field::path("smart_id", smart),
            ],
        );
    }
    push(
        Template::LabelSmartId,
        alloc::vec![
            Field::text("label", &record.label),
            Field::keyword("has_id"),
            Field::path("smart_id", smart),
        ],
    );
    for synonym in &record.synonyms {
        push(
            Template::LabelSynonym,
            alloc::vec![
                Field::text("label", &record.label),
                Field::keyword("synonym"),
                Field::text("synonym", synonym),
            ],
        );
    }
    for synonym_id in table.synonym_ids(&record.class_id) {
        push(
            Template::SmartIdSynonymId,
            alloc::vec![
                Field::path("smart_id", smart),
                Field::keyword("same_as"),
                Field::path("synonym_id", synonym_id),
            ],
        );
    }
    for synonym in &record.synonyms {
        push(
            Template::SynonymSmartId,
            alloc::vec![
                Field::text("synonym", synonym),
                Field::keyword("has_id"),
                Field::path("smart_id", smart),
            ],
        );
    }
}

/// Builds the masked pre-training corpus over every `(graph, table)` pair.
///
/// Instances are ordered by (ontology, class, template, index). Instance
/// `i` of `n` sits at schedule step `i * total_steps / n`. Mask counts are
/// allocated by carrying the rounding error forward, so the realized masked
/// fraction over any stretch of the epoch follows the schedule wherever
/// the schedule asks for at least one unit per instance. Every instance
/// masks at least one unit; that excess is not carried.
pub fn build_pretrain_corpus(
    sources: &[(&OntologyGraph, &SmartIdTable)],
    schedule: &MaskingSchedule,
    seed: u64,
) -> Result<Vec<PretrainRecord>, CorpusError> {
    schedule.validate()?;
    let mut ordered: Vec<&(&OntologyGraph, &SmartIdTable)> = sources.iter().collect();
    ordered.sort_by(|a, b| a.0.ontology_id().cmp(b.0.ontology_id()));
    let mut drafts = Vec::new();
    for (graph, table) in ordered {
        if table.ontology_id() != graph.ontology_id() {
            return Err(CorpusError::MissingTable(graph.ontology_id().to_string()));
        }
        let mut per_class = Vec::new();
        for record in graph.classes() {
            per_class.clear();
            class_drafts(graph, table, record, &mut per_class);
            // stable: keeps per-template emission order as the index
            per_class.sort_by_key(|d| d.template);
            drafts.append(&mut per_class);
        }
    }

    let total = drafts.len() as u128;
    let mut wanted = 0.0f64;
    let mut masked_so_far = 0usize;
    let mut out = Vec::with_capacity(drafts.len());
    for (i, draft) in drafts.into_iter().enumerate() {
        let step = ((i as u128 * u128::from(schedule.total_steps)) / total) as u64;
        let ratio = masking_ratio(step, schedule)?;
        let units: usize = draft.fields.iter().map(|f| f.units.len()).sum();
        if units == 0 {
            return Err(CorpusError::EmptyInstance);
        }
        wanted += ratio * units as f64;
        let owed = libm::round(wanted - masked_so_far as f64);
        let count = if owed < 1.0 { 1 } else { (owed as usize).min(units) };
        masked_so_far += count;
        // the one-mask floor is not paid back by later instances
        let done = masked_so_far as f64;
        wanted = wanted.clamp(done - 0.5, done + 0.5);
        let positions = mask_positions(units, count, instance_seed(seed, i as u64));
        let (input_text, target_text) = render_masked(&draft.fields, &positions);
        out.push(PretrainRecord {
            instance: CorpusInstance {
                task_tag: draft.template.task_tag(&draft.ontology_id),
                input_text,
                target_text,
            },
            ontology_id: draft.ontology_id,
            class_id: draft.class_id,
            template: draft.template,
            step,
            units,
            masked: count,
        });
    }
    Ok(out)
}

/// Older release of a target ontology, used to add synonyms.
#[derive(Debug, Clone, Copy)]
pub struct PriorVersion<'a> {
    pub of: &'a str,
    pub graph: &'a OntologyGraph,
}

#[derive(Debug, Clone, Default)]
pub struct AugmentationConfig<'a> {
    /// Other subset ontologies whose exactly matching classes contribute
    /// their descriptions.
    pub cross_subset: Vec<&'a OntologyGraph>,
    pub prior_versions: Vec<PriorVersion<'a>>,
    pub cross_subset_enabled: bool,
    pub prior_versions_enabled: bool,
}

impl<'a> AugmentationConfig<'a> {
    pub fn none() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FinetuneCorpus {
    pub instances: Vec<CorpusInstance>,
    pub warnings: Vec<String>,
}

pub fn finetune_tag(ontology_id: &str) -> String {
    format!("finetune:{ontology_id}")
}

/// One instance per description of every identified target class, with the
/// class's SmartID as target. Cross-subset augmentation adds descriptions
/// of classes in other ontologies whose normalized description set meets
/// the target class's set; prior-version augmentation adds descriptions of
/// the same class id in older releases.
pub fn build_finetune_corpus(
    targets: &[(&OntologyGraph, &SmartIdTable)],
    augmentation: &AugmentationConfig<'_>,
) -> Result<FinetuneCorpus, CorpusError> {
    let options = DescriptionOptions::default();
    // normalized term -> (ontology, class) of cross-subset classes
    let mut index: BTreeMap<String, BTreeSet<(&str, &str)>> = BTreeMap::new();
    if augmentation.cross_subset_enabled {
        for graph in &augmentation.cross_subset {
            for record in graph.classes() {
                for term in record_descriptions(record, options).terms {
                    index
                        .entry(term)
                        .or_default()
                        .insert((graph.ontology_id(), record.class_id.as_str()));
                }
            }
        }
    }
    let lookup = |ontology: &str, class: &str| -> Option<&ClassRecord> {
        augmentation
            .cross_subset
            .iter()
            .find(|g| g.ontology_id() == ontology)
            .and_then(|g| g.class(class))
    };

    let mut ordered: Vec<&(&OntologyGraph, &SmartIdTable)> = targets.iter().collect();
    ordered.sort_by(|a, b| a.0.ontology_id().cmp(b.0.ontology_id()));
    let mut corpus = FinetuneCorpus::default();
    for (graph, table) in ordered {
        if table.ontology_id() != graph.ontology_id() {
            return Err(CorpusError::MissingTable(graph.ontology_id().to_string()));
        }
        let tag = finetune_tag(graph.ontology_id());
        let priors: Vec<&PriorVersion<'_>> = if augmentation.prior_versions_enabled {
            augmentation
                .prior_versions
                .iter()
                .filter(|p| p.of == graph.ontology_id())
                .collect()
        } else {
            Vec::new()
        };
        for record in graph.classes() {
            let Some(smart) = table.smart_id(&record.class_id) else {
                continue;
            };
            let own = record_descriptions(record, options);
            let mut seen = own.terms.clone();
            let mut descriptions: Vec<String> = record.descriptions().map(String::from).collect();
            let mut add = |text: &str, seen: &mut BTreeSet<String>| {
                let normalized = normalize_term(text, options.case_fold);
                if !normalized.is_empty() && seen.insert(normalized) {
                    descriptions.push(text.to_string());
                }
            };

            let matched: BTreeSet<(&str, &str)> = own
                .iter()
                .filter_map(|t| index.get(t))
                .flatten()
                .filter(|(onto, _)| *onto != graph.ontology_id())
                .copied()
                .collect();
            for (onto, class) in matched {
                if let Some(other) = lookup(onto, class) {
                    for text in other.descriptions() {
                        add(text, &mut seen);
                    }
                }
            }
            for prior in &priors {
                match prior.graph.class(&record.class_id) {
                    Some(old) => {
                        for text in old.descriptions() {
                            add(text, &mut seen);
                        }
                    }
                    None => corpus.warnings.push(format!(
                        "class `{}` of `{}` is absent from prior version `{}`",
                        record.class_id,
                        graph.ontology_id(),
                        prior.graph.ontology_id()
                    )),
                }
            }

            for description in descriptions {
                corpus.instances.push(CorpusInstance {
                    task_tag: tag.clone(),
                    input_text: description,
                    target_text: smart.as_str().to_string(),
                });
            }
        }
    }
    Ok(corpus)
}
