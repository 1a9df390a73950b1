//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Run with `cargo test -p ontomap --test acceptance`.

mod support;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use ontomap_core::align::{
    decode, match_ontologies, score_mapping, trigram_embedding, CallCounter, ClassRef, DecodeConfig,
    EditSimilarityTranslator, MatchConfig, MatchInputs, MatchMethod, TaskId, Translator, DEFAULT_EMBED_DIM,
};
use ontomap_core::corpus::{build_pretrain_corpus, masking_ratio, MaskingSchedule};
use ontomap_core::metrics::{accuracy, hits_at_k, mrr, precision_recall_f, MappingSet, RankingCase};
use ontomap_core::ontology::{record_descriptions, DescriptionOptions};
use ontomap_core::smartid::{anchor_class, assign_smartids, ordinal_token, SmartIdConfig};
use ontomap_core::text::{edit_similarity, normalize_term};
use ontomap_core::{ClassRecord, OntologyGraph, PathId, PathTrie, SmartIdTable};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {:.1}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs())
    })
}

// ---------------------------------------------------------------- F-score

fn counts_fixture(out_len: usize, hits: usize, ref_len: usize) -> (MappingSet, MappingSet) {
    let reference = MappingSet::from_pairs((0..ref_len).map(|i| (format!("s{i}"), format!("t{i}")))).unwrap();
    let output = MappingSet::from_pairs((0..out_len).map(|i| {
        let target = if i < hits { format!("t{i}") } else { format!("x{i}") };
        (format!("s{i}"), target)
    }))
    .unwrap();
    (output, reference)
}

fn f_score_oracle() -> Check {
    let start = Instant::now();
    // (|output|, |output ∩ reference|, |reference|) realizing each published (P, R)
    let rows = [
        ("table2", 7793, 7380, 10000, 0.947, 0.738, 0.830),
        ("table3", 956, 929, 1000, 0.972, 0.929, 0.950),
        ("table4", 983, 795, 1000, 0.809, 0.795, 0.802),
    ];
    let mut detail = Vec::new();
    for (name, out_len, hits, ref_len, p, r, f) in rows {
        let (output, reference) = counts_fixture(out_len, hits, ref_len);
        let prf = precision_recall_f(&output, &reference, 1.0).map_err(|e| e.to_string())?;
        ensure(
            (prf.precision - p).abs() < 5e-4 && (prf.recall - r).abs() < 5e-4,
            || {
                format!(
                    "{name}: fixture realizes P={:.4} R={:.4}, wanted {p} {r}",
                    prf.precision, prf.recall
                )
            },
        )?;
        ensure((prf.f_score - f).abs() <= 1e-3, || {
            format!("{name}: F={:.6}, wanted {f} ± 0.001", prf.f_score)
        })?;
        detail.push(format!("{name} F={:.4}", prf.f_score));
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(detail.join(", "))
}

// ---------------------------------------------------------------- SmartIDs

fn node_id(i: usize, n: usize, salt: usize) -> String {
    // scrambled so that sibling order differs from creation order
    format!("n{:05}", (i * 7919 + salt) % (n.max(2) * 7919 + 1))
}

/// Node `i` only has parents `< i`, so creation order is topological.
fn random_dag(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    let multi = rng.random_range(0.0..=0.30);
    let extra_roots = rng.random_bool(0.5);
    let window = if n > 200 && rng.random_bool(0.5) {
        200
    } else {
        usize::MAX
    };
    (0..n)
        .map(|i| {
            if i == 0 || (extra_roots && rng.random_bool(0.01)) {
                return Vec::new();
            }
            let lo = i.saturating_sub(window);
            let want = if i - lo >= 2 && rng.random_bool(multi) {
                rng.random_range(2..=3.min(i - lo))
            } else {
                1
            };
            let mut parents = BTreeSet::new();
            while parents.len() < want {
                parents.insert(rng.random_range(lo..i));
            }
            parents.into_iter().collect()
        })
        .collect()
}

fn build_dag(parents: &[Vec<usize>], salt: usize, reversed: bool) -> OntologyGraph {
    let n = parents.len();
    let mut records: Vec<ClassRecord> = parents
        .iter()
        .enumerate()
        .map(|(i, ps)| ClassRecord::new(node_id(i, n, salt), "x").with_parents(ps.iter().map(|p| node_id(*p, n, salt))))
        .collect();
    if reversed {
        records.reverse();
    }
    OntologyGraph::from_records("g", records).unwrap()
}

/// Top-level nodes and the token each one gets.
fn start_tokens(parents: &[Vec<usize>], graph: &OntologyGraph, salt: usize) -> Vec<(usize, String)> {
    let n = parents.len();
    let anchor = anchor_class(graph);
    let mut starts: Vec<usize> = match anchor {
        Some(_) => (0..n).filter(|i| parents[*i].contains(&0)).collect(),
        None => (0..n).filter(|i| parents[*i].is_empty()).collect(),
    };
    starts.sort_by_key(|i| node_id(*i, n, salt));
    starts
        .into_iter()
        .enumerate()
        .map(|(k, i)| (i, ordinal_token(k)))
        .collect()
}

fn child_tokens(parents: &[Vec<usize>], salt: usize) -> Vec<Vec<(usize, String)>> {
    let n = parents.len();
    let mut children = vec![Vec::new(); n];
    for (i, ps) in parents.iter().enumerate() {
        for p in ps {
            children[*p].push(i);
        }
    }
    children
        .into_iter()
        .map(|mut kids| {
            kids.sort_by_key(|i| node_id(*i, n, salt));
            kids.into_iter()
                .enumerate()
                .map(|(k, i)| (i, ordinal_token(k)))
                .collect()
        })
        .collect()
}

fn path_key(rendered: &str) -> (usize, &str) {
    (rendered.matches('-').count(), rendered)
}

/// Every path of every node, or `None` when there are more than `budget`.
fn enumerate_all(
    starts: &[(usize, String)],
    children: &[Vec<(usize, String)>],
    anchor: Option<usize>,
    budget: usize,
) -> Option<Vec<Vec<String>>> {
    let mut paths = vec![Vec::new(); children.len()];
    let mut stack: Vec<(usize, String)> = starts.to_vec();
    let mut total = 0;
    while let Some((node, path)) = stack.pop() {
        total += 1;
        if total > budget {
            return None;
        }
        for (child, token) in &children[node] {
            if Some(*child) != anchor {
                stack.push((*child, format!("{path}-{token}")));
            }
        }
        paths[node].push(path);
    }
    for list in &mut paths {
        list.sort_by(|a, b| path_key(a).cmp(&path_key(b)));
    }
    Some(paths)
}

/// Shortest, then lexicographically smallest, path of every node, and the
/// number of paths (saturating).
fn best_paths(
    parents: &[Vec<usize>],
    starts: &[(usize, String)],
    children: &[Vec<(usize, String)>],
) -> (Vec<Option<String>>, Vec<u64>) {
    let n = parents.len();
    let mut best: Vec<Option<String>> = vec![None; n];
    let mut count = vec![0u64; n];
    for (i, token) in starts {
        best[*i] = Some(token.clone());
        count[*i] = 1;
    }
    // parents < children, so increasing index is a topological order
    for p in 0..n {
        let Some(base) = best[p].clone() else { continue };
        for (child, token) in &children[p] {
            count[*child] = count[*child].saturating_add(count[p]);
            let candidate = format!("{base}-{token}");
            let better = match &best[*child] {
                None => true,
                Some(current) => path_key(&candidate) < path_key(current),
            };
            if better {
                best[*child] = Some(candidate);
            }
        }
    }
    (best, count)
}

struct SmartIdStats {
    graphs: usize,
    exhaustive: usize,
    largest: usize,
    ids: usize,
}

fn check_smartid_graph(parents: &[Vec<usize>], salt: usize, stats: &mut SmartIdStats) -> Result<(), String> {
    let n = parents.len();
    let config = SmartIdConfig::default();
    let cap = config.path_cap;
    let graph = build_dag(parents, salt, false);
    let table = assign_smartids(&graph, &config).map_err(|e| e.to_string())?;
    let shuffled = assign_smartids(&build_dag(parents, salt, true), &config).map_err(|e| e.to_string())?;
    ensure(table == shuffled, || {
        format!("{n} nodes: table depends on record order")
    })?;

    let anchor = anchor_class(&graph).map(|a| {
        assert_eq!(a, node_id(0, n, salt));
        0
    });
    let starts = start_tokens(parents, &graph, salt);
    let children = child_tokens(parents, salt);
    let (best, counts) = best_paths(parents, &starts, &children);

    // injectivity: one owner per rendered id
    let mut seen = HashSet::new();
    for (class, smart, synonyms) in table.entries() {
        for id in std::iter::once(smart).chain(synonyms) {
            ensure(seen.insert(id.as_str().to_string()), || {
                format!("{n} nodes: {id} assigned twice")
            })?;
            ensure(table.resolve(id.as_str()) == Ok(class), || {
                format!("{id} does not resolve to {class}")
            })?;
        }
    }
    ensure(seen.len() == table.all_ids().count(), || "id count mismatch".into())?;
    stats.ids += seen.len();

    // minimality and path counts
    for i in 0..n {
        let id = node_id(i, n, salt);
        if Some(i) == anchor {
            ensure(table.smart_id(&id).is_none(), || format!("anchor {id} has an id"))?;
            continue;
        }
        let smart = table.smart_id(&id).ok_or_else(|| format!("{id} has no SmartID"))?;
        let want = best[i].as_deref().unwrap();
        ensure(smart.as_str() == want, || {
            format!("{n} nodes: {id} got {smart}, shortest smallest path is {want}")
        })?;
        let got = table.path_ids(&id).count() as u64;
        ensure(got == counts[i].min(cap as u64), || {
            format!("{id}: {got} ids for {} paths", counts[i])
        })?;
        let ids: Vec<&PathId> = table.path_ids(&id).collect();
        ensure(ids.windows(2).all(|w| w[0] < w[1]), || {
            format!("{id}: ids not in path order")
        })?;
    }

    // prefix ancestry: the immediate prefix of every id belongs to a parent
    // of its owner, so by induction every strict prefix is an ancestor
    let top: HashSet<usize> = starts.iter().map(|(i, _)| *i).collect();
    for (rendered, owner) in table.all_ids() {
        let id = PathId::parse(rendered).map_err(|e| e.to_string())?;
        match id.strict_prefixes().last() {
            Some(prefix) => {
                let parent = table
                    .resolve(prefix)
                    .map_err(|_| format!("prefix {prefix} of {rendered} unassigned"))?;
                ensure(graph.parents(owner).iter().any(|p| p == parent), || {
                    format!("prefix {prefix} of {rendered} belongs to {parent}, not a parent of {owner}")
                })?;
            }
            None => {
                let index = (0..n).find(|i| node_id(*i, n, salt) == owner).unwrap();
                ensure(top.contains(&index), || {
                    format!("{rendered} is top-level but {owner} is not")
                })?;
            }
        }
    }

    if n <= 200 {
        let all = enumerate_all(&starts, &children, anchor, 2_000_000)
            .ok_or_else(|| format!("{n} nodes: too many paths to enumerate"))?;
        for (i, paths) in all.iter().enumerate() {
            if Some(i) == anchor {
                continue;
            }
            let id = node_id(i, n, salt);
            let got: Vec<&str> = table.path_ids(&id).map(PathId::as_str).collect();
            let want: Vec<&str> = paths.iter().take(cap).map(String::as_str).collect();
            ensure(got == want, || {
                format!("{n} nodes: {id} ids {got:?}, enumeration {want:?}")
            })?;
        }
        stats.exhaustive += 1;
    }
    stats.graphs += 1;
    stats.largest = stats.largest.max(n);
    Ok(())
}

fn smartid_suite() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut stats = SmartIdStats {
        graphs: 0,
        exhaustive: 0,
        largest: 0,
        ids: 0,
    };
    for g in 0..1000 {
        let n = match g {
            0..800 => rng.random_range(1..=200),
            800..990 => (rng.random_range(200f64.ln()..5000f64.ln())).exp() as usize + 1,
            _ => 5000,
        };
        let parents = random_dag(&mut rng, n);
        check_smartid_graph(&parents, g, &mut stats).map_err(|e| format!("graph {g}: {e}"))?;
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "{} graphs up to {} nodes, {} ids; {} enumerated exhaustively",
        stats.graphs, stats.largest, stats.ids, stats.exhaustive
    ))
}

// ---------------------------------------------------------------- decoding

const WORDS: [&str; 40] = [
    "wall",
    "chest",
    "bone",
    "nerve",
    "vein",
    "artery",
    "thoracic",
    "skin",
    "cranial",
    "joint",
    "muscle",
    "lobe",
    "left",
    "right",
    "upper",
    "lower",
    "anterior",
    "posterior",
    "cavity",
    "duct",
    "gland",
    "tissue",
    "fascia",
    "tendon",
    "ligament",
    "valve",
    "cortex",
    "node",
    "lymph",
    "renal",
    "hepatic",
    "pulmonary",
    "cardiac",
    "spinal",
    "dorsal",
    "ventral",
    "medial",
    "lateral",
    "segment",
    "branch",
];

fn phrase(rng: &mut ChaCha8Rng) -> String {
    let k = rng.random_range(1..=3);
    (0..k)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

fn random_target(rng: &mut ChaCha8Rng, n: usize) -> OntologyGraph {
    let parents = random_dag(rng, n);
    let records = parents.iter().enumerate().map(|(i, ps)| {
        let mut record =
            ClassRecord::new(node_id(i, n, 3), phrase(rng)).with_parents(ps.iter().map(|p| node_id(*p, n, 3)));
        if rng.random_bool(0.3) {
            record = record.with_synonyms([phrase(rng)]);
        }
        record
    });
    OntologyGraph::from_records("t", records.collect::<Vec<_>>()).unwrap()
}

fn perturb(rng: &mut ChaCha8Rng, label: &str) -> String {
    match rng.random_range(0..5) {
        0 => label.to_string(),
        1 => format!("{label}s"),
        2 => label.to_uppercase(),
        3 => {
            let mut chars: Vec<char> = label.chars().collect();
            let k = rng.random_range(0..chars.len());
            chars[k] = 'q';
            chars.into_iter().collect()
        }
        _ => phrase(rng),
    }
}

/// First class, in trie preorder, whose descriptions attain the best edit
/// similarity to the normalized source.
fn brute_force_class<'a>(graph: &OntologyGraph, table: &'a SmartIdTable, source: &str) -> &'a str {
    let normalized = normalize_term(source, true);
    let mut best: Option<(&str, f64)> = None;
    let mut cache: BTreeMap<&str, f64> = BTreeMap::new();
    for (_, class) in table.all_ids() {
        let score = *cache.entry(class).or_insert_with(|| {
            let terms = record_descriptions(graph.class(class).unwrap(), DescriptionOptions::default());
            terms
                .iter()
                .map(|t| edit_similarity(&normalized, t))
                .fold(0.0, f64::max)
        });
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((class, score));
        }
    }
    best.unwrap().0
}

fn decode_oracle() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let task = TaskId::new("t", "s", "t");
    let (mut agree, mut total, mut largest) = (0, 0, 0);
    let mut first_miss = None;
    for pair in 0..50 {
        let n = if pair % 10 == 0 {
            1000
        } else {
            rng.random_range(2..=1000)
        };
        let target = random_target(&mut rng, n);
        let table = assign_smartids(&target, &SmartIdConfig::default()).map_err(|e| e.to_string())?;
        let trie = PathTrie::build(&table);
        let translator = EditSimilarityTranslator::new(&target, &trie);
        let labels: Vec<&str> = target.classes().map(|c| c.label.as_str()).collect();
        largest = largest.max(n);
        for _ in 0..40 {
            let base = labels.choose(&mut rng).unwrap();
            let source = perturb(&mut rng, base);
            let decoded =
                decode(&translator, &trie, &task, &source, &DecodeConfig::greedy()).map_err(|e| e.to_string())?;
            let got = decoded.best().map(|c| c.class_id.clone()).unwrap_or_default();
            let want = brute_force_class(&target, &table, &source);
            total += 1;
            if got == want {
                agree += 1;
            } else if first_miss.is_none() {
                first_miss = Some(format!("pair {pair} source {source:?}: decoded {got}, argmax {want}"));
            }
        }
    }
    if let Some(miss) = first_miss {
        return Err(format!("{agree}/{total} agree; {miss}"));
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "{agree}/{total} queries over 50 pairs (targets up to {largest} classes)"
    ))
}

// ---------------------------------------------------------------- complexity

fn letters(mut i: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (i % 26) as u8);
        i /= 26;
        if i == 0 {
            break;
        }
    }
    String::from_utf8(out).unwrap()
}

/// Complete `branching`-ary tree in heap order.
fn balanced_tree(n: usize, branching: usize) -> OntologyGraph {
    let records = (0..n).map(|i| {
        let record = ClassRecord::new(format!("c{i:05}"), format!("term {}", letters(i)));
        if i == 0 {
            record
        } else {
            record.with_parents([format!("c{:05}", (i - 1) / branching)])
        }
    });
    OntologyGraph::from_records("t", records.collect::<Vec<_>>()).unwrap()
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Embeds every target label and takes the best cosine.
fn linear_scan<T: Translator>(translator: &T, task: &TaskId, target: &OntologyGraph, source: &str) -> String {
    let query = translator.embed(task, source).unwrap();
    let mut best = (String::new(), f64::NEG_INFINITY);
    for class in target.classes() {
        let v = translator.embed(task, &class.label).unwrap();
        let score = ontomap_core::align::cosine(&query, &v);
        if score > best.1 {
            best = (class.class_id.clone(), score);
        }
    }
    best.0
}

fn complexity() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let task = TaskId::new("t", "s", "t");
    let sizes = [100usize, 1_000, 10_000];
    let (mut trie_calls, mut scan_calls) = (Vec::new(), Vec::new());
    let mut detail = Vec::new();
    for &n in &sizes {
        let target = balanced_tree(n, 3);
        let table = assign_smartids(&target, &SmartIdConfig::default()).map_err(|e| e.to_string())?;
        let trie = PathTrie::build(&table);
        let counter = CallCounter::new(EditSimilarityTranslator::new(&target, &trie).with_embed_dim(256));
        let mut ids: Vec<&str> = target.classes().map(|c| c.class_id.as_str()).skip(1).collect();
        ids.shuffle(&mut rng);
        let (mut leaf_calls, mut leaves) = (0usize, 0usize);
        for class in ids.iter().take(300) {
            let record = target.class(class).unwrap();
            let depth = table.smart_id(class).unwrap().depth();
            let is_leaf = target.children(class).is_empty();
            counter.reset();
            let decoded =
                decode(&counter, &trie, &task, &record.label, &DecodeConfig::greedy()).map_err(|e| e.to_string())?;
            let got = decoded.best().map(|c| c.class_id.as_str()).unwrap_or("");
            ensure(got == *class, || format!("n={n}: {} decoded to {got}", record.label))?;
            // an inner node also needs the decision to stop
            let want = if is_leaf { depth } else { depth + 1 };
            ensure(counter.score_calls() == want, || {
                format!(
                    "n={n}: {class} at depth {depth} took {} calls, wanted {want}",
                    counter.score_calls()
                )
            })?;
            if is_leaf {
                leaf_calls += counter.score_calls();
                leaves += 1;
            }
        }
        let mean = leaf_calls as f64 / leaves as f64;
        trie_calls.push(mean);

        let mut scan = 0;
        for class in ids.iter().take(5) {
            counter.reset();
            let label = &target.class(class).unwrap().label;
            let got = linear_scan(&counter, &task, &target, label);
            ensure(got == *class, || format!("n={n}: linear scan of {label} found {got}"))?;
            scan += counter.embed_calls();
        }
        scan_calls.push(scan as f64 / 5.0);
        detail.push(format!("n={n} {mean:.2} calls/query"));
    }
    let ln_n: Vec<f64> = sizes.iter().map(|n| (*n as f64).ln()).collect();
    let log_of = |ys: &[f64]| ys.iter().map(|y| y.ln()).collect::<Vec<_>>();
    let raw = slope(&ln_n, &log_of(&trie_calls));
    // exponent of n left after dividing out ln n
    let per_log: Vec<f64> = trie_calls.iter().zip(&ln_n).map(|(c, l)| c / l).collect();
    let residual = slope(&ln_n, &log_of(&per_log));
    let baseline = slope(&ln_n, &log_of(&scan_calls));
    ensure(residual < 0.1, || format!("calls/ln(n) grows as n^{residual:.3}"))?;
    ensure(baseline > 0.9, || {
        format!("linear-scan baseline exponent {baseline:.3}; harness cannot tell the two apart")
    })?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "{}; exponent of n in calls/ln(n) {residual:.3}, raw calls exponent {raw:.3}, linear-scan exponent {baseline:.3}",
        detail.join(", ")
    ))
}

// ---------------------------------------------------------------- Eq. 1

const SOURCE_WORDS: [&str; 10] = [
    "wall", "chest", "bone", "nerve", "vein", "artery", "thoracic", "skin", "cranial", "joint",
];
const TARGET_WORDS: [&str; 10] = [
    "muscle", "lobe", "cavity", "duct", "gland", "tissue", "fascia", "tendon", "valve", "cortex",
];
const SHARED_WORDS: [(&str, &str); 6] = [
    ("lymph node", "lymph nodes"),
    ("spinal cord", "spinal cords"),
    ("renal artery", "renal arteries"),
    ("hepatic duct", "hepatic ducts"),
    ("rib cage", "rib cages"),
    ("left lung", "left lungs"),
];

fn terms(rng: &mut ChaCha8Rng, words: &[&str]) -> Vec<String> {
    let k = rng.random_range(1..=3);
    (0..k)
        .map(|_| {
            let w = rng.random_range(1..=2);
            (0..w)
                .map(|_| *words.choose(rng).unwrap())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

/// Shared term with case, spacing or number changed on one side.
fn variant(rng: &mut ChaCha8Rng, (term, plural): (&str, &str)) -> String {
    match rng.random_range(0..4) {
        0 => term.to_uppercase(),
        1 => format!("  {}  ", term.replace(' ', "   ")),
        2 => plural.to_string(),
        _ => term.to_string(),
    }
}

fn class_from_terms(id: &str, terms: &[String], parent: Option<&str>) -> ClassRecord {
    let record = ClassRecord::new(id, &terms[0]).with_synonyms(terms[1..].to_vec());
    match parent {
        Some(p) => record.with_parents([p]),
        None => record,
    }
}

fn eq1_behavior() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let task = TaskId::new("t", "s", "t");
    let options = DescriptionOptions::singular(true);
    let thresholds: Vec<f64> = (0..=20).map(|k| f64::from(k) / 20.0).collect();
    let (mut exact, mut disjoint, mut runs) = (0, 0, 0);
    for group in 0..10 {
        let mut sources = vec![ClassRecord::new("sroot", "source root")];
        let mut targets = vec![ClassRecord::new("troot", "target root")];
        let mut intersecting = Vec::new();
        for k in 0..50 {
            let mut s = terms(&mut rng, &SOURCE_WORDS);
            let mut t = terms(&mut rng, &TARGET_WORDS);
            let shared = rng.random_bool(0.5);
            if shared {
                let term = *SHARED_WORDS.choose(&mut rng).unwrap();
                let (a, b) = (variant(&mut rng, term), variant(&mut rng, term));
                let (i, j) = (rng.random_range(0..=s.len()), rng.random_range(0..=t.len()));
                s.insert(i, a);
                t.insert(j, b);
            }
            let (sid, tid) = (format!("s{group}_{k:02}"), format!("t{group}_{k:02}"));
            sources.push(class_from_terms(&sid, &s, Some("sroot")));
            targets.push(class_from_terms(&tid, &t, Some("troot")));
            intersecting.push((sid, tid, shared, s, t));
        }
        let source = OntologyGraph::from_records("s", sources).unwrap();
        let target = OntologyGraph::from_records("t", targets).unwrap();
        let table = assign_smartids(&target, &SmartIdConfig::default()).map_err(|e| e.to_string())?;
        let trie = PathTrie::build(&table);
        let translator = EditSimilarityTranslator::new(&target, &trie);

        for (sid, tid, shared, s, t) in &intersecting {
            let m = score_mapping(
                &translator,
                &task,
                ClassRef::new(&source, sid),
                ClassRef::new(&target, tid),
                options,
            )
            .map_err(|e| e.to_string())?;
            if *shared {
                ensure(m.score == 1.0 && m.method == MatchMethod::Exact, || {
                    format!("{s:?} vs {t:?} share a term but scored {} ({:?})", m.score, m.method)
                })?;
                exact += 1;
            } else {
                let mut cos: f64 = f64::NEG_INFINITY;
                for x in s {
                    for y in t {
                        let (ex, ey) = (
                            trigram_embedding(x, DEFAULT_EMBED_DIM),
                            trigram_embedding(y, DEFAULT_EMBED_DIM),
                        );
                        let dot: f64 = ex.iter().zip(&ey).map(|(p, q)| p * q).sum();
                        let norm = |v: &[f64]| v.iter().map(|p| p * p).sum::<f64>().sqrt();
                        cos = cos.max(dot / (norm(&ex) * norm(&ey)));
                    }
                }
                let want = cos.clamp(0.0, 1.0);
                ensure(
                    m.method == MatchMethod::Similarity && (m.score - want).abs() < 1e-12,
                    || {
                        format!(
                            "{s:?} vs {t:?}: scored {} ({:?}), clamped cosine {want}",
                            m.score, m.method
                        )
                    },
                )?;
                disjoint += 1;
            }
        }

        let inputs = MatchInputs {
            source: &source,
            target: &target,
            trie: &trie,
            task: &task,
        };
        let mut previous: Option<BTreeSet<(String, String)>> = None;
        for &threshold in &thresholds {
            let config = MatchConfig {
                threshold,
                ..MatchConfig::default()
            };
            let outcome = match_ontologies(&translator, inputs, &config).map_err(|e| e.to_string())?;
            ensure(outcome.mappings.iter().all(|m| m.score > threshold), || {
                format!("score at or below τ={threshold}")
            })?;
            let set: BTreeSet<_> = outcome
                .mappings
                .into_iter()
                .map(|m| (m.source_id, m.target_id))
                .collect();
            if let Some(prev) = &previous {
                ensure(set.is_subset(prev), || {
                    format!("group {group}: output at τ={threshold} not within previous")
                })?;
            }
            previous = Some(set);
            runs += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{exact} intersecting fixtures at 1.0, {disjoint} disjoint at clamped cosine, {runs} threshold runs nested"
    ))
}

// ---------------------------------------------------------------- masking

fn masking_schedule() -> Check {
    let start = Instant::now();
    let toy = support::toy_dir();
    let mut sources = Vec::new();
    for (file, id) in [("target.jsonl", "fma"), ("source.jsonl", "snomed")] {
        let graph = ontomap::classfile::load_ontology(&toy.join(file), id).map_err(|e| e.to_string())?;
        let table = assign_smartids(&graph, &SmartIdConfig::default()).map_err(|e| e.to_string())?;
        sources.push((graph, table));
    }
    let pairs: Vec<(&OntologyGraph, &SmartIdTable)> = sources.iter().map(|(g, t)| (g, t)).collect();
    let schedule = MaskingSchedule::default();
    let records = build_pretrain_corpus(&pairs, &schedule, 7).map_err(|e| e.to_string())?;

    // (masked, units, scheduled masks, instances)
    let mut buckets = [(0usize, 0usize, 0.0f64, 0usize); 10];
    for r in &records {
        let decile = (r.step * 10 / schedule.total_steps) as usize;
        let ratio = masking_ratio(r.step, &schedule).map_err(|e| e.to_string())?;
        let b = &mut buckets[decile];
        b.0 += r.masked;
        b.1 += r.units;
        b.2 += ratio * r.units as f64;
        b.3 += 1;
    }
    let mut realized = Vec::new();
    let mut shown = Vec::new();
    let mut off = Vec::new();
    for (d, (masked, units, wanted, instances)) in buckets.iter().enumerate() {
        ensure(*units > 0, || format!("decile {d} is empty"))?;
        let got = *masked as f64 / *units as f64;
        let want = wanted / *units as f64;
        if (got - want).abs() > 0.01 {
            // one mask per instance is the least any allocation can do
            off.push(format!("{d} (one-mask floor {:.3})", *instances as f64 / *units as f64));
        }
        shown.push(format!("{got:.3}/{want:.3}"));
        realized.push(got);
    }
    let summary = format!(
        "{} instances; realized/schedule per decile [{}]",
        records.len(),
        shown.join(" ")
    );
    ensure(off.is_empty(), || {
        format!("deciles {} off by more than 0.01; {summary}", off.join(", "))
    })?;
    ensure(realized.windows(2).all(|w| w[0] <= w[1]), || {
        format!("not monotone; {summary}")
    })?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(summary)
}

// ---------------------------------------------------------------- metrics

fn metric_suite() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases_checked = 0;
    for fixture in 0..200 {
        let universe = rng.random_range(1..40);
        let pair = |rng: &mut ChaCha8Rng| {
            (
                format!("s{}", rng.random_range(0..universe)),
                format!("t{}", rng.random_range(0..universe)),
            )
        };
        let out: Vec<(String, String)> = (0..rng.random_range(1..80)).map(|_| pair(&mut rng)).collect();
        let refs: Vec<(String, String)> = (0..rng.random_range(1..80)).map(|_| pair(&mut rng)).collect();
        let dedup = |v: Vec<(String, String)>| {
            let mut seen = Vec::new();
            for p in v {
                if !seen.contains(&p) {
                    seen.push(p);
                }
            }
            seen
        };
        let (out, refs) = (dedup(out), dedup(refs));
        let beta = rng.random_range(0.25..4.0);
        let to_set = |v: &[(String, String)]| MappingSet::from_pairs(v.iter().cloned()).unwrap();
        let prf = precision_recall_f(&to_set(&out), &to_set(&refs), beta).map_err(|e| e.to_string())?;
        let tp = out.iter().filter(|p| refs.contains(p)).count() as f64;
        let (p, r) = (tp / out.len() as f64, tp / refs.len() as f64);
        let f = if p + r == 0.0 {
            0.0
        } else {
            (1.0 + beta * beta) * p * r / (beta * beta * p + r)
        };
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
        ensure(
            close(prf.precision, p) && close(prf.recall, r) && close(prf.f_score, f),
            || format!("fixture {fixture}: {prf:?} vs brute force ({p}, {r}, {f})"),
        )?;
        ensure(
            [prf.precision, prf.recall, prf.f_score]
                .iter()
                .all(|v| (0.0..=1.0).contains(v)),
            || "P/R/F out of [0, 1]".into(),
        )?;

        // predictions: one target per source, the first output pair wins
        let mut predictions = BTreeMap::new();
        for (s, t) in &out {
            predictions.entry(s.clone()).or_insert_with(|| t.clone());
        }
        let correct = refs.iter().filter(|(s, t)| predictions.get(s) == Some(t)).count();
        let acc = accuracy(&predictions, &to_set(&refs)).map_err(|e| e.to_string())?;
        ensure(close(acc, correct as f64 / refs.len() as f64), || {
            format!("fixture {fixture}: accuracy {acc}")
        })?;

        // ranking: scores on a coarse grid so ties are common
        let mut cases = Vec::new();
        let mut ranks = Vec::new();
        for c in 0..rng.random_range(1..30) {
            let width = rng.random_range(1..=100);
            let mut ids: Vec<String> = (0..=width).map(|k| format!("t{k:03}")).collect();
            ids.shuffle(&mut rng);
            let scores: Vec<f64> = (0..=width).map(|_| f64::from(rng.random_range(0..8u8)) / 7.0).collect();
            let case = RankingCase::new(format!("s{c}"), ids[0].clone(), ids[1..].to_vec())
                .map_err(|e| e.to_string())?
                .with_scores(scores.clone());
            let mut order: Vec<usize> = (0..ids.len()).collect();
            order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(ids[a].cmp(&ids[b])));
            ranks.push(order.iter().position(|&k| k == 0).unwrap() + 1);
            cases.push(case);
        }
        let n = ranks.len() as f64;
        let m = mrr(&cases).map_err(|e| e.to_string())?;
        ensure(close(m, ranks.iter().map(|r| 1.0 / *r as f64).sum::<f64>() / n), || {
            format!("fixture {fixture}: MRR {m}")
        })?;
        ensure(m > 0.0 && m <= 1.0, || format!("MRR {m} out of (0, 1]"))?;
        let mut previous = 0.0;
        for k in 1..=102 {
            let h = hits_at_k(&cases, k).map_err(|e| e.to_string())?;
            ensure(close(h, ranks.iter().filter(|r| **r <= k).count() as f64 / n), || {
                format!("fixture {fixture}: Hits@{k} {h}")
            })?;
            ensure((0.0..=1.0).contains(&h) && h >= previous, || {
                format!("fixture {fixture}: Hits@{k} {h} after {previous}")
            })?;
            previous = h;
        }
        ensure(hits_at_k(&cases, 1).unwrap() <= m + 1e-12, || "Hits@1 above MRR".into())?;
        ensure(previous == 1.0, || "Hits@K below 1 at K past the last candidate".into())?;
        cases_checked += cases.len();
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("200 fixtures, {cases_checked} ranking cases"))
}

// ---------------------------------------------------------------- toy benchmark

fn toy_benchmark() -> Check {
    let start = Instant::now();
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let report = support::toy_pipeline(work.path())?;
    let elapsed = start.elapsed();
    let golden = std::fs::read_to_string(support::golden_path()).map_err(|e| e.to_string())?;
    ensure(report == golden, || "report differs from the checked-in golden".into())?;
    within(elapsed, Duration::from_secs(60))?;
    let f = report
        .lines()
        .find(|l| l.starts_with("f_score"))
        .unwrap_or("")
        .to_string();
    Ok(format!("golden matched byte-exactly; {f}"))
}

fn main() {
    let checks: [Criterion; 8] = [
        ("f-score oracle", f_score_oracle),
        ("smartid suite", smartid_suite),
        ("decode oracle", decode_oracle),
        ("decode complexity", complexity),
        ("eq1 scoring", eq1_behavior),
        ("masking schedule", masking_schedule),
        ("metric suite", metric_suite),
        ("toy benchmark", toy_benchmark),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.2}s): {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
