//! Recorded worked examples, replayed against the engine.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{self, ComplementCase, NoComplementReason, Verdict};
use crate::uniserial::TbarModule;
use crate::words::{eval_word, parse_generators};
use crate::wreath::{Params, TbarVector};

/// The built-in corpus.
pub const EXAMPLES_JSON: &str = include_str!("../corpus/examples.json");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported corpus schema {0}")]
    Schema(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub schema: u32,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Entry {
    Decide {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
        p: u32,
        n: usize,
        gens: Vec<String>,
        expect: DecideExpect,
    },
    Uniserial {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
        p: u32,
        n: usize,
        j: usize,
        /// `(level, block, coefficient)` triples.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vector: Option<Vec<[usize; 3]>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        word: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        same_as_word: Option<String>,
        expect: UniserialExpect,
    },
}

impl Entry {
    pub fn name(&self) -> &str {
        match self {
            Entry::Decide { name, .. } | Entry::Uniserial { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideExpect {
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_exponent: Option<u64>,
    pub has_complement: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<ComplementCase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_exponent: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<NoComplementReason>,
    /// Levels `k` with `^{η_k}N ≠ N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_moves: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniserialExpect {
    pub cyclic_uniserial: bool,
    #[serde(default)]
    pub conditions: Vec<ConditionExpect>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionExpect {
    pub level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outside_augmentation: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection_injective: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

pub fn load(text: &str) -> Result<Corpus, CorpusError> {
    let corpus: Corpus = serde_json::from_str(text)?;
    if corpus.schema != 1 {
        return Err(CorpusError::Schema(corpus.schema));
    }
    Ok(corpus)
}

pub fn builtin() -> Corpus {
    load(EXAMPLES_JSON).expect("built-in corpus parses")
}

struct Checker {
    failures: Vec<String>,
}

impl Checker {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: Option<T>) {
        if let Some(want) = want {
            if got != want {
                self.failures
                    .push(format!("{what}: got {got:?}, want {want:?}"));
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }
}

fn replay_decide(c: &mut Checker, params: &Params, gens: &[String], x: &DecideExpect) {
    let perms = match parse_generators(&gens.join(";"), params) {
        Ok(p) => p,
        Err(e) => return c.fail(format!("generators: {e}")),
    };
    let result = (|| {
        let h = engine::closure_handle(params, &perms)?;
        let d = engine::decide(&h)?;
        let orbit = engine::h_orbit_of_n(&h)?;
        let report = match d.verdict {
            Verdict::HasComplement { .. } => Some(engine::verify_complement(&h, &d)?),
            Verdict::NoComplement { .. } => None,
        };
        Ok::<_, engine::EngineError>((h, d, orbit, report))
    })();
    let (h, d, orbit, report) = match result {
        Ok(r) => r,
        Err(e) => return c.fail(format!("engine: {e}")),
    };
    c.eq("depth", h.depth(), Some(x.depth));
    c.eq("n_exponent", h.order_exponent(), x.n_exponent);
    c.eq("has_complement", d.has_complement(), Some(x.has_complement));
    c.eq(
        "c_exponent",
        d.complement_exponent(params),
        x.c_exponent.map(Some),
    );
    let moved: Vec<usize> = orbit.iter().filter(|e| !e.equals_n).map(|e| e.k).collect();
    c.eq("eta_moves", moved, x.eta_moves.clone());
    match &d.verdict {
        Verdict::HasComplement {
            case,
            z,
            generators,
        } => {
            c.eq("case", *case, x.case);
            c.eq("z", z.clone(), x.z.clone());
            let labels: Vec<String> = generators.iter().map(|g| g.label.clone()).collect();
            c.eq("complement", labels, x.complement.clone());
            if let Some(r) = report {
                if !r.passed() {
                    c.fail(format!("verification failed: {r:?}"));
                }
            }
        }
        Verdict::NoComplement { reason, .. } => {
            c.eq("reason", *reason, x.reason);
        }
    }
}

fn replay_uniserial(
    c: &mut Checker,
    params: &Params,
    j: usize,
    vector: &Option<Vec<[usize; 3]>>,
    word: &Option<String>,
    same_as_word: &Option<String>,
    x: &UniserialExpect,
) {
    let module = match TbarModule::new(params, j) {
        Ok(m) => m,
        Err(e) => return c.fail(format!("module: {e}")),
    };
    let from_word = |w: &str| -> Result<TbarVector, String> {
        let perm = eval_word(w, params).map_err(|e| e.to_string())?;
        params.tbar_image(j, &perm).map_err(|e| e.to_string())
    };
    let v = match (vector, word) {
        (Some(triples), _) => {
            let mut v = TbarVector::zero(params, j);
            for &[level, block, coeff] in triples {
                if level < j || level >= params.n() || block >= module.blocks() {
                    return c.fail(format!("vector entry ({level}, {block}) out of range"));
                }
                v.coords[module.index(level, block)] = (coeff % params.p() as usize) as u8;
            }
            v
        }
        (None, Some(w)) => match from_word(w) {
            Ok(v) => v,
            Err(e) => return c.fail(format!("word: {e}")),
        },
        (None, None) => return c.fail("entry has neither vector nor word".into()),
    };
    if let Some(w) = same_as_word {
        match from_word(w) {
            Ok(u) if u == v => {}
            Ok(u) => c.fail(format!(
                "word image {:?} differs from vector {:?}",
                u.coords, v.coords
            )),
            Err(e) => c.fail(format!("same_as_word: {e}")),
        }
    }
    let conditions = match module.uniserial_conditions(&v) {
        Ok(cs) => cs,
        Err(e) => return c.fail(format!("conditions: {e}")),
    };
    let uniserial = conditions
        .iter()
        .any(|k| k.outside_augmentation && k.projection_injective);
    c.eq("cyclic_uniserial", uniserial, Some(x.cyclic_uniserial));
    for want in &x.conditions {
        match conditions.iter().find(|k| k.level == want.level) {
            Some(got) => {
                let tag = format!("level {}", want.level);
                c.eq(
                    &format!("{tag} outside_augmentation"),
                    got.outside_augmentation,
                    want.outside_augmentation,
                );
                c.eq(
                    &format!("{tag} projection_injective"),
                    got.projection_injective,
                    want.projection_injective,
                );
            }
            None => c.fail(format!("no condition for level {}", want.level)),
        }
    }
}

pub fn replay(entry: &Entry) -> Outcome {
    let mut c = Checker {
        failures: Vec::new(),
    };
    let (p, n) = match entry {
        Entry::Decide { p, n, .. } | Entry::Uniserial { p, n, .. } => (*p, *n),
    };
    match Params::new(p, n) {
        Err(e) => c.fail(format!("params: {e}")),
        Ok(params) => match entry {
            Entry::Decide { gens, expect, .. } => replay_decide(&mut c, &params, gens, expect),
            Entry::Uniserial {
                j,
                vector,
                word,
                same_as_word,
                expect,
                ..
            } => replay_uniserial(&mut c, &params, *j, vector, word, same_as_word, expect),
        },
    }
    Outcome {
        name: entry.name().to_string(),
        passed: c.failures.is_empty(),
        failures: c.failures,
    }
}

pub fn replay_all(corpus: &Corpus) -> Vec<Outcome> {
    corpus.entries.iter().map(replay).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_corpus_passes() {
        let outcomes = replay_all(&builtin());
        assert_eq!(outcomes.len(), 7);
        for o in &outcomes {
            assert!(o.passed, "{}: {:?}", o.name, o.failures);
        }
    }

    #[test]
    fn wrong_expectation_is_reported() {
        let mut corpus = builtin();
        if let Entry::Decide { expect, .. } = &mut corpus.entries[0] {
            expect.z = Some(vec![2]);
        }
        let o = replay(&corpus.entries[0]);
        assert!(!o.passed);
        assert!(o.failures[0].starts_with("z:"));
    }

    #[test]
    fn schema_is_checked() {
        assert!(matches!(
            load(r#"{"schema": 2, "entries": []}"#),
            Err(CorpusError::Schema(2))
        ));
        assert!(load("{").is_err());
    }
}
