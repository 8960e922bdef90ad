//! JSON documents for tokenizer specs, distributions, stochastic map tables
//! and transducers. Strings are written in their display form (`"the"`,
//! `"th|e"`, `"ε"`) and masses as exact `"num/den"` text.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::encoders::{bpe_encode, uniform_segmenter};
use crate::encoders::{
    concat_decoder_on, maximal_munch_encode, maximal_munch_encode_lossy, MergeList, Vocab,
};
use crate::error::{Error, Result};
use crate::rational::parse_rational;
use crate::stochmap::StochMap;
use crate::strings::{Alphabet, Space, Str};
use crate::tokenizer::Tokenizer;
use crate::transducer::{SubseqTransducer, Transition};

/// Truncation used when neither the file nor the caller sets one.
pub const DEFAULT_MAX_LEN: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistEntry {
    pub string: String,
    pub prob: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<DistEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabEntry {
    pub token: String,
    pub spelling: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EncoderSpec {
    MaximalMunch {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unk: Option<String>,
    },
    Bpe {
        merges: Vec<(String, String)>,
    },
    Uniform,
    Table {
        table: Vec<TableRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DecoderSpec {
    Concat,
    Table { table: Vec<TableRow> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerSpec {
    pub alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vocab: Vec<VocabEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_len: Option<usize>,
    pub encoder: EncoderSpec,
    pub decoder: DecoderSpec,
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

impl TokenizerSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(parse_err)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn chars(&self) -> Result<Arc<Alphabet>> {
        Alphabet::characters(self.alphabet.clone())
    }

    pub fn build_vocab(&self, chars: &Arc<Alphabet>) -> Result<Option<Vocab>> {
        if self.vocab.is_empty() {
            return Ok(None);
        }
        let entries = self
            .vocab
            .iter()
            .map(|e| Ok((e.token.clone(), Str::parse(chars, &e.spelling)?)))
            .collect::<Result<Vec<_>>>()?;
        Vocab::new(chars, entries).map(Some)
    }

    /// The vocabulary, which must be present.
    pub fn require_vocab(&self) -> Result<Vocab> {
        self.build_vocab(&self.chars()?)?
            .ok_or_else(|| Error::Parse("this operation needs a vocab".into()))
    }

    pub fn build(&self, max_len: Option<usize>) -> Result<Tokenizer> {
        let n = max_len.or(self.max_len).unwrap_or(DEFAULT_MAX_LEN);
        let chars = self.chars()?;
        let vocab = self.build_vocab(&chars)?;
        let tokens = match &vocab {
            Some(v) => {
                if !self.tokens.is_empty() && self.tokens != v.tokens().labels() {
                    return Err(Error::Parse("tokens list disagrees with vocab".into()));
                }
                Arc::clone(v.tokens())
            }
            None if !self.tokens.is_empty() => Alphabet::tokens(self.tokens.clone())?,
            None => return Err(Error::Parse("spec declares neither vocab nor tokens".into())),
        };
        let need_vocab = |what: &str| {
            vocab
                .as_ref()
                .ok_or_else(|| Error::Parse(format!("{what} needs a vocab")))
        };

        let text_space = match &self.encoder {
            EncoderSpec::Table { table } => Space::finite(&chars, table_inputs(table, &chars)?)?,
            _ => Space::truncated(&chars, n),
        };
        let token_space = match &self.decoder {
            DecoderSpec::Table { table } => Space::finite(&tokens, table_inputs(table, &tokens)?)?,
            DecoderSpec::Concat => Space::truncated(&tokens, n),
        };
        let decoded_space = match &self.decoder {
            DecoderSpec::Table { table } => {
                let mut members: BTreeSet<Str> = text_space.strings().into_iter().collect();
                for row in table {
                    for (s, _) in row_entries(row)? {
                        members.insert(Str::parse(&chars, &s)?);
                    }
                }
                Space::finite(&chars, members)?
            }
            DecoderSpec::Concat => {
                let v = need_vocab("concat decoder")?;
                Space::truncated(&chars, (n * v.max_spelling_len()).max(text_space.max_len()))
            }
        };

        let mut note = None;
        let encoder = match &self.encoder {
            EncoderSpec::MaximalMunch { unk } => {
                let v = need_vocab("maximal_munch encoder")?;
                match unk {
                    Some(label) => {
                        let u = tokens
                            .symbol(label)
                            .ok_or_else(|| Error::Parse(format!("unknown unk token {label:?}")))?;
                        note = Some("lossy unknown-token mode breaks exactness");
                        StochMap::deterministic(&text_space, &token_space, |s| {
                            maximal_munch_encode_lossy(v, u, s)
                        })?
                    }
                    None => {
                        StochMap::deterministic(&text_space, &token_space, |s| maximal_munch_encode(v, s))?
                    }
                }
            }
            EncoderSpec::Bpe { merges } => {
                let v = need_vocab("bpe encoder")?;
                let pairs: Vec<(&str, &str)> = merges.iter().map(|(l, r)| (l.as_str(), r.as_str())).collect();
                let merges = MergeList::parse(v, &pairs)?;
                StochMap::deterministic(&text_space, &token_space, |s| bpe_encode(v, &merges, s))?
            }
            EncoderSpec::Uniform => {
                let v = need_vocab("uniform encoder")?;
                StochMap::materialize(&text_space, &token_space, |s| {
                    uniform_segmenter(v, s, &token_space)
                })?
            }
            EncoderSpec::Table { table } => table_map(table, &text_space, &token_space)?,
        };
        let decoder = match &self.decoder {
            DecoderSpec::Concat => {
                concat_decoder_on(need_vocab("concat decoder")?, &token_space, &decoded_space)?
            }
            DecoderSpec::Table { table } => table_map(table, &token_space, &decoded_space)?,
        };
        let t = Tokenizer::new(encoder, decoder)?;
        Ok(match note {
            Some(n) => t.with_note(n),
            None => t,
        })
    }
}

fn table_inputs(table: &[TableRow], alpha: &Arc<Alphabet>) -> Result<Vec<Str>> {
    table.iter().map(|r| Str::parse(alpha, &r.input)).collect()
}

fn row_entries(row: &TableRow) -> Result<Vec<(String, String)>> {
    match (&row.output, &row.outputs) {
        (Some(o), None) => Ok(vec![(o.clone(), "1".into())]),
        (None, Some(list)) => Ok(list.iter().map(|e| (e.string.clone(), e.prob.clone())).collect()),
        _ => Err(Error::Parse(format!(
            "row {:?} needs exactly one of output or outputs",
            row.input
        ))),
    }
}

fn table_map(table: &[TableRow], dom: &Space, cod: &Space) -> Result<StochMap> {
    let mut rows = BTreeMap::new();
    for row in table {
        let x = Str::parse(dom.alphabet(), &row.input)?;
        let entries = row_entries(row)?
            .into_iter()
            .map(|(s, p)| Ok((Str::parse(cod.alphabet(), &s)?, parse_rational(&p)?)))
            .collect::<Result<Vec<_>>>()?;
        if rows.insert(x, Dist::new(cod, entries)?).is_some() {
            return Err(Error::Parse(format!("duplicate table row {:?}", row.input)));
        }
    }
    StochMap::from_rows(dom, cod, rows)
}

/// The table form of a map; point-mass rows use `output`.
pub fn map_to_table(map: &StochMap) -> Vec<TableRow> {
    map.rows()
        .map(|(x, row)| match row.as_point() {
            Some(y) => TableRow {
                input: x.to_string(),
                output: Some(y.to_string()),
                outputs: None,
            },
            None => TableRow {
                input: x.to_string(),
                output: None,
                outputs: Some(dist_to_entries(row)),
            },
        })
        .collect()
}

pub fn map_from_table(table: &[TableRow], dom: &Space, cod: &Space) -> Result<StochMap> {
    table_map(table, dom, cod)
}

pub fn dist_to_entries(d: &Dist) -> Vec<DistEntry> {
    d.iter()
        .map(|(s, m)| DistEntry {
            string: s.to_string(),
            prob: m.to_string(),
        })
        .collect()
}

pub fn dist_to_json(d: &Dist) -> String {
    serde_json::to_string_pretty(&dist_to_entries(d)).expect("plain data serializes")
}

pub fn dist_from_json(text: &str, space: &Space) -> Result<Dist> {
    let entries: Vec<DistEntry> = serde_json::from_str(text).map_err(parse_err)?;
    let pairs = entries
        .iter()
        .map(|e| Ok((Str::parse(space.alphabet(), &e.string)?, parse_rational(&e.prob)?)))
        .collect::<Result<Vec<_>>>()?;
    Dist::new(space, pairs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: String,
    #[serde(rename = "in")]
    pub input: String,
    pub to: String,
    pub out: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalDoc {
    pub state: String,
    pub out: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransducerDoc {
    pub states: Vec<String>,
    pub initial: String,
    pub transitions: Vec<TransitionDoc>,
    pub terminal: Vec<TerminalDoc>,
}

impl TransducerDoc {
    pub fn from_transducer(t: &SubseqTransducer) -> Self {
        let names = t.states();
        let out = |syms: &[u32]| {
            Str::new(t.output_alphabet(), syms.to_vec())
                .expect("validated")
                .to_string()
        };
        TransducerDoc {
            states: names.to_vec(),
            initial: names[t.initial()].clone(),
            transitions: t
                .transitions()
                .map(|tr| TransitionDoc {
                    from: names[tr.from].clone(),
                    input: t.input_alphabet().label(tr.input).to_string(),
                    to: names[tr.to].clone(),
                    out: out(&tr.output),
                })
                .collect(),
            terminal: names
                .iter()
                .enumerate()
                .map(|(i, s)| TerminalDoc {
                    state: s.clone(),
                    out: out(t.terminal(i)),
                })
                .collect(),
        }
    }

    /// Resolves names against the given alphabets. States without a
    /// terminal entry flush nothing.
    pub fn to_transducer(&self, input: &Arc<Alphabet>, output: &Arc<Alphabet>) -> Result<SubseqTransducer> {
        let index: BTreeMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let state = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown state {name:?}")))
        };
        let out = |text: &str| Str::parse(output, text).map(|s| s.syms().to_vec());
        let transitions = self
            .transitions
            .iter()
            .map(|tr| {
                Ok(Transition {
                    from: state(&tr.from)?,
                    input: input
                        .symbol(&tr.input)
                        .ok_or_else(|| Error::Parse(format!("unknown input symbol {:?}", tr.input)))?,
                    to: state(&tr.to)?,
                    output: out(&tr.out)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut terminal = vec![Vec::new(); self.states.len()];
        for t in &self.terminal {
            terminal[state(&t.state)?] = out(&t.out)?;
        }
        SubseqTransducer::new(
            self.states.clone(),
            input,
            output,
            state(&self.initial)?,
            transitions,
            terminal,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(parse_err)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const COLLAPSE: &str = r#"{
        "alphabet": ["σ1", "σ2", "σ3"],
        "tokens": ["δ1", "δ2", "δ3"],
        "encoder": {"type": "table", "table": [
            {"input": "σ1", "output": "δ1"},
            {"input": "σ2", "output": "δ3"},
            {"input": "σ3", "output": "δ3"}]},
        "decoder": {"type": "table", "table": [
            {"input": "δ1", "output": "σ2"},
            {"input": "δ2", "output": "σ2"},
            {"input": "δ3", "output": "σ3"}]}
    }"#;

    #[test]
    fn table_spec_builds() {
        let spec = TokenizerSpec::from_json(COLLAPSE).unwrap();
        let t = spec.build(None).unwrap();
        assert_eq!(t.is_exact().witness().unwrap().to_string(), "σ1");
        assert_eq!(t.text_space().size(), 3);
    }

    #[test]
    fn stochastic_table_rows() {
        let text = r#"{
            "alphabet": ["a"], "tokens": ["A", "B"],
            "encoder": {"type": "table", "table": [
                {"input": "a", "outputs": [{"string": "A", "prob": "1/2"}, {"string": "B", "prob": "1/2"}]}]},
            "decoder": {"type": "table", "table": [
                {"input": "A", "output": "a"}, {"input": "B", "output": "a"}]}
        }"#;
        let t = TokenizerSpec::from_json(text).unwrap().build(None).unwrap();
        assert!(!t.encoder().is_deterministic().holds());
        assert!(t.is_exact().holds());
        let table = map_to_table(t.encoder());
        assert_eq!(table[0].outputs.as_ref().unwrap()[0].prob, "1/2");
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(TokenizerSpec::from_json("{"), Err(Error::Parse(_))));
        let no_tokens =
            r#"{"alphabet": ["a"], "encoder": {"type": "uniform"}, "decoder": {"type": "concat"}}"#;
        assert!(TokenizerSpec::from_json(no_tokens).unwrap().build(None).is_err());
        let both = r#"{"alphabet": ["a"], "tokens": ["A"],
            "encoder": {"type": "table", "table": [{"input": "a", "output": "A", "outputs": []}]},
            "decoder": {"type": "table", "table": [{"input": "A", "output": "a"}]}}"#;
        assert!(TokenizerSpec::from_json(both).unwrap().build(None).is_err());
    }

    #[test]
    fn dist_file() {
        let a = Alphabet::characters(["t", "h", "e"]).unwrap();
        let sp = Space::truncated(&a, 3);
        let d = dist_from_json(
            r#"[{"string": "the", "prob": "1/4"}, {"string": "ε", "prob": "0.75"}]"#,
            &sp,
        )
        .unwrap();
        assert_eq!(d.mass(&Str::parse(&a, "the").unwrap()), ratio(1, 4));
        assert_eq!(dist_from_json(&dist_to_json(&d), &sp).unwrap(), d);
        assert!(dist_from_json(r#"[{"string": "the", "prob": "1/4"}]"#, &sp).is_err());
    }
}
