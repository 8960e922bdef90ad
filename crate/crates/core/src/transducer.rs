//! Subsequential transducers: deterministic machines with an output string
//! on every transition and a terminal output per state, realizing
//! `f(γ) = (i ∗ γ) · ρ(i ◇ γ)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::encoders::{maximal_munch_encode, Vocab};
use crate::error::{Error, Result};
use crate::strings::{enumerate_strings, same_alphabet, Alphabet, Str};
use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: usize,
    pub input: u32,
    pub to: usize,
    pub output: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubseqTransducer {
    states: Vec<String>,
    input: Arc<Alphabet>,
    output: Arc<Alphabet>,
    initial: usize,
    // next state and emitted output share one table, so both partial
    // functions have the same domain
    delta: BTreeMap<(usize, u32), (usize, Vec<u32>)>,
    terminal: Vec<Vec<u32>>,
}

/// An input on which a transducer and a reference function disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub input: Str,
    pub got: std::result::Result<Str, String>,
    pub expected: std::result::Result<Str, String>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |r: &std::result::Result<Str, String>| match r {
            Ok(s) => s.to_string(),
            Err(e) => format!("error: {e}"),
        };
        write!(
            f,
            "{} (transducer {}, expected {})",
            self.input,
            show(&self.got),
            show(&self.expected)
        )
    }
}

impl SubseqTransducer {
    pub fn new(
        states: Vec<String>,
        input: &Arc<Alphabet>,
        output: &Arc<Alphabet>,
        initial: usize,
        transitions: Vec<Transition>,
        terminal: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidTransducer("no states".into()));
        }
        if initial >= n {
            return Err(Error::InvalidTransducer(format!(
                "initial state {initial} out of range"
            )));
        }
        if terminal.len() != n {
            return Err(Error::InvalidTransducer(format!(
                "{} terminal outputs for {n} states",
                terminal.len()
            )));
        }
        let distinct: BTreeSet<&String> = states.iter().collect();
        if distinct.len() != n {
            return Err(Error::InvalidTransducer("duplicate state names".into()));
        }
        let out_ok = |syms: &[u32]| syms.iter().all(|&s| (s as usize) < output.len());
        if !terminal.iter().all(|t| out_ok(t)) {
            return Err(Error::InvalidTransducer(
                "terminal output symbol out of range".into(),
            ));
        }
        let mut delta = BTreeMap::new();
        for t in transitions {
            if t.from >= n || t.to >= n {
                return Err(Error::InvalidTransducer(format!(
                    "transition {} -> {} references a missing state",
                    t.from, t.to
                )));
            }
            if t.input as usize >= input.len() || !out_ok(&t.output) {
                return Err(Error::InvalidTransducer("transition symbol out of range".into()));
            }
            if delta.insert((t.from, t.input), (t.to, t.output)).is_some() {
                return Err(Error::InvalidTransducer(format!(
                    "two transitions from {} on {:?}",
                    states[t.from],
                    input.label(t.input)
                )));
            }
        }
        Ok(SubseqTransducer {
            states,
            input: Arc::clone(input),
            output: Arc::clone(output),
            initial,
            delta,
            terminal,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn input_alphabet(&self) -> &Arc<Alphabet> {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Arc<Alphabet> {
        &self.output
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.delta
            .iter()
            .map(|(&(from, input), (to, output))| Transition {
                from,
                input,
                to: *to,
                output: output.clone(),
            })
    }

    pub fn terminal(&self, state: usize) -> &[u32] {
        &self.terminal[state]
    }

    /// Replaces the terminal output of `state`.
    pub fn with_terminal(&self, state: usize, out: Vec<u32>) -> Result<Self> {
        let mut t = self.clone();
        *t.terminal
            .get_mut(state)
            .ok_or_else(|| Error::InvalidTransducer(format!("no state {state}")))? = out;
        Ok(t)
    }

    /// Output accumulated along the path, without the terminal flush, and
    /// the state reached.
    pub fn path_output(&self, input: &Str) -> Result<(Str, usize)> {
        if !same_alphabet(input.alphabet(), &self.input) {
            return Err(Error::AlphabetMismatch);
        }
        let mut state = self.initial;
        let mut out = Vec::new();
        for (position, &sym) in input.syms().iter().enumerate() {
            let (next, emitted) =
                self.delta
                    .get(&(state, sym))
                    .ok_or_else(|| Error::UndefinedTransition {
                        state: self.states[state].clone(),
                        symbol: self.input.label(sym).to_string(),
                        position,
                    })?;
            out.extend_from_slice(emitted);
            state = *next;
        }
        Ok((Str::new(&self.output, out)?, state))
    }

    pub fn run(&self, input: &Str) -> Result<Str> {
        let (path, state) = self.path_output(input)?;
        let mut syms = path.syms().to_vec();
        syms.extend_from_slice(&self.terminal[state]);
        Str::new(&self.output, syms)
    }

    /// Sequential means every terminal output is empty.
    pub fn sequential_of(&self) -> Verdict<String> {
        match self.terminal.iter().position(|t| !t.is_empty()) {
            Some(s) => Verdict::Fails(self.states[s].clone()),
            None => Verdict::Holds,
        }
    }
}

/// Compares `run(t, γ)` with `f(γ)` for every `γ` of length at most
/// `max_len`, in canonical order.
pub fn equivalent_on<F>(t: &SubseqTransducer, f: F, max_len: usize) -> Verdict<Mismatch>
where
    F: Fn(&Str) -> Result<Str>,
{
    for input in enumerate_strings(&t.input, max_len) {
        let got = t.run(&input).map_err(|e| e.to_string());
        let expected = f(&input).map_err(|e| e.to_string());
        if got != expected {
            return Verdict::Fails(Mismatch { input, got, expected });
        }
    }
    Verdict::Holds
}

/// Builds a subsequential transducer computing maximal munch.
///
/// States are the proper prefixes of spellings: the text read since the last
/// emission, while some longer spelling could still match. When a character
/// makes the buffer non-extendable, the longest spelling prefixing it is
/// emitted and the leftover characters are replayed from the empty buffer at
/// construction time. The terminal output of a state is the maximal munch
/// segmentation of its buffer.
pub fn build_maximal_munch_transducer(vocab: &Vocab) -> Result<SubseqTransducer> {
    vocab.require_open()?;
    let chars = vocab.chars();
    let mut buffers: BTreeSet<Vec<u32>> = BTreeSet::new();
    buffers.insert(Vec::new());
    for (_, spelling) in vocab.entries() {
        for k in 1..spelling.len() {
            buffers.insert(spelling.syms()[..k].to_vec());
        }
    }
    let mut ordered: Vec<Vec<u32>> = buffers.into_iter().collect();
    ordered.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: BTreeMap<Vec<u32>, usize> = ordered.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();

    let names = ordered
        .iter()
        .map(|b| Str::new(chars, b.clone()).map(|s| s.to_string()))
        .collect::<Result<Vec<_>>>()?;

    let mut transitions = Vec::new();
    for (from, buffer) in ordered.iter().enumerate() {
        for c in 0..chars.len() as u32 {
            let (output, next) = step(vocab, &index, buffer, c);
            transitions.push(Transition {
                from,
                input: c,
                to: index[&next],
                output,
            });
        }
    }
    let terminal = ordered
        .iter()
        .map(|b| {
            Ok(maximal_munch_encode(vocab, &Str::new(chars, b.clone())?)?
                .syms()
                .to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    SubseqTransducer::new(names, chars, vocab.tokens(), 0, transitions, terminal)
}

fn step(vocab: &Vocab, states: &BTreeMap<Vec<u32>, usize>, buffer: &[u32], c: u32) -> (Vec<u32>, Vec<u32>) {
    let mut buf = buffer.to_vec();
    buf.push(c);
    if states.contains_key(&buf) {
        return (Vec::new(), buf);
    }
    let (token, len) = (1..=vocab.max_spelling_len().min(buf.len()))
        .rev()
        .find_map(|len| vocab.token_for(&buf[..len]).map(|t| (t, len)))
        .expect("open vocabulary matches every character");
    let mut out = vec![token];
    let mut state = Vec::new();
    for &r in &buf[len..] {
        let (emitted, next) = step(vocab, states, &state, r);
        out.extend(emitted);
        state = next;
    }
    (out, state)
}
