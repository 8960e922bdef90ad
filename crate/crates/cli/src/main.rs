use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tokcheck_core::format::{dist_from_json, TokenizerSpec, TransducerDoc};
use tokcheck_core::sim::DEFAULT_SCHEDULE;
use tokcheck_core::{
    build_maximal_munch_transducer, equivalent_on, maximal_munch_encode, preimage_bound, ratio,
    run_estimation, Space, Str, Tokenizer, Verdict,
};

/// Exact checks for tokenizers given as JSON specs.
#[derive(Parser)]
#[command(name = "tokcheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArgs {
    /// Tokenizer spec file
    spec: PathBuf,
    /// Truncation length, overriding the spec
    #[arg(long)]
    max_len: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exactness, classification and the consistency probe
    Check {
        #[command(flatten)]
        spec: SpecArgs,
        /// Print a JSON report instead of text
        #[arg(long)]
        json: bool,
        /// Random distributions tried by the probe
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every token sequence that decodes to a text
    Preimages {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        text: String,
    },
    /// Mass a token distribution assigns to a text after decoding
    Marginalize {
        #[command(flatten)]
        spec: SpecArgs,
        /// Distribution over token sequences
        dist: PathBuf,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        text: Option<String>,
        /// Report every text in the text space
        #[arg(long)]
        all: bool,
    },
    /// Sample, encode, decode, and track the distance to the source
    Simulate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Distribution over texts
        dist: PathBuf,
        /// Comma-separated sample counts
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<u64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the maximal munch transducer for the spec's vocabulary
    Transduce {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        text: String,
        /// Compare against the greedy encoder on every text up to this length
        #[arg(long)]
        verify_max_len: Option<usize>,
        /// Use this transducer document instead of building one
        #[arg(long)]
        transducer: Option<PathBuf>,
        /// Print the transducer document
        #[arg(long)]
        emit_transducer: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_spec(args: &SpecArgs) -> Result<TokenizerSpec> {
    Ok(TokenizerSpec::from_json(&read(&args.spec)?)?)
}

fn load_tokenizer(args: &SpecArgs) -> Result<Tokenizer> {
    Ok(load_spec(args)?.build(args.max_len)?)
}

fn verdict_json<W: Display>(v: &Verdict<W>) -> Value {
    match v {
        Verdict::Holds => json!({ "holds": true }),
        Verdict::Fails(w) => json!({ "holds": false, "witness": w.to_string() }),
        Verdict::NotApplicable(why) => json!({ "holds": null, "reason": why }),
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn check(spec: &SpecArgs, as_json: bool, trials: usize, seed: u64) -> Result<ExitCode> {
    let t = load_tokenizer(spec)?;
    let report = t.classify();
    let probe = t.exact_iff_all_consistent_probe(trials, seed)?;
    if as_json {
        let doc = json!({
            "exact": verdict_json(&report.exact),
            "deterministic_encoder": verdict_json(&report.deterministic_encoder),
            "deterministic_decoder": verdict_json(&report.deterministic_decoder),
            "bijective": verdict_json(&report.bijective),
            "multiplicative_decoder": verdict_json(&report.multiplicative_decoder),
            "trivial_kernel": verdict_json(&report.trivial_kernel),
            "prefix_monotone": verdict_json(&report.prefix_monotone),
            "consistent_for_all_probed": verdict_json(&probe),
            "notes": t.notes(),
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("exact: {}", report.exact);
        println!("deterministic encoder: {}", report.deterministic_encoder);
        println!("deterministic decoder: {}", report.deterministic_decoder);
        println!("bijective: {}", report.bijective);
        println!("multiplicative decoder: {}", report.multiplicative_decoder);
        println!("trivial kernel: {}", report.trivial_kernel);
        println!("prefix monotone: {}", report.prefix_monotone);
        println!("consistent for all probed distributions: {probe}");
        for note in t.notes() {
            println!("note: {note}");
        }
    }
    Ok(status(report.exact.holds()))
}

fn preimages(spec: &SpecArgs, text: &str) -> Result<ExitCode> {
    let t = load_tokenizer(spec)?;
    let sigma = Str::parse(t.decoded_space().alphabet(), text)?;
    for d in t.preimages(&sigma)? {
        println!("{d}");
    }
    // the empty text has exactly one preimage, the empty sequence
    let bound = if sigma.is_empty() {
        1
    } else {
        preimage_bound(sigma.len(), t.token_space().alphabet().len())
    };
    println!("bound: {bound}");
    Ok(ExitCode::SUCCESS)
}

fn marginalize(spec: &SpecArgs, dist: &Path, text: Option<&str>) -> Result<ExitCode> {
    let t = load_tokenizer(spec)?;
    let q = dist_from_json(&read(dist)?, t.token_space())?;
    match text {
        Some(text) => {
            let sigma = Str::parse(t.decoded_space().alphabet(), text)?;
            println!("{}", t.marginalize(&q, &sigma)?);
        }
        None => {
            let zero = ratio(0, 1);
            let mut total = zero.clone();
            for sigma in t.text_space().strings() {
                let mass = t.marginalize(&q, &sigma)?;
                if mass != zero {
                    println!("{sigma}\t{mass}");
                }
                total += mass;
            }
            println!("total: {total}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn simulate(spec: &SpecArgs, dist: &Path, schedule: Option<&[u64]>, seed: u64) -> Result<ExitCode> {
    let t = load_tokenizer(spec)?;
    let p = dist_from_json(&read(dist)?, t.text_space())?;
    let est = run_estimation(&t, &p, schedule.unwrap_or(&DEFAULT_SCHEDULE), seed)?;
    println!("n\ttv");
    for (n, tv) in est.rows() {
        println!("{n}\t{:.6}", tokcheck_core::rational::to_f64(&tv));
    }
    println!("bias: {}", est.bias);
    println!("converged: {}", est.converged());
    Ok(ExitCode::SUCCESS)
}

fn transduce(
    spec: &SpecArgs,
    text: &str,
    verify: Option<usize>,
    file: Option<&Path>,
    emit: bool,
) -> Result<ExitCode> {
    let vocab = load_spec(spec)?.require_vocab()?;
    let machine = match file {
        Some(path) => TransducerDoc::from_json(&read(path)?)?.to_transducer(vocab.chars(), vocab.tokens())?,
        None => build_maximal_munch_transducer(&vocab)?,
    };
    if emit {
        println!("{}", TransducerDoc::from_transducer(&machine).to_json());
    }
    let input = Str::parse(vocab.chars(), text)?;
    println!("output: {}", machine.run(&input)?);
    let Some(max_len) = verify else {
        return Ok(ExitCode::SUCCESS);
    };
    let verdict = equivalent_on(&machine, |s| maximal_munch_encode(&vocab, s), max_len);
    let checked = Space::truncated(vocab.chars(), max_len).size();
    println!("equivalent: {verdict}");
    if verdict.holds() {
        println!("checked: {checked} strings");
    }
    Ok(status(verdict.holds()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            spec,
            json,
            trials,
            seed,
        } => check(&spec, json, trials, seed),
        Command::Preimages { spec, text } => preimages(&spec, &text),
        Command::Marginalize { spec, dist, text, .. } => marginalize(&spec, &dist, text.as_deref()),
        Command::Simulate {
            spec,
            dist,
            schedule,
            seed,
        } => simulate(&spec, &dist, schedule.as_deref(), seed),
        Command::Transduce {
            spec,
            text,
            verify_max_len,
            transducer,
            emit_transducer,
        } => transduce(
            &spec,
            &text,
            verify_max_len,
            transducer.as_deref(),
            emit_transducer,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
