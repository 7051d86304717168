//! Subcommands. Every law check goes through [`run_check`], so a saved
//! counterexample can be replayed by `recheck`.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fugal_core::cat::{build_machine_from_monad, check_module_laws, check_ran_universal_property, ran_along, UniversalOutcome};
use fugal_core::finset::{render_letters, subset_label, FinMonoid, FinSet, Word};
use fugal_core::fugal::{fugal_extension, is_fugal, k_extend, verify_hk, verify_kh, Elem, Monoid, MonoidMealyMachine};
use fugal_core::guitart::{compose_spans, is_discrete_opfibration, pi_span, sigma_functor, translation_category, verify_pi_functoriality};
use fugal_core::intertwiner::{check_intertwiner, check_two_cell, compose_intertwiners};
use fugal_core::kleisli::{expand, lift_deterministic, run_nondeterministic};
use fugal_core::machines::{check_pipeline, compose_diamond, run_mealy, run_moore, MealyMachine};
use fugal_core::rel::{ran_reachability, verify_terminal, Mode, Rel};
use fugal_core::{Error as CoreError, Verdict};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::doc::{self, Counterexample, DocError, Document};
use crate::laws;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("usage: {0}")]
    Usage(String),
}

type Res<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Parser)]
#[command(name = "fugal", version, about = "Build, run and check finite machine models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Mealy or Moore machine on a word and print the output word.
    Run {
        machine: String,
        word: String,
        #[arg(long)]
        from: Option<String>,
    },
    /// Series composite: A's output feeds B.
    Compose {
        a: String,
        b: String,
        /// Run the composite on this word instead of printing it.
        #[arg(long)]
        run: Option<String>,
        /// Check the composite against piping on all words up to this length.
        #[arg(long)]
        check: Option<usize>,
    },
    /// Print a document in normal form.
    Show { document: String },
    /// Fugality of monoid machines and the free extension.
    #[command(subcommand)]
    Fugal(FugalCmd),
    /// Restrict and extend round trips through a finite monoid.
    #[command(subcommand)]
    Adjunction(AdjunctionCmd),
    /// Translation categories, spans and their composition.
    #[command(subcommand)]
    Guitart(GuitartCmd),
    /// Nondeterministic machines over the powerset monad.
    #[command(subcommand)]
    Kleisli(KleisliCmd),
    /// Machines in relations: behaviour and terminality.
    #[command(subcommand)]
    Rel(RelCmd),
    /// Machines in Set-valued functors: right Kan extensions.
    #[command(subcommand)]
    Cat(CatCmd),
    /// Check and paste intertwiners.
    #[command(subcommand)]
    Intertwiner(IntertwinerCmd),
    /// Replay a saved counterexample.
    Recheck { counterexample: String },
    /// Check every law on seeded random instances.
    Laws(LawsArgs),
}

#[derive(Debug, Subcommand)]
pub enum FugalCmd {
    /// Decide fugality (exhaustive for finite input, bounded for free input).
    Check {
        machine: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Tabulate the free extension of a set machine on all words up to a length.
    Extend {
        machine: String,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum AdjunctionCmd {
    /// Restrict-after-extend on a set machine, then extend-after-restrict.
    Roundtrip {
        machine: String,
        #[arg(long)]
        monoid: String,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GuitartCmd {
    /// Print the translation category of a machine's action.
    Translate { machine: String },
    /// Check that the output assignment is a functor.
    Sigma { machine: String },
    /// Compose the spans of two machines and summarise the apex.
    Compose { first: String, second: String },
    /// Compare the composite span with the span of the composite machine.
    Verify { first: String, second: String },
}

#[derive(Debug, Subcommand)]
pub enum KleisliCmd {
    /// A deterministic machine as a nondeterministic one.
    Lift { machine: String },
    /// The deterministic machine on subsets.
    Expand {
        machine: String,
        #[arg(long, default_value_t = 16)]
        limit: usize,
    },
    /// Run from a set of states, one step per letter.
    Run {
        machine: String,
        word: String,
        /// Comma-separated start states; defaults to the first state.
        #[arg(long)]
        from: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Moore,
    Mealy,
}

impl ModeArg {
    fn mode(self) -> Mode {
        match self {
            ModeArg::Moore => Mode::Moore,
            ModeArg::Mealy => Mode::Mealy,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum RelCmd {
    /// The terminal machine over an input relation and an output relation.
    Ran {
        input: String,
        output: String,
        #[arg(long, value_enum, default_value = "moore")]
        mode: ModeArg,
    },
    /// Certify a candidate (default: the computed one) as terminal.
    VerifyTerminal {
        input: String,
        output: String,
        #[arg(long)]
        candidate: Option<String>,
        #[arg(long, value_enum, default_value = "moore")]
        mode: ModeArg,
        /// Largest carrier, in bits, that may be enumerated.
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatCmd {
    /// Right extension of a set functor along an endofunctor.
    Ran {
        functor: String,
        output: String,
        #[arg(long, default_value_t = 1 << 20)]
        limit: u64,
    },
    /// The machines carried by the extension of a monad, with the module laws.
    Machine {
        monad: String,
        output: String,
        #[arg(long, default_value_t = 1 << 20)]
        limit: u64,
    },
    /// Count the mediators of a cone `gamma : E∘T ⇒ O`.
    VerifyUp {
        functor: String,
        output: String,
        states: String,
        gamma: String,
        #[arg(long, default_value_t = 1 << 20)]
        limit: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum IntertwinerCmd {
    /// Check an intertwiner or a two-cell.
    Check { document: String },
    /// Paste `first` (M → M') and `second` (M' → M'').
    Compose { first: String, second: String },
}

#[derive(Debug, Args)]
pub struct LawsArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Word-length bound for bounded checks.
    #[arg(long, default_value_t = 5)]
    pub len: usize,
    /// Random instances per law.
    #[arg(long, default_value_t = 50)]
    pub limit: usize,
}

/// What a command produced. On a failed law the text is a summary for
/// stderr and the counterexample document goes to stdout.
pub struct Outcome {
    pub text: String,
    pub failed: Option<Counterexample>,
}

impl Outcome {
    fn ok(text: impl Into<String>) -> Self {
        Outcome {
            text: text.into(),
            failed: None,
        }
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code: 0 success, 1 a law failed, 2 bad input or usage.
pub fn main_with(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(Outcome { text, failed: None }) => {
            let _ = write!(out, "{text}");
            0
        }
        Ok(Outcome { text, failed: Some(ce) }) => {
            let _ = write!(err, "{text}");
            let _ = writeln!(out, "{}", Document::Counterexample(ce).to_json());
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn execute(command: &Command) -> Res<Outcome> {
    match command {
        Command::Run { machine, word, from } => run(&doc::load(machine)?, word, from.as_deref()),
        Command::Compose { a, b, run: word, check } => {
            let (ma, mb) = (mealy(&doc::load(a)?, a)?, mealy(&doc::load(b)?, b)?);
            if let Some(bound) = check {
                return checked("pipeline", vec![Document::mealy(ma), Document::mealy(mb)], options(&[("bound", json!(bound))]));
            }
            let comp = compose_diamond(&mb, &ma)?;
            match word {
                Some(w) => run(&Document::mealy(comp), w, None),
                None => Ok(Outcome::ok(Document::mealy(comp).to_json() + "\n")),
            }
        }
        Command::Show { document } => Ok(Outcome::ok(doc::load(document)?.to_json() + "\n")),
        Command::Fugal(FugalCmd::Check { machine, bound }) => {
            checked("fugal", vec![doc::load(machine)?], options(&[("bound", json!(bound))]))
        }
        Command::Fugal(FugalCmd::Extend { machine, len }) => {
            let m = mealy(&doc::load(machine)?, machine)?;
            let ext = fugal_extension(&m);
            let mut text = String::new();
            for w in ext.input().elements_up_to(*len) {
                for e in ext.states().indices() {
                    let (next, o) = ext.eval(e, &w);
                    text += &format!(
                        "{} {} -> {} {}\n",
                        ext.states().label(e),
                        show_elem(ext.input(), &w),
                        ext.states().label(next),
                        show_elem(ext.output(), &o)
                    );
                }
            }
            Ok(Outcome::ok(text))
        }
        Command::Adjunction(AdjunctionCmd::Roundtrip { machine, monoid, bound }) => {
            let m = mealy(&doc::load(machine)?, machine)?;
            let n = doc::load(monoid)?;
            let hk = checked("hk", vec![Document::mealy(m.clone()), n.clone()], Map::new())?;
            if hk.failed.is_some() {
                return Ok(hk);
            }
            let target = finite_monoid(&n, monoid)?;
            let k = k_extend(&m, &target)?;
            let kh = checked("kh", vec![Document::MonoidMachine(k)], options(&[("bound", json!(bound))]))?;
            Ok(Outcome {
                text: hk.text + &kh.text,
                failed: kh.failed,
            })
        }
        Command::Guitart(cmd) => guitart(cmd),
        Command::Kleisli(cmd) => kleisli(cmd),
        Command::Rel(cmd) => rel(cmd),
        Command::Cat(cmd) => cat(cmd),
        Command::Intertwiner(IntertwinerCmd::Check { document }) => {
            checked("intertwiner", vec![doc::load(document)?], Map::new())
        }
        Command::Intertwiner(IntertwinerCmd::Compose { first, second }) => {
            let it1 = intertwiner(&doc::load(first)?, first)?;
            let it2 = intertwiner(&doc::load(second)?, second)?;
            let pasted = compose_intertwiners(&it2, &it1)?;
            Ok(Outcome::ok(Document::Intertwiner(pasted).to_json() + "\n"))
        }
        Command::Recheck { counterexample } => recheck(&doc::load(counterexample)?),
        Command::Laws(args) => {
            let report = laws::report(args.seed, args.len, args.limit);
            let failed = report.lines.iter().any(|l| l.starts_with("FAIL"));
            let text = report.lines.join("\n") + "\n";
            Ok(Outcome {
                text,
                failed: failed.then(|| Counterexample {
                    check: "laws".into(),
                    subjects: Vec::new(),
                    options: options(&[("seed", json!(args.seed)), ("len", json!(args.len)), ("limit", json!(args.limit))]),
                    witness: report.lines.iter().find(|l| l.starts_with("FAIL")).cloned().unwrap_or_default(),
                }),
            })
        }
    }
}

fn options(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn show_elem(m: &Monoid, x: &Elem) -> String {
    match (m, x) {
        (Monoid::Free(_), Elem::Word(w)) if w.is_empty() => "ε".into(),
        (Monoid::Free(h), Elem::Word(w)) => render_letters(h.generators(), w),
        _ => m.render(x),
    }
}

// ---------------------------------------------------------------------------
// Document coercions

fn mealy(d: &Document, name: &str) -> Res<MealyMachine> {
    match d {
        Document::Mealy { machine, .. } => Ok(machine.clone()),
        other => usage(format!("`{name}` is a `{}` document, expected `mealy`", other.kind())),
    }
}

fn monoid_machine(d: &Document, name: &str) -> Res<MonoidMealyMachine> {
    match d {
        Document::MonoidMachine(m) => Ok(m.clone()),
        other => usage(format!("`{name}` is a `{}` document, expected `monoid-machine`", other.kind())),
    }
}

fn finite_monoid(d: &Document, name: &str) -> Res<FinMonoid> {
    match d {
        Document::Monoid { monoid: Monoid::Finite(m), .. } => Ok(m.clone()),
        Document::Monoid { .. } => usage(format!("`{name}` must be a finite monoid")),
        other => usage(format!("`{name}` is a `{}` document, expected `monoid`", other.kind())),
    }
}

fn relation(d: &Document, name: &str) -> Res<Rel> {
    match d {
        Document::Relation(r) => Ok(r.clone()),
        other => usage(format!("`{name}` is a `{}` document, expected `relation`", other.kind())),
    }
}

fn intertwiner(d: &Document, name: &str) -> Res<fugal_core::intertwiner::Intertwiner> {
    match d {
        Document::Intertwiner(it) => Ok(it.clone()),
        other => usage(format!("`{name}` is a `{}` document, expected `intertwiner`", other.kind())),
    }
}

macro_rules! coerce {
    ($d:expr, $name:expr, $variant:ident, $kind:literal) => {
        match $d {
            Document::$variant(x) => Ok(x.clone()),
            other => usage(format!("`{}` is a `{}` document, expected `{}`", $name, other.kind(), $kind)),
        }
    };
}

// ---------------------------------------------------------------------------
// Words

/// Reads a word the way words are printed: juxtaposed single-character
/// labels, or a comma-separated list (optionally bracketed).
pub fn parse_word(alphabet: &FinSet, text: &str) -> Res<Word> {
    let inner = text.strip_prefix('[').and_then(|t| t.strip_suffix(']'));
    let short = alphabet.elements().iter().all(|l| l.chars().count() == 1);
    let labels: Vec<String> = match inner {
        Some(inner) => split_list(inner),
        None if text.contains(',') || !short => split_list(text),
        None => text.chars().map(String::from).collect(),
    };
    Ok(Word::from_labels(alphabet.clone(), labels)?)
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn run(d: &Document, word: &str, from: Option<&str>) -> Res<Outcome> {
    let start = |states: &FinSet, default: usize| -> Res<usize> {
        match from {
            None => Ok(default),
            Some(label) => Ok(states.require(label)?),
        }
    };
    let out = match d {
        Document::Mealy { machine, start: s } => {
            let w = parse_word(machine.input(), word)?;
            run_mealy(machine, start(machine.states(), *s)?, &w)?.1
        }
        Document::Moore { machine, start: s } => {
            let w = parse_word(machine.input(), word)?;
            run_moore(machine, start(machine.states(), *s)?, &w)?.1
        }
        other => return usage(format!("cannot run a `{}` document", other.kind())),
    };
    Ok(Outcome::ok(format!("{out}\n")))
}

// ---------------------------------------------------------------------------
// Checks

/// Runs the named check. Returns informational lines and the verdict.
pub fn run_check(check: &str, subjects: &[Document], opts: &Map<String, Value>) -> Res<(Vec<String>, Verdict<String>)> {
    let opt_usize = |key: &str, default: usize| -> Res<usize> {
        match opts.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| CliError::Usage(format!("option `{key}` must be a non-negative integer"))),
        }
    };
    let mode = || -> Res<Mode> {
        match opts.get("mode").and_then(Value::as_str) {
            None | Some("moore") => Ok(Mode::Moore),
            Some("mealy") => Ok(Mode::Mealy),
            Some(other) => usage(format!("unknown mode `{other}`")),
        }
    };
    let arity = |n: usize| -> Res<()> {
        if subjects.len() == n {
            Ok(())
        } else {
            usage(format!("check `{check}` takes {n} subjects, got {}", subjects.len()))
        }
    };
    let text = |v: Verdict<String>| (Vec::new(), v);
    Ok(match check {
        "fugal" => {
            arity(1)?;
            let m = match &subjects[0] {
                Document::Mealy { machine, .. } => fugal_extension(machine),
                other => monoid_machine(other, "subject")?,
            };
            let bound = opt_usize("bound", 4)?;
            let w = is_fugal(&m, m.input().is_free().then_some(bound))?;
            text(w.verdict.map(|v| v.to_string()))
        }
        "sigma" => {
            arity(1)?;
            let m = monoid_machine(&subjects[0], "subject")?;
            text(sigma_functor(&m)?.verdict.map(|v| v.to_string()))
        }
        "pi" => {
            arity(2)?;
            let (m1, m2) = (monoid_machine(&subjects[0], "first")?, monoid_machine(&subjects[1], "second")?);
            text(verify_pi_functoriality(&m1, &m2)?.map(|v| v.to_string()))
        }
        "hk" => {
            arity(2)?;
            let m = mealy(&subjects[0], "machine")?;
            let target = finite_monoid(&subjects[1], "monoid")?;
            text(verify_hk(&m, &target)?.map(|v| v.to_string()))
        }
        "kh" => {
            arity(1)?;
            let m = monoid_machine(&subjects[0], "subject")?;
            text(verify_kh(&m, opt_usize("bound", 4)?)?.map(|v| v.to_string()))
        }
        "pipeline" => {
            arity(2)?;
            let (a, b) = (mealy(&subjects[0], "first")?, mealy(&subjects[1], "second")?);
            let v = check_pipeline(&b, &a, opt_usize("bound", 4)?)?;
            text(v.map(|(state, w)| format!("from {state} on `{}`", render_letters(a.input(), &w))))
        }
        "intertwiner" => {
            arity(1)?;
            match &subjects[0] {
                Document::Intertwiner(it) => text(check_intertwiner(it).map(|v| v.to_string())),
                Document::TwoCell(tc) => text(check_two_cell(tc).map(|v| v.to_string())),
                other => return usage(format!("cannot check a `{}` document as an intertwiner", other.kind())),
            }
        }
        "terminal" => {
            arity(3)?;
            let (r, i, o) = (
                relation(&subjects[0], "candidate")?,
                relation(&subjects[1], "input")?,
                relation(&subjects[2], "output")?,
            );
            let report = verify_terminal(&r, &i, &o, mode()?, opt_usize("limit", 20)?)?;
            (
                vec![format!("machines below the output: {}", report.machines)],
                report.verdict.map(|v| v.to_string()),
            )
        }
        "universal" => {
            arity(4)?;
            let t = coerce!(&subjects[0], "functor", Functor, "functor")?;
            let o = coerce!(&subjects[1], "output", SetFunctor, "set-functor")?;
            let e = coerce!(&subjects[2], "states", SetFunctor, "set-functor")?;
            let gamma = coerce!(&subjects[3], "gamma", NatTrans, "nat-trans")?;
            let outcome = check_ran_universal_property(&t, &o, &e, &gamma, opt_usize("limit", 1 << 20)? as u64)?;
            let verdict = match outcome {
                UniversalOutcome::UniqueMediator(_) => Verdict::Holds,
                other => Verdict::Fails(other.to_string()),
            };
            text(verdict)
        }
        "modules" => {
            arity(2)?;
            let monad = coerce!(&subjects[0], "monad", Monad, "monad")?;
            let o = coerce!(&subjects[1], "output", SetFunctor, "set-functor")?;
            let t = monad.functor();
            let c = t.dom();
            let kappa: Vec<usize> = c.objects().indices().map(|x| c.id(t.obj(x))).collect();
            let (ran, moore, _) = build_machine_from_monad(&monad, &o, t, &kappa, opt_usize("limit", 1 << 20)? as u64)?;
            let notes = c
                .objects()
                .indices()
                .map(|x| format!("states at {}: {}", c.objects().label(x), ran.functor().set(x).len()))
                .collect();
            (notes, check_module_laws(&moore, &monad)?)
        }
        other => return usage(format!("unknown check `{other}`")),
    })
}

fn checked(check: &str, subjects: Vec<Document>, opts: Map<String, Value>) -> Res<Outcome> {
    let (notes, verdict) = run_check(check, &subjects, &opts)?;
    let mut text: String = notes.iter().map(|n| format!("{n}\n")).collect();
    match verdict {
        Verdict::Holds => {
            text += &format!("{check}: holds\n");
            Ok(Outcome::ok(text))
        }
        Verdict::Fails(witness) => {
            text += &format!("{check}: fails at {witness}\n");
            Ok(Outcome {
                text,
                failed: Some(Counterexample {
                    check: check.into(),
                    subjects,
                    options: opts,
                    witness,
                }),
            })
        }
    }
}

/// Exit 0 when the stored witness is reproduced exactly.
fn recheck(d: &Document) -> Res<Outcome> {
    let Document::Counterexample(ce) = d else {
        return usage(format!("expected a `counterexample` document, found `{}`", d.kind()));
    };
    if ce.check == "laws" {
        let opt = |k: &str| ce.options.get(k).and_then(Value::as_u64).unwrap_or(0);
        let report = laws::report(opt("seed"), opt("len") as usize, opt("limit") as usize);
        let again = report.lines.iter().find(|l| l.starts_with("FAIL")).cloned().unwrap_or_default();
        return Ok(reproduced(ce, (again == ce.witness).then_some(again)));
    }
    let (_, verdict) = run_check(&ce.check, &ce.subjects, &ce.options)?;
    Ok(reproduced(ce, verdict.counterexample().filter(|w| **w == ce.witness).cloned()))
}

fn reproduced(ce: &Counterexample, found: Option<String>) -> Outcome {
    match found {
        Some(w) => Outcome::ok(format!("reproduced: {}: fails at {w}\n", ce.check)),
        None => Outcome {
            text: format!("not reproduced: {}: expected {}\n", ce.check, ce.witness),
            failed: Some(ce.clone()),
        },
    }
}

// ---------------------------------------------------------------------------
// Command groups

fn guitart(cmd: &GuitartCmd) -> Res<Outcome> {
    match cmd {
        GuitartCmd::Translate { machine } => {
            let m = monoid_machine(&doc::load(machine)?, machine)?;
            let Monoid::Finite(input) = m.input() else {
                return usage("translation categories need a finite input monoid");
            };
            let act: Vec<usize> = m
                .states()
                .indices()
                .flat_map(|e| input.carrier().indices().map(move |x| (e, x)))
                .map(|(e, x)| m.act(e, &Elem::Fin(x)))
                .collect();
            let (cat, proj) = translation_category(m.states(), input, &act)?;
            let mut text = Document::Category(cat).to_json() + "\n";
            text += &format!("discrete opfibration: {}\n", verdict_word(&is_discrete_opfibration(&proj)));
            Ok(Outcome::ok(text))
        }
        GuitartCmd::Sigma { machine } => checked("sigma", vec![doc::load(machine)?], Map::new()),
        GuitartCmd::Compose { first, second } => {
            let m1 = monoid_machine(&doc::load(first)?, first)?;
            let m2 = monoid_machine(&doc::load(second)?, second)?;
            let z = compose_spans(&pi_span(&m1)?, &pi_span(&m2)?)?;
            Ok(Outcome::ok(format!(
                "apex: {} objects, {} morphisms\nleft leg discrete opfibration: {}\n",
                z.apex().objects().len(),
                z.apex().morphisms().len(),
                verdict_word(&is_discrete_opfibration(z.left()))
            )))
        }
        GuitartCmd::Verify { first, second } => checked("pi", vec![doc::load(first)?, doc::load(second)?], Map::new()),
    }
}

fn verdict_word<W>(v: &Verdict<W>) -> &'static str {
    if v.holds() {
        "yes"
    } else {
        "no"
    }
}

fn kleisli(cmd: &KleisliCmd) -> Res<Outcome> {
    match cmd {
        KleisliCmd::Lift { machine } => {
            let m = mealy(&doc::load(machine)?, machine)?;
            Ok(Outcome::ok(Document::NondetMealy(lift_deterministic(&m)).to_json() + "\n"))
        }
        KleisliCmd::Expand { machine, limit } => {
            let n = coerce!(&doc::load(machine)?, machine, NondetMealy, "nondet-mealy")?;
            Ok(Outcome::ok(Document::mealy(expand(&n, *limit)?).to_json() + "\n"))
        }
        KleisliCmd::Run { machine, word, from } => {
            let n = coerce!(&doc::load(machine)?, machine, NondetMealy, "nondet-mealy")?;
            let start = match from {
                None if n.states().is_empty() => Vec::new(),
                None => vec![0],
                Some(list) => split_list(list)
                    .iter()
                    .map(|l| n.states().require(l))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let w = parse_word(n.input(), word)?;
            let mask = |xs: &[usize]| xs.iter().fold(0usize, |m, &i| m | 1 << i);
            let mut text = String::new();
            for (states, out) in run_nondeterministic(&n, &start, &w)? {
                text += &format!("{} {}\n", subset_label(n.output(), mask(&out)), subset_label(n.states(), mask(&states)));
            }
            Ok(Outcome::ok(text))
        }
    }
}

fn rel(cmd: &RelCmd) -> Res<Outcome> {
    match cmd {
        RelCmd::Ran { input, output, mode } => {
            let (i, o) = (relation(&doc::load(input)?, input)?, relation(&doc::load(output)?, output)?);
            let r = ran_reachability(&i, &o, mode.mode())?;
            Ok(Outcome::ok(Document::Relation(r).to_json() + "\n"))
        }
        RelCmd::VerifyTerminal {
            input,
            output,
            candidate,
            mode,
            limit,
        } => {
            let (i, o) = (relation(&doc::load(input)?, input)?, relation(&doc::load(output)?, output)?);
            let r = match candidate {
                Some(c) => relation(&doc::load(c)?, c)?,
                None => ran_reachability(&i, &o, mode.mode())?,
            };
            let mode_name = match mode {
                ModeArg::Moore => "moore",
                ModeArg::Mealy => "mealy",
            };
            checked(
                "terminal",
                vec![Document::Relation(r), Document::Relation(i), Document::Relation(o)],
                options(&[("mode", json!(mode_name)), ("limit", json!(limit))]),
            )
        }
    }
}

fn cat(cmd: &CatCmd) -> Res<Outcome> {
    match cmd {
        CatCmd::Ran { functor, output, limit } => {
            let t = coerce!(&doc::load(functor)?, functor, Functor, "functor")?;
            let o = coerce!(&doc::load(output)?, output, SetFunctor, "set-functor")?;
            let ran = ran_along(&t, &o, *limit)?;
            Ok(Outcome::ok(Document::SetFunctor(ran.functor().clone()).to_json() + "\n"))
        }
        CatCmd::Machine { monad, output, limit } => checked(
            "modules",
            vec![doc::load(monad)?, doc::load(output)?],
            options(&[("limit", json!(limit))]),
        ),
        CatCmd::VerifyUp {
            functor,
            output,
            states,
            gamma,
            limit,
        } => checked(
            "universal",
            vec![doc::load(functor)?, doc::load(output)?, doc::load(states)?, doc::load(gamma)?],
            options(&[("limit", json!(limit))]),
        ),
    }
}
