use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use dessin_core::dessin::{
    enumerate_by_passport, Dessin, DessinError, Passport, DEFAULT_ENUM_DEGREE_CAP,
};
use dessin_core::fpgroup::{coset_enumerate, FpError, Presentation, DEFAULT_COSET_CAP};
use dessin_core::group::DEFAULT_ELEMENT_CAP;
use dessin_core::moduli::{
    distinguishing_witness, kernels_equal, orbit_report, subdirect_order, ModuliError, OrbitReport,
    Side, DEFAULT_WITNESS_BUDGET,
};
use dessin_core::triangle::{
    find_inclusion, is_maximal, normal_in_supergroup, TriangleError, TriangleType,
};
use dessin_core::word::{Word, WordError};

use crate::datasets;
use crate::dot::export_dot;
use crate::format::{parse_dessin, write_dessin, FormatError};

/// Environment variable overriding the default element and coset caps.
pub const CAP_ENV: &str = "DESSIN_CAP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("unknown dataset @{name} (available: {})", datasets::NAMES.join(", "))]
    UnknownDataset { name: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Dessin(#[from] DessinError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
    #[error(transparent)]
    Triangle(#[from] TriangleError),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable text.
    Plain,
    /// One `key=value` pair per line.
    Records,
}

#[derive(Debug, Parser)]
#[command(
    name = "dessin",
    version,
    about = "Dessins d'enfants as permutation pairs",
    after_help = "FILE arguments are dessin files or bundled datasets: @h0 @h1 @h2 @f @e0 @e1 @e2.\n\
                  DESSIN_CAP overrides the default element and coset caps."
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree, passport, genus, monodromy order and regularity.
    Info { file: String },
    /// Regular cover.
    Cover {
        file: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Regular cover, its centre, and the central quotient.
    QuotientCenter {
        file: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Isomorphism test.
    Iso { a: String, b: String },
    /// Kernel (regular cover) comparison.
    Kernels {
        a: String,
        b: String,
        /// Search for a distinguishing word.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = DEFAULT_WITNESS_BUDGET)]
        budget: u64,
    },
    /// Pairwise comparison of several dessins.
    Orbit {
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = DEFAULT_WITNESS_BUDGET)]
        budget: u64,
    },
    /// All dessins with a passport, up to isomorphism.
    Enum {
        /// Cycle types `PX|PY|PZ`, e.g. "2^2 1^2|3 2 1|6".
        #[arg(long)]
        passport: String,
        #[arg(long)]
        genus: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_ENUM_DEGREE_CAP)]
        cap_degree: usize,
    },
    /// Evaluates a word in x, y under a dessin.
    WordEval { file: String, word: String },
    /// Coset enumeration of the normal closure of relators.
    CosetEnum {
        /// Comma-separated relators, e.g. "x^3,y^2,[x,x^y]".
        #[arg(long)]
        relators: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Maximality of a triangle type.
    Maximal {
        /// Triangle type p,q,r.
        #[arg(long = "type")]
        ty: String,
    },
    /// Normality of a regular dessin's kernel in a larger triangle group.
    Normality {
        file: String,
        /// `sub:super`, e.g. "6,4,6:6,8,2".
        #[arg(long)]
        inclusion: String,
    },
    /// Graphviz rendering of the bipartite map.
    ExportDot {
        file: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Result of running the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `argv` (including the program name).
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut out = Out {
        format: cli.format,
        text: String::new(),
    };
    match run(cli.command, &mut out) {
        Ok(()) => Outcome {
            code: 0,
            stdout: out.text,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: out.text,
            stderr: format!("error: {e}\n"),
        },
    }
}

struct Out {
    format: Format,
    text: String,
}

impl Out {
    fn plain(&self) -> bool {
        self.format == Format::Plain
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn kv(&mut self, key: impl AsRef<str>, value: impl std::fmt::Display) {
        writeln!(self.text, "{}={}", key.as_ref(), value).unwrap();
    }
}

fn env_cap() -> Result<Option<u64>, CliError> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            CliError::Usage(format!("{CAP_ENV} must be a positive integer, got {v:?}"))
        }),
        Err(_) => Ok(None),
    }
}

fn element_cap(flag: Option<u64>) -> Result<u64, CliError> {
    Ok(flag.or(env_cap()?).unwrap_or(DEFAULT_ELEMENT_CAP))
}

/// Reads a dessin from a file, or a bundled dataset written `@name`.
pub fn load(arg: &str) -> Result<Dessin, CliError> {
    if let Some(name) = arg.strip_prefix('@') {
        return datasets::bundled(name).ok_or_else(|| CliError::UnknownDataset {
            name: name.to_owned(),
        });
    }
    let text = std::fs::read_to_string(arg).map_err(|source| CliError::Io {
        path: arg.to_owned(),
        source,
    })?;
    let d = parse_dessin(&text).map_err(|source| CliError::Format {
        path: arg.to_owned(),
        source,
    })?;
    if d.name().is_some() {
        return Ok(d);
    }
    let stem = Path::new(arg)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_owned());
    Ok(d.with_name(stem))
}

fn save(path: &Path, d: &Dessin) -> Result<(), CliError> {
    std::fs::write(path, write_dessin(d)).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn label(d: &Dessin) -> &str {
    d.name().unwrap_or("dessin")
}

fn parse_word(text: &str) -> Result<Word, CliError> {
    text.parse()
        .map_err(|e: WordError| CliError::Usage(format!("word {text:?}: {e}")))
}

fn run(cmd: Command, out: &mut Out) -> Result<(), CliError> {
    match cmd {
        Command::Info { file } => info(&load(&file)?, out),
        Command::Cover { file, output, cap } => {
            let d = load(&file)?;
            let cover = d.regular_cover(element_cap(cap)?)?;
            summary("cover", &cover, out)?;
            if let Some(path) = output {
                save(&path, &cover)?;
            }
            Ok(())
        }
        Command::QuotientCenter { file, output, cap } => {
            let d = load(&file)?;
            let cap = element_cap(cap)?;
            let cover = d.regular_cover(cap)?;
            let centre = cover
                .monodromy_group()
                .center(cap)
                .map_err(DessinError::from)?;
            let q = cover.quotient_by_central(&centre)?;
            summary("cover", &cover, out)?;
            if out.plain() {
                out.line(format!("centre order {}", centre.len()));
            } else {
                out.kv("centre.order", centre.len());
            }
            summary("quotient", &q, out)?;
            if let Some(path) = output {
                save(&path, &q)?;
            }
            Ok(())
        }
        Command::Iso { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let iso = a.isomorphism_to(&b);
            match (&iso, out.plain()) {
                (Some(map), true) => out.line(format!(
                    "{} and {} are isomorphic via {map}",
                    label(&a),
                    label(&b)
                )),
                (None, true) => out.line(format!(
                    "{} and {} are not isomorphic",
                    label(&a),
                    label(&b)
                )),
                (Some(map), false) => {
                    out.kv("isomorphic", true);
                    out.kv("map", map);
                }
                (None, false) => out.kv("isomorphic", false),
            }
            Ok(())
        }
        Command::Kernels {
            a,
            b,
            witness,
            budget,
        } => kernels(&load(&a)?, &load(&b)?, witness, budget, out),
        Command::Orbit {
            files,
            witness,
            budget,
        } => {
            let ds = files
                .iter()
                .map(|f| load(f))
                .collect::<Result<Vec<_>, _>>()?;
            let report = orbit_report(&ds, witness.then_some(budget))?;
            render_report(&report, out);
            Ok(())
        }
        Command::Enum {
            passport,
            genus,
            cap_degree,
        } => {
            let pp: Passport = passport
                .parse()
                .map_err(|e: DessinError| CliError::Usage(e.to_string()))?;
            let found: Vec<Dessin> = enumerate_by_passport(&pp, cap_degree)?
                .into_iter()
                .filter(|d| genus.is_none_or(|g| d.genus() == g))
                .enumerate()
                .map(|(i, d)| d.with_name(format!("d{}", i + 1)))
                .collect();
            if out.plain() {
                out.line(format!("passport {pp}: {} dessins", found.len()));
            } else {
                out.kv("passport", &pp);
                out.kv("count", found.len());
            }
            for d in &found {
                let g = d.monodromy_group();
                if out.plain() {
                    out.line(format!(
                        "{}: x = {}, y = {}, genus {}, monodromy order {}{}",
                        label(d),
                        d.sigma_x(),
                        d.sigma_y(),
                        d.genus(),
                        g.order(),
                        if g.is_full_symmetric() {
                            " (full symmetric)"
                        } else {
                            ""
                        }
                    ));
                } else {
                    let k = label(d).to_owned();
                    out.kv(format!("{k}.x"), d.sigma_x());
                    out.kv(format!("{k}.y"), d.sigma_y());
                    out.kv(format!("{k}.genus"), d.genus());
                    out.kv(format!("{k}.monodromy_order"), g.order());
                    out.kv(format!("{k}.full_symmetric"), g.is_full_symmetric());
                }
            }
            Ok(())
        }
        Command::WordEval { file, word } => {
            let d = load(&file)?;
            let w = parse_word(&word)?;
            let value = w.evaluate(d.sigma_x(), d.sigma_y())?;
            if out.plain() {
                out.line(format!("{}({w}) = {value}", label(&d)));
            } else {
                out.kv("word", &w);
                out.kv("value", &value);
                out.kv("identity", value.is_identity());
            }
            Ok(())
        }
        Command::CosetEnum { relators, cap } => {
            let words = split_top_level(&relators)
                .into_iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_word(&s))
                .collect::<Result<Vec<_>, _>>()?;
            let cap = match cap {
                Some(c) => c,
                None => env_cap()?.map_or(DEFAULT_COSET_CAP, |c| c as usize),
            };
            let action = coset_enumerate(&Presentation::new(words).with_cap(cap))?;
            if out.plain() {
                out.line(format!("index {}", action.index()));
                out.line(format!("x {}", action.sigma_x));
                out.line(format!("y {}", action.sigma_y));
            } else {
                out.kv("index", action.index());
                out.kv("x", &action.sigma_x);
                out.kv("y", &action.sigma_y);
            }
            Ok(())
        }
        Command::Maximal { ty } => {
            let t: TriangleType = ty
                .parse()
                .map_err(|e: TriangleError| CliError::Usage(e.to_string()))?;
            let (maximal, found) = is_maximal(t)?;
            if out.plain() {
                if maximal {
                    out.line(format!("{t} is maximal"));
                } else {
                    out.line(format!("{t} is not maximal"));
                }
                for inc in &found {
                    let images = inc
                        .images
                        .as_ref()
                        .map(|(a, b)| format!(": x -> {a}, y -> {b}"))
                        .unwrap_or_default();
                    out.line(format!(
                        "  {} < {} index {}{images}",
                        inc.sub, inc.over, inc.index
                    ));
                }
            } else {
                out.kv("type", t);
                out.kv("maximal", maximal);
                for (k, inc) in found.iter().enumerate() {
                    out.kv(format!("inclusion.{k}.super"), inc.over);
                    out.kv(format!("inclusion.{k}.index"), inc.index);
                }
            }
            Ok(())
        }
        Command::Normality { file, inclusion } => {
            let d = load(&file)?;
            let (sub, over) = inclusion.split_once(':').ok_or_else(|| {
                CliError::Usage(format!(
                    "--inclusion must be `sub:super`, got {inclusion:?}"
                ))
            })?;
            let parse = |s: &str| {
                s.parse::<TriangleType>()
                    .map_err(|e| CliError::Usage(e.to_string()))
            };
            let (sub, over) = (parse(sub)?, parse(over)?);
            let inc = find_inclusion(sub, over)?.ok_or_else(|| {
                CliError::Usage(format!("no inclusion {sub} < {over} in the table"))
            })?;
            let normal = normal_in_supergroup(&d, &inc)?;
            if out.plain() {
                let verdict = if normal { "normal" } else { "not normal" };
                out.line(format!(
                    "kernel of {} is {verdict} in Δ{over} (via Δ{sub}, index {})",
                    label(&d),
                    inc.index
                ));
                for c in &inc.conjugations {
                    out.line(format!(
                        "  conjugation by {}: x -> {}, y -> {}",
                        c.rep, c.image_x, c.image_y
                    ));
                }
            } else {
                out.kv("normal", normal);
                out.kv("sub", sub);
                out.kv("super", over);
            }
            Ok(())
        }
        Command::ExportDot { file, output } => {
            let text = export_dot(&load(&file)?);
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => out.text.push_str(&text),
            }
            Ok(())
        }
    }
}

fn info(d: &Dessin, out: &mut Out) -> Result<(), CliError> {
    let g = d.monodromy_group();
    let regular = g.order() == d.degree() as u64;
    if out.plain() {
        out.line(format!(
            "{}: degree {}, genus {}, monodromy order {}",
            label(d),
            d.degree(),
            d.genus(),
            g.order()
        ));
        out.line(format!("passport {}", d.passport()));
        if regular {
            out.line(format!("regular, type {}", d.type_of_regular()?));
        } else {
            out.line("not regular");
        }
    } else {
        let pp = d.passport();
        out.kv("name", label(d));
        out.kv("degree", d.degree());
        out.kv("genus", d.genus());
        out.kv("monodromy_order", g.order());
        out.kv("passport.x", &pp.x);
        out.kv("passport.y", &pp.y);
        out.kv("passport.z", &pp.z);
        out.kv("regular", regular);
        if regular {
            out.kv("type", d.type_of_regular()?);
        }
    }
    Ok(())
}

fn summary(key: &str, d: &Dessin, out: &mut Out) -> Result<(), CliError> {
    let ty = d.type_of_regular()?;
    if out.plain() {
        out.line(format!(
            "{key}: degree {}, genus {}, euler characteristic {}, type {ty}",
            d.degree(),
            d.genus(),
            d.euler_characteristic()
        ));
    } else {
        out.kv(format!("{key}.degree"), d.degree());
        out.kv(format!("{key}.genus"), d.genus());
        out.kv(
            format!("{key}.euler_characteristic"),
            d.euler_characteristic(),
        );
        out.kv(format!("{key}.type"), ty);
    }
    Ok(())
}

fn kernels(
    a: &Dessin,
    b: &Dessin,
    witness: bool,
    budget: u64,
    out: &mut Out,
) -> Result<(), CliError> {
    let equal = kernels_equal(a, b);
    let k = subdirect_order(a, b);
    let (oa, ob) = (a.monodromy_group().order(), b.monodromy_group().order());
    let (na, nb) = (label(a), label(b));
    if out.plain() {
        let verdict = if equal { "equal" } else { "distinct" };
        out.line(format!(
            "kernels of {na} and {nb} are {verdict} (subdirect order {k}; monodromy orders {oa}, {ob})"
        ));
    } else {
        out.kv("kernels_equal", equal);
        out.kv("subdirect_order", &k);
        out.kv(format!("{na}.monodromy_order"), &oa);
        out.kv(format!("{nb}.monodromy_order"), &ob);
    }
    if !witness {
        return Ok(());
    }
    if let Some(w) = distinguishing_witness(a, b, budget)? {
        let (t, o) = match w.trivial_on {
            Side::First => (na, nb),
            Side::Second => (nb, na),
        };
        if out.plain() {
            out.line(format!("witness w = {}", w.word));
            out.line(format!("  {t}(w) = ()"));
            out.line(format!("  {o}(w) = {}", w.image));
        } else {
            out.kv("witness", &w.word);
            out.kv("witness.trivial_on", t);
            out.kv("witness.image", &w.image);
        }
    }
    // The bundled word is evaluated for every pair, as a fixed reference.
    let g = parse_word(datasets::witness_word())?;
    let ga = g.evaluate(a.sigma_x(), a.sigma_y())?;
    let gb = g.evaluate(b.sigma_x(), b.sigma_y())?;
    if out.plain() {
        out.line(format!("bundled witness g = {}", datasets::witness_word()));
        out.line(format!("  {na}(g) = {ga}"));
        out.line(format!("  {nb}(g) = {gb}"));
    } else {
        out.kv("bundled_witness", datasets::witness_word());
        out.kv(format!("bundled_witness.{na}"), &ga);
        out.kv(format!("bundled_witness.{nb}"), &gb);
    }
    Ok(())
}

fn render_report(r: &OrbitReport, out: &mut Out) {
    let names = r.names();
    let opt = |v: Option<u64>| v.map_or("unknown".to_owned(), |g| g.to_string());
    if out.plain() {
        for e in &r.entries {
            out.line(format!(
                "{}: degree {}, passport {}, genus {}, monodromy order {}{}, cover degree {}, cover genus {}",
                e.name,
                e.degree,
                e.passport,
                e.genus,
                e.monodromy_order,
                if e.full_symmetric { " (full symmetric)" } else { "" },
                e.cover_degree,
                opt(e.cover_genus)
            ));
        }
        let width = names.iter().map(|n| n.len()).max().unwrap_or(1).max(3);
        for (title, m) in [
            ("isomorphic", &r.isomorphic),
            ("kernels equal", &r.kernels_equal),
        ] {
            out.line(format!("{title}:"));
            let mut header = format!("  {:width$}", "");
            for n in &names {
                write!(header, " {n:>width$}").unwrap();
            }
            out.line(header);
            for (i, n) in names.iter().enumerate() {
                let mut row = format!("  {n:width$}");
                for v in &m[i] {
                    write!(row, " {:>width$}", if *v { "yes" } else { "no" }).unwrap();
                }
                out.line(row);
            }
        }
        out.line(if r.pairwise_distinct() {
            "all kernels pairwise distinct"
        } else {
            "some kernels coincide"
        });
        for (i, j, w) in &r.witnesses {
            let t = match w.trivial_on {
                Side::First => names[*i],
                Side::Second => names[*j],
            };
            out.line(format!(
                "witness {}/{}: {} (trivial on {t})",
                names[*i], names[*j], w.word
            ));
        }
    } else {
        for (k, e) in r.entries.iter().enumerate() {
            out.kv(format!("dessin.{k}.name"), &e.name);
            out.kv(format!("dessin.{k}.degree"), e.degree);
            out.kv(format!("dessin.{k}.passport"), &e.passport);
            out.kv(format!("dessin.{k}.genus"), e.genus);
            out.kv(format!("dessin.{k}.monodromy_order"), &e.monodromy_order);
            out.kv(format!("dessin.{k}.full_symmetric"), e.full_symmetric);
            out.kv(format!("dessin.{k}.cover_degree"), &e.cover_degree);
            out.kv(format!("dessin.{k}.cover_genus"), opt(e.cover_genus));
        }
        let n = names.len();
        for i in 0..n {
            for j in 0..n {
                out.kv(format!("isomorphic.{i}.{j}"), r.isomorphic[i][j]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                out.kv(format!("kernels_equal.{i}.{j}"), r.kernels_equal[i][j]);
            }
        }
        out.kv("pairwise_distinct", r.pairwise_distinct());
        for (i, j, w) in &r.witnesses {
            out.kv(format!("witness.{i}.{j}"), &w.word);
        }
    }
}

/// Splits at commas outside brackets and parentheses.
pub fn split_top_level(text: &str) -> Vec<String> {
    let mut parts = vec![String::new()];
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(String::new());
                continue;
            }
            _ => {}
        }
        parts.last_mut().unwrap().push(c);
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_relators() {
        assert_eq!(
            split_top_level("x^3,y^2,[x,x^y]"),
            vec!["x^3", "y^2", "[x,x^y]"]
        );
        assert_eq!(split_top_level("(x,y"), vec!["(x,y"]);
        assert_eq!(split_top_level(""), vec![""]);
    }
}
