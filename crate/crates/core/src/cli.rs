//! Command-line front end. Every command reads a fixture, calls into the
//! library and formats the result; `--report` switches to `key=value` lines.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use crate::blowup::{blow_up_at, robustify, BlowupRecord};
use crate::complex::{DeltaComplex2, Fixture, VertexId};
use crate::recognizer::{find_decomposition, verify_decomposition, Contractibility, Decomposition};
use crate::search::{obstruction_report, search, Certificate, SearchMode, SearchSpec};
use crate::sheaf::sections_of_d;
use crate::topology::{
    betti_numbers, euler_characteristic, is_closed_surface, is_connected_codim1, is_locally_connected_codim1,
    orientability, orientation_double_cover, Orientation,
};
use crate::tropical::{all_ones, attach_constants, WeakTropicalSurface};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tropsurf", version = "1", about = "Tropical surfaces on two-dimensional Δ-complexes")]
struct Args {
    /// Machine-readable `key=value` output.
    #[arg(long, global = true)]
    report: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Tropical,
    AtMostOne,
}

#[derive(Debug, clap::Args)]
struct Constants {
    /// Use α = 1 on every edge instead of the fixture's `alpha` lines.
    #[arg(long)]
    all_ones: bool,
}

#[derive(Debug, clap::Args)]
#[group(required = true, multiple = false)]
struct DecompositionSource {
    /// Decomposition file with `sigma`, `fin` and `ornament` lines.
    #[arg(long)]
    decomposition: Option<PathBuf>,
    /// Find a decomposition automatically.
    #[arg(long)]
    auto: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a fixture describes a valid complex.
    Validate { fixture: PathBuf },
    /// Euler characteristic, Betti numbers, orientability and connectivity.
    Topology { fixture: PathBuf },
    /// Classify structure constants by the inertia of the local matrices.
    Classify {
        fixture: PathBuf,
        #[command(flatten)]
        constants: Constants,
    },
    /// Attach triangles at semidefinite vertices and print the new fixture.
    Blowup {
        fixture: PathBuf,
        #[command(flatten)]
        constants: Constants,
        /// Blow up this vertex only (requires `--edge`).
        #[arg(long, requires = "edge")]
        vertex: Option<VertexId>,
        #[arg(long, requires = "vertex")]
        edge: Option<usize>,
    },
    /// Linear functions and sections of the quotient sheaf.
    Sheaf {
        fixture: PathBuf,
        #[command(flatten)]
        constants: Constants,
    },
    /// Verify or find a manifold-with-fins-and-ornaments decomposition.
    Recognize {
        fixture: PathBuf,
        #[command(flatten)]
        source: DecompositionSource,
    },
    /// Print the orientation double cover as a fixture.
    Cover {
        fixture: PathBuf,
        #[command(flatten)]
        source: DecompositionSource,
    },
    /// Search a window of structure constants exhaustively.
    Search {
        fixture: PathBuf,
        #[arg(long, default_value_t = 1)]
        bound: u32,
        #[arg(long, value_enum, default_value = "tropical")]
        mode: Mode,
        /// Emit every witness instead of stopping at the first.
        #[arg(long)]
        all: bool,
        /// Sort witnesses so the output does not depend on scheduling.
        #[arg(long)]
        deterministic: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Recognizer and both searches, cross-checked.
    Report {
        fixture: PathBuf,
        #[arg(long, default_value_t = 1)]
        bound: u32,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

/// Key-value output, human or machine readable.
struct Out {
    report: bool,
    text: String,
}

impl Out {
    fn field(&mut self, key: &str, value: impl Display) {
        if self.report {
            self.text.push_str(&format!("{key}={value}\n"));
        } else {
            self.text.push_str(&format!("{}: {value}\n", key.replace('.', " ")));
        }
    }

    fn raw(&mut self, s: &str) {
        self.text.push_str(s);
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Fixture> {
    Fixture::parse(&read(path)?).with_context(|| path.display().to_string())
}

fn surface(fixture: Fixture, constants: &Constants) -> Result<WeakTropicalSurface> {
    if constants.all_ones {
        return Ok(all_ones(fixture.complex)?);
    }
    if fixture.alpha.is_empty() {
        bail!("fixture has no alpha lines; pass --all-ones to use α = 1");
    }
    Ok(attach_constants(fixture.complex, &fixture.alpha)?)
}

fn decomposition(c: &DeltaComplex2, source: &DecompositionSource) -> Result<Decomposition> {
    match &source.decomposition {
        Some(path) => Ok(Decomposition::parse(&read(path)?).with_context(|| path.display().to_string())?),
        None => find_decomposition(c).context("no decomposition found"),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{}", line.trim());
            return EXIT_ERROR;
        }
    };
    let mut out = Out { report: args.report, text: String::new() };
    let code = match dispatch(args.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = stdout.write_all(out.text.as_bytes());
            let msg: Vec<String> = e.chain().map(|x| x.to_string()).collect();
            let _ = writeln!(stderr, "error: {}", msg.join(": ").replace('\n', " "));
            return EXIT_ERROR;
        }
    };
    let _ = stdout.write_all(out.text.as_bytes());
    code
}

fn dispatch(command: Command, out: &mut Out) -> Result<i32> {
    match command {
        Command::Validate { fixture } => {
            let f = load(&fixture)?;
            if !f.alpha.is_empty() {
                attach_constants(f.complex.clone(), &f.alpha)?;
            }
            let c = &f.complex;
            if out.report {
                out.field("valid", "true");
                out.field("vertices", c.vertex_count());
                out.field("edges", c.edge_count());
                out.field("facets", c.facet_count());
            } else {
                out.raw(&format!(
                    "valid: {} vertices, {} edges, {} facets\n",
                    c.vertex_count(),
                    c.edge_count(),
                    c.facet_count()
                ));
            }
            Ok(EXIT_OK)
        }
        Command::Topology { fixture } => {
            let c = load(&fixture)?.complex;
            let b = betti_numbers(&c);
            let all: Vec<usize> = (0..c.facet_count()).collect();
            out.field("euler_characteristic", euler_characteristic(&c));
            out.field("b0", b.b0);
            out.field("b1", b.b1);
            out.field("b2", b.b2);
            let closed = is_closed_surface(&c, &all);
            out.field("closed_surface", yes(closed));
            if closed {
                match orientability(&c, &all)? {
                    Orientation::Orientable { .. } => out.field("orientable", "yes"),
                    Orientation::NonOrientable { witness } => {
                        out.field("orientable", "no");
                        out.field("orientation_witness", join(&witness));
                    }
                }
            }
            out.field("locally_connected_codim1", yes(is_locally_connected_codim1(&c)));
            out.field("connected_codim1", yes(is_connected_codim1(&c)));
            let max_degree = (0..c.vertex_count()).map(|v| c.vertex_degree(v)).max().unwrap_or(0);
            out.field("max_vertex_degree", max_degree);
            Ok(EXIT_OK)
        }
        Command::Classify { fixture, constants } => {
            let w = surface(load(&fixture)?, &constants)?;
            let cl = w.classify();
            out.field("verdict", cl.verdict);
            for v in &cl.vertices {
                let key = format!("vertex.{}", v.vertex);
                out.field(&format!("{key}.degree"), v.degree);
                out.field(&format!("{key}.inertia"), v.inertia);
            }
            for (i, x) in cl.violations.iter().enumerate() {
                out.field(&format!("violation.{i}"), x);
            }
            Ok(EXIT_OK)
        }
        Command::Blowup { fixture, constants, vertex, edge } => {
            let w = surface(load(&fixture)?, &constants)?;
            let (next, records): (WeakTropicalSurface, Vec<BlowupRecord>) = match (vertex, edge) {
                (Some(v), Some(e)) => {
                    let (next, r) = blow_up_at(&w, v, e)?;
                    (next, vec![r])
                }
                _ => robustify(&w)?,
            };
            out.raw(&next.to_fixture());
            for r in &records {
                out.raw(&format!("# {r}\n"));
            }
            out.raw(&format!("# verdict {}\n", next.classify().verdict));
            Ok(EXIT_OK)
        }
        Command::Sheaf { fixture, constants } => {
            let w = surface(load(&fixture)?, &constants)?;
            let s = sections_of_d(&w);
            out.field("linear_rank", s.linear_rank);
            out.field("sections_rank", s.sections_rank);
            out.field("image_rank", s.image_rank);
            out.field("b1", s.b1);
            out.field("exact", yes(s.is_exact()));
            for (k, h) in s.linear_basis.iter().enumerate() {
                for (v, x) in h.iter().enumerate() {
                    out.raw(&format!("linear {k} {v} {x}\n"));
                }
            }
            for (k, g) in s.section_basis.iter().enumerate() {
                for (e, x) in g.iter().enumerate() {
                    out.raw(&format!("section {k} {e} {x}\n"));
                }
            }
            for (k, cl) in s.classes.iter().enumerate() {
                for (i, x) in cl.iter().enumerate() {
                    out.raw(&format!("class {k} {i} {x}\n"));
                }
            }
            Ok(EXIT_OK)
        }
        Command::Recognize { fixture, source } => {
            let c = load(&fixture)?.complex;
            let d = decomposition(&c, &source)?;
            if source.auto {
                out.raw(&d.serialize());
            }
            let r = verify_decomposition(&c, &d)?;
            out.field("valid", yes(r.is_valid()));
            out.field("sigma_euler_characteristic", r.sigma_euler);
            out.field("hyperbolic", yes(r.hyperbolic));
            for f in &r.fins {
                let key = format!("fin.{}", f.index);
                if let Some(p) = &f.path {
                    out.field(&format!("{key}.path"), join(p));
                }
                out.field(&format!("{key}.euler_characteristic"), f.euler_characteristic);
                let status = match f.contractibility {
                    Contractibility::Certified => "certified",
                    Contractibility::Unverified => "unverified",
                };
                out.field(&format!("{key}.contractible"), status);
            }
            for (i, v) in r.violations.iter().enumerate() {
                out.field(&format!("violation.{i}"), v);
            }
            Ok(if r.is_valid() { EXIT_OK } else { EXIT_ERROR })
        }
        Command::Cover { fixture, source } => {
            let f = load(&fixture)?;
            let alpha = if f.alpha.is_empty() {
                None
            } else {
                Some(attach_constants(f.complex.clone(), &f.alpha)?.alpha().clone())
            };
            let d = decomposition(&f.complex, &source)?;
            let cover = orientation_double_cover(&f.complex, alpha.as_ref(), &d)?;
            out.raw(&cover.to_fixture());
            Ok(EXIT_OK)
        }
        Command::Search { fixture, bound, mode, all, deterministic, threads } => {
            let c = load(&fixture)?.complex;
            let mode = match mode {
                Mode::Tropical => SearchMode::Tropical,
                Mode::AtMostOne => SearchMode::AtMostOne,
            };
            let mut spec = SearchSpec::new(c, bound, mode);
            spec.enumerate_all = all;
            spec.deterministic = deterministic;
            spec.threads = threads;
            let o = search(&spec);
            for (k, a) in o.witnesses.iter().enumerate() {
                out.raw(&format!("# witness {k}\n"));
                out.raw(&a.to_alpha_lines(&spec.complex));
            }
            if out.report {
                out.field("mode", mode.name());
                out.field("bound", bound);
                out.field("witnesses", o.witnesses.len());
                out.field("exhausted", o.exhausted);
                out.field("nodes", o.nodes_explored);
                out.field("prunes", o.prunes);
            } else if o.exhausted {
                out.raw(&format!("exhausted: {} witnesses\n", o.witnesses.len()));
            } else {
                out.raw(&format!("found: {} witnesses\n", o.witnesses.len()));
            }
            Ok(if o.witnesses.is_empty() { EXIT_EXHAUSTED } else { EXIT_OK })
        }
        Command::Report { fixture, bound, threads } => {
            let c = load(&fixture)?.complex;
            let r = obstruction_report(&c, bound, threads);
            let (certificate, note) = match &r.certificate {
                Certificate::Hyperbolic => ("hyperbolic", "nonexistence theorems apply".to_string()),
                Certificate::NotApplicable(why) => ("not-applicable", why.clone()),
                Certificate::NoDecomposition => ("none", "no valid decomposition".to_string()),
            };
            out.field("bound", bound);
            out.field("certificate", certificate);
            out.field("certificate_note", note);
            for (name, o) in [("tropical", &r.tropical), ("at_most_one", &r.at_most_one)] {
                out.field(&format!("{name}.witnesses"), o.witnesses.len());
                out.field(&format!("{name}.exhausted"), o.exhausted);
                out.field(&format!("{name}.nodes"), o.nodes_explored);
            }
            for (i, x) in r.robustified.iter().enumerate() {
                let verdict = x.verdict.map(|v| v.to_string()).unwrap_or_else(|| "error".into());
                out.field(&format!("robustify.{i}.blowups"), x.blowups);
                out.field(&format!("robustify.{i}.verdict"), verdict);
            }
            match &r.inconsistency {
                None => {
                    out.field("consistent", "yes");
                    Ok(EXIT_OK)
                }
                Some(msg) => {
                    out.field("consistent", "no");
                    bail!("fatal inconsistency: {msg}")
                }
            }
        }
    }
}
