//! `cubeknot`: validate, transform, slice and search cubical knots from the
//! command line.
//!
//! Exit codes: 0 success, 1 invalid input or failed validation, 2 search or
//! sweep ended without a certificate, 3 usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use cubeknot::format::{
    digest, digest_complex, parse_certificate, parse_complex, parse_knot, serialize_certificate,
    serialize_complex, serialize_knot,
};
use cubeknot::search::{SearchOptions, SearchStats};
use cubeknot::{
    bfs_search, enumerate_face_moves, fixtures, is_tubular, subdivide_knot, CellComplex,
    KnotDiagram, LatticeCell, MoveSequence, SlicedComplex, Step, SweepOptions,
};

const EXIT_INVALID: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cubeknot",
    version,
    about = "Cubical knots: validation, moves, slicing and certificate search"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Input file; reads standard input when omitted or `-`.
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Write the result to this file instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Axis (1-based) along which solids are ordered.
    #[arg(long, default_value_t = 1)]
    axis: usize,
    /// Auxiliary moves allowed before each exchange.
    #[arg(long, default_value_t = 8)]
    depth: usize,
}

impl SweepArgs {
    fn options(&self) -> Result<SweepOptions> {
        if self.axis == 0 || self.axis > 4 {
            bail!("--axis must be between 1 and 4");
        }
        Ok(SweepOptions {
            axis: self.axis - 1,
            local_depth: self.depth,
            ..SweepOptions::default()
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check that a cell file is a cubical knot.
    Validate(Input),
    /// Cell counts, Euler characteristic and tubularity of a knot.
    Info(Input),
    /// List the legal face-boundary moves.
    Moves(Input),
    /// Apply the move with the given index from `moves`.
    Apply {
        #[command(flatten)]
        input: Input,
        #[arg(long = "move")]
        index: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Subdivide every cell into m^k cells.
    Subdivide {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'm', long)]
        m: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Slice a cylinder in Z^5 at a non-integer level.
    Slice {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        level: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Certificate carrying the slice below an integer level to the slice above.
    Sweep {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        level: i64,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Certificate carrying the bottom slice of a cylinder to the top slice.
    Carry {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Shortest certificate between two knots.
    Search {
        source: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_moves: usize,
        #[arg(long, default_value_t = 100_000)]
        max_states: usize,
        /// Treat knots that differ by a translation as equal.
        #[arg(long)]
        normalize: bool,
        /// Retry after subdividing both knots by 2 and then 3.
        #[arg(long)]
        refine: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Re-check every step of a certificate.
    Replay(Input),
    /// Write a built-in fixture.
    Gen {
        fixture: Fixture,
        /// Box dimensions for `box`.
        #[arg(long, num_args = 3, default_values_t = [2, 1, 1])]
        size: Vec<i64>,
        /// Number of slabs for `product-cylinder`.
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    Sphere,
    Box,
    Torus,
    Square,
    Pinched,
    ProductCylinder,
    ShiftCylinder,
    DoubleShiftCylinder,
    TwoBumpCylinder,
}

/// What a command prints, and its exit code.
struct Report {
    code: u8,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Self {
            code: 0,
            text: text.into(),
            json,
        }
    }
}

fn read_input(input: &Input) -> Result<String> {
    match input.file.as_deref() {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display())),
    }
}

fn read_stdin() -> Result<String> {
    let mut s = String::new();
    io::stdin()
        .read_to_string(&mut s)
        .context("cannot read standard input")?;
    Ok(s)
}

fn read_path(p: &std::path::Path) -> Result<String> {
    read_input(&Input {
        file: Some(p.to_path_buf()),
    })
}

fn load_knot(text: &str) -> Result<KnotDiagram> {
    Ok(parse_knot(text)?)
}

fn load_cylinder(text: &str) -> Result<SlicedComplex> {
    Ok(SlicedComplex::new(parse_complex(text)?)?)
}

fn cell_strings<'a>(cells: impl IntoIterator<Item = &'a LatticeCell>) -> Vec<String> {
    cells.into_iter().map(ToString::to_string).collect()
}

fn knot_json(d: &KnotDiagram) -> Value {
    json!({
        "dim": d.dim(),
        "ambient": d.ctx().ambient_dim,
        "scale": d.ctx().scale,
        "cells": cell_strings(d.cells()),
        "digest": digest(d),
    })
}

fn complex_json(c: &CellComplex) -> Value {
    json!({
        "dim": c.dim(),
        "ambient": c.ctx().ambient_dim,
        "scale": c.ctx().scale,
        "cells": cell_strings(c.iter()),
        "digest": digest_complex(c),
    })
}

fn certificate_json(seq: &MoveSequence) -> Value {
    json!({
        "initial": knot_json(&seq.initial),
        "steps": seq.steps.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "digest": seq.final_digest,
    })
}

#[derive(Serialize)]
struct StatsJson {
    states: usize,
    expanded: usize,
    forward_depth: usize,
    backward_depth: usize,
}

impl From<SearchStats> for StatsJson {
    fn from(s: SearchStats) -> Self {
        Self {
            states: s.states,
            expanded: s.expanded,
            forward_depth: s.forward_depth,
            backward_depth: s.backward_depth,
        }
    }
}

/// Writes `text` to the output file, or returns it for standard output.
fn emit(output: &Output, text: String, json: Value) -> Result<Report> {
    match &output.output {
        Some(p) => {
            fs::write(p, &text).with_context(|| format!("cannot write {}", p.display()))?;
            Ok(Report::ok(format!("wrote {}\n", p.display()), json))
        }
        None => Ok(Report::ok(text, json)),
    }
}

fn validate(input: &Input) -> Result<Report> {
    let d = load_knot(&read_input(input)?)?;
    let r = d.report();
    let mut json = knot_json(&d);
    json["valid"] = json!(r.is_sphere());
    json["report"] = json!(r.to_string());
    json["failures"] = json!(r.failures);
    Ok(Report {
        code: if r.is_sphere() { 0 } else { EXIT_INVALID },
        text: format!("{r}\n"),
        json,
    })
}

fn info(input: &Input) -> Result<Report> {
    let text = read_input(input)?;
    let c = parse_complex(&text)?;
    if c.ctx().ambient_dim == 5 && c.dim() == 3 {
        return cylinder_info(c);
    }
    let d = KnotDiagram::new(c)?;
    let counts = d.closure().counts();
    let r = d.report();
    let tubular = is_tubular(&d);
    let names = ["vertices", "edges", "squares"];
    let mut out = String::new();
    for (name, n) in names.iter().zip(&counts) {
        out.push_str(&format!("{name}: {n}\n"));
    }
    out.push_str(&format!(
        "euler characteristic: {}\nclosed: {}\nconnected: {}\nvertex regular: {}\norientable: {}\n",
        r.euler_characteristic, r.closed, r.connected, r.vertex_regular, r.orientable
    ));
    out.push_str(&format!(
        "tubular: {} ({} offending cells)\nverdict: {r}\n",
        tubular.tubular,
        tubular.offending.len()
    ));
    let mut json = knot_json(&d);
    json["counts"] = json!(counts);
    json["euler_characteristic"] = json!(r.euler_characteristic);
    json["closed"] = json!(r.closed);
    json["connected"] = json!(r.connected);
    json["vertex_regular"] = json!(r.vertex_regular);
    json["orientable"] = json!(r.orientable);
    json["valid"] = json!(r.is_sphere());
    json["tubular"] = json!(tubular.tubular);
    json["offending"] = json!(cell_strings(tubular.offending.iter().map(|(q, _)| q)));
    Ok(Report::ok(out, json))
}

fn cylinder_info(c: CellComplex) -> Result<Report> {
    let json0 = complex_json(&c);
    let j = SlicedComplex::new(c)?;
    let (m1, m2) = j.level_range();
    let valid = j.validate();
    let mut out = format!(
        "cylinder with {} cells\nlevels: {m1} to {m2}\n",
        j.complex().len()
    );
    match &valid {
        Ok(()) => out.push_str("slices: all valid\n"),
        Err(e) => out.push_str(&format!("slices: {e}\n")),
    }
    let mut json = json0;
    json["level_range"] = json!([m1, m2]);
    json["valid"] = json!(valid.is_ok());
    Ok(Report::ok(out, json))
}

fn moves(input: &Input) -> Result<Report> {
    let d = load_knot(&read_input(input)?)?;
    if !d.is_valid() {
        bail!("not a knot: {}", d.report());
    }
    let list = enumerate_face_moves(&d);
    let mut out = String::new();
    let mut items = Vec::new();
    for (i, mv) in list.iter().enumerate() {
        out.push_str(&format!("{i}: {mv}\n"));
        items.push(json!({
            "index": i,
            "carrier": mv.carrier().to_string(),
            "removed": cell_strings(mv.removed()),
            "inserted": cell_strings(mv.inserted()),
        }));
    }
    let mut json = knot_json(&d);
    json["moves"] = Value::Array(items);
    Ok(Report::ok(out, json))
}

fn apply(input: &Input, index: usize, output: &Output) -> Result<Report> {
    let d = load_knot(&read_input(input)?)?;
    if !d.is_valid() {
        bail!("not a knot: {}", d.report());
    }
    let list = enumerate_face_moves(&d);
    let mv = list
        .get(index)
        .ok_or_else(|| anyhow!("move index {index} out of range ({} moves)", list.len()))?;
    let out = cubeknot::apply_move(&d, mv)?;
    let mut json = knot_json(&out);
    json["steps"] = json!([Step::Exchange(mv.clone()).to_string()]);
    emit(output, serialize_knot(&out), json)
}

fn subdivide(input: &Input, m: u32, output: &Output) -> Result<Report> {
    let d = load_knot(&read_input(input)?)?;
    let out = subdivide_knot(&d, m)?;
    let mut json = knot_json(&out);
    json["steps"] = json!([Step::Subdivide(m).to_string()]);
    emit(output, serialize_knot(&out), json)
}

fn slice(input: &Input, level: f64, output: &Output) -> Result<Report> {
    let j = load_cylinder(&read_input(input)?)?;
    let d = j.slice_at(level)?;
    emit(output, serialize_knot(&d), knot_json(&d))
}

fn emit_certificate(
    output: &Output,
    seq: &MoveSequence,
    extra: Option<(&str, Value)>,
) -> Result<Report> {
    let mut json = certificate_json(seq);
    if let Some((k, v)) = extra {
        json[k] = v;
    }
    emit(output, serialize_certificate(seq), json)
}

fn search(
    source: &std::path::Path,
    target: &std::path::Path,
    opts: SearchOptions,
    refine: bool,
    output: &Output,
) -> Result<Report> {
    let a = load_knot(&read_path(source)?)?;
    let b = load_knot(&read_path(target)?)?;
    let scales: &[u32] = if refine { &[1, 2, 3] } else { &[1] };
    let mut last = None;
    for &m in scales {
        let (sa, sb) = if m == 1 {
            (a.clone(), b.clone())
        } else {
            (subdivide_knot(&a, m)?, subdivide_knot(&b, m)?)
        };
        match bfs_search(&sa, &sb, &opts) {
            Ok(found) => {
                let mut seq = found.certificate;
                if m > 1 {
                    let end = seq.replay().map_err(|e| anyhow!("{e}"))?;
                    let mut steps = vec![Step::Subdivide(m)];
                    steps.append(&mut seq.steps);
                    seq = MoveSequence::from_run(a.clone(), steps, &end);
                }
                let extra = json!({
                    "scale": m,
                    "offset": found.offset,
                    "stats": StatsJson::from(found.stats),
                });
                let mut report = emit_certificate(output, &seq, Some(("search", extra)))?;
                if output.output.is_some() {
                    report.text = format!(
                        "certificate of {} steps at subdivision {m}; {}",
                        seq.len(),
                        report.text
                    );
                }
                return Ok(report);
            }
            Err(e) => last = Some((m, e)),
        }
    }
    let (m, e) = last.expect("at least one scale");
    Ok(Report {
        code: EXIT_INCONCLUSIVE,
        text: format!("{e} (last subdivision {m})\n"),
        json: json!({
            "found": false,
            "reason": e.reason,
            "stats": StatsJson::from(e.stats),
        }),
    })
}

fn replay(input: &Input) -> Result<Report> {
    let seq = parse_certificate(&read_input(input)?)?;
    match seq.replay() {
        Ok(end) => Ok(Report::ok(
            format!("ok: {} steps, digest {}\n", seq.len(), seq.final_digest),
            json!({
                "valid": true,
                "steps": seq.steps.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "digest": digest(&end),
                "cells": cell_strings(end.cells()),
            }),
        )),
        Err(e) => Ok(Report {
            code: EXIT_INVALID,
            text: format!("{e}\n"),
            json: json!({
                "valid": false,
                "failed_step": e.step,
                "reason": e.reason,
                "steps": seq.steps.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "digest": seq.final_digest,
            }),
        }),
    }
}

fn generate(fixture: Fixture, size: &[i64], levels: usize, output: &Output) -> Result<Report> {
    let knot = |d: KnotDiagram| -> Result<Report> {
        let json = knot_json(&d);
        emit(output, serialize_knot(&d), json)
    };
    let cylinder = |j: SlicedComplex| -> Result<Report> {
        let json = complex_json(j.complex());
        emit(output, serialize_complex(j.complex()), json)
    };
    match fixture {
        Fixture::Sphere => knot(fixtures::sphere()),
        Fixture::Box => {
            if size.iter().any(|&x| x < 1) {
                bail!("box sides must be positive");
            }
            knot(fixtures::box_sphere([size[0], size[1], size[2]]))
        }
        Fixture::Torus => knot(fixtures::torus()),
        Fixture::Square => knot(fixtures::square_loop()),
        Fixture::Pinched => knot(fixtures::pinched_spheres()),
        Fixture::ProductCylinder => {
            if levels == 0 {
                bail!("--levels must be positive");
            }
            cylinder(fixtures::product_cylinder(levels))
        }
        Fixture::ShiftCylinder => cylinder(fixtures::shift_cylinder()),
        Fixture::DoubleShiftCylinder => cylinder(fixtures::double_shift_cylinder()),
        Fixture::TwoBumpCylinder => cylinder(fixtures::two_bump_cylinder()),
    }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Validate(input) => validate(input),
        Command::Info(input) => info(input),
        Command::Moves(input) => moves(input),
        Command::Apply {
            input,
            index,
            output,
        } => apply(input, *index, output),
        Command::Subdivide { input, m, output } => subdivide(input, *m, output),
        Command::Slice {
            input,
            level,
            output,
        } => slice(input, *level, output),
        Command::Sweep {
            input,
            level,
            sweep,
            output,
        } => {
            let j = load_cylinder(&read_input(input)?)?;
            let seq = j.carry_level(*level, &sweep.options()?)?;
            emit_certificate(output, &seq, None)
        }
        Command::Carry {
            input,
            sweep,
            output,
        } => {
            let j = load_cylinder(&read_input(input)?)?;
            let seq = j.carry_full(&sweep.options()?)?;
            emit_certificate(output, &seq, None)
        }
        Command::Search {
            source,
            target,
            max_moves,
            max_states,
            normalize,
            refine,
            output,
        } => {
            let opts = SearchOptions {
                max_moves: *max_moves,
                max_states: *max_states,
                normalize: *normalize,
                ..SearchOptions::default()
            };
            search(source, target, opts, *refine, output)
        }
        Command::Replay(input) => replay(input),
        Command::Gen {
            fixture,
            size,
            levels,
            output,
        } => generate(*fixture, size, *levels, output),
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<cubeknot::Error>() {
        Some(cubeknot::Error::Stuck { .. }) => EXIT_INCONCLUSIVE,
        _ => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (code, text, json) = match run(&cli) {
        Ok(r) => (r.code, r.text, r.json),
        Err(e) => {
            // text mode reports errors on stderr; in JSON mode they are the output
            if !cli.json {
                eprintln!("error: {e:#}");
            }
            (
                exit_code_for(&e),
                String::new(),
                json!({ "error": format!("{e:#}") }),
            )
        }
    };
    let mut stdout = io::stdout().lock();
    let written = if cli.json {
        writeln!(stdout, "{json}")
    } else {
        stdout.write_all(text.as_bytes())
    };
    if written.is_err() {
        return ExitCode::from(EXIT_INVALID);
    }
    ExitCode::from(code)
}
