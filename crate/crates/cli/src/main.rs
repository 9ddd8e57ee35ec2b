//! Command-line interface: one verb per verified statement, plus file
//! utilities. Reports are line-oriented `key: value` blocks ending with
//! `RESULT: PASS|FAIL`; the exit code is 0 exactly when the invoked
//! check passes.

use anodyne_cli::format;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand};

use anodyne_core::expansion::{
    self, find_expansion, gen_boundary_cert, gen_horn_cert_full, gen_inner_horn_cert,
    gen_kunneth_cert, gen_prism_cert, resolve_arena, verify_attachments, AmbientDesc,
    Attachment, ExpansionCertificate, SourceDesc,
};
use anodyne_core::homology::homology;
use anodyne_core::mapping::{fibration_report, kan_report, quasicategory_report, Family};
use anodyne_core::nerve;
use anodyne_core::rezk::{gamma, gtilde, prop4_check, theorem5_check};
use anodyne_core::sset::{standard_complex, FinSSet, StandardKind};
use anodyne_core::thick::{
    materialize, thick_count, thick_enumerate, product_vertex_iso, prism_region,
    maximal_chain_count, thicken, ThickRegion,
};

#[derive(Parser)]
#[command(name = "anodyne", version, about = "Thick simplices, expansion certificates, and desk-scale quasicategory checks")]
struct Cli {
    /// Cap on internal parallelism (the current implementation is
    /// sequential, satisfying any cap).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Thick-simplex counting, enumeration and materialization.
    Thick {
        #[command(subcommand)]
        command: ThickCommand,
    },
    /// Generate standard complexes and nerve test inputs.
    Make {
        #[command(subcommand)]
        command: MakeCommand,
    },
    /// Generate expansion certificates.
    Expand {
        #[command(subcommand)]
        command: ExpandCommand,
    },
    /// Replay and verify a certificate file.
    Verify { file: PathBuf },
    /// Horn- and boundary-filling checks.
    Check {
        #[command(subcommand)]
        command: CheckCommand,
    },
    /// The mapping complex out of thick simplices and its image.
    Rezk {
        #[command(subcommand)]
        command: RezkCommand,
    },
    /// Integral homology of a complex file.
    Homology { file: PathBuf },
    /// Verify the product-of-thick-simplices identification.
    ProductIso {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        truncate: usize,
    },
}

#[derive(Subcommand)]
enum ThickCommand {
    /// Number of nondegenerate k-simplices of the thick n-simplex.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// List the nondegenerate k-simplices in lexicographic order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Materialize a thick region to a complex file.
    Materialize {
        #[arg(long)]
        region: String,
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply the thickening coend to a complex file.
    Thicken {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum MakeCommand {
    /// The standard n-simplex.
    Simplex(MakeStandard),
    /// The boundary of the standard n-simplex.
    Boundary(MakeStandard),
    /// The (n, i) horn.
    Horn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// One vertex.
    Point {
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Nerve of the cyclic group of a given order.
    NerveCyclic {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Nerve of the contractible groupoid on a number of objects.
    NerveGroupoid {
        #[arg(long)]
        objects: usize,
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Nerve of the two-object category with one parallel pair of arrows.
    NerveParallelPair {
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct MakeStandard {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    truncate: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ExpandCommand {
    /// Certificate for the thick boundary-union-simplex inclusion.
    Boundary {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inner certificate for the thick horn-union-simplex inclusion.
    InnerHorn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inner certificate for the full thick horn inclusion.
    Horn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certificate for the prism inside the simplex on vertex pairs.
    Prism {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The prism certificate lifted through the thickening coend.
    Kunneth {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        truncate: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for an expansion with the generic oracle.
    Find {
        /// Ambient region descriptor, e.g. thick:2 or standard-horn:2:1.
        #[arg(long, conflicts_with = "ambient_file")]
        ambient: Option<String>,
        /// Ambient complex file (attachments are then recorded by name).
        #[arg(long)]
        ambient_file: Option<PathBuf>,
        /// Source descriptor, e.g. horn-union-simplex:2:1 or cells:a,b.
        #[arg(long)]
        source: String,
        #[arg(long)]
        truncate: usize,
        /// Only inner attachments.
        #[arg(long)]
        inner: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Inner-horn filling up to a dimension.
    Quasicategory {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// All-horn filling up to a dimension.
    Kan {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Boundary lifting for a morphism file up to a dimension.
    TrivialFib {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Subcommand)]
enum RezkCommand {
    /// Level counts of the mapping complex out of thick simplices.
    Gtilde {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// The image of the mapping complex in the base.
    Gamma {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Idempotence of the construction, checked by isomorphism search.
    Prop4 {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Kan and trivial-fibration checks for the construction.
    Theorem5 {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
    },
}

fn parse_region(text: &str) -> Result<ThickRegion> {
    match SourceDesc::parse(text).map_err(|e| anyhow!("{e}"))? {
        SourceDesc::Thick(region) => Ok(region),
        _ => bail!("expected a thick region descriptor, got {text}"),
    }
}

/// Outcome of a command: the report text plus pass/fail.
struct Outcome {
    report: String,
    pass: bool,
}

impl Outcome {
    fn pass(report: String) -> Self {
        Outcome { report, pass: true }
    }
}

fn emit_cert(
    cert: &ExpansionCertificate,
    out: Option<&PathBuf>,
    extra: &str,
) -> Result<Outcome> {
    let report = expansion::verify_certificate(cert).map_err(|e| anyhow!("{e}"))?;
    let header = format!(
        "{extra}ambient: {}\nsource: {}\ntruncation: {}",
        cert.ambient.render(),
        cert.source.render(),
        cert.truncation
    );
    if let Some(path) = out {
        format::save_cert(path, cert)?;
    }
    let text = report.render(&header);
    Ok(Outcome {
        report: text,
        pass: report.pass,
    })
}

fn fibration_outcome(
    header: String,
    report: &anodyne_core::mapping::FibrationReport,
) -> Outcome {
    let mut text = header;
    for row in &report.rows {
        let name = match row.i {
            Some(i) => format!("horn ({}, {})", row.n, i),
            None => format!("boundary {}", row.n),
        };
        text.push_str(&format!(
            "{name}: squares={} {}\n",
            row.squares,
            if row.surjective { "surjective" } else { "NOT SURJECTIVE" }
        ));
        if let Some(ce) = &row.counterexample {
            text.push_str(&format!(
                "counterexample at ({}, {:?}): {}\n",
                ce.n,
                ce.i,
                ce.top_description.join("; ")
            ));
        }
    }
    let pass = report.all_surjective();
    text.push_str(if pass { "RESULT: PASS\n" } else { "RESULT: FAIL\n" });
    Outcome { report: text, pass }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Thick { command } => run_thick(command),
        Command::Make { command } => run_make(command),
        Command::Expand { command } => run_expand(command),
        Command::Verify { file } => run_verify(&file),
        Command::Check { command } => run_check(command),
        Command::Rezk { command } => run_rezk(command),
        Command::Homology { file } => run_homology(&file),
        Command::ProductIso { m, n, truncate } => run_product_iso(m, n, truncate),
    }
}

fn run_thick(command: ThickCommand) -> Result<Outcome> {
    match command {
        ThickCommand::Count { n, k } => Ok(Outcome::pass(format!("{}\n", thick_count(n, k)))),
        ThickCommand::Enumerate { n, k } => {
            let mut text = String::new();
            for s in thick_enumerate(n, k) {
                let rendered: Vec<String> = s.seq.iter().map(ToString::to_string).collect();
                text.push_str(&rendered.join("-"));
                text.push('\n');
            }
            Ok(Outcome::pass(text))
        }
        ThickCommand::Materialize {
            region,
            truncate,
            out,
        } => {
            let region = parse_region(&region)?;
            let mat = materialize(region, truncate).map_err(|e| anyhow!("{e}"))?;
            format::save_sset(&out, &mat.complex)?;
            Ok(Outcome::pass(format!(
                "cells: {:?}\nwrote: {}\nRESULT: PASS\n",
                mat.complex.cell_counts(),
                out.display()
            )))
        }
        ThickCommand::Thicken { file, out } => {
            let complex = format::load_sset(&file)?;
            let th = thicken(&complex).map_err(|e| anyhow!("{e}"))?;
            th.unit.validate().map_err(|e| anyhow!("{e}"))?;
            if !th.unit.is_levelwise_injective() {
                bail!("thickening unit is not levelwise injective");
            }
            format::save_sset(&out, &th.complex)?;
            Ok(Outcome::pass(format!(
                "cells: {:?}\nunit: levelwise injective\nwrote: {}\nRESULT: PASS\n",
                th.complex.cell_counts(),
                out.display()
            )))
        }
    }
}

fn run_make(command: MakeCommand) -> Result<Outcome> {
    let (complex, out): (Arc<FinSSet>, PathBuf) = match command {
        MakeCommand::Simplex(args) => (
            Arc::new(
                standard_complex(StandardKind::Simplex, args.n, args.truncate)
                    .map_err(|e| anyhow!("{e}"))?,
            ),
            args.out,
        ),
        MakeCommand::Boundary(args) => (
            Arc::new(
                standard_complex(StandardKind::Boundary, args.n, args.truncate)
                    .map_err(|e| anyhow!("{e}"))?,
            ),
            args.out,
        ),
        MakeCommand::Horn {
            n,
            i,
            truncate,
            out,
        } => (
            Arc::new(
                standard_complex(StandardKind::Horn(i), n, truncate)
                    .map_err(|e| anyhow!("{e}"))?,
            ),
            out,
        ),
        MakeCommand::Point { truncate, out } => (Arc::new(FinSSet::point(truncate)), out),
        MakeCommand::NerveCyclic {
            order,
            truncate,
            out,
        } => (
            nerve::nerve_cyclic(order, truncate).map_err(|e| anyhow!("{e}"))?,
            out,
        ),
        MakeCommand::NerveGroupoid {
            objects,
            truncate,
            out,
        } => (
            nerve::nerve_contractible_groupoid(objects, truncate).map_err(|e| anyhow!("{e}"))?,
            out,
        ),
        MakeCommand::NerveParallelPair { truncate, out } => (
            nerve::nerve(&nerve::parallel_pair_category(), truncate)
                .map_err(|e| anyhow!("{e}"))?,
            out,
        ),
    };
    format::save_sset(&out, &complex)?;
    Ok(Outcome::pass(format!(
        "cells: {:?}\nwrote: {}\nRESULT: PASS\n",
        complex.cell_counts(),
        out.display()
    )))
}

fn run_expand(command: ExpandCommand) -> Result<Outcome> {
    match command {
        ExpandCommand::Boundary { n, truncate, out } => {
            let cert = gen_boundary_cert(n, truncate).map_err(|e| anyhow!("{e}"))?;
            emit_cert(&cert, out.as_ref(), "")
        }
        ExpandCommand::InnerHorn {
            n,
            i,
            truncate,
            out,
        } => {
            let generated = gen_inner_horn_cert(n, i, truncate).map_err(|e| anyhow!("{e}"))?;
            let extra = if generated.used_fallback {
                "generator: FALLBACK (classification pairing failed; search oracle used)\n"
            } else {
                "generator: classification pairing\n"
            };
            let outcome = emit_cert(&generated.certificate, out.as_ref(), extra)?;
            if generated.used_fallback {
                return Ok(Outcome {
                    report: outcome.report,
                    pass: false,
                });
            }
            Ok(outcome)
        }
        ExpandCommand::Horn {
            n,
            i,
            truncate,
            out,
        } => {
            let cert = gen_horn_cert_full(n, i, truncate).map_err(|e| anyhow!("{e}"))?;
            emit_cert(&cert, out.as_ref(), "")
        }
        ExpandCommand::Prism {
            m,
            n,
            truncate,
            out,
        } => {
            let cert = gen_prism_cert(m, n, truncate).map_err(|e| anyhow!("{e}"))?;
            emit_cert(&cert, out.as_ref(), "")
        }
        ExpandCommand::Kunneth {
            m,
            n,
            truncate,
            out,
        } => {
            let cert = gen_kunneth_cert(m, n, truncate).map_err(|e| anyhow!("{e}"))?;
            emit_cert(&cert, out.as_ref(), "")
        }
        ExpandCommand::Find {
            ambient,
            ambient_file,
            source,
            truncate,
            inner,
            out,
        } => run_find(ambient, ambient_file, source, truncate, inner, out),
    }
}

fn run_find(
    ambient: Option<String>,
    ambient_file: Option<PathBuf>,
    source: String,
    truncate: usize,
    inner: bool,
    out: Option<PathBuf>,
) -> Result<Outcome> {
    let source_desc = SourceDesc::parse(&source).map_err(|e| anyhow!("{e}"))?;
    match (ambient, ambient_file) {
        (Some(desc), None) => {
            let ambient = AmbientDesc::parse(&desc).map_err(|e| anyhow!("{e}"))?;
            let arena =
                resolve_arena(&ambient, &source_desc, truncate).map_err(|e| anyhow!("{e}"))?;
            let Some(found) = find_expansion(&arena.complex, &arena.source, inner) else {
                return Ok(Outcome {
                    report: "search: exhausted\nRESULT: FAIL\n".into(),
                    pass: false,
                });
            };
            let cert = ExpansionCertificate {
                ambient,
                source: source_desc,
                truncation: truncate,
                inner,
                attachments: arena.encode(&found),
            };
            emit_cert(&cert, out.as_ref(), "generator: search oracle\n")
        }
        (None, Some(path)) => {
            let complex = format::load_sset(&path)?;
            let SourceDesc::Cells(names) = &source_desc else {
                bail!("file ambients need a cells: source descriptor");
            };
            let mut mask = anodyne_core::sset::SubcomplexMask::empty(&complex);
            for name in names {
                mask.insert(format::cell_ref_by_name(&complex, name)?);
            }
            mask.validate_closed(&complex).map_err(|e| anyhow!("{e}"))?;
            let Some(found) = find_expansion(&complex, &mask, inner) else {
                return Ok(Outcome {
                    report: "search: exhausted\nRESULT: FAIL\n".into(),
                    pass: false,
                });
            };
            let report = verify_attachments(&complex, &mask, &found, inner, complex.truncation());
            let named: Vec<(String, usize)> = found
                .iter()
                .map(|a| (complex.cell_name(a.cell).to_string(), a.free_face))
                .collect();
            if let Some(path) = &out {
                let value = format::embedded_cert_to_value(
                    &complex,
                    names,
                    complex.truncation(),
                    inner,
                    &named,
                );
                std::fs::write(path, format::write_stable(&value))?;
            }
            let text = report.render("generator: search oracle (embedded ambient)");
            Ok(Outcome {
                report: text,
                pass: report.pass,
            })
        }
        _ => bail!("exactly one of --ambient / --ambient-file is required"),
    }
}

fn run_verify(file: &PathBuf) -> Result<Outcome> {
    match format::load_cert(file)? {
        format::CertFile::Descriptor(cert) => {
            let report = expansion::verify_certificate(&cert).map_err(|e| anyhow!("{e}"))?;
            let header = format!(
                "ambient: {}\nsource: {}\ntruncation: {}",
                cert.ambient.render(),
                cert.source.render(),
                cert.truncation
            );
            let text = report.render(&header);
            Ok(Outcome {
                report: text,
                pass: report.pass,
            })
        }
        format::CertFile::Embedded {
            complex,
            source_cells,
            truncation,
            inner,
            attachments,
        } => {
            let mut mask = anodyne_core::sset::SubcomplexMask::empty(&complex);
            for name in &source_cells {
                mask.insert(format::cell_ref_by_name(&complex, name)?);
            }
            mask.validate_closed(&complex).map_err(|e| anyhow!("{e}"))?;
            let resolved: Vec<Attachment> = attachments
                .iter()
                .map(|(name, fi)| {
                    Ok(Attachment {
                        cell: format::cell_ref_by_name(&complex, name)?,
                        free_face: *fi,
                    })
                })
                .collect::<Result<_>>()?;
            let report = verify_attachments(&complex, &mask, &resolved, inner, truncation);
            let text = report.render("ambient: embedded");
            Ok(Outcome {
                report: text,
                pass: report.pass,
            })
        }
    }
}

fn run_check(command: CheckCommand) -> Result<Outcome> {
    match command {
        CheckCommand::Quasicategory { file, dim } => {
            let x = format::load_sset(&file)?;
            let report = quasicategory_report(&x, dim).map_err(|e| anyhow!("{e}"))?;
            Ok(fibration_outcome(
                format!("check: quasicategory\nmax-dim: {dim}\n"),
                &report,
            ))
        }
        CheckCommand::Kan { file, dim } => {
            let x = format::load_sset(&file)?;
            let report = kan_report(&x, dim).map_err(|e| anyhow!("{e}"))?;
            Ok(fibration_outcome(
                format!("check: kan\nmax-dim: {dim}\n"),
                &report,
            ))
        }
        CheckCommand::TrivialFib { file, dim } => {
            let f = format::load_morphism(&file)?;
            let report =
                fibration_report(&f, Family::Boundaries, dim).map_err(|e| anyhow!("{e}"))?;
            Ok(fibration_outcome(
                format!("check: trivial-fibration\nmax-dim: {dim}\n"),
                &report,
            ))
        }
    }
}

fn run_rezk(command: RezkCommand) -> Result<Outcome> {
    match command {
        RezkCommand::Gtilde { file, dim } => {
            let x = format::load_sset(&file)?;
            let gt = gtilde(&x, dim).map_err(|e| anyhow!("{e}"))?;
            gt.unit.validate().map_err(|e| anyhow!("{e}"))?;
            gt.complex.validate().map_err(|e| anyhow!("{e}"))?;
            Ok(Outcome::pass(format!(
                "levels: {:?}\ncells: {:?}\nRESULT: PASS\n",
                gt.level_counts(),
                gt.complex.cell_counts()
            )))
        }
        RezkCommand::Gamma { file, dim } => {
            let x = format::load_sset(&file)?;
            let gm = gamma(&x, dim).map_err(|e| anyhow!("{e}"))?;
            gm.inclusion.validate().map_err(|e| anyhow!("{e}"))?;
            gm.surjection.validate().map_err(|e| anyhow!("{e}"))?;
            Ok(Outcome::pass(format!(
                "image-cells: {:?}\nbase-cells: {:?}\nRESULT: PASS\n",
                gm.complex.cell_counts(),
                x.cell_counts()
            )))
        }
        RezkCommand::Prop4 { file, dim } => {
            let x = format::load_sset(&file)?;
            let report = prop4_check(&x, dim).map_err(|e| anyhow!("{e}"))?;
            let pass = report.pass;
            Ok(Outcome {
                report: report.render(),
                pass,
            })
        }
        RezkCommand::Theorem5 { file, dim } => {
            let x = format::load_sset(&file)?;
            let report = theorem5_check(&x, dim).map_err(|e| anyhow!("{e}"))?;
            let pass = report.pass;
            Ok(Outcome {
                report: report.render(),
                pass,
            })
        }
    }
}

fn run_homology(file: &PathBuf) -> Result<Outcome> {
    let x = format::load_sset(file)?;
    let groups = homology(&x);
    let mut text = String::new();
    for k in 0..=x.truncation() {
        text.push_str(&format!("H{k}: {}\n", groups.describe(k)));
    }
    text.push_str("RESULT: PASS\n");
    Ok(Outcome::pass(text))
}

fn run_product_iso(m: usize, n: usize, truncate: usize) -> Result<Outcome> {
    let iso = product_vertex_iso(m, n, truncate).map_err(|e| anyhow!("{e}"))?;
    let mut text = String::new();
    text.push_str(&format!("target: thick {}\n", m * n + m + n));
    for k in 0..=truncate {
        let left = iso.product.complex.level_size(k);
        let right = iso.target.complex.level_size(k);
        text.push_str(&format!("level {k}: {left} = {right}\n"));
        if left != right {
            text.push_str("RESULT: FAIL\n");
            return Ok(Outcome {
                report: text,
                pass: false,
            });
        }
    }
    let region = prism_region(m, n, truncate).map_err(|e| anyhow!("{e}"))?;
    let chains = maximal_chain_count(m, n);
    text.push_str(&format!(
        "prism-cells: {:?}\nmaximal-chains: {chains}\n",
        region.mask.counts()
    ));
    text.push_str("RESULT: PASS\n");
    Ok(Outcome {
        report: text,
        pass: true,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
