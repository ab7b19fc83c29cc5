use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use glosis_core::query::{evaluate_graph, parse_query, to_csv, to_sparql_json, EvalOptions};
use glosis_core::rdf::vocab::owl;
use glosis_core::rdf::{parse_turtle, serialize_turtle, Graph, PrefixMap};
use glosis_core::schema::{load_catalog, load_manifest, read_manifest, OntologyCatalog};
use glosis_core::transform::{
    bump_version, codelist_csv_to_rdf, codelist_rdf_to_csv, ingest_csv, read_codelist_csv, write_codelist_csv,
    MappingConfig, VersionPart,
};
use glosis_core::validate::{validate_dataset, ValidationConfig};
use glosis_service::{EndpointConfig, HttpServices};

/// GloSIS linked-data tools.
///
/// Exit codes: 0 success, 1 validation errors or an empty result, 2 usage
/// or tool failure.
#[derive(Parser)]
#[command(name = "glosis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Checks Turtle syntax and prints the triple count.
    Parse {
        file: PathBuf,
        /// Base IRI for relative references.
        #[arg(long)]
        base: Option<String>,
    },
    /// Validates data against an ontology catalog.
    Validate {
        #[arg(required = true)]
        data: Vec<PathBuf>,
        /// Ontology manifest, one `IRI<TAB>path` per line.
        #[arg(long)]
        ontology: PathBuf,
        /// Treats cardinality findings as errors.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Converts codelists between CSV and SKOS/OWL Turtle.
    Codelist {
        #[command(subcommand)]
        command: CodelistCommand,
    },
    /// Maps a survey table to GloSIS RDF.
    Ingest {
        csv: PathBuf,
        /// JSON mapping configuration.
        #[arg(long)]
        mapping: PathBuf,
        /// Output Turtle file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Runs a SPARQL query over local data.
    Query(QueryArgs),
    /// Runs the HTTP service.
    Serve {
        /// TOML service configuration.
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured bind address.
        #[arg(long, env = "GLOSIS_BIND")]
        bind: Option<String>,
    },
    /// Maintains module versions.
    Version {
        #[command(subcommand)]
        command: VersionCommand,
    },
    /// Writes the documentation configuration of a module as key=value lines.
    DocgenConfig {
        module: PathBuf,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CodelistCommand {
    /// CSV rows to a concept scheme and enumerated class.
    Import {
        csv: PathBuf,
        /// Output Turtle file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A concept scheme to CSV rows.
    Export {
        turtle: PathBuf,
        /// Output CSV file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VersionCommand {
    /// Sets every module to the highest current version with one part
    /// incremented, rewriting the files in place.
    Bump {
        #[arg(value_enum)]
        part: Part,
        /// Directory holding a `*.manifest` or the module `*.ttl` files.
        #[arg(long)]
        modules: PathBuf,
    },
}

#[derive(Args)]
struct QueryArgs {
    /// File holding the query.
    #[arg(required_unless_present = "inline", conflicts_with = "inline")]
    file: Option<PathBuf>,
    /// Query text.
    #[arg(long)]
    inline: Option<String>,
    /// Turtle files to query.
    #[arg(long, required = true, num_args = 1..)]
    data: Vec<PathBuf>,
    /// URL of a remote endpoint SERVICE blocks may call; repeatable.
    #[arg(long = "endpoint", value_name = "URL")]
    endpoints: Vec<String>,
    /// Failing SERVICE blocks contribute no rows.
    #[arg(long)]
    lenient: bool,
    #[arg(long, value_enum, default_value_t = ResultFormat::Json)]
    format: ResultFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ResultFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Part {
    Major,
    Minor,
    Micro,
}

/// How a command failed.
enum Failure {
    /// The input does not conform, or a required result is empty.
    Invalid(String),
    /// Bad usage, unreadable input or an internal error.
    Tool(String),
}

type Outcome = Result<(), Failure>;

fn tool(e: impl std::fmt::Display) -> Failure {
    Failure::Tool(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Tool(format!("{}: {e}", path.display())))
}

fn read_turtle(path: &Path, base: Option<&str>) -> Result<Graph, Failure> {
    parse_turtle(&read(path)?, base).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Tool(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(tool),
    }
}

fn turtle_text(g: &Graph) -> String {
    let prefixes = if g.prefixes().is_empty() { PrefixMap::with_well_known() } else { g.prefixes().clone() };
    serialize_turtle(g, &prefixes)
}

fn catalog(manifest: &Path) -> Result<OntologyCatalog, Failure> {
    load_catalog(load_manifest(manifest).map_err(tool)?).map_err(tool)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Parse { file, base } => {
            let g = read_turtle(&file, base.as_deref())?;
            println!("{} triples", g.len());
            Ok(())
        }
        Command::Validate { data, ontology, strict, format } => validate(&data, &ontology, strict, format),
        Command::Codelist { command: CodelistCommand::Import { csv, output } } => {
            let rows = read_codelist_csv(read(&csv)?.as_bytes()).map_err(|e| Failure::Invalid(e.to_string()))?;
            let g = codelist_csv_to_rdf(&rows).map_err(|e| Failure::Invalid(e.to_string()))?;
            emit(output.as_deref(), &turtle_text(&g))
        }
        Command::Codelist { command: CodelistCommand::Export { turtle, output } } => {
            let export =
                codelist_rdf_to_csv(&read_turtle(&turtle, None)?).map_err(|e| Failure::Invalid(e.to_string()))?;
            for w in &export.warnings {
                eprintln!("warning: {w}");
            }
            let mut buf = Vec::new();
            write_codelist_csv(&export.rows, &mut buf).map_err(tool)?;
            emit(output.as_deref(), &String::from_utf8(buf).map_err(tool)?)
        }
        Command::Ingest { csv, mapping, output } => {
            let mapping = MappingConfig::from_json(&read(&mapping)?).map_err(tool)?;
            let out = ingest_csv(read(&csv)?.as_bytes(), &mapping).map_err(|e| Failure::Invalid(e.to_string()))?;
            emit(output.as_deref(), &turtle_text(&out.graph))?;
            for f in &out.findings {
                eprintln!(
                    "row {}{}: {}",
                    f.row + 1,
                    f.column.as_ref().map(|c| format!(" column {c}")).unwrap_or_default(),
                    f.message
                );
            }
            if out.findings.is_empty() {
                Ok(())
            } else {
                Err(Failure::Invalid(format!("{} rows had problems", out.findings.len())))
            }
        }
        Command::Query(args) => query(args),
        Command::Serve { config, bind } => serve(&config, bind),
        Command::Version { command: VersionCommand::Bump { part, modules } } => bump(part, &modules),
        Command::DocgenConfig { module, output } => docgen_config(&module, output.as_deref()),
    }
}

fn validate(data: &[PathBuf], ontology: &Path, strict: bool, format: ReportFormat) -> Outcome {
    let cat = catalog(ontology)?;
    for w in cat.warnings() {
        eprintln!("warning: {w}");
    }
    let mut merged = Graph::new();
    for d in data {
        merged.merge(&read_turtle(d, None)?);
    }
    let config = ValidationConfig { strict, ..Default::default() };
    let report = validate_dataset(&merged, &cat, &config);
    let text = match format {
        ReportFormat::Text => report.to_text(),
        ReportFormat::Json => format!("{:#}\n", report.to_json()),
    };
    emit(None, &text)?;
    if report.conforms() {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("{} errors", report.errors().count())))
    }
}

fn query(args: QueryArgs) -> Outcome {
    let text = match (&args.inline, &args.file) {
        (Some(q), _) => q.clone(),
        (None, Some(f)) => read(f)?,
        (None, None) => return Err(Failure::Tool("no query given".into())),
    };
    let q = parse_query(&text).map_err(tool)?;
    let mut graph = Graph::new();
    for d in &args.data {
        graph.merge(&read_turtle(d, None)?);
    }
    let services = HttpServices::new(&args.endpoints, glosis_service::SERVICE_TIMEOUT);
    let table = evaluate_graph(&graph, &q, &services, EvalOptions { lenient_services: args.lenient }).map_err(tool)?;
    let out = match args.format {
        ResultFormat::Json => format!("{:#}\n", to_sparql_json(&table)),
        ResultFormat::Csv => to_csv(&table),
    };
    emit(None, &out)?;
    if table.is_empty() {
        Err(Failure::Invalid("no results".into()))
    } else {
        Ok(())
    }
}

fn serve(config: &Path, bind: Option<String>) -> Outcome {
    let mut config = EndpointConfig::from_file(config).map_err(tool)?;
    if let Some(bind) = bind {
        config.bind = bind;
    }
    let state = glosis_service::app_state(&config).map_err(tool)?;
    let runtime = tokio::runtime::Runtime::new().map_err(tool)?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&config.bind).await.map_err(tool)?;
        eprintln!("listening on http://{}", listener.local_addr().map_err(tool)?);
        glosis_service::serve(listener, state).await.map_err(tool)
    })
}

fn ontology_iri(g: &Graph) -> Result<String, &'static str> {
    let mut headers = g.instances_of(owl::ONTOLOGY);
    match (headers.next(), headers.next()) {
        (Some(h), None) if h.is_iri() => Ok(h.value().to_string()),
        _ => Err("no unique owl:Ontology header"),
    }
}

/// Module files of `dir`: the entries of its manifest, or else every
/// Turtle file, named by its owl:Ontology header.
fn module_files(dir: &Path) -> Result<Vec<(String, PathBuf)>, Failure> {
    let mut entries: Vec<PathBuf> =
        fs::read_dir(dir).map_err(tool)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>().map_err(tool)?;
    entries.sort();
    let manifests: Vec<&PathBuf> = entries.iter().filter(|p| p.extension().is_some_and(|e| e == "manifest")).collect();
    match manifests.as_slice() {
        [m] => Ok(read_manifest(m).map_err(tool)?.into_iter().map(|e| (e.iri, e.path)).collect()),
        [] => entries
            .iter()
            .filter(|p| p.extension().is_some_and(|e| e == "ttl"))
            .map(|p| {
                let iri =
                    ontology_iri(&read_turtle(p, None)?).map_err(|e| Failure::Tool(format!("{}: {e}", p.display())))?;
                Ok((iri, p.clone()))
            })
            .collect(),
        _ => Err(Failure::Tool(format!("{}: more than one manifest", dir.display()))),
    }
}

fn bump(part: Part, dir: &Path) -> Outcome {
    let files = module_files(dir)?;
    let mut modules = Vec::new();
    for (iri, path) in &files {
        modules.push((iri.clone(), read_turtle(path, Some(iri))?));
    }
    let part = match part {
        Part::Major => VersionPart::Major,
        Part::Minor => VersionPart::Minor,
        Part::Micro => VersionPart::Micro,
    };
    let (version, bumped) = bump_version(&modules, part).map_err(tool)?;
    for ((iri, path), (_, g)) in files.iter().zip(&bumped) {
        fs::write(path, turtle_text(g)).map_err(|e| Failure::Tool(format!("{}: {e}", path.display())))?;
        println!("{iri}\t{version}");
    }
    Ok(())
}

fn docgen_config(module: &Path, output: Option<&Path>) -> Outcome {
    let g = read_turtle(module, None)?;
    let iri = ontology_iri(&g).map_err(|e| Failure::Invalid(format!("{}: {e}", module.display())))?;
    let cat = load_catalog(vec![(iri.clone(), g)]).map_err(tool)?;
    let meta = cat.extract_metadata(&iri).map_err(tool)?;
    let mut lines = vec![("ontologyIRI", iri)];
    let mut opt = |key, value: &Option<String>| {
        if let Some(v) = value {
            lines.push((key, v.clone()));
        }
    };
    opt("title", &meta.title);
    opt("version", &meta.version_info);
    opt("versionIRI", &meta.version_iri);
    opt("license", &meta.license);
    for (key, values) in
        [("authors", &meta.creators), ("contributors", &meta.contributors), ("affiliations", &meta.affiliations)]
    {
        if !values.is_empty() {
            lines.push((key, values.join("; ")));
        }
    }
    let text: String = lines.iter().map(|(k, v)| format!("{k}={}\n", v.replace('\n', " "))).collect();
    emit(output, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("glosis: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Tool(m)) => {
            eprintln!("glosis: {m}");
            ExitCode::from(2)
        }
    }
}
