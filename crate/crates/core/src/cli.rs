//! The `np` command.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::index::{self, IndexMeta};
use crate::nanopub::{self, extract_nanopubs, CheckEntry, CheckReport, Classification, Nanopub};
use crate::rdf::{Dataset, Format};
use crate::registry::{Client, ServerList};
use crate::sign::{self, KeyPair};
use crate::trusty;

#[derive(Parser, Debug)]
#[command(
    name = "np",
    version,
    about = "Create, check, sign, index, publish and retrieve nanopublications",
    arg_required_else_help = true
)]
struct Cli {
    /// File listing registry servers, one URL per line
    #[arg(long, global = true, env = "NP_SERVERS", value_name = "FILE")]
    servers: Option<PathBuf>,
    /// RDF format of input files (trig or nquads); inferred from the extension by default
    #[arg(long, global = true, value_name = "FORMAT")]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check nanopublications for well-formedness, trusty URIs and signatures
    Check(Check),
    /// Give nanopublications trusty URIs
    Mktrusty(Transform),
    /// Assign new trusty URIs to nanopublications whose code no longer matches
    Fix(Transform),
    /// Create an index nanopublication listing the given nanopublications
    Mkindex(Mkindex),
    /// Upload trusty nanopublications to the server network
    Publish(Publish),
    /// Retrieve and verify nanopublications from the server network
    Get(Get),
    /// Report on which servers a nanopublication is found
    Status(Status),
    /// Show information about a server
    Server(Server),
    /// Create a new key pair for signing
    Mkkeys(Mkkeys),
    /// Sign nanopublications and give them trusty URIs
    Sign(SignArgs),
}

#[derive(Args, Debug)]
struct Check {
    /// Print one line per nanopublication to stderr
    #[arg(short, long)]
    verbose: bool,
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct Transform {
    /// Print the URI of every output nanopublication
    #[arg(short, long)]
    verbose: bool,
    /// Output file (default: input name with a prefix)
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct Mkindex {
    #[arg(short, long)]
    verbose: bool,
    #[arg(short, long, value_name = "FILE", default_value = "index.trig")]
    output: PathBuf,
    /// Index title
    #[arg(short, long)]
    title: Option<String>,
    /// Index description
    #[arg(short, long)]
    description: Option<String>,
    /// Creator IRI (repeatable)
    #[arg(short, long = "creator", value_name = "IRI")]
    creators: Vec<String>,
    /// Trusty URI of an index to include as a sub-index (repeatable)
    #[arg(short, long = "subindex", value_name = "URI")]
    subindexes: Vec<String>,
    /// URI prefix for the new index
    #[arg(long, default_value = index::DEFAULT_BASE)]
    base: String,
    /// Maximum number of elements per index nanopublication
    #[arg(long, default_value_t = index::DEFAULT_CAPACITY)]
    capacity: usize,
    #[arg(value_name = "FILE")]
    files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct Publish {
    #[arg(short, long)]
    verbose: bool,
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct Get {
    #[arg(short, long)]
    verbose: bool,
    /// Retrieve the whole content of an index
    #[arg(short = 'c', long)]
    content: bool,
    /// Output file (default: stdout)
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Trusty URIs or artifact codes
    #[arg(required = true, value_name = "REF")]
    refs: Vec<String>,
}

#[derive(Args, Debug)]
struct Status {
    /// List every URL the nanopublication was found at
    #[arg(short, long)]
    all: bool,
    #[arg(value_name = "REF")]
    reference: String,
}

#[derive(Args, Debug)]
struct Server {
    #[arg(value_name = "URL")]
    url: String,
}

#[derive(Args, Debug)]
struct Mkkeys {
    /// Private key file; the public key goes next to it with suffix .pub
    #[arg(short, long, value_name = "FILE")]
    key: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SignArgs {
    #[arg(short, long)]
    verbose: bool,
    /// Private key file (default ~/.nanopub/id_rsa)
    #[arg(short, long, value_name = "FILE")]
    key: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
}

/// Failure of one subcommand; already described on stderr.
struct Failed;

type Outcome = Result<(), Failed>;

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    servers: Option<PathBuf>,
    format: Option<Format>,
}

// Write errors on stdout/stderr have nowhere to go.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{ let _ = writeln!($w, $($arg)*); }};
}

impl Ctx<'_> {
    fn fail(&mut self, msg: impl std::fmt::Display) -> Failed {
        say!(self.err, "np: {msg}");
        Failed
    }

    fn format_for(&self, path: &Path) -> Format {
        self.format
            .or_else(|| Format::from_extension(path))
            .unwrap_or(Format::TriG)
    }

    fn read(&mut self, path: &Path) -> Result<Dataset, Failed> {
        let text = fs::read_to_string(path).map_err(|e| self.fail(format!("{}: {e}", path.display())))?;
        Dataset::parse(&text, self.format_for(path))
            .map_err(|e| self.fail(format!("{}: {e}", path.display())))
    }

    /// Every nanopub in `path`; structural problems are reported and fail.
    fn read_nanopubs(&mut self, path: &Path) -> Result<(Vec<Nanopub>, Dataset), Failed> {
        let ds = self.read(path)?;
        let prefixes = Dataset::new().with_prefixes(ds.prefixes());
        let mut nps = Vec::new();
        let mut bad = false;
        for r in extract_nanopubs(ds) {
            match r {
                Ok(np) => nps.push(np),
                Err(e) => {
                    say!(self.err, "np: {}: {e}", path.display());
                    bad = true;
                }
            }
        }
        if bad {
            Err(Failed)
        } else {
            Ok((nps, prefixes))
        }
    }

    fn write(&mut self, path: &Path, nps: &[Nanopub], prefixes: &Dataset) -> Outcome {
        let text = render(nps, prefixes, self.format_for(path)).map_err(|e| self.fail(e))?;
        fs::write(path, text).map_err(|e| self.fail(format!("{}: {e}", path.display())))
    }

    fn client(&mut self) -> Result<Client, Failed> {
        let list = match &self.servers {
            Some(path) => ServerList::load(path).map_err(|e| self.fail(e))?,
            None => ServerList::default(),
        };
        Ok(Client::new(list))
    }
}

fn render(nps: &[Nanopub], prefixes: &Dataset, format: Format) -> Result<String, String> {
    let quads = nps.iter().flat_map(|n| n.quads().iter().cloned()).collect();
    Dataset::from_quads(quads)
        .with_prefixes(prefixes.prefixes())
        .serialize(format)
        .map_err(|e| e.to_string())
}

fn prefixed(path: &Path, prefix: &str) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{prefix}.{name}"))
}

fn check(ctx: &mut Ctx, args: Check) -> Outcome {
    let mut report = CheckReport::default();
    for path in &args.files {
        match ctx.read(path) {
            Ok(ds) => report.merge(nanopub::check(extract_nanopubs(ds))),
            Err(Failed) => report.entries.push(CheckEntry {
                uri: None,
                classification: Classification::Invalid(vec![format!("{}: unreadable", path.display())]),
            }),
        }
    }
    for e in &report.entries {
        let uri = e.uri.as_deref().unwrap_or("(unknown)");
        match &e.classification {
            Classification::Invalid(reasons) => {
                for r in reasons {
                    say!(ctx.err, "Invalid nanopub {uri}: {r}");
                }
            }
            Classification::ValidPlain if args.verbose => say!(ctx.err, "{uri}: valid (not trusty)"),
            Classification::ValidTrusty if args.verbose => say!(ctx.err, "{uri}: valid (trusty)"),
            Classification::ValidSigned if args.verbose => say!(ctx.err, "{uri}: signed"),
            _ => {}
        }
    }
    say!(ctx.out, "{report}");
    if report.all_valid() {
        Ok(())
    } else {
        Err(Failed)
    }
}

fn transform<F, E>(ctx: &mut Ctx, args: Transform, prefix: &str, mut op: F) -> Outcome
where
    F: FnMut(&Nanopub) -> Result<Nanopub, E>,
    E: std::fmt::Display,
{
    let mut ok = true;
    let mut combined: Vec<Nanopub> = Vec::new();
    let mut combined_prefixes = Dataset::new();
    for path in &args.files {
        let Ok((nps, prefixes)) = ctx.read_nanopubs(path) else {
            ok = false;
            continue;
        };
        let mut done = Vec::new();
        for np in &nps {
            match op(np) {
                Ok(t) => {
                    if args.verbose {
                        say!(ctx.out, "Nanopub URI: {}", t.uri());
                    }
                    done.push(t);
                }
                Err(e) => {
                    say!(ctx.err, "np: {}: {e}", np.uri());
                    ok = false;
                }
            }
        }
        if args.output.is_some() {
            combined.extend(done);
            for (p, ns) in prefixes.prefixes() {
                combined_prefixes.set_prefix(p.clone(), ns.clone());
            }
        } else if !done.is_empty() {
            ok &= ctx.write(&prefixed(path, prefix), &done, &prefixes).is_ok();
        }
    }
    if let Some(out) = &args.output {
        ok &= ctx.write(out, &combined, &combined_prefixes).is_ok();
    }
    if ok {
        Ok(())
    } else {
        Err(Failed)
    }
}

fn mkindex(ctx: &mut Ctx, args: Mkindex) -> Outcome {
    let mut members = Vec::new();
    for path in &args.files {
        let (nps, _) = ctx.read_nanopubs(path)?;
        members.extend(nps.iter().map(|n| n.uri().to_string()));
    }
    let meta = IndexMeta {
        base: args.base,
        title: args.title,
        description: args.description,
        creators: args.creators,
        created: None,
        capacity: args.capacity,
    };
    let chain = index::make_index(&members, &args.subindexes, &meta).map_err(|e| ctx.fail(e))?;
    let mut prefixes = Dataset::new();
    prefixes.set_prefix("npx", index::vocab::NPX);
    prefixes.set_prefix("np", nanopub::vocab::NP);
    ctx.write(&args.output, &chain, &prefixes)?;
    if args.verbose {
        for np in &chain {
            say!(ctx.out, "Nanopub URI: {}", np.uri());
        }
    }
    let top = chain.last().expect("make_index returns at least one nanopub");
    say!(ctx.out, "Index URI: {}", top.uri());
    Ok(())
}

fn publish(ctx: &mut Ctx, args: Publish) -> Outcome {
    let mut all = Vec::new();
    for path in &args.files {
        let (nps, _) = ctx.read_nanopubs(path)?;
        all.extend(nps);
    }
    let client = ctx.client()?;
    let reports = client.publish(&all).map_err(|e| ctx.fail(e))?;
    if args.verbose {
        for np in &all {
            say!(ctx.out, "Nanopub URI: {}", np.uri());
        }
    }
    for r in reports {
        say!(ctx.out, "{r}");
    }
    Ok(())
}

fn get(ctx: &mut Ctx, args: Get) -> Outcome {
    let client = ctx.client()?;
    let mut nps = Vec::new();
    let mut ok = true;
    for r in &args.refs {
        let got = if args.content {
            client
                .get_content(r)
                .map(|c| c.nanopubs().cloned().collect::<Vec<_>>())
        } else {
            client.get(r).map(|n| vec![n])
        };
        match got {
            Ok(found) => nps.extend(found),
            Err(e) => {
                say!(ctx.err, "np: {r}: {e}");
                ok = false;
            }
        }
    }
    if args.verbose {
        for np in &nps {
            say!(ctx.err, "Nanopub URI: {}", np.uri());
        }
    }
    if !nps.is_empty() {
        match &args.output {
            Some(path) => ok &= ctx.write(path, &nps, &Dataset::new()).is_ok(),
            None => {
                let format = ctx.format.unwrap_or(Format::TriG);
                let text = render(&nps, &Dataset::new(), format).map_err(|e| ctx.fail(e))?;
                let _ = ctx.out.write_all(text.as_bytes());
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failed)
    }
}

fn status(ctx: &mut Ctx, args: Status) -> Outcome {
    let client = ctx.client()?;
    let report = client.status(&args.reference).map_err(|e| ctx.fail(e))?;
    for url in &report.corrupt_at {
        say!(ctx.err, "np: {url}: content does not verify");
    }
    for url in &report.unreachable {
        say!(ctx.err, "np: {url}: unreachable");
    }
    let _ = ctx.out.write_all(report.render(args.all).as_bytes());
    Ok(())
}

fn server(ctx: &mut Ctx, args: Server) -> Outcome {
    let client = ctx.client()?;
    let info = client.server_info(&args.url).map_err(|e| ctx.fail(e))?;
    say!(ctx.out, "Server URL: {}", info.url);
    say!(ctx.out, "Protocol version: {}", info.protocol_version);
    say!(ctx.out, "Description: {}", info.description);
    say!(
        ctx.out,
        "Admits publish: {}",
        if info.admits_publish { "yes" } else { "no" }
    );
    say!(ctx.out, "Page size: {}", info.page_size);
    say!(ctx.out, "Nanopub count: {}", info.nanopub_count);
    Ok(())
}

fn mkkeys(ctx: &mut Ctx, args: Mkkeys) -> Outcome {
    let path = args.key.unwrap_or_else(sign::default_key_path);
    sign::make_keys(&path).map_err(|e| ctx.fail(e))?;
    say!(ctx.out, "Private key: {}", path.display());
    say!(ctx.out, "Public key: {}", sign::public_key_path(&path).display());
    Ok(())
}

fn sign_files(ctx: &mut Ctx, args: SignArgs) -> Outcome {
    let path = args.key.unwrap_or_else(sign::default_key_path);
    let key = KeyPair::load(&path).map_err(|e| ctx.fail(e))?;
    let t = Transform {
        verbose: args.verbose,
        output: args.output,
        files: args.files,
    };
    transform(ctx, t, "signed", |np| sign::sign(np, &key))
}

/// Runs `np` with `args` (including the program name). Returns the exit
/// code: 0 on success, 1 when any item failed, 2 on usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = out.write_all(text.as_bytes());
                    2
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let mut ctx = Ctx {
        out,
        err,
        servers: cli.servers,
        format: cli.format,
    };
    let result = match cli.command {
        Command::Check(a) => check(&mut ctx, a),
        Command::Mktrusty(a) => transform(&mut ctx, a, "trusty", trusty::make_trusty),
        Command::Fix(a) => transform(&mut ctx, a, "fixed", trusty::fix),
        Command::Mkindex(a) => mkindex(&mut ctx, a),
        Command::Publish(a) => publish(&mut ctx, a),
        Command::Get(a) => get(&mut ctx, a),
        Command::Status(a) => status(&mut ctx, a),
        Command::Server(a) => server(&mut ctx, a),
        Command::Mkkeys(a) => mkkeys(&mut ctx, a),
        Command::Sign(a) => sign_files(&mut ctx, a),
    };
    match result {
        Ok(()) => 0,
        Err(Failed) => 1,
    }
}

#[cfg(test)]
mod tests;
