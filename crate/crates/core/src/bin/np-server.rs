use std::net::IpAddr;
use std::path::PathBuf;

use clap::Parser;
use nanopub::registry::{NodeConfig, RunningNode, DEFAULT_PAGE_SIZE};

/// Runs one registry node.
#[derive(Parser)]
#[command(name = "np-server", version)]
struct Args {
    /// 0 picks a free port.
    #[arg(long, default_value_t = 0)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    #[arg(long)]
    data: PathBuf,
    /// Serve read-only.
    #[arg(long)]
    no_publish: bool,
    #[arg(long, default_value_t = DEFAULT_PAGE_SIZE)]
    page_size: usize,
    #[arg(long)]
    description: Option<String>,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    let mut config = NodeConfig::new(args.data);
    config.host = args.host;
    config.port = args.port;
    config.admits_publish = !args.no_publish;
    config.page_size = args.page_size;
    if let Some(d) = args.description {
        config.description = d;
    }
    let node = match RunningNode::start(config) {
        Ok(n) => n,
        Err(e) => {
            eprintln!("np-server: {e}");
            std::process::exit(1);
        }
    };
    println!("{}", node.url());
    loop {
        std::thread::park();
    }
}
