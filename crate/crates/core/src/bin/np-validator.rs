use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::Parser;
use nanopub::registry::ServerList;
use nanopub::validator::{router, ValidatorConfig, DEFAULT_BODY_LIMIT};

/// Serves the validator API and UI.
#[derive(Parser)]
#[command(name = "np-validator", version)]
struct Args {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Registry servers, one URL per line.
    #[arg(long, env = "NP_SERVERS")]
    servers: Option<PathBuf>,
    /// Directory with the built UI.
    #[arg(long)]
    assets: Option<PathBuf>,
    /// Request body limit in bytes.
    #[arg(long, default_value_t = DEFAULT_BODY_LIMIT)]
    limit: usize,
}

#[tokio::main]
async fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    let servers = match args.servers.as_deref().map(ServerList::load).transpose() {
        Ok(s) => s.unwrap_or_default(),
        Err(e) => {
            eprintln!("np-validator: {e}");
            std::process::exit(2);
        }
    };
    let app = router(ValidatorConfig {
        servers,
        body_limit: args.limit,
        assets: args.assets,
    });
    let addr = SocketAddr::new(args.host, args.port);
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("np-validator: cannot listen on {addr}: {e}");
            std::process::exit(1);
        }
    };
    println!("http://{}/", listener.local_addr().expect("bound"));
    if let Err(e) = axum::serve(listener, app).await {
        eprintln!("np-validator: {e}");
        std::process::exit(1);
    }
}
