use std::net::{IpAddr, SocketAddr};

use clap::Parser;

#[derive(Parser)]
#[command(name = "typestate-service", version, about = "HTTP service for typestate translation")]
struct Args {
    /// Port to listen on; 0 picks a free one.
    #[arg(long, env = "TYPESTATE_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let args = Args::parse();
    let listener = tokio::net::TcpListener::bind(SocketAddr::new(args.host, args.port)).await?;
    // the first stdout line announces the bound address
    println!("listening on {}", listener.local_addr()?);
    typestate_service::serve(listener).await
}
