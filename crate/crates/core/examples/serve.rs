//! Run the HTTP API against a throwaway data directory.
//!
//! ```bash
//! cargo run --example serve
//! curl -s localhost:<port>/api/practice
//! ```
//!
//! Stops on ctrl-c.

use lotforge::builtin_catalog;
use lotforge::service::{serve, AppState, Store};

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let store = Store::open(dir.path())?;
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    println!(
        "listening on http://{} (data in {})",
        listener.local_addr()?,
        dir.path().display()
    );
    let state = AppState::new(store, builtin_catalog(), 42);
    serve(listener, state, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await?;
    Ok(())
}
