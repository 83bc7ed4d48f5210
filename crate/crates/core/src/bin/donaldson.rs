use std::io;

use donaldson::cli;

fn main() {
    if let Err(e) = cli::configure_threads() {
        eprintln!("{}", serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
        std::process::exit(2);
    }
    let code =
        cli::run(std::env::args_os(), &mut io::stdin().lock(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
