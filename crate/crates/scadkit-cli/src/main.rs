use std::io::{stderr, stdout};

fn main() {
    let code = scadkit_cli::run_with(std::env::args(), &mut stdout(), &mut stderr());
    std::process::exit(code);
}
