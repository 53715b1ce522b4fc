use std::io::{stderr, stdout};

fn main() {
    let code = holderkit::cli::run(std::env::args(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
