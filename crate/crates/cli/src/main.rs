use std::io;

fn main() {
    let code = qpc_cli::execute(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
