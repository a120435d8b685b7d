fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = frobstat_cli::run(std::env::args().skip(1), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
