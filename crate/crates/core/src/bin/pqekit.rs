fn main() {
    let code = pqekit::cli::run_with(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
