fn main() {
    let (code, out) = orbit_cli::run(std::env::args_os());
    if code == orbit_cli::EXIT_INPUT || code == orbit_cli::EXIT_RESOURCE {
        eprintln!("{out}");
    } else {
        println!("{out}");
    }
    std::process::exit(code);
}
