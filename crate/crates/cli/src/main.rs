fn main() {
    std::process::exit(toric_ci_cli::run(std::env::args_os()));
}
