fn main() {
    std::process::exit(mvkit_cli::run(std::env::args()));
}
