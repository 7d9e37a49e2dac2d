fn main() {
    std::process::exit(isodirac::cli::run(std::env::args().collect()));
}
