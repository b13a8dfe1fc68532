fn main() {
    std::process::exit(adseq::harness::cli::run(std::env::args()));
}
