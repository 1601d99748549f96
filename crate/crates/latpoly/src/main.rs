fn main() {
    std::process::exit(latpoly::cli::run_main(std::env::args().collect()));
}
