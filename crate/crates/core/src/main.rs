fn main() {
    std::process::exit(parasim::cli::run(std::env::args_os()));
}
