fn main() {
    std::process::exit(cfinite::cli::run(std::env::args_os()));
}
