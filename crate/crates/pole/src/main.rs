fn main() {
    std::process::exit(pole::cli::run_from(std::env::args_os()));
}
