fn main() {
    std::process::exit(matspace::cli::run(std::env::args_os()));
}
