fn main() {
    std::process::exit(sted::cli::run(std::env::args_os()));
}
