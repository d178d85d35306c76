fn main() {
    std::process::exit(lifted_codes::cli::run(std::env::args_os()));
}
