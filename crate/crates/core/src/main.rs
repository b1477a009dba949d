fn main() {
    std::process::exit(chainmap::cli::main_with_args(std::env::args_os()));
}
