fn main() {
    std::process::exit(quote_bootstrap::cli::main_with_args(std::env::args_os()));
}
