fn main() {
    std::process::exit(stratlab::cli::main_with_args(std::env::args_os()));
}
