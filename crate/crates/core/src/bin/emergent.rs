fn main() {
    std::process::exit(emergent::cli::main_with_args(std::env::args_os()));
}
