fn main() {
    std::process::exit(kwise::cli::main_with_args(std::env::args_os()));
}
