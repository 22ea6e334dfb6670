fn main() {
    std::process::exit(k3_pairs::cli::main_with_args(std::env::args_os()));
}
