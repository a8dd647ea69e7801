fn main() {
    std::process::exit(ginv_cli::main_with_args(std::env::args_os()));
}
