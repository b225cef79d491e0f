fn main() {
    std::process::exit(rational_toeplitz_cli::main_with(std::env::args_os()));
}
