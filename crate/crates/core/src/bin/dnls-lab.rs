fn main() {
    std::process::exit(dnls_lab::cli::main_from_args(std::env::args_os()));
}
