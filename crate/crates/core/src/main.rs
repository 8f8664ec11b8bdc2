fn main() {
    std::process::exit(hprofile::cli::main_with_args(std::env::args_os()));
}
