fn main() {
    std::process::exit(klortho::cli::main_with_args(std::env::args_os()));
}
