fn main() {
    std::process::exit(quasilab::cli::main_with_args(std::env::args_os()));
}
