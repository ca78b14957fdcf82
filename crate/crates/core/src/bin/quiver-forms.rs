fn main() {
    std::process::exit(quiver_forms::cli::main_with(std::env::args_os()));
}
