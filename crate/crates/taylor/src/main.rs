fn main() {
    std::process::exit(taylor::cli::main_with(std::env::args_os()));
}
