fn main() {
    std::process::exit(anglelab::cli::main_with(std::env::args_os()));
}
