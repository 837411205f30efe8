fn main() {
    std::process::exit(tamejump::cli::main_with_args(std::env::args_os()));
}
