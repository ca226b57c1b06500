fn main() {
    std::process::exit(lift_verify::cli::main_with_args(std::env::args_os()));
}
