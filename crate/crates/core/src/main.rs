fn main() {
    std::process::exit(expohedron::cli::main_with_args(std::env::args_os()));
}
