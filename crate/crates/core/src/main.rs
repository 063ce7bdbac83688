fn main() {
    std::process::exit(sphereforge::cli::run(std::env::args_os()));
}
