fn main() {
    std::process::exit(sphermax::cli::run(std::env::args_os()));
}
