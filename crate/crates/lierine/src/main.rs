fn main() {
    std::process::exit(lierine::cli::run(std::env::args_os()));
}
