fn main() {
    std::process::exit(privmark_cli::run(std::env::args_os()));
}
