fn main() {
    std::process::exit(lprobust::cli::run(std::env::args_os()));
}
