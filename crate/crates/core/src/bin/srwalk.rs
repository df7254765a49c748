fn main() {
    std::process::exit(srwalk::cli::run(std::env::args_os()));
}
