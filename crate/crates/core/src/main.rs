fn main() {
    std::process::exit(strobe_core::cli::run(std::env::args_os()));
}
