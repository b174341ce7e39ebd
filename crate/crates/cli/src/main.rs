fn main() {
    std::process::exit(saddlewalk_cli::run(std::env::args_os()));
}
