fn main() {
    std::process::exit(weilscan_cli::run(std::env::args_os()));
}
