fn main() {
    std::process::exit(linecfg::cli::run(std::env::args_os()));
}
