fn main() {
    std::process::exit(rkhs_lab::cli::run(std::env::args_os()));
}
