fn main() {
    std::process::exit(sdeblur::cli::run(std::env::args_os()));
}
