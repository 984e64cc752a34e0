fn main() {
    std::process::exit(aklt_hqmm::cli::main_with_args(std::env::args_os()));
}
