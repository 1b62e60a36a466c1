fn main() {
    std::process::exit(defcms::cli::run(std::env::args_os()));
}
