fn main() {
    std::process::exit(charvar::cli::run());
}
