fn main() {
    std::process::exit(pilift::cli::run());
}
