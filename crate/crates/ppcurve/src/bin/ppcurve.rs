fn main() {
    std::process::exit(ppcurve::cli::run());
}
