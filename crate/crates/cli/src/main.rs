fn main() {
    std::process::exit(bandwidth_verifier::run(std::env::args_os()));
}
