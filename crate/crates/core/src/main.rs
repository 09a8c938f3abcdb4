fn main() {
    std::process::exit(arquiver::run());
}
