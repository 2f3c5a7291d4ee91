fn main() {
    std::process::exit(germ::cli_main());
}
