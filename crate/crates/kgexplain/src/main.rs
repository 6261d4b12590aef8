fn main() {
    std::process::exit(kgexplain::run(std::env::args_os()));
}
