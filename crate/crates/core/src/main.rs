fn main() {
    std::process::exit(primfilt::certify::run(std::env::args_os()));
}
