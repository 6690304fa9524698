fn main() {
    std::process::exit(gl_decode::run(std::env::args_os()));
}
