fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(bellcord::cli::run(&args));
}
