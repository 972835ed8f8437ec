fn main() {
    let (code, report) = markovdyn::cli::run(std::env::args());
    print!("{report}");
    std::process::exit(code);
}
