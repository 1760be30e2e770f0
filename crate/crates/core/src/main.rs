fn main() {
    let (status, out, err) = tropgw::cli::main_with_args(std::env::args_os());
    print!("{out}");
    eprint!("{err}");
    std::process::exit(status);
}
