fn main() {
    std::process::exit(wepbench_cli::main_with(std::env::args_os()));
}
