use clap::Parser;

fn main() {
    let cli = halfspin_verify::Cli::parse();
    let code = halfspin_verify::main_with(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
