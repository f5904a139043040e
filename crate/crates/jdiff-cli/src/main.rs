fn main() {
    // Placeholder entry point; the verb dispatcher lands with the CLI layer.
    eprintln!("jdiff: not yet wired");
    std::process::exit(3);
}
