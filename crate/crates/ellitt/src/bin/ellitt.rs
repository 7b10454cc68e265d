fn main() {
    // CLI wiring lands with the identities registry.
}
