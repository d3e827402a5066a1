fn main() {
    if let Some(n) = std::env::var("STRONGSUM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .expect("thread pool is configured once");
    }
    std::process::exit(strongsum_cli::main_with_args(std::env::args_os()));
}
