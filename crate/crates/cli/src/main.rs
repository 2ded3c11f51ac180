use std::io::Read;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let seed = std::env::var(stokeslab::dispatch::SEED_ENV).ok();
    let out = stokeslab::dispatch::dispatch(
        &argv,
        |path| match path {
            Some(p) => std::fs::read_to_string(p),
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                Ok(s)
            }
        },
        seed.as_deref(),
    );
    print!("{}", out.stdout);
    std::process::exit(out.code);
}
