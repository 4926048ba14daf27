//! Driving the command-line reports in-process.

use gfcohom::cli::run;

fn main() {
    for args in [
        "gfcohom betti --n 2 --q-max 6 --format csv",
        "gfcohom verify --n 2 t1^3",
        "gfcohom compare --n 1 --q-max 4 --format json",
    ] {
        let out = run(args.split_whitespace());
        println!("$ {args}  (exit {})\n{}", out.code, out.stdout);
    }
}
