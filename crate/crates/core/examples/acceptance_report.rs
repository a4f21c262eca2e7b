//! Runs every acceptance criterion and prints one line each.

fn main() {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let outcomes = bellcord::verify::run_all(threads);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed} of {} criteria passed", outcomes.len());
    if passed != outcomes.len() {
        std::process::exit(1);
    }
}
