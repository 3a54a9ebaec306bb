//! Scratch overhead probe (dev only).
use raotune_core::*;
use std::time::{Duration, Instant};

fn main() {
    let m = read_matrix_market_file("fixtures/heavy.mtx").unwrap();
    let rhs = vec![1.0; m.n_rows()];
    let rules = load_rule_base(
        "rule COLAMD 0 0 1000 1000\npriority COLAMD NATURAL AT_PLUS_A AT_TIMES_A\n",
    )
    .unwrap();
    let daemon = spawn_daemon(rules.clone(), &Endpoint::Tcp("127.0.0.1:0".into())).unwrap();
    let timeout = Duration::from_secs(5);

    let direct = |rhs: &[f64]| {
        let t = Instant::now();
        let perm = order(&m, OrderingParam::Colamd).unwrap();
        let (f, _) = lu_factorize(&m, &perm, 1.0).unwrap();
        solve(&f, rhs).unwrap();
        t.elapsed().as_secs_f64()
    };
    let local = |rhs: &[f64]| {
        let t = Instant::now();
        tuned_solve(&m, rhs, None, Some(&rules), 1.0, timeout).unwrap();
        t.elapsed().as_secs_f64()
    };
    let bus = |rhs: &[f64]| {
        let t = Instant::now();
        tuned_solve(&m, rhs, Some(daemon.endpoint()), None, 1.0, timeout).unwrap();
        t.elapsed().as_secs_f64()
    };

    direct(&rhs); // warm-up
    for rep in 0..6 {
        let d = direct(&rhs);
        let l = local(&rhs);
        let b = bus(&rhs);
        println!("rep {rep}: direct {d:.4}  local-tuned {l:.4}  bus-tuned {b:.4}  (b/d {:.4}, l/d {:.4})", b / d, l / d);
    }
    daemon.shutdown().unwrap();
}
