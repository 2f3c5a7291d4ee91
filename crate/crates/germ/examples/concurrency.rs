//! Walk the cube flows: n concurrent steps have contractible decision
//! structure everywhere, which is what lets them collapse to a single
//! step up to 1-dihomotopy.

use germ::branching::{branching_space, Mode, Side};
use germ::chains::is_homology_point;
use germ::dihomotopy::check_st1;
use germ::fixtures::cube_endpoint_morphism;
use germ::homology::homology_range;

fn main() {
    for n in 1..=4 {
        let t = std::time::Instant::now();
        let cube = germ::flow::cube_flow(n).unwrap();
        let germs = branching_space(&cube);
        let contractible = (0..cube.state_count()).all(|s| {
            let c = germs.component(s);
            c.is_empty() || is_homology_point(&c)
        });
        let h = homology_range(&cube, Side::Minus, 2, Mode::Strict).unwrap();
        println!(
            "cube {n}: {} states, {} path simplices, {} germ simplices, \
             germs contractible: {}, H^-_0..2 = [{}]  ({:.2}s)",
            cube.state_count(),
            cube.total_path_simplices(),
            germs.total.simplex_count(),
            contractible,
            h.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
            t.elapsed().as_secs_f64(),
        );
        if n <= 3 {
            let v = check_st1(&cube_endpoint_morphism(n));
            println!("  segment into cube {n} is a 1-dihomotopy equivalence: {}", v.overall);
        }
    }
}
