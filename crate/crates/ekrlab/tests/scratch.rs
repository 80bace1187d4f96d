use std::time::Instant;

use ekrlab::fkn::{largest_non_star_independent, FknContext};
use ekrlab::graph::{FamilyKind, GraphFamily, GraphView};
use ekrlab::mis::{enumerate_maximum_independent_sets, DenseGraph};
use ekrlab::sim::SimContext;
use ekrlab::spectral::dense_spectrum;

#[test]
#[ignore]
fn probe_timings() {
    let t = Instant::now();
    let g6 = GraphView::new(GraphFamily::permutation(6).unwrap()).unwrap();
    println!("gamma6 view: {:?}", t.elapsed());
    let t = Instant::now();
    let spec = dense_spectrum(&g6).unwrap();
    println!("gamma6 dense spectrum: {:?} -> {:?}", t.elapsed(), spec.entries());

    let t = Instant::now();
    let g5 = GraphView::new(GraphFamily::permutation(5).unwrap()).unwrap();
    let d5 = DenseGraph::from_view(&g5).unwrap();
    let sets = enumerate_maximum_independent_sets(&d5).unwrap();
    println!("gamma5 enumeration: {:?} -> {} sets", t.elapsed(), sets.len());

    let t = Instant::now();
    let m4 = GraphView::new(GraphFamily::matching(4).unwrap()).unwrap();
    let dm4 = DenseGraph::from_view(&m4).unwrap();
    let sets = enumerate_maximum_independent_sets(&dm4).unwrap();
    println!("m4 enumeration: {:?} -> {} sets", t.elapsed(), sets.len());

    let t = Instant::now();
    let ctx = FknContext::new(4).unwrap();
    let largest = largest_non_star_independent(&ctx).unwrap();
    println!("m4 largest non-star: {:?} -> {}", t.elapsed(), largest);

    let t = Instant::now();
    let sim = SimContext::new(GraphFamily::new(FamilyKind::Matching, 4).unwrap()).unwrap();
    for trial in 0..20 {
        let o = sim.trial_alpha(0.30, 7, trial).unwrap();
        assert!(o.alpha.unwrap() >= 15);
    }
    println!("m4 20 trials at p=0.3: {:?}", t.elapsed());
    let t = Instant::now();
    for trial in 0..20 {
        sim.trial_alpha(0.60, 7, trial).unwrap();
    }
    println!("m4 20 trials at p=0.6: {:?}", t.elapsed());

    let t = Instant::now();
    let sim5 = SimContext::new(GraphFamily::new(FamilyKind::Permutation, 5).unwrap()).unwrap();
    for trial in 0..10 {
        sim5.trial_alpha(0.5, 7, trial).unwrap();
    }
    println!("gamma5 10 trials at p=0.5: {:?}", t.elapsed());
}
