use ekrlab::fkn::{fkn_inequality_suite, CheckStatus, FknContext};
use ekrlab::graph::VertexSet;
use ekrlab::rng::SplitMix64;

#[test]
#[ignore]
fn find_literal_counterexample() {
    let ctx = FknContext::new(3).unwrap();
    let v = ctx.view().vertex_count();
    let mut rng = SplitMix64::new(11);
    for sample in 0..150 {
        let size = rng.below(v as u64 + 1) as usize;
        let set = VertexSet::from_members(v, rng.subset(v, size));
        let checks = fkn_inequality_suite(&ctx, &set).unwrap();
        for c in checks {
            if c.status == CheckStatus::AdvisoryFail {
                println!(
                    "sample {sample}: |A|={} members={:?}\n  {} : lhs={} rhs={}",
                    set.card(),
                    set.members(),
                    c.check,
                    c.lhs,
                    c.rhs
                );
            }
        }
    }
}
