use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use graph_core::par::Exec;
use graph_core::stretch::verify_stretch_with;
use treewidth_dp::{subset_tsp, DpOptions};

use cli_bench::{generate, spanner_factory, Family, InstanceSpec, OracleKind};
use subset_spanner::{build_subset_spanner, SubsetOptions};

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn geometric(n: usize, k: usize) -> cli_bench::Instance {
    generate(&InstanceSpec {
        family: Family::RandomGeometric,
        n,
        radius: 0.25,
        seed: 7,
        terminals: Some(k),
        ..InstanceSpec::default()
    })
    .expect("instance")
}

fn spanner(c: &mut Criterion) {
    let inst = geometric(150, 20);
    let factory = spanner_factory(OracleKind::Doubling, &inst).expect("factory");
    let mut group = c.benchmark_group("subset_spanner");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = SubsetOptions { exec, ..SubsetOptions::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| factory.with(|f| build_subset_spanner(&inst.graph, &inst.terminals, f, 0.03, &opts)).expect("spanner"))
        });
    }
    group.finish();
}

fn stretch(c: &mut Criterion) {
    let inst = geometric(200, 20);
    let mst = inst.graph.edge_subgraph(graph_core::minimum_spanning_tree(&inst.graph).expect("connected"));
    let mut group = c.benchmark_group("verify_stretch");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_stretch_with(&mst, &inst.graph, &inst.terminals, f64::INFINITY, exec).expect("report"))
        });
    }
    group.finish();
}

fn tsp(c: &mut Criterion) {
    let inst = generate(&InstanceSpec {
        family: Family::Grid,
        rows: 4,
        cols: 8,
        lo: 1.0,
        hi: 3.0,
        seed: 3,
        terminals: Some(10),
        ..InstanceSpec::default()
    })
    .expect("instance");
    let mut group = c.benchmark_group("subset_tsp_dp");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = DpOptions { exec, ..DpOptions::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| subset_tsp(&inst.graph, &inst.terminals, &opts).expect("tour"))
        });
    }
    group.finish();
}

criterion_group!(benches, spanner, stretch, tsp);
criterion_main!(benches);
