//! The fixture corpus: small named instances whose properties are pinned by
//! the test suites, together with reference allocations where one particular
//! allocation matters (known greedy outputs, leximin++ optima).

use crate::model::Instance;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub instance: Instance,
    /// A distinguished allocation, as per-agent item lists.
    pub reference_bundles: Option<Vec<Vec<usize>>>,
    pub note: &'static str,
}

/// All fixtures, keyed by stable names.
pub fn fixtures() -> Vec<(&'static str, Fixture)> {
    vec![
        (
            "ex_1_1",
            Fixture {
                instance: Instance::new(vec![vec![-1, -1], vec![1, 1]])
                    .unwrap()
                    .with_name("ex_1_1"),
                reference_bundles: None,
                note: "two agents, two items, no EQ1 allocation exists",
            },
        ),
        (
            "ex_notEQX",
            Fixture {
                instance: Instance::new(vec![
                    vec![2, 2, 2, 2, -3, -3, -3],
                    vec![2, 2, 2, 2, -3, -3, -3],
                ])
                .unwrap()
                .with_name("ex_notEQX"),
                reference_bundles: Some(vec![vec![0, 2, 4, 6], vec![1, 3, 5]]),
                note: "identical valuations; greedy output is EQ1 but not EQX",
            },
        ),
        (
            "ex_4_2",
            Fixture {
                instance: Instance::new(vec![
                    vec![1, 1, 1, 0, 0, 0, -1, -1, -1],
                    vec![-1, -1, -1, 1, 1, 1, 0, 0, 0],
                ])
                .unwrap()
                .with_name("ex_4_2"),
                reference_bundles: None,
                note: "no partial EQ1 allocation of the subjective items exists",
            },
        ),
        (
            "ex_leximin",
            Fixture {
                instance: Instance::new(vec![vec![10, -15], vec![-2, -3]])
                    .unwrap()
                    .with_name("ex_leximin"),
                reference_bundles: Some(vec![vec![0], vec![1]]),
                note: "leximin++ optimum has utilities (10, -3) and is not EQ1",
            },
        ),
        (
            "table2_leximin",
            Fixture {
                instance: table2_instance(),
                reference_bundles: Some(vec![
                    vec![1, 2, 3, 4, 5, 6, 7],
                    vec![0],
                    vec![8],
                    vec![9],
                    vec![10],
                    vec![11],
                ]),
                note: "leximin++ optimum has utility multiset {3,1,1,1,1,1} and is not EQ1",
            },
        ),
        (
            "ex_5_1",
            Fixture {
                instance: Instance::new(vec![
                    vec![1, 1, 1, -1, -1, -1],
                    vec![-1, -1, -1, 1, 1, 1],
                    vec![-1, -1, -1, 1, 1, 1],
                ])
                .unwrap()
                .with_name("ex_5_1"),
                reference_bundles: Some(vec![vec![0, 1, 2], vec![3, 4], vec![5]]),
                note: "bi-valued type-normalized; no EQ1+PO allocation exists",
            },
        ),
        (
            "ex_3agent_binary",
            Fixture {
                instance: Instance::new(vec![
                    vec![1, 1, 1, 0, 0, 0],
                    vec![1, 1, 1, 0, 0, 0],
                    vec![0, 0, 0, 1, 1, 1],
                ])
                .unwrap()
                .with_name("ex_3agent_binary"),
                reference_bundles: None,
                note: "binary type-normalized; every PO allocation violates EQ1",
            },
        ),
    ]
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|(n, _)| *n == name).map(|(_, f)| f)
}

fn table2_instance() -> Instance {
    let a1 = vec![-1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1];
    let rest = vec![1, -1, -1, -1, -1, -1, -1, -1, 1, 1, 1, 1];
    Instance::new(vec![a1, rest.clone(), rest.clone(), rest.clone(), rest.clone(), rest])
        .unwrap()
        .with_name("table2_leximin")
}
