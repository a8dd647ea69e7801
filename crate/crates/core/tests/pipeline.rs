use ginv::analysis::{classify, model_values, ClassificationRule};
use ginv::datasets::{
    entanglement_dataset, graph_dataset, purity_dataset, time_reversal_dynamics_dataset, Dataset, Graph, Label,
};
use ginv::groups::{check_equivariance, FiniteSet, GroupKind, GroupSampler, permutation_operator, PermutationTarget};
use ginv::models::{AnsatzSpec, Model, ModelSpec};
use ginv::observables::{oracle, EntanglementMeasure};
use ginv::train::{optimize, LossKind, TrainConfig};
use ginv::Error;

#[test]
fn purity_model_from_json_classifies_purity_dataset() {
    let spec = ModelSpec::from_json(
        r#"{"class":"H1","k":2,"n":2,"ansatz":{"kind":"identity"},"observable":{"kind":"swap","n":2}}"#,
    )
    .unwrap();
    let model = Model::new(spec.clone()).unwrap();
    let data = purity_dataset(2, 60, 0.5, 3).unwrap();
    let report = classify(&data, &model, ClassificationRule::Midpoint).unwrap();
    assert_eq!(report.accuracy, 1.0);
    assert!((report.mean_1 - 1.0).abs() < 1e-12);
    assert!((report.mean_0 - 0.5).abs() < 1e-12);
    // the model description survives a round trip
    assert_eq!(ModelSpec::from_json(&spec.to_json()).unwrap(), spec);
}

#[test]
fn unknown_model_fields_are_rejected() {
    let text = r#"{"class":"H1","k":2,"n":2,"ansatz":{"kind":"identity"},"observable":{"kind":"swap","n":2},"extra":0}"#;
    assert!(matches!(ModelSpec::from_json(text), Err(Error::Parse(_))));
}

#[test]
fn dataset_json_round_trip_preserves_values() {
    let data = time_reversal_dynamics_dataset(1, 10, 5).unwrap();
    let back = Dataset::from_json(&data.to_json()).unwrap();
    assert_eq!(back, data);
    let spec = ModelSpec::from_json(
        r#"{"class":"H2","k":2,"n":1,"ansatz":{"kind":"identity"},"observable":{"kind":"bell_projector","n":1}}"#,
    )
    .unwrap();
    let model = Model::new(spec).unwrap();
    assert_eq!(model_values(&data, &model).unwrap(), model_values(&back, &model).unwrap());
}

#[test]
fn entanglement_dataset_is_separated_by_its_measure() {
    let measure = EntanglementMeasure::MeyerWallach;
    let data = entanglement_dataset(3, 40, 0.5, &measure, 11).unwrap();
    for s in data.states().unwrap() {
        let v = oracle::meyer_wallach(&s.state).unwrap();
        match s.label {
            Label::Zero => assert!(v.abs() < 1e-9),
            Label::One => assert!((v - 0.5).abs() < 1e-6),
        }
    }
    let model = Model::linear(measure.observable(3).unwrap(), 2).unwrap();
    let report = classify(&data, &model, ClassificationRule::Threshold { c: 0.5, eps: 0.25 }).unwrap();
    assert_eq!(report.accuracy, 1.0);
}

#[test]
fn isomorphic_reference_graphs_are_rejected() {
    let a = Graph::path(3).unwrap();
    let b = a.relabel(&[2, 0, 1]).unwrap();
    assert!(matches!(graph_dataset(&a, &b, 4, 1.0, 0), Err(Error::Indistinguishable(_))));
}

#[test]
fn qgcnn_commutes_with_graph_automorphisms() {
    for g in [Graph::cycle(4).unwrap(), Graph::complete(3).unwrap()] {
        let n = g.n();
        let ansatz = AnsatzSpec::Qgcnn {
            graph: g.clone(),
            layers: 2,
            generators: 2,
            params: vec![0.3, -0.4, 0.9, 1.1, 0.2, -0.7, 0.5, 0.8],
        };
        let u = ansatz.unitary().unwrap().unwrap();
        let autos = g
            .automorphisms()
            .unwrap()
            .into_iter()
            .map(|p| permutation_operator(&p, PermutationTarget::Qubits { n }).unwrap().into_matrix())
            .collect::<Vec<_>>();
        let count = autos.len();
        let mut set = FiniteSet::new(autos);
        let report = check_equivariance(&u, &mut set, 1, count, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
    }
}

#[test]
fn layered_model_trains_towards_labels() {
    let ansatz = AnsatzSpec::Layered {
        qubits: 1,
        gates: serde_json::from_str(r#"[{"gate":"ry","qubit":0}]"#).unwrap(),
        params: vec![0.0],
    };
    let data = purity_dataset(1, 20, 0.75, 2).unwrap();
    let spec = ModelSpec {
        class: ginv::models::HypothesisClass::H1,
        k: 1,
        n: 1,
        ansatz,
        observable: serde_json::from_str(r#"{"kind":"pauli","string":"Z"}"#).unwrap(),
        psi_in: None,
    };
    let base = Model::new(spec).unwrap();
    let labels = data.labels();
    let loss = |theta: &[f64]| {
        let m = base.with_params(theta)?;
        ginv::train::loss(&model_values(&data, &m)?, &labels, LossKind::MseLabels)
    };
    let config = TrainConfig {
        iterations: 20,
        ..TrainConfig::default()
    };
    let a = optimize(loss, &[0.4], &config).unwrap();
    let b = optimize(loss, &[0.4], &config).unwrap();
    assert_eq!(a, b);
    assert!(a.loss_trace.windows(2).all(|w| w[1] <= w[0]));
    assert!(a.loss_trace.last().unwrap() < &a.loss_trace[0]);
}

#[test]
fn sampler_streams_are_reproducible() {
    let mut a = GroupSampler::new(GroupKind::Orthogonal { d: 4 }, 8);
    let mut b = GroupSampler::new(GroupKind::Orthogonal { d: 4 }, 8);
    for _ in 0..3 {
        assert_eq!(a.sample(), b.sample());
    }
}
