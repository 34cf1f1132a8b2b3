import numpy as np
import pytest

from cyents.annotations import AnnotationSet, Mention
from cyents.ner import (
    EmptyDataset,
    LabelOutsideSchema,
    TaggerModel,
    TrainConfig,
    bilou_targets,
    gradient_check,
    loss_and_grads,
    predict,
    save_model,
    train,
)
from cyents.textcorpus import Document, split_sentences

from synthcorpus import generate


def mk_doc(doc_id, text):
    d = Document(doc_id, text)
    d.sentences = split_sentences(text)
    return d


def mk_gold(doc_id, mentions):
    g = AnnotationSet("gold")
    g.add(doc_id, mentions)
    return g


# --- target construction ---------------------------------------------------------


def test_bilou_targets_basic():
    model = TaggerModel.init(rows=61, dim=8)
    idx = model.label_index()
    doc = mk_doc("d", "Lazarus hit Acme Corp today")
    mentions = [Mention(0, 7, "Threat_Actor"), Mention(12, 21, "ORG")]
    surfaces, targets = bilou_targets(doc, mentions, idx, {"Threat_Actor", "ORG"}, "round2")
    assert surfaces == ["Lazarus", "hit", "Acme", "Corp", "today"]
    assert targets == [idx["U-Threat_Actor"], idx["O"], idx["B-ORG"], idx["L-ORG"], idx["O"]]


def test_bilou_targets_snap_outward():
    model = TaggerModel.init(rows=61, dim=8)
    idx = model.label_index()
    doc = mk_doc("d", "Lazarus attacked")
    surfaces, targets = bilou_targets(doc, [Mention(2, 5, "Threat_Actor")], idx, {"Threat_Actor"}, "round2")
    assert targets[0] == idx["U-Threat_Actor"]  # span grew to cover the token


def test_bilou_targets_drop_non_statistical_keep_schema_check():
    model = TaggerModel.init(rows=61, dim=8)
    idx = model.label_index()
    doc = mk_doc("d", "patched CVE-2021-44228 now")
    surfaces, targets = bilou_targets(
        doc, [Mention(8, 22, "CVE")], idx, {"Threat_Actor"}, "round2"
    )
    assert all(t == idx["O"] for t in targets)  # rule-category label dropped
    with pytest.raises(LabelOutsideSchema):
        bilou_targets(doc, [Mention(8, 22, "Tool")], idx, {"Threat_Actor"}, "round2")


# --- training ---------------------------------------------------------------------


def overfit_one():
    doc = mk_doc("one", "Lazarus deployed WannaCry quickly.")
    gold = mk_gold("one", [Mention(0, 7, "Threat_Actor"), Mention(17, 25, "Malware_Name")])
    config = TrainConfig(epochs=150, learning_rate=0.1, batch_size=1, rng_seed=3, dropout=0.0)
    return doc, gold, train([doc], gold, config, rows=500, dim=32)


def test_overfit_single_example_recovers_gold():
    doc, gold, model = overfit_one()
    mentions = predict(doc, model)
    assert [(m.start, m.end, m.label) for m in mentions] == [
        (0, 7, "Threat_Actor"), (17, 25, "Malware_Name"),
    ]
    assert all(m.provenance == "model" and m.score > 0.9 for m in mentions)


def test_training_deterministic_bitwise(tmp_path):
    doc = mk_doc("one", "Lazarus deployed WannaCry quickly.")
    gold = mk_gold("one", [Mention(0, 7, "Threat_Actor"), Mention(17, 25, "Malware_Name")])
    config = TrainConfig(epochs=20, learning_rate=0.05, batch_size=2, rng_seed=7, dropout=0.2)
    paths = []
    for i in range(2):
        model = train([doc], gold, config, rows=300, dim=16)
        p = tmp_path / f"m{i}.cyents"
        save_model(model, p)
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_empty_dataset_raises():
    with pytest.raises(EmptyDataset):
        train([], AnnotationSet("gold"), TrainConfig(epochs=1))


def test_loss_curve_non_increasing_within_tolerance():
    docs, gold = generate(60, seed=1, prefix="tr")
    config = TrainConfig(epochs=8, learning_rate=0.05, batch_size=8, rng_seed=0, dropout=0.2)
    model = train(docs, gold, config, rows=800, dim=24)
    curve = model.training_meta["loss_curve"]
    assert len(curve) == 8
    for before, after in zip(curve, curve[1:]):
        assert after <= before * 1.05
    assert curve[-1] < curve[0]


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(epochs=0)
    with pytest.raises(ValueError):
        TrainConfig(learning_rate=0.0)
    with pytest.raises(ValueError):
        TrainConfig(dropout=1.0)


# --- gradient check ---------------------------------------------------------------


SURFACES = ["Lazarus", "used", "WannaCry", "against", "Sony", "in", "2017", "."]


def small_example():
    model = TaggerModel.init(rows=47, dim=8, seed=1)
    idx = model.label_index()
    targets = [idx["O"]] * len(SURFACES)
    targets[0] = idx["U-Threat_Actor"]
    targets[2] = idx["U-Malware_Name"]
    return model, SURFACES, targets


def test_gradient_check_all_groups_pass():
    model, surfaces, targets = small_example()
    assert gradient_check(model, surfaces, targets, epsilon=1e-4) < 1e-4


def test_gradient_check_epsilon_range():
    model, surfaces, targets = small_example()
    with pytest.raises(ValueError):
        gradient_check(model, surfaces, targets, epsilon=1e-2)


def test_zero_loss_example_has_tiny_gradients():
    model, surfaces, targets = small_example()
    # pin every token's target logit through the bias: probabilities go to 1
    model.out_w[:] = 0.0
    model.out_b[:] = -50.0
    single = [surfaces[0]], [targets[0]]
    model.out_b[targets[0]] = 50.0
    loss, grads = loss_and_grads(model, *single)
    assert loss < 1e-6
    for arr in grads.values():
        assert np.abs(arr).max() < 1e-6


def test_corrupted_backward_is_caught():
    # calibrates the check's sensitivity: a mutant backward pass that scales
    # one gradient group must blow past the tolerance
    model, surfaces, targets = small_example()

    def corrupted(model_, surfaces_, targets_, dropout_mask=None):
        loss, grads = loss_and_grads(model_, surfaces_, targets_, dropout_mask)
        grads["conv2_w"] = grads["conv2_w"] * 1.05 + 1e-7
        return loss, grads

    err = gradient_check(model, surfaces, targets, epsilon=1e-4, grads_fn=corrupted)
    assert err > 1e-2


# --- learnability -------------------------------------------------------------------


def test_synthetic_corpus_heldout_micro_f():
    from cyents import evaluation

    train_docs, train_gold = generate(200, seed=11, prefix="tr")
    held_docs, held_gold = generate(50, seed=22, prefix="te", heldout=True)
    config = TrainConfig(epochs=40, learning_rate=0.1, batch_size=8, rng_seed=0, dropout=0.2)
    model = train(train_docs, train_gold, config)
    pred = AnnotationSet("model")
    for d in held_docs:
        pred.add(d.doc_id, predict(d, model))
    rep = evaluation.report(held_gold, pred)
    assert rep.micro[2] >= 90.0
