"""Regenerates the audit fixture files in this directory.

Each row is one statement with the labels a model applied to it, the
self-rated score of each label and the human verdict on each label.
"""
import json
import random
from pathlib import Path

HERE = Path(__file__).parent
SETS = HERE.parent.parent / "data" / "labelsets"

TOPICS = ["software", "bridges", "water", "circuits", "robots", "data", "cars", "energy", "security", "design"]


def build(name, labels, n_sentences, n_labels, verdict_counts, n_low, min_per, rng):
    per = [min_per] * n_sentences
    while sum(per) < n_labels:
        i = rng.randrange(n_sentences)
        if per[i] < 4:
            per[i] += 1
    pairs = sum(per)
    assert pairs == n_labels
    verdicts = (["agreement"] * verdict_counts[0] + ["disagreement"] * verdict_counts[1] +
                ["questionable"] * verdict_counts[2])
    assert len(verdicts) == pairs
    rng.shuffle(verdicts)
    scores = [rng.randint(1, 3) for _ in range(n_low)] + [rng.randint(4, 10) for _ in range(pairs - n_low)]
    rng.shuffle(scores)
    rows, k = [], 0
    for i in range(n_sentences):
        chosen = rng.sample(labels, per[i])
        rows.append({
            "doc_id": f"{name}_{i + 1:03d}",
            "text": f"Statement {i + 1} talks about {rng.choice(TOPICS)} and {rng.choice(TOPICS)} work.",
            "labels": chosen,
            "scores": scores[k:k + per[i]],
            "verdicts": verdicts[k:k + per[i]],
        })
        k += per[i]
    with open(HERE / f"{name}_audit.jsonl", "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")


def main():
    rng = random.Random(20240517)
    onet = json.loads((SETS / "onet_15_17.json").read_text())["labels"]
    factors = json.loads((SETS / "career_satisfaction_16.json").read_text())["labels"]
    build("onet", onet, 100, 235, (219, 2, 14), 30, 1, rng)
    build("factors", factors, 100, 150, (129, 7, 14), 12, 0, rng)


if __name__ == "__main__":
    main()
