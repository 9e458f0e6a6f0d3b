#!/usr/bin/env python3
"""Regenerate the bundled demo fixtures under data/.

Everything here is synthetic and deterministic: a ten-document corpus whose
body sentences the offline provider can read, a reviewer rating block with
built-in group effects, and statement vectors with per-group cluster
structure. Run from the repository root:

    python tools/make_mini_fixtures.py
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from causaforge.embedding import EmbeddingTable, save_embeddings  # noqa: E402

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")

REFERENCES = (
    "References\n"
    "1. Field A. Paired designs strengthen inference. J Psychol Methods. 2018.\n"
    "2. Stone B. Survey panels reduce costs. Res Synth. 2020.\n"
)

DOCS = [
    {
        "doc_id": "PMC900001",
        "title": "Mindfulness training and daily affect",
        "abstract": "A diary study of contemplative practice in adults.",
        "journal": "Frontiers in Psychology",
        "year": 2021,
        "body": (
            "Introduction\n\n"
            "Contemplative interventions have drawn wide interest.\n\n"
            "Results\n\n"
            "Mindfulness practice improves well-being. "
            "Mindfulness practice reduces perceived stress. "
            "Effects held across both cohorts.\n\n"
        ),
    },
    {
        "doc_id": "PMC900002",
        "title": "Stress appraisals in working adults",
        "abstract": "Longitudinal evidence on appraisal and functioning.",
        "journal": "BMC Psychology",
        "year": 2022,
        "body": (
            "Methods\n\n"
            "We followed 812 participants for six months.\n\n"
            "Results\n\n"
            "Perceived stress reduces well-being. "
            "Social support reduces perceived stress.\n\n"
        ),
    },
    {
        "doc_id": "PMC900003",
        "title": "Support networks and adaptive capacity",
        "abstract": "Community ties predict recovery trajectories.",
        "journal": "Health Psychology and Behavioral Medicine",
        "year": 2020,
        "body": (
            "Results\n\n"
            "Social support improves resilience. "
            "Resilience improves well-being.\n\n"
            "Discussion\n\n"
            "Network interventions deserve further study.\n\n"
        ),
    },
    {
        "doc_id": "PMC900004",
        "title": "Gratitude journaling in undergraduates",
        "abstract": "A randomized trial of an expressive writing exercise.",
        "journal": "European Journal of Psychology",
        "year": 2021,
        "body": (
            "Results\n\n"
            "Gratitude journaling improves positive emotions. "
            "Positive emotions improve well-being.\n\n"
        ),
    },
    {
        "doc_id": "PMC900005",
        "title": "Sleep and evening routines",
        "abstract": "Habit formation and rest quality in a psychology panel.",
        "journal": "Psychological Research",
        "year": 2019,
        "body": (
            "Results\n\n"
            "Gratitude journaling improves sleep quality. "
            "Sleep quality improves well-being.\n\n"
        ),
    },
    {
        "doc_id": "PMC900006",
        "title": "Exercise, affect, and rest",
        "abstract": "Activity tracking with experience sampling.",
        "journal": "Current Psychology",
        "year": 2022,
        "body": (
            "Results\n\n"
            "Physical exercise improves positive emotions. "
            "Physical exercise improves sleep quality.\n\n"
        ),
    },
    {
        "doc_id": "PMC900007",
        "title": "Loneliness in later life",
        "abstract": "Isolation, symptoms, and support in older adults.",
        "journal": "Journal of Child Psychology and Psychiatry",
        "year": 2020,
        "body": (
            "Results\n\n"
            "Loneliness reduces social support. "
            "Loneliness is associated with depressive symptoms. "
            "Depressive symptoms reduce well-being.\n\n"
        ),
    },
    {
        "doc_id": "PMC900008",
        "title": "Self-compassion and affect regulation",
        "abstract": "Trait measures and regulation strategies.",
        "journal": "Psychological Medicine",
        "year": 2023,
        "body": (
            "Results\n\n"
            "Self-compassion improves emotion regulation. "
            "Emotion regulation improves well-being.\n\n"
        ),
    },
    {
        "doc_id": "PMC900009",
        "title": "Green space exposure and mood",
        "abstract": "Geolocation study of parks and momentary affect.",
        "journal": "Frontiers in Psychology",
        "year": 2023,
        "body": (
            "Results\n\n"
            "Nature exposure improves positive emotions. "
            "Nature exposure is associated with physical exercise.\n\n"
        ),
    },
    {
        # Filtered out: journal lacks the required term and no keyword matches.
        "doc_id": "PMC900010",
        "title": "Catalytic oxidation of alkenes",
        "abstract": "Reaction kinetics under varied temperatures.",
        "journal": "Journal of Chemistry",
        "year": 2021,
        "body": "Results\n\nCatalyst loading improves yield.\n\n",
    },
]

GROUPS = ("control_human", "control_claude", "pipeline_random", "pipeline_expert")
HYPOTHESES_PER_GROUP = 6
REVIEWERS = ("r1", "r2", "r3")

# Additive structure for synthetic ratings, per group: (novelty, usefulness).
GROUP_EFFECTS = {
    "control_human": (1.1, 0.4),
    "control_claude": (-0.9, 0.1),
    "pipeline_random": (0.8, -0.2),
    "pipeline_expert": (0.4, 0.5),
}
# Reviewer (offset, scale) pairs so raw scales genuinely differ.
REVIEWER_STYLES = {"r1": (4.0, 1.0), "r2": (5.2, 0.6), "r3": (3.1, 1.4)}


def write_corpus(path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for doc in DOCS:
            record = {
                "doc_id": doc["doc_id"],
                "title": doc["title"],
                "abstract": doc["abstract"],
                "journal": doc["journal"],
                "year": doc["year"],
                "body_text": doc["body"] + REFERENCES,
                "license": "CC-BY",  # unknown keys must be ignored by the loader
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


def write_ratings(path: str, rng: np.random.Generator) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["hypothesis_id", "group", "reviewer", "dimension", "rating"])
    counter = 0
    for group in GROUPS:
        for _ in range(HYPOTHESES_PER_GROUP):
            counter += 1
            hyp_id = f"hyp{counter:03d}"
            base_novelty, base_useful = GROUP_EFFECTS[group]
            latent = {
                "novelty": base_novelty + rng.normal(0, 0.5),
                "usefulness": base_useful + rng.normal(0, 0.5),
            }
            for reviewer in REVIEWERS:
                offset, scale = REVIEWER_STYLES[reviewer]
                for dimension, value in latent.items():
                    rating = offset + scale * (value + rng.normal(0, 0.4))
                    writer.writerow([hyp_id, group, reviewer, dimension, f"{rating:.2f}"])
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(buffer.getvalue())


def write_vectors(path: str, rng: np.random.Generator) -> None:
    centers = {group: rng.normal(0, 1, 64) for group in GROUPS}
    spread = {
        "control_human": 0.35,
        "control_claude": 0.5,
        "pipeline_random": 1.0,
        "pipeline_expert": 0.9,
    }
    vectors = {}
    counter = 0
    for group in GROUPS:
        center = centers[group] / np.linalg.norm(centers[group])
        for _ in range(HYPOTHESES_PER_GROUP):
            counter += 1
            noisy = center + spread[group] * rng.normal(0, 1, 64) / np.sqrt(64)
            vectors[f"hyp{counter:03d}"] = noisy / np.linalg.norm(noisy)
    save_embeddings(EmbeddingTable(vectors=vectors, dims=64), path)


CONFIG_TEMPLATE = """[run]
seed = 7

[paths]
corpus = data/mini_corpus.jsonl
chunks = out/chunks.jsonl
assertions = out/assertions.jsonl
graph = out/graph.jsonl
embeddings = out/embeddings.tsv
candidates = out/candidates.jsonl
hypotheses = out/hypotheses.jsonl
ratings = data/mini_ratings.csv
vectors = data/mini_vectors.tsv
report = out/report.json

[filter]
keywords = psychol
journal_term = psychol

[chunking]
max_tokens = 400

[provider]
model = gpt-4
mock = true

[embedding]
dims = 32
walk_length = 20
walks_per_node = 10
window = 5
negatives = 5
epochs = 3
learning_rate = 0.05

[linkpred]
threshold = 0.0
top_k = 50
focus = well-being

[hypogen]
cap = 130

[evaluation]
tsne_perplexity = 5
tsne_iterations = 500
"""


def main() -> None:
    os.makedirs(DATA_DIR, exist_ok=True)
    write_corpus(os.path.join(DATA_DIR, "mini_corpus.jsonl"))
    write_ratings(os.path.join(DATA_DIR, "mini_ratings.csv"), np.random.default_rng(70101))
    write_vectors(os.path.join(DATA_DIR, "mini_vectors.tsv"), np.random.default_rng(70202))
    with open(os.path.join(DATA_DIR, "mini_config.ini"), "w", encoding="utf-8") as handle:
        handle.write(CONFIG_TEMPLATE)
    print(f"fixtures written to {os.path.abspath(DATA_DIR)}")


if __name__ == "__main__":
    main()
