#!/usr/bin/env python3
"""Regenerates fixtures/greek-virus.json and fixtures/sentences.json."""

import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

GREEK = [
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu", "nu", "xi", "omicron", "pi",
    "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
]

SEVERITY = {"alpha": "bad", "beta": "bad", "gamma": "bad", "delta": "terrible",
            "omicron": "bad", "mu": "bad", "lambda": "bad"}

EMOTION_OF = {"OK": "neutral", "bad": "scary", "terrible": "terrifying"}

# Stochastic output neurons: sigmoid, latched by a self-loop, one winner per
# class through mutual inhibition.
OUT_THRESHOLD = 5.0
OUT_STEEPNESS = 3.0
SELF_LOOP = 10.0
MUTUAL = -20.0
STRONG = 6.0
WEAK = 3.0


def winner_class(neurons, edges, names, tag):
    for n in names:
        neurons.append({"name": n, "kind": "sigmoid", "threshold": OUT_THRESHOLD,
                        "steepness": OUT_STEEPNESS, "tags": [tag, "output"]})
    for a in names:
        edges.append({"src": a, "dst": a, "weight": SELF_LOOP, "label": "latch"})
        for b in names:
            if a != b:
                edges.append({"src": a, "dst": b, "weight": MUTUAL, "label": "compete"})


def greek_virus():
    neurons, edges = [], []
    for g in GREEK:
        neurons.append({"name": "variant-" + g, "kind": "threshold", "threshold": 2,
                        "tags": ["concept"]})
    winner_class(neurons, edges, ["OK", "bad", "terrible"], "decision")
    winner_class(neurons, edges, ["neutral", "scary", "terrifying"], "emotion")
    for g in GREEK:
        sev = SEVERITY.get(g, "OK")
        edges.append({"src": "variant-" + g, "dst": sev, "weight": STRONG, "label": "assessment"})
        # A weak pull towards the next milder assessment.
        milder = {"terrible": "bad", "bad": "OK", "OK": None}[sev]
        if milder:
            edges.append({"src": "variant-" + g, "dst": milder, "weight": WEAK,
                          "label": "assessment"})
    for d, e in EMOTION_OF.items():
        edges.append({"src": d, "dst": e, "weight": STRONG, "label": "feeling"})
    return {
        "neurons": neurons,
        "edges": edges,
        "residual": {"enabled": False, "magnitude_fraction": 0.0, "window": 1},
        "signals": [],
        "cascade_start": ["variant-delta"],
        "sequence": {
            "params": {"h": 3, "cur": 0, "l": 4, "s": 2, "s_resid": 1, "exc": 2, "inh": -2},
            "schedule": {"excite_at": 0, "excite_duration": 1, "inhibit_at": 1,
                         "inhibit_duration": 2, "rest": 1},
            "letters": GREEK,
            "concepts": ["variant-" + g for g in GREEK],
        },
    }


WORDS = {
    "boy": ("noun", {"pleasant": 2}),
    "baby": ("noun", {"pleasant": 2}),
    "horse": ("noun", {"absurd": 2}),
    "ball": ("noun", {"pleasant": 2}),
    "banana": ("noun", {"pleasant": 2}),
    "tablecloth": ("noun", {"absurd": 2}),
    "duck": ("noun", {"pleasant": 2}),
    "dog": ("noun", {"unpleasant": 2}),
    "kicks": ("transitive-verb", {"pleasant": 2}),
    "pets": ("transitive-verb", {"pleasant": 2}),
    "bites": ("transitive-verb", {"unpleasant": 4}),
    "sews": ("transitive-verb", {"absurd": 2}),
    "eats": ("transitive-verb,intransitive-verb", {"pleasant": 2}),
    "sleeps": ("intransitive-verb", {"pleasant": 4}),
    "runs": ("intransitive-verb", {"pleasant": 4}),
}

STORY_POOL = 4


def svo(s, p, o):
    return {"template": "SVO", "bindings": {"subject": s, "predicate": p, "object": o}}


def sv(s, p):
    return {"template": "SV", "bindings": {"subject": s, "predicate": p}}


CORPUS = [
    {"sentence": "boy kicks ball", "expect": svo("boy", "kicks", "ball"),
     "judgment": "pleasant", "sizes": [2, 1, 1]},
    {"sentence": "baby eats banana", "expect": svo("baby", "eats", "banana"),
     "judgment": "pleasant", "sizes": [2, 2, 1]},
    {"sentence": "baby eats", "expect": sv("baby", "eats"), "sizes": [2, 2]},
    {"sentence": "horse sews tablecloth", "expect": svo("horse", "sews", "tablecloth"),
     "judgment": "absurd"},
    {"sentence": "baby sleeps", "expect": sv("baby", "sleeps"), "judgment": "pleasant"},
    {"sentence": "dog bites boy", "expect": svo("dog", "bites", "boy"),
     "judgment": "unpleasant"},
    {"sentence": "boy pets duck", "expect": svo("boy", "pets", "duck")},
    {"sentence": "duck runs", "expect": sv("duck", "runs")},
    {"sentence": "horse eats tablecloth", "expect": svo("horse", "eats", "tablecloth")},
    {"sentence": "boy", "error": "Incomplete"},
    {"sentence": "boy kicks", "error": "Incomplete"},
    {"sentence": "kicks ball", "error": "NoCandidates"},
    {"sentence": "boy ball", "error": "NoCandidates"},
    {"sentence": "baby sleeps banana", "error": "NoCandidates"},
]


def sentences():
    neurons, edges = [], []
    concepts = sorted(WORDS)
    for w in concepts:
        neurons.append({"name": w, "kind": "threshold", "threshold": 1, "tags": ["concept"]})
    judgments = ["pleasant", "unpleasant", "absurd"]
    winner_class(neurons, edges, judgments, "decision")
    for w in concepts:
        for j, weight in WORDS[w][1].items():
            edges.append({"src": w, "dst": j, "weight": weight, "label": "association"})
    for i in range(STORY_POOL):
        neurons.append({"name": "free-%d" % i, "kind": "threshold", "threshold": 1})
    lexicon = [{"symbol": w, "attributes": {"pos": WORDS[w][0], "concept": w}} for w in concepts]
    templates = [
        {"id": "SVO",
         "roles": [{"name": "subject", "pos": ["noun"]},
                   {"name": "predicate", "pos": ["transitive-verb"]},
                   {"name": "object", "pos": ["noun"]}],
         "language_order": ["subject", "predicate", "object"]},
        {"id": "SV",
         "roles": [{"name": "subject", "pos": ["noun"]},
                   {"name": "predicate", "pos": ["intransitive-verb"]}],
         "language_order": ["subject", "predicate"]},
    ]
    return {
        "neurons": neurons,
        "edges": edges,
        "residual": {"enabled": False, "magnitude_fraction": 0.0, "window": 1},
        "lexicon": lexicon,
        "templates": templates,
        "corpus": CORPUS,
    }


def main():
    OUT.mkdir(exist_ok=True)
    for name, doc in (("greek-virus.json", greek_virus()), ("sentences.json", sentences())):
        (OUT / name).write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
