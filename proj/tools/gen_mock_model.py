#!/usr/bin/env python3
"""Regenerates data/mock_model.json, the trigram table behind the mock server.

The table is synthetic: a Zipf-flavored unigram base, noisy bigram logits
with a few strong successor links so low-temperature decoding follows
phrase-like chains, and sparse trigram boosts. Rerunning the script is
byte-stable (fixed RNG seed, fixed rounding).
"""

import json
import pathlib
import random

VOCAB = [
    "the", "a", "of", "and", "to", "in", "is", "that", "it", "was",
    "for", "on", "with", "as", "he", "she", "they", "at", "by", "from",
    "this", "we", "you", "or", "an", "be", "are", "not", "have", "but",
    "had", "his", "her", "its", "one", "all", "their", "there", "when", "up",
    "out", "if", "about", "who", "get", "which", "go", "me", "time", "then",
    "no", "just", "him", "know", "take", "people", "into", "year", "your", "good",
    "some", "could", "them", "see",
]

V = len(VOCAB)
assert V == 64, V


def main() -> None:
    rng = random.Random(7)

    unigram = [round(2.0 - 1.8 * i / (V - 1) + rng.uniform(-0.3, 0.3), 4) for i in range(V)]

    bigram = []
    for h in range(V):
        row = [round(unigram[i] + rng.gauss(0.0, 0.8), 4) for i in range(V)]
        # A few strong successors per token keep greedy decoding phrase-like;
        # the self-transition is damped so greedy chains do not get stuck.
        for boost in (2.5, 1.8, 1.2):
            j = rng.randrange(V)
            while j == h:
                j = rng.randrange(V)
            row[j] = round(row[j] + boost, 4)
        row[h] = round(row[h] - 3.0, 4)
        bigram.append(row)

    trigram = []
    seen = set()
    while len(trigram) < 200:
        a, b, c = rng.randrange(V), rng.randrange(V), rng.randrange(V)
        if (a, b, c) in seen:
            continue
        seen.add((a, b, c))
        trigram.append([a, b, c, round(rng.uniform(1.0, 3.0), 4)])
    trigram.sort()

    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "mock_model.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w") as f:
        json.dump({"vocab": VOCAB, "unigram": unigram, "bigram": bigram, "trigram": trigram},
                  f, separators=(",", ":"))
        f.write("\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
