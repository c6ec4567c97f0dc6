#!/usr/bin/env python3
"""Regenerates data/sample_headlines.json.

Synthetic corpus of 200 scored headlines. Each title is built from a small
template grammar; its sentiment is the sum of the planted weights of the
sentiment-bearing words plus Gaussian noise (sigma = 0.05), clamped to [-1, 1].
Deterministic: fixed seed, stable iteration order.
"""

import json
import math
import random

SEED = 20170405
NOISE_SIGMA = 0.05

COMPANIES = ["Acme", "Globex", "Initech", "Umbrella", "Vandelay", "Hooli", "Wayne", "Stark"]

VERBS = [
    ("soars", 0.55), ("surges", 0.5), ("jumps", 0.45), ("rallies", 0.4),
    ("climbs", 0.3), ("rises", 0.25), ("steadies", 0.0), ("drifts", 0.0),
    ("slips", -0.25), ("falls", -0.3), ("drops", -0.35), ("slides", -0.4),
    ("tumbles", -0.5), ("plunges", -0.55),
]

ADJECTIVES = [
    ("record", 0.3), ("strong", 0.25), ("solid", 0.15), ("mixed", 0.0),
    ("soft", -0.15), ("weak", -0.2), ("dismal", -0.3),
]

NOUNS = ["profit", "revenue", "outlook", "demand"]

TEMPLATES = [
    "{c} shares {v} after {a} {n} report",
    "{c} stock {v} on {a} {n}",
]


def main() -> None:
    rng = random.Random(SEED)
    records = []
    for i in range(200):
        company = COMPANIES[i % len(COMPANIES)]
        verb, wv = VERBS[rng.randrange(len(VERBS))]
        adj, wa = ADJECTIVES[rng.randrange(len(ADJECTIVES))]
        noun = NOUNS[rng.randrange(len(NOUNS))]
        template = TEMPLATES[rng.randrange(len(TEMPLATES))]
        title = template.format(c=company, v=verb, a=adj, n=noun)
        score = wv + wa + rng.gauss(0.0, NOISE_SIGMA)
        score = max(-1.0, min(1.0, score))
        records.append(
            {
                "id": f"h{i:03d}",
                "company": company,
                "title": title,
                "sentiment": round(score, 6),
            }
        )
    with open("data/sample_headlines.json", "w", encoding="utf-8") as out:
        json.dump(records, out, indent=2)
        out.write("\n")
    spread = [r["sentiment"] for r in records]
    mean = sum(spread) / len(spread)
    var = sum((s - mean) ** 2 for s in spread) / len(spread)
    print(f"wrote {len(records)} records, score mean {mean:.4f}, std {math.sqrt(var):.4f}")


if __name__ == "__main__":
    main()
