"""Regenerates metric_reference.jsonl with segeval (pip install segeval).

Boundary j sits after utterance j (0-based). Each record carries the boundary
sets, the utterance count and segeval's outputs; the C++ tests compare against
these frozen values.
"""
import json
import random

import segeval


def masses(boundaries, utterances):
    out, start = [], 0
    for b in boundaries:
        out.append(b + 1 - start)
        start = b + 1
    out.append(utterances - start)
    return out


def sample(rng, utterances):
    gaps = list(range(utterances - 1))
    k = rng.randint(0, min(len(gaps), max(1, utterances // 3)))
    return sorted(rng.sample(gaps, k))


def main():
    rng = random.Random(20240601)
    with open("metric_reference.jsonl", "w") as f:
        for case in range(300):
            u = rng.randint(2, 60)
            ref = sample(rng, u)
            if case % 3 == 0:
                # near misses: jitter the reference
                hyp = sorted({min(u - 2, max(0, b + rng.randint(-3, 3))) for b in ref})
            else:
                hyp = sample(rng, u)
            if not hyp and not ref:
                continue  # segeval raises here; the C++ side defines BS = 1
            n_t = 2 + case % 3
            h, r = masses(hyp, u), masses(ref, u)
            rec = {
                "utterances": u,
                "hyp": hyp,
                "ref": ref,
                "n_t": n_t,
                "bs": float(segeval.boundary_similarity(h, r, n_t=n_t)),
            }
            # segeval divides by (U - k) for WindowDiff; keep k < U.
            k = segeval.compute_window_size(r)
            if u > k:
                rec["pk"] = float(segeval.pk(h, r))
                rec["window_diff"] = float(segeval.window_diff(h, r))
            if u > 3:
                rec["pk_w3"] = float(segeval.pk(h, r, window_size=3))
                rec["window_diff_w3"] = float(segeval.window_diff(h, r, window_size=3))
            f.write(json.dumps(rec) + "\n")


if __name__ == "__main__":
    main()
