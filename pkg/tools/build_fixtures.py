"""Regenerate the shipped Kochen-Specker ray-set files from their coordinates."""

from pathlib import Path

from wignerkit.io import dump_json, hypergraph_to_json
from wignerkit.measure import build_hypergraph, cabello18_vectors, peres33_vectors

DATA = Path(__file__).resolve().parents[1] / "src" / "wignerkit" / "data"

if __name__ == "__main__":
    for name, vecs, d in [("peres33", peres33_vectors(), 3), ("cabello18", cabello18_vectors(), 4)]:
        h = build_hypergraph(vecs, d)
        dump_json(hypergraph_to_json(h), DATA / f"{name}.json")
        print(f"{name}: {h.size} rays, {len(h.contexts)} contexts, {len(h.edges)} edges")
