"""Quick end-to-end check of the Python bindings.

Run after `pip install -e crates/py --no-build-isolation`.
"""

from pathlib import Path

import extdiam

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    block = extdiam.ClumpMatrix.from_text((FIXTURES / "delta4.block").read_text())
    assert block.is_feasible_block(4)
    assert block.block_ratio(4) == "4/7"
    assert block.interior_degree(0, 0) == 4

    d16 = extdiam.ClumpMatrix.from_text((FIXTURES / "delta16.block").read_text())
    assert d16.block_ratio(16) == "31/216"

    r = extdiam.search_chi(5)
    assert r["best_ratio"] == "5/11", r
    assert r["block"].block_ratio(5) == "5/11"

    r = extdiam.search_omega(4, max_period=12)
    assert r["best_ratio"] == "4/7", r
    g = r["graph"]
    assert g.is_k4_free() and g.clique_number() <= 3

    built = extdiam.concatenate(block, 3, 4, cap_ends=True)
    report = extdiam.verify_construction(built, 4, "chi")
    assert report["passed"] and report["min_degree"] >= 4, report
    again = extdiam.Graph.from_graph6(built.graph6())
    assert again.order == built.order == 3 * 7 + 16

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
